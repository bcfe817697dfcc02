//! One trial: sample, run the pipeline, measure.

use std::time::{Duration, Instant};

use pathcover_core::analytics::Observation;
use pathcover_core::classifier::{check_properties, PropertyTolerances};
use pathcover_core::cover::exact_mu;
use pathcover_core::graph::{sample_gnp, SampleParams};
use pathcover_core::hamilton::Obstruction;
use pathcover_core::pipeline::{solve, Fallback};
use pathcover_core::rng::derive_seed;
use serde::{Deserialize, Serialize};

use crate::config::{Check, ExperimentConfig, ORACLE_LIMIT};

/// The deterministic part of a trial: a pure function of the configuration
/// and the trial index.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub n: usize,
    pub c: f64,
    pub seed: u64,
    pub v0: usize,
    pub v1: usize,
    pub small: usize,
    pub large: usize,
    pub close: usize,
    pub bad: usize,
    pub c2: usize,
    pub gstar: usize,
    pub m_edges: usize,
    pub attempts: usize,
    pub boosters: usize,
    pub success: bool,
    pub obstruction: Option<String>,
    pub fallback: Option<String>,
    pub cover_size: usize,
    pub cover_valid: bool,
    pub lower_bound: usize,
    pub target: f64,
    /// Cover size over max(1, |V₀| + ⌈|V₁|/2⌉).
    pub ratio: f64,
    pub exact_mu: Option<usize>,
    /// Outcome of the classifier set-size checks, when enabled.
    pub properties_passed: Option<bool>,
    pub error: Option<String>,
}

/// Wall-clock milliseconds per stage, reported separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialTimings {
    pub trial: usize,
    pub sample_ms: f64,
    pub classify_ms: f64,
    pub reduce_ms: f64,
    pub gamma_ms: f64,
    pub hamilton_ms: f64,
    pub cover_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub report: TrialReport,
    pub timings: TrialTimings,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn obstruction_kind(o: &Obstruction) -> String {
    match o {
        Obstruction::LowDegree { .. } => "low_degree",
        Obstruction::OverForced { .. } => "over_forced",
        Obstruction::ShortForcedCycle { .. } => "short_forced_cycle",
        Obstruction::Disconnected { .. } => "disconnected",
        Obstruction::Separable { .. } => "separable",
    }
    .to_string()
}

fn fallback_kind(f: &Fallback) -> String {
    match f {
        Fallback::RepairedCycle { removed } => format!("repaired_cycle:{}", removed.len()),
        Fallback::PathPartition { paths } => format!("path_partition:{paths}"),
    }
}

/// Runs trial `index` of `cfg`. Stage errors end up in `error` rather than
/// aborting the experiment.
pub fn run_trial(cfg: &ExperimentConfig, index: usize) -> TrialOutcome {
    let c = cfg.c_of(index);
    let seed = derive_seed(cfg.seed, index as u64);
    let mut report = TrialReport {
        trial: index,
        n: cfg.n,
        c,
        seed,
        ..Default::default()
    };
    let mut timings = TrialTimings {
        trial: index,
        ..Default::default()
    };
    let start = Instant::now();

    let g = match sample_gnp(&SampleParams::new(cfg.n, c, seed)) {
        Ok(g) => g,
        Err(e) => {
            report.error = Some(e.to_string());
            return TrialOutcome { report, timings };
        }
    };
    timings.sample_ms = ms(start.elapsed());

    let run = match solve(&g, c, &cfg.pipeline(c), seed) {
        Ok(run) => run,
        Err(e) => {
            report.error = Some(e.to_string());
            return TrialOutcome { report, timings };
        }
    };
    let r = &run.result;
    report.v0 = r.classes.v0;
    report.v1 = r.classes.v1;
    report.small = r.classes.small;
    report.large = r.classes.large;
    report.close = r.classes.close;
    report.bad = r.classes.bad;
    report.c2 = r.c2;
    report.gstar = r.reduction.gstar_vertices;
    report.m_edges = r.reduction.m_edges;
    report.attempts = r.attempts;
    report.boosters = r.boosters;
    report.success = r.success;
    report.obstruction = r.obstruction.as_ref().map(obstruction_kind);
    report.fallback = r.fallback.as_ref().map(fallback_kind);
    report.cover_size = r.gap.cover_size;
    report.cover_valid = r.cover_valid;
    report.lower_bound = r.gap.lower_bound;
    report.target = r.gap.target;
    report.ratio = r.gap.ratio_to_lower_bound;

    if cfg.oracle && cfg.n <= ORACLE_LIMIT {
        match exact_mu(&g) {
            Ok(mu) => report.exact_mu = Some(mu),
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    if cfg.has_check(Check::Properties) {
        let tol = PropertyTolerances {
            slack: cfg.slack,
            ..Default::default()
        };
        let props = check_properties(&g, &run.classification, c, &tol);
        let passed = ["P2_small", "P4_close", "BAD"]
            .iter()
            .all(|name| props.get(name).is_some_and(|p| p.passed));
        report.properties_passed = Some(passed);
    }

    let t = run.timings;
    timings.classify_ms = ms(t.classify);
    timings.reduce_ms = ms(t.reduce);
    timings.gamma_ms = ms(t.gamma);
    timings.hamilton_ms = ms(t.hamilton);
    timings.cover_ms = ms(t.cover);
    timings.total_ms = ms(start.elapsed());
    TrialOutcome { report, timings }
}

impl TrialReport {
    /// Named values fed to the aggregation, with their per-trial checks.
    pub fn observations(&self) -> Vec<Observation> {
        let mut obs = vec![
            Observation::new("v0", self.v0 as f64),
            Observation::new("v1", self.v1 as f64),
            Observation::new("small", self.small as f64),
            Observation::new("large", self.large as f64),
            Observation::new("close", self.close as f64),
            Observation::new("bad", self.bad as f64),
            Observation::new("c2", self.c2 as f64),
            Observation::new("gstar", self.gstar as f64),
            Observation::new("m_edges", self.m_edges as f64),
            Observation::new("boosters", self.boosters as f64),
            Observation::checked("success", f64::from(u8::from(self.success)), self.success),
            Observation::checked("cover_size", self.cover_size as f64, self.cover_valid),
            Observation::new("lower_bound", self.lower_bound as f64),
            Observation::new("target", self.target),
            Observation::new("ratio", self.ratio),
        ];
        if let Some(mu) = self.exact_mu {
            obs.push(Observation::checked(
                "exact_mu",
                mu as f64,
                self.cover_size >= mu,
            ));
        }
        if let Some(passed) = self.properties_passed {
            obs.push(Observation::checked(
                "properties",
                f64::from(u8::from(passed)),
                passed,
            ));
        }
        obs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_reproducible() {
        let cfg = ExperimentConfig {
            n: 1000,
            c: vec![6.0],
            seed: 7,
            ..Default::default()
        };
        let a = run_trial(&cfg, 0).report;
        let b = run_trial(&cfg, 0).report;
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_ne!(run_trial(&cfg, 1).report.seed, a.seed);
        assert!(a.cover_valid);
        assert!(a.error.is_none());
    }

    #[test]
    fn oracle_only_on_small_graphs() {
        let small = ExperimentConfig {
            n: 12,
            c: vec![3.0],
            oracle: true,
            ..Default::default()
        };
        let r = run_trial(&small, 0).report;
        let mu = r.exact_mu.unwrap();
        assert!(r.cover_size >= mu);
        let large = ExperimentConfig { n: 40, ..small };
        assert_eq!(run_trial(&large, 0).report.exact_mu, None);
    }

    #[test]
    fn stage_errors_are_captured() {
        let cfg = ExperimentConfig {
            n: 5,
            c: vec![8.0],
            ..Default::default()
        };
        let r = run_trial(&cfg, 0).report;
        assert!(r.error.is_some());
        assert_eq!(r.cover_size, 0);
    }

    #[test]
    fn observations_carry_checks() {
        let r = TrialReport {
            success: true,
            cover_size: 3,
            cover_valid: true,
            exact_mu: Some(4),
            ..Default::default()
        };
        let obs = r.observations();
        let mu = obs.iter().find(|o| o.quantity == "exact_mu").unwrap();
        assert_eq!(mu.passed, Some(false));
        let s = obs.iter().find(|o| o.quantity == "success").unwrap();
        assert_eq!((s.value, s.passed), (1.0, Some(true)));
    }
}
