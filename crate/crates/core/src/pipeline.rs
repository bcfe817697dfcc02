//! One instance end to end: classify, reduce, grow a Hamilton M-cycle of G*
//! and translate it into a path cover of G.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::classifier::{classify, Classification, ClassificationSummary, Thresholds};
use crate::cover::{
    cover_from_cycle, cover_from_paths, extract_cover, mu_gap, trivial_cover, verify_cover, MuGap,
    PathCover,
};
use crate::error::Result;
use crate::expander::{build_gamma0, default_cap};
use crate::graph::{Graph, VertexSet};
use crate::hamilton::{
    contract_forced_chains, forced_edge_obstruction, hamilton_m_cycle, m_path_partition,
    repair_obstructions, restrict_matching, HamiltonOutcome, HamiltonParams, Obstruction,
    PivotRule,
};
use crate::reducer::{build_gstar, connected_two_core, Reduction, ReductionSummary};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub thresholds: Thresholds,
    pub gamma_cap: usize,
    /// Booster budget per attempt; `None` means |V(G*)|.
    pub budget: Option<usize>,
    /// Extra attempts with a fresh Γ₀ after a failed one.
    pub retries: usize,
    pub candidate_limit: usize,
}

impl PipelineConfig {
    pub fn for_c(c: f64) -> Self {
        Self {
            thresholds: Thresholds::for_c(c),
            gamma_cap: default_cap(c),
            budget: None,
            retries: 3,
            candidate_limit: HamiltonParams::for_size(1).candidate_limit,
        }
    }
}

/// Wall-clock time per stage. Kept apart from the deterministic results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub classify: Duration,
    pub reduce: Duration,
    pub gamma: Duration,
    pub hamilton: Duration,
    pub cover: Duration,
}

/// How the cover was obtained when G* yielded no Hamilton M-cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fallback {
    /// A Hamilton M-cycle of G* minus the listed vertices (G* labels), which
    /// are covered by further paths.
    RepairedCycle { removed: Vec<usize> },
    /// Vertex-disjoint paths of G*, the first being the longest path found.
    PathPartition { paths: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub classes: ClassificationSummary,
    pub c2: usize,
    pub reduction: ReductionSummary,
    /// Edge count of the last Γ₀ built.
    pub gamma_edges: usize,
    pub attempts: usize,
    /// Boosters absorbed by the last attempt.
    pub boosters: usize,
    pub success: bool,
    pub obstruction: Option<Obstruction>,
    pub fallback: Option<Fallback>,
    pub cover: PathCover,
    pub cover_valid: bool,
    pub gap: MuGap,
}

pub struct PipelineRun {
    pub result: PipelineResult,
    pub classification: Classification,
    pub reduction: Reduction,
    pub timings: StageTimings,
}

/// Runs the construction on `g`. `c` only enters the reported target
/// ½ce⁻ᶜn; `seed` drives the Γ₀ selections.
pub fn solve(g: &Graph, c: f64, config: &PipelineConfig, seed: u64) -> Result<PipelineRun> {
    config.thresholds.validate()?;
    let mut timings = StageTimings::default();

    let clock = Instant::now();
    let classification = classify(g, &config.thresholds);
    timings.classify = clock.elapsed();

    let clock = Instant::now();
    let c2 = connected_two_core(g);
    let reduction = build_gstar(g, &classification, &c2);
    timings.reduce = clock.elapsed();

    let gstar = &reduction.gstar;
    let k = gstar.n();
    let params = HamiltonParams {
        budget: config.budget.unwrap_or(k.max(1)),
        candidate_limit: config.candidate_limit,
        pivots: PivotRule::Unmatched,
    };
    let obstruction = forced_edge_obstruction(gstar, &reduction.m);
    let attempts_allowed = if obstruction.is_some() {
        1
    } else {
        config.retries + 1
    };

    let mut attempts = 0;
    let mut gamma_edges = 0;
    let mut outcome = None;
    if k >= 3 {
        while attempts < attempts_allowed {
            let clock = Instant::now();
            let gamma = build_gamma0(
                gstar,
                &reduction.m,
                &reduction.small_gstar,
                config.gamma_cap,
                derive_seed(seed, attempts as u64),
            )?;
            timings.gamma += clock.elapsed();
            gamma_edges = gamma.graph.m();
            attempts += 1;

            let clock = Instant::now();
            let current = hamilton_m_cycle(gstar, &reduction.m, &gamma.graph, params);
            timings.hamilton += clock.elapsed();
            let done = current.is_success();
            outcome = Some(current);
            if done {
                break;
            }
        }
    }

    let clock = Instant::now();
    let (cover, fallback) = match &outcome {
        Some(HamiltonOutcome::Success(s)) => (extract_cover(g, &reduction, &s.cycle)?, None),
        Some(HamiltonOutcome::Failure(f)) => {
            let first_seed = (config.retries + 1) as u64;
            let repaired =
                repaired_search(&reduction, config, params, seed, first_seed, &mut timings)?;
            match repaired {
                Repaired::Cycle { cycle, removed } => {
                    let others = m_path_partition(gstar, &reduction.m, &cycle).split_off(1);
                    let cover = cover_from_cycle(g, &reduction, &cycle, &others)?;
                    (cover, Some(Fallback::RepairedCycle { removed }))
                }
                Repaired::Path(path) => {
                    let first = if path.len() > f.longest_path.len() {
                        &path
                    } else {
                        &f.longest_path
                    };
                    let paths = m_path_partition(gstar, &reduction.m, first);
                    let fallback = Fallback::PathPartition { paths: paths.len() };
                    (cover_from_paths(g, &reduction, &paths)?, Some(fallback))
                }
            }
        }
        None => (trivial_cover(g), None),
    };
    let cover_valid = verify_cover(g, &cover).is_valid();
    let gap = mu_gap(g, &cover, c);
    timings.cover = clock.elapsed();

    let result = PipelineResult {
        classes: classification.summary(false),
        c2: c2.len(),
        reduction: reduction.summary(),
        gamma_edges,
        attempts,
        boosters: outcome.as_ref().map_or(0, |o| o.boosters().len()),
        success: outcome.as_ref().is_some_and(HamiltonOutcome::is_success),
        obstruction,
        fallback,
        cover,
        cover_valid,
        gap,
    };
    Ok(PipelineRun {
        result,
        classification,
        reduction,
        timings,
    })
}

enum Repaired {
    Cycle {
        cycle: Vec<usize>,
        removed: Vec<usize>,
    },
    /// Longest path found instead (G* labels, possibly empty).
    Path(Vec<usize>),
}

/// Deletes obstructing vertices from G*, contracts the forced chains of the
/// rest and searches the result for a Hamilton M-cycle, with the same retry
/// allowance. Rotations may pivot on matched vertices here since chain ends
/// make up most of the contracted graph.
fn repaired_search(
    reduction: &Reduction,
    config: &PipelineConfig,
    params: HamiltonParams,
    seed: u64,
    first_seed: u64,
    timings: &mut StageTimings,
) -> Result<Repaired> {
    let gstar = &reduction.gstar;
    let removed = repair_obstructions(gstar, &reduction.m);
    let alive = VertexSet::full(gstar.n()).difference(&VertexSet::from_vertices(
        gstar.n(),
        removed.iter().copied(),
    ));
    let (sub, sub_to_old) = gstar.induced(&alive);
    let sub_m = restrict_matching(&reduction.m, &sub_to_old);
    let Ok(contraction) = contract_forced_chains(&sub, &sub_m) else {
        return Ok(Repaired::Path(Vec::new()));
    };
    let h = &contraction.graph;
    if h.n() < 3 {
        return Ok(Repaired::Path(Vec::new()));
    }
    let to_gstar = |v: usize| sub_to_old[contraction.to_old[v]];
    let small = VertexSet::from_vertices(
        h.n(),
        (0..h.n()).filter(|&v| reduction.small_gstar.contains(to_gstar(v))),
    );
    let params = HamiltonParams {
        budget: config.budget.unwrap_or(h.n()),
        pivots: PivotRule::KeepsMEdges,
        ..params
    };
    let mut longest: Vec<usize> = Vec::new();
    for attempt in 0..=config.retries as u64 {
        let clock = Instant::now();
        let gamma = build_gamma0(
            h,
            &contraction.m,
            &small,
            config.gamma_cap,
            derive_seed(seed, first_seed + attempt),
        )?;
        timings.gamma += clock.elapsed();
        let clock = Instant::now();
        let outcome = hamilton_m_cycle(h, &contraction.m, &gamma.graph, params);
        timings.hamilton += clock.elapsed();
        match outcome {
            HamiltonOutcome::Success(s) => {
                let cycle = contraction
                    .expand(&s.cycle, true)
                    .into_iter()
                    .map(|v| sub_to_old[v])
                    .collect();
                return Ok(Repaired::Cycle { cycle, removed });
            }
            HamiltonOutcome::Failure(f) => {
                let path: Vec<usize> = contraction
                    .expand(&f.longest_path, false)
                    .into_iter()
                    .map(|v| sub_to_old[v])
                    .collect();
                if path.len() > longest.len() {
                    longest = path;
                }
            }
        }
    }
    Ok(Repaired::Path(longest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_gnp, SampleParams};

    #[test]
    fn small_graphs_always_get_a_valid_cover() {
        for seed in 0..50 {
            let g = sample_gnp(&SampleParams::new(12, 3.0, seed)).unwrap();
            let run = solve(&g, 3.0, &PipelineConfig::for_c(3.0), seed).unwrap();
            assert!(run.result.cover_valid, "seed {seed}");
            assert!(run.result.cover.size() >= 1);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = sample_gnp(&SampleParams::new(2000, 8.0, 3)).unwrap();
        let a = solve(&g, 8.0, &PipelineConfig::for_c(8.0), 9)
            .unwrap()
            .result;
        let b = solve(&g, 8.0, &PipelineConfig::for_c(8.0), 9)
            .unwrap()
            .result;
        assert_eq!(a, b);
        assert!(a.cover_valid);
    }

    #[test]
    fn fallbacks_give_valid_covers() {
        let mut fallbacks = 0;
        for seed in 0..6 {
            let g = sample_gnp(&SampleParams::new(3000, 6.0, seed)).unwrap();
            let r = solve(&g, 6.0, &PipelineConfig::for_c(6.0), seed)
                .unwrap()
                .result;
            assert!(r.cover_valid, "seed {seed}");
            assert_eq!(r.success, r.fallback.is_none());
            assert!(r.cover.size() >= r.gap.lower_bound);
            fallbacks += usize::from(r.fallback.is_some());
        }
        assert!(fallbacks > 0);
    }

    #[test]
    fn rejects_bad_thresholds() {
        let mut config = PipelineConfig::for_c(8.0);
        config.thresholds.small_deg = 0;
        assert!(solve(&Graph::cycle(5), 8.0, &config, 0).is_err());
    }
}
