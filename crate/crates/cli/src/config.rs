//! Experiment configuration: a flat TOML file, overridable from the command
//! line.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use pathcover_core::classifier::Thresholds;
use pathcover_core::expander::default_cap;
use pathcover_core::pipeline::PipelineConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Largest n for which the exact path cover number is computed.
pub const ORACLE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Checks that decide the exit status of `run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// Every cover passes verification.
    Cover,
    /// The cover is never smaller than the exact path cover number.
    Oracle,
    /// Classifier set sizes stay under their slacked bounds.
    Properties,
    /// Mean cover size over the degree bound is at most `max_ratio` for every
    /// c and non-increasing in c.
    Ratio,
    /// The Hamilton M-cycle search succeeds in at least `min_success` of trials.
    Success,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    /// One sweep per value.
    pub c: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Threshold overrides; unset values follow `Thresholds::for_c`.
    pub small_deg: Option<usize>,
    pub large_deg: Option<usize>,
    pub close_radius: Option<usize>,
    pub gamma_cap: Option<usize>,
    /// Booster budget per attempt; unset means |V(G*)|.
    pub budget: Option<usize>,
    pub retries: usize,
    /// Compute the exact path cover number when n ≤ 16.
    pub oracle: bool,
    pub checks: Vec<Check>,
    /// Multiplier on the classifier set-size bounds.
    pub slack: f64,
    pub max_ratio: f64,
    pub min_success: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 10_000,
            c: vec![8.0],
            trials: 10,
            seed: 0,
            small_deg: None,
            large_deg: None,
            close_radius: None,
            gamma_cap: None,
            budget: None,
            retries: 3,
            oracle: false,
            checks: vec![Check::Cover],
            slack: 10.0,
            max_ratio: 1.5,
            min_success: 0.99,
            out: None,
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|source| CliError::Toml {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.c.is_empty() {
            return fail("at least one value of c is required".into());
        }
        for &c in &self.c {
            if !(c.is_finite() && c > 0.0 && c <= self.n as f64) {
                return fail(format!("c = {c} must lie in (0, n]"));
            }
        }
        if self.retries > 100 {
            return fail("retries must be at most 100".into());
        }
        if self.gamma_cap == Some(0) {
            return fail("gamma_cap must be at least 1".into());
        }
        if self.budget == Some(0) {
            return fail("budget must be at least 1".into());
        }
        if !(self.slack.is_finite() && self.slack > 0.0) {
            return fail("slack must be positive".into());
        }
        if !(self.max_ratio.is_finite() && self.max_ratio > 0.0) {
            return fail("max_ratio must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.min_success) {
            return fail("min_success must lie in [0, 1]".into());
        }
        for &c in &self.c {
            self.thresholds(c).validate()?;
        }
        Ok(())
    }

    pub fn thresholds(&self, c: f64) -> Thresholds {
        let base = Thresholds::for_c(c);
        Thresholds {
            small_deg: self.small_deg.unwrap_or(base.small_deg),
            large_deg: self.large_deg.unwrap_or(base.large_deg),
            close_radius: self.close_radius.unwrap_or(base.close_radius),
        }
    }

    pub fn pipeline(&self, c: f64) -> PipelineConfig {
        PipelineConfig {
            thresholds: self.thresholds(c),
            gamma_cap: self.gamma_cap.unwrap_or_else(|| default_cap(c)),
            budget: self.budget,
            retries: self.retries,
            ..PipelineConfig::for_c(c)
        }
    }

    pub fn total_trials(&self) -> usize {
        self.c.len() * self.trials
    }

    /// The c value of a global trial index; trials are grouped by c.
    pub fn c_of(&self, index: usize) -> f64 {
        self.c[index / self.trials]
    }

    pub fn has_check(&self, check: Check) -> bool {
        self.checks.contains(&check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_files() {
        let cfg = ExperimentConfig::from_toml(
            "n = 500\nc = [5, 6.5]\nchecks = [\"cover\", \"ratio\"]\nformat = \"json\"\n",
            Path::new("x.toml"),
        )
        .unwrap();
        assert_eq!(cfg.n, 500);
        assert_eq!(cfg.c, vec![5.0, 6.5]);
        assert_eq!(cfg.checks, vec![Check::Cover, Check::Ratio]);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.trials, ExperimentConfig::default().trials);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ExperimentConfig::from_toml("nn = 3\n", Path::new("x.toml")).is_err());
    }

    #[test]
    fn validation() {
        let ok = ExperimentConfig::default();
        ok.validate().unwrap();
        let bad = [
            ExperimentConfig {
                trials: 0,
                ..ok.clone()
            },
            ExperimentConfig { n: 0, ..ok.clone() },
            ExperimentConfig {
                c: vec![],
                ..ok.clone()
            },
            ExperimentConfig {
                c: vec![-1.0],
                ..ok.clone()
            },
            ExperimentConfig {
                c: vec![f64::NAN],
                ..ok.clone()
            },
            ExperimentConfig {
                small_deg: Some(1),
                ..ok.clone()
            },
            ExperimentConfig {
                close_radius: Some(0),
                ..ok.clone()
            },
            ExperimentConfig {
                min_success: 1.5,
                ..ok.clone()
            },
            ExperimentConfig {
                gamma_cap: Some(0),
                ..ok.clone()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn overrides_reach_the_pipeline() {
        let cfg = ExperimentConfig {
            small_deg: Some(3),
            gamma_cap: Some(7),
            retries: 1,
            ..Default::default()
        };
        let p = cfg.pipeline(8.0);
        assert_eq!(p.thresholds.small_deg, 3);
        assert_eq!(p.thresholds.large_deg, 160);
        assert_eq!(p.gamma_cap, 7);
        assert_eq!(p.retries, 1);
    }

    #[test]
    fn trial_grouping() {
        let cfg = ExperimentConfig {
            c: vec![5.0, 6.0],
            trials: 3,
            ..Default::default()
        };
        assert_eq!(cfg.total_trials(), 6);
        assert_eq!(cfg.c_of(2), 5.0);
        assert_eq!(cfg.c_of(3), 6.0);
    }
}
