//! Multi-trial sweeps, aggregation, checks and report files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use pathcover_core::analytics::{aggregate_trials, QuantitySummary};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Check, ExperimentConfig, Format};
use crate::error::{CliError, Result};
use crate::report::{run_trial, TrialOutcome, TrialReport, TrialTimings};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub c: f64,
    pub quantities: Vec<QuantitySummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub c: Option<f64>,
    pub passed: bool,
    pub detail: String,
}

/// Everything `run` produces except the timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialReport>,
    pub summaries: Vec<GroupSummary>,
    pub checks: Vec<CheckOutcome>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub struct Experiment {
    pub report: ExperimentReport,
    pub timings: Vec<TrialTimings>,
}

/// Runs every trial of `cfg`. Results are ordered by trial index whatever
/// the execution mode.
pub fn run_experiment(cfg: &ExperimentConfig, execution: Execution) -> Result<Experiment> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = match execution {
        Execution::Serial => (0..cfg.total_trials()).map(|i| run_trial(cfg, i)).collect(),
        Execution::Parallel => (0..cfg.total_trials())
            .into_par_iter()
            .map(|i| run_trial(cfg, i))
            .collect(),
    };
    let (trials, timings): (Vec<_>, Vec<_>) =
        outcomes.into_iter().map(|o| (o.report, o.timings)).unzip();
    let summaries = summarize(cfg, &trials)?;
    let checks = evaluate_checks(cfg, &trials, &summaries);
    Ok(Experiment {
        report: ExperimentReport {
            config: cfg.clone(),
            trials,
            summaries,
            checks,
        },
        timings,
    })
}

fn summarize(cfg: &ExperimentConfig, trials: &[TrialReport]) -> Result<Vec<GroupSummary>> {
    trials
        .chunks(cfg.trials)
        .map(|group| {
            let observations: Vec<_> = group.iter().map(TrialReport::observations).collect();
            Ok(GroupSummary {
                c: group[0].c,
                quantities: aggregate_trials(&observations)?,
            })
        })
        .collect()
}

fn mean_of(summary: &GroupSummary, quantity: &str) -> f64 {
    summary
        .quantities
        .iter()
        .find(|q| q.quantity == quantity)
        .map_or(f64::NAN, |q| q.mean)
}

pub fn evaluate_checks(
    cfg: &ExperimentConfig,
    trials: &[TrialReport],
    summaries: &[GroupSummary],
) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let count = |pred: &dyn Fn(&TrialReport) -> bool| trials.iter().filter(|t| pred(t)).count();
    for &check in &cfg.checks {
        match check {
            Check::Cover => {
                let bad = count(&|t| t.error.is_some() || !t.cover_valid);
                out.push(CheckOutcome {
                    check,
                    c: None,
                    passed: bad == 0,
                    detail: format!("{bad} of {} covers invalid or missing", trials.len()),
                });
            }
            Check::Oracle => {
                let compared = count(&|t| t.exact_mu.is_some());
                let below = count(&|t| t.exact_mu.is_some_and(|mu| t.cover_size < mu));
                out.push(CheckOutcome {
                    check,
                    c: None,
                    passed: compared == trials.len() && below == 0,
                    detail: format!(
                        "{compared} of {} trials compared, {below} below the exact value",
                        trials.len()
                    ),
                });
            }
            Check::Properties => {
                let failed = count(&|t| t.properties_passed != Some(true));
                out.push(CheckOutcome {
                    check,
                    c: None,
                    passed: failed == 0,
                    detail: format!("{failed} of {} trials over the bounds", trials.len()),
                });
            }
            Check::Ratio => {
                let mut previous = f64::INFINITY;
                for s in summaries {
                    let ratio = mean_of(s, "ratio");
                    let monotone = ratio <= previous;
                    out.push(CheckOutcome {
                        check,
                        c: Some(s.c),
                        passed: ratio <= cfg.max_ratio && monotone,
                        detail: format!(
                            "mean ratio {ratio:.4} (limit {}, previous {previous:.4})",
                            cfg.max_ratio
                        ),
                    });
                    previous = ratio;
                }
            }
            Check::Success => {
                for s in summaries {
                    let rate = mean_of(s, "success");
                    out.push(CheckOutcome {
                        check,
                        c: Some(s.c),
                        passed: rate >= cfg.min_success,
                        detail: format!("success rate {rate:.4} (need {})", cfg.min_success),
                    });
                }
            }
        }
    }
    out
}

const PROBE: &str = ".pathcover-write-test";

/// Creates `dir` and checks that it accepts files.
pub fn prepare_output(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let probe = dir.join(PROBE);
    fs::write(&probe, b"").map_err(|e| CliError::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| CliError::io(&probe, e))
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    c: f64,
    quantity: &'a str,
    count: usize,
    mean: f64,
    std_dev: f64,
    min: f64,
    max: f64,
    pass_rate: Option<f64>,
}

fn summary_rows(summaries: &[GroupSummary]) -> impl Iterator<Item = SummaryRow<'_>> {
    summaries.iter().flat_map(|s| {
        s.quantities.iter().map(move |q| SummaryRow {
            c: s.c,
            quantity: &q.quantity,
            count: q.count,
            mean: q.mean,
            std_dev: q.std_dev,
            min: q.min,
            max: q.max,
            pass_rate: q.pass_rate,
        })
    })
}

fn csv_bytes<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner()
        .map_err(|e| CliError::io("<buffer>", e.into_error()))
}

/// File name and contents of each deterministic report.
pub fn render(report: &ExperimentReport, format: Format) -> Result<Vec<(&'static str, Vec<u8>)>> {
    Ok(match format {
        Format::Csv => vec![
            ("trials.csv", csv_bytes(&report.trials)?),
            ("summary.csv", csv_bytes(summary_rows(&report.summaries))?),
            ("checks.csv", csv_bytes(&report.checks)?),
        ],
        Format::Json => {
            let mut text = serde_json::to_vec_pretty(report)?;
            text.push(b'\n');
            vec![("report.json", text)]
        }
    })
}

pub fn render_timings(timings: &[TrialTimings], format: Format) -> Result<(&'static str, Vec<u8>)> {
    Ok(match format {
        Format::Csv => ("timings.csv", csv_bytes(timings)?),
        Format::Json => ("timings.json", serde_json::to_vec_pretty(timings)?),
    })
}

/// Writes the reports and timings into `dir`, returning the paths written.
pub fn write_reports(experiment: &Experiment, dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let mut files = render(&experiment.report, format)?;
    files.push(render_timings(&experiment.timings, format)?);
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        let mut file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        file.write_all(&bytes).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            n: 300,
            c: vec![4.0, 6.0],
            trials,
            seed: 5,
            checks: vec![Check::Cover, Check::Ratio, Check::Success],
            ..Default::default()
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        let cfg = small(4);
        let a = run_experiment(&cfg, Execution::Serial).unwrap();
        let b = run_experiment(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a.report, b.report);
        for format in [Format::Csv, Format::Json] {
            assert_eq!(
                render(&a.report, format).unwrap(),
                render(&b.report, format).unwrap()
            );
        }
        assert_eq!(a.report.trials.len(), 8);
        assert!(a
            .report
            .trials
            .iter()
            .enumerate()
            .all(|(i, t)| t.trial == i));
    }

    #[test]
    fn single_trial_summary_echoes_it() {
        let cfg = ExperimentConfig {
            c: vec![6.0],
            ..small(1)
        };
        let e = run_experiment(&cfg, Execution::Serial).unwrap();
        let t = &e.report.trials[0];
        let s = &e.report.summaries[0];
        assert_eq!(mean_of(s, "cover_size"), t.cover_size as f64);
        assert_eq!(mean_of(s, "ratio"), t.ratio);
        assert!(s.quantities.iter().all(|q| q.std_dev == 0.0));
    }

    #[test]
    fn grid_rows_and_groups() {
        let e = run_experiment(&small(3), Execution::Parallel).unwrap();
        assert_eq!(e.report.summaries.len(), 2);
        assert_eq!(e.report.summaries[1].c, 6.0);
        let files = render(&e.report, Format::Csv).unwrap();
        let trials = String::from_utf8(files[0].1.clone()).unwrap();
        assert_eq!(trials.lines().count(), 1 + 6);
        let ratio_checks = e
            .report
            .checks
            .iter()
            .filter(|c| c.check == Check::Ratio)
            .count();
        assert_eq!(ratio_checks, 2);
    }

    #[test]
    fn ratio_check_requires_monotone_means() {
        let cfg = ExperimentConfig {
            c: vec![5.0, 6.0],
            trials: 1,
            checks: vec![Check::Ratio],
            ..Default::default()
        };
        let trials = [1.1, 1.2].map(|ratio| TrialReport {
            ratio,
            ..Default::default()
        });
        let summaries = summarize(&cfg, &trials).unwrap();
        let checks = evaluate_checks(&cfg, &trials, &summaries);
        assert!(checks[0].passed);
        assert!(!checks[1].passed);
    }

    #[test]
    fn unwritable_output_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        fs::write(&file, b"x").unwrap();
        assert!(matches!(
            prepare_output(&file.join("sub")),
            Err(CliError::Io { .. })
        ));
        prepare_output(&dir.path().join("a/b")).unwrap();
        assert!(!dir.path().join("a/b").join(PROBE).exists());
    }
}
