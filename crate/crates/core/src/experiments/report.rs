use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BenchMethod, ExperimentConfig};

/// One method/rank cell of a study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub method: BenchMethod,
    pub r: usize,
    pub p: usize,
    /// `None` when every trial in the cell was skipped.
    pub mean: Option<f64>,
    /// Sample standard deviation (n − 1); 0 for a single trial.
    pub std: Option<f64>,
    /// Trials that produced a finite value.
    pub trials: usize,
    /// Trials with a singular model or a failed selection.
    pub skipped: usize,
}

impl CellSummary {
    /// `std / √trials`
    pub fn standard_error(&self) -> Option<f64> {
        match (self.std, self.trials) {
            (Some(s), n) if n > 0 => Some(s / (n as f64).sqrt()),
            _ => None,
        }
    }
}

/// Per-trial outcome, kept so paired comparisons can be recomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub method: BenchMethod,
    pub r: usize,
    pub p: usize,
    /// `None` when the trial was skipped.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// `random-benchmark` or `reconstruction-study`.
    pub study: String,
    /// `log_abs_det` or `reconstruction_error`.
    pub metric: String,
    pub config: ExperimentConfig,
    pub cells: Vec<CellSummary>,
    pub records: Vec<TrialRecord>,
    /// Seed of each trial, indexed by trial number.
    pub seeds: Vec<u64>,
    pub wall_time_secs: f64,
}

impl ExperimentReport {
    pub(crate) fn assemble(
        study: &str,
        metric: &str,
        config: ExperimentConfig,
        methods: &[BenchMethod],
        mut records: Vec<TrialRecord>,
        seeds: Vec<u64>,
        wall_time_secs: f64,
    ) -> ExperimentReport {
        records.sort_by_key(|rec| (rec.r, method_rank(methods, rec.method), rec.trial));
        let mut cells = Vec::new();
        for &r in &config.r_values {
            for &method in methods {
                let cell: Vec<&TrialRecord> = records
                    .iter()
                    .filter(|rec| rec.r == r && rec.method == method)
                    .collect();
                let values: Vec<f64> = cell.iter().filter_map(|rec| rec.value).collect();
                let (mean, std) = mean_std(&values);
                cells.push(CellSummary {
                    method,
                    r,
                    p: r / config.components,
                    mean,
                    std,
                    trials: values.len(),
                    skipped: cell.len() - values.len(),
                });
            }
        }
        ExperimentReport {
            study: study.to_string(),
            metric: metric.to_string(),
            config,
            cells,
            records,
            seeds,
            wall_time_secs,
        }
    }

    pub fn cell(&self, method: BenchMethod, r: usize) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.method == method && c.r == r)
    }

    /// Copy with the wall time zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> ExperimentReport {
        ExperimentReport {
            wall_time_secs: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `method,r,p,mean,std,trials,skipped`; empty fields for undefined stats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,r,p,mean,std,trials,skipped\n");
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                c.method,
                c.r,
                c.p,
                fmt(c.mean),
                fmt(c.std),
                c.trials,
                c.skipped
            );
        }
        out
    }
}

fn method_rank(methods: &[BenchMethod], m: BenchMethod) -> usize {
    methods.iter().position(|&x| x == m).unwrap_or(usize::MAX)
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (Some(mean), Some(0.0));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some(var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, Some(2.5));
        assert!((s.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[]), (None, None));
        assert_eq!(mean_std(&[7.0]), (Some(7.0), Some(0.0)));
    }
}
