//! Seeded studies: the Gaussian random-candidate benchmark (log-det of `C`
//! per method and rank) and the reconstruction-error study on snapshot data.
//!
//! Seeding: trial `t` uses `trial_seed(base_seed, t) = splitmix64(base_seed + t)`.
//! Every method in a trial sees the same candidate matrix and the same
//! observation noise, so comparisons between methods are paired. Streams
//! inside a trial are split off with [`derive_seed`].

mod report;
mod synthetic;

pub use report::{CellSummary, ExperimentReport, TrialRecord};
pub use synthetic::generate_synthetic_flow;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};
use crate::evaluate::{
    build_model, observe, reconstruct, reconstruction_error, score_logdet, ObservationNoise,
};
use crate::linalg::Matrix;
use crate::pod::{component_block, compute_pod, mode_amplitudes, PodBasis, SnapshotMatrix};
use crate::selection::{
    select_convex, select_random, select_scalar_greedy, select_vector_greedy, ConvexOptions,
    SensorSelection,
};

const STREAM_CANDIDATES: u64 = 1;
const STREAM_RANDOM_SELECTION: u64 = 2;
const STREAM_NOISE: u64 = 3;

/// A selection strategy as configured in a study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BenchMethod {
    VectorGreedy,
    /// Scalar greedy run on a single component block (zero-based index);
    /// the other components of each chosen location come along.
    ScalarGreedy { component: usize },
    Random,
    Convex,
    FullObservation,
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchMethod::VectorGreedy => f.write_str("vector-greedy"),
            BenchMethod::ScalarGreedy { component } => {
                write!(f, "scalar-greedy-component-{}", component + 1)
            }
            BenchMethod::Random => f.write_str("random"),
            BenchMethod::Convex => f.write_str("convex"),
            BenchMethod::FullObservation => f.write_str("full-observation"),
        }
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<BenchMethod> {
        match s {
            "vector-greedy" => Ok(BenchMethod::VectorGreedy),
            "random" => Ok(BenchMethod::Random),
            "convex" => Ok(BenchMethod::Convex),
            "full-observation" => Ok(BenchMethod::FullObservation),
            _ => s
                .strip_prefix("scalar-greedy-component-")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(|k| BenchMethod::ScalarGreedy { component: k - 1 })
                .ok_or_else(|| Error::Argument(format!("unknown method `{s}`"))),
        }
    }
}

impl TryFrom<String> for BenchMethod {
    type Error = Error;

    fn try_from(s: String) -> Result<BenchMethod> {
        s.parse()
    }
}

impl From<BenchMethod> for String {
    fn from(m: BenchMethod) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_per_component: usize,
    pub components: usize,
    pub r_values: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub methods: Vec<BenchMethod>,
    /// Standard deviation of additive sensor noise (reconstruction study).
    pub noise_sigma: f64,
}

impl Default for ExperimentConfig {
    /// Scaled like the published random-candidate benchmark.
    fn default() -> Self {
        ExperimentConfig {
            n_per_component: 1000,
            components: 2,
            r_values: vec![4, 6, 8, 10],
            trials: 100,
            base_seed: 0,
            methods: vec![
                BenchMethod::VectorGreedy,
                BenchMethod::ScalarGreedy { component: 0 },
                BenchMethod::ScalarGreedy { component: 1 },
                BenchMethod::Random,
            ],
            noise_sigma: 0.0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.components == 0 {
            return arg_err("components must be at least 1");
        }
        if self.trials == 0 {
            return arg_err("trials must be at least 1");
        }
        if self.r_values.is_empty() {
            return arg_err("r_values is empty");
        }
        if self.methods.is_empty() {
            return arg_err("methods is empty");
        }
        if let Some(r) = self.r_values.iter().find(|&&r| r == 0 || r % self.components != 0) {
            return arg_err(format!(
                "r = {r} is not a positive multiple of s = {}",
                self.components
            ));
        }
        for m in &self.methods {
            if let BenchMethod::ScalarGreedy { component } = m {
                if *component >= self.components {
                    return arg_err(format!("method {m} needs more than {} components", self.components));
                }
            }
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return arg_err("noise_sigma must be finite and non-negative");
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial`: `splitmix64(base_seed + trial)`.
pub fn trial_seed(base_seed: u64, trial: usize) -> u64 {
    splitmix64(base_seed.wrapping_add(trial as u64))
}

/// Independent sub-stream of a trial seed, keyed by purpose and rank.
pub fn derive_seed(seed: u64, stream: u64, r: usize) -> u64 {
    splitmix64(splitmix64(seed ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03)) ^ r as u64)
}

/// Stacked Gaussian candidate matrix `[U_1; …; U_s]`, entries `N(0, 1)`.
pub fn gaussian_candidates(n_per_component: usize, components: usize, r: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(n_per_component * components, r, |_, _| {
        StandardNormal.sample(&mut rng)
    })
}

fn select(
    method: BenchMethod,
    basis: &PodBasis,
    p: usize,
    random_seed: u64,
) -> Result<SensorSelection> {
    match method {
        BenchMethod::VectorGreedy => select_vector_greedy(basis, p),
        BenchMethod::ScalarGreedy { component } => {
            select_scalar_greedy(&component_block(basis, component)?, p)?
                .with_components(basis.components())
        }
        BenchMethod::Random => select_random(basis.locations(), basis.components(), p, random_seed),
        BenchMethod::Convex => select_convex(basis, p, &ConvexOptions::default()),
        BenchMethod::FullObservation => SensorSelection::all(basis.locations(), basis.components()),
    }
}

/// Singular models, exhausted greedies and non-converged solves count as
/// skipped; argument errors abort the study.
fn skip_numerical(res: Result<f64>) -> Result<Option<f64>> {
    match res {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(_) => Ok(None),
        Err(Error::Exhausted { .. } | Error::NoConvergence { .. } | Error::Singular { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Log-det of `C` per method on fresh Gaussian candidates each trial.
///
/// For every rank `r` and trial, `U_1 … U_s` (each `n_per_component × r`)
/// are drawn i.i.d. `N(0,1)` and stacked. Every method places `p = r/s`
/// sensors and is scored by `ln|det C|` on the full stacked `C`.
pub fn run_random_benchmark(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    if cfg.methods.contains(&BenchMethod::FullObservation) {
        return arg_err("full-observation has no square log-det; use it in the reconstruction study");
    }
    let max_p = cfg.r_values.iter().max().copied().unwrap_or(0) / cfg.components;
    if cfg.n_per_component < max_p {
        return arg_err(format!(
            "{} locations cannot host {max_p} sensors",
            cfg.n_per_component
        ));
    }
    let start = Instant::now();
    let seeds: Vec<u64> = (0..cfg.trials).map(|t| trial_seed(cfg.base_seed, t)).collect();

    let per_trial: Vec<Result<Vec<TrialRecord>>> = seeds
        .par_iter()
        .enumerate()
        .map(|(trial, &seed)| {
            let mut out = Vec::new();
            for &r in &cfg.r_values {
                let p = r / cfg.components;
                let u = gaussian_candidates(
                    cfg.n_per_component,
                    cfg.components,
                    r,
                    derive_seed(seed, STREAM_CANDIDATES, r),
                );
                let basis = PodBasis::from_modes(u, cfg.components)?;
                for &method in &cfg.methods {
                    let value = select(method, &basis, p, derive_seed(seed, STREAM_RANDOM_SELECTION, r))
                        .and_then(|sel| build_model(&basis, &sel))
                        .and_then(|model| score_logdet(&model));
                    out.push(TrialRecord {
                        trial,
                        seed,
                        method,
                        r,
                        p,
                        value: skip_numerical(value)?,
                    });
                }
            }
            Ok(out)
        })
        .collect();

    let records = flatten(per_trial)?;
    Ok(ExperimentReport::assemble(
        "random-benchmark",
        "log_abs_det",
        cfg.clone(),
        &cfg.methods,
        records,
        seeds,
        start.elapsed().as_secs_f64(),
    ))
}

/// Reconstruction error per method and rank on a fixed snapshot set.
///
/// For each `r` the mean-subtracted POD of `data` is computed once; the true
/// amplitudes are the full-state projections. Each trial selects `p = r/s`
/// sensors per method, observes the selected rows with Gaussian noise of
/// `cfg.noise_sigma` (same noise seed for every method in the trial), solves
/// the least-squares problem and records the relative error. A
/// full-observation row is always included.
pub fn run_reconstruction_study(cfg: &ExperimentConfig, data: &SnapshotMatrix) -> Result<ExperimentReport> {
    cfg.validate()?;
    if data.components() != cfg.components {
        return arg_err(format!(
            "data has {} components, config says {}",
            data.components(),
            cfg.components
        ));
    }
    let mut methods = cfg.methods.clone();
    if !methods.contains(&BenchMethod::FullObservation) {
        methods.push(BenchMethod::FullObservation);
    }
    let start = Instant::now();

    let mut bases = Vec::with_capacity(cfg.r_values.len());
    for &r in &cfg.r_values {
        let basis = compute_pod(data, r)?;
        let truth = mode_amplitudes(&basis, data)?;
        bases.push((r, basis, truth));
    }
    let seeds: Vec<u64> = (0..cfg.trials).map(|t| trial_seed(cfg.base_seed, t)).collect();

    let per_trial: Vec<Result<Vec<TrialRecord>>> = seeds
        .par_iter()
        .enumerate()
        .map(|(trial, &seed)| {
            let mut out = Vec::new();
            for (r, basis, truth) in &bases {
                let (r, p) = (*r, r / cfg.components);
                let noise = (cfg.noise_sigma > 0.0).then(|| ObservationNoise {
                    sigma: cfg.noise_sigma,
                    seed: derive_seed(seed, STREAM_NOISE, r),
                });
                for &method in &methods {
                    let value = select(method, basis, p, derive_seed(seed, STREAM_RANDOM_SELECTION, r))
                        .and_then(|sel| {
                            let model = build_model(basis, &sel)?;
                            let y = observe(basis, &sel, data, noise)?;
                            let rec = reconstruct(&model, &y)?;
                            reconstruction_error(truth, &rec.amplitudes)
                        });
                    out.push(TrialRecord {
                        trial,
                        seed,
                        method,
                        r,
                        p,
                        value: skip_numerical(value)?,
                    });
                }
            }
            Ok(out)
        })
        .collect();

    let records = flatten(per_trial)?;
    let mut config = cfg.clone();
    config.n_per_component = data.locations();
    Ok(ExperimentReport::assemble(
        "reconstruction-study",
        "reconstruction_error",
        config,
        &methods,
        records,
        seeds,
        start.elapsed().as_secs_f64(),
    ))
}

fn flatten(per_trial: Vec<Result<Vec<TrialRecord>>>) -> Result<Vec<TrialRecord>> {
    let mut records = Vec::new();
    for chunk in per_trial {
        records.extend(chunk?);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names() {
        for m in [
            BenchMethod::VectorGreedy,
            BenchMethod::ScalarGreedy { component: 0 },
            BenchMethod::ScalarGreedy { component: 1 },
            BenchMethod::Random,
            BenchMethod::Convex,
            BenchMethod::FullObservation,
        ] {
            assert_eq!(m.to_string().parse::<BenchMethod>().unwrap(), m);
        }
        assert_eq!(
            BenchMethod::ScalarGreedy { component: 0 }.to_string(),
            "scalar-greedy-component-1"
        );
        assert!("scalar-greedy-component-0".parse::<BenchMethod>().is_err());
        assert!("qdeim".parse::<BenchMethod>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::default();
        assert!(ok.validate().is_ok());
        let odd = ExperimentConfig {
            r_values: vec![4, 5],
            ..ok.clone()
        };
        assert!(odd.validate().is_err());
        let no_trials = ExperimentConfig { trials: 0, ..ok.clone() };
        assert!(no_trials.validate().is_err());
        let bad_component = ExperimentConfig {
            methods: vec![BenchMethod::ScalarGreedy { component: 2 }],
            ..ok
        };
        assert!(bad_component.validate().is_err());
    }

    #[test]
    fn seeds_are_distinct_per_trial_and_stream() {
        assert_ne!(trial_seed(0, 0), trial_seed(0, 1));
        assert_eq!(trial_seed(5, 2), splitmix64(7));
        assert_ne!(derive_seed(1, STREAM_CANDIDATES, 4), derive_seed(1, STREAM_NOISE, 4));
        assert_ne!(derive_seed(1, STREAM_CANDIDATES, 4), derive_seed(1, STREAM_CANDIDATES, 6));
    }

    #[test]
    fn tiny_benchmark_shapes() {
        let cfg = ExperimentConfig {
            n_per_component: 20,
            r_values: vec![2, 4],
            trials: 1,
            methods: vec![BenchMethod::VectorGreedy, BenchMethod::Random, BenchMethod::Convex],
            ..ExperimentConfig::default()
        };
        let rep = run_random_benchmark(&cfg).unwrap();
        assert_eq!(rep.cells.len(), 6);
        assert_eq!(rep.records.len(), 6);
        for c in &rep.cells {
            assert_eq!(c.trials + c.skipped, 1);
            assert_eq!(c.p, c.r / 2);
        }
    }
}
