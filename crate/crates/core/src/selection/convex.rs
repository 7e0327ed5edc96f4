//! Convex-relaxation baseline for vector sensors.
//!
//! Relaxes the Boolean choice of locations to weights `z ∈ [0,1]^{n/s}` with
//! `Σ z = p` and maximizes `ln det(Σ zᵢ AᵢᵀAᵢ + εI)`, where `Aᵢ` is the
//! `s × r` block of rows observed at location `i`. The solver is projected
//! gradient ascent with Barzilai-Borwein trial steps and a backtracking
//! sufficient-ascent test. The `p` largest weights are kept.

use crate::error::{arg_err, Error, Result};
use crate::linalg::{norm_sq, Cholesky, Matrix};
use crate::pod::PodBasis;

use super::{check_budget, Method, SensorSelection};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexOptions {
    pub max_iterations: usize,
    /// Bound on `‖Π(z + ∇f) − z‖₂`, the projected-gradient stationarity measure.
    pub tolerance: f64,
    /// `ε` relative to the mean eigenvalue of the starting information matrix.
    pub regularization: f64,
}

impl Default for ConvexOptions {
    fn default() -> Self {
        ConvexOptions {
            max_iterations: 500,
            tolerance: 1e-6,
            regularization: 1e-9,
        }
    }
}

/// Solution of the relaxed problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub weights: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub stationarity: f64,
}

/// Relaxed selection rounded to the `p` largest weights (lowest index on ties).
pub fn select_convex(basis: &PodBasis, p: usize, options: &ConvexOptions) -> Result<SensorSelection> {
    let relaxed = solve_relaxation(basis, p, options)?;
    let mut order: Vec<usize> = (0..relaxed.weights.len()).collect();
    order.sort_by(|&a, &b| relaxed.weights[b].total_cmp(&relaxed.weights[a]).then(a.cmp(&b)));
    order.truncate(p);
    Ok(
        SensorSelection::new(order, basis.locations(), basis.components(), Method::Convex)?
            .with_relaxation_objective(relaxed.objective),
    )
}

struct Problem {
    r: usize,
    /// Per location: its `s` rows, concatenated.
    rows: Vec<Vec<f64>>,
    /// Per location: `AᵢᵀAᵢ`, row-major `r × r`.
    grams: Vec<Vec<f64>>,
    eps: f64,
}

impl Problem {
    fn information(&self, z: &[f64]) -> Matrix {
        let r = self.r;
        let mut m = vec![0.0; r * r];
        for (zi, g) in z.iter().zip(&self.grams) {
            if *zi != 0.0 {
                for (acc, gij) in m.iter_mut().zip(g) {
                    *acc += zi * gij;
                }
            }
        }
        for d in 0..r {
            m[d * r + d] += self.eps;
        }
        Matrix::from_fn(r, r, |i, j| m[i * r + j])
    }

    fn evaluate(&self, z: &[f64]) -> Option<(f64, Cholesky)> {
        let chol = Cholesky::factor(&self.information(z)).ok()?;
        Some((chol.log_det(), chol))
    }

    /// `∂f/∂zᵢ = tr(M⁻¹ AᵢᵀAᵢ) = Σ_k ‖L⁻¹ a_k‖²`
    fn gradient(&self, chol: &Cholesky) -> Vec<f64> {
        let r = self.r;
        let mut buf = vec![0.0; r];
        self.rows
            .iter()
            .map(|block| {
                block
                    .chunks_exact(r)
                    .map(|a| {
                        buf.copy_from_slice(a);
                        chol.solve_lower_in_place(&mut buf);
                        norm_sq(&buf)
                    })
                    .sum()
            })
            .collect()
    }
}

/// Solves the relaxed log-det problem for `p` vector sensors.
pub fn solve_relaxation(basis: &PodBasis, p: usize, options: &ConvexOptions) -> Result<Relaxation> {
    let (m, s, r) = (basis.locations(), basis.components(), basis.rank());
    check_budget(Method::Convex, p, s, r, m)?;
    if options.max_iterations == 0 || options.tolerance <= 0.0 || options.regularization <= 0.0 {
        return arg_err("convex options must be positive");
    }

    let modes = basis.modes();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            basis
                .location_rows(i)
                .into_iter()
                .flat_map(|row| modes.row(row).iter().copied())
                .collect()
        })
        .collect();
    let grams: Vec<Vec<f64>> = rows
        .iter()
        .map(|block| {
            let mut g = vec![0.0; r * r];
            for a in block.chunks_exact(r) {
                for i in 0..r {
                    for j in 0..r {
                        g[i * r + j] += a[i] * a[j];
                    }
                }
            }
            g
        })
        .collect();
    let trace: f64 = grams
        .iter()
        .map(|g| (0..r).map(|d| g[d * r + d]).sum::<f64>())
        .sum();
    if trace == 0.0 {
        return arg_err("candidate matrix is identically zero");
    }
    let problem = Problem {
        r,
        rows,
        grams,
        eps: options.regularization * trace * (p as f64 / m as f64) / r as f64,
    };

    let mut z = vec![p as f64 / m as f64; m];
    let (mut f, chol) = problem.evaluate(&z).ok_or(Error::Singular { pivot: 0 })?;
    let mut g = problem.gradient(&chol);
    let mut step = 1.0;
    let mut stationarity = f64::INFINITY;

    for iteration in 0..options.max_iterations {
        stationarity = gradient_mapping_norm(&z, &g, p);
        if stationarity <= options.tolerance {
            return Ok(Relaxation {
                weights: z,
                objective: f,
                iterations: iteration,
                stationarity,
            });
        }

        let mut accepted = None;
        while step > 1e-14 {
            let trial = project(&axpy_vec(step, &g, &z), p);
            let d: Vec<f64> = trial.iter().zip(&z).map(|(a, b)| a - b).collect();
            let model_gain: f64 =
                d.iter().zip(&g).map(|(di, gi)| di * gi).sum::<f64>() - norm_sq(&d) / (2.0 * step);
            if let Some((f_new, chol_new)) = problem.evaluate(&trial) {
                if f_new >= f + model_gain {
                    accepted = Some((trial, d, f_new, chol_new));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((trial, d, f_new, chol_new)) = accepted else {
            break;
        };

        let g_new = problem.gradient(&chol_new);
        // Barzilai-Borwein step for the next iteration (ascent on concave f).
        let sy: f64 = d
            .iter()
            .zip(g_new.iter().zip(&g))
            .map(|(di, (gn, go))| di * (gn - go))
            .sum();
        let ss = norm_sq(&d);
        step = if sy < 0.0 && ss > 0.0 {
            (ss / -sy).clamp(1e-8, 1e8)
        } else {
            (step * 2.0).min(1e8)
        };
        z = trial;
        f = f_new;
        g = g_new;
    }

    Err(Error::NoConvergence {
        iterations: options.max_iterations,
        residual: stationarity,
    })
}

fn axpy_vec(alpha: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| yi + alpha * xi).collect()
}

fn gradient_mapping_norm(z: &[f64], g: &[f64], p: usize) -> f64 {
    let moved = project(&axpy_vec(1.0, g, z), p);
    moved
        .iter()
        .zip(z)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean projection onto `{z : 0 ≤ zᵢ ≤ 1, Σ zᵢ = p}`.
///
/// The projection is `clamp(yᵢ − τ, 0, 1)`; `τ` is found by bisection on the
/// monotone map `τ ↦ Σ clamp(yᵢ − τ, 0, 1)`.
pub(crate) fn project(y: &[f64], p: usize) -> Vec<f64> {
    let target = p as f64;
    let mass = |tau: f64| -> f64 { y.iter().map(|v| (v - tau).clamp(0.0, 1.0)).sum() };
    let mut lo = y.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    y.iter().map(|v| (v - tau).clamp(0.0, 1.0)).collect()
}
