use crate::error::{arg_err, Error, Result};

use super::matrix::{axpy, dot, norm_sq, Matrix};

const MAX_SWEEPS: usize = 60;

/// Truncated singular value decomposition `m ≈ U·diag(σ)·Vᵀ`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// rows × k, orthonormal columns.
    pub left: Matrix,
    /// Length k, non-increasing, non-negative.
    pub singular_values: Vec<f64>,
    /// cols × k, orthonormal columns.
    pub right: Matrix,
}

impl Svd {
    /// `U·diag(σ)·Vᵀ`
    pub fn reconstruct(&self) -> Matrix {
        let (m, k) = self.left.shape();
        let n = self.right.rows();
        Matrix::from_fn(m, n, |i, j| {
            (0..k)
                .map(|t| self.left[(i, t)] * self.singular_values[t] * self.right[(j, t)])
                .sum()
        })
    }
}

/// Rank-`k` thin SVD by one-sided (Hestenes) Jacobi rotations.
///
/// Rotations are applied to whichever side of `m` has fewer columns. Left
/// singular vectors belonging to (numerically) zero singular values are
/// completed to an orthonormal set.
pub fn thin_svd(m: &Matrix, k: usize) -> Result<Svd> {
    let (rows, cols) = m.shape();
    let kmax = rows.min(cols);
    if k == 0 || k > kmax {
        return arg_err(format!("rank {k} outside 1..={kmax}"));
    }
    if rows >= cols {
        let (u, s, v) = jacobi_tall(m)?;
        Ok(truncate(u, s, v, rows, cols, k))
    } else {
        let (u, s, v) = jacobi_tall(&m.transpose())?;
        Ok(truncate(v, s, u, rows, cols, k))
    }
}

fn truncate(
    left_cols: Vec<Vec<f64>>,
    sigma: Vec<f64>,
    right_cols: Vec<Vec<f64>>,
    rows: usize,
    cols: usize,
    k: usize,
) -> Svd {
    Svd {
        left: Matrix::from_fn(rows, k, |i, j| left_cols[j][i]),
        singular_values: sigma[..k].to_vec(),
        right: Matrix::from_fn(cols, k, |i, j| right_cols[j][i]),
    }
}

/// Jacobi SVD of a matrix with `rows >= cols`. Returns column lists for U
/// (rows-long, `cols` of them) and V (cols-long), sorted by descending σ.
fn jacobi_tall(a: &Matrix) -> Result<(Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>)> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let tol = (m as f64).sqrt() * f64::EPSILON;

    let mut sweep = 0;
    loop {
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sq(&w[p]);
                let beta = norm_sq(&w[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                let off = gamma.abs() / (alpha * beta).sqrt();
                if off <= tol {
                    continue;
                }
                worst = worst.max(off);
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        sweep += 1;
        if worst == 0.0 {
            break;
        }
        if sweep >= MAX_SWEEPS {
            return Err(Error::NoConvergence {
                iterations: sweep,
                residual: worst,
            });
        }
    }

    let mut order: Vec<(usize, f64)> = w.iter().map(|c| norm_sq(c).sqrt()).enumerate().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let sigma: Vec<f64> = order.iter().map(|&(_, s)| s).collect();
    let v_sorted: Vec<Vec<f64>> = order.iter().map(|&(j, _)| v[j].clone()).collect();

    // Normalize, then re-orthogonalize so small σ columns stay orthonormal.
    let zero_cut = sigma[0] * m as f64 * f64::EPSILON;
    let mut u: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut next_unit = 0;
    for &(j, s) in &order {
        let mut col = if s > zero_cut && s > 0.0 {
            w[j].iter().map(|x| x / s).collect()
        } else {
            vec![0.0; m]
        };
        if !orthonormalize_against(&mut col, &u) {
            loop {
                let mut e = vec![0.0; m];
                e[next_unit % m] = 1.0;
                next_unit += 1;
                if orthonormalize_against(&mut e, &u) {
                    col = e;
                    break;
                }
            }
        }
        u.push(col);
    }
    Ok((u, sigma, v_sorted))
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Two-pass Gram-Schmidt of `x` against orthonormal `basis`, then normalize.
/// Returns false when `x` has (almost) nothing left outside the span.
fn orthonormalize_against(x: &mut [f64], basis: &[Vec<f64>]) -> bool {
    let start = norm_sq(x).sqrt();
    if start == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, x);
            axpy(-c, b, x);
        }
    }
    let nrm = norm_sq(x).sqrt();
    if nrm <= 1e-8 * start {
        return false;
    }
    x.iter_mut().for_each(|xi| *xi /= nrm);
    true
}
