//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's factorizations.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use vecsensor::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

pub fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(<[f64]>::to_vec).collect()
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    match n {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// `det(R·Rᵀ)` for the given rows, by cofactor expansion.
pub fn gram_det(rows: &[Vec<f64>]) -> f64 {
    let g: Vec<Vec<f64>> = rows
        .iter()
        .map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
        .collect();
    cofactor_det(&g)
}

/// Gaussian elimination with partial pivoting on an augmented copy.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap();
        m.swap(k, p);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..=n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Rows observed at `loc` in a stacked layout with `per` locations and `s` components.
pub fn location_rows(m: &Matrix, loc: usize, per: usize, s: usize) -> Vec<Vec<f64>> {
    (0..s).map(|k| m.row(loc + k * per).to_vec()).collect()
}

/// Exhaustive one-step argmax of `det(C_sel·C_selᵀ)` over the remaining
/// locations, lowest index among candidates within `rel_tol` of the best.
/// Returns `(argmax, best_det, dets)`.
pub fn brute_force_step(
    m: &Matrix,
    per: usize,
    s: usize,
    chosen: &[usize],
    rel_tol: f64,
) -> (usize, f64, Vec<Option<f64>>) {
    let base: Vec<Vec<f64>> = chosen
        .iter()
        .flat_map(|&loc| location_rows(m, loc, per, s))
        .collect();
    let dets: Vec<Option<f64>> = (0..per)
        .map(|i| {
            if chosen.contains(&i) {
                return None;
            }
            let mut rows = base.clone();
            rows.extend(location_rows(m, i, per, s));
            Some(gram_det(&rows))
        })
        .collect();
    let best = dets.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let arg = dets
        .iter()
        .position(|d| d.is_some_and(|d| d >= best - rel_tol * best.abs()))
        .unwrap();
    (arg, best, dets)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
