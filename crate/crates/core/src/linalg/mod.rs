//! Dense kernels: Gram-Schmidt deflation, thin SVD, log-determinants and
//! least-squares solves over [`Matrix`].

mod lstsq;
mod lu;
mod matrix;
mod svd;

pub use lstsq::{solve_least_squares, LeastSquares, LstsqSolution};
pub use lu::{log_abs_det, Cholesky, Lu};
pub use matrix::{axpy, dot, norm_sq, Matrix};
pub use svd::{thin_svd, Svd};

use crate::error::{arg_err, Error, Result};

/// Squared norms below this fraction of the reference scale count as zero.
///
/// The reference scale is the largest squared row norm of the matrix a
/// deflation sequence starts from.
pub const DEGENERACY_RATIO: f64 = 1e-13;

/// Squared Euclidean norm of row `i`.
pub fn row_norm_sq(m: &Matrix, i: usize) -> Result<f64> {
    if i >= m.rows() {
        return arg_err(format!("row {i} out of range for {} rows", m.rows()));
    }
    Ok(norm_sq(m.row(i)))
}

/// Floor for `‖v‖²` when deflating a sequence that started from `m`.
pub fn degeneracy_floor(m: &Matrix) -> f64 {
    DEGENERACY_RATIO * m.max_row_norm_sq()
}

/// Returns `m − m·vᵀ·v / ‖v‖²`: every row with its component along `v` removed.
///
/// The degeneracy floor is taken relative to `m`'s largest row.
pub fn deflate(m: &Matrix, v: &[f64]) -> Result<Matrix> {
    let mut out = m.clone();
    deflate_in_place(&mut out, v, degeneracy_floor(m))?;
    Ok(out)
}

/// In-place deflation with an explicit floor on `‖v‖²`.
///
/// `v` must not alias a row of `m`; copy the row out first.
pub fn deflate_in_place(m: &mut Matrix, v: &[f64], floor: f64) -> Result<()> {
    if v.len() != m.cols() {
        return arg_err(format!(
            "direction has length {}, matrix has {} columns",
            v.len(),
            m.cols()
        ));
    }
    let nsq = norm_sq(v);
    if nsq < floor || nsq == 0.0 {
        return Err(Error::DegenerateDirection { norm_sq: nsq, floor });
    }
    for i in 0..m.rows() {
        let row = m.row_mut(i);
        let coef = dot(row, v) / nsq;
        if coef != 0.0 {
            axpy(-coef, v, row);
        }
    }
    Ok(())
}
