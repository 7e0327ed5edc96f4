use crate::error::{arg_err, Result};

use super::matrix::{axpy, dot, Matrix};
use super::svd::{thin_svd, Svd};

/// Minimum-norm least-squares solution of `a·x ≈ b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LstsqSolution {
    pub x: Vec<f64>,
    /// Numerical rank of `a`.
    pub rank: usize,
    /// True when `rank < min(rows, cols)`.
    pub rank_deficient: bool,
}

/// SVD-backed pseudo-inverse, factored once for many right-hand sides.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    svd: Svd,
    rows: usize,
    rank: usize,
}

impl LeastSquares {
    pub fn factor(a: &Matrix) -> Result<LeastSquares> {
        let k = a.rows().min(a.cols());
        let svd = thin_svd(a, k)?;
        let cut = svd.singular_values[0] * a.rows().max(a.cols()) as f64 * f64::EPSILON;
        let rank = svd
            .singular_values
            .iter()
            .take_while(|&&s| s > cut && s > 0.0)
            .count();
        Ok(LeastSquares {
            svd,
            rows: a.rows(),
            rank,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_deficient(&self) -> bool {
        self.rank < self.svd.singular_values.len()
    }

    /// `x = V·Σ⁺·Uᵀ·b` restricted to the numerical rank.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.rows {
            return arg_err(format!("rhs length {} != {} rows", b.len(), self.rows));
        }
        let n = self.svd.right.rows();
        let mut x = vec![0.0; n];
        for t in 0..self.rank {
            let ut = self.svd.left.col(t);
            let coef = dot(&ut, b) / self.svd.singular_values[t];
            axpy(coef, &self.svd.right.col(t), &mut x);
        }
        Ok(x)
    }
}

/// Minimum-norm minimizer of `‖a·x − b‖₂`. Rank deficiency is reported in
/// the result rather than as an error.
pub fn solve_least_squares(a: &Matrix, b: &[f64]) -> Result<LstsqSolution> {
    if b.len() != a.rows() {
        return arg_err(format!("rhs length {} != {} rows", b.len(), a.rows()));
    }
    let ls = LeastSquares::factor(a)?;
    Ok(LstsqSolution {
        x: ls.solve(b)?,
        rank: ls.rank,
        rank_deficient: ls.rank_deficient(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let sol = solve_least_squares(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(sol.x, vec![1.0, 2.0, 3.0]);
        assert!(!sol.rank_deficient);
    }

    #[test]
    fn mean_of_two_observations() {
        let a = Matrix::column(&[1.0, 1.0]);
        let sol = solve_least_squares(&a, &[0.0, 2.0]).unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_gives_minimum_norm() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let sol = solve_least_squares(&a, &[2.0, 2.0]).unwrap();
        assert!(sol.rank_deficient);
        assert_eq!(sol.rank, 1);
        assert!((sol.x[0] - 1.0).abs() < 1e-14 && (sol.x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rhs_length_checked() {
        assert!(solve_least_squares(&Matrix::identity(2), &[1.0]).is_err());
    }
}
