use crate::error::{arg_err, Error, Result};

use super::matrix::Matrix;

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    // Packed: strict lower part holds L (unit diagonal implied), upper part U.
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors a square matrix. A pivot with magnitude at or below
    /// `n · ε · max|a_ij|` is reported as singular.
    pub fn factor(a: &Matrix) -> Result<Lu> {
        if !a.is_square() {
            return arg_err(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            ));
        }
        let n = a.rows();
        let tol = n as f64 * f64::EPSILON * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= tol || pmax == 0.0 {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    /// `ln|det A|` as the sum of log absolute pivots.
    pub fn log_abs_det(&self) -> f64 {
        (0..self.n).map(|k| self.lu[(k, k)].abs().ln()).sum()
    }

    /// Solves `A·x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return arg_err(format!("rhs length {} != {}", b.len(), self.n));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..self.n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..self.n).rev() {
            let s: f64 = (i + 1..self.n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        Ok(x)
    }
}

/// `ln|det m|` via pivoted LU; the sign is discarded.
pub fn log_abs_det(m: &Matrix) -> Result<f64> {
    Ok(Lu::factor(m)?.log_abs_det())
}

/// Cholesky factor `A = L·Lᵀ` of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    pub fn factor(a: &Matrix) -> Result<Cholesky> {
        if !a.is_square() {
            return arg_err("Cholesky needs a square matrix");
        }
        let n = a.rows();
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::Singular { pivot: j });
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(Cholesky { l })
    }

    /// `ln det A = 2 Σ ln l_jj`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.l.rows()).map(|j| self.l[(j, j)].ln()).sum::<f64>()
    }

    /// Solves `L·y = b` in place.
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        let n = self.l.rows();
        for i in 0..n {
            let row = self.l.row(i);
            let s: f64 = row[..i].iter().zip(&b[..i]).map(|(a, x)| a * x).sum();
            b[i] = (b[i] - s) / row[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(log_abs_det(&Matrix::identity(5)).unwrap(), 0.0);
        let d = log_abs_det(&Matrix::diag(&[2.0, 3.0])).unwrap();
        assert!((d - 6f64.ln()).abs() < 1e-15);
        assert!((d - 1.791759).abs() < 1e-6);
    }

    #[test]
    fn sign_is_discarded() {
        let m = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]]).unwrap();
        assert!((log_abs_det(&m).unwrap() - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn singular_reports_pivot() {
        let m = Matrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(log_abs_det(&m), Err(Error::Singular { pivot: 1 }));
        assert!(log_abs_det(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn lu_solve_small_system() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = Lu::factor(&a).unwrap().solve(&[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn cholesky_log_det_matches_lu() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let ch = Cholesky::factor(&a).unwrap();
        assert!((ch.log_det() - 8f64.ln()).abs() < 1e-14);
        let mut y = vec![2.0, 1.0];
        ch.solve_lower_in_place(&mut y);
        assert!((y[0] - 1.0).abs() < 1e-15);
        assert!(Cholesky::factor(&Matrix::diag(&[1.0, -1.0])).is_err());
    }
}
