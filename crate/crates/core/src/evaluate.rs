//! Measurement model `y = C·x`, its log-determinant score, and
//! least-squares reconstruction of mode amplitudes from sparse observations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{arg_err, Error, Result};
use crate::linalg::{log_abs_det, LeastSquares, Matrix};
use crate::pod::{PodBasis, SnapshotMatrix};
use crate::selection::SensorSelection;

/// `C = H·U`: the rows of the mode matrix seen by the selected sensors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementModel {
    c: Matrix,
    selection: SensorSelection,
    dof: usize,
}

impl MeasurementModel {
    /// `(s·p) × r`, rows in [`SensorSelection::selected_rows`] order.
    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn selection(&self) -> &SensorSelection {
        &self.selection
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn rank(&self) -> usize {
        self.c.cols()
    }

    pub fn components(&self) -> usize {
        self.selection.components()
    }

    pub fn is_square(&self) -> bool {
        self.c.is_square()
    }
}

/// Gathers the selected rows of `basis`.
pub fn build_model(basis: &PodBasis, selection: &SensorSelection) -> Result<MeasurementModel> {
    check_conformable(basis, selection)?;
    Ok(MeasurementModel {
        c: basis.modes().select_rows(&selection.selected_rows())?,
        selection: selection.clone(),
        dof: basis.dof(),
    })
}

fn check_conformable(basis: &PodBasis, selection: &SensorSelection) -> Result<()> {
    if selection.n_locations() != basis.locations() || selection.components() != basis.components()
    {
        return arg_err(format!(
            "selection over {} locations x {} components does not fit basis with {} locations x {} components",
            selection.n_locations(),
            selection.components(),
            basis.locations(),
            basis.components()
        ));
    }
    Ok(())
}

/// `ln|det C|` for square `C`, `½ ln det(C·Cᵀ)` when `C` has fewer rows than
/// columns. Singular models score `-∞`.
pub fn score_logdet(model: &MeasurementModel) -> Result<f64> {
    let c = &model.c;
    if c.rows() > c.cols() {
        return arg_err(format!(
            "log-det score needs s·p ≤ r, got {} rows for rank {}",
            c.rows(),
            c.cols()
        ));
    }
    let value = if c.is_square() {
        log_abs_det(c)
    } else {
        log_abs_det(&c.matmul(&c.transpose())?).map(|v| 0.5 * v)
    };
    match value {
        Ok(v) => Ok(v),
        Err(Error::Singular { .. }) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// I.i.d. Gaussian sensor noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationNoise {
    pub sigma: f64,
    pub seed: u64,
}

/// Sensor readings: selected rows of the mean-subtracted snapshots, one
/// column per snapshot, optionally with additive noise.
pub fn observe(
    basis: &PodBasis,
    selection: &SensorSelection,
    field: &SnapshotMatrix,
    noise: Option<ObservationNoise>,
) -> Result<Matrix> {
    check_conformable(basis, selection)?;
    if field.dof() != basis.dof() || field.components() != basis.components() {
        return arg_err(format!(
            "field has {} rows / {} components, basis has {} / {}",
            field.dof(),
            field.components(),
            basis.dof(),
            basis.components()
        ));
    }
    let rows = selection.selected_rows();
    let data = field.data();
    let mean = basis.mean();
    let mut y = Matrix::from_fn(rows.len(), data.cols(), |k, t| data[(rows[k], t)] - mean[rows[k]]);
    if let Some(ObservationNoise { sigma, seed }) = noise {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return arg_err(format!("noise sigma must be a finite non-negative value, got {sigma}"));
        }
        if sigma > 0.0 {
            let normal = Normal::new(0.0, sigma).map_err(|e| Error::Argument(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for k in 0..y.rows() {
                for v in y.row_mut(k) {
                    *v += normal.sample(&mut rng);
                }
            }
        }
    }
    Ok(y)
}

/// Reconstructed amplitudes and fit diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    /// r × N
    pub amplitudes: Matrix,
    /// `‖C·x_t − y_t‖₂` per snapshot.
    pub residual_norms: Vec<f64>,
    /// Set when `C` is numerically rank deficient; amplitudes are then the
    /// minimum-norm least-squares fit.
    pub rank_deficient: bool,
}

/// Column-wise minimum-norm least squares `C·x = y`; `x = C⁻¹y` when `C` is
/// square and nonsingular.
pub fn reconstruct(model: &MeasurementModel, observations: &Matrix) -> Result<ReconstructionResult> {
    let c = &model.c;
    if observations.rows() != c.rows() {
        return arg_err(format!(
            "observations have {} rows, model expects {}",
            observations.rows(),
            c.rows()
        ));
    }
    let ls = LeastSquares::factor(c)?;
    let n_snap = observations.cols();
    let mut amplitudes = Matrix::zeros(c.cols(), n_snap);
    let mut residual_norms = Vec::with_capacity(n_snap);
    for t in 0..n_snap {
        let y = observations.col(t);
        let x = ls.solve(&y)?;
        let fit = c.mul_vec(&x)?;
        residual_norms.push(
            fit.iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
        );
        for (i, xi) in x.into_iter().enumerate() {
            amplitudes[(i, t)] = xi;
        }
    }
    Ok(ReconstructionResult {
        amplitudes,
        residual_norms,
        rank_deficient: ls.rank_deficient(),
    })
}

/// Relative Frobenius error `‖X − X̂‖_F / ‖X‖_F` over modes and snapshots.
pub fn reconstruction_error(true_amplitudes: &Matrix, reconstructed: &Matrix) -> Result<f64> {
    let denom = true_amplitudes.frobenius_norm();
    if denom == 0.0 {
        return arg_err("true amplitudes are all zero; relative error undefined");
    }
    Ok(true_amplitudes.sub(reconstructed)?.frobenius_norm() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::Method;

    fn identity_basis(n: usize, s: usize) -> PodBasis {
        PodBasis::from_modes(Matrix::identity(n), s).unwrap()
    }

    #[test]
    fn gathers_component_rows() {
        let basis = identity_basis(4, 2);
        let sel = SensorSelection::new(vec![0], 2, 2, Method::Random).unwrap();
        let model = build_model(&basis, &sel).unwrap();
        assert_eq!(model.c().row(0), Matrix::identity(4).row(0));
        assert_eq!(model.c().row(1), Matrix::identity(4).row(2));
    }

    #[test]
    fn full_selection_is_modes() {
        let basis = identity_basis(3, 1);
        let model = build_model(&basis, &SensorSelection::all(3, 1).unwrap()).unwrap();
        assert_eq!(model.c(), basis.modes());
    }

    #[test]
    fn mismatched_selection_rejected() {
        let basis = identity_basis(4, 2);
        let sel = SensorSelection::new(vec![0], 4, 1, Method::Random).unwrap();
        assert!(build_model(&basis, &sel).is_err());
    }

    #[test]
    fn logdet_examples() {
        let sel = SensorSelection::all(3, 1).unwrap();
        let model = build_model(&identity_basis(3, 1), &sel).unwrap();
        assert_eq!(score_logdet(&model).unwrap(), 0.0);

        let basis = PodBasis::from_modes(Matrix::diag(&[2.0, 3.0]), 1).unwrap();
        let model = build_model(&basis, &SensorSelection::all(2, 1).unwrap()).unwrap();
        assert!((score_logdet(&model).unwrap() - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn singular_scores_negative_infinity() {
        let modes = Matrix::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let basis = PodBasis::from_modes(modes, 1).unwrap();
        let model = build_model(&basis, &SensorSelection::all(2, 1).unwrap()).unwrap();
        assert_eq!(score_logdet(&model).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn wide_model_uses_gram_determinant() {
        let modes = Matrix::from_rows(&[vec![3.0, 4.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let basis = PodBasis::from_modes(modes, 1).unwrap();
        let sel = SensorSelection::new(vec![0], 2, 1, Method::Random).unwrap();
        let model = build_model(&basis, &sel).unwrap();
        assert!((score_logdet(&model).unwrap() - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tall_model_rejected_by_score() {
        let basis = PodBasis::from_modes(Matrix::from_fn(3, 1, |i, _| i as f64 + 1.0), 1).unwrap();
        let model = build_model(&basis, &SensorSelection::all(3, 1).unwrap()).unwrap();
        assert!(score_logdet(&model).is_err());
    }

    #[test]
    fn observe_full_noiseless_and_zero_field() {
        let basis = identity_basis(3, 1);
        let field = SnapshotMatrix::new(Matrix::from_fn(3, 4, |i, j| (i * 4 + j) as f64), 1).unwrap();
        let y = observe(&basis, &SensorSelection::all(3, 1).unwrap(), &field, None).unwrap();
        assert_eq!(&y, field.data());

        let zero = SnapshotMatrix::new(Matrix::zeros(3, 4), 1).unwrap();
        let y = observe(&basis, &SensorSelection::all(3, 1).unwrap(), &zero, None).unwrap();
        assert_eq!(y.max_abs(), 0.0);
    }

    #[test]
    fn noise_is_seeded() {
        let basis = identity_basis(3, 1);
        let zero = SnapshotMatrix::new(Matrix::zeros(3, 4), 1).unwrap();
        let sel = SensorSelection::all(3, 1).unwrap();
        let noise = Some(ObservationNoise { sigma: 0.1, seed: 9 });
        let a = observe(&basis, &sel, &zero, noise).unwrap();
        let b = observe(&basis, &sel, &zero, noise).unwrap();
        assert_eq!(a, b);
        assert!(a.max_abs() > 0.0);
        let bad = Some(ObservationNoise { sigma: -1.0, seed: 0 });
        assert!(observe(&basis, &sel, &zero, bad).is_err());
    }

    #[test]
    fn identity_reconstruction_returns_observations() {
        let basis = identity_basis(3, 1);
        let model = build_model(&basis, &SensorSelection::all(3, 1).unwrap()).unwrap();
        let y = Matrix::from_fn(3, 2, |i, j| (i as f64) - 2.0 * j as f64);
        let rec = reconstruct(&model, &y).unwrap();
        assert_eq!(rec.amplitudes, y);
        assert!(!rec.rank_deficient);
        assert!(rec.residual_norms.iter().all(|&r| r == 0.0));
        assert!(reconstruct(&model, &Matrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn error_metric_examples() {
        let x = Matrix::from_fn(3, 4, |i, j| 1.0 + i as f64 - j as f64 * 0.5);
        assert_eq!(reconstruction_error(&x, &x).unwrap(), 0.0);
        assert_eq!(reconstruction_error(&x, &Matrix::zeros(3, 4)).unwrap(), 1.0);
        assert!((reconstruction_error(&x, &x.scale(2.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(reconstruction_error(&Matrix::zeros(3, 4), &x).is_err());
        assert!(reconstruction_error(&x, &Matrix::zeros(4, 3)).is_err());
    }
}
