use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{arg_err, Error, Result};
use crate::linalg::{thin_svd, Matrix};
use crate::pod::SnapshotMatrix;

/// Energy of mode `k` decays as `exp(−DECAY·k)`.
const DECAY: f64 = 0.3;

/// Low-rank synthetic stand-in for a measured vector field.
///
/// Returns `Φ·A + noise` with `Φ` an `(s·n_per_component) × true_rank`
/// matrix of orthonormalized Gaussian columns (each spanning every component
/// block) and `A` a matrix of sinusoidal amplitude histories,
/// `a_k(t) = e^{−0.3k} sin(2π f_k t / N + φ_k)` with distinct frequencies
/// `f_k ∈ [k+1, k+1.5)` and random phases. Deterministic for a given seed.
pub fn generate_synthetic_flow(
    n_per_component: usize,
    components: usize,
    true_rank: usize,
    n_snapshots: usize,
    seed: u64,
    noise_sigma: f64,
) -> Result<SnapshotMatrix> {
    let n = n_per_component * components;
    if n == 0 || n_snapshots == 0 {
        return arg_err("synthetic flow needs at least one location, component and snapshot");
    }
    if true_rank == 0 || true_rank > n.min(n_snapshots) {
        return arg_err(format!(
            "true rank {true_rank} impossible for {n} dofs and {n_snapshots} snapshots"
        ));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return arg_err(format!("noise sigma must be finite and non-negative, got {noise_sigma}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = Matrix::from_fn(n, true_rank, |_, _| StandardNormal.sample(&mut rng));
    let modes = thin_svd(&gaussian, true_rank)?.left;

    let mut amplitudes = Matrix::zeros(true_rank, n_snapshots);
    for k in 0..true_rank {
        let scale = (-DECAY * k as f64).exp();
        let freq = (k + 1) as f64 + 0.5 * rng.random::<f64>();
        let phase = 2.0 * PI * rng.random::<f64>();
        for t in 0..n_snapshots {
            let angle = 2.0 * PI * freq * t as f64 / n_snapshots as f64 + phase;
            amplitudes[(k, t)] = scale * angle.sin();
        }
    }

    let mut data = modes.matmul(&amplitudes)?;
    if noise_sigma > 0.0 {
        let normal = Normal::new(0.0, noise_sigma).map_err(|e| Error::Argument(e.to_string()))?;
        for i in 0..data.rows() {
            for v in data.row_mut(i) {
                *v += normal.sample(&mut rng);
            }
        }
    }
    SnapshotMatrix::new(data, components)
}
