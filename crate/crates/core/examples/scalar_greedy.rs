//! Greedy scalar-sensor placement (QDEIM order) on a random candidate matrix.
//!
//!     cargo run --example scalar_greedy

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use vecsensor::pod::PodBasis;
use vecsensor::{build_model, score_logdet, select_scalar_greedy, Matrix, SensorSelection};

fn main() -> vecsensor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (n, r) = (200, 6);
    let u = Matrix::from_fn(n, r, |_, _| StandardNormal.sample(&mut rng));

    let sel = select_scalar_greedy(&u, r)?;
    println!("sensors (in pick order): {:?}", sel.locations());
    println!("gain per step:           {:.3?}", sel.gains());

    // Each gain is the squared height of the chosen row above the span of the
    // earlier ones, so their product is det(C Cᵀ).
    let basis = PodBasis::from_modes(u, 1)?;
    let greedy = score_logdet(&build_model(&basis, &sel)?)?;
    let half_log_product: f64 = sel.gains().iter().map(|g| 0.5 * g.ln()).sum();
    println!("ln|det C| = {greedy:.6}, ½ Σ ln gain = {half_log_product:.6}");

    let first: Vec<usize> = (0..r).collect();
    let naive = score_logdet(&build_model(&basis, &SensorSelection::untagged(first, n, 1)?)?)?;
    println!("first {r} rows instead: ln|det C| = {naive:.6}");
    Ok(())
}
