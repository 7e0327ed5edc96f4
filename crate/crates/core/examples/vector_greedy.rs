//! Vector-measurement sensors: each location reports `s` components, and the
//! greedy picks whole locations by the volume their rows add.
//!
//!     cargo run --example vector_greedy

use vecsensor::experiments::gaussian_candidates;
use vecsensor::pod::{component_block, PodBasis};
use vecsensor::{build_model, score_logdet, select_scalar_greedy, select_vector_greedy};

fn main() -> vecsensor::Result<()> {
    let (n_per, s, r) = (500, 2, 8);
    let p = r / s;
    // [U₁; U₂]: row i of U₁ and row i of U₂ belong to location i.
    let basis = PodBasis::from_modes(gaussian_candidates(n_per, s, r, 7), s)?;

    let vector = select_vector_greedy(&basis, p)?;
    println!("vector greedy   locations {:?}", vector.locations());
    for k in 0..p {
        println!("  sensor {k}: rows {:?}, J = {:.4}", vector.rows_of(k), vector.gains()[k]);
    }
    let v_score = score_logdet(&build_model(&basis, &vector)?)?;

    // Choosing by component 1 alone, then reading both components there.
    let scalar = select_scalar_greedy(&component_block(&basis, 0)?, p)?.with_components(s)?;
    let s_score = score_logdet(&build_model(&basis, &scalar)?)?;

    println!("scalar greedy   locations {:?}", scalar.locations());
    println!("ln|det C|: vector {v_score:.4}  scalar(U₁) {s_score:.4}");
    Ok(())
}
