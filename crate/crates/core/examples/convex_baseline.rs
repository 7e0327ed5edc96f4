//! Convex-relaxation baseline against vector greedy and random placement.
//!
//!     cargo run --example convex_baseline

use vecsensor::experiments::gaussian_candidates;
use vecsensor::pod::PodBasis;
use vecsensor::selection::{select_convex, solve_relaxation, ConvexOptions};
use vecsensor::{build_model, score_logdet, select_random, select_vector_greedy};

fn main() -> vecsensor::Result<()> {
    let (n_per, s, r) = (150, 2, 8);
    let p = r / s;
    let basis = PodBasis::from_modes(gaussian_candidates(n_per, s, r, 3), s)?;
    let opts = ConvexOptions::default();

    let relax = solve_relaxation(&basis, p, &opts)?;
    let mut top: Vec<(usize, f64)> = relax.weights.iter().copied().enumerate().collect();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!(
        "relaxation: {} iterations, stationarity {:.1e}, objective {:.4}",
        relax.iterations, relax.stationarity, relax.objective
    );
    println!("largest weights: {:.3?}", &top[..p + 2]);

    let score = |sel| -> vecsensor::Result<f64> { score_logdet(&build_model(&basis, &sel)?) };
    let convex = score(select_convex(&basis, p, &opts)?)?;
    let greedy = score(select_vector_greedy(&basis, p)?)?;
    let mut random: Vec<f64> = (0..200)
        .map(|seed| score(select_random(n_per, s, p, seed)?))
        .collect::<vecsensor::Result<_>>()?;
    random.sort_by(f64::total_cmp);

    println!("ln|det C|: convex {convex:.4}  vector greedy {greedy:.4}  random median {:.4}", random[100]);
    Ok(())
}
