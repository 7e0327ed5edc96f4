//! Snapshots → POD → sensors → reconstruction, exporting plot-ready CSVs:
//! sensor coordinates on a grid and true vs reconstructed amplitude series.
//!
//!     cargo run --example pod_pipeline -- [out-dir]

use std::path::PathBuf;

use vecsensor::evaluate::{observe, ObservationNoise};
use vecsensor::experiments::generate_synthetic_flow;
use vecsensor::io::{format_selection, write_matrix};
use vecsensor::pod::{compute_pod, mode_amplitudes};
use vecsensor::{build_model, reconstruct, reconstruction_error, select_vector_greedy, Matrix};

fn main() -> vecsensor::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "pod_pipeline_out".into()));
    std::fs::create_dir_all(&out)?;

    // A 20 × 15 grid of two-component (u, v) probes.
    let (nx, ny, r) = (20, 15, 10);
    let flow = generate_synthetic_flow(nx * ny, 2, 14, 200, 9, 1e-4)?;
    let basis = compute_pod(&flow, r)?;
    let energy: f64 = basis.singular_values().iter().map(|s| s * s).sum();
    let total = flow.centered(basis.mean())?.frobenius_norm().powi(2);
    println!("POD r={r}: {:.4}% of fluctuation energy", 100.0 * energy / total);

    let sel = select_vector_greedy(&basis, r / 2)?;
    let model = build_model(&basis, &sel)?;
    let y = observe(&basis, &sel, &flow, Some(ObservationNoise { sigma: 1e-3, seed: 1 }))?;
    let rec = reconstruct(&model, &y)?;
    let truth = mode_amplitudes(&basis, &flow)?;
    println!(
        "{} sensors at {:?}, relative amplitude error {:.3e}",
        sel.len(),
        sel.locations(),
        reconstruction_error(&truth, &rec.amplitudes)?
    );

    let coords = Matrix::from_fn(sel.len(), 2, |k, d| {
        let loc = sel.locations()[k];
        if d == 0 { (loc % nx) as f64 } else { (loc / nx) as f64 }
    });
    std::fs::write(out.join("selection.csv"), format_selection(&sel))?;
    write_matrix(&out.join("sensor_xy.csv"), &coords, false)?;
    write_matrix(&out.join("amplitudes_true.csv"), &truth.transpose(), false)?;
    write_matrix(&out.join("amplitudes_reconstructed.csv"), &rec.amplitudes.transpose(), false)?;
    println!("wrote selection, sensor_xy and amplitude series (one row per snapshot) to {}", out.display());
    Ok(())
}
