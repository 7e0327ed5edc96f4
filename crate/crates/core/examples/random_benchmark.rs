//! Paired log-det benchmark on Gaussian candidates, as a JSON report and a
//! CSV cell table.
//!
//!     cargo run --release --example random_benchmark -- [trials] [out-dir]

use std::path::PathBuf;

use vecsensor::experiments::{run_random_benchmark, BenchMethod, ExperimentConfig};

fn main() -> vecsensor::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|t| t.parse().ok()).unwrap_or(100);
    let out = args.next().map(PathBuf::from);

    let cfg = ExperimentConfig {
        trials,
        methods: vec![
            BenchMethod::VectorGreedy,
            BenchMethod::ScalarGreedy { component: 0 },
            BenchMethod::ScalarGreedy { component: 1 },
            BenchMethod::Random,
            BenchMethod::Convex,
        ],
        ..ExperimentConfig::default()
    };
    let report = run_random_benchmark(&cfg)?;

    println!("{:<28} {:>3} {:>3} {:>10} {:>8}", "method", "r", "p", "mean", "se");
    for c in &report.cells {
        println!(
            "{:<28} {:>3} {:>3} {:>10.4} {:>8.4}",
            c.method.to_string(),
            c.r,
            c.p,
            c.mean.unwrap_or(f64::NAN),
            c.standard_error().unwrap_or(f64::NAN)
        );
    }
    println!("{} trials in {:.2}s", cfg.trials, report.wall_time_secs);

    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("benchmark.json"), report.to_json())?;
        std::fs::write(dir.join("benchmark.csv"), report.to_csv())?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
