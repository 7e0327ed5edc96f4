//! Command-line front end: `pod`, `select`, `reconstruct`, `benchmark`.
//!
//! Exit statuses: 0 ok, 2 parse/input error, 3 dimension or constraint
//! violation, 4 missing required option, 5 numerical singularity.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::evaluate::{build_model, reconstruct, reconstruction_error};
use crate::experiments::{generate_synthetic_flow, run_random_benchmark, run_reconstruction_study};
use crate::io::{self, Study};
use crate::linalg::{thin_svd, Matrix};
use crate::pod::{compute_pod_with, Centering, PodBasis, SnapshotMatrix};
use crate::selection::{
    select_convex, select_random, select_scalar_greedy, select_vector_greedy, ConvexOptions, Method,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CONSTRAINT: i32 = 3;
pub const EXIT_MISSING: i32 = 4;
pub const EXIT_SINGULAR: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "vecsensor", version, about = "Sparse scalar/vector sensor placement over POD bases")]
pub struct Cli {
    /// Matrix CSV files carry (and are written with) a header line.
    #[arg(long, global = true)]
    pub header: bool,
    /// Skip temporal-mean subtraction in `pod`.
    #[arg(long, global = true)]
    pub no_center: bool,
    /// Seed for randomized methods.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated POD of a snapshot matrix (rows: stacked dofs, columns: time).
    Pod {
        #[arg(long)]
        snapshots: PathBuf,
        /// Number of stacked vector components s.
        #[arg(long, short = 's', default_value_t = 1)]
        components: usize,
        #[arg(long, short = 'r')]
        rank: usize,
        #[arg(long)]
        out_modes: PathBuf,
        #[arg(long)]
        out_sigma: PathBuf,
        /// Also write the subtracted temporal mean (n × 1).
        #[arg(long)]
        out_mean: Option<PathBuf>,
    },
    /// Choose sensor locations from a mode matrix.
    Select {
        #[arg(long)]
        modes: PathBuf,
        #[arg(long, short = 's', default_value_t = 1)]
        components: usize,
        /// Number of sensors p.
        #[arg(long, short = 'p')]
        sensors: usize,
        /// vector-greedy | scalar-greedy | random | convex
        #[arg(long)]
        method: String,
        /// Component block used by scalar-greedy when s > 1 (1-based).
        #[arg(long, default_value_t = 1)]
        scalar_component: usize,
        #[arg(long)]
        out: PathBuf,
        /// Location coordinates (one row per location, any dimension).
        #[arg(long, requires = "out_coords")]
        coords: Option<PathBuf>,
        /// Coordinates of the chosen sensors, in selection order.
        #[arg(long, requires = "coords")]
        out_coords: Option<PathBuf>,
    },
    /// Least-squares mode amplitudes from sparse observations.
    Reconstruct {
        #[arg(long)]
        modes: PathBuf,
        #[arg(long)]
        selection: PathBuf,
        /// (s·p) × N observations, rows in selection-file order.
        #[arg(long)]
        observations: PathBuf,
        #[arg(long)]
        out_amplitudes: PathBuf,
        /// True amplitudes (r × N); prints the relative error when given.
        #[arg(long)]
        true_amplitudes: Option<PathBuf>,
    },
    /// Run a seeded study from a key-value config file.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        /// JSON report path.
        #[arg(long)]
        out: PathBuf,
        /// Cell table; defaults to the report path with a `.csv` extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// A failed command: exit status plus a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::Io(_) => EXIT_PARSE,
            Error::Argument(_) => EXIT_CONSTRAINT,
            Error::Singular { .. }
            | Error::DegenerateDirection { .. }
            | Error::Exhausted { .. }
            | Error::NoConvergence { .. } => EXIT_SINGULAR,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn fail(status: i32, message: impl Into<String>) -> Failure {
    Failure {
        status,
        message: message.into(),
    }
}

fn with_path(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `stdout` and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::MissingRequiredArgument | ErrorKind::MissingSubcommand => EXIT_MISSING,
                _ => EXIT_PARSE,
            };
            if status == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return status;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.status
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Pod {
            snapshots,
            components,
            rank,
            out_modes,
            out_sigma,
            out_mean,
        } => {
            let data = io::read_matrix(snapshots, cli.header).map_err(with_path(snapshots))?;
            let x = SnapshotMatrix::new(data, *components)?;
            let centering = if cli.no_center {
                Centering::None
            } else {
                Centering::SubtractMean
            };
            let basis = compute_pod_with(&x, *rank, centering)?;
            io::write_matrix(out_modes, basis.modes(), cli.header)?;
            io::write_matrix(out_sigma, &Matrix::column(basis.singular_values()), cli.header)?;
            if let Some(path) = out_mean {
                io::write_matrix(path, &Matrix::column(basis.mean()), cli.header)?;
            }
            Ok(())
        }
        Command::Select {
            modes,
            components,
            sensors,
            method,
            scalar_component,
            out,
            coords,
            out_coords,
        } => {
            let method: Method = method.parse()?;
            let m = io::read_matrix(modes, cli.header).map_err(with_path(modes))?;
            let basis = PodBasis::from_modes(m, *components)?;
            let p = *sensors;
            let sel = match method {
                Method::VectorGreedy => select_vector_greedy(&basis, p)?,
                Method::ScalarGreedy => {
                    if *scalar_component == 0 || *scalar_component > *components {
                        return Err(fail(
                            EXIT_CONSTRAINT,
                            format!("--scalar-component must be in 1..={components}"),
                        ));
                    }
                    let block = crate::pod::component_block(&basis, scalar_component - 1)?;
                    select_scalar_greedy(&block, p)?.with_components(*components)?
                }
                Method::Random => {
                    let seed = cli.seed.ok_or_else(|| {
                        fail(EXIT_MISSING, "--seed is required for the random method")
                    })?;
                    select_random(basis.locations(), *components, p, seed)?
                }
                Method::Convex => select_convex(&basis, p, &ConvexOptions::default())?,
                Method::FullObservation => unreachable!("not selectable by name"),
            };
            fs::write(out, io::format_selection(&sel)).map_err(|e| Failure::from(Error::from(e)))?;
            if let (Some(src), Some(dst)) = (coords, out_coords) {
                let xy = io::read_matrix(src, cli.header).map_err(with_path(src))?;
                if xy.rows() != basis.locations() {
                    return Err(fail(
                        EXIT_CONSTRAINT,
                        format!("{} coordinate rows for {} locations", xy.rows(), basis.locations()),
                    ));
                }
                io::write_matrix(dst, &xy.select_rows(sel.locations())?, cli.header)?;
            }
            Ok(())
        }
        Command::Reconstruct {
            modes,
            selection,
            observations,
            out_amplitudes,
            true_amplitudes,
        } => {
            let m = io::read_matrix(modes, cli.header).map_err(with_path(modes))?;
            let text = fs::read_to_string(selection)
                .map_err(|e| with_path(selection)(Error::from(e)))?;
            let components = sniff_components(&text);
            if components == 0 || m.rows() % components != 0 {
                return Err(fail(
                    EXIT_CONSTRAINT,
                    format!("{} mode rows do not split into {components} components", m.rows()),
                ));
            }
            let sel = io::parse_selection(&text, m.rows() / components).map_err(with_path(selection))?;
            let basis = PodBasis::from_modes(m, components)?;
            let model = build_model(&basis, &sel)?;
            let y = io::read_matrix(observations, cli.header).map_err(with_path(observations))?;
            if y.rows() != model.c().rows() {
                return Err(fail(
                    EXIT_CONSTRAINT,
                    format!(
                        "observations have {} rows, selection observes {}",
                        y.rows(),
                        model.c().rows()
                    ),
                ));
            }
            let result = reconstruct(&model, &y)?;
            if result.rank_deficient && model.is_square() {
                let sv = thin_svd(model.c(), model.rank())?.singular_values;
                let cond = sv[0] / sv[sv.len() - 1];
                return Err(fail(
                    EXIT_SINGULAR,
                    format!("C is singular (condition number {cond:e}); no unique reconstruction"),
                ));
            }
            io::write_matrix(out_amplitudes, &result.amplitudes, cli.header)?;
            if let Some(path) = true_amplitudes {
                let truth = io::read_matrix(path, cli.header).map_err(with_path(path))?;
                let e = reconstruction_error(&truth, &result.amplitudes)?;
                writeln!(stdout, "{e:.16e}").map_err(|e| Failure::from(Error::from(e)))?;
            }
            Ok(())
        }
        Command::Benchmark { config, out, csv } => {
            let text = fs::read_to_string(config).map_err(|e| with_path(config)(Error::from(e)))?;
            let cfg = io::parse_config(&text).map_err(with_path(config))?;
            let report = match cfg.study {
                Study::RandomBenchmark => run_random_benchmark(&cfg.experiment)?,
                Study::Reconstruction => {
                    let e = &cfg.experiment;
                    let data = match &cfg.data {
                        Some(rel) => {
                            let path = config.parent().unwrap_or(Path::new(".")).join(rel);
                            let m = io::read_matrix(&path, cli.header).map_err(with_path(&path))?;
                            SnapshotMatrix::new(m, e.components)?
                        }
                        None => {
                            let max_r = e.r_values.iter().copied().max().unwrap_or(1);
                            generate_synthetic_flow(
                                e.n_per_component,
                                e.components,
                                cfg.true_rank.unwrap_or(max_r),
                                cfg.snapshots,
                                e.base_seed,
                                0.0,
                            )?
                        }
                    };
                    run_reconstruction_study(e, &data)?
                }
            };
            fs::write(out, report.to_json()).map_err(|e| Failure::from(Error::from(e)))?;
            let csv_path = csv.clone().unwrap_or_else(|| out.with_extension("csv"));
            fs::write(&csv_path, report.to_csv()).map_err(|e| Failure::from(Error::from(e)))?;
            Ok(())
        }
    }
}

/// Component count from the first data line of a selection file.
fn sniff_components(text: &str) -> usize {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .nth(1)
        .and_then(|l| l.split(',').nth(2))
        .map_or(1, |rows| rows.split(';').count())
}
