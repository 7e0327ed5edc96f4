//! Text file formats.
//!
//! Matrix files are comma-separated, one matrix row per line, every value
//! written with 17 significant digits (`{:.16e}`) so that any finite `f64`
//! survives a write/read round trip bit for bit. An optional header line
//! (`c1,c2,…`) is written and skipped only when asked for.
//!
//! Selection files carry the header `rank,location,row_indices`, one line per
//! sensor in selection order, with the observed rows joined by `;`.
//!
//! Benchmark configs are flat `key = value` lines; `#` starts a comment and
//! lists are comma-separated.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{BenchMethod, ExperimentConfig};
use crate::linalg::Matrix;
use crate::selection::SensorSelection;

fn parse_err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        column,
        message: message.into(),
    })
}

/// Parses matrix CSV text. Blank lines are ignored; line numbers in errors
/// are 1-based physical lines, columns are 1-based field positions.
pub fn parse_matrix(text: &str, header: bool) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut skipped_header = !header;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !skipped_header {
            skipped_header = true;
            continue;
        }
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            let field = field.trim();
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                Ok(_) => return parse_err(line_no, col + 1, format!("non-finite value `{field}`")),
                Err(_) => return parse_err(line_no, col + 1, format!("not a number: `{field}`")),
            }
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return parse_err(
                    line_no,
                    row.len().min(first.len()) + 1,
                    format!("expected {} fields, found {}", first.len(), row.len()),
                );
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return parse_err(1, 1, "no data rows");
    }
    Matrix::from_rows(&rows)
}

pub fn format_matrix(m: &Matrix, header: bool) -> String {
    let mut out = String::with_capacity(m.rows() * m.cols() * 25);
    if header {
        let names: Vec<String> = (1..=m.cols()).map(|j| format!("c{j}")).collect();
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for row in m.row_iter() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path, header: bool) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text, header)
}

pub fn write_matrix(path: &Path, m: &Matrix, header: bool) -> Result<()> {
    fs::write(path, format_matrix(m, header)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub const SELECTION_HEADER: &str = "rank,location,row_indices";

pub fn format_selection(sel: &SensorSelection) -> String {
    let mut out = format!("{SELECTION_HEADER}\n");
    for (k, &loc) in sel.locations().iter().enumerate() {
        let rows: Vec<String> = sel.rows_of(k).iter().map(usize::to_string).collect();
        out.push_str(&format!("{},{},{}\n", k + 1, loc, rows.join(";")));
    }
    out
}

/// Parses a selection file against a stacked layout with `n_locations`
/// locations. The component count is taken from the row lists, which must
/// match `location + k·n_locations` exactly.
pub fn parse_selection(text: &str, n_locations: usize) -> Result<SensorSelection> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == SELECTION_HEADER => {}
        Some((i, _)) => return parse_err(i + 1, 1, format!("expected header `{SELECTION_HEADER}`")),
        None => return parse_err(1, 1, "empty selection file"),
    }
    let mut locations = Vec::new();
    let mut components = None;
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = raw.trim().split(',').collect();
        if fields.len() != 3 {
            return parse_err(line_no, 1, format!("expected 3 fields, found {}", fields.len()));
        }
        let int = |col: usize, s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .or_else(|_| parse_err(line_no, col, format!("not a non-negative integer: `{s}`")))
        };
        let rank = int(1, fields[0])?;
        if rank != locations.len() + 1 {
            return parse_err(line_no, 1, format!("rank {rank} out of sequence"));
        }
        let loc = int(2, fields[1])?;
        let rows: Vec<usize> = fields[2]
            .split(';')
            .map(|s| int(3, s))
            .collect::<Result<_>>()?;
        let s = *components.get_or_insert(rows.len());
        if rows.len() != s {
            return parse_err(line_no, 3, format!("expected {s} row indices, found {}", rows.len()));
        }
        let expected: Vec<usize> = (0..s).map(|k| loc + k * n_locations).collect();
        if rows != expected {
            return parse_err(
                line_no,
                3,
                format!("row indices {rows:?} do not match location {loc} with {n_locations} locations"),
            );
        }
        locations.push(loc);
    }
    let Some(components) = components else {
        return parse_err(1, 1, "selection file has no sensors");
    };
    SensorSelection::untagged(locations, n_locations, components)
}

pub fn read_selection(path: &Path, n_locations: usize) -> Result<SensorSelection> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_selection(&text, n_locations)
}

/// Which study a benchmark config runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Study {
    #[default]
    RandomBenchmark,
    Reconstruction,
}

/// Parsed benchmark config: the experiment plus the data source for the
/// reconstruction study.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub experiment: ExperimentConfig,
    pub study: Study,
    /// Snapshot CSV for the reconstruction study; relative paths resolve
    /// against the config file's directory.
    pub data: Option<PathBuf>,
    /// Synthetic data: snapshot count (default 100).
    pub snapshots: usize,
    /// Synthetic data: true rank (default: largest r).
    pub true_rank: Option<usize>,
}

pub const CONFIG_KEYS: [&str; 12] = [
    "study",
    "n_per_component",
    "s",
    "components",
    "r_values",
    "trials",
    "base_seed",
    "methods",
    "noise_sigma",
    "data",
    "snapshots",
    "true_rank",
];

pub fn parse_config(text: &str) -> Result<BenchmarkConfig> {
    let mut cfg = BenchmarkConfig {
        experiment: ExperimentConfig::default(),
        study: Study::default(),
        data: None,
        snapshots: 100,
        true_rank: None,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return parse_err(line_no, 1, format!("expected `key = value`, got `{line}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        let value_col = raw.find('=').map_or(1, |i| i + 2);
        let bad = |what: &str| -> Error {
            Error::Parse {
                line: line_no,
                column: value_col,
                message: format!("invalid value for `{key}`: {what}"),
            }
        };
        let uint = |v: &str| v.parse::<usize>().map_err(|_| bad(v));
        let e = &mut cfg.experiment;
        match key {
            "study" => {
                cfg.study = match value {
                    "random-benchmark" => Study::RandomBenchmark,
                    "reconstruction" => Study::Reconstruction,
                    other => return Err(bad(other)),
                }
            }
            "n_per_component" => e.n_per_component = uint(value)?,
            "s" | "components" => e.components = uint(value)?,
            "r_values" => {
                e.r_values = value
                    .split(',')
                    .map(|v| uint(v.trim()))
                    .collect::<Result<_>>()?
            }
            "trials" => e.trials = uint(value)?,
            "base_seed" => e.base_seed = value.parse().map_err(|_| bad(value))?,
            "methods" => {
                e.methods = value
                    .split(',')
                    .map(|v| v.trim().parse::<BenchMethod>().map_err(|_| bad(v.trim())))
                    .collect::<Result<_>>()?
            }
            "noise_sigma" => {
                e.noise_sigma = value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite() && *v >= 0.0)
                    .ok_or_else(|| bad(value))?
            }
            "data" => cfg.data = Some(PathBuf::from(value)),
            "snapshots" => cfg.snapshots = uint(value)?,
            "true_rank" => cfg.true_rank = Some(uint(value)?),
            unknown => {
                let col = raw.find(unknown).map_or(1, |i| i + 1);
                return parse_err(line_no, col, format!("unknown key `{unknown}`"));
            }
        }
    }
    Ok(cfg)
}
