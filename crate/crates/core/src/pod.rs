//! Snapshot matrices and truncated POD bases.
//!
//! A vector field with `s` components is stored stacked by component:
//! rows `[k·n/s, (k+1)·n/s)` hold component `k` at every spatial location,
//! so location `i` owns rows `i, i + n/s, …, i + (s−1)·n/s`.

use crate::error::{arg_err, Result};
use crate::linalg::{thin_svd, Matrix};

/// Columns are time instants, rows are stacked spatial degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    data: Matrix,
    components: usize,
}

impl SnapshotMatrix {
    pub fn new(data: Matrix, components: usize) -> Result<Self> {
        check_components(data.rows(), components)?;
        Ok(SnapshotMatrix { data, components })
    }

    /// Stacks per-component blocks `[X_1; X_2; …; X_s]`.
    pub fn from_components(blocks: &[Matrix]) -> Result<Self> {
        let rows = blocks.first().map_or(0, Matrix::rows);
        if blocks.iter().any(|b| b.rows() != rows) {
            return arg_err("component blocks must have equal row counts");
        }
        SnapshotMatrix::new(Matrix::vstack(blocks)?, blocks.len())
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn into_data(self) -> Matrix {
        self.data
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// `n/s`, the number of spatial locations.
    pub fn locations(&self) -> usize {
        self.data.rows() / self.components
    }

    pub fn dof(&self) -> usize {
        self.data.rows()
    }

    pub fn snapshots(&self) -> usize {
        self.data.cols()
    }

    /// Temporal mean of each row.
    pub fn row_means(&self) -> Vec<f64> {
        let n = self.data.cols() as f64;
        self.data.row_iter().map(|r| r.iter().sum::<f64>() / n).collect()
    }

    /// Snapshots with `offset` subtracted from every column.
    pub fn centered(&self, offset: &[f64]) -> Result<Matrix> {
        if offset.len() != self.data.rows() {
            return arg_err(format!(
                "offset length {} does not match {} rows",
                offset.len(),
                self.data.rows()
            ));
        }
        Ok(Matrix::from_fn(self.data.rows(), self.data.cols(), |i, j| {
            self.data[(i, j)] - offset[i]
        }))
    }
}

fn check_components(rows: usize, components: usize) -> Result<()> {
    if components == 0 {
        return arg_err("component count must be at least 1");
    }
    if rows % components != 0 {
        return arg_err(format!(
            "{rows} rows cannot be split into {components} equal component blocks"
        ));
    }
    Ok(())
}

/// Whether the temporal mean is removed before decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Centering {
    #[default]
    SubtractMean,
    None,
}

/// Truncated POD basis: `r` orthonormal spatial modes plus the offset that
/// was removed from the snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct PodBasis {
    modes: Matrix,
    singular_values: Vec<f64>,
    components: usize,
    mean: Vec<f64>,
}

impl PodBasis {
    /// Wraps an externally supplied mode matrix (e.g. read from disk).
    ///
    /// Orthonormality is not checked; singular values are left empty and
    /// the offset is zero.
    pub fn from_modes(modes: Matrix, components: usize) -> Result<Self> {
        check_components(modes.rows(), components)?;
        let n = modes.rows();
        Ok(PodBasis {
            modes,
            singular_values: Vec::new(),
            components,
            mean: vec![0.0; n],
        })
    }

    /// n × r
    pub fn modes(&self) -> &Matrix {
        &self.modes
    }

    /// Empty for bases built with [`PodBasis::from_modes`].
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn rank(&self) -> usize {
        self.modes.cols()
    }

    pub fn dof(&self) -> usize {
        self.modes.rows()
    }

    pub fn locations(&self) -> usize {
        self.modes.rows() / self.components
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Row indices observed by a sensor at `location`, one per component.
    pub fn location_rows(&self, location: usize) -> Vec<usize> {
        let per = self.locations();
        (0..self.components).map(|k| location + k * per).collect()
    }

    /// First `r` modes; keeps the offset and block layout.
    pub fn truncated(&self, r: usize) -> Result<PodBasis> {
        Ok(PodBasis {
            modes: self.modes.leading_cols(r)?,
            singular_values: self.singular_values.iter().take(r).copied().collect(),
            components: self.components,
            mean: self.mean.clone(),
        })
    }
}

/// Mean-subtracted POD of rank `r`.
pub fn compute_pod(snapshots: &SnapshotMatrix, r: usize) -> Result<PodBasis> {
    compute_pod_with(snapshots, r, Centering::SubtractMean)
}

pub fn compute_pod_with(
    snapshots: &SnapshotMatrix,
    r: usize,
    centering: Centering,
) -> Result<PodBasis> {
    let (n, big_n) = snapshots.data.shape();
    if r == 0 || r > n.min(big_n) {
        return arg_err(format!(
            "rank {r} outside 1..={} for {n} dofs and {big_n} snapshots",
            n.min(big_n)
        ));
    }
    let mean = match centering {
        Centering::SubtractMean => snapshots.row_means(),
        Centering::None => vec![0.0; n],
    };
    let centered = snapshots.centered(&mean)?;
    let svd = thin_svd(&centered, r)?;
    Ok(PodBasis {
        modes: svd.left,
        singular_values: svd.singular_values,
        components: snapshots.components,
        mean,
    })
}

/// Row block `U_j` of component `j` (zero-based), `(n/s) × r`.
pub fn component_block(basis: &PodBasis, j: usize) -> Result<Matrix> {
    if j >= basis.components {
        return arg_err(format!(
            "component {j} out of range for {} components",
            basis.components
        ));
    }
    let per = basis.locations();
    let rows: Vec<usize> = (j * per..(j + 1) * per).collect();
    basis.modes.select_rows(&rows)
}

/// True amplitudes `Uᵀ·(X − mean)`, one column per snapshot.
pub fn mode_amplitudes(basis: &PodBasis, snapshots: &SnapshotMatrix) -> Result<Matrix> {
    if snapshots.dof() != basis.dof() || snapshots.components != basis.components {
        return arg_err(format!(
            "snapshots ({} rows, {} components) do not match basis ({} rows, {} components)",
            snapshots.dof(),
            snapshots.components,
            basis.dof(),
            basis.components
        ));
    }
    let centered = snapshots.centered(&basis.mean)?;
    basis.modes.transpose().matmul(&centered)
}
