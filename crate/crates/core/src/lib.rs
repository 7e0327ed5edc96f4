//! Sparse sensor placement over POD bases.
//!
//! Sensors are chosen so that the reduced measurement matrix `C = H·U`
//! (the selected rows of a truncated POD mode matrix `U`) has a large
//! determinant. Scalar sensors observe one row of `U`; vector sensors
//! observe `s` co-located rows at once (e.g. both velocity components of a
//! PIV vector) and are picked by maximizing the hypervolume those rows add.
//!
//! Module map:
//!
//! - [`linalg`]: dense kernels (deflation, thin SVD, log-det, least squares)
//! - [`pod`]: snapshot matrices and truncated POD bases
//! - [`selection`]: scalar greedy, vector greedy, random and convex selection
//! - [`evaluate`]: measurement model, log-det score, reconstruction and its error
//! - [`experiments`]: seeded benchmark and reconstruction studies
//! - [`io`]: CSV matrix/selection files and the benchmark config format

pub mod error;
pub mod linalg;
pub mod pod;
pub mod selection;
pub mod cli;
pub mod evaluate;
pub mod experiments;
pub mod io;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use evaluate::{build_model, reconstruct, reconstruction_error, score_logdet, MeasurementModel};
pub use pod::{compute_pod, PodBasis, SnapshotMatrix};
pub use selection::{
    select_convex, select_random, select_scalar_greedy, select_vector_greedy, Method,
    SensorSelection,
};
