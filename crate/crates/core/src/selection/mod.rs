//! Sensor selection strategies.
//!
//! All four strategies return a [`SensorSelection`]: an ordered list of
//! location indices in `[0, n/s)`. A sensor at location `i` observes rows
//! `i + k·(n/s)` for every component `k` of the stacked mode matrix.

mod convex;
mod greedy;
mod random;

pub use convex::{select_convex, solve_relaxation, ConvexOptions, Relaxation};
pub use greedy::{select_scalar_greedy, select_vector_greedy, vector_greedy_on};
pub use random::select_random;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};

/// Which strategy produced a selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ScalarGreedy,
    VectorGreedy,
    Random,
    Convex,
    /// Every location observed; the reference for reconstruction studies.
    FullObservation,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::ScalarGreedy,
        Method::VectorGreedy,
        Method::Random,
        Method::Convex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ScalarGreedy => "scalar-greedy",
            Method::VectorGreedy => "vector-greedy",
            Method::Random => "random",
            Method::Convex => "convex",
            Method::FullObservation => "full-observation",
        }
    }

    /// Methods that maximize a determinant and therefore need `s·p ≤ r`.
    pub fn is_determinant_based(self) -> bool {
        !matches!(self, Method::Random | Method::FullObservation)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown selection method `{s}`")))
    }
}

/// Ordered sensor locations plus the bookkeeping needed to map them to
/// rows of the stacked mode matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSelection {
    locations: Vec<usize>,
    n_locations: usize,
    components: usize,
    method: Option<Method>,
    gains: Vec<f64>,
    relaxation_objective: Option<f64>,
}

impl SensorSelection {
    /// Validates distinctness and range of `locations`.
    pub fn new(
        locations: Vec<usize>,
        n_locations: usize,
        components: usize,
        method: Method,
    ) -> Result<Self> {
        if components == 0 {
            return arg_err("component count must be at least 1");
        }
        let mut seen = vec![false; n_locations];
        for &loc in &locations {
            if loc >= n_locations {
                return arg_err(format!(
                    "location {loc} out of range for {n_locations} locations"
                ));
            }
            if std::mem::replace(&mut seen[loc], true) {
                return arg_err(format!("location {loc} selected twice"));
            }
        }
        Ok(SensorSelection {
            locations,
            n_locations,
            components,
            method: Some(method),
            gains: Vec::new(),
            relaxation_objective: None,
        })
    }

    /// A selection with no producing method, e.g. one read from a file.
    pub fn untagged(locations: Vec<usize>, n_locations: usize, components: usize) -> Result<Self> {
        let mut sel = SensorSelection::new(locations, n_locations, components, Method::Random)?;
        sel.method = None;
        Ok(sel)
    }

    /// Every location, in index order.
    pub fn all(n_locations: usize, components: usize) -> Result<Self> {
        SensorSelection::new(
            (0..n_locations).collect(),
            n_locations,
            components,
            Method::FullObservation,
        )
    }

    pub(crate) fn with_gains(mut self, gains: Vec<f64>) -> Self {
        self.gains = gains;
        self
    }

    pub(crate) fn with_relaxation_objective(mut self, value: f64) -> Self {
        self.relaxation_objective = Some(value);
        self
    }

    pub fn locations(&self) -> &[usize] {
        &self.locations
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn n_locations(&self) -> usize {
        self.n_locations
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// `None` for [`SensorSelection::untagged`] selections.
    pub fn method(&self) -> Option<Method> {
        self.method
    }

    /// Per-step greedy gains: `‖v_i‖²` for scalar greedy, `J_i` for vector
    /// greedy. Their product equals `det(C·Cᵀ)` of the final selection.
    /// Empty for non-greedy methods.
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    /// Relaxed objective `ln det(Σ zᵢ AᵢᵀAᵢ + εI)` for convex selections.
    pub fn relaxation_objective(&self) -> Option<f64> {
        self.relaxation_objective
    }

    /// Rows of the stacked mode matrix observed by sensor `k`.
    pub fn rows_of(&self, k: usize) -> Vec<usize> {
        let loc = self.locations[k];
        (0..self.components)
            .map(|j| loc + j * self.n_locations)
            .collect()
    }

    /// All observed rows, sensor by sensor.
    pub fn selected_rows(&self) -> Vec<usize> {
        (0..self.len()).flat_map(|k| self.rows_of(k)).collect()
    }

    /// The same locations read as `components`-component sensors.
    ///
    /// Used when a selection made on a single component block is applied
    /// to the stacked matrix.
    pub fn with_components(&self, components: usize) -> Result<SensorSelection> {
        if components == 0 {
            return arg_err("component count must be at least 1");
        }
        Ok(SensorSelection {
            components,
            ..self.clone()
        })
    }

    /// Selection truncated to its first `p` sensors.
    pub fn prefix(&self, p: usize) -> SensorSelection {
        let p = p.min(self.len());
        SensorSelection {
            locations: self.locations[..p].to_vec(),
            gains: self.gains.iter().take(p).copied().collect(),
            ..self.clone()
        }
    }
}

/// `p ≥ 1`, `p ≤ n/s`, and `s·p ≤ r` for determinant-based methods.
pub fn check_budget(
    method: Method,
    p: usize,
    components: usize,
    rank: usize,
    n_locations: usize,
) -> Result<()> {
    if p == 0 {
        return arg_err("sensor count must be at least 1");
    }
    if p > n_locations {
        return arg_err(format!(
            "{p} sensors requested but only {n_locations} locations exist"
        ));
    }
    if method.is_determinant_based() && components * p > rank {
        return arg_err(format!(
            "s·p ≤ r violated: s={components}, p={p}, r={rank}"
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selected_rows_follow_component_layout() {
        let sel = SensorSelection::new(vec![2, 0], 5, 2, Method::Random).unwrap();
        assert_eq!(sel.selected_rows(), vec![2, 7, 0, 5]);
        assert_eq!(sel.selected_rows().len(), sel.components() * sel.len());
    }

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(SensorSelection::new(vec![1, 1], 3, 1, Method::Random).is_err());
        assert!(SensorSelection::new(vec![3], 3, 1, Method::Random).is_err());
        assert!(SensorSelection::new(vec![0], 3, 0, Method::Random).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("qr".parse::<Method>().is_err());
    }

    #[test]
    fn budget_rules() {
        assert!(check_budget(Method::VectorGreedy, 2, 2, 4, 10).is_ok());
        assert!(check_budget(Method::VectorGreedy, 3, 2, 4, 10).is_err());
        assert!(check_budget(Method::Random, 3, 2, 4, 10).is_ok());
        assert!(check_budget(Method::Random, 11, 2, 4, 10).is_err());
        assert!(check_budget(Method::ScalarGreedy, 0, 1, 4, 10).is_err());
    }

    #[test]
    fn lifting_keeps_locations() {
        let sel = SensorSelection::new(vec![1], 4, 1, Method::ScalarGreedy).unwrap();
        let lifted = sel.with_components(2).unwrap();
        assert_eq!(lifted.selected_rows(), vec![1, 5]);
        assert_eq!(lifted.method(), Some(Method::ScalarGreedy));
    }
}
