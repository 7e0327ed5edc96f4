use crate::error::{arg_err, Error, Result};
use crate::linalg::{axpy, deflate_in_place, degeneracy_floor, dot, norm_sq, Matrix};
use crate::pod::PodBasis;

use super::{check_budget, Method, SensorSelection};

#[inline]
fn is_live(norm_sq: f64, floor: f64) -> bool {
    norm_sq > 0.0 && norm_sq >= floor
}

/// Greedy scalar-sensor selection by Gram-Schmidt deflation (QDEIM order).
///
/// Each step takes the row of the working matrix with the largest squared
/// norm (lowest index on ties), then removes that row's direction from
/// every row. `candidate` is `locations × r`; the result has one component.
pub fn select_scalar_greedy(candidate: &Matrix, p: usize) -> Result<SensorSelection> {
    check_budget(Method::ScalarGreedy, p, 1, candidate.cols(), candidate.rows())?;
    let floor = degeneracy_floor(candidate);
    let mut work = candidate.clone();
    let mut taken = vec![false; work.rows()];
    let mut locations = Vec::with_capacity(p);
    let mut gains = Vec::with_capacity(p);

    for step in 0..p {
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in work.row_iter().enumerate() {
            if taken[i] {
                continue;
            }
            let nsq = norm_sq(row);
            if is_live(nsq, floor) && best.is_none_or(|(_, b)| nsq > b) {
                best = Some((i, nsq));
            }
        }
        let (i, gain) = best.ok_or(Error::Exhausted { step })?;
        taken[i] = true;
        locations.push(i);
        gains.push(gain);
        let v = work.row(i).to_vec();
        deflate_in_place(&mut work, &v, floor).map_err(|_| Error::Exhausted { step })?;
    }

    Ok(SensorSelection::new(locations, candidate.rows(), 1, Method::ScalarGreedy)?.with_gains(gains))
}

/// Greedy vector-sensor selection maximizing the hypervolume each location adds.
pub fn select_vector_greedy(basis: &PodBasis, p: usize) -> Result<SensorSelection> {
    vector_greedy_on(basis.modes(), basis.components(), p)
}

/// Vector greedy on a raw stacked candidate matrix with `components` blocks.
///
/// For every unselected location the gain `J_i` is the product of the squared
/// norms of its `s` rows after sequential Gram-Schmidt among themselves
/// (on the current working matrix). The location with the largest `J_i` is
/// taken and the working matrix is deflated by each of its rows in turn. A
/// location with any degenerate factor has `J_i = 0` and is never chosen.
pub fn vector_greedy_on(candidate: &Matrix, components: usize, p: usize) -> Result<SensorSelection> {
    if components == 0 || candidate.rows() % components != 0 {
        return arg_err(format!(
            "{} rows cannot be split into {components} component blocks",
            candidate.rows()
        ));
    }
    let per = candidate.rows() / components;
    check_budget(Method::VectorGreedy, p, components, candidate.cols(), per)?;
    let floor = degeneracy_floor(candidate);
    let mut work = candidate.clone();
    let mut taken = vec![false; per];
    let mut locations = Vec::with_capacity(p);
    let mut gains = Vec::with_capacity(p);
    let mut scratch = vec![vec![0.0; candidate.cols()]; components];

    for step in 0..p {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..per {
            if taken[i] {
                continue;
            }
            let j = location_gain(&work, i, per, floor, &mut scratch);
            if j > 0.0 && best.is_none_or(|(_, b)| j > b) {
                best = Some((i, j));
            }
        }
        let (i, gain) = best.ok_or(Error::Exhausted { step })?;
        taken[i] = true;
        locations.push(i);
        gains.push(gain);
        for k in 0..components {
            let v = work.row(i + k * per).to_vec();
            deflate_in_place(&mut work, &v, floor).map_err(|_| Error::Exhausted { step })?;
        }
    }

    Ok(SensorSelection::new(locations, per, components, Method::VectorGreedy)?.with_gains(gains))
}

/// `J_i` for location `i` of the working matrix.
fn location_gain(work: &Matrix, i: usize, per: usize, floor: f64, rows: &mut [Vec<f64>]) -> f64 {
    let s = rows.len();
    for (k, buf) in rows.iter_mut().enumerate() {
        buf.copy_from_slice(work.row(i + k * per));
    }
    let mut gain = 1.0;
    for k in 0..s {
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot = &head[k];
        let nsq = norm_sq(pivot);
        if !is_live(nsq, floor) {
            return 0.0;
        }
        gain *= nsq;
        for other in tail.iter_mut() {
            let c = dot(other, pivot) / nsq;
            axpy(-c, pivot, other);
        }
    }
    gain
}
