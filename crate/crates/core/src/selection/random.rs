use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

use super::{check_budget, Method, SensorSelection};

/// `p` distinct locations drawn uniformly without replacement.
///
/// Deterministic for a given seed (ChaCha8 stream).
pub fn select_random(
    n_locations: usize,
    components: usize,
    p: usize,
    seed: u64,
) -> Result<SensorSelection> {
    check_budget(Method::Random, p, components, usize::MAX, n_locations)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locations = index::sample(&mut rng, n_locations, p).into_vec();
    SensorSelection::new(locations, n_locations, components, Method::Random)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_draw() {
        for seed in [0, 7, u64::MAX] {
            let mut locs = select_random(6, 2, 6, seed).unwrap().locations().to_vec();
            locs.sort_unstable();
            assert_eq!(locs, (0..6).collect::<Vec<_>>());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = select_random(100, 1, 10, 42).unwrap();
        let b = select_random(100, 1, 10, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, select_random(100, 1, 10, 43).unwrap());
    }

    #[test]
    fn too_many_sensors() {
        assert!(select_random(3, 1, 4, 0).is_err());
    }
}
