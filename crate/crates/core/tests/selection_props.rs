mod common;

use common::{brute_force_step, gaussian, gram_det, location_rows, rel_close, rng};
use proptest::prelude::*;
use vecsensor::linalg::{log_abs_det, Matrix};
use vecsensor::pod::PodBasis;
use vecsensor::selection::{
    select_convex, select_random, select_scalar_greedy, select_vector_greedy, vector_greedy_on,
    ConvexOptions,
};
use vecsensor::{build_model, score_logdet};

#[test]
fn scalar_greedy_is_stepwise_optimal() {
    let m = gaussian(30, 4, &mut rng(21));
    let sel = select_scalar_greedy(&m, 4).unwrap();
    for step in 0..4 {
        let chosen = &sel.locations()[..step];
        let (arg, best, _) = brute_force_step(&m, 30, 1, chosen, 1e-9);
        assert_eq!(sel.locations()[step], arg, "step {step}");
        let mut rows: Vec<Vec<f64>> = chosen.iter().map(|&i| m.row(i).to_vec()).collect();
        rows.push(m.row(arg).to_vec());
        assert!(rel_close(gram_det(&rows), best, 1e-9));
    }
}

#[test]
fn vector_greedy_matches_gram_oracle_and_product_identity() {
    let m = gaussian(16, 4, &mut rng(22));
    let sel = vector_greedy_on(&m, 2, 2).unwrap();

    let dets: Vec<f64> = (0..8).map(|i| gram_det(&location_rows(&m, i, 8, 2))).collect();
    let first = (0..8).max_by(|&a, &b| dets[a].total_cmp(&dets[b]).then(b.cmp(&a))).unwrap();
    assert_eq!(sel.locations()[0], first);
    assert!(rel_close(sel.gains()[0], dets[first], 1e-9));

    let basis = PodBasis::from_modes(m, 2).unwrap();
    let c = build_model(&basis, &sel).unwrap();
    let det_sq = (2.0 * log_abs_det(c.c()).unwrap()).exp();
    let product: f64 = sel.gains().iter().product();
    assert!(rel_close(det_sq, product, 1e-8), "{det_sq} vs {product}");
}

#[test]
fn random_draws_are_uniform() {
    let mut counts = [0usize; 4];
    for seed in 0..10_000u64 {
        counts[select_random(4, 1, 1, seed).unwrap().locations()[0]] += 1;
    }
    // Binomial(10000, 1/4): σ = √1875.
    let sigma = (10_000.0f64 * 0.25 * 0.75).sqrt();
    for c in counts {
        assert!((c as f64 - 2500.0).abs() <= 4.0 * sigma, "{counts:?}");
    }
}

#[test]
fn convex_beats_most_random_selections() {
    let m = gaussian(16, 4, &mut rng(23));
    let basis = PodBasis::from_modes(m, 2).unwrap();
    let convex = select_convex(&basis, 2, &ConvexOptions::default()).unwrap();
    let score = score_logdet(&build_model(&basis, &convex).unwrap()).unwrap();
    let beaten = (0..100u64)
        .filter(|&seed| {
            let r = select_random(8, 2, 2, seed).unwrap();
            score >= score_logdet(&build_model(&basis, &r).unwrap()).unwrap()
        })
        .count();
    assert!(beaten >= 90, "convex beat only {beaten}/100");
}

/// Moves location `i` to `perm[i]` in every component block.
fn permute_locations(m: &Matrix, perm: &[usize], s: usize) -> Matrix {
    let per = perm.len();
    let mut out = m.clone();
    for k in 0..s {
        for (i, &j) in perm.iter().enumerate() {
            out.row_mut(j + k * per).copy_from_slice(m.row(i + k * per));
        }
    }
    out
}

fn instance() -> impl Strategy<Value = (Matrix, usize, usize, u64)> {
    (1usize..=3, 2usize..=6, 0u64..u64::MAX).prop_flat_map(|(s, per_extra, seed)| {
        let r_max = (3 * s).min(9);
        (s..=r_max).prop_map(move |r| {
            let per = r + per_extra;
            let m = gaussian(s * per, r, &mut rng(seed));
            (m, s, r / s, seed)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn single_component_vector_equals_scalar(seed in any::<u64>(), n in 4usize..20, r in 1usize..=4) {
        let m = gaussian(n, r, &mut rng(seed));
        let v = vector_greedy_on(&m, 1, r).unwrap();
        let s = select_scalar_greedy(&m, r).unwrap();
        prop_assert_eq!(v.locations(), s.locations());
    }

    #[test]
    fn scale_leaves_choices_unchanged((m, s, p, _) in instance()) {
        let base = vector_greedy_on(&m, s, p).unwrap();
        let scalar = select_scalar_greedy(&m, p.min(m.cols())).unwrap();
        for c in [1e-3, 1.0, 1e3] {
            let scaled = m.scale(c);
            let v = vector_greedy_on(&scaled, s, p).unwrap();
            let sc = select_scalar_greedy(&scaled, p.min(m.cols())).unwrap();
            prop_assert_eq!(v.locations(), base.locations());
            prop_assert_eq!(sc.locations(), scalar.locations());
        }
    }

    #[test]
    fn square_logdet_shifts_by_r_ln_c(seed in any::<u64>(), s in 1usize..=3, p in 1usize..=3) {
        let r = s * p;
        let m = gaussian(s * (p + 3), r, &mut rng(seed));
        let sel = vector_greedy_on(&m, s, p).unwrap();
        let base = score_logdet(&build_model(&PodBasis::from_modes(m.clone(), s).unwrap(), &sel).unwrap()).unwrap();
        for c in [1e-3f64, 1e3] {
            let scaled = PodBasis::from_modes(m.scale(c), s).unwrap();
            let got = score_logdet(&build_model(&scaled, &sel).unwrap()).unwrap();
            prop_assert!((got - base - r as f64 * c.ln()).abs() <= 1e-9 * (1.0 + base.abs()));
        }
    }

    #[test]
    fn permutation_equivariance((m, s, p, seed) in instance()) {
        let per = m.rows() / s;
        let mut perm: Vec<usize> = (0..per).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut rng(seed ^ 0x5eed));
        let base = vector_greedy_on(&m, s, p).unwrap();
        let moved = vector_greedy_on(&permute_locations(&m, &perm, s), s, p).unwrap();
        let expect: Vec<usize> = base.locations().iter().map(|&i| perm[i]).collect();
        prop_assert_eq!(moved.locations(), &expect[..]);
    }

    #[test]
    fn greedy_selections_nest((m, s, p, _) in instance()) {
        let full = vector_greedy_on(&m, s, p).unwrap();
        for q in 1..p {
            prop_assert_eq!(&vector_greedy_on(&m, s, q).unwrap(), &full.prefix(q));
        }
        let r = m.cols();
        let scalar = select_scalar_greedy(&m, r).unwrap();
        for q in 1..r {
            prop_assert_eq!(&select_scalar_greedy(&m, q).unwrap(), &scalar.prefix(q));
        }
    }

    #[test]
    fn vector_greedy_is_stepwise_optimal((m, s, p, _) in instance()) {
        let per = m.rows() / s;
        let sel = vector_greedy_on(&m, s, p).unwrap();
        for step in 0..p {
            let (arg, _, _) = brute_force_step(&m, per, s, &sel.locations()[..step], 1e-9);
            prop_assert_eq!(sel.locations()[step], arg);
        }
    }

    #[test]
    fn selections_are_well_formed((m, s, p, seed) in instance()) {
        let basis = PodBasis::from_modes(m, s).unwrap();
        for sel in [
            select_vector_greedy(&basis, p).unwrap(),
            select_random(basis.locations(), s, p, seed).unwrap(),
        ] {
            let rows = sel.selected_rows();
            prop_assert_eq!(rows.len(), s * sel.len());
            prop_assert!(rows.iter().all(|&i| i < basis.dof()));
            let mut locs = sel.locations().to_vec();
            locs.sort_unstable();
            locs.dedup();
            prop_assert_eq!(locs.len(), p);
        }
    }
}
