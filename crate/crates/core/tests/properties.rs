use std::sync::OnceLock;

use proptest::prelude::*;

use lineperc::field::{prime_power, Field};
use lineperc::percolation::{
    closure, greedy_one_by_one, one_by_one_verify, percolates, percolation_time,
};
use lineperc::random_models::{bernoulli_trials, bottleneck_of_order, tau_perc_linear};
use lineperc::{IncidencePlane, PointSet};

fn plane(q: u64) -> &'static IncidencePlane {
    static PLANES: OnceLock<Vec<IncidencePlane>> = OnceLock::new();
    let planes = PLANES.get_or_init(|| {
        [2u64, 3, 4, 5, 7]
            .iter()
            .map(|&q| IncidencePlane::pg2_of_order(q).unwrap())
            .collect()
    });
    planes
        .iter()
        .find(|p| p.order() == q as usize)
        .expect("cached order")
}

/// (q, r, B, A) with A ⊆ B.
fn nested_sets() -> impl Strategy<Value = (u64, usize, Vec<bool>, Vec<bool>)> {
    prop_oneof![Just(3u64), Just(5u64), Just(7u64)].prop_flat_map(|q| {
        let n = (q * q + q + 1) as usize;
        (
            Just(q),
            1..=q as usize + 1,
            prop::collection::vec(prop::bool::weighted(0.3), n),
            prop::collection::vec(any::<bool>(), n),
        )
    })
}

fn to_sets(p: &IncidencePlane, big: &[bool], keep: &[bool]) -> (PointSet, PointSet) {
    let b = p.point_set((0..big.len()).filter(|&i| big[i]));
    let a = p.point_set((0..big.len()).filter(|&i| big[i] && keep[i]));
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn closure_is_a_closure_operator((q, r, big, keep) in nested_sets()) {
        let p = plane(q);
        let (a, b) = to_sets(p, &big, &keep);
        let ca = closure(p, &a, r).closure;
        let cb = closure(p, &b, r).closure;
        prop_assert!(a.is_subset(&ca));
        prop_assert!(ca.is_subset(&cb));
        prop_assert_eq!(&closure(p, &ca, r).closure, &ca);
    }

    #[test]
    fn adding_points_never_slows_percolation((q, r, big, keep) in nested_sets()) {
        let p = plane(q);
        let (a, b) = to_sets(p, &big, &keep);
        if let Some(ta) = percolation_time(p, &a, r) {
            let tb = percolation_time(p, &b, r);
            prop_assert!(tb.is_some_and(|tb| tb <= ta));
        }
    }

    #[test]
    fn one_by_one_model_agrees((q, r, big, _keep) in nested_sets()) {
        let p = plane(q);
        let a = p.point_set((0..big.len()).filter(|&i| big[i]));
        let seq = greedy_one_by_one(p, &a, r);
        prop_assert_eq!(seq.is_some(), percolates(p, &a, r));
        if let Some(seq) = seq {
            prop_assert!(one_by_one_verify(p, &a, r, &seq).unwrap());
        }
    }

    #[test]
    fn binary_search_finds_first_percolating_prefix(q in prop_oneof![Just(3u64), Just(5u64)], r in 1usize..=4, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let p = plane(q);
        let mut order: Vec<usize> = (0..p.size()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let (tau_r, tau_perc) = bottleneck_of_order(p, r, &order);
        prop_assert!(tau_r <= tau_perc);
        prop_assert_eq!(tau_perc, tau_perc_linear(p, r, &order));
    }

    #[test]
    fn field_axioms_on_random_triples(qi in 0usize..18, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let orders: Vec<u64> = (2..=64).filter(|&q| prime_power(q).is_some()).collect();
        let q = orders[qi % orders.len()];
        let f = Field::new(q).unwrap();
        let (a, b, c) = (a % q as u32, b % q as u32, c % q as u32);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if b != 0 {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
        prop_assert_eq!(f.pow(a, q), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn coupled_bernoulli_samples_grow_with_p(p1 in 0.0f64..1.0, p2 in 0.0f64..1.0, seed in any::<u64>()) {
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let p = plane(5);
        let small = bernoulli_trials(p, 3, lo, 20, seed, 1).unwrap();
        let large = bernoulli_trials(p, 3, hi, 20, seed, 1).unwrap();
        for (s, l) in small.iter().zip(&large) {
            prop_assert!(s.size <= l.size);
            prop_assert!(!s.percolated || l.percolated);
        }
    }

    #[test]
    fn plane_files_round_trip(qi in 0usize..5) {
        let q = [2u64, 3, 4, 5, 7][qi];
        let p = plane(q);
        let text = serde_json::to_string(&p.to_file()).unwrap();
        let back = IncidencePlane::from_json(&text).unwrap();
        prop_assert_eq!(back.to_file(), p.to_file());
        let bare = { let mut f = p.to_file(); f.coordinates = None; f };
        let back = IncidencePlane::from_file(bare.clone()).unwrap();
        prop_assert!(back.coordinates().is_none());
        prop_assert_eq!(back.to_file(), bare);
    }
}
