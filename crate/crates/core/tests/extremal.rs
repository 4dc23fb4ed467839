use lineperc::bounds::{big_m_r_bounds, big_t_r_bounds, m_r_bounds, PlaneClass};
use lineperc::search::{
    find_max_nonpercolating, find_max_time, find_min_percolating, Budget, Strategy,
};
use lineperc::{IncidencePlane, PointSet};

/// Smallest nonempty point set with no tangent line, containing point 0,
/// of size at most `limit`.
///
/// Branches on the points of some tangent line: any tangent-free superset
/// must contain one of them.
fn smallest_tangent_free(plane: &IncidencePlane, limit: usize) -> Option<usize> {
    fn go(plane: &IncidencePlane, set: &mut PointSet, limit: usize, best: &mut Option<usize>) {
        let bound = best.map_or(limit, |b| b - 1);
        let tangent = (0..plane.size()).find(|&l| plane.points_on(l).intersection_len(set) == 1);
        let Some(l) = tangent else {
            *best = Some(set.len());
            return;
        };
        if set.len() >= bound {
            return;
        }
        for x in plane.points_on_list(l).to_vec() {
            let x = x as usize;
            if set.insert(x) {
                go(plane, set, limit, best);
                set.remove(x);
            }
        }
    }
    let mut set = plane.point_set([0]);
    let mut best = None;
    go(plane, &mut set, limit, &mut best);
    best
}

#[test]
fn max_nonpercolating_pg5_r5_is_21() {
    // a closed non-percolating set at r = q is the complement of a
    // nonempty tangent-free set
    let plane = IncidencePlane::pg2_of_order(5).unwrap();
    assert_eq!(smallest_tangent_free(&plane, 9), None);
    assert_eq!(smallest_tangent_free(&plane, 10), Some(10));
    let found = find_max_nonpercolating(&plane, 5, &Budget::default()).unwrap();
    assert_eq!((found.value, found.exact), (21, true));
    // strictly below the pencil value (q+1)(r-1)
    let report = big_m_r_bounds(5, 5, PlaneClass::Desarguesian).unwrap();
    assert_eq!(report.upper.value, 24);
    assert!(report.lower.value <= 21);
}

#[test]
fn tangent_free_oracle_on_small_planes() {
    // in PG(2,2) the complement of a line is the smallest tangent-free set;
    // in PG(2,4) a hyperoval has 6 points
    let fano = IncidencePlane::pg2_of_order(2).unwrap();
    assert_eq!(smallest_tangent_free(&fano, 7), Some(4));
    let pg4 = IncidencePlane::pg2_of_order(4).unwrap();
    assert_eq!(smallest_tangent_free(&pg4, 21), Some(6));
    // so M_4(PG(2,4)) = 21 - 6
    assert_eq!(
        find_max_nonpercolating(&pg4, 4, &Budget::default())
            .unwrap()
            .value,
        15
    );
}

#[test]
fn small_exact_values_respect_bounds() {
    for q in [2u64, 3, 4] {
        let plane = IncidencePlane::pg2_of_order(q).unwrap();
        for r in 1..=q as usize + 1 {
            let budget = Budget::default();
            let m = find_min_percolating(&plane, r, &budget).unwrap();
            let big_m = find_max_nonpercolating(&plane, r, &budget).unwrap();
            assert!(m.exact && big_m.exact);
            let mb = m_r_bounds(q, r as u64, PlaneClass::Desarguesian).unwrap();
            let bb = big_m_r_bounds(q, r as u64, PlaneClass::Desarguesian).unwrap();
            let (m, big_m) = (m.value as u64, big_m.value as u64);
            assert!(
                mb.lower.value <= m && m <= mb.upper.value,
                "m q={q} r={r}: {m}"
            );
            assert!(
                bb.lower.value <= big_m && big_m <= bb.upper.value,
                "M q={q} r={r}: {big_m}"
            );
            if let Some(e) = mb.exact {
                assert_eq!(e, m, "m q={q} r={r}");
            }
            if let Some(e) = bb.exact {
                assert_eq!(e, big_m, "M q={q} r={r}");
            }
            // every set of size M+1 percolates, so m <= M+1
            assert!(m <= big_m + 1);
        }
    }
}

#[test]
fn exact_times_on_pg4_respect_bounds() {
    let plane = IncidencePlane::pg2_of_order(4).unwrap();
    for r in 2..=4usize {
        let t = find_max_time(&plane, r, Strategy::Exact, &Budget::default(), 0).unwrap();
        assert!(t.exact);
        let b = big_t_r_bounds(4, r as u64, PlaneClass::Desarguesian).unwrap();
        assert!(
            b.lower.value <= t.value as u64 && t.value as u64 <= b.upper.value,
            "r={r}: {}",
            t.value
        );
        if let Some(e) = b.exact {
            assert_eq!(e, t.value as u64, "r={r}");
        }
    }
}
