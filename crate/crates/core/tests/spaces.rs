use std::collections::BTreeSet;

use alpha_core::schema::{Config, SpaceDesc};
use alpha_core::space::{build_named_space, CellKind, ClosedSet, NamedSpace, SpacePoint};
use alpha_core::topology::{arc_join, arc_joined_brute_force, is_clopen};
use alpha_core::{Rat, Space};
use proptest::prelude::*;

fn named(n: NamedSpace, h: i64) -> Space {
    build_named_space(&n, Rat::new(1, h)).unwrap()
}

fn bounds(s: &Space) -> Vec<(usize, f64, f64)> {
    s.cells()
        .iter()
        .filter_map(|c| match c.kind {
            CellKind::Arc { piece, t0, t1, .. } => Some((piece, t0, t1)),
            CellKind::Point(_) => None,
        })
        .collect()
}

#[test]
fn interval_quarter_mesh() {
    let s = named(NamedSpace::Interval, 4);
    assert_eq!(s.cell_count(), 8);
    assert!(s.landmark_point("-1").is_ok() && s.landmark_point("1").is_ok());
    let b = bounds(&s);
    assert_eq!((b[0].1, b[7].2), (-1.0, 1.0));
    for w in b.windows(2) {
        assert_eq!(w[0].2, w[1].1);
    }
}

#[test]
fn sine_limit_arc_is_separate_from_laps() {
    let s = named(NamedSpace::Sine { pieces: 3 }, 8);
    let ab = s.landmark_cells("[a,b]").unwrap();
    for k in 1..=3 {
        let lap = s.landmark_cells(&format!("P_{k}")).unwrap();
        assert!(lap.len() >= 4);
        assert!(lap.is_disjoint(&ab));
    }
}

#[test]
fn shift_cloud_truncation_points() {
    let s = named(NamedSpace::ShiftCloud { n_max: 5, m_max: 5 }, 1);
    for l in ["(0,0)", "(1,0)", "(2,0)", "(1/3,1/5)"] {
        assert!(s.point_by_label(l).is_some(), "{l}");
    }
    assert!(s.point_by_label("(1/6,0)").is_none());
    assert!(s.point_by_label("(1/3,1/6)").is_none());
}

#[test]
fn shift_cloud_needs_n_at_least_m() {
    assert!(build_named_space(&NamedSpace::ShiftCloud { n_max: 3, m_max: 5 }, Rat::new(1, 1)).is_err());
}

#[test]
fn zero_mesh_rejected() {
    assert!(build_named_space(&NamedSpace::Interval, Rat::new(0, 1)).is_err());
}

#[test]
fn refine_interval() {
    let s = named(NamedSpace::Interval, 2);
    assert_eq!(bounds(&s.refine(2).unwrap()), bounds(&named(NamedSpace::Interval, 4)));
    assert!(s.refine(0).is_err());
}

#[test]
fn refine_twice_equals_refine_by_four() {
    let s = named(NamedSpace::ExtendedSine { pieces: 3 }, 4);
    let a = bounds(&s.refine(2).unwrap().refine(2).unwrap());
    let b = bounds(&s.refine(4).unwrap());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.0, y.0);
        assert!((x.1 - y.1).abs() < 1e-12 && (x.2 - y.2).abs() < 1e-12);
    }
}

#[test]
fn refined_cells_lie_in_parents() {
    let s = named(NamedSpace::Sine { pieces: 3 }, 4);
    let r = s.refine(3).unwrap();
    for c in 0..r.cell_count() {
        let p = r.parent_in(&s, c);
        let parent_line = s.cell_polyline(p, 64);
        for q in r.cell_polyline(c, 4) {
            let d = alpha_core::geometry::point_polyline_dist(q, &parent_line);
            assert!(d < 1e-3, "cell {c} strays {d} from parent");
        }
    }
}

#[test]
fn refine_preserves_landmarks() {
    let s = named(NamedSpace::ChainOfSines { curves: 3, pieces: 3 }, 4);
    let r = s.refine(2).unwrap();
    for name in ["A_1", "[a_2,b_2]", "S_3", "s_inf"] {
        let coarse = s.landmark_cells(name).unwrap();
        let fine = r.landmark_cells(name).unwrap();
        for c in 0..r.cell_count() {
            if fine.contains(&c) {
                assert!(coarse.contains(&r.parent_in(&s, c)), "{name} cell {c}");
            }
        }
    }
}

#[test]
fn clopen_examples() {
    let s = named(NamedSpace::Sine { pieces: 4 }, 8);
    assert!(!is_clopen(&s, &s.landmark_cells("[a,b]").unwrap()));
    assert!(is_clopen(&s, &s.all_cells()));
}

#[test]
fn arc_join_examples() {
    let i = named(NamedSpace::Interval, 4);
    let left: BTreeSet<usize> = (0..4).collect();
    assert_eq!(arc_join(&i, &left).unwrap(), Some(vec![3, 4]));
    let s = named(NamedSpace::Sine { pieces: 4 }, 8);
    assert_eq!(arc_join(&s, &s.landmark_cells("[a,b]").unwrap()).unwrap(), None);
    let e = named(NamedSpace::ExtendedSine { pieces: 4 }, 8);
    assert_eq!(arc_join(&e, &e.landmark_cells("[a,c]").unwrap()).unwrap(), None);
    assert!(arc_join(&i, &BTreeSet::new()).is_err());
}

#[test]
fn distance_examples() {
    let i = named(NamedSpace::Interval, 4);
    let one = i.landmark_point("1").unwrap();
    let minus = ClosedSet::points([i.landmark_point("-1").unwrap()]);
    assert_eq!(i.distance_to_set(one, &minus).unwrap(), 2.0);
    assert_eq!(i.distance_to_set(one, &ClosedSet::points([one])).unwrap(), 0.0);
    let f = named(NamedSpace::ShiftCloud { n_max: 5, m_max: 5 }, 1);
    let p = SpacePoint::Isolated(f.point_by_label("(1/3,1/3)").unwrap());
    let origin = ClosedSet::points([f.landmark_point("origin").unwrap()]);
    assert!((f.distance_to_set(p, &origin).unwrap() - 2f64.sqrt() / 3.0).abs() < 1e-12);
}

#[test]
fn arc_adjacency_is_symmetric() {
    for s in [named(NamedSpace::Z { curves: 3, pieces: 3 }, 8), named(NamedSpace::ExtendedSine { pieces: 3 }, 8)] {
        for c in 0..s.cell_count() {
            for &d in s.arc_neighbors(c) {
                assert!(s.arc_neighbors(d).contains(&c));
            }
        }
    }
}

#[test]
fn config_round_trip() {
    let cfg = Config { space: SpaceDesc::from_named(&NamedSpace::Z { curves: 4, pieces: 6 }, Rat::new(1, 128)), map: None };
    let text = cfg.to_toml().unwrap();
    assert_eq!(Config::from_toml(&text).unwrap(), cfg);
}

proptest! {
    #[test]
    fn clopen_is_symmetric_under_complement(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
        let s = named(NamedSpace::ExtendedSine { pieces: 2 }, 4);
        let n = s.cell_count();
        let a: BTreeSet<usize> = (0..n).filter(|&c| bits[c % bits.len()]).collect();
        let b: BTreeSet<usize> = (0..n).filter(|c| !a.contains(c)).collect();
        prop_assert_eq!(is_clopen(&s, &a), is_clopen(&s, &b));
    }

    #[test]
    fn arc_join_matches_brute_force(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
        let s = named(NamedSpace::Sine { pieces: 2 }, 4);
        let n = s.cell_count();
        let a: BTreeSet<usize> = (0..n).filter(|&c| bits[c % bits.len()]).collect();
        prop_assume!(!a.is_empty() && a.len() < n);
        prop_assert_eq!(arc_join(&s, &a).unwrap().is_some(), arc_joined_brute_force(&s, &a));
    }
}
