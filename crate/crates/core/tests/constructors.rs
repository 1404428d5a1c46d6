use std::collections::BTreeSet;

use alpha_core::alpha::{alpha_enclosure, alpha_exact};
use alpha_core::constructors::*;
use alpha_core::cylinder::{parse_word, CylinderSet, CylinderSpace, EventuallyPeriodic};
use alpha_core::graph::{transition_graph, DEFAULT_SAMPLES};
use alpha_core::space::{build_named_space, ClosedSet, NamedSpace, SpacePoint};
use alpha_core::{Rat, Space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn interval(h: i64) -> Space {
    build_named_space(&NamedSpace::Interval, Rat::new(1, h)).unwrap()
}

fn enclosure(s: &Space, r: &Realization) -> BTreeSet<usize> {
    let g = transition_graph(s, &r.map, DEFAULT_SAMPLES, None).unwrap();
    alpha_enclosure(s, &g, r.basepoint).cells().clone()
}

#[test]
fn whole_space_is_realized_by_a_constant() {
    let s = interval(8);
    let r = trivial_realization(&s, &ClosedSet::cells(s.all_cells())).unwrap().unwrap();
    for p in s.cloud() {
        assert_eq!(r.map.evaluate(&s, p).unwrap(), r.basepoint);
    }
    assert_eq!(enclosure(&s, &r), s.all_cells());
}

#[test]
fn empty_set_is_realized_off_the_constant() {
    let s = interval(8);
    let r = trivial_realization(&s, &ClosedSet::cells(BTreeSet::new())).unwrap().unwrap();
    let a = r.map.evaluate(&s, s.cloud()[0]).unwrap();
    assert_ne!(s.normalize(a), s.normalize(r.basepoint));
    assert!(enclosure(&s, &r).is_empty());
}

#[test]
fn single_point_is_realized_by_the_identity() {
    let s = interval(8);
    let x = s.landmark_point("1").unwrap();
    let r = trivial_realization(&s, &ClosedSet::points([x])).unwrap().unwrap();
    assert_eq!(r.basepoint, x);
    let exact = alpha_exact(&s, &r.map, x, 6, s.mesh() / 4.0).unwrap();
    assert_eq!(exact.points(), &[x]);
}

#[test]
fn left_half_collapses_to_the_arc_start() {
    let s = interval(8);
    let left: BTreeSet<usize> = (0..8).collect();
    let r = arc_realization(&s, &ClosedSet::cells(left.clone())).unwrap();
    let check = verify_arc_realization(&s, &r, &left).unwrap();
    assert!(check.pass(), "{check:?}");
    let a = s.position(r.basepoint);
    assert!(a.x.abs() < 1e-12);
    for k in 0..=8 {
        let p = s.normalize(SpacePoint::arc(0, -1.0 + k as f64 / 8.0));
        assert_eq!(r.map.evaluate(&s, p).unwrap(), r.basepoint);
    }
}

#[test]
fn distance_one_maps_to_arc_middle() {
    let s = interval(8);
    let left: BTreeSet<usize> = (0..8).collect();
    let r = arc_realization(&s, &ClosedSet::cells(left)).unwrap();
    let rule = r.map.arc_rule.clone().unwrap();
    let one = s.landmark_point("1").unwrap();
    assert_eq!(r.map.evaluate(&s, one).unwrap(), rule.at(0.5));
}

#[test]
fn sine_limit_arc_has_no_arc_realization() {
    let s = build_named_space(&NamedSpace::Sine { pieces: 3 }, Rat::new(1, 8)).unwrap();
    assert!(arc_realization(&s, &s.landmark_set("[a,b]").unwrap()).is_err());
}

#[test]
fn arc_realizations_on_random_sets() {
    let s = interval(32);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let set = alpha_core::gallery::random_runs(&mut rng, s.cell_count());
        let r = arc_realization(&s, &ClosedSet::cells(set.clone())).unwrap();
        let check = verify_arc_realization(&s, &r, &set).unwrap();
        assert!(check.pass(), "{set:?}: {}", check.detail);
    }
}

fn point(prefix: &str, cycle: &str) -> EventuallyPeriodic {
    EventuallyPeriodic::new(parse_word(prefix).unwrap(), parse_word(cycle).unwrap())
}

#[test]
fn single_sequence_in_cantor_space() {
    let c = CylinderSpace::new(10).unwrap();
    let set = CylinderSet::new(vec![], vec![point("", "0")]);
    let r = zero_dim_realization(&c, &set).unwrap();
    assert_eq!(r.a, point("", "0"));
    for i in 0..10 {
        let mut w = vec![0u8; i];
        w.push(1);
        assert_eq!(r.u[i].as_ref(), Some(&w));
        assert_eq!(r.b[i].as_ref(), Some(&EventuallyPeriodic::padded(&w, 0)));
    }
    assert!(r.v.is_empty());
    let check = verify_zero_dim(&c, &r, 20);
    assert!(check.pass(), "{}", check.detail);
}

#[test]
fn cylinder_plus_point() {
    let c = CylinderSpace::new(10).unwrap();
    let set = CylinderSet::new(vec![parse_word("0").unwrap()], vec![point("1", "0")]);
    let r = zero_dim_realization(&c, &set).unwrap();
    assert_eq!(r.a, point("1", "0"));
    assert_eq!(r.u[0], None);
    for i in 1..10 {
        let mut w = vec![1u8];
        w.extend(vec![0u8; i - 1]);
        w.push(1);
        assert_eq!(r.u[i].as_ref(), Some(&w));
    }
    let check = verify_zero_dim(&c, &r, 20);
    assert!(check.pass(), "{}", check.detail);
}

#[test]
fn clopen_cylinder_is_delegated() {
    let c = CylinderSpace::new(10).unwrap();
    let set = CylinderSet::new(vec![parse_word("0").unwrap()], vec![]);
    assert!(zero_dim_realization(&c, &set).is_err());
}

#[test]
fn random_cantor_sets_verify() {
    let c = CylinderSpace::new(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let set = c.random_nonclopen(&mut rng);
        let r = zero_dim_realization(&c, &set).unwrap();
        let check = verify_zero_dim(&c, &r, 16);
        assert!(check.pass(), "{set}: {}", check.detail);
    }
}
