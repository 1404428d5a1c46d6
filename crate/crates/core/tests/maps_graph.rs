use std::collections::BTreeSet;

use alpha_core::graph::{admissible_padding, tarjan, transition_graph, CellGraph, DEFAULT_SAMPLES};
use alpha_core::maps::{build_named_map, IntervalPL, MapSpec, NamedMap, ZCase};
use alpha_core::space::{build_named_space, CellKind, NamedSpace, SpacePoint};
use alpha_core::{Rat, Space};
use petgraph::graph::DiGraph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn named(n: NamedSpace, h: i64) -> Space {
    build_named_space(&n, Rat::new(1, h)).unwrap()
}

#[test]
fn horseshoe_values() {
    let f = IntervalPL::horseshoe3();
    assert_eq!(f.eval_exact(Rat::new(-1, 3)), Rat::from_integer(1));
    assert_eq!(f.eval_exact(Rat::from_integer(0)), Rat::from_integer(0));
    assert_eq!(f.eval_exact(Rat::from_integer(1)), Rat::from_integer(1));
    assert_eq!(f.eval_exact(Rat::from_integer(-1)), Rat::from_integer(-1));
    assert_eq!(f.lipschitz(), 3.0);
}

#[test]
fn interval_pl_rejects_bad_breakpoints() {
    assert!(IntervalPL::new(vec![(Rat::from_integer(0), Rat::from_integer(0))]).is_err());
    assert!(IntervalPL::new(vec![(Rat::from_integer(1), Rat::from_integer(0)), (Rat::from_integer(0), Rat::from_integer(0))]).is_err());
}

#[test]
fn sine_map_fixes_a_and_first_lap_top() {
    let s = named(NamedSpace::Sine { pieces: 4 }, 16);
    let m = build_named_map(&s, &NamedMap::Sine).unwrap();
    for l in ["a", "b"] {
        let p = s.landmark_point(l).unwrap();
        assert_eq!(s.normalize(m.evaluate(&s, p).unwrap()), p, "{l}");
    }
    let top = SpacePoint::Node(s.node_by_label("n_1").unwrap());
    let pos = s.position(top);
    assert!((pos.x - 2.0 / std::f64::consts::PI).abs() < 1e-12 && (pos.y - 1.0).abs() < 1e-12);
    assert_eq!(s.normalize(m.evaluate(&s, top).unwrap()), top);
}

#[test]
fn extended_sine_collapses_bc() {
    let s = named(NamedSpace::ExtendedSine { pieces: 4 }, 16);
    let m = build_named_map(&s, &NamedMap::ExtendedSine).unwrap();
    let b = s.landmark_point("b").unwrap();
    let bc = s.piece_by_label("[b,c]").unwrap();
    for k in 0..=10 {
        let t = -1.0 + k as f64 / 10.0;
        assert_eq!(s.normalize(m.evaluate(&s, SpacePoint::arc(bc, t)).unwrap()), b);
    }
}

#[test]
fn shift_cloud_diagonal_maps_to_origin() {
    let s = named(NamedSpace::ShiftCloud { n_max: 8, m_max: 8 }, 1);
    let m = build_named_map(&s, &NamedMap::Shift).unwrap();
    let p = SpacePoint::Isolated(s.point_by_label("(1/2,1/2)").unwrap());
    assert_eq!(m.evaluate(&s, p).unwrap(), s.landmark_point("origin").unwrap());
}

#[test]
fn identity_and_constant() {
    let s = named(NamedSpace::Sine { pieces: 3 }, 8);
    let a = s.landmark_point("a").unwrap();
    let id = MapSpec::identity(&s);
    let c = MapSpec::constant(&s, a);
    for p in s.cloud() {
        assert_eq!(id.evaluate(&s, p).unwrap(), p);
        assert_eq!(c.evaluate(&s, p).unwrap(), a);
    }
}

#[test]
fn declared_fixed_points_are_fixed() {
    let chain = named(NamedSpace::ChainOfSines { curves: 4, pieces: 4 }, 16);
    let z = named(NamedSpace::Z { curves: 4, pieces: 4 }, 16);
    let mut cases = vec![
        (named(NamedSpace::Interval, 16), NamedMap::Horseshoe, vec!["-1", "1"]),
        (named(NamedSpace::Sine { pieces: 4 }, 16), NamedMap::Sine, vec!["a", "b"]),
        (named(NamedSpace::ExtendedSine { pieces: 4 }, 16), NamedMap::ExtendedSine, vec!["a", "b"]),
    ];
    for n in 1..=3 {
        cases.push((chain.clone(), NamedMap::Chain { n }, vec![]));
    }
    for case in ZCase::ALL {
        cases.push((z.clone(), NamedMap::Z { case, n: 2 }, vec![]));
    }
    for (s, named_map, labels) in cases {
        let m = build_named_map(&s, &named_map).unwrap();
        m.validate(&s).unwrap();
        for l in labels {
            let p = s.landmark_point(l).unwrap();
            assert_eq!(s.normalize(m.evaluate(&s, p).unwrap()), p, "{l}");
        }
        for (l, p) in &m.fixed {
            assert_eq!(s.normalize(m.evaluate(&s, *p).unwrap()), s.normalize(*p), "{l}");
        }
    }
}

#[test]
fn chain_map_fixes_b_n() {
    let s = named(NamedSpace::ChainOfSines { curves: 4, pieces: 4 }, 16);
    for n in 1..=3 {
        let m = build_named_map(&s, &NamedMap::Chain { n }).unwrap();
        let b = s.landmark_point(&format!("b_{n}")).unwrap();
        assert_eq!(s.normalize(m.evaluate(&s, b).unwrap()), b);
    }
    assert!(build_named_map(&s, &NamedMap::Chain { n: 4 }).is_err());
}

#[test]
fn incompatible_map_rejected() {
    let s = named(NamedSpace::Interval, 8);
    assert!(build_named_map(&s, &NamedMap::Sine).is_err());
}

#[test]
fn identity_successors_are_self() {
    let s = named(NamedSpace::ExtendedSine { pieces: 3 }, 8);
    let g = transition_graph(&s, &MapSpec::identity(&s), DEFAULT_SAMPLES, None).unwrap();
    for c in 0..s.cell_count() {
        assert_eq!(g.successors(c), &[c]);
    }
}

#[test]
fn constant_successors_meet_the_target() {
    let s = named(NamedSpace::Sine { pieces: 3 }, 8);
    let a = s.landmark_point("a").unwrap();
    let g = transition_graph(&s, &MapSpec::constant(&s, a), DEFAULT_SAMPLES, Some(0.01)).unwrap();
    let expected: Vec<usize> = s.cells_containing(a).into_iter().collect();
    for c in 0..s.cell_count() {
        assert_eq!(g.successors(c), expected.as_slice());
    }
}

#[test]
fn collapsed_bc_lands_near_b() {
    let s = named(NamedSpace::ExtendedSine { pieces: 4 }, 16);
    let g = transition_graph(&s, &build_named_map(&s, &NamedMap::ExtendedSine).unwrap(), DEFAULT_SAMPLES, None).unwrap();
    let at_b = s.cells_containing(s.landmark_point("b").unwrap());
    let mut near: BTreeSet<usize> = at_b.clone();
    near.extend(at_b.iter().flat_map(|&c| s.arc_neighbors(c).iter().copied()));
    for c in s.landmark_cells("[b,c]").unwrap() {
        assert!(g.successors(c).iter().all(|d| near.contains(d)));
    }
}

#[test]
fn padding_below_bound_is_refused() {
    let s = named(NamedSpace::Interval, 16);
    let m = build_named_map(&s, &NamedMap::Horseshoe).unwrap();
    let bound = admissible_padding(&s, &m, DEFAULT_SAMPLES);
    assert!(bound > 0.0);
    assert!(transition_graph(&s, &m, DEFAULT_SAMPLES, Some(bound / 2.0)).is_err());
    assert!(transition_graph(&s, &m, DEFAULT_SAMPLES, Some(bound)).is_ok());
}

fn covering_violations(s: &Space, m: &MapSpec, per_cell: usize, seed: u64) -> usize {
    let g = transition_graph(s, m, DEFAULT_SAMPLES, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for c in 0..s.cell_count() {
        let CellKind::Arc { piece, t0, t1, .. } = s.cell(c).kind else { continue };
        for _ in 0..per_cell {
            let p = SpacePoint::arc(piece, rng.gen_range(t0..=t1));
            let q = m.evaluate(s, p).unwrap();
            if s.cells_containing(q).iter().all(|d| !g.successors(c).contains(d)) {
                bad += 1;
            }
        }
    }
    bad
}

#[test]
fn transition_graph_covers_fresh_samples() {
    let cases = [
        (named(NamedSpace::Interval, 64), NamedMap::Horseshoe),
        (named(NamedSpace::Sine { pieces: 4 }, 32), NamedMap::Sine),
        (named(NamedSpace::ExtendedSine { pieces: 4 }, 32), NamedMap::ExtendedSine),
        (named(NamedSpace::ChainOfSines { curves: 4, pieces: 4 }, 16), NamedMap::Chain { n: 2 }),
    ];
    for (i, (s, nm)) in cases.iter().enumerate() {
        let m = build_named_map(s, nm).unwrap();
        assert_eq!(covering_violations(s, &m, 10_000, i as u64), 0, "{}", s.name);
    }
    let z = named(NamedSpace::Z { curves: 4, pieces: 4 }, 16);
    for case in ZCase::ALL {
        let m = build_named_map(&z, &NamedMap::Z { case, n: 2 }).unwrap();
        assert_eq!(covering_violations(&z, &m, 1_000, 7), 0, "{case:?}");
    }
}

fn random_graph(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        succ[a % n].push(b % n);
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    succ
}

proptest! {
    #[test]
    fn tarjan_agrees_with_petgraph(n in 1usize..40, edges in proptest::collection::vec((0usize..40, 0usize..40), 0..120)) {
        let succ = random_graph(n, &edges);
        let (_, comps) = tarjan(&succ);
        let mut g = DiGraph::<(), ()>::new();
        let ids: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for (a, s) in succ.iter().enumerate() {
            for &b in s {
                g.add_edge(ids[a], ids[b], ());
            }
        }
        let norm = |cs: Vec<Vec<usize>>| -> BTreeSet<BTreeSet<usize>> { cs.into_iter().map(|c| c.into_iter().collect()).collect() };
        let theirs = petgraph::algo::tarjan_scc(&g).into_iter().map(|c| c.into_iter().map(|x| x.index()).collect()).collect();
        prop_assert_eq!(norm(comps), norm(theirs));
    }

    #[test]
    fn condensation_is_acyclic_and_cyclic_flags_are_right(n in 1usize..30, edges in proptest::collection::vec((0usize..30, 0usize..30), 0..80)) {
        let succ = random_graph(n, &edges);
        let g = CellGraph::from_successors("s".into(), "m".into(), 0.0, 1, succ.clone());
        let cond: Vec<(usize, usize)> = g.condensation().into_iter().collect();
        let k = g.components().len();
        let cond_succ = random_graph(k, &cond);
        let (_, comps) = tarjan(&cond_succ);
        prop_assert!(comps.iter().all(|c| c.len() == 1));
        prop_assert!(cond.iter().all(|(a, b)| a != b));
        for (i, comp) in g.components().iter().enumerate() {
            let expected = comp.len() >= 2 || succ[comp[0]].contains(&comp[0]);
            prop_assert_eq!(g.is_cyclic_component(i), expected);
        }
    }
}
