use std::collections::BTreeSet;

use alpha_core::alpha::*;
use alpha_core::gallery::{gallery_maps, soundness_violations};
use alpha_core::graph::{transition_graph, DEFAULT_SAMPLES};
use alpha_core::maps::{build_named_map, MapSpec, NamedMap};
use alpha_core::space::{build_named_space, NamedSpace, SpacePoint};
use alpha_core::{Rat, Space};
use proptest::prelude::*;

fn named(n: NamedSpace, h: i64) -> Space {
    build_named_space(&n, Rat::new(1, h)).unwrap()
}

#[test]
fn identity_layers_and_sets() {
    let s = named(NamedSpace::Sine { pieces: 3 }, 8);
    let m = MapSpec::identity(&s);
    let x = s.landmark_point("b").unwrap();
    let layers = preimage_layers(&s, &m, x, 5, DEFAULT_LAYER_CAP).unwrap();
    assert!(layers.layers.iter().all(|l| l.len() == 1 && l.contains(&x)));
    assert_eq!(alpha_exact(&s, &m, x, 6, 0.01).unwrap().points(), &[x]);
    let g = transition_graph(&s, &m, DEFAULT_SAMPLES, None).unwrap();
    let enc = alpha_enclosure(&s, &g, x);
    assert!(within_collar(&s, enc.cells(), &s.cells_containing(x)).0);
    assert!(!exactness_test(&g, 20));
}

#[test]
fn constant_layers_and_sets() {
    let s = named(NamedSpace::Interval, 8);
    let a = s.landmark_point("1").unwrap();
    let m = MapSpec::constant(&s, a);
    let layers = preimage_layers(&s, &m, a, 3, DEFAULT_LAYER_CAP).unwrap();
    let cloud: BTreeSet<SpacePoint> = s.cloud().into_iter().collect();
    for k in 1..=3 {
        assert!(cloud.is_subset(&layers.layers[k]), "layer {k}");
    }
    let g = transition_graph(&s, &m, DEFAULT_SAMPLES, None).unwrap();
    assert_eq!(alpha_enclosure(&s, &g, a).cells(), &s.all_cells());
    let facts = check_facts(&s, &m, Some(&g), &[a], Engine::Enclosure).unwrap();
    assert_eq!(facts.verdict("interior-basepoint"), Some(FactVerdict::Holds));
    assert!(!facts.any_violated());
}

#[test]
fn horseshoe_is_exact() {
    let s = named(NamedSpace::Interval, 64);
    let m = build_named_map(&s, &NamedMap::Horseshoe).unwrap();
    let g = transition_graph(&s, &m, DEFAULT_SAMPLES, None).unwrap();
    assert!(exactness_test(&g, 20));
    let x = s.landmark_point("1").unwrap();
    let facts = check_facts(&s, &m, Some(&g), &[x], Engine::Enclosure).unwrap();
    assert_eq!(facts.verdict("whole-if-exact"), Some(FactVerdict::Holds));
}

#[test]
fn sine_map_is_exact_on_the_limit_arc() {
    let s = named(NamedSpace::Sine { pieces: 4 }, 32);
    let m = build_named_map(&s, &NamedMap::Sine).unwrap();
    let g = transition_graph(&s, &m, DEFAULT_SAMPLES, None).unwrap();
    let (sub, _) = g.restrict(&s.landmark_cells("[a,b]").unwrap());
    assert!(exactness_test(&sub, 20));
    assert!(!exactness_test(&g, 20));
}

#[test]
fn open_invariant_complement_is_avoided() {
    let s = named(NamedSpace::Sine { pieces: 6 }, 64);
    let m = build_named_map(&s, &NamedMap::Sine).unwrap();
    let g = transition_graph(&s, &m, DEFAULT_SAMPLES, None).unwrap();
    let enc = alpha_enclosure(&s, &g, s.landmark_point("b").unwrap());
    let ab = s.landmark_cells("[a,b]").unwrap();
    let collar = s.collar(&ab);
    let s_cells = s.landmark_cells("S").unwrap();
    assert!(enc.cells().iter().all(|c| !s_cells.contains(c) || collar.contains(c)));
}

#[test]
fn shift_cloud_layer_contains_diagonal_preimages() {
    let s = named(NamedSpace::ShiftCloud { n_max: 10, m_max: 10 }, 1);
    let m = build_named_map(&s, &NamedMap::Shift).unwrap();
    let o = s.landmark_point("origin").unwrap();
    let layers = preimage_layers(&s, &m, o, 6, DEFAULT_LAYER_CAP).unwrap();
    let half = SpacePoint::Isolated(s.point_by_label("(1/2,1/2)").unwrap());
    assert!(layers.layers[1].contains(&half));
    let r = alpha_exact(&s, &m, o, 40, 0.05).unwrap();
    assert!(r.points().contains(&o));
}

#[test]
fn layer_cap_is_enforced() {
    let s = named(NamedSpace::Interval, 8);
    let m = build_named_map(&s, &NamedMap::Horseshoe).unwrap();
    assert!(preimage_layers(&s, &m, s.landmark_point("1").unwrap(), 20, 1000).is_err());
}

#[test]
fn arc_maps_have_exact_layers() {
    let s = named(NamedSpace::Interval, 8);
    let left: BTreeSet<usize> = (0..8).collect();
    let r = alpha_core::constructors::arc_realization(&s, &alpha_core::space::ClosedSet::cells(left)).unwrap();
    // The arc map still evaluates exactly on the cloud, so layers exist.
    assert!(preimage_layers(&s, &r.map, r.basepoint, 3, DEFAULT_LAYER_CAP).is_ok());
}

#[test]
fn soundness_on_every_gallery_map() {
    for case in gallery_maps() {
        let v = soundness_violations(&case, 8, 6).unwrap();
        assert!(v.is_empty(), "{v:?}");
    }
}

#[test]
fn survey_on_extended_sine() {
    let s = named(NamedSpace::ExtendedSine { pieces: 4 }, 32);
    let rows = af_survey(&s, &[s.landmark_set("[a,c]").unwrap(), s.landmark_set("[b,c]").unwrap()]);
    assert_eq!(rows[0].method, "special");
    assert!(rows.iter().all(|r| r.realized), "{rows:?}");
}

#[test]
fn survey_on_chain() {
    let s = named(NamedSpace::ChainOfSines { curves: 4, pieces: 4 }, 32);
    let family: Vec<_> = (1..=3).map(|n| s.landmark_set(&format!("A_{n}")).unwrap()).collect();
    let rows = af_survey(&s, &family);
    assert!(rows.iter().all(|r| r.realized && r.method == "special"), "{rows:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn enclosure_is_backward_closed(t in -1.0f64..1.0, lap in 1usize..5) {
        let s = named(NamedSpace::ExtendedSine { pieces: 4 }, 16);
        let m = build_named_map(&s, &NamedMap::ExtendedSine).unwrap();
        let g = transition_graph(&s, &m, DEFAULT_SAMPLES, None).unwrap();
        let x = s.normalize(SpacePoint::arc(s.piece_by_label(&format!("P_{lap}")).unwrap(), t));
        let enc = alpha_enclosure(&s, &g, x);
        prop_assert!(enc.all_pass());
        for &c in enc.cells() {
            prop_assert!(g.predecessors(c).iter().all(|p| enc.cells().contains(p)));
        }
    }
}
