use std::collections::BTreeSet;

use alpha_core::combinators::*;
use alpha_core::space::{build_named_space, NamedSpace};
use alpha_core::topology::{arc_joined_brute_force, component_count, is_clopen, CellComplex};
use alpha_core::{Rat, Space};
use proptest::prelude::*;

fn named(n: NamedSpace, h: i64) -> Space {
    build_named_space(&n, Rat::new(1, h)).unwrap()
}

#[test]
fn sum_of_extended_sine_and_chain_has_two_components() {
    let x = named(NamedSpace::ExtendedSine { pieces: 4 }, 16);
    let y = named(NamedSpace::ChainOfSines { curves: 3, pieces: 4 }, 16);
    let s = sum(&[x.clone(), y]).unwrap();
    assert_eq!(component_count(&s), 2);
    assert!(s.landmark_cells("0:[a,c]").is_ok());
    assert_eq!(s.landmark_cells("0").unwrap().len(), x.cell_count());
}

#[test]
fn sum_of_intervals_has_clopen_summands() {
    let i = named(NamedSpace::Interval, 8);
    let s = sum(&[i.clone(), i]).unwrap();
    let first = s.landmark_cells("0").unwrap();
    assert!(is_clopen(&s, &first));
    let (a, b) = (first.iter().next().copied().unwrap(), s.landmark_cells("1").unwrap().into_iter().next().unwrap());
    assert_eq!(s.distance_cells(a, b), 1.0);
}

#[test]
fn sum_of_singletons_is_discrete() {
    let p = named(NamedSpace::Discrete { count: 1 }, 1);
    let s = sum(&[p.clone(), p.clone(), p]).unwrap();
    assert_eq!(s.cell_count(), 3);
    assert_eq!(component_count(&s), 3);
}

#[test]
fn sum_needs_two_spaces() {
    assert!(sum(&[named(NamedSpace::Interval, 4)]).is_err());
}

#[test]
fn small_sums_split_into_arc_joined_or_clopen() {
    let i = named(NamedSpace::Interval, 2);
    let s = sum(&[i.clone(), i.clone(), i]).unwrap();
    let n = s.cell_count();
    assert_eq!(n, 12);
    for mask in 1u32..(1 << n) - 1 {
        let set: BTreeSet<usize> = (0..n).filter(|c| mask >> c & 1 == 1).collect();
        assert!(arc_joined_brute_force(&s, &set) ^ is_clopen(&s, &set), "mask {mask:b}");
    }
}

fn grid(h: i64) -> ProductSpace {
    let i = named(NamedSpace::Interval, h);
    ProductSpace::new(vec![i.clone(), i], DEFAULT_CELL_BUDGET).unwrap()
}

#[test]
fn interval_square_grid() {
    let p = grid(4);
    assert_eq!(p.cell_count(), 64);
    for z in [0, 17, 63] {
        for l in 0..2 {
            assert_eq!(p.line(z, l).len(), 8);
        }
    }
}

#[test]
fn two_point_square() {
    let d = named(NamedSpace::Discrete { count: 2 }, 1);
    let p = ProductSpace::new(vec![d.clone(), d], 100).unwrap();
    assert_eq!(p.cell_count(), 4);
    let a: BTreeSet<usize> = [p.index(&[0, 0])].into();
    assert_eq!(find_bichromatic_line(&p, &a).unwrap(), (p.index(&[0, 0]), 0));
}

#[test]
fn product_limits() {
    let i = named(NamedSpace::Interval, 64);
    assert!(ProductSpace::new(vec![i.clone()], 10).is_err());
    assert!(ProductSpace::new(vec![i.clone(); 4], usize::MAX).is_err());
    assert!(ProductSpace::new(vec![i.clone(), i], 1000).is_err());
}

#[test]
fn left_half_plane_line_is_horizontal() {
    let p = grid(8);
    let a: BTreeSet<usize> = (0..p.cell_count()).filter(|&c| p.coords(c)[0] < 8).collect();
    let (z, l) = find_bichromatic_line(&p, &a).unwrap();
    assert_eq!(l, 0);
    assert!(a.contains(&z));
    assert!(bichromatic_lines_brute_force(&p, &a).contains(&(z, l)));
}

#[test]
fn full_minus_one_cell() {
    let p = grid(4);
    let hole = 27;
    let a: BTreeSet<usize> = (0..p.cell_count()).filter(|&c| c != hole).collect();
    let (z, l) = find_bichromatic_line(&p, &a).unwrap();
    assert!(p.line(z, l).contains(&hole));
    assert!(find_bichromatic_line(&p, &BTreeSet::new()).is_err());
    assert!(find_bichromatic_line(&p, &p_all(&p)).is_err());
}

fn p_all(p: &ProductSpace) -> BTreeSet<usize> {
    (0..p.cell_count()).collect()
}

proptest! {
    #[test]
    fn line_search_verifies_and_arc_joins(bits in proptest::collection::vec(any::<bool>(), 256)) {
        let p = grid(8);
        let a: BTreeSet<usize> = (0..256).filter(|&c| bits[c]).collect();
        prop_assume!(!a.is_empty() && a.len() < 256);
        let (z, l) = find_bichromatic_line(&p, &a).unwrap();
        prop_assert!(a.contains(&z));
        prop_assert!(p.line(z, l).iter().any(|c| !a.contains(c)));
        let path = arc_join_via_line(&p, &a).unwrap().unwrap();
        prop_assert!(a.contains(&path[0]) && !a.contains(path.last().unwrap()));
        for w in path.windows(2) {
            prop_assert!(p.arc_adjacent(w[0]).contains(&w[1]));
        }
    }
}

#[test]
fn quotient_of_w_is_a_chain_of_sines() {
    let z = named(NamedSpace::W { curves: 4, pieces: 4 }, 16);
    let q = quotient_collapse(&z, &z.landmark_cells("S_inf").unwrap(), "s_inf").unwrap();
    let check = check_chain_structure(&q, "s_inf");
    assert!(check.ok, "{:?}", check.failures);
    assert!(!check_chain_structure(&z, "w").ok);
}

#[test]
fn built_chain_passes_structure_check() {
    let c = named(NamedSpace::ChainOfSines { curves: 4, pieces: 4 }, 16);
    let check = check_chain_structure(&c, "s_inf");
    assert!(check.ok, "{:?}", check.failures);
}

#[test]
fn collapsing_bc_gives_a_sine_curve() {
    let e = named(NamedSpace::ExtendedSine { pieces: 4 }, 16);
    let s = named(NamedSpace::Sine { pieces: 4 }, 16);
    let q = quotient_collapse(&e, &e.landmark_cells("[b,c]").unwrap(), "c").unwrap();
    let check = matches_sine_curve(&q, &s);
    assert!(check.ok, "{:?}", check.failures);
    assert!(!matches_sine_curve(&e, &s).ok);
}

#[test]
fn collapsing_one_cell_preserves_shape() {
    let i = named(NamedSpace::Interval, 8);
    let q = quotient_collapse(&i, &[5].into(), "p").unwrap();
    assert_eq!(q.cell_count(), i.cell_count());
    let degrees = |s: &Space| {
        let mut d: Vec<usize> = (0..s.cell_count()).map(|c| s.arc_neighbors(c).len()).collect();
        d.sort_unstable();
        d
    };
    assert_eq!(degrees(&q), degrees(&i));
    assert_eq!(component_count(&q), 1);
    assert_eq!(q.arc_neighbors(q.landmark_cells("p").unwrap().into_iter().next().unwrap()).len(), 2);
    assert!(quotient_collapse(&i, &BTreeSet::new(), "p").is_err());
}
