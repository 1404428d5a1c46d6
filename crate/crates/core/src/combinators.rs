//! Topological sum, finite products and one-set quotients.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::rat_from_f64;
use crate::space::{
    Accumulation, CellId, CellKind, IsolatedPoint, Landmark, Quotient, Region, Space, SpacePoint,
};
use crate::topology::{arc_join, CellComplex};
use crate::PlanarPoint;

fn shift_region(r: &Region, dp: usize, dq: usize) -> Region {
    match *r {
        Region::Piece(p) => Region::Piece(p + dp),
        Region::PieceRange { piece, lo, hi } => Region::PieceRange { piece: piece + dp, lo, hi },
        Region::Point(id) => Region::Point(id + dq),
    }
}

fn shift_point(p: SpacePoint, dp: usize, dn: usize, dq: usize) -> SpacePoint {
    match p {
        SpacePoint::Arc { piece, t } => SpacePoint::Arc { piece: piece + dp, t },
        SpacePoint::Node(n) => SpacePoint::Node(n + dn),
        SpacePoint::Isolated(id) => SpacePoint::Isolated(id + dq),
    }
}

/// Disjoint union with summands at mutual distance 1. Landmarks and piece
/// labels of summand `i` are prefixed with `"{i}:"`, and `"{i}"` names the
/// whole summand.
pub fn sum(spaces: &[Space]) -> Result<Space> {
    if spaces.len() < 2 {
        return Err(Error::SummandCount(spaces.len()));
    }
    let (mut pieces, mut nodes, mut points) = (Vec::new(), Vec::new(), Vec::new());
    let (mut accumulations, mut landmarks, mut summands, mut quotients) = (Vec::new(), BTreeMap::new(), Vec::new(), Vec::new());
    for (i, s) in spaces.iter().enumerate() {
        let (dp, dn, dq, ds) = (pieces.len(), nodes.len(), points.len(), summands.len());
        let prefix = |l: &str| format!("{i}:{l}");
        for p in &s.pieces {
            let mut p = p.clone();
            p.label = prefix(&p.label);
            p.nodes = [p.nodes[0] + dn, p.nodes[1] + dn];
            p.summand += ds;
            pieces.push(p);
        }
        for n in &s.nodes {
            let mut n = n.clone();
            n.label = prefix(&n.label);
            nodes.push(n);
        }
        for q in &s.points {
            let mut q = q.clone();
            q.label = prefix(&q.label);
            q.summand += ds;
            points.push(q);
        }
        for a in &s.accumulations {
            accumulations.push(match a {
                Accumulation::ParamMatch { from, to, flip } => Accumulation::ParamMatch { from: from + dp, to: to + dp, flip: *flip },
                Accumulation::ToTarget { from, to } => Accumulation::ToTarget {
                    from: from.iter().map(|r| shift_region(r, dp, dq)).collect(),
                    to: shift_region(to, dp, dq),
                },
            });
        }
        for (name, l) in &s.landmarks {
            let l = match l {
                Landmark::Point(p) => Landmark::Point(shift_point(*p, dp, dn, dq)),
                Landmark::Set(rs) => Landmark::Set(rs.iter().map(|r| shift_region(r, dp, dq)).collect()),
            };
            landmarks.insert(prefix(name), l);
        }
        let whole: Vec<Region> =
            (0..s.pieces.len()).map(|p| Region::Piece(p + dp)).chain((0..s.points.len()).map(|q| Region::Point(q + dq))).collect();
        landmarks.insert(i.to_string(), Landmark::Set(whole));
        for q in &s.quotients {
            quotients.push(Quotient {
                label: prefix(&q.label),
                regions: q.regions.iter().map(|r| shift_region(r, dp, dq)).collect(),
                point: q.point + dq,
            });
        }
        summands.extend(s.summands.iter().map(|n| prefix(n)));
    }
    let name = spaces.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join("+");
    let compact = spaces.iter().all(|s| s.compact);
    let mut out = Space::from_skeleton(name, pieces, nodes, points, accumulations, landmarks, summands, compact);
    if !quotients.is_empty() {
        out.quotients = quotients;
        out.assemble();
    }
    Ok(out)
}

/// Collapse the cell set `q` to a single point named `name`.
pub fn quotient_collapse(space: &Space, q: &BTreeSet<CellId>, name: &str) -> Result<Space> {
    if q.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut regions = Vec::new();
    let mut footprint = Vec::new();
    for (pid, _) in space.pieces.iter().enumerate() {
        let cells = space.piece_cells(pid);
        let inside: Vec<bool> = cells.iter().map(|c| q.contains(c)).collect();
        if inside.iter().all(|&b| b) {
            regions.push(Region::Piece(pid));
            continue;
        }
        let mut j = 0;
        while j < cells.len() {
            if !inside[j] {
                j += 1;
                continue;
            }
            let start = j;
            while j < cells.len() && inside[j] {
                j += 1;
            }
            let lo = space.pieces[pid].cell_bounds(start).0;
            let hi = space.pieces[pid].cell_bounds(j - 1).1;
            regions.push(Region::PieceRange { piece: pid, lo, hi });
        }
    }
    for &c in q {
        footprint.extend(space.cell_polyline(c, 4));
        if let CellKind::Point(id) = space.cell(c).kind {
            regions.push(Region::Point(id));
        }
    }
    let first = *q.iter().next().unwrap();
    let pos = footprint[0];
    let coords = PlanarPoint::new(
        rat_from_f64(pos.x).unwrap_or_default(),
        rat_from_f64(pos.y).unwrap_or_default(),
    );
    let mut out = space.clone();
    out.name = format!("{}/{}", space.name, name);
    out.points.push(IsolatedPoint { label: name.to_string(), coords, summand: space.cell(first).summand, footprint });
    let id = out.points.len() - 1;
    out.landmarks.insert(name.to_string(), Landmark::Point(SpacePoint::Isolated(id)));
    out.desc = None;
    out.push_quotient(Quotient { label: name.to_string(), regions, point: id });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureCheck {
    pub ok: bool,
    pub failures: Vec<String>,
}

impl StructureCheck {
    fn from(failures: Vec<String>) -> Self {
        StructureCheck { ok: failures.is_empty(), failures }
    }
}

/// Cells of the curve `S_i`: its laps and its limit arc.
fn curve_cells(space: &Space, i: u32) -> Option<(Vec<CellId>, Vec<CellId>)> {
    let prefix = format!("S_{i}.");
    let mut laps = Vec::new();
    let mut limit = Vec::new();
    for (pid, p) in space.pieces.iter().enumerate() {
        if let Some(rest) = p.label.strip_prefix(&prefix) {
            if rest == "[a,b]" {
                limit.extend_from_slice(space.piece_cells(pid));
            } else {
                laps.extend_from_slice(space.piece_cells(pid));
            }
        }
    }
    (!laps.is_empty() && !limit.is_empty()).then_some((laps, limit))
}

/// Checks the chain-of-sine-curves structure: curves `S_1..S_C` each made of
/// laps accumulating on a limit arc, consecutive curves meeting exactly at
/// `b_i` (an end of `[a_i,b_i]` and the free end of the next curve's laps),
/// non-consecutive curves disjoint, and the last curve accumulating on the
/// point `limit`, which lies on no curve.
pub fn check_chain_structure(space: &Space, limit: &str) -> StructureCheck {
    let mut failures = Vec::new();
    let mut curves = Vec::new();
    let mut i = 1;
    while let Some(c) = curve_cells(space, i) {
        curves.push(c);
        i += 1;
    }
    if curves.len() < 2 {
        return StructureCheck::from(vec![format!("found {} curves", curves.len())]);
    }
    let point_cell = match space.landmark_point(limit) {
        Ok(SpacePoint::Isolated(id)) => space.point_cell(id),
        _ => return StructureCheck::from(vec![format!("limit `{limit}` is not a point")]),
    };
    let links: BTreeSet<(CellId, CellId)> = space.accumulation_links().into_iter().collect();
    let node_sets: Vec<BTreeSet<usize>> = (1..=curves.len() as u32)
        .map(|i| {
            space
                .pieces
                .iter()
                .filter(|p| p.label.starts_with(&format!("S_{i}.")))
                .flat_map(|p| p.nodes)
                .collect()
        })
        .collect();
    for (k, (laps, lim)) in curves.iter().enumerate() {
        let i = k + 1;
        if laps.contains(&point_cell) || lim.contains(&point_cell) {
            failures.push(format!("limit point lies on S_{i}"));
        }
        if !laps.iter().any(|a| lim.iter().any(|b| links.contains(&(*a, *b)))) {
            failures.push(format!("laps of S_{i} do not accumulate on [a_{i},b_{i}]"));
        }
        let arc_touch = lim.iter().any(|&c| space.arc_neighbors(c).iter().any(|d| laps.contains(d)));
        if arc_touch {
            failures.push(format!("[a_{i},b_{i}] is joined by an arc to the laps of S_{i}"));
        }
        for (m, other) in node_sets.iter().enumerate().skip(k + 1) {
            let shared: Vec<usize> = node_sets[k].intersection(other).copied().collect();
            if m == k + 1 {
                let b = space.node_by_label(&format!("b_{i}"));
                if shared.len() != 1 || Some(shared[0]) != b {
                    failures.push(format!("S_{i} ∩ S_{} is not {{b_{i}}}", i + 1));
                    continue;
                }
                let b = shared[0];
                let ab = space.piece_by_label(&format!("S_{i}.[a,b]")).expect("limit arc");
                if !space.pieces[ab].nodes.contains(&b) {
                    failures.push(format!("b_{i} is not an end of [a_{i},b_{i}]"));
                }
                let inc: Vec<String> = space.node_incidence(b).iter().map(|&(p, _)| space.pieces[p].label.clone()).collect();
                let next_laps = inc.iter().filter(|l| l.starts_with(&format!("S_{}.P_", i + 1))).count();
                if next_laps != 1 {
                    failures.push(format!("b_{i} is not the free end of S_{}", i + 1));
                }
            } else if !shared.is_empty() {
                failures.push(format!("S_{i} meets S_{}", m + 1));
            }
        }
    }
    let (last_laps, last_lim) = curves.last().unwrap();
    let to_limit = last_laps.iter().chain(last_lim).any(|&c| links.contains(&(c, point_cell)));
    if !to_limit {
        failures.push(format!("the last curve does not accumulate on {limit}"));
    }
    if !space.arc_neighbors(point_cell).is_empty() {
        failures.push(format!("{limit} is joined by arcs"));
    }
    StructureCheck::from(failures)
}

/// Compares a space with a reference sine curve: same laps and limit-arc cell
/// counts, same accumulation pairs by label, and every extra point cell
/// attached only at the cell containing `b`.
pub fn matches_sine_curve(space: &Space, reference: &Space) -> StructureCheck {
    let mut failures = Vec::new();
    for p in &reference.pieces {
        match space.piece_by_label(&p.label) {
            None => failures.push(format!("missing piece {}", p.label)),
            Some(q) => {
                let (a, b) = (space.piece_cells(q), reference.piece_cells(reference.piece_by_label(&p.label).unwrap()));
                let distinct: BTreeSet<CellId> = a.iter().copied().collect();
                if distinct.len() != b.len() {
                    failures.push(format!("{}: {} cells vs {}", p.label, distinct.len(), b.len()));
                }
            }
        }
    }
    for (pid, p) in space.pieces.iter().enumerate() {
        let absorbed = space.piece_cells(pid).iter().all(|&c| matches!(space.cell(c).kind, CellKind::Point(_)));
        if reference.piece_by_label(&p.label).is_none() && !absorbed {
            failures.push(format!("extra piece {}", p.label));
        }
    }
    let labelled = |s: &Space| -> BTreeSet<(String, String)> {
        s.accumulation_links().into_iter().map(|(a, b)| (s.cell_label(a), s.cell_label(b))).collect()
    };
    if labelled(space) != labelled(reference) {
        failures.push("accumulation records differ".into());
    }
    let b_cell = space.landmark_point("b").map(|b| space.cells_containing(b));
    for c in 0..space.cell_count() {
        let CellKind::Point(id) = space.cell(c).kind else { continue };
        if reference.point_by_label(&space.points[id].label).is_some() {
            continue;
        }
        let nbrs: BTreeSet<CellId> = space.arc_neighbors(c).iter().copied().collect();
        match &b_cell {
            Ok(bc) if nbrs.iter().all(|n| bc.contains(n)) && !nbrs.is_empty() => {}
            _ => failures.push(format!("extra point {} is not an endpoint at b", space.points[id].label)),
        }
    }
    StructureCheck::from(failures)
}

/// Finite product of cell complexes with the max metric.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    pub factors: Vec<Space>,
    radix: Vec<usize>,
    count: usize,
}

pub const MAX_FACTORS: usize = 3;
pub const DEFAULT_CELL_BUDGET: usize = 1_000_000;

impl ProductSpace {
    pub fn new(factors: Vec<Space>, budget: usize) -> Result<Self> {
        if factors.len() < 2 || factors.len() > MAX_FACTORS {
            return Err(Error::FactorCount { got: factors.len(), max: MAX_FACTORS });
        }
        let radix: Vec<usize> = factors.iter().map(|f| f.cell_count()).collect();
        let count = radix.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)).unwrap_or(usize::MAX);
        if count > budget {
            return Err(Error::CellBudgetExceeded { cells: count, budget });
        }
        Ok(ProductSpace { factors, radix, count })
    }

    pub fn dims(&self) -> usize {
        self.factors.len()
    }

    pub fn coords(&self, c: CellId) -> Vec<CellId> {
        let mut rest = c;
        let mut out = vec![0; self.radix.len()];
        for k in 0..self.radix.len() {
            out[k] = rest % self.radix[k];
            rest /= self.radix[k];
        }
        out
    }

    pub fn index(&self, coords: &[CellId]) -> CellId {
        coords.iter().zip(&self.radix).rev().fold(0, |acc, (&x, &r)| acc * r + x)
    }

    /// Cells of the line through `z` along coordinate `lambda`.
    pub fn line(&self, z: CellId, lambda: usize) -> Vec<CellId> {
        let mut c = self.coords(z);
        (0..self.radix[lambda])
            .map(|x| {
                c[lambda] = x;
                self.index(&c)
            })
            .collect()
    }

    /// Max over factors of the cell distances.
    pub fn distance_cells(&self, a: CellId, b: CellId) -> f64 {
        let (ca, cb) = (self.coords(a), self.coords(b));
        self.factors.iter().enumerate().map(|(k, f)| f.distance_cells(ca[k], cb[k])).fold(0.0, f64::max)
    }

    pub fn cell_label(&self, c: CellId) -> String {
        let labels: Vec<String> = self.coords(c).iter().enumerate().map(|(k, &x)| self.factors[k].cell_label(x)).collect();
        format!("({})", labels.join(", "))
    }

    fn neighbors(&self, c: CellId, arc: bool) -> Vec<CellId> {
        let coords = self.coords(c);
        let mut out = Vec::new();
        for (k, f) in self.factors.iter().enumerate() {
            let nbrs = if arc { f.arc_neighbors(coords[k]) } else { f.accumulation_neighbors(coords[k]) };
            for &n in nbrs {
                let mut d = coords.clone();
                d[k] = n;
                out.push(self.index(&d));
            }
        }
        out.sort_unstable();
        out
    }
}

impl CellComplex for ProductSpace {
    fn cell_count(&self) -> usize {
        self.count
    }

    fn arc_adjacent(&self, c: CellId) -> Vec<CellId> {
        self.neighbors(c, true)
    }

    fn accumulation_adjacent(&self, c: CellId) -> Vec<CellId> {
        self.neighbors(c, false)
    }
}

fn check_proper(prod: &ProductSpace, set: &BTreeSet<CellId>) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.len() >= prod.count {
        return Err(Error::FullSet);
    }
    Ok(())
}

/// A point `z ∈ A` and a coordinate whose line through `z` leaves `A`, found
/// by walking from the least cell of `A` to the least cell outside it one
/// coordinate at a time.
pub fn find_bichromatic_line(prod: &ProductSpace, set: &BTreeSet<CellId>) -> Result<(CellId, usize)> {
    check_proper(prod, set)?;
    let a = *set.iter().next().unwrap();
    let b = (0..prod.count).find(|c| !set.contains(c)).unwrap();
    let target = prod.coords(b);
    let mut cur = prod.coords(a);
    for lambda in 0..prod.dims() {
        if cur[lambda] == target[lambda] {
            continue;
        }
        let mut next = cur.clone();
        next[lambda] = target[lambda];
        if set.contains(&prod.index(&cur)) && !set.contains(&prod.index(&next)) {
            return Ok((prod.index(&cur), lambda));
        }
        cur = next;
    }
    unreachable!("the walk starts in A and ends outside it")
}

/// Every `(z, λ)` with `z ∈ A` whose line is not contained in `A`.
pub fn bichromatic_lines_brute_force(prod: &ProductSpace, set: &BTreeSet<CellId>) -> Vec<(CellId, usize)> {
    let mut out = Vec::new();
    for &z in set {
        for lambda in 0..prod.dims() {
            if prod.line(z, lambda).iter().any(|c| !set.contains(c)) {
                out.push((z, lambda));
            }
        }
    }
    out
}

/// Arc from `A` to its complement inside the bichromatic line, lifted from a
/// joining arc of the line's factor.
pub fn arc_join_via_line(prod: &ProductSpace, set: &BTreeSet<CellId>) -> Result<Option<Vec<CellId>>> {
    let (z, lambda) = find_bichromatic_line(prod, set)?;
    let line = prod.line(z, lambda);
    let slice: BTreeSet<CellId> = (0..line.len()).filter(|&x| set.contains(&line[x])).collect();
    let path = arc_join(&prod.factors[lambda], &slice)?;
    Ok(path.map(|p| p.into_iter().map(|x| line[x]).collect()))
}
