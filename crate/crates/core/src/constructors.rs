//! Realizing closed sets as alpha-limit sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alpha::alpha_exact;
use crate::cylinder::{CylinderSet, CylinderSpace, EventuallyPeriodic, Word};
use crate::error::{Error, Result};
use crate::maps::{ArcRule, Behavior, MapSpec};
use crate::space::{CellId, CellKind, ClosedSet, SetRepr, Space, SpacePoint};
use crate::topology::{arc_join, is_clopen};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub method: String,
    pub map: MapSpec,
    pub basepoint: SpacePoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<CellId>>,
}

fn default_point(space: &Space) -> SpacePoint {
    space.landmark_point("a").unwrap_or_else(|_| space.cell_anchor(0))
}

/// Constant, identity or clopen-collapse maps for the whole space, the empty
/// set, a single point, and clopen sets. `None` when no pattern applies.
pub fn trivial_realization(space: &Space, set: &ClosedSet) -> Result<Option<Realization>> {
    let done = |method: &str, map: MapSpec, basepoint: SpacePoint| {
        map.validate(space)?;
        Ok(Some(Realization { method: method.into(), map, basepoint, path: None }))
    };
    match &set.repr {
        SetRepr::Points(pts) if pts.is_empty() => empty_set(space).and_then(|(m, b)| done("trivial:empty", m, b)),
        SetRepr::Points(pts) if pts.len() == 1 => done("trivial:point", MapSpec::identity(space), space.normalize(pts[0])),
        SetRepr::Points(_) | SetRepr::Cylinders(_) => Ok(None),
        SetRepr::Cells(cells) => {
            if cells.is_empty() {
                let (m, b) = empty_set(space)?;
                return done("trivial:empty", m, b);
            }
            if cells.len() == space.cell_count() {
                let a = default_point(space);
                return done("trivial:whole", MapSpec::constant(space, a), a);
            }
            if cells.len() == 1 {
                let c = *cells.iter().next().unwrap();
                if let CellKind::Point(id) = space.cell(c).kind {
                    return done("trivial:point", MapSpec::identity(space), SpacePoint::Isolated(id));
                }
            }
            if is_clopen(space, cells) {
                let e = space.cell_anchor(*cells.iter().next().unwrap());
                let mut m = MapSpec::identity(space);
                m.name = "collapse".into();
                for (pid, _) in space.pieces.iter().enumerate() {
                    if space.piece_cells(pid).iter().all(|c| cells.contains(c)) {
                        m.pieces[pid] = Behavior::Constant(e);
                    }
                }
                for id in 0..space.points.len() {
                    if cells.contains(&space.point_cell(id)) {
                        m.points[id] = Behavior::Constant(e);
                    }
                }
                m.fixed.push(("e".into(), e));
                return done("trivial:clopen", m, e);
            }
            Ok(None)
        }
    }
}

/// Constant map at `a` with a basepoint in a different cell, which then has no
/// preimages at all.
fn empty_set(space: &Space) -> Result<(MapSpec, SpacePoint)> {
    let a = default_point(space);
    let ca = space.cell_of(a);
    let b = space
        .cloud()
        .into_iter()
        .filter(|&p| space.cell_of(p) != ca && !space.cells_containing(p).contains(&ca))
        .max_by(|&p, &q| space.distance(a, p).total_cmp(&space.distance(a, q)))
        .ok_or(Error::EmptySet)?;
    Ok((MapSpec::constant(space, a), b))
}

/// `f(x) = γ(d(x, A) / (d(x, A) + 1))` along an arc leaving `A` at `γ(0) = a`.
///
/// The arc starts at the point shared by the last cell of `A` on a joining
/// path and the next cell, and runs to the middle of that next cell, so
/// `γ((0, 1])` avoids `A`.
pub fn arc_realization(space: &Space, set: &ClosedSet) -> Result<Realization> {
    let cells = set.cell_set()?;
    let path = arc_join(space, cells)?.ok_or(Error::NoJoiningArc)?;
    let (inside, outside) = (path[path.len() - 2], path[path.len() - 1]);
    let CellKind::Arc { piece, t0, t1, .. } = space.cell(outside).kind else {
        return Err(Error::NoJoiningArc);
    };
    let start = if space.cells_containing(SpacePoint::arc(piece, t0)).contains(&inside) { t0 } else { t1 };
    let rule = ArcRule { set: set.clone(), piece, t_start: start, t_end: 0.5 * (t0 + t1) };
    let a = space.normalize(rule.at(0.0));
    let mut map = MapSpec::uniform(space, "arc", Behavior::DistanceArc);
    map.arc_rule = Some(rule);
    map.fixed.push(("a".into(), a));
    map.validate(space)?;
    Ok(Realization { method: "arc".into(), map, basepoint: a, path: Some(path) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationCheck {
    pub collapses_set: bool,
    pub complement_invariant: bool,
    pub basepoint_in_set: bool,
    pub alpha_matches: bool,
    pub detail: String,
}

impl RealizationCheck {
    pub fn pass(&self) -> bool {
        self.collapses_set && self.complement_invariant && self.basepoint_in_set && self.alpha_matches
    }
}

/// Pointwise check of `f(A) = {a}`, `f(X∖A) ⊆ X∖A` on the cloud, and of the
/// exact engine's alpha-limit set against `A` up to one cell.
pub fn verify_arc_realization(space: &Space, real: &Realization, set: &BTreeSet<CellId>) -> Result<RealizationCheck> {
    let a = real.basepoint;
    let (mut collapses, mut invariant) = (true, true);
    let mut detail = String::new();
    for p in space.cloud() {
        let img = real.map.evaluate(space, p)?;
        if space.contains_point(set, p) {
            if img != a && collapses {
                collapses = false;
                detail.push_str(&format!("f({p:?}) = {img:?} ≠ a; "));
            }
        } else if space.contains_point(set, img) && invariant {
            invariant = false;
            detail.push_str(&format!("f({p:?}) = {img:?} lands in A; "));
        }
    }
    let eps = crate::alpha::matched_eps(space, space.mesh() / 2.0);
    let report = alpha_exact(space, &real.map, a, 8, eps)?;
    let members = report.member_cells(space);
    let (alpha_matches, d) = crate::alpha::within_collar(space, &members, set);
    detail.push_str(&d);
    Ok(RealizationCheck {
        collapses_set: collapses,
        complement_invariant: invariant,
        basepoint_in_set: space.contains_point(set, a),
        alpha_matches,
        detail,
    })
}

/// Decomposition `X = A ⊔ ⨆ B_i`, `B_i = U_i ⊔ V_i`, with `f(A) = a` and
/// `f(B_i) = b_i → a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDimRealization {
    pub depth: usize,
    pub set: CylinderSet,
    pub a: EventuallyPeriodic,
    /// `U_i` for `i < depth`; `None` when the flipped cylinder lies in `A`.
    pub u: Vec<Option<Word>>,
    pub b: Vec<Option<EventuallyPeriodic>>,
    /// Maximal cylinders of length ≤ depth missing `A` and every `U_i`, with
    /// the index of the `B_i` they join.
    pub v: Vec<(Word, usize)>,
}

fn flipped(a: &EventuallyPeriodic, i: usize) -> Word {
    let mut w = a.head(i + 1);
    w[i] ^= 1;
    w
}

fn comparable(x: &[u8], y: &[u8]) -> bool {
    let n = x.len().min(y.len());
    x[..n] == y[..n]
}

pub fn zero_dim_realization(space: &CylinderSpace, set: &CylinderSet) -> Result<ZeroDimRealization> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.is_full() {
        return Err(Error::FullSet);
    }
    if set.is_clopen() {
        return Err(Error::Clopen);
    }
    let depth = space.depth;
    let a = set.uncovered_points().into_iter().min().expect("not clopen").clone();
    let mut u = Vec::with_capacity(depth);
    for i in 0..depth {
        let d = flipped(&a, i);
        u.push(if set.covers_cylinder(&d) { None } else { shortest_disjoint_extension(set, &d, depth) });
    }
    if u.iter().all(Option::is_none) {
        return Err(Error::DepthTooSmall(depth));
    }
    let b = u.iter().map(|w| w.as_ref().map(|w| EventuallyPeriodic::padded(w, 0))).collect();
    let mut real = ZeroDimRealization { depth, set: set.clone(), a, u, b, v: Vec::new() };
    let mut v = Vec::new();
    real.collect_v(&mut Vec::new(), &mut v);
    real.v = v;
    Ok(real)
}

/// Lexicographically least among the shortest extensions `w ⊇ d`,
/// `|w| ≤ depth`, with `[w] ∩ A = ∅`.
fn shortest_disjoint_extension(set: &CylinderSet, d: &[u8], depth: usize) -> Option<Word> {
    let mut level = vec![d.to_vec()];
    while let Some(first) = level.first() {
        if first.len() > depth {
            return None;
        }
        if let Some(w) = level.iter().find(|w| set.disjoint_from_cylinder(w)) {
            return Some(w.clone());
        }
        level = level
            .iter()
            .flat_map(|w| {
                let mut w0 = w.clone();
                w0.push(0);
                let mut w1 = w.clone();
                w1.push(1);
                [w0, w1]
            })
            .filter(|w| !set.covers_cylinder(w))
            .collect();
    }
    None
}

impl ZeroDimRealization {
    fn free(&self, w: &[u8]) -> bool {
        self.set.disjoint_from_cylinder(w) && self.u.iter().flatten().all(|uw| !comparable(uw, w))
    }

    fn in_some_u(&self, w: &[u8]) -> bool {
        self.u.iter().flatten().any(|uw| uw.len() <= w.len() && w[..uw.len()] == *uw)
    }

    fn collect_v(&self, w: &mut Word, out: &mut Vec<(Word, usize)>) {
        if self.in_some_u(w) || self.set.covers_cylinder(w) {
            return;
        }
        if self.free(w) {
            out.push((w.clone(), self.index_for(w.len())));
            return;
        }
        if w.len() < self.depth {
            for bit in [0, 1] {
                w.push(bit);
                self.collect_v(w, out);
                w.pop();
            }
        }
    }

    /// Smallest `i ≥ k` with a `U_i`, else the largest available.
    fn index_for(&self, k: usize) -> usize {
        (k..self.u.len())
            .find(|&i| self.u[i].is_some())
            .or_else(|| (0..self.u.len()).rev().find(|&i| self.u[i].is_some()))
            .expect("some U_i")
    }

    /// Index of the `B_i` containing `x`, or `None` for points of `A`.
    pub fn piece_index(&self, x: &EventuallyPeriodic) -> Option<usize> {
        if self.set.contains(x) {
            return None;
        }
        if let Some(i) = self.u.iter().position(|w| w.as_ref().is_some_and(|w| x.in_cylinder(w))) {
            return Some(i);
        }
        let bound = self.depth
            + self.set.points.iter().filter_map(|p| x.first_difference(p)).max().unwrap_or(0)
            + self.set.words.iter().map(Vec::len).max().unwrap_or(0)
            + 1;
        let k = (0..=bound).find(|&k| self.free(&x.head(k))).unwrap_or(bound);
        Some(self.index_for(k))
    }

    pub fn evaluate(&self, x: &EventuallyPeriodic) -> EventuallyPeriodic {
        match self.piece_index(x) {
            None => self.a.clone(),
            Some(i) => self.b[i].clone().expect("index has a U"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDimCheck {
    pub disjoint: bool,
    pub clopen_pieces: bool,
    pub covers: bool,
    pub collapses_set: bool,
    pub complement_invariant: bool,
    pub b_converges: bool,
    pub layers_equal_set: bool,
    pub detail: String,
}

impl ZeroDimCheck {
    pub fn pass(&self) -> bool {
        self.disjoint
            && self.clopen_pieces
            && self.covers
            && self.collapses_set
            && self.complement_invariant
            && self.b_converges
            && self.layers_equal_set
    }
}

/// Checks the decomposition and `α_f(a) = A` on the depth cloud together with
/// the points of `A` and every `b_i`: each preimage layer `f^{-k}(a)`,
/// `k ≥ 1`, is exactly the set of cloud points in `A`.
pub fn verify_zero_dim(space: &CylinderSpace, real: &ZeroDimRealization, depth_k: usize) -> ZeroDimCheck {
    let mut detail = Vec::new();
    let us: Vec<&Word> = real.u.iter().flatten().collect();
    let mut words: Vec<&Word> = us.clone();
    words.extend(real.v.iter().map(|(w, _)| w));
    let mut disjoint = words.iter().all(|w| real.set.disjoint_from_cylinder(w));
    for (i, x) in words.iter().enumerate() {
        for y in &words[i + 1..] {
            if comparable(x, y) {
                disjoint = false;
                detail.push(format!("pieces overlap: {:?} {:?}", x, y));
            }
        }
    }
    let clopen_pieces = real.v.iter().all(|(_, i)| real.u[*i].is_some()) && real.b.iter().flatten().all(|b| !real.set.contains(b));

    let mut extra: Vec<EventuallyPeriodic> = real.set.points.clone();
    extra.extend(real.b.iter().flatten().cloned());
    extra.push(real.a.clone());
    let cloud = space.cloud(&extra);
    let mut covers = true;
    let (mut collapses, mut invariant) = (true, true);
    for x in &cloud {
        let in_a = real.set.contains(x);
        if !in_a && real.piece_index(x).is_none() {
            covers = false;
        }
        let y = real.evaluate(x);
        if in_a && y != real.a {
            collapses = false;
            detail.push(format!("f({x}) = {y}"));
        }
        if !in_a && real.set.contains(&y) {
            invariant = false;
            detail.push(format!("f({x}) = {y} ∈ A"));
        }
    }
    let dists: Vec<f64> = real.b.iter().flatten().map(|b| b.distance(&real.a)).collect();
    let b_converges = dists.windows(2).all(|w| w[1] < w[0]);

    let in_a: BTreeSet<&EventuallyPeriodic> = cloud.iter().filter(|x| real.set.contains(x)).collect();
    let mut layer: BTreeSet<&EventuallyPeriodic> = BTreeSet::from([&real.a]);
    let mut layers_equal_set = real.set.contains(&real.a);
    for k in 1..=depth_k {
        layer = cloud.iter().filter(|x| layer.contains(&real.evaluate(x))).collect();
        if layer != in_a {
            layers_equal_set = false;
            detail.push(format!("layer {k} has {} points, A has {}", layer.len(), in_a.len()));
            break;
        }
    }
    ZeroDimCheck {
        disjoint,
        clopen_pieces,
        covers,
        collapses_set: collapses,
        complement_invariant: invariant,
        b_converges,
        layers_equal_set,
        detail: detail.join("; "),
    }
}
