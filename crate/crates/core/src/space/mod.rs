//! Finite-resolution planar spaces.
//!
//! A [`Space`] is a skeleton of parametrized arcs ([`ArcPiece`]), nodes where
//! arcs meet, and isolated points, plus derived data: a partition of every arc
//! into parameter cells, arc-adjacency between cells, and accumulation links
//! recording which truncated sequences converge onto which limit cells.

mod build;

pub use build::{build_named_space, NamedSpace};

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::cylinder::CylinderSet;
use crate::error::{Error, Result};
use crate::geometry::{point_polyline_dist, polyline_dist, PlanarPoint, Point2};
use crate::schema::SpaceDesc;

pub type CellId = usize;
pub type PieceId = usize;
pub type NodeId = usize;
pub type PointId = usize;

/// Parametrized planar curve underlying an arc piece, before its affine
/// placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BaseCurve {
    /// The `n`-th monotone lap of `y = sin(1/x)`, parametrized by its height
    /// `t = y ∈ [-1, 1]`.
    Sine { n: u32 },
    /// `x` fixed, parameter is `y`.
    Vertical { x: f64 },
    /// `y` fixed, parameter is `x`.
    Horizontal { y: f64 },
}

impl BaseCurve {
    pub fn eval(&self, t: f64) -> Point2 {
        match *self {
            BaseCurve::Sine { n } => Point2::new(1.0 / sine_lap_angle(n, t), t),
            BaseCurve::Vertical { x } => Point2::new(x, t),
            BaseCurve::Horizontal { y } => Point2::new(t, y),
        }
    }
}

/// Angle `u` on the `n`-th lap with `sin(u) = y`, where the lap spans
/// `[(2n-1)π/2, (2n+1)π/2]`.
pub fn sine_lap_angle(n: u32, y: f64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    n as f64 * PI + sign * y.clamp(-1.0, 1.0).asin()
}

/// Axis-aligned affine map `(x, y) ↦ (sx·x + tx, sy·y + ty)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagAffine {
    pub sx: f64,
    pub tx: f64,
    pub sy: f64,
    pub ty: f64,
}

impl DiagAffine {
    pub const IDENTITY: DiagAffine = DiagAffine { sx: 1.0, tx: 0.0, sy: 1.0, ty: 0.0 };

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(self.sx * p.x + self.tx, self.sy * p.y + self.ty)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcPiece {
    pub label: String,
    pub curve: BaseCurve,
    pub transform: DiagAffine,
    pub lo: f64,
    pub hi: f64,
    /// Nodes at the `lo` and `hi` ends.
    pub nodes: [NodeId; 2],
    pub summand: usize,
    pub divisions: usize,
}

impl ArcPiece {
    pub fn point(&self, t: f64) -> Point2 {
        self.transform.apply(self.curve.eval(t))
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn cell_bounds(&self, j: usize) -> (f64, f64) {
        (self.boundary(j), self.boundary(j + 1))
    }

    fn boundary(&self, j: usize) -> f64 {
        if j == 0 {
            self.lo
        } else if j >= self.divisions {
            self.hi
        } else {
            self.lo + self.len() * (j as f64) / (self.divisions as f64)
        }
    }

    /// Index of the cell containing `t`, preferring the upper cell on interior
    /// boundaries.
    pub fn cell_index(&self, t: f64) -> usize {
        let d = self.divisions;
        let mut j = (((t - self.lo) / self.len()) * d as f64).floor().max(0.0) as usize;
        j = j.min(d - 1);
        while j > 0 && t < self.boundary(j) {
            j -= 1;
        }
        while j + 1 < d && t >= self.boundary(j + 1) {
            j += 1;
        }
        j
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub label: String,
    pub pos: Point2,
    pub exact: Option<PlanarPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatedPoint {
    pub label: String,
    pub coords: PlanarPoint,
    pub summand: usize,
    /// Geometry of a collapsed set; empty for an ordinary point.
    pub footprint: Vec<Point2>,
}

/// A piece of a space referred to independently of the current resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Piece(PieceId),
    PieceRange { piece: PieceId, lo: f64, hi: f64 },
    Point(PointId),
}

/// Truncated sequence of cells converging onto a limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Accumulation {
    /// Cells of `from` accumulate on the cells of `to` with matching parameter
    /// (negated when `flip`).
    ParamMatch { from: PieceId, to: PieceId, flip: bool },
    /// Every cell of `from` accumulates on `to`.
    ToTarget { from: Vec<Region>, to: Region },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Landmark {
    Point(SpacePoint),
    Set(Vec<Region>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quotient {
    pub label: String,
    pub regions: Vec<Region>,
    pub point: PointId,
}

/// A point of a space: on an arc piece, at a node, or isolated.
///
/// Points are kept normalized: a parameter at either end of its piece is
/// replaced by the node, so equality is exact across pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpacePoint {
    Arc { piece: PieceId, t: OrderedFloat<f64> },
    Node(NodeId),
    Isolated(PointId),
}

impl SpacePoint {
    pub fn arc(piece: PieceId, t: f64) -> Self {
        SpacePoint::Arc { piece, t: OrderedFloat(t) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CellKind {
    Arc { piece: PieceId, index: usize, t0: f64, t1: f64 },
    Point(PointId),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub kind: CellKind,
    pub summand: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SetRepr {
    Cells(BTreeSet<CellId>),
    Points(Vec<SpacePoint>),
    Cylinders(CylinderSet),
}

/// Closed subset of a space at its resolution. A cell set is a union of
/// closed cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedSet {
    pub name: Option<String>,
    pub repr: SetRepr,
}

impl ClosedSet {
    pub fn cells(cells: impl IntoIterator<Item = CellId>) -> Self {
        ClosedSet { name: None, repr: SetRepr::Cells(cells.into_iter().collect()) }
    }

    pub fn points(points: impl IntoIterator<Item = SpacePoint>) -> Self {
        ClosedSet { name: None, repr: SetRepr::Points(points.into_iter().collect()) }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn cell_set(&self) -> Result<&BTreeSet<CellId>> {
        match &self.repr {
            SetRepr::Cells(c) => Ok(c),
            _ => Err(Error::RepresentationMismatch("expected a cell set".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Space {
    pub name: String,
    pub desc: Option<SpaceDesc>,
    pub pieces: Vec<ArcPiece>,
    pub nodes: Vec<Node>,
    pub points: Vec<IsolatedPoint>,
    pub accumulations: Vec<Accumulation>,
    pub landmarks: BTreeMap<String, Landmark>,
    pub summands: Vec<String>,
    pub quotients: Vec<Quotient>,
    pub compact: bool,
    cells: Vec<Cell>,
    piece_cells: Vec<Vec<CellId>>,
    point_cell: Vec<CellId>,
    node_incidence: Vec<Vec<(PieceId, usize)>>,
    arc_adj: Vec<Vec<CellId>>,
    accum_adj: Vec<Vec<CellId>>,
}

const RANGE_TOL: f64 = 1e-12;

impl Space {
    /// Create a space from its skeleton and derive cells and adjacency.
    #[allow(clippy::too_many_arguments)]
    pub fn from_skeleton(
        name: impl Into<String>,
        pieces: Vec<ArcPiece>,
        nodes: Vec<Node>,
        points: Vec<IsolatedPoint>,
        accumulations: Vec<Accumulation>,
        landmarks: BTreeMap<String, Landmark>,
        summands: Vec<String>,
        compact: bool,
    ) -> Space {
        let mut s = Space {
            name: name.into(),
            desc: None,
            pieces,
            nodes,
            points,
            accumulations,
            landmarks,
            summands,
            quotients: Vec::new(),
            compact,
            cells: Vec::new(),
            piece_cells: Vec::new(),
            point_cell: Vec::new(),
            node_incidence: Vec::new(),
            arc_adj: Vec::new(),
            accum_adj: Vec::new(),
        };
        s.assemble();
        s
    }

    pub(crate) fn assemble(&mut self) {
        let mut absorbed_piece: Vec<Vec<Option<usize>>> =
            self.pieces.iter().map(|p| vec![None; p.divisions]).collect();
        let mut absorbed_point: Vec<Option<usize>> = vec![None; self.points.len()];
        for (qi, q) in self.quotients.iter().enumerate() {
            for r in &q.regions {
                match *r {
                    Region::Piece(p) => absorbed_piece[p].iter_mut().for_each(|a| *a = Some(qi)),
                    Region::PieceRange { piece, lo, hi } => {
                        for j in 0..self.pieces[piece].divisions {
                            let (t0, t1) = self.pieces[piece].cell_bounds(j);
                            if t0 >= lo - RANGE_TOL && t1 <= hi + RANGE_TOL {
                                absorbed_piece[piece][j] = Some(qi);
                            }
                        }
                    }
                    Region::Point(id) => absorbed_point[id] = Some(qi),
                }
            }
        }

        let mut cells = Vec::new();
        let mut piece_cells: Vec<Vec<CellId>> =
            self.pieces.iter().map(|p| vec![usize::MAX; p.divisions]).collect();
        for (pid, piece) in self.pieces.iter().enumerate() {
            for j in 0..piece.divisions {
                if absorbed_piece[pid][j].is_none() {
                    let (t0, t1) = piece.cell_bounds(j);
                    piece_cells[pid][j] = cells.len();
                    cells.push(Cell {
                        kind: CellKind::Arc { piece: pid, index: j, t0, t1 },
                        summand: piece.summand,
                    });
                }
            }
        }
        let mut point_cell = vec![usize::MAX; self.points.len()];
        for (id, pt) in self.points.iter().enumerate() {
            if absorbed_point[id].is_none() {
                point_cell[id] = cells.len();
                cells.push(Cell { kind: CellKind::Point(id), summand: pt.summand });
            }
        }
        // Absorbed points follow their quotient, possibly through later quotients.
        for id in 0..self.points.len() {
            let mut cur = id;
            let mut guard = 0;
            while let Some(qi) = absorbed_point[cur] {
                cur = self.quotients[qi].point;
                guard += 1;
                if guard > self.quotients.len() + 1 {
                    break;
                }
            }
            point_cell[id] = point_cell[cur];
        }
        for (pid, row) in absorbed_piece.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if let Some(qi) = a {
                    piece_cells[pid][j] = point_cell[self.quotients[*qi].point];
                }
            }
        }

        let mut node_incidence = vec![Vec::new(); self.nodes.len()];
        for (pid, piece) in self.pieces.iter().enumerate() {
            node_incidence[piece.nodes[0]].push((pid, 0));
            node_incidence[piece.nodes[1]].push((pid, 1));
        }

        let n = cells.len();
        let mut arc: Vec<BTreeSet<CellId>> = vec![BTreeSet::new(); n];
        let link = |sets: &mut Vec<BTreeSet<CellId>>, a: CellId, b: CellId| {
            if a != b {
                sets[a].insert(b);
                sets[b].insert(a);
            }
        };
        for row in &piece_cells {
            for w in row.windows(2) {
                link(&mut arc, w[0], w[1]);
            }
        }
        for inc in &node_incidence {
            let ends: Vec<CellId> = inc
                .iter()
                .map(|&(p, end)| if end == 0 { piece_cells[p][0] } else { *piece_cells[p].last().unwrap() })
                .collect();
            for (i, &a) in ends.iter().enumerate() {
                for &b in &ends[i + 1..] {
                    link(&mut arc, a, b);
                }
            }
        }

        self.cells = cells;
        self.piece_cells = piece_cells;
        self.point_cell = point_cell;
        self.node_incidence = node_incidence;

        let mut acc: Vec<BTreeSet<CellId>> = vec![BTreeSet::new(); n];
        for rule in &self.accumulations {
            for (a, b) in self.accumulation_pairs(rule) {
                link(&mut acc, a, b);
            }
        }
        self.arc_adj = arc.into_iter().map(|s| s.into_iter().collect()).collect();
        self.accum_adj = acc.into_iter().map(|s| s.into_iter().collect()).collect();
    }

    fn accumulation_pairs(&self, rule: &Accumulation) -> Vec<(CellId, CellId)> {
        let mut out = Vec::new();
        match rule {
            Accumulation::ParamMatch { from, to, flip } => {
                let src = &self.pieces[*from];
                for j in 0..src.divisions {
                    let (mut t0, mut t1) = src.cell_bounds(j);
                    if *flip {
                        (t0, t1) = (-t1, -t0);
                    }
                    let a = self.piece_cells[*from][j];
                    for b in self.cells_overlapping(*to, t0, t1) {
                        out.push((a, b));
                    }
                }
            }
            Accumulation::ToTarget { from, to } => {
                let targets = self.region_cells(to);
                for r in from {
                    for a in self.region_cells(r) {
                        for &b in &targets {
                            out.push((a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Cells of `piece` whose parameter range overlaps `(lo, hi)`; for a
    /// degenerate range, the cells containing it.
    fn cells_overlapping(&self, piece: PieceId, lo: f64, hi: f64) -> BTreeSet<CellId> {
        let p = &self.pieces[piece];
        let mut out = BTreeSet::new();
        for j in 0..p.divisions {
            let (t0, t1) = p.cell_bounds(j);
            let hit = if hi > lo { t0 < hi && t1 > lo } else { t0 <= lo && lo <= t1 };
            if hit {
                out.insert(self.piece_cells[piece][j]);
            }
        }
        out
    }

    pub fn region_cells(&self, r: &Region) -> BTreeSet<CellId> {
        match *r {
            Region::Piece(p) => self.piece_cells[p].iter().copied().collect(),
            Region::PieceRange { piece, lo, hi } => self.cells_overlapping(piece, lo, hi),
            Region::Point(id) => [self.point_cell[id]].into_iter().collect(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, c: CellId) -> &Cell {
        &self.cells[c]
    }

    pub fn piece_cells(&self, piece: PieceId) -> &[CellId] {
        &self.piece_cells[piece]
    }

    pub fn point_cell(&self, id: PointId) -> CellId {
        self.point_cell[id]
    }

    pub fn arc_neighbors(&self, c: CellId) -> &[CellId] {
        &self.arc_adj[c]
    }

    pub fn accumulation_neighbors(&self, c: CellId) -> &[CellId] {
        &self.accum_adj[c]
    }

    /// Accumulation links from truncated tails onto limits, as cell pairs.
    pub fn accumulation_links(&self) -> Vec<(CellId, CellId)> {
        self.accumulations.iter().flat_map(|r| self.accumulation_pairs(r)).collect()
    }

    pub fn node_incidence(&self, node: NodeId) -> &[(PieceId, usize)] {
        &self.node_incidence[node]
    }

    pub fn piece_by_label(&self, label: &str) -> Option<PieceId> {
        self.pieces.iter().position(|p| p.label == label)
    }

    pub fn point_by_label(&self, label: &str) -> Option<PointId> {
        self.points.iter().position(|p| p.label == label)
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label == label)
    }

    /// Smallest parameter length of any arc cell, or 0 for point-only spaces.
    pub fn mesh(&self) -> f64 {
        if self.pieces.is_empty() {
            return 0.0;
        }
        self.pieces.iter().map(|p| p.len() / p.divisions as f64).fold(f64::INFINITY, f64::min)
    }

    pub fn normalize(&self, p: SpacePoint) -> SpacePoint {
        match p {
            SpacePoint::Arc { piece, t } => {
                let pc = &self.pieces[piece];
                if t.0 <= pc.lo {
                    SpacePoint::Node(pc.nodes[0])
                } else if t.0 >= pc.hi {
                    SpacePoint::Node(pc.nodes[1])
                } else {
                    p
                }
            }
            other => other,
        }
    }

    /// All `(piece, t)` representations of a point lying on arcs.
    pub fn arc_representations(&self, p: SpacePoint) -> Vec<(PieceId, f64)> {
        match p {
            SpacePoint::Arc { piece, t } => vec![(piece, t.0)],
            SpacePoint::Node(n) => self.node_incidence[n]
                .iter()
                .map(|&(pid, end)| {
                    let pc = &self.pieces[pid];
                    (pid, if end == 0 { pc.lo } else { pc.hi })
                })
                .collect(),
            SpacePoint::Isolated(_) => Vec::new(),
        }
    }

    /// Canonical cell of a point.
    pub fn cell_of(&self, p: SpacePoint) -> CellId {
        match self.normalize(p) {
            SpacePoint::Arc { piece, t } => self.piece_cells[piece][self.pieces[piece].cell_index(t.0)],
            SpacePoint::Node(n) => {
                let &(pid, end) = self.node_incidence[n].first().expect("node without pieces");
                if end == 0 {
                    self.piece_cells[pid][0]
                } else {
                    *self.piece_cells[pid].last().unwrap()
                }
            }
            SpacePoint::Isolated(id) => self.point_cell[id],
        }
    }

    /// Every cell whose closed geometry contains the point.
    pub fn cells_containing(&self, p: SpacePoint) -> BTreeSet<CellId> {
        match self.normalize(p) {
            SpacePoint::Isolated(id) => [self.point_cell[id]].into_iter().collect(),
            other => self
                .arc_representations(other)
                .into_iter()
                .flat_map(|(pid, t)| self.cells_overlapping(pid, t, t))
                .collect(),
        }
    }

    pub fn contains_point(&self, set: &BTreeSet<CellId>, p: SpacePoint) -> bool {
        self.cells_containing(p).iter().any(|c| set.contains(c))
    }

    pub fn position(&self, p: SpacePoint) -> Point2 {
        match p {
            SpacePoint::Arc { piece, t } => self.pieces[piece].point(t.0),
            SpacePoint::Node(n) => self.nodes[n].pos,
            SpacePoint::Isolated(id) => self.points[id].coords.to_f64(),
        }
    }

    pub fn summand_of(&self, p: SpacePoint) -> usize {
        match p {
            SpacePoint::Arc { piece, .. } => self.pieces[piece].summand,
            SpacePoint::Node(n) => self.node_incidence[n].first().map(|&(pid, _)| self.pieces[pid].summand).unwrap_or(0),
            SpacePoint::Isolated(id) => self.points[id].summand,
        }
    }

    fn geometry_of(&self, p: SpacePoint) -> Vec<Point2> {
        if let SpacePoint::Isolated(id) = p {
            if !self.points[id].footprint.is_empty() {
                return self.points[id].footprint.clone();
            }
        }
        vec![self.position(p)]
    }

    /// Sample polyline of a cell: `m + 1` points along an arc cell, or the
    /// footprint of a point cell.
    pub fn cell_polyline(&self, c: CellId, m: usize) -> Vec<Point2> {
        match self.cells[c].kind {
            CellKind::Arc { piece, t0, t1, .. } => {
                let pc = &self.pieces[piece];
                (0..=m).map(|i| pc.point(t0 + (t1 - t0) * i as f64 / m as f64)).collect()
            }
            CellKind::Point(id) => self.geometry_of(SpacePoint::Isolated(id)),
        }
    }

    /// Metric of the space: Euclidean inside a summand, 1 between summands.
    pub fn distance(&self, p: SpacePoint, q: SpacePoint) -> f64 {
        if self.summand_of(p) != self.summand_of(q) {
            return 1.0;
        }
        polyline_dist(&self.geometry_of(p), &self.geometry_of(q))
    }

    pub fn distance_point_cell(&self, p: SpacePoint, c: CellId) -> f64 {
        if self.summand_of(p) != self.cells[c].summand {
            return 1.0;
        }
        if self.cells_containing(p).contains(&c) {
            return 0.0;
        }
        let line = self.cell_polyline(c, 16);
        self.geometry_of(p)
            .into_iter()
            .map(|q| point_polyline_dist(q, &line))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn distance_cells(&self, a: CellId, b: CellId) -> f64 {
        if a == b {
            return 0.0;
        }
        if self.cells[a].summand != self.cells[b].summand {
            return 1.0;
        }
        if self.arc_adj[a].contains(&b) {
            return 0.0;
        }
        polyline_dist(&self.cell_polyline(a, 8), &self.cell_polyline(b, 8))
    }

    /// Distance from a point to a nonempty closed set.
    pub fn distance_to_set(&self, p: SpacePoint, set: &ClosedSet) -> Result<f64> {
        match &set.repr {
            SetRepr::Cells(cells) => {
                if cells.is_empty() {
                    return Err(Error::EmptySet);
                }
                if self.contains_point(cells, p) {
                    return Ok(0.0);
                }
                Ok(cells.iter().map(|&c| self.distance_point_cell(p, c)).fold(f64::INFINITY, f64::min))
            }
            SetRepr::Points(pts) => {
                if pts.is_empty() {
                    return Err(Error::EmptySet);
                }
                let p = self.normalize(p);
                Ok(pts
                    .iter()
                    .map(|&q| if self.normalize(q) == p { 0.0 } else { self.distance(p, q) })
                    .fold(f64::INFINITY, f64::min))
            }
            SetRepr::Cylinders(_) => Err(Error::RepresentationMismatch("cylinder set on a planar space".into())),
        }
    }

    /// Finite point cloud: every cell boundary and midpoint, plus point cells.
    pub fn cloud(&self) -> Vec<SpacePoint> {
        let mut out = BTreeSet::new();
        for c in &self.cells {
            match c.kind {
                CellKind::Arc { piece, t0, t1, .. } => {
                    out.insert(self.normalize(SpacePoint::arc(piece, t0)));
                    out.insert(self.normalize(SpacePoint::arc(piece, 0.5 * (t0 + t1))));
                    out.insert(self.normalize(SpacePoint::arc(piece, t1)));
                }
                CellKind::Point(id) => {
                    out.insert(SpacePoint::Isolated(id));
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn landmark(&self, name: &str) -> Result<&Landmark> {
        self.landmarks.get(name).ok_or_else(|| Error::UnknownLandmark(name.to_string()))
    }

    /// A point landmark, or failing that an isolated point or node label.
    pub fn landmark_point(&self, name: &str) -> Result<SpacePoint> {
        if !self.landmarks.contains_key(name) {
            if let Some(id) = self.point_by_label(name) {
                return Ok(SpacePoint::Isolated(id));
            }
            if let Some(n) = self.node_by_label(name) {
                return Ok(self.normalize(SpacePoint::Node(n)));
            }
        }
        match self.landmark(name)? {
            Landmark::Point(p) => Ok(self.normalize(*p)),
            Landmark::Set(regions) => match regions.as_slice() {
                [Region::Point(id)] => Ok(SpacePoint::Isolated(*id)),
                _ => Err(Error::RepresentationMismatch(format!("landmark `{name}` is not a point"))),
            },
        }
    }

    pub fn landmark_cells(&self, name: &str) -> Result<BTreeSet<CellId>> {
        Ok(match self.landmark(name)? {
            Landmark::Point(p) => self.cells_containing(*p),
            Landmark::Set(regions) => regions.iter().flat_map(|r| self.region_cells(r)).collect(),
        })
    }

    /// Landmark as a closed set: a cell set for set landmarks, a point set for
    /// point landmarks.
    pub fn landmark_set(&self, name: &str) -> Result<ClosedSet> {
        let set = match self.landmark(name)? {
            Landmark::Point(p) => ClosedSet::points([self.normalize(*p)]),
            Landmark::Set(_) => ClosedSet::cells(self.landmark_cells(name)?),
        };
        Ok(set.named(name))
    }

    pub fn all_cells(&self) -> BTreeSet<CellId> {
        (0..self.cells.len()).collect()
    }

    /// Cells at arc-distance one from the set and not in it.
    pub fn collar(&self, set: &BTreeSet<CellId>) -> BTreeSet<CellId> {
        set.iter()
            .flat_map(|&c| self.arc_adj[c].iter().chain(&self.accum_adj[c]).copied())
            .filter(|c| !set.contains(c))
            .collect()
    }

    pub fn cell_label(&self, c: CellId) -> String {
        match self.cells[c].kind {
            CellKind::Arc { piece, index, .. } => format!("{}#{}", self.pieces[piece].label, index),
            CellKind::Point(id) => self.points[id].label.clone(),
        }
    }

    /// Representative point of a cell (its lower end for arcs).
    pub fn cell_anchor(&self, c: CellId) -> SpacePoint {
        match self.cells[c].kind {
            CellKind::Arc { piece, t0, t1, .. } => self.normalize(SpacePoint::arc(piece, 0.5 * (t0 + t1))),
            CellKind::Point(id) => SpacePoint::Isolated(id),
        }
    }

    /// Refine every arc cell into `factor` cells.
    pub fn refine(&self, factor: usize) -> Result<Space> {
        if factor < 2 {
            return Err(Error::RefineFactor(factor));
        }
        let mut out = self.clone();
        for p in &mut out.pieces {
            p.divisions *= factor;
        }
        if let Some(d) = &mut out.desc {
            d.refine_mesh(factor);
        }
        out.assemble();
        Ok(out)
    }

    /// Parent cell in `coarse` of a cell of this space, assuming this space is
    /// a refinement of `coarse`.
    pub fn parent_in(&self, coarse: &Space, c: CellId) -> CellId {
        match self.cells[c].kind {
            CellKind::Arc { piece, t0, t1, .. } => coarse.cell_of(SpacePoint::arc(piece, 0.5 * (t0 + t1))),
            CellKind::Point(id) => coarse.point_cell(id),
        }
    }

    pub(crate) fn push_quotient(&mut self, q: Quotient) {
        self.quotients.push(q);
        self.assemble();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_lap_endpoints() {
        let u = sine_lap_angle(1, 1.0);
        assert!((u - PI / 2.0).abs() < 1e-12);
        let u = sine_lap_angle(1, -1.0);
        assert!((u - 1.5 * PI).abs() < 1e-12);
        let u = sine_lap_angle(2, -1.0);
        assert!((u - 1.5 * PI).abs() < 1e-12);
        let u = sine_lap_angle(2, 1.0);
        assert!((u - 2.5 * PI).abs() < 1e-12);
        for n in 1..6 {
            for &y in &[-0.9, -0.2, 0.3, 0.8] {
                assert!((sine_lap_angle(n, y).sin() - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cell_index_prefers_upper_on_boundaries() {
        let p = ArcPiece {
            label: "I".into(),
            curve: BaseCurve::Horizontal { y: 0.0 },
            transform: DiagAffine::IDENTITY,
            lo: -1.0,
            hi: 1.0,
            nodes: [0, 1],
            summand: 0,
            divisions: 8,
        };
        assert_eq!(p.cell_index(-1.0), 0);
        assert_eq!(p.cell_index(0.0), 4);
        assert_eq!(p.cell_index(1.0), 7);
        assert_eq!(p.cell_index(-0.75), 1);
        assert_eq!(p.cell_bounds(7), (0.75, 1.0));
    }
}
