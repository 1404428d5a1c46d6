//! Alpha-limit engines, the basic facts suite, exactness and the survey of
//! realizable closed sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CellGraph;
use crate::maps::{exact_dist2, Behavior, MapSpec};
use crate::space::{Accumulation, CellId, ClosedSet, SetRepr, Space, SpacePoint};

pub const DEFAULT_LAYER_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageLayers {
    pub basepoint: SpacePoint,
    pub layers: Vec<BTreeSet<SpacePoint>>,
}

impl PreimageLayers {
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    /// `⋃_{lo ≤ k ≤ hi} layers[k]`.
    pub fn union(&self, lo: usize, hi: usize) -> BTreeSet<SpacePoint> {
        self.layers[lo..=hi.min(self.depth())].iter().flatten().copied().collect()
    }
}

fn collapses(b: &Behavior) -> bool {
    matches!(b, Behavior::Constant(_) | Behavior::DistanceArc)
}

/// Preimages of the finite cloud under the collapsing pieces, keyed by image.
fn collapse_index(space: &Space, map: &MapSpec) -> Result<HashMap<SpacePoint, Vec<SpacePoint>>> {
    let mut index: HashMap<SpacePoint, Vec<SpacePoint>> = HashMap::new();
    for p in space.cloud() {
        let collapsing = match p {
            SpacePoint::Arc { piece, .. } => collapses(&map.pieces[piece]),
            SpacePoint::Node(n) => space.node_incidence(n).iter().any(|&(pc, _)| collapses(&map.pieces[pc])),
            SpacePoint::Isolated(id) => collapses(&map.points[id]),
        };
        if collapsing {
            index.entry(map.evaluate(space, p)?).or_default().push(p);
        }
    }
    Ok(index)
}

/// `layers[k] = f^{-k}(x)` restricted to exact inverse branches and, on
/// collapsing pieces, to the space's finite cloud.
pub fn preimage_layers(space: &Space, map: &MapSpec, x: SpacePoint, depth: usize, cap: usize) -> Result<PreimageLayers> {
    let x = space.normalize(x);
    let index = collapse_index(space, map)?;
    let mut layers = vec![BTreeSet::from([x])];
    let mut total = 1;
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for &q in layers.last().unwrap() {
            next.extend(map.invert_exact(space, q));
            if let Some(pre) = index.get(&q) {
                next.extend(pre.iter().copied());
            }
        }
        total += next.len();
        if total > cap {
            return Err(Error::CapExceeded(cap));
        }
        layers.push(next);
    }
    Ok(PreimageLayers { basepoint: x, layers })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ExactTruncated,
    GraphEnclosure,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactTruncated => "exact-truncated",
            Method::GraphEnclosure => "graph-enclosure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub method: Method,
    pub basepoint: SpacePoint,
    pub params: BTreeMap<String, String>,
    pub members: ClosedSet,
    /// Enclosure before the accumulation and backward closure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_members: Option<BTreeSet<CellId>>,
    pub verdicts: Vec<Verdict>,
}

impl AlphaReport {
    pub fn cells(&self) -> &BTreeSet<CellId> {
        self.members.cell_set().expect("enclosure reports hold cells")
    }

    pub fn points(&self) -> &[SpacePoint] {
        match &self.members.repr {
            SetRepr::Points(p) => p,
            _ => &[],
        }
    }

    /// Cells meeting the member set.
    pub fn member_cells(&self, space: &Space) -> BTreeSet<CellId> {
        match &self.members.repr {
            SetRepr::Cells(c) => c.clone(),
            SetRepr::Points(p) => p.iter().flat_map(|&q| space.cells_containing(q)).collect(),
            SetRepr::Cylinders(_) => BTreeSet::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Verdicts as `name: pass|FAIL (detail)` lines in a fixed order.
    pub fn verdict_block(&self) -> String {
        self.verdicts
            .iter()
            .map(|v| format!("{}: {} ({})\n", v.name, if v.pass { "pass" } else { "FAIL" }, v.detail))
            .collect()
    }
}

/// Bucketed point set for `ε`-ball queries.
struct Buckets<'a> {
    space: &'a Space,
    eps: f64,
    grid: HashMap<(usize, i64, i64), Vec<SpacePoint>>,
}

impl<'a> Buckets<'a> {
    fn new(space: &'a Space, eps: f64, pts: impl IntoIterator<Item = SpacePoint>) -> Self {
        let mut grid: HashMap<(usize, i64, i64), Vec<SpacePoint>> = HashMap::new();
        for p in pts {
            grid.entry(Self::key(space, eps, p)).or_default().push(p);
        }
        Buckets { space, eps, grid }
    }

    fn key(space: &Space, eps: f64, p: SpacePoint) -> (usize, i64, i64) {
        let q = space.position(p);
        (space.summand_of(p), (q.x / eps).floor() as i64, (q.y / eps).floor() as i64)
    }

    /// Stored points in the buckets around `y`, same summand.
    fn around(&self, y: SpacePoint) -> impl Iterator<Item = SpacePoint> + '_ {
        let (s, i, j) = Self::key(self.space, self.eps, y);
        (-1..=1)
            .flat_map(move |di| (-1..=1).map(move |dj| (s, i.saturating_add(di), j.saturating_add(dj))))
            .filter_map(|k| self.grid.get(&k))
            .flatten()
            .copied()
    }

    /// Some stored point lies strictly within `ε` of `y`, in the same summand.
    fn near(&self, y: SpacePoint) -> bool {
        let (s, i, j) = Self::key(self.space, self.eps, y);
        // ε rounded down to a multiple of 2^-30, compared in i128.
        let e = (self.eps * (1u64 << 30) as f64).floor() as i128;
        let exact_eps2 = (e > 0).then(|| e * e);
        for di in -1..=1 {
            for dj in -1..=1 {
                let Some(bucket) = self.grid.get(&(s, i.saturating_add(di), j.saturating_add(dj))) else { continue };
                for &p in bucket {
                    if p == y {
                        return true;
                    }
                    let close = match (p, y, exact_eps2) {
                        (SpacePoint::Isolated(a), SpacePoint::Isolated(b), Some(e2)) => {
                            let d = exact_dist2(&self.space.points[a].coords, &self.space.points[b].coords);
                            let lhs = (*d.numer() as i128).checked_mul(1i128 << 60);
                            let rhs = e2.checked_mul(*d.denom() as i128);
                            match (lhs, rhs) {
                                (Some(l), Some(r)) => l < r,
                                _ => self.space.distance(p, y) < self.eps,
                            }
                        }
                        _ => self.space.distance(p, y) < self.eps,
                    };
                    if close {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// `cap`, lowered to half the smallest planar gap between cloud points of the
/// same summand whose cells are neither equal nor adjacent, so that ε-balls
/// never reach across to geometrically close but unrelated parts.
pub fn matched_eps(space: &Space, cap: f64) -> f64 {
    let cloud = space.cloud();
    let pts: Vec<_> = cloud
        .iter()
        .map(|&p| {
            let cells = space.cells_containing(p);
            let near: BTreeSet<CellId> = cells
                .iter()
                .flat_map(|&c| space.arc_neighbors(c).iter().chain(space.accumulation_neighbors(c)).copied().chain([c]))
                .collect();
            (space.position(p), cells, near)
        })
        .collect();
    let buckets = Buckets::new(space, cap, cloud.iter().copied());
    let index: HashMap<SpacePoint, usize> = cloud.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let gap = cloud
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let (pos, _, near) = &pts[i];
            buckets
                .around(p)
                .filter_map(|q| {
                    let (qpos, cells, _) = &pts[index[&q]];
                    (cells.is_disjoint(near) && space.summand_of(p) == space.summand_of(q)).then(|| pos.dist(*qpos))
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    cap.min(gap / 2.0)
}

/// Points of the cloud and of the layers lying strictly within `eps` of
/// `⋃_{⌊K/2⌋ ≤ k ≤ K} f^{-k}(x)`.
pub fn alpha_exact(space: &Space, map: &MapSpec, x: SpacePoint, depth: usize, eps: f64) -> Result<AlphaReport> {
    alpha_exact_with_cap(space, map, x, depth, eps, DEFAULT_LAYER_CAP)
}

pub fn alpha_exact_with_cap(
    space: &Space,
    map: &MapSpec,
    x: SpacePoint,
    depth: usize,
    eps: f64,
    cap: usize,
) -> Result<AlphaReport> {
    let layers = preimage_layers(space, map, x, depth, cap)?;
    let tail = layers.union(depth / 2, depth);
    let buckets = Buckets::new(space, eps, tail.iter().copied());
    let candidates: BTreeSet<SpacePoint> = space.cloud().into_iter().chain(layers.union(0, depth)).collect();
    let members: Vec<SpacePoint> = candidates.into_iter().filter(|&y| buckets.near(y)).collect();

    let mut worst = 0.0f64;
    for k in 1..=depth {
        for &p in &layers.layers[k] {
            let img = map.evaluate(space, p)?;
            let prev = &layers.layers[k - 1];
            let off = if prev.contains(&img) {
                0.0
            } else {
                prev.iter().map(|&q| space.distance(q, img)).fold(f64::INFINITY, f64::min)
            };
            worst = worst.max(off);
        }
    }
    let mut params = BTreeMap::new();
    params.insert("K".into(), depth.to_string());
    params.insert("eps".into(), eps.to_string());
    params.insert("h".into(), space.mesh().to_string());
    params.insert("layer_sizes".into(), layers.layers.iter().map(|l| l.len().to_string()).collect::<Vec<_>>().join(","));
    Ok(AlphaReport {
        method: Method::ExactTruncated,
        basepoint: x,
        params,
        members: ClosedSet::points(members),
        graph_members: None,
        verdicts: vec![Verdict {
            name: "layers_nested".into(),
            pass: worst <= 1e-9,
            detail: format!("max distance from f(layer k+1) to layer k = {worst:.2e}"),
        }],
    })
}

/// Cells with arbitrarily long graph paths to `cell(x)`, closed under the
/// space's accumulation records and under predecessors.
pub fn alpha_enclosure(space: &Space, graph: &CellGraph, x: SpacePoint) -> AlphaReport {
    let start = space.cell_of(x);
    let reaching = graph.backward_reach([start]);
    let cyclic: Vec<CellId> = reaching.iter().copied().filter(|&c| graph.on_cycle(c)).collect();
    let graph_part = graph.backward_reach(cyclic);
    let mut members = graph_part.clone();
    let links = space.accumulation_links();
    loop {
        let mut grown = members.clone();
        for rule in &space.accumulations {
            if let Accumulation::ToTarget { from, to } = rule {
                let tail: BTreeSet<CellId> = from.iter().flat_map(|r| space.region_cells(r)).collect();
                if tail.iter().any(|c| members.contains(c)) {
                    grown.extend(space.region_cells(to));
                }
            }
        }
        for &(a, b) in &links {
            if members.contains(&a) {
                grown.insert(b);
            }
        }
        let closed = graph.backward_reach(grown);
        if closed.len() == members.len() {
            break;
        }
        members = closed;
    }
    let mut params = BTreeMap::new();
    params.insert("rho".into(), graph.rho.to_string());
    params.insert("samples".into(), graph.samples.to_string());
    params.insert("h".into(), space.mesh().to_string());
    params.insert("collar".into(), "one cell".into());
    let backward_ok = members.iter().all(|&c| graph.predecessors(c).iter().all(|p| members.contains(p)));
    AlphaReport {
        method: Method::GraphEnclosure,
        basepoint: x,
        params,
        members: ClosedSet::cells(members),
        graph_members: Some(graph_part),
        verdicts: vec![Verdict {
            name: "backward_closed".into(),
            pass: backward_ok,
            detail: "every predecessor of a member is a member".into(),
        }],
    }
}

/// Whether the enclosure matches `expected` up to a one-cell collar:
/// `expected ⊆ members ⊆ expected ∪ collar(expected)`.
pub fn within_collar(space: &Space, members: &BTreeSet<CellId>, expected: &BTreeSet<CellId>) -> (bool, String) {
    let missing: Vec<CellId> = expected.difference(members).copied().collect();
    let collar = space.collar(expected);
    let extra: Vec<CellId> = members.iter().copied().filter(|c| !expected.contains(c) && !collar.contains(c)).collect();
    let detail = format!(
        "{} members, {} expected, {} missing, {} beyond collar{}",
        members.len(),
        expected.len(),
        missing.len(),
        extra.len(),
        extra.first().map(|&c| format!(" (e.g. {})", space.cell_label(c))).unwrap_or_default()
    );
    (missing.is_empty() && extra.is_empty(), detail)
}

/// True iff from every cell some forward image of at most `horizon` steps is
/// the whole cell set.
pub fn exactness_test(graph: &CellGraph, horizon: usize) -> bool {
    let n = graph.len();
    if n == 0 {
        return true;
    }
    let words = n.div_ceil(64);
    let full: Vec<u64> = (0..words)
        .map(|w| if w + 1 < words || n % 64 == 0 { u64::MAX } else { (1u64 << (n % 64)) - 1 })
        .collect();
    let succ_bits: Vec<Vec<u64>> = (0..n)
        .map(|c| {
            let mut b = vec![0u64; words];
            for &d in graph.successors(c) {
                b[d / 64] |= 1 << (d % 64);
            }
            b
        })
        .collect();
    (0..n).all(|c| {
        let mut cur = vec![0u64; words];
        cur[c / 64] |= 1 << (c % 64);
        for _ in 0..=horizon {
            if cur == full {
                return true;
            }
            let mut next = vec![0u64; words];
            for (w, &bits) in cur.iter().enumerate() {
                let mut bits = bits;
                while bits != 0 {
                    let i = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for (x, y) in next.iter_mut().zip(&succ_bits[i]) {
                        *x |= y;
                    }
                }
            }
            cur = next;
        }
        false
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactVerdict {
    Holds,
    /// Holds with strict inclusion.
    HoldsStrict,
    Violated,
    NotApplicable,
}

impl fmt::Display for FactVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactVerdict::Holds => "holds",
            FactVerdict::HoldsStrict => "holds (strict inclusion)",
            FactVerdict::Violated => "VIOLATED",
            FactVerdict::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactRow {
    pub fact: String,
    pub verdict: FactVerdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactsTable {
    pub rows: Vec<FactRow>,
}

impl FactsTable {
    pub fn verdict(&self, fact: &str) -> Option<FactVerdict> {
        self.rows.iter().find(|r| r.fact == fact).map(|r| r.verdict)
    }

    pub fn any_violated(&self) -> bool {
        self.rows.iter().any(|r| r.verdict == FactVerdict::Violated)
    }
}

impl fmt::Display for FactsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{}: {} ({})", r.fact, r.verdict, r.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Engine {
    Enclosure,
    Exact { depth: usize, eps: f64 },
}

const FACTS: [&str; 6] = ["closed", "nonempty", "whole-if-exact", "forward-invariant", "invariant", "interior-basepoint"];
pub const EXACTNESS_HORIZON: usize = 20;

/// Verdicts for the six basic facts over the given basepoints. The graph is
/// required for the enclosure engine and used for the exactness fact by both.
pub fn check_facts(
    space: &Space,
    map: &MapSpec,
    graph: Option<&CellGraph>,
    basepoints: &[SpacePoint],
    engine: Engine,
) -> Result<FactsTable> {
    let exact_graph = graph.map(|g| exactness_test(g, EXACTNESS_HORIZON));
    let mut per_fact: Vec<Vec<(FactVerdict, String)>> = vec![Vec::new(); FACTS.len()];
    for &x in basepoints {
        let verdicts = match engine {
            Engine::Enclosure => {
                let g = graph.ok_or_else(|| Error::InexactMap("enclosure engine needs a graph".into()))?;
                facts_enclosure(space, map, g, x, exact_graph.unwrap_or(false))?
            }
            Engine::Exact { depth, eps } => facts_exact(space, map, x, depth, eps, exact_graph)?,
        };
        for (i, v) in verdicts.into_iter().enumerate() {
            per_fact[i].push(v);
        }
    }
    let rows = FACTS
        .iter()
        .zip(per_fact)
        .map(|(&fact, vs)| {
            let verdict = if vs.iter().any(|v| v.0 == FactVerdict::Violated) {
                FactVerdict::Violated
            } else if vs.iter().any(|v| v.0 == FactVerdict::HoldsStrict) {
                FactVerdict::HoldsStrict
            } else if vs.iter().all(|v| v.0 == FactVerdict::NotApplicable) {
                FactVerdict::NotApplicable
            } else {
                FactVerdict::Holds
            };
            let detail = vs.into_iter().map(|v| v.1).collect::<Vec<_>>().join("; ");
            FactRow { fact: fact.into(), verdict, detail }
        })
        .collect();
    Ok(FactsTable { rows })
}

fn holds(ok: bool, detail: impl Into<String>) -> (FactVerdict, String) {
    (if ok { FactVerdict::Holds } else { FactVerdict::Violated }, detail.into())
}

fn na(detail: impl Into<String>) -> (FactVerdict, String) {
    (FactVerdict::NotApplicable, detail.into())
}

fn surjective_graph(g: &CellGraph) -> bool {
    (0..g.len()).all(|c| !g.predecessors(c).is_empty())
}

/// Cell whose arc and accumulation neighbors all lie in `set`.
fn interior_cell(space: &Space, set: &BTreeSet<CellId>) -> Option<CellId> {
    set.iter().copied().find(|&c| {
        space.arc_neighbors(c).iter().chain(space.accumulation_neighbors(c)).all(|d| set.contains(d))
    })
}

fn facts_enclosure(
    space: &Space,
    map: &MapSpec,
    g: &CellGraph,
    x: SpacePoint,
    exact: bool,
) -> Result<Vec<(FactVerdict, String)>> {
    let report = alpha_enclosure(space, g, x);
    let e = report.cells();
    let all = space.cell_count();
    let surjective = surjective_graph(g);
    let mut out = Vec::new();
    let accum_ok = space.accumulation_links().iter().all(|&(a, b)| !e.contains(&a) || e.contains(&b));
    out.push(holds(accum_ok, "union of closed cells, closed under accumulation records"));
    out.push(if space.compact && surjective {
        holds(!e.is_empty(), format!("{} cells", e.len()))
    } else {
        na("needs a compact space and a graph onto every cell")
    });
    out.push(if exact { holds(e.len() == all, format!("{} of {all} cells", e.len())) } else { na("graph not exact") });
    let mut escaping = Vec::new();
    for &c in e {
        let img = map.evaluate(space, space.cell_anchor(c))?;
        if space.cells_containing(img).is_disjoint(e) {
            escaping.push(space.cell_label(c));
        }
    }
    let sources: Vec<CellId> = e.iter().copied().filter(|&c| g.predecessors(c).is_empty()).collect();
    out.push(if !escaping.is_empty() {
        holds(false, format!("image leaves the set from {}", escaping[0]))
    } else if let Some(&c) = sources.first() {
        (FactVerdict::HoldsStrict, format!("{} has no preimage in the set", space.cell_label(c)))
    } else {
        holds(true, "image inside the set")
    });
    out.push(if space.compact && surjective {
        holds(sources.is_empty(), "image equals the set")
    } else {
        na("needs compactness and surjectivity")
    });
    out.push(match interior_cell(space, e) {
        Some(c) => holds(e.contains(&space.cell_of(x)), format!("interior cell {}", space.cell_label(c))),
        None => na("no interior cell"),
    });
    Ok(out)
}

fn facts_exact(
    space: &Space,
    map: &MapSpec,
    x: SpacePoint,
    depth: usize,
    eps: f64,
    exact_graph: Option<bool>,
) -> Result<Vec<(FactVerdict, String)>> {
    let report = alpha_exact(space, map, x, depth, eps)?;
    let members: BTreeSet<SpacePoint> = report.points().iter().copied().collect();
    let cells = report.member_cells(space);
    let mut out = Vec::new();
    let mut open_limit = None;
    for rule in &space.accumulations {
        let (tail, limit): (BTreeSet<CellId>, BTreeSet<CellId>) = match rule {
            Accumulation::ToTarget { from, to } => {
                (from.iter().flat_map(|r| space.region_cells(r)).collect(), space.region_cells(to))
            }
            Accumulation::ParamMatch { from, to, .. } => {
                (space.piece_cells(*from).iter().copied().collect(), space.piece_cells(*to).iter().copied().collect())
            }
        };
        if tail.is_subset(&cells) && limit.is_disjoint(&cells) {
            open_limit = tail.first().map(|&c| space.cell_label(c));
        }
    }
    out.push(match open_limit {
        None => holds(true, "contains the limit of every member tail"),
        Some(c) => holds(false, format!("tail through {c} without its limit")),
    });
    out.push(if space.compact { holds(!members.is_empty(), format!("{} points", members.len())) } else { na("space not compact") });
    out.push(match exact_graph {
        Some(true) => holds(cells.len() == space.cell_count(), format!("{} of {} cells", cells.len(), space.cell_count())),
        _ => na("graph not exact"),
    });
    let buckets = Buckets::new(space, eps, members.iter().copied());
    let mut images: HashMap<SpacePoint, SpacePoint> = HashMap::new();
    let mut escaping = None;
    for &y in &members {
        let img = map.evaluate(space, y)?;
        if !members.contains(&img) && !buckets.near(img) && escaping.is_none() {
            escaping = Some(y);
        }
        images.insert(y, img);
    }
    let hit: BTreeSet<SpacePoint> = images.values().copied().collect();
    let source = members.iter().copied().find(|y| matches!(y, SpacePoint::Isolated(_)) && !hit.contains(y));
    let label = |p: SpacePoint| match p {
        SpacePoint::Isolated(id) => space.points[id].label.clone(),
        other => format!("{other:?}"),
    };
    out.push(match (escaping, source) {
        (Some(y), _) => holds(false, format!("image of {} leaves the set", label(y))),
        (None, Some(y)) => (FactVerdict::HoldsStrict, format!("{} has no preimage in the set", label(y))),
        (None, None) => holds(true, "image inside the set"),
    });
    out.push(if space.compact { holds(source.is_none(), "image equals the set") } else { na("space not compact") });
    let interior = members.iter().copied().find(|&y| match y {
        SpacePoint::Isolated(id) => space.accumulation_neighbors(space.point_cell(id)).is_empty(),
        _ => false,
    });
    out.push(match interior {
        Some(y) => holds(members.contains(&space.normalize(x)), format!("isolated member {}", label(y))),
        None => na("no isolated member"),
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub set: String,
    pub method: String,
    pub map: Option<String>,
    pub basepoint: Option<String>,
    pub realized: bool,
    pub detail: String,
}

/// Registered construction realizing a landmark set: map and basepoint
/// landmark.
pub fn special_construction(space: &Space, set: &str) -> Option<(crate::maps::NamedMap, String)> {
    use crate::maps::{NamedMap, ZCase};
    let index = |prefix: &str| set.strip_prefix(prefix).and_then(|r| r.parse::<u32>().ok());
    match space.name.as_str() {
        "sine" if set == "[a,b]" => Some((NamedMap::Sine, "b".into())),
        "extended_sine" if set == "[a,c]" => Some((NamedMap::ExtendedSine, "b".into())),
        "chain_of_sines" => index("A_").map(|n| (NamedMap::Chain { n }, format!("b_{n}"))),
        "Z" => {
            let n = set.strip_prefix("A_").and_then(|r| r.split('+').next()).and_then(|d| d.parse::<u32>().ok());
            ZCase::ALL.iter().find_map(|&case| {
                let k = if case.uses_index() { n? } else { 0 };
                (case.target(k) == set).then(|| (NamedMap::Z { case, n: k }, case.basepoint(k)))
            })
        }
        _ => None,
    }
}

fn set_cells(space: &Space, set: &ClosedSet) -> BTreeSet<CellId> {
    match &set.repr {
        SetRepr::Cells(c) => c.clone(),
        SetRepr::Points(p) => p.iter().flat_map(|&q| space.cells_containing(q)).collect(),
        SetRepr::Cylinders(_) => BTreeSet::new(),
    }
}

fn verify_by_enclosure(space: &Space, map: &MapSpec, x: SpacePoint, expected: &BTreeSet<CellId>) -> Result<(bool, String)> {
    let g = crate::graph::transition_graph(space, map, crate::graph::DEFAULT_SAMPLES, None)?;
    let report = alpha_enclosure(space, &g, x);
    if expected.is_empty() {
        return Ok((report.cells().is_empty(), format!("{} members", report.cells().len())));
    }
    Ok(within_collar(space, report.cells(), expected))
}

/// Realize each set by a trivial construction, an arc construction, or a
/// registered special construction, and verify the result.
pub fn af_survey(space: &Space, family: &[ClosedSet]) -> Vec<SurveyRow> {
    use rayon::prelude::*;
    family.par_iter().map(|set| survey_one(space, set)).collect()
}

fn survey_one(space: &Space, set: &ClosedSet) -> SurveyRow {
    let name = set.name.clone().unwrap_or_else(|| "(unnamed)".into());
    let expected = set_cells(space, set);
    let label = |p: SpacePoint| format!("{p:?}");
    let row = |method: &str, map: Option<String>, basepoint: Option<String>, res: Result<(bool, String)>| {
        let (realized, detail) = res.unwrap_or_else(|e| (false, e.to_string()));
        SurveyRow { set: name.clone(), method: method.into(), map, basepoint, realized, detail }
    };
    match crate::constructors::trivial_realization(space, set) {
        Ok(Some(r)) => {
            let res = verify_by_enclosure(space, &r.map, r.basepoint, &expected);
            return row(&r.method, Some(r.map.name.clone()), Some(label(r.basepoint)), res);
        }
        Ok(None) => {}
        Err(e) => return row("trivial", None, None, Err(e)),
    }
    if matches!(set.repr, SetRepr::Cells(_)) {
        match crate::constructors::arc_realization(space, set) {
            Ok(r) => {
                let res = crate::constructors::verify_arc_realization(space, &r, &expected)
                    .map(|c| (c.pass(), c.detail.clone()));
                return row("arc", Some(r.map.name.clone()), Some(label(r.basepoint)), res);
            }
            Err(Error::NoJoiningArc) => {}
            Err(e) => return row("arc", None, None, Err(e)),
        }
    }
    if let Some((named, base)) = set.name.as_deref().and_then(|n| special_construction(space, n)) {
        let res = crate::maps::build_named_map(space, &named).and_then(|m| {
            let x = space.landmark_point(&base)?;
            verify_by_enclosure(space, &m, x, &expected)
        });
        return row("special", Some(crate::maps::map_label(&named)), Some(base), res);
    }
    row("none", None, None, Ok((false, "no construction applies".into())))
}

