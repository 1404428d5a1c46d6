use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{
    sine_lap_angle, Accumulation, ArcPiece, BaseCurve, DiagAffine, IsolatedPoint, Landmark, Node, NodeId,
    PieceId, Region, Space, SpacePoint,
};
use crate::error::{Error, Result};
use crate::geometry::{rat_to_f64, PlanarPoint, Point2, Rat};
use crate::schema::SpaceDesc;

/// The gallery of spaces that can be built by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NamedSpace {
    /// `[-1, 1]` on the horizontal axis.
    Interval,
    /// Closed topologist's sine curve truncated after `pieces` laps.
    Sine { pieces: u32 },
    /// Sine curve with the horizontal arc `[b, c]` attached at `b`.
    ExtendedSine { pieces: u32 },
    /// `curves` affine copies of the sine curve chained at their endpoints,
    /// converging to a single point `s_inf`.
    ChainOfSines { curves: u32, pieces: u32 },
    /// The same chain converging to the vertical arc `S_inf` at `x = -2`.
    W { curves: u32, pieces: u32 },
    /// `W ∪ X` with `X` the extended sine curve.
    Z { curves: u32, pieces: u32 },
    /// Countable planar space whose alpha-limit set is not invariant under
    /// the map, truncated at `n_max` columns and `m_max` rows.
    ShiftCloud { n_max: u32, m_max: u32 },
    /// `count` points on the horizontal axis.
    Discrete { count: u32 },
}

impl NamedSpace {
    pub fn label(&self) -> &'static str {
        match self {
            NamedSpace::Interval => "interval",
            NamedSpace::Sine { .. } => "sine",
            NamedSpace::ExtendedSine { .. } => "extended_sine",
            NamedSpace::ChainOfSines { .. } => "chain_of_sines",
            NamedSpace::W { .. } => "W",
            NamedSpace::Z { .. } => "Z",
            NamedSpace::ShiftCloud { .. } => "shift_cloud",
            NamedSpace::Discrete { .. } => "discrete",
        }
    }
}

pub fn build_named_space(name: &NamedSpace, mesh: Rat) -> Result<Space> {
    if mesh <= Rat::from_integer(0) {
        return Err(Error::ZeroMesh(mesh.to_string()));
    }
    let mut b = Builder::new(mesh);
    let compact = !matches!(name, NamedSpace::ShiftCloud { .. });
    match *name {
        NamedSpace::Interval => {
            let lo = b.node("-1", Some(PlanarPoint::ints(-1, 0)), Point2::new(-1.0, 0.0));
            let hi = b.node("1", Some(PlanarPoint::ints(1, 0)), Point2::new(1.0, 0.0));
            let i = b.piece("I", BaseCurve::Horizontal { y: 0.0 }, DiagAffine::IDENTITY, -1.0, 1.0, [lo, hi], 2);
            b.point_landmark("-1", SpacePoint::Node(lo));
            b.point_landmark("1", SpacePoint::Node(hi));
            b.set_landmark("I", vec![Region::Piece(i)]);
        }
        NamedSpace::Sine { pieces } => {
            need(pieces >= 1, "sine curve needs at least one piece")?;
            let x = b.sine_curve("", DiagAffine::IDENTITY, pieces, None, ("a", "b"), exact_ab(None));
            b.sine_landmarks("", &x);
        }
        NamedSpace::ExtendedSine { pieces } => {
            need(pieces >= 1, "sine curve needs at least one piece")?;
            b.extended_sine(pieces);
        }
        NamedSpace::ChainOfSines { curves, pieces } => {
            need(curves >= 2 && pieces >= 1, "chain needs at least two curves and one piece each")?;
            b.chain(curves, pieces, false);
        }
        NamedSpace::W { curves, pieces } => {
            need(curves >= 2 && pieces >= 1, "W needs at least two curves and one piece each")?;
            b.chain(curves, pieces, true);
        }
        NamedSpace::Z { curves, pieces } => {
            need(curves >= 2 && pieces >= 1, "Z needs at least two curves and one piece each")?;
            need(curves <= pieces, "Z needs at least as many sine pieces as chain curves")?;
            let w = b.chain(curves, pieces, true);
            let x = b.extended_sine(pieces);
            b.set_landmark("W", w.clone());
            b.set_landmark("X", x.clone());
            let ac = b.regions("[a,c]");
            let mut wac = w.clone();
            wac.extend(ac.clone());
            b.set_landmark("W+[a,c]", wac);
            for n in 1..=curves {
                let an = b.regions(&format!("A_{n}"));
                b.set_landmark(&format!("A_{n}+X"), [an.clone(), x.clone()].concat());
                b.set_landmark(&format!("A_{n}+[a,c]"), [an, ac.clone()].concat());
            }
            let sinf = b.regions("S_inf");
            b.set_landmark("S_inf+X", [sinf.clone(), x].concat());
            b.set_landmark("S_inf+[a,c]", [sinf, ac].concat());
        }
        NamedSpace::ShiftCloud { n_max, m_max } => {
            need(n_max >= 2 && m_max >= 1, "shift cloud needs n_max >= 2 and m_max >= 1")?;
            need(n_max >= m_max, "shift cloud needs n_max >= m_max so every row shift stays inside")?;
            b.shift_cloud(n_max as i64, m_max as i64);
        }
        NamedSpace::Discrete { count } => {
            need(count >= 1, "discrete space needs a point")?;
            for i in 0..count as i64 {
                let id = b.point(&format!("p{i}"), PlanarPoint::ints(i, 0));
                b.set_landmark(&format!("p{i}"), vec![Region::Point(id)]);
            }
        }
    }
    let all: Vec<Region> = (0..b.pieces.len())
        .map(Region::Piece)
        .chain((0..b.points.len()).map(Region::Point))
        .collect();
    b.set_landmark("all", all);
    let mut space = Space::from_skeleton(
        name.label(),
        b.pieces,
        b.nodes,
        b.points,
        b.accumulations,
        b.landmarks,
        vec![name.label().to_string()],
        compact,
    );
    space.desc = Some(SpaceDesc::from_named(name, mesh));
    Ok(space)
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::TruncationTooSmall(msg.to_string()))
    }
}

struct SineCurve {
    laps: Vec<PieceId>,
    ab: PieceId,
    a: NodeId,
    b: NodeId,
    outer: NodeId,
}

/// Placement of the `i`-th chain copy: `(x, y) ↦ (-2 - 2^-i - (π/2)x/2^i, (-1)^(i+1) y)`.
fn chain_transform(i: u32) -> DiagAffine {
    let scale = 0.5f64.powi(i as i32);
    DiagAffine { sx: -(PI / 2.0) * scale, tx: -2.0 - scale, sy: if i % 2 == 1 { 1.0 } else { -1.0 }, ty: 0.0 }
}

fn exact_ab(i: Option<u32>) -> (PlanarPoint, PlanarPoint) {
    match i {
        None => (PlanarPoint::ints(0, 1), PlanarPoint::ints(0, -1)),
        Some(i) => {
            let x = Rat::from_integer(-2) - Rat::new(1, 1i64 << i);
            let sign = if i % 2 == 1 { 1 } else { -1 };
            (
                PlanarPoint::new(x, Rat::from_integer(sign)),
                PlanarPoint::new(x, Rat::from_integer(-sign)),
            )
        }
    }
}

struct Builder {
    mesh: Rat,
    pieces: Vec<ArcPiece>,
    nodes: Vec<Node>,
    points: Vec<IsolatedPoint>,
    accumulations: Vec<Accumulation>,
    landmarks: BTreeMap<String, Landmark>,
}

impl Builder {
    fn new(mesh: Rat) -> Self {
        Builder {
            mesh,
            pieces: Vec::new(),
            nodes: Vec::new(),
            points: Vec::new(),
            accumulations: Vec::new(),
            landmarks: BTreeMap::new(),
        }
    }

    fn node(&mut self, label: &str, exact: Option<PlanarPoint>, pos: Point2) -> NodeId {
        let pos = exact.map(|e| e.to_f64()).unwrap_or(pos);
        self.nodes.push(Node { label: label.to_string(), pos, exact });
        self.nodes.len() - 1
    }

    #[allow(clippy::too_many_arguments)]
    fn piece(
        &mut self,
        label: &str,
        curve: BaseCurve,
        transform: DiagAffine,
        lo: f64,
        hi: f64,
        nodes: [NodeId; 2],
        units: i64,
    ) -> PieceId {
        // units / mesh, rounded up
        let q = Rat::from_integer(units) / self.mesh;
        let divisions = q.ceil().to_integer().max(1) as usize;
        self.pieces.push(ArcPiece { label: label.to_string(), curve, transform, lo, hi, nodes, summand: 0, divisions });
        self.pieces.len() - 1
    }

    fn point(&mut self, label: &str, coords: PlanarPoint) -> usize {
        self.points.push(IsolatedPoint { label: label.to_string(), coords, summand: 0, footprint: Vec::new() });
        self.points.len() - 1
    }

    fn point_landmark(&mut self, name: &str, p: SpacePoint) {
        self.landmarks.insert(name.to_string(), Landmark::Point(p));
    }

    fn set_landmark(&mut self, name: &str, regions: Vec<Region>) {
        self.landmarks.insert(name.to_string(), Landmark::Set(regions));
    }

    fn regions(&self, name: &str) -> Vec<Region> {
        match &self.landmarks[name] {
            Landmark::Set(r) => r.clone(),
            Landmark::Point(_) => Vec::new(),
        }
    }

    /// Adds `pieces` laps and the limit arc of one (possibly transformed) sine
    /// curve. `outer` reuses an existing node for the free end of `P_1`.
    fn sine_curve(
        &mut self,
        prefix: &str,
        m: DiagAffine,
        pieces: u32,
        outer: Option<NodeId>,
        (a_label, b_label): (&str, &str),
        (a_exact, b_exact): (PlanarPoint, PlanarPoint),
    ) -> SineCurve {
        let mut lap_nodes = Vec::with_capacity(pieces as usize + 1);
        for k in 1..=pieces + 1 {
            let u = (2 * k - 1) as f64 * PI / 2.0;
            let y = if k % 2 == 1 { 1.0 } else { -1.0 };
            let pos = m.apply(Point2::new(1.0 / u, y));
            let id = match (k, outer) {
                (1, Some(existing)) => existing,
                _ => self.node(&format!("{prefix}n_{k}"), None, pos),
            };
            lap_nodes.push(id);
        }
        let mut laps = Vec::new();
        for n in 1..=pieces {
            // lo end is y = -1
            let (lo_node, hi_node) = if n % 2 == 1 {
                (lap_nodes[n as usize], lap_nodes[n as usize - 1])
            } else {
                (lap_nodes[n as usize - 1], lap_nodes[n as usize])
            };
            debug_assert!((sine_lap_angle(n, -1.0).sin() + 1.0).abs() < 1e-12);
            laps.push(self.piece(
                &format!("{prefix}P_{n}"),
                BaseCurve::Sine { n },
                m,
                -1.0,
                1.0,
                [lo_node, hi_node],
                2,
            ));
        }
        let a = self.node(a_label, Some(a_exact), Point2::new(0.0, 0.0));
        let b = self.node(b_label, Some(b_exact), Point2::new(0.0, 0.0));
        let ab = self.piece(&format!("{prefix}[a,b]"), BaseCurve::Vertical { x: 0.0 }, m, -1.0, 1.0, [b, a], 2);
        self.accumulations.push(Accumulation::ParamMatch { from: *laps.last().unwrap(), to: ab, flip: false });
        SineCurve { laps, ab, a, b, outer: lap_nodes[0] }
    }

    fn sine_landmarks(&mut self, prefix: &str, x: &SineCurve) {
        let a_name = self.nodes[x.a].label.clone();
        let b_name = self.nodes[x.b].label.clone();
        self.point_landmark(&a_name, SpacePoint::Node(x.a));
        self.point_landmark(&b_name, SpacePoint::Node(x.b));
        self.set_landmark(&format!("{prefix}[a,b]"), vec![Region::Piece(x.ab)]);
        for (k, &p) in x.laps.iter().enumerate() {
            self.set_landmark(&format!("{prefix}P_{}", k + 1), vec![Region::Piece(p)]);
        }
        self.set_landmark(&format!("{prefix}S"), x.laps.iter().map(|&p| Region::Piece(p)).collect());
        self.point_landmark(&format!("{prefix}end"), SpacePoint::Node(x.outer));
    }

    fn extended_sine(&mut self, pieces: u32) -> Vec<Region> {
        let x = self.sine_curve("", DiagAffine::IDENTITY, pieces, None, ("a", "b"), exact_ab(None));
        self.sine_landmarks("", &x);
        let c = self.node("c", Some(PlanarPoint::ints(-1, -1)), Point2::new(-1.0, -1.0));
        let bc = self.piece("[b,c]", BaseCurve::Horizontal { y: -1.0 }, DiagAffine::IDENTITY, -1.0, 0.0, [c, x.b], 1);
        self.point_landmark("c", SpacePoint::Node(c));
        self.set_landmark("[b,c]", vec![Region::Piece(bc)]);
        self.set_landmark("[a,c]", vec![Region::Piece(x.ab), Region::Piece(bc)]);
        let mut all: Vec<Region> = x.laps.iter().map(|&p| Region::Piece(p)).collect();
        all.push(Region::Piece(x.ab));
        all.push(Region::Piece(bc));
        all
    }

    /// Chain of `curves` sine curves; with `segment` the limit is the arc
    /// `S_inf`, otherwise the point `s_inf`. Returns the regions of the chain.
    fn chain(&mut self, curves: u32, pieces: u32, segment: bool) -> Vec<Region> {
        let mut outer = None;
        let mut all = Vec::new();
        let mut per_curve = Vec::new();
        for i in 1..=curves {
            let prefix = format!("S_{i}.");
            let (a_l, b_l) = (format!("a_{i}"), format!("b_{i}"));
            let c = self.sine_curve(&prefix, chain_transform(i), pieces, outer, (&a_l, &b_l), exact_ab(Some(i)));
            outer = Some(c.b);
            self.point_landmark(&a_l, SpacePoint::Node(c.a));
            self.point_landmark(&b_l, SpacePoint::Node(c.b));
            self.set_landmark(&format!("[a_{i},b_{i}]"), vec![Region::Piece(c.ab)]);
            let mut regions: Vec<Region> = c.laps.iter().map(|&p| Region::Piece(p)).collect();
            regions.push(Region::Piece(c.ab));
            self.set_landmark(&format!("S_{i}"), regions.clone());
            if i == 1 {
                self.point_landmark("S_1.end", SpacePoint::Node(c.outer));
            }
            all.extend(regions.clone());
            per_curve.push((c, regions));
        }
        let (last, last_regions) = per_curve.last().unwrap();
        let limit = if segment {
            let top = self.node("S_inf.top", Some(PlanarPoint::ints(-2, 1)), Point2::new(-2.0, 1.0));
            let bottom = self.node("S_inf.bottom", Some(PlanarPoint::ints(-2, -1)), Point2::new(-2.0, -1.0));
            let s = self.piece("S_inf", BaseCurve::Vertical { x: -2.0 }, DiagAffine::IDENTITY, -1.0, 1.0, [bottom, top], 2);
            // actual height of the last copy is (-1)^(C+1) times its parameter
            let flip = curves % 2 == 0;
            for r in last_regions {
                if let Region::Piece(p) = r {
                    self.accumulations.push(Accumulation::ParamMatch { from: *p, to: s, flip });
                }
            }
            self.point_landmark("S_inf.top", SpacePoint::Node(top));
            self.point_landmark("S_inf.bottom", SpacePoint::Node(bottom));
            self.point_landmark("w", SpacePoint::Node(bottom));
            Region::Piece(s)
        } else {
            let id = self.point("s_inf", PlanarPoint::ints(-2, 0));
            self.accumulations.push(Accumulation::ToTarget { from: last_regions.clone(), to: Region::Point(id) });
            self.point_landmark("s_inf", SpacePoint::Isolated(id));
            Region::Point(id)
        };
        let _ = last;
        let limit_name = if segment { "S_inf" } else { "s_inf" };
        self.set_landmark(limit_name, vec![limit.clone()]);
        for n in 1..=curves {
            let (c, _) = &per_curve[n as usize - 1];
            let mut regions = vec![Region::Piece(c.ab)];
            for (_, r) in per_curve.iter().skip(n as usize) {
                regions.extend(r.iter().cloned());
            }
            regions.push(limit.clone());
            self.set_landmark(&format!("A_{n}"), regions);
        }
        all.push(limit);
        all
    }

    fn shift_cloud(&mut self, n_max: i64, m_max: i64) {
        let r = Rat::new;
        let label = |p: PlanarPoint| format!("({},{})", p.x, p.y);
        let origin = self.point(&label(PlanarPoint::ints(0, 0)), PlanarPoint::ints(0, 0));
        self.point_landmark("origin", SpacePoint::Isolated(origin));
        let mut a_set = Vec::new();
        let mut b_set = Vec::new();
        let mut c_set = Vec::new();
        let mut axis = BTreeMap::new();
        for n in 1..=n_max {
            let p = PlanarPoint::new(r(1, n), r(0, 1));
            let id = self.point(&label(p), p);
            axis.insert(n, id);
            a_set.push(Region::Point(id));
        }
        for n in 2..=n_max {
            let p = PlanarPoint::ints(n, 0);
            a_set.push(Region::Point(self.point(&label(p), p)));
        }
        let mut rows: BTreeMap<i64, Vec<(i64, usize)>> = BTreeMap::new();
        for n in 1..=n_max {
            for m in n..=m_max {
                let p = PlanarPoint::new(r(1, n), r(1, m));
                let id = self.point(&label(p), p);
                rows.entry(n).or_default().push((m, id));
                b_set.push(Region::Point(id));
            }
        }
        for n in 2..=n_max {
            for m in 1..=m_max {
                let p = PlanarPoint::new(Rat::from_integer(n), Rat::from_integer(1) + r(1, m));
                c_set.push(Region::Point(self.point(&label(p), p)));
            }
        }
        // (1/n, 1/m) -> (1/n, 0) as m grows; (1/n, 0) -> (0, 0) as n grows
        const TAIL: usize = 3;
        for (n, col) in &rows {
            let tail: Vec<Region> = col.iter().rev().take(TAIL).map(|&(_, id)| Region::Point(id)).collect();
            self.accumulations.push(Accumulation::ToTarget { from: tail, to: Region::Point(axis[n]) });
        }
        let axis_tail: Vec<Region> = axis.values().rev().take(TAIL).map(|&id| Region::Point(id)).collect();
        let mut diag_tail = axis_tail.clone();
        for (_, col) in rows.iter().rev().take(TAIL) {
            diag_tail.extend(col.iter().map(|&(_, id)| Region::Point(id)));
        }
        self.accumulations.push(Accumulation::ToTarget { from: diag_tail, to: Region::Point(origin) });
        self.set_landmark("A", a_set);
        self.set_landmark("B", b_set);
        self.set_landmark("C", c_set);
        let _ = rat_to_f64;
    }
}
