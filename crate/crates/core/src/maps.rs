//! Continuous self-maps described piece by piece.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rat_abs, rat_to_f64, Rat};
use crate::space::{ClosedSet, NodeId, PieceId, Space, SpacePoint};

/// Continuous piecewise-linear map of `[-1, 1]` given by its breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPL {
    breakpoints: Vec<(Rat, Rat)>,
}

impl IntervalPL {
    pub fn new(breakpoints: Vec<(Rat, Rat)>) -> Result<Self> {
        let one = Rat::from_integer(1);
        if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Schema("breakpoints must have strictly increasing x".into()));
        }
        if breakpoints.iter().any(|&(x, y)| rat_abs(x) > one || rat_abs(y) > one) {
            return Err(Error::Schema("breakpoints must lie in [-1, 1]²".into()));
        }
        Ok(IntervalPL { breakpoints })
    }

    /// Full 3-horseshoe through `(-1,-1), (-1/3,1), (1/3,-1), (1,1)`.
    pub fn horseshoe3() -> Self {
        let r = Rat::new;
        IntervalPL::new(vec![(r(-1, 1), r(-1, 1)), (r(-1, 3), r(1, 1)), (r(1, 3), r(-1, 1)), (r(1, 1), r(1, 1))])
            .expect("valid breakpoints")
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    fn segment(&self, i: usize) -> (Rat, Rat) {
        let (x0, y0) = self.breakpoints[i];
        let (x1, y1) = self.breakpoints[i + 1];
        let m = (y1 - y0) / (x1 - x0);
        (m, y0 - m * x0)
    }

    pub fn eval_exact(&self, x: Rat) -> Rat {
        let n = self.breakpoints.len();
        let i = (0..n - 1).find(|&i| x <= self.breakpoints[i + 1].0).unwrap_or(n - 2);
        let (m, c) = self.segment(i);
        m * x + c
    }

    /// Floating-point evaluation, exact at the breakpoints.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.breakpoints.len();
        for &(bx, by) in &self.breakpoints {
            if x == rat_to_f64(bx) {
                return rat_to_f64(by);
            }
        }
        let i = (0..n - 1).find(|&i| x <= rat_to_f64(self.breakpoints[i + 1].0)).unwrap_or(n - 2);
        let (m, c) = self.segment(i);
        (rat_to_f64(m) * x + rat_to_f64(c)).clamp(-1.0, 1.0)
    }

    pub fn lipschitz(&self) -> f64 {
        (0..self.breakpoints.len() - 1).map(|i| rat_to_f64(rat_abs(self.segment(i).0))).fold(0.0, f64::max)
    }

    /// All `x` with `f(x) = y`; a flat segment at height `y` contributes its
    /// endpoints.
    pub fn preimages(&self, y: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for i in 0..self.breakpoints.len() - 1 {
            let (x0, x1) = (rat_to_f64(self.breakpoints[i].0), rat_to_f64(self.breakpoints[i + 1].0));
            let (m, c) = self.segment(i);
            let x = if m == Rat::from_integer(0) {
                if rat_to_f64(c) != y {
                    continue;
                }
                x0
            } else {
                match exact_breakpoint_preimage(&self.breakpoints[i..i + 2], y) {
                    Some(x) => x,
                    None => (y - rat_to_f64(c)) / rat_to_f64(m),
                }
            };
            if x >= x0 && x <= x1 && !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }
}

fn exact_breakpoint_preimage(seg: &[(Rat, Rat)], y: f64) -> Option<f64> {
    seg.iter().find(|&&(_, by)| rat_to_f64(by) == y).map(|&(bx, _)| rat_to_f64(bx))
}

/// How a map acts on one arc piece or one isolated point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Behavior {
    Identity,
    /// Collapse onto a single point.
    Constant(SpacePoint),
    /// Parameter `t ↦ f(t)` on the same piece.
    Conjugate(IntervalPL),
    /// Parameter `t ↦ ±t` onto another piece with the same parameter range.
    Transport { target: PieceId, flip: bool },
    /// `x ↦ γ(d(x, A) / (d(x, A) + 1))` along the map's arc rule.
    DistanceArc,
}

/// Arc `γ(s) = piece(t_start + s (t_end - t_start))` leaving a closed set at
/// `γ(0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcRule {
    pub set: ClosedSet,
    pub piece: PieceId,
    pub t_start: f64,
    pub t_end: f64,
}

impl ArcRule {
    pub fn at(&self, s: f64) -> SpacePoint {
        SpacePoint::arc(self.piece, self.t_start + s * (self.t_end - self.t_start))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub name: String,
    pub space: String,
    /// Behavior on each arc piece, indexed like `Space::pieces`.
    pub pieces: Vec<Behavior>,
    /// Behavior on each isolated point, indexed like `Space::points`.
    pub points: Vec<Behavior>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc_rule: Option<ArcRule>,
    /// Points the construction declares fixed.
    #[serde(default)]
    pub fixed: Vec<(String, SpacePoint)>,
}

impl MapSpec {
    pub fn uniform(space: &Space, name: impl Into<String>, b: Behavior) -> Self {
        MapSpec {
            name: name.into(),
            space: space.name.clone(),
            pieces: vec![b.clone(); space.pieces.len()],
            points: vec![b; space.points.len()],
            arc_rule: None,
            fixed: Vec::new(),
        }
    }

    pub fn identity(space: &Space) -> Self {
        MapSpec::uniform(space, "identity", Behavior::Identity)
    }

    pub fn constant(space: &Space, p: SpacePoint) -> Self {
        let mut m = MapSpec::uniform(space, "constant", Behavior::Constant(space.normalize(p)));
        m.fixed.push(("target".into(), space.normalize(p)));
        m
    }

    fn behaviors(&self) -> impl Iterator<Item = &Behavior> {
        self.pieces.iter().chain(&self.points)
    }

    /// True when every piece can be inverted exactly or collapses to a point.
    pub fn invertible_pieces(&self) -> bool {
        self.behaviors().all(|b| !matches!(b, Behavior::DistanceArc))
    }

    pub fn evaluate(&self, space: &Space, p: SpacePoint) -> Result<SpacePoint> {
        let p = space.normalize(p);
        let out = match p {
            SpacePoint::Arc { piece, t } => self.eval_on_piece(space, piece, t.0, p)?,
            SpacePoint::Node(n) => {
                let &(piece, end) = space
                    .node_incidence(n)
                    .first()
                    .ok_or_else(|| Error::PointNotCovered(space.nodes[n].label.clone()))?;
                let pc = &space.pieces[piece];
                self.eval_on_piece(space, piece, if end == 0 { pc.lo } else { pc.hi }, p)?
            }
            SpacePoint::Isolated(id) => match self.points.get(id) {
                Some(Behavior::Identity) => p,
                Some(Behavior::Constant(q)) => *q,
                Some(Behavior::DistanceArc) => self.distance_arc(space, p)?,
                _ => return Err(Error::PointNotCovered(space.points[id].label.clone())),
            },
        };
        Ok(space.normalize(out))
    }

    fn eval_on_piece(&self, space: &Space, piece: PieceId, t: f64, p: SpacePoint) -> Result<SpacePoint> {
        let b = self.pieces.get(piece).ok_or_else(|| Error::PointNotCovered(space.pieces[piece].label.clone()))?;
        Ok(match b {
            Behavior::Identity => p,
            Behavior::Constant(q) => *q,
            Behavior::Conjugate(f) => SpacePoint::arc(piece, f.eval(t)),
            Behavior::Transport { target, flip } => SpacePoint::arc(*target, if *flip { -t } else { t }),
            Behavior::DistanceArc => self.distance_arc(space, p)?,
        })
    }

    fn distance_arc(&self, space: &Space, p: SpacePoint) -> Result<SpacePoint> {
        let rule = self.arc_rule.as_ref().ok_or_else(|| Error::InexactMap("distance arc without a rule".into()))?;
        let d = space.distance_to_set(p, &rule.set)?;
        Ok(rule.at(d / (d + 1.0)))
    }

    /// Bound on how far the image parameter moves per unit of source
    /// parameter on `piece`.
    pub fn piece_lipschitz(&self, space: &Space, piece: PieceId) -> f64 {
        match &self.pieces[piece] {
            Behavior::Identity | Behavior::Transport { .. } => 1.0,
            Behavior::Constant(_) => 0.0,
            Behavior::Conjugate(f) => f.lipschitz(),
            Behavior::DistanceArc => {
                // d(·, A) is 1-Lipschitz in the plane; s ↦ s/(s+1) is 1-Lipschitz
                let rule = self.arc_rule.as_ref().expect("arc rule");
                let pc = &space.pieces[piece];
                let samples = 64;
                let speed = (0..samples)
                    .map(|i| {
                        let t0 = pc.lo + pc.len() * i as f64 / samples as f64;
                        let t1 = pc.lo + pc.len() * (i + 1) as f64 / samples as f64;
                        pc.point(t0).dist(pc.point(t1)) / (t1 - t0)
                    })
                    .fold(0.0, f64::max);
                (rule.t_end - rule.t_start).abs() * speed * 1.5
            }
        }
    }

    /// Checks piece counts, transport ranges, agreement at every node, and the
    /// declared fixed points. Fixed points and node images must agree exactly.
    pub fn validate(&self, space: &Space) -> Result<()> {
        let incompatible = |why: String| Error::IncompatibleMap { map: self.name.clone(), space: why };
        if self.pieces.len() != space.pieces.len() || self.points.len() != space.points.len() {
            return Err(incompatible(format!("{} (behavior count)", space.name)));
        }
        for (pid, b) in self.pieces.iter().enumerate() {
            if let Behavior::Transport { target, flip } = b {
                let (s, t) = (&space.pieces[pid], space.pieces.get(*target).ok_or_else(|| incompatible("target".into()))?);
                let (lo, hi) = if *flip { (-s.hi, -s.lo) } else { (s.lo, s.hi) };
                if lo != t.lo || hi != t.hi {
                    return Err(incompatible(format!("{} → {} parameter ranges differ", s.label, t.label)));
                }
            }
            if matches!(b, Behavior::DistanceArc) && self.arc_rule.is_none() {
                return Err(incompatible("distance arc without a rule".into()));
            }
        }
        for n in 0..space.nodes.len() {
            self.check_node(space, n)?;
        }
        for (label, p) in &self.fixed {
            let img = self.evaluate(space, *p)?;
            if img != space.normalize(*p) {
                return Err(Error::BoundaryInconsistent {
                    node: label.clone(),
                    detail: format!("declared fixed but maps to {img:?}"),
                });
            }
        }
        Ok(())
    }

    fn check_node(&self, space: &Space, n: NodeId) -> Result<()> {
        let mut first: Option<(String, SpacePoint)> = None;
        for &(piece, end) in space.node_incidence(n) {
            let pc = &space.pieces[piece];
            let t = if end == 0 { pc.lo } else { pc.hi };
            let img = space.normalize(self.eval_on_piece(space, piece, t, SpacePoint::Node(n))?);
            match &first {
                None => first = Some((pc.label.clone(), img)),
                Some((label, q)) if *q != img => {
                    return Err(Error::BoundaryInconsistent {
                        node: space.nodes[n].label.clone(),
                        detail: format!("{label} gives {q:?}, {} gives {img:?}", pc.label),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Every point `p` with `f(p) = q` coming from pieces that can be
    /// inverted exactly (identity, conjugate, transport). Collapsing pieces
    /// are handled by the caller.
    pub fn invert_exact(&self, space: &Space, q: SpacePoint) -> Vec<SpacePoint> {
        let q = space.normalize(q);
        let mut out = Vec::new();
        if let SpacePoint::Isolated(id) = q {
            if matches!(self.points.get(id), Some(Behavior::Identity)) {
                out.push(q);
            }
            return out;
        }
        for (piece, t) in space.arc_representations(q) {
            for (src, b) in self.pieces.iter().enumerate() {
                match b {
                    Behavior::Identity if src == piece => out.push(space.normalize(SpacePoint::arc(src, t))),
                    Behavior::Conjugate(f) if src == piece => {
                        out.extend(f.preimages(t).into_iter().map(|x| space.normalize(SpacePoint::arc(src, x))))
                    }
                    Behavior::Transport { target, flip } if *target == piece => {
                        out.push(space.normalize(SpacePoint::arc(src, if *flip { -t } else { t })))
                    }
                    _ => {}
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Exact squared distance between rational points.
pub fn exact_dist2(p: &crate::geometry::PlanarPoint, q: &crate::geometry::PlanarPoint) -> Rat {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    dx * dx + dy * dy
}

pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Ratio::<i64>::approximate_float(x)
}

/// Which of the eight `Z = W ∪ X` constructions to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZCase {
    /// Sine map on `S_n`, collapse the rest of `W`, identity on `X`.
    An,
    /// Conjugate sine maps on every `S_i`, horseshoe on `S_inf`.
    SInf,
    /// Extended sine map on `X`, identity on `W`.
    Ac,
    /// Extended sine map on `X`, `W` collapsed to `b`.
    WAc,
    /// As `An` on `W`, `X` collapsed to `b_n`.
    AnX,
    /// Extended sine map on `X`, `A_n` projected onto `[a,b]`.
    AnAc,
    /// As `SInf` on `W`, `X` collapsed to the bottom of `S_inf`.
    SInfX,
    /// Each `S_i` onto the lap `P_i` of `X`, `S_inf` onto `[a,b]`.
    SInfAc,
}

impl ZCase {
    pub const ALL: [ZCase; 8] =
        [ZCase::An, ZCase::SInf, ZCase::Ac, ZCase::WAc, ZCase::AnX, ZCase::AnAc, ZCase::SInfX, ZCase::SInfAc];

    pub fn uses_index(self) -> bool {
        matches!(self, ZCase::An | ZCase::AnX | ZCase::AnAc)
    }

    /// Landmark name of the realized set.
    pub fn target(self, n: u32) -> String {
        match self {
            ZCase::An => format!("A_{n}"),
            ZCase::SInf => "S_inf".into(),
            ZCase::Ac => "[a,c]".into(),
            ZCase::WAc => "W+[a,c]".into(),
            ZCase::AnX => format!("A_{n}+X"),
            ZCase::AnAc => format!("A_{n}+[a,c]"),
            ZCase::SInfX => "S_inf+X".into(),
            ZCase::SInfAc => "S_inf+[a,c]".into(),
        }
    }

    /// Landmark name of the basepoint whose alpha-limit set is the target.
    pub fn basepoint(self, n: u32) -> String {
        match self {
            ZCase::An | ZCase::AnX => format!("b_{n}"),
            ZCase::SInf | ZCase::SInfX => "w".into(),
            ZCase::Ac | ZCase::WAc | ZCase::AnAc | ZCase::SInfAc => "b".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum NamedMap {
    Identity,
    Constant { landmark: String },
    /// Full 3-horseshoe on every arc piece.
    Horseshoe,
    /// Sine curve map: the horseshoe conjugated onto every lap and `[a,b]`.
    Sine,
    /// Sine curve map with `[b,c]` collapsed to `b`.
    ExtendedSine,
    /// Chain map with `α(b_n) = A_n`.
    Chain { n: u32 },
    /// Shift map of the countable planar space.
    Shift,
    Z {
        case: ZCase,
        #[serde(default)]
        n: u32,
    },
}

struct Labels<'a>(&'a Space);

impl Labels<'_> {
    fn piece(&self, label: &str) -> Result<PieceId> {
        self.0.piece_by_label(label).ok_or_else(|| Error::UnknownLandmark(label.to_string()))
    }

    fn point(&self, name: &str) -> Result<SpacePoint> {
        self.0.landmark_point(name)
    }

    fn curve_index(&self, pid: PieceId) -> Option<u32> {
        let label = &self.0.pieces[pid].label;
        label.strip_prefix("S_")?.split('.').next()?.parse().ok()
    }

    fn curves(&self) -> u32 {
        (0..self.0.pieces.len()).filter_map(|p| self.curve_index(p)).max().unwrap_or(0)
    }
}

fn compatible(space: &Space, map: &str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::IncompatibleMap { map: map.to_string(), space: space.name.clone() })
    }
}

pub fn build_named_map(space: &Space, name: &NamedMap) -> Result<MapSpec> {
    let l = Labels(space);
    let f = IntervalPL::horseshoe3();
    let conj = Behavior::Conjugate(f.clone());
    let mut m = match name {
        NamedMap::Identity => MapSpec::identity(space),
        NamedMap::Constant { landmark } => MapSpec::constant(space, l.point(landmark)?),
        NamedMap::Horseshoe => {
            compatible(space, "horseshoe", space.points.is_empty() && space.pieces.iter().all(|p| p.lo == -1.0 && p.hi == 1.0))?;
            let mut m = MapSpec::uniform(space, "horseshoe", conj.clone());
            for p in &space.pieces {
                m.fixed.push((format!("{}(-1)", p.label), space.normalize(SpacePoint::arc(l.piece(&p.label)?, -1.0))));
                m.fixed.push((format!("{}(1)", p.label), space.normalize(SpacePoint::arc(l.piece(&p.label)?, 1.0))));
            }
            m
        }
        NamedMap::Sine => {
            compatible(space, "sine", space.name == "sine")?;
            let mut m = MapSpec::uniform(space, "sine", conj.clone());
            m.fixed = fixed_names(space, &["a", "b", "end"])?;
            m
        }
        NamedMap::ExtendedSine => {
            compatible(space, "extended_sine", space.name == "extended_sine")?;
            extended_sine_on(space, MapSpec::uniform(space, "extended_sine", conj.clone()))?
        }
        NamedMap::Chain { n } => {
            compatible(space, "chain", space.name == "chain_of_sines")?;
            let mut m = MapSpec::uniform(space, "chain", Behavior::Identity);
            chain_like(space, &mut m, *n)?;
            m
        }
        NamedMap::Shift => {
            compatible(space, "shift", space.name == "shift_cloud")?;
            shift_map(space)?
        }
        NamedMap::Z { case, n } => {
            compatible(space, "Z", space.name == "Z")?;
            z_map(space, *case, *n)?
        }
    };
    if m.name.is_empty() || matches!(name, NamedMap::Chain { .. } | NamedMap::Z { .. }) {
        m.name = map_label(name);
    }
    m.validate(space)?;
    Ok(m)
}

pub fn map_label(name: &NamedMap) -> String {
    match name {
        NamedMap::Identity => "identity".into(),
        NamedMap::Constant { landmark } => format!("constant({landmark})"),
        NamedMap::Horseshoe => "horseshoe".into(),
        NamedMap::Sine => "sine".into(),
        NamedMap::ExtendedSine => "extended_sine".into(),
        NamedMap::Chain { n } => format!("chain(n={n})"),
        NamedMap::Shift => "shift".into(),
        NamedMap::Z { case, n } if case.uses_index() => format!("Z:{}", case.target(*n)),
        NamedMap::Z { case, .. } => format!("Z:{}", case.target(0)),
    }
}

fn fixed_names(space: &Space, names: &[&str]) -> Result<Vec<(String, SpacePoint)>> {
    names.iter().map(|&n| Ok((n.to_string(), space.landmark_point(n)?))).collect()
}

/// Sine map on the laps and `[a,b]` of `X`, `[b,c]` collapsed to `b`.
fn extended_sine_on(space: &Space, mut m: MapSpec) -> Result<MapSpec> {
    let l = Labels(space);
    let conj = Behavior::Conjugate(IntervalPL::horseshoe3());
    for (pid, p) in space.pieces.iter().enumerate() {
        if p.label.starts_with("P_") || p.label == "[a,b]" {
            m.pieces[pid] = conj.clone();
        }
    }
    m.pieces[l.piece("[b,c]")?] = Behavior::Constant(l.point("b")?);
    m.fixed.extend(fixed_names(space, &["a", "b", "end"])?);
    Ok(m)
}

/// On the chain part: sine map on `S_n`, `S_i` (i < n) to `b_{n-1}`, the
/// later curves and the limit to `b_n`.
fn chain_like(space: &Space, m: &mut MapSpec, n: u32) -> Result<()> {
    let l = Labels(space);
    let curves = l.curves();
    if n == 0 || n >= curves {
        return Err(Error::IndexOutOfTruncation { index: n, max: curves.saturating_sub(1) });
    }
    let bn = l.point(&format!("b_{n}"))?;
    let before = if n >= 2 { Some(l.point(&format!("b_{}", n - 1))?) } else { None };
    let conj = Behavior::Conjugate(IntervalPL::horseshoe3());
    for pid in 0..space.pieces.len() {
        m.pieces[pid] = match l.curve_index(pid) {
            Some(i) if i == n => conj.clone(),
            Some(i) if i < n => Behavior::Constant(before.expect("n >= 2")),
            Some(_) => Behavior::Constant(bn),
            None if space.pieces[pid].label == "S_inf" => Behavior::Constant(bn),
            None => continue,
        };
    }
    if let Some(id) = space.point_by_label("s_inf") {
        m.points[id] = Behavior::Constant(bn);
    }
    m.fixed.push((format!("b_{n}"), bn));
    m.fixed.push((format!("a_{n}"), l.point(&format!("a_{n}"))?));
    if let Some(b) = before {
        m.fixed.push((format!("b_{}", n - 1), b));
    }
    Ok(())
}

fn is_w_piece(space: &Space, pid: PieceId) -> bool {
    let label = &space.pieces[pid].label;
    label.starts_with("S_")
}

fn z_map(space: &Space, case: ZCase, n: u32) -> Result<MapSpec> {
    let l = Labels(space);
    let curves = l.curves();
    if case.uses_index() && (n == 0 || n >= curves) {
        return Err(Error::IndexOutOfTruncation { index: n, max: curves - 1 });
    }
    let conj = Behavior::Conjugate(IntervalPL::horseshoe3());
    let mut m = MapSpec::uniform(space, "", Behavior::Identity);
    let w_pieces: Vec<PieceId> = (0..space.pieces.len()).filter(|&p| is_w_piece(space, p)).collect();
    let x_pieces: Vec<PieceId> = (0..space.pieces.len()).filter(|&p| !is_w_piece(space, p)).collect();
    let all_w_conj = |m: &mut MapSpec| {
        for &p in &w_pieces {
            m.pieces[p] = conj.clone();
        }
    };
    match case {
        ZCase::An => chain_like(space, &mut m, n)?,
        ZCase::SInf => {
            all_w_conj(&mut m);
            m.fixed = fixed_names(space, &["w", "S_inf.top"])?;
        }
        ZCase::Ac => m = extended_sine_on(space, m)?,
        ZCase::WAc => {
            m = extended_sine_on(space, m)?;
            let b = l.point("b")?;
            for &p in &w_pieces {
                m.pieces[p] = Behavior::Constant(b);
            }
        }
        ZCase::AnX => {
            chain_like(space, &mut m, n)?;
            let bn = l.point(&format!("b_{n}"))?;
            for &p in &x_pieces {
                m.pieces[p] = Behavior::Constant(bn);
            }
        }
        ZCase::AnAc => {
            m = extended_sine_on(space, m)?;
            let ab = l.piece("[a,b]")?;
            let end = l.point("end")?;
            for &p in &w_pieces {
                let label = &space.pieces[p].label;
                m.pieces[p] = match l.curve_index(p) {
                    Some(i) if i == n => {
                        let base = label.split_once('.').expect("curve piece label").1;
                        Behavior::Transport { target: l.piece(base)?, flip: false }
                    }
                    Some(i) if i < n => Behavior::Constant(end),
                    Some(i) => Behavior::Transport { target: ab, flip: (i + n) % 2 == 1 },
                    None => Behavior::Transport { target: ab, flip: n % 2 == 0 },
                };
            }
        }
        ZCase::SInfX => {
            all_w_conj(&mut m);
            let w = l.point("w")?;
            for &p in &x_pieces {
                m.pieces[p] = Behavior::Constant(w);
            }
            m.fixed = fixed_names(space, &["w"])?;
        }
        ZCase::SInfAc => {
            m = extended_sine_on(space, m)?;
            let ab = l.piece("[a,b]")?;
            for &p in &w_pieces {
                m.pieces[p] = match l.curve_index(p) {
                    Some(i) => Behavior::Transport { target: l.piece(&format!("P_{i}"))?, flip: i % 2 == 0 },
                    None => Behavior::Transport { target: ab, flip: false },
                };
            }
        }
    }
    Ok(m)
}

/// Point table of the shift map; the last column of the first axis is fixed
/// because its image lies beyond the truncation.
fn shift_map(space: &Space) -> Result<MapSpec> {
    use crate::geometry::PlanarPoint;
    let mut m = MapSpec::uniform(space, "shift", Behavior::Identity);
    let by_coords: std::collections::HashMap<PlanarPoint, usize> =
        space.points.iter().enumerate().map(|(i, p)| (p.coords, i)).collect();
    let one = Rat::from_integer(1);
    let zero = Rat::from_integer(0);
    for (id, p) in space.points.iter().enumerate() {
        let (x, y) = (p.coords.x, p.coords.y);
        let target = if x == zero && y == zero {
            PlanarPoint::new(zero, zero)
        } else if y == zero && x <= one {
            // ⟨1/n, 0⟩ ↦ ⟨1/(n+1), 0⟩
            let n = x.recip();
            PlanarPoint::new((n + one).recip(), zero)
        } else if y == zero {
            PlanarPoint::new(x - one, zero)
        } else if y <= one && x == y {
            PlanarPoint::new(zero, zero)
        } else if y <= one {
            PlanarPoint::new((x.recip() + one).recip(), y)
        } else if x == Rat::from_integer(2) {
            PlanarPoint::new(one, y - one)
        } else {
            PlanarPoint::new(x - one, y)
        };
        m.points[id] = match by_coords.get(&target) {
            Some(&t) if t == id => Behavior::Identity,
            Some(&t) => Behavior::Constant(SpacePoint::Isolated(t)),
            None => Behavior::Identity,
        };
    }
    m.fixed.push(("(0,0)".into(), space.landmark_point("origin")?));
    Ok(m)
}
