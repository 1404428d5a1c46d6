//! Outer-approximation transition graphs on cells.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{Behavior, MapSpec};
use crate::space::{CellId, CellKind, NodeId, PieceId, Space, SpacePoint};

pub const DEFAULT_SAMPLES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellGraph {
    pub space: String,
    pub map: String,
    pub rho: f64,
    pub samples: usize,
    succ: Vec<Vec<CellId>>,
    pred: Vec<Vec<CellId>>,
    component: Vec<usize>,
    components: Vec<Vec<CellId>>,
    cyclic: Vec<bool>,
}

/// Smallest padding for which sampled images cover the true image of every
/// cell: the largest `L · len / (2k)` over arc cells with Lipschitz bound `L`.
pub fn admissible_padding(space: &Space, map: &MapSpec, samples: usize) -> f64 {
    let lips: Vec<f64> = (0..space.pieces.len()).map(|p| map.piece_lipschitz(space, p)).collect();
    space
        .cells()
        .iter()
        .filter_map(|c| match c.kind {
            CellKind::Arc { piece, t0, t1, .. } => Some(lips[piece] * (t1 - t0) / (2.0 * samples as f64)),
            CellKind::Point(_) => None,
        })
        .fold(0.0, f64::max)
}

/// Build the transition graph with `samples` interior samples per arc cell.
/// `rho = None` uses the admissible padding.
pub fn transition_graph(space: &Space, map: &MapSpec, samples: usize, rho: Option<f64>) -> Result<CellGraph> {
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let bound = admissible_padding(space, map, samples);
    let rho = rho.unwrap_or(bound);
    if rho < bound {
        return Err(Error::PaddingBelowBound { rho, bound });
    }
    let succ: Vec<Vec<CellId>> = (0..space.cell_count())
        .into_par_iter()
        .map(|c| successors(space, map, c, samples, rho))
        .collect::<Result<_>>()?;
    Ok(CellGraph::from_successors(space.name.clone(), map.name.clone(), rho, samples, succ))
}

fn behavior_of<'a>(map: &'a MapSpec, space: &Space, c: CellId) -> &'a Behavior {
    match space.cell(c).kind {
        CellKind::Arc { piece, .. } => &map.pieces[piece],
        CellKind::Point(id) => &map.points[id],
    }
}

fn successors(space: &Space, map: &MapSpec, c: CellId, samples: usize, rho: f64) -> Result<Vec<CellId>> {
    if matches!(behavior_of(map, space, c), Behavior::Identity) {
        return Ok(vec![c]);
    }
    let mut out = BTreeSet::new();
    let pts: Vec<SpacePoint> = match space.cell(c).kind {
        CellKind::Arc { piece, t0, t1, .. } => {
            if let Behavior::Constant(_) = map.pieces[piece] {
                vec![SpacePoint::arc(piece, 0.5 * (t0 + t1))]
            } else {
                (0..samples)
                    .map(|j| SpacePoint::arc(piece, t0 + (j as f64 + 0.5) * (t1 - t0) / samples as f64))
                    .collect()
            }
        }
        CellKind::Point(id) => vec![SpacePoint::Isolated(id)],
    };
    for p in pts {
        let q = map.evaluate(space, p)?;
        fatten(space, q, rho, &mut out);
    }
    Ok(out.into_iter().collect())
}

/// Cells meeting the open parameter ball of radius `rho` around `q`, walking
/// through nodes, plus the canonical cell of `q`.
pub fn fatten(space: &Space, q: SpacePoint, rho: f64, out: &mut BTreeSet<CellId>) {
    let q = space.normalize(q);
    out.insert(space.cell_of(q));
    if rho <= 0.0 {
        return;
    }
    let mut pending: Vec<(PieceId, f64, f64)> = Vec::new();
    match q {
        SpacePoint::Isolated(_) => return,
        SpacePoint::Arc { piece, t } => pending.push((piece, t.0, rho)),
        SpacePoint::Node(n) => push_node(space, n, rho, &mut pending),
    }
    let mut seen_nodes: Vec<(NodeId, f64)> = Vec::new();
    while let Some((piece, t, r)) = pending.pop() {
        let pc = &space.pieces[piece];
        let (lo, hi) = (t - r, t + r);
        for j in 0..pc.divisions {
            let (t0, t1) = pc.cell_bounds(j);
            if t0 < hi && t1 > lo {
                out.insert(space.piece_cells(piece)[j]);
            }
        }
        for (end, node) in [(pc.lo, pc.nodes[0]), (pc.hi, pc.nodes[1])] {
            let rest = r - (t - end).abs();
            if rest > 0.0 && !seen_nodes.iter().any(|&(n, s)| n == node && s >= rest) {
                seen_nodes.push((node, rest));
                push_node(space, node, rest, &mut pending);
            }
        }
    }
}

fn push_node(space: &Space, n: NodeId, r: f64, pending: &mut Vec<(PieceId, f64, f64)>) {
    for &(piece, end) in space.node_incidence(n) {
        let pc = &space.pieces[piece];
        let t = if end == 0 { pc.lo } else { pc.hi };
        pending.push((piece, t, r));
    }
}

impl CellGraph {
    pub fn from_successors(space: String, map: String, rho: f64, samples: usize, succ: Vec<Vec<CellId>>) -> Self {
        let n = succ.len();
        let mut pred = vec![Vec::new(); n];
        for (c, s) in succ.iter().enumerate() {
            for &d in s {
                pred[d].push(c);
            }
        }
        let (component, components) = tarjan(&succ);
        let cyclic = components
            .iter()
            .map(|comp| comp.len() >= 2 || succ[comp[0]].contains(&comp[0]))
            .collect();
        CellGraph { space, map, rho, samples, succ, pred, component, components, cyclic }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, c: CellId) -> &[CellId] {
        &self.succ[c]
    }

    pub fn predecessors(&self, c: CellId) -> &[CellId] {
        &self.pred[c]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn component_of(&self, c: CellId) -> usize {
        self.component[c]
    }

    pub fn components(&self) -> &[Vec<CellId>] {
        &self.components
    }

    pub fn is_cyclic_component(&self, comp: usize) -> bool {
        self.cyclic[comp]
    }

    pub fn on_cycle(&self, c: CellId) -> bool {
        self.cyclic[self.component[c]]
    }

    /// Condensation edges between distinct components.
    pub fn condensation(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (c, s) in self.succ.iter().enumerate() {
            for &d in s {
                let (a, b) = (self.component[c], self.component[d]);
                if a != b {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    /// Cells from which some cell of `targets` is reachable (including them).
    pub fn backward_reach(&self, targets: impl IntoIterator<Item = CellId>) -> BTreeSet<CellId> {
        reach(targets, |c| &self.pred[c])
    }

    pub fn forward_reach(&self, sources: impl IntoIterator<Item = CellId>) -> BTreeSet<CellId> {
        reach(sources, |c| &self.succ[c])
    }

    /// Image of a cell set under one step.
    pub fn image(&self, cells: &BTreeSet<CellId>) -> BTreeSet<CellId> {
        cells.iter().flat_map(|&c| self.succ[c].iter().copied()).collect()
    }

    /// Subgraph on `keep`, dropping edges that leave it. Cell ids are
    /// renumbered in increasing order; the returned vector maps new to old.
    pub fn restrict(&self, keep: &BTreeSet<CellId>) -> (CellGraph, Vec<CellId>) {
        let old: Vec<CellId> = keep.iter().copied().collect();
        let index = |c: CellId| old.binary_search(&c).ok();
        let succ = old.iter().map(|&c| self.succ[c].iter().filter_map(|&d| index(d)).collect()).collect();
        (CellGraph::from_successors(self.space.clone(), self.map.clone(), self.rho, self.samples, succ), old)
    }

    /// Edge list as `source,target` lines with a header.
    pub fn to_csv(&self, label: impl Fn(CellId) -> String) -> String {
        let mut s = String::from("source,target\n");
        for (c, succ) in self.succ.iter().enumerate() {
            for &d in succ {
                let _ = writeln!(s, "{},{}", label(c), label(d));
            }
        }
        s
    }
}

fn reach<'a>(start: impl IntoIterator<Item = CellId>, next: impl Fn(CellId) -> &'a [CellId]) -> BTreeSet<CellId> {
    let mut seen: BTreeSet<CellId> = BTreeSet::new();
    let mut queue: VecDeque<CellId> = VecDeque::new();
    for c in start {
        if seen.insert(c) {
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        for &d in next(c) {
            if seen.insert(d) {
                queue.push_back(d);
            }
        }
    }
    seen
}

/// Iterative Tarjan; components come out in reverse topological order.
pub fn tarjan(succ: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&(v, i)) = call.last() {
            if i == 0 {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if i < succ[v].len() {
                let w = succ[v][i];
                call.last_mut().expect("frame").1 += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component[w] = components.len();
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    (component, components)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_small_cases() {
        let succ = vec![vec![1], vec![2], vec![0], vec![2, 4], vec![]];
        let (comp, comps) = tarjan(&succ);
        assert_eq!(comps.len(), 3);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[1], comp[2]);
        assert_ne!(comp[3], comp[4]);
        // reverse topological: the sink {4} before {3}
        assert!(comp[4] < comp[3]);
        assert!(comp[0] < comp[3]);
    }

    #[test]
    fn cyclic_flag_needs_cycle() {
        let g = CellGraph::from_successors("s".into(), "m".into(), 0.0, 2, vec![vec![1], vec![1], vec![0]]);
        assert!(!g.on_cycle(0) && g.on_cycle(1) && !g.on_cycle(2));
    }
}
