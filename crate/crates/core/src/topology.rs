//! Connectivity of cell complexes: components, clopen sets, joining arcs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::space::{CellId, Space};

/// Cells with two adjacency relations: along arcs, and from truncated
/// sequences onto their limits.
pub trait CellComplex {
    fn cell_count(&self) -> usize;
    fn arc_adjacent(&self, c: CellId) -> Vec<CellId>;
    fn accumulation_adjacent(&self, c: CellId) -> Vec<CellId>;
}

impl CellComplex for Space {
    fn cell_count(&self) -> usize {
        Space::cell_count(self)
    }

    fn arc_adjacent(&self, c: CellId) -> Vec<CellId> {
        self.arc_neighbors(c).to_vec()
    }

    fn accumulation_adjacent(&self, c: CellId) -> Vec<CellId> {
        self.accumulation_neighbors(c).to_vec()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Component label of every cell; with `accumulation` the limit relation
/// also connects.
pub fn components<C: CellComplex + ?Sized>(space: &C, accumulation: bool) -> Vec<usize> {
    let n = space.cell_count();
    let mut uf = UnionFind((0..n).collect());
    for c in 0..n {
        for d in space.arc_adjacent(c) {
            uf.union(c, d);
        }
        if accumulation {
            for d in space.accumulation_adjacent(c) {
                uf.union(c, d);
            }
        }
    }
    (0..n).map(|c| uf.find(c)).collect()
}

pub fn component_count<C: CellComplex + ?Sized>(space: &C) -> usize {
    components(space, true).into_iter().collect::<BTreeSet<_>>().len()
}

/// A cell set is clopen iff it is a union of components.
pub fn is_clopen<C: CellComplex + ?Sized>(space: &C, set: &BTreeSet<CellId>) -> bool {
    let comp = components(space, true);
    let inside: BTreeSet<usize> = set.iter().map(|&c| comp[c]).collect();
    (0..space.cell_count()).all(|c| set.contains(&c) || !inside.contains(&comp[c]))
}

fn check_proper<C: CellComplex + ?Sized>(space: &C, set: &BTreeSet<CellId>) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.len() >= space.cell_count() {
        return Err(Error::FullSet);
    }
    Ok(())
}

/// Shortest arc path from a cell of `set` to a cell outside it, using arc
/// adjacency only; the lexicographically smallest such path. Every such path
/// has exactly two cells.
pub fn arc_join<C: CellComplex + ?Sized>(space: &C, set: &BTreeSet<CellId>) -> Result<Option<Vec<CellId>>> {
    check_proper(space, set)?;
    for &a in set {
        let mut nbrs = space.arc_adjacent(a);
        nbrs.sort_unstable();
        if let Some(&b) = nbrs.iter().find(|b| !set.contains(b)) {
            return Ok(Some(vec![a, b]));
        }
    }
    Ok(None)
}

/// Arc-component check by explicit search: some arc component meets both the
/// set and its complement.
pub fn arc_joined_brute_force<C: CellComplex + ?Sized>(space: &C, set: &BTreeSet<CellId>) -> bool {
    let n = space.cell_count();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let (mut inside, mut outside) = (false, false);
        while let Some(c) = stack.pop() {
            if set.contains(&c) {
                inside = true;
            } else {
                outside = true;
            }
            for d in space.arc_adjacent(c) {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        if inside && outside {
            return true;
        }
    }
    false
}
