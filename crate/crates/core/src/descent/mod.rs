//! Discrete gradient flow on a graph with an injective height function.
//!
//! Every node flows to *all* of its strictly lower neighbors (not only the
//! steepest one). Fixed points of the flow are the local minima; a node's
//! reachable-minima set decides whether it lies in a basin or on the
//! boundary between basins.

mod decompose;
mod minimax;

pub use decompose::{decompose, decompose_many, Basin, Decomposition, Level, Role, RoleKind};
pub use minimax::{minimax_path, MinimaxPath};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Graph, NodeId};
use crate::height::HeightFunction;

/// Lower-neighbor arcs of the gradient flow, optionally restricted to a
/// node subset (the levels of the decomposition).
#[derive(Debug, Clone)]
pub struct DescentDag {
    lower: Vec<Vec<NodeId>>,
    active: Vec<bool>,
    order: Vec<NodeId>,
    rank: Vec<usize>,
}

pub(crate) fn check_inputs(g: &Graph, h: &HeightFunction) -> Result<()> {
    if g.is_directed() {
        return Err(Error::DirectedGraph);
    }
    if g.n() != h.n() {
        return Err(Error::InvalidInput(format!(
            "height function covers {} nodes, graph has {}",
            h.n(),
            g.n()
        )));
    }
    Ok(())
}

/// Builds the descent DAG of `h` on the whole graph.
pub fn build_descent_dag(g: &Graph, h: &HeightFunction) -> Result<DescentDag> {
    DescentDag::new(g, h)
}

impl DescentDag {
    pub fn new(g: &Graph, h: &HeightFunction) -> Result<Self> {
        check_inputs(g, h)?;
        Ok(Self::build(g, h, &vec![true; g.n()]))
    }

    /// Flow restricted to the subgraph induced by `nodes`.
    pub fn on_subset(g: &Graph, h: &HeightFunction, nodes: &[NodeId]) -> Result<Self> {
        check_inputs(g, h)?;
        let mut active = vec![false; g.n()];
        for &x in nodes {
            active[x] = true;
        }
        Ok(Self::build(g, h, &active))
    }

    fn build(g: &Graph, h: &HeightFunction, active: &[bool]) -> Self {
        let rank = h.ranks().to_vec();
        let order: Vec<NodeId> = h.order().iter().copied().filter(|&x| active[x]).collect();
        let mut lower = vec![Vec::new(); g.n()];
        for &x in &order {
            lower[x] = g
                .neighbors(x)
                .iter()
                .map(|&(y, _)| y)
                .filter(|&y| active[y] && rank[y] < rank[x])
                .collect();
            lower[x].sort_by_key(|&y| rank[y]);
        }
        DescentDag { lower, active: active.to_vec(), order, rank }
    }

    /// Active nodes in increasing height.
    pub fn nodes(&self) -> &[NodeId] {
        &self.order
    }

    pub fn contains(&self, x: NodeId) -> bool {
        self.active[x]
    }

    pub fn rank(&self, x: NodeId) -> usize {
        self.rank[x]
    }

    /// `N^-(x)`, sorted by increasing height.
    pub fn lower_neighbors(&self, x: NodeId) -> &[NodeId] {
        &self.lower[x]
    }

    pub fn is_fixed_point(&self, x: NodeId) -> bool {
        self.active[x] && self.lower[x].is_empty()
    }

    /// All arcs `x -> y` with `y` a lower neighbor of `x`.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.order.iter().flat_map(move |&x| self.lower[x].iter().map(move |&y| (x, y)))
    }

    /// True iff a strictly descending path leads from `x` to `y` (`x == y` included).
    pub fn reachable(&self, x: NodeId, y: NodeId) -> bool {
        if !self.active[x] || !self.active[y] {
            return false;
        }
        if x == y {
            return true;
        }
        let floor = self.rank[y];
        if self.rank[x] < floor {
            return false;
        }
        let mut seen = vec![false; self.lower.len()];
        let mut stack = vec![x];
        seen[x] = true;
        while let Some(z) = stack.pop() {
            for &w in &self.lower[z] {
                if w == y {
                    return true;
                }
                if !seen[w] && self.rank[w] > floor {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Local minima (fixed points of the flow) in increasing height.
    pub fn local_minima(&self) -> Vec<NodeId> {
        self.order.iter().copied().filter(|&x| self.lower[x].is_empty()).collect()
    }

    /// Reachable-minima set of every active node, as bitsets over the
    /// positions of [`Self::local_minima`]. One pass in increasing height.
    pub fn reachable_minima(&self) -> (Vec<NodeId>, Vec<FixedBitSet>) {
        let minima = self.local_minima();
        let mut slot = vec![usize::MAX; self.lower.len()];
        for (i, &m) in minima.iter().enumerate() {
            slot[m] = i;
        }
        let mut sets = vec![FixedBitSet::new(); self.lower.len()];
        for &x in &self.order {
            let mut s = FixedBitSet::with_capacity(minima.len());
            if self.lower[x].is_empty() {
                s.insert(slot[x]);
            } else {
                for &y in &self.lower[x] {
                    s.union_with(&sets[y]);
                }
            }
            sets[x] = s;
        }
        (minima, sets)
    }

    /// Attraction basins of the local minima and the boundary (nodes that
    /// reach more than one minimum).
    pub fn basins_and_boundary(&self) -> (Vec<Basin>, Vec<NodeId>) {
        let (minima, sets) = self.reachable_minima();
        let mut basins: Vec<Basin> =
            minima.iter().map(|&m| Basin { critical: m, members: Vec::new() }).collect();
        let mut boundary = Vec::new();
        for &x in &self.order {
            let s = &sets[x];
            if s.count_ones(..) == 1 {
                basins[s.ones().next().unwrap()].members.push(x);
            } else {
                boundary.push(x);
            }
        }
        (basins, boundary)
    }

    /// Transitive closure of the flow as bitsets indexed by height position.
    pub fn closure(&self, exec: Exec) -> Closure {
        Closure::new(self, exec)
    }
}

/// Reflexive-transitive closure of the descent relation.
///
/// Row `i` belongs to the `i`-th active node in increasing height and bit `j`
/// is set iff that node reaches the `j`-th one, so iterating a row yields
/// the reachable set already sorted by height.
#[derive(Debug, Clone)]
pub struct Closure {
    order: Vec<NodeId>,
    pos: Vec<usize>,
    rows: Vec<FixedBitSet>,
}

impl Closure {
    fn new(dag: &DescentDag, exec: Exec) -> Self {
        let order = dag.order.clone();
        let m = order.len();
        let mut pos = vec![usize::MAX; dag.lower.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }

        // rows within one depth layer only depend on earlier layers
        let mut depth = vec![0usize; m];
        for i in 0..m {
            let x = order[i];
            depth[i] = dag.lower[x].iter().map(|&y| depth[pos[y]] + 1).max().unwrap_or(0);
        }
        let max_depth = depth.iter().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); if m == 0 { 0 } else { max_depth + 1 }];
        for i in 0..m {
            layers[depth[i]].push(i);
        }

        let mut rows = vec![FixedBitSet::new(); m];
        for layer in &layers {
            let built = exec.map(layer, |&i| {
                let mut row = FixedBitSet::with_capacity(m);
                row.insert(i);
                for &y in &dag.lower[order[i]] {
                    row.union_with(&rows[pos[y]]);
                }
                row
            });
            for (&i, row) in layer.iter().zip(built) {
                rows[i] = row;
            }
        }
        Closure { order, pos, rows }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Active nodes in increasing height.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Height position of `x` among the active nodes.
    pub fn position(&self, x: NodeId) -> Option<usize> {
        self.pos.get(x).copied().filter(|&p| p != usize::MAX)
    }

    pub fn reaches(&self, x: NodeId, y: NodeId) -> bool {
        match (self.position(x), self.position(y)) {
            (Some(i), Some(j)) => self.rows[i].contains(j),
            _ => false,
        }
    }

    /// Reachable positions of the node at position `i`, increasing, itself included.
    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    /// Number of strictly lower nodes reachable from position `i`.
    pub fn below_count(&self, i: usize) -> usize {
        self.rows[i].count_ones(..) - 1
    }
}
