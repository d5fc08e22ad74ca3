use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::height::HeightFunction;

use super::check_inputs;

/// A path minimizing the highest node it visits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimaxPath {
    pub path: Vec<NodeId>,
    /// The highest node on the path. Its height is the same for every optimal path.
    pub bottleneck: NodeId,
}

/// Minimum-energy path between `a` and `b`, where a path's energy is the
/// largest height on it.
///
/// Nodes are switched on in increasing height until `a` and `b` share a
/// component; the last node switched on is the bottleneck. The returned
/// path is a fewest-hops path inside that sublevel set, ties broken by
/// node id.
pub fn minimax_path(g: &Graph, h: &HeightFunction, a: NodeId, b: NodeId) -> Result<MinimaxPath> {
    check_inputs(g, h)?;
    let n = g.n();
    if a >= n || b >= n {
        return Err(Error::InvalidInput("path endpoint out of range".into()));
    }
    let disconnected = || Error::Disconnected { a: g.label(a).to_string(), b: g.label(b).to_string() };

    let mut uf = UnionFind::<usize>::new(n);
    let mut on = vec![false; n];
    let mut bottleneck = None;
    for &x in h.order() {
        on[x] = true;
        for &(y, _) in g.neighbors(x) {
            if on[y] {
                uf.union(x, y);
            }
        }
        if on[a] && on[b] && uf.equiv(a, b) {
            bottleneck = Some(x);
            break;
        }
    }
    let bottleneck = bottleneck.ok_or_else(disconnected)?;

    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::from([a]);
    prev[a] = a;
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &(y, _) in g.neighbors(x) {
            if on[y] && prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![b];
    let mut x = b;
    while x != a {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    Ok(MinimaxPath { path, bottleneck })
}
