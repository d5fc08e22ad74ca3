//! Brute-force oracles and random inputs shared by the integration tests.
//!
//! Oracles compare raw float heights and walk the graph directly; none of
//! them calls into the library beyond `Graph` accessors.

#![allow(dead_code)]

use std::collections::BTreeSet;

use netland::graph::{Edge, Graph};
use netland::{HeightFunction, NodeId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Connected undirected graph: a random spanning tree plus each remaining
/// pair with probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (a, b) = (perm[i], perm[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.insert((a, b));
            }
        }
    }
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let edges = edges.into_iter().map(|(u, v)| Edge { u, v, weight: 1.0 }).collect();
    Graph::new(labels, edges, false).unwrap()
}

/// Injective heights: a random permutation of `0..n`, as floats.
pub fn random_heights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|i| i as f64).collect();
    v.shuffle(rng);
    v
}

pub fn height(values: Vec<f64>) -> HeightFunction {
    HeightFunction::from_values(values).unwrap()
}

/// Neighbors of `x` inside `set` that sit strictly lower.
fn lower(g: &Graph, h: &[f64], set: &[bool], x: NodeId) -> Vec<NodeId> {
    g.neighbors(x).iter().map(|&(y, _)| y).filter(|&y| set[y] && h[y] < h[x]).collect()
}

/// Nodes reachable from `x` by strictly descending steps inside `set`
/// (including `x`), by explicit stack DFS.
pub fn descend(g: &Graph, h: &[f64], set: &[bool], x: NodeId) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::from([x]);
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for z in lower(g, h, set, y) {
            if seen.insert(z) {
                stack.push(z);
            }
        }
    }
    seen
}

/// One level of the brute-force classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleLevel {
    pub minima: BTreeSet<NodeId>,
    /// `(minimum, basin)` pairs.
    pub basins: Vec<(NodeId, BTreeSet<NodeId>)>,
    pub boundary: BTreeSet<NodeId>,
}

/// Reachable-minima classification, level by level until nothing is left.
pub fn oracle_levels(g: &Graph, h: &[f64]) -> Vec<OracleLevel> {
    let n = g.n();
    let mut current: BTreeSet<NodeId> = (0..n).collect();
    let mut out = Vec::new();
    while !current.is_empty() {
        let mut set = vec![false; n];
        current.iter().for_each(|&x| set[x] = true);
        let minima: BTreeSet<NodeId> = current.iter().copied().filter(|&x| lower(g, h, &set, x).is_empty()).collect();
        let mut basins: Vec<(NodeId, BTreeSet<NodeId>)> = minima.iter().map(|&m| (m, BTreeSet::new())).collect();
        let mut boundary = BTreeSet::new();
        for &x in &current {
            let reached: Vec<NodeId> = descend(g, h, &set, x).into_iter().filter(|y| minima.contains(y)).collect();
            if reached.len() == 1 {
                basins.iter_mut().find(|(m, _)| *m == reached[0]).unwrap().1.insert(x);
            } else {
                boundary.insert(x);
            }
        }
        out.push(OracleLevel { minima, basins, boundary: boundary.clone() });
        current = boundary;
    }
    out
}

/// Smallest possible maximum height over all simple paths from `a` to `b`,
/// by exhaustive DFS.
pub fn brute_minimax(g: &Graph, h: &[f64], a: NodeId, b: NodeId) -> Option<f64> {
    fn go(g: &Graph, h: &[f64], x: NodeId, b: NodeId, on: &mut Vec<bool>, worst: f64, best: &mut Option<f64>) {
        if x == b {
            *best = Some(best.map_or(worst, |v: f64| v.min(worst)));
            return;
        }
        for &(y, _) in g.neighbors(x) {
            if !on[y] {
                on[y] = true;
                go(g, h, y, b, on, worst.max(h[y]), best);
                on[y] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    on[a] = true;
    let mut best = None;
    go(g, h, a, b, &mut on, h[a], &mut best);
    best
}

/// Betti numbers and simplex counts of the flooding complex after every
/// filtration step, from GF(2) ranks of the boundary matrices.
pub struct OracleStep {
    pub betti: [usize; 3],
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
}

/// Rank over GF(2) of a set of sparse rows, by elimination on bit vectors.
fn gf2_rank(rows: Vec<Vec<usize>>, width: usize) -> usize {
    let words = width.div_ceil(64).max(1);
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in rows {
        let mut v = vec![0u64; words];
        for c in r {
            v[c / 64] ^= 1 << (c % 64);
        }
        for (pivot, b) in &basis {
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                v.iter_mut().zip(b).for_each(|(a, b)| *a ^= b);
            }
        }
        if let Some(p) = (0..width).find(|&c| v[c / 64] >> (c % 64) & 1 == 1) {
            // keep the basis reduced at its pivot columns
            for (_, b) in basis.iter_mut() {
                if b[p / 64] >> (p % 64) & 1 == 1 {
                    b.iter_mut().zip(&v).for_each(|(a, c)| *a ^= c);
                }
            }
            basis.push((p, v));
        }
    }
    basis.len()
}

/// Flooding complex on the nodes of `set`, rebuilt from scratch at every
/// step of the filtration. Cubic in the complex size; keep graphs small.
pub fn oracle_filtration(g: &Graph, h: &[f64], set: &[bool]) -> Vec<OracleStep> {
    let mut order: Vec<NodeId> = (0..g.n()).filter(|&x| set[x]).collect();
    order.sort_by(|&a, &b| h[a].total_cmp(&h[b]));
    // reach[x] = strictly lower nodes x descends to
    let reach: Vec<BTreeSet<NodeId>> = (0..g.n())
        .map(|x| {
            if set[x] {
                let mut r = descend(g, h, set, x);
                r.remove(&x);
                r
            } else {
                BTreeSet::new()
            }
        })
        .collect();
    let mut out = Vec::new();
    for t in 1..=order.len() {
        let alive: Vec<NodeId> = order[..t].to_vec();
        let vid = |x: NodeId| alive.iter().position(|&y| y == x).unwrap();
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for &y in &alive {
            for &x in &reach[y] {
                edges.push((x, y));
            }
        }
        let index: std::collections::HashMap<(NodeId, NodeId), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let eid = |a: NodeId, b: NodeId| index[&(a, b)];
        let mut tris: Vec<(NodeId, NodeId, NodeId)> = Vec::new();
        for &(y, z) in &edges {
            for &x in &reach[y] {
                tris.push((x, y, z));
            }
        }
        let d1: Vec<Vec<usize>> = edges.iter().map(|&(a, b)| vec![vid(a), vid(b)]).collect();
        let d2: Vec<Vec<usize>> = tris.iter().map(|&(a, b, c)| vec![eid(a, b), eid(a, c), eid(b, c)]).collect();
        let r1 = gf2_rank(d1, alive.len());
        let r2 = gf2_rank(d2, edges.len());
        out.push(OracleStep {
            betti: [alive.len() - r1, edges.len() - r1 - r2, tris.len() - r2],
            vertices: alive.len(),
            edges: edges.len(),
            triangles: tris.len(),
        });
    }
    out
}

pub fn labels_of(g: &Graph, xs: impl IntoIterator<Item = NodeId>) -> Vec<String> {
    let mut v: Vec<String> = xs.into_iter().map(|x| g.label(x).to_string()).collect();
    v.sort();
    v
}

/// Identity heights `h(i) = i` for graphs labelled by integers.
pub fn identity_heights(g: &Graph) -> HeightFunction {
    height(g.labels().iter().map(|l| l.parse().unwrap()).collect())
}
