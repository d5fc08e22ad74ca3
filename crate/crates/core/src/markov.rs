//! Discrete-time Markov chains induced by weighted graphs.

use std::sync::OnceLock;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Row-sum tolerance for transition matrices.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// L1 tolerance of the stationary power iteration.
pub const STATIONARY_TOL: f64 = 1e-12;
const STATIONARY_MAX_ITER: usize = 5_000_000;

/// Sparse row-stochastic chain. The stationary distribution is computed on
/// first use (or set in closed form for undirected graphs).
#[derive(Debug, Clone)]
pub struct MarkovChain {
    labels: Vec<String>,
    rows: Vec<Vec<(NodeId, f64)>>,
    pi: OnceLock<Vec<f64>>,
}

impl MarkovChain {
    /// Builds a chain from nonnegative weights (self-loops allowed); each row
    /// is normalized by its total outgoing weight.
    pub fn from_weights(labels: Vec<String>, weights: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let n = labels.len();
        let mut rows: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
        for &(x, y, w) in weights {
            if x >= n || y >= n || !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidInput(format!("bad transition weight ({x}, {y}, {w})")));
            }
            if w > 0.0 {
                rows[x].push((y, w));
            }
        }
        for (x, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(y, _)| y);
            let mut merged: Vec<(NodeId, f64)> = Vec::with_capacity(row.len());
            for &(y, w) in row.iter() {
                match merged.last_mut() {
                    Some((py, pw)) if *py == y => *pw += w,
                    _ => merged.push((y, w)),
                }
            }
            let total: f64 = merged.iter().map(|&(_, w)| w).sum();
            if total <= 0.0 {
                return Err(Error::DanglingNode(labels[x].clone()));
            }
            for (_, w) in merged.iter_mut() {
                *w /= total;
            }
            *row = merged;
        }
        Ok(MarkovChain { labels, rows, pi: OnceLock::new() })
    }

    /// Builds a chain from explicit transition rows, which must each sum to one.
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<(NodeId, f64)>>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidInput("row count does not match label count".into()));
        }
        for (x, row) in rows.iter().enumerate() {
            let s: f64 = row.iter().map(|&(_, p)| p).sum();
            if (s - 1.0).abs() > ROW_SUM_TOL || row.iter().any(|&(y, p)| y >= rows.len() || p < 0.0) {
                return Err(Error::InvalidInput(format!("row {} is not stochastic (sum {s})", labels[x])));
            }
        }
        Ok(MarkovChain { labels, rows, pi: OnceLock::new() })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Nonzero transitions out of `x`, sorted by target.
    pub fn row(&self, x: NodeId) -> &[(NodeId, f64)] {
        &self.rows[x]
    }

    pub fn prob(&self, x: NodeId, y: NodeId) -> f64 {
        self.rows[x]
            .binary_search_by_key(&y, |&(z, _)| z)
            .map(|i| self.rows[x][i].1)
            .unwrap_or(0.0)
    }

    /// Closed communicating classes. A chain is irreducible iff it has
    /// exactly one class and that class covers every state.
    pub fn communicating_classes(&self) -> (Vec<Vec<NodeId>>, Vec<Vec<NodeId>>) {
        let mut dg = DiGraph::<(), ()>::with_capacity(self.n(), 0);
        let nodes: Vec<_> = (0..self.n()).map(|_| dg.add_node(())).collect();
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, _) in row {
                dg.add_edge(nodes[x], nodes[y], ());
            }
        }
        let sccs = tarjan_scc(&dg);
        let mut comp = vec![0; self.n()];
        for (c, members) in sccs.iter().enumerate() {
            for m in members {
                comp[m.index()] = c;
            }
        }
        let mut all = Vec::new();
        let mut recurrent = Vec::new();
        for (c, members) in sccs.iter().enumerate() {
            let mut ids: Vec<NodeId> = members.iter().map(|m| m.index()).collect();
            ids.sort_unstable();
            let closed = ids.iter().all(|&x| self.rows[x].iter().all(|&(y, _)| comp[y] == c));
            if closed {
                recurrent.push(ids.clone());
            }
            all.push(ids);
        }
        recurrent.sort();
        all.sort();
        (all, recurrent)
    }

    pub fn is_irreducible(&self) -> bool {
        self.n() > 0 && self.communicating_classes().0.len() == 1
    }

    fn reducible_error(&self) -> Error {
        let (_, recurrent) = self.communicating_classes();
        Error::Reducible(
            recurrent
                .into_iter()
                .map(|c| c.into_iter().map(|x| self.labels[x].clone()).collect())
                .collect(),
        )
    }

    /// Stationary distribution of an irreducible chain.
    pub fn stationary(&self) -> Result<&[f64]> {
        if let Some(pi) = self.pi.get() {
            return Ok(pi);
        }
        if !self.is_irreducible() {
            return Err(self.reducible_error());
        }
        let pi = self.stationary_power_iteration(STATIONARY_TOL, STATIONARY_MAX_ITER)?;
        Ok(self.pi.get_or_init(|| pi))
    }

    /// Power iteration on the lazy chain `(I + P) / 2`, which shares the
    /// stationary distribution of `P` and converges for periodic chains too.
    /// Stops when successive iterates differ by at most `tol` in L1.
    pub fn stationary_power_iteration(&self, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let n = self.n();
        let mut pi = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        let mut diff = f64::INFINITY;
        for _ in 0..max_iter {
            next.iter_mut().zip(&pi).for_each(|(a, &p)| *a = 0.5 * p);
            for (x, row) in self.rows.iter().enumerate() {
                let half = 0.5 * pi[x];
                for &(y, p) in row {
                    next[y] += half * p;
                }
            }
            let s: f64 = next.iter().sum();
            diff = 0.0;
            for (a, b) in pi.iter_mut().zip(&next) {
                let v = b / s;
                diff += (v - *a).abs();
                *a = v;
            }
            if diff <= tol {
                return Ok(pi);
            }
        }
        Err(Error::NoConvergence { what: "stationary power iteration", iterations: max_iter, residual: diff })
    }

    /// Largest detailed-balance violation `|pi(x) p(x,y) - pi(y) p(y,x)|`.
    pub fn detailed_balance_defect(&self) -> Result<f64> {
        let pi = self.stationary()?;
        let mut worst: f64 = 0.0;
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, p) in row {
                worst = worst.max((pi[x] * p - pi[y] * self.prob(y, x)).abs());
            }
        }
        Ok(worst)
    }

    /// The time-reversed chain `p~(x,y) = pi(y) p(y,x) / pi(x)`.
    pub fn time_reversal(&self) -> Result<MarkovChain> {
        let pi = self.stationary()?.to_vec();
        let mut rows: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); self.n()];
        for (y, row) in self.rows.iter().enumerate() {
            for &(x, p) in row {
                rows[x].push((y, pi[y] * p / pi[x]));
            }
        }
        for row in rows.iter_mut() {
            row.sort_by_key(|&(y, _)| y);
            let s: f64 = row.iter().map(|&(_, p)| p).sum();
            row.iter_mut().for_each(|(_, p)| *p /= s);
        }
        let rev = MarkovChain { labels: self.labels.clone(), rows, pi: OnceLock::new() };
        let _ = rev.pi.set(pi);
        Ok(rev)
    }
}

/// Random walk `p(x,y) = w(x,y) / sum_z w(x,z)` on a graph.
///
/// Undirected graphs must be connected and get `pi` proportional to node
/// strength in closed form; directed graphs must be irreducible.
pub fn markov_from_graph(g: &Graph) -> Result<MarkovChain> {
    for x in 0..g.n() {
        if g.strength(x) <= 0.0 {
            return Err(Error::DanglingNode(g.label(x).to_string()));
        }
    }
    let weights: Vec<(NodeId, NodeId, f64)> = (0..g.n())
        .flat_map(|x| g.neighbors(x).iter().map(move |&(y, w)| (x, y, w)))
        .collect();
    let mc = MarkovChain::from_weights(g.labels().to_vec(), &weights)?;
    if !mc.is_irreducible() {
        return Err(mc.reducible_error());
    }
    if !g.is_directed() {
        let strengths: Vec<f64> = (0..g.n()).map(|x| g.strength(x)).collect();
        let total: f64 = strengths.iter().sum();
        let _ = mc.pi.set(strengths.into_iter().map(|s| s / total).collect());
    }
    Ok(mc)
}
