//! Node energies and the injective height functions built from them.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::markov::MarkovChain;

/// Raw (possibly tied) node energies.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseEnergy {
    pub values: Vec<f64>,
}

impl BaseEnergy {
    pub fn new(values: Vec<f64>) -> Self {
        BaseEnergy { values }
    }
}

/// How nodes with equal base energy are ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TieBreak {
    /// Lower node id sits lower.
    IdAscending,
    IdDescending,
    /// Explicit rank key per node; lower key sits lower among ties.
    Explicit(Vec<usize>),
}

impl TieBreak {
    /// Builds an explicit policy from a list of labels. Listed nodes come
    /// first in list order; unlisted nodes follow in id order.
    pub fn from_labels<S: AsRef<str>>(g: &Graph, labels: &[S]) -> Result<Self> {
        let mut keys = vec![usize::MAX; g.n()];
        for (pos, l) in labels.iter().enumerate() {
            let x = g.node(l.as_ref())?;
            if keys[x] != usize::MAX {
                return Err(Error::InvalidInput(format!("label {:?} listed twice in permutation", l.as_ref())));
            }
            keys[x] = pos;
        }
        let listed = labels.len();
        for (x, k) in keys.iter_mut().enumerate() {
            if *k == usize::MAX {
                *k = listed + x;
            }
        }
        Ok(TieBreak::Explicit(keys))
    }

    /// Parses a permutation file: one label per line, `#` comment lines.
    pub fn parse_permutation(g: &Graph, text: &str) -> Result<Self> {
        let labels: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Self::from_labels(g, &labels)
    }

    fn key(&self, x: NodeId, n: usize) -> usize {
        match self {
            TieBreak::IdAscending => x,
            TieBreak::IdDescending => n - 1 - x,
            TieBreak::Explicit(keys) => keys[x],
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreak::IdAscending => write!(f, "id-ascending"),
            TieBreak::IdDescending => write!(f, "id-descending"),
            TieBreak::Explicit(_) => write!(f, "explicit"),
        }
    }
}

/// An injective height function.
///
/// `values` are pairwise distinct whenever the perturbation is representable
/// in `f64`; the strict order is carried by `rank` regardless, and every
/// algorithm compares ranks, never floats.
#[derive(Debug, Clone)]
pub struct HeightFunction {
    base: Vec<f64>,
    values: Vec<f64>,
    rank: Vec<usize>,
    order: Vec<NodeId>,
    tie_break: TieBreak,
}

impl HeightFunction {
    /// Height function from values that are already pairwise distinct
    /// (ties, if any, fall back to id order).
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        make_injective(&BaseEnergy::new(values), &TieBreak::IdAscending)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, x: NodeId) -> f64 {
        self.values[x]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base_values(&self) -> &[f64] {
        &self.base
    }

    /// Position of `x` in increasing height order.
    pub fn rank(&self, x: NodeId) -> usize {
        self.rank[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Nodes sorted by increasing height.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn lower(&self, x: NodeId, y: NodeId) -> bool {
        self.rank[x] < self.rank[y]
    }

    pub fn tie_break(&self) -> &TieBreak {
        &self.tie_break
    }

    /// Restriction to the nodes of a subgraph (`parent[i]` is the id in
    /// this function's domain of local node `i`). Relative order is kept.
    pub fn restrict(&self, parent: &[NodeId]) -> HeightFunction {
        let base = parent.iter().map(|&x| self.base[x]).collect();
        let values = parent.iter().map(|&x| self.values[x]).collect();
        let mut order: Vec<NodeId> = (0..parent.len()).collect();
        order.sort_by_key(|&i| self.rank[parent[i]]);
        let mut rank = vec![0; parent.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let tie_break = match &self.tie_break {
            TieBreak::Explicit(keys) => TieBreak::Explicit(parent.iter().map(|&x| keys[x]).collect()),
            other => other.clone(),
        };
        HeightFunction { base, values, rank, order, tie_break }
    }
}

/// Breaks ties in `base` by `policy` with rank-based jitter.
///
/// Within a group of `s` tied nodes the `r`-th one (in policy order) is
/// raised by `r * gap / (2 s)`, where `gap` is the smallest nonzero
/// difference between distinct base values, so every strict comparison in
/// `base` survives.
pub fn make_injective(base: &BaseEnergy, policy: &TieBreak) -> Result<HeightFunction> {
    let n = base.values.len();
    if let Some(x) = base.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite energy at node {x}")));
    }
    if let TieBreak::Explicit(keys) = policy {
        if keys.len() != n {
            return Err(Error::InvalidInput(format!(
                "tie-break covers {} nodes, energy has {n}",
                keys.len()
            )));
        }
    }
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by(|&a, &b| {
        base.values[a]
            .total_cmp(&base.values[b])
            .then(policy.key(a, n).cmp(&policy.key(b, n)))
    });

    let sorted: Vec<f64> = order.iter().map(|&x| base.values[x]).collect();
    let gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let mut max_group = 1;
    let mut run = 1;
    for w in sorted.windows(2) {
        run = if w[1] == w[0] { run + 1 } else { 1 };
        max_group = max_group.max(run);
    }
    let gap = if gap.is_finite() { gap } else { sorted.first().map_or(1.0, |v| v.abs().max(1.0)) };
    let delta = gap / (2.0 * max_group as f64);

    let mut values = base.values.clone();
    let mut rank = vec![0; n];
    let mut within = 0usize;
    for (r, &x) in order.iter().enumerate() {
        within = if r > 0 && sorted[r] == sorted[r - 1] { within + 1 } else { 0 };
        values[x] = base.values[x] + within as f64 * delta;
        rank[x] = r;
    }
    Ok(HeightFunction { base: base.values.clone(), values, rank, order, tie_break: policy.clone() })
}

fn require_undirected_non_isolated(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return Err(Error::DirectedGraph);
    }
    if let Some(x) = g.isolated_nodes().first() {
        return Err(Error::IsolatedNode(g.label(*x).to_string()));
    }
    Ok(())
}

/// `-ln(degree)` per node.
pub fn energy_from_degree(g: &Graph) -> Result<BaseEnergy> {
    require_undirected_non_isolated(g)?;
    Ok(BaseEnergy::new((0..g.n()).map(|x| -(g.degree(x) as f64).ln()).collect()))
}

/// `-ln(strength)` per node, strength being the sum of incident weights.
pub fn energy_from_weighted_degree(g: &Graph) -> Result<BaseEnergy> {
    require_undirected_non_isolated(g)?;
    let mut values = Vec::with_capacity(g.n());
    for x in 0..g.n() {
        let s = g.strength(x);
        if s <= 0.0 {
            return Err(Error::InvalidInput(format!("node {} has zero strength", g.label(x))));
        }
        values.push(-s.ln());
    }
    Ok(BaseEnergy::new(values))
}

/// `-ln(pi)` for the stationary distribution of an irreducible chain.
pub fn energy_from_stationary(mc: &MarkovChain) -> Result<BaseEnergy> {
    let pi = mc.stationary()?;
    Ok(BaseEnergy::new(pi.iter().map(|p| -p.ln()).collect()))
}

/// Parses `LABEL VALUE` lines (value is the last whitespace-separated
/// field). Every node must receive exactly one value.
pub fn parse_energy_file(g: &Graph, text: &str) -> Result<BaseEnergy> {
    let mut values = vec![f64::NAN; g.n()];
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (label, value) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| Error::Parse { line: i + 1, msg: "expected `LABEL VALUE`".into() })?;
        let v: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("bad energy value {value:?}") })?;
        let x = g.node(label.trim())?;
        if !seen.insert(x) {
            return Err(Error::Parse { line: i + 1, msg: format!("duplicate energy for {label:?}") });
        }
        values[x] = v;
    }
    if let Some(x) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::InvalidInput(format!("no energy given for node {}", g.label(x))));
    }
    Ok(BaseEnergy::new(values))
}
