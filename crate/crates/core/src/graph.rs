//! Graph storage, edge-list ingestion and edge thresholding.
//!
//! Nodes are dense ids `0..n` assigned in first-appearance order while
//! reading an edge list. Every user-facing output goes through labels.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

/// Undirected or directed weighted graph without self-loops or duplicate
/// edges. Undirected edges are stored once with `u < v`.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    directed: bool,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<(NodeId, f64)>>,
    in_adj: Vec<Vec<(NodeId, f64)>>,
}

impl Graph {
    /// Builds a graph from labels and an edge list, checking every invariant.
    pub fn new(labels: Vec<String>, edges: Vec<Edge>, directed: bool) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate node label {l:?}")));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidInput(format!("edge ({}, {}) out of range", e.u, e.v)));
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { line: 0, node: labels[e.u].clone() });
            }
            if !(e.weight >= 0.0) || !e.weight.is_finite() {
                return Err(Error::NegativeWeight {
                    line: 0,
                    u: labels[e.u].clone(),
                    v: labels[e.v].clone(),
                    weight: e.weight,
                });
            }
            let e = if directed || e.u < e.v { e } else { Edge { u: e.v, v: e.u, weight: e.weight } };
            if !seen.insert((e.u, e.v)) {
                return Err(Error::DuplicateEdge {
                    line: 0,
                    u: labels[e.u].clone(),
                    v: labels[e.v].clone(),
                });
            }
            stored.push(e);
        }

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for e in &stored {
            out_adj[e.u].push((e.v, e.weight));
            if directed {
                in_adj[e.v].push((e.u, e.weight));
            } else {
                out_adj[e.v].push((e.u, e.weight));
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_by_key(|&(v, _)| v);
        }
        if !directed {
            in_adj = out_adj.clone();
        }
        Ok(Graph { labels, index, directed, edges: stored, out_adj, in_adj })
    }

    /// Convenience constructor for unweighted undirected graphs on labelled nodes.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let text: String = pairs
            .iter()
            .map(|(a, b)| format!("{} {}\n", a.as_ref(), b.as_ref()))
            .collect();
        parse_edge_list(&text, None, false)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: NodeId) -> &str {
        &self.labels[x]
    }

    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Out-neighbors with weights, sorted by id. For undirected graphs these
    /// are all neighbors.
    pub fn neighbors(&self, x: NodeId) -> &[(NodeId, f64)] {
        &self.out_adj[x]
    }

    pub fn in_neighbors(&self, x: NodeId) -> &[(NodeId, f64)] {
        &self.in_adj[x]
    }

    pub fn degree(&self, x: NodeId) -> usize {
        self.out_adj[x].len()
    }

    /// Sum of outgoing weights.
    pub fn strength(&self, x: NodeId) -> f64 {
        self.out_adj[x].iter().map(|&(_, w)| w).sum()
    }

    pub fn is_isolated(&self, x: NodeId) -> bool {
        self.out_adj[x].is_empty() && self.in_adj[x].is_empty()
    }

    pub fn isolated_nodes(&self) -> Vec<NodeId> {
        (0..self.n()).filter(|&x| self.is_isolated(x)).collect()
    }

    /// Weakly connected components, each sorted by id, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut uf = UnionFind::<usize>::new(self.n());
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut comps: Vec<Vec<NodeId>> = Vec::new();
        for x in 0..self.n() {
            let r = uf.find(x);
            let slot = *by_root.entry(r).or_insert_with(|| {
                comps.push(Vec::new());
                comps.len() - 1
            });
            comps[slot].push(x);
        }
        comps
    }

    /// The subgraph induced by `nodes`, keeping their relative id order.
    pub fn induced(&self, nodes: &[NodeId]) -> Subgraph {
        let mut parent: Vec<NodeId> = nodes.to_vec();
        parent.sort_unstable();
        parent.dedup();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &x) in parent.iter().enumerate() {
            local[x] = i;
        }
        let labels = parent.iter().map(|&x| self.labels[x].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
            .map(|e| Edge { u: local[e.u], v: local[e.v], weight: e.weight })
            .collect();
        let graph = Graph::new(labels, edges, self.directed).expect("induced subgraph keeps invariants");
        Subgraph { graph, parent }
    }

    /// Drops isolated nodes.
    pub fn without_isolated(&self) -> Subgraph {
        let keep: Vec<NodeId> = (0..self.n()).filter(|&x| !self.is_isolated(x)).collect();
        self.induced(&keep)
    }

    /// The connected component containing `x`.
    pub fn component_of(&self, x: NodeId) -> Subgraph {
        let comp = self
            .components()
            .into_iter()
            .find(|c| c.binary_search(&x).is_ok())
            .unwrap_or_default();
        self.induced(&comp)
    }
}

/// An induced subgraph together with the parent id of every node.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    pub parent: Vec<NodeId>,
}

/// Reads a whitespace-separated edge list (`u v [w]`, `#` comments).
pub fn load_edge_list(path: &Path, directed: bool) -> Result<Graph> {
    load_edge_list_with_labels(path, None, directed)
}

/// Like [`load_edge_list`], with an optional `id<TAB>name` sidecar that
/// renames the ids used in the edge list.
pub fn load_edge_list_with_labels(path: &Path, labels: Option<&Path>, directed: bool) -> Result<Graph> {
    let read = |p: &Path| {
        fs::read_to_string(p).map_err(|source| Error::Io { path: p.display().to_string(), source })
    };
    let text = read(path)?;
    let sidecar = labels.map(read).transpose()?;
    parse_edge_list(&text, sidecar.as_deref(), directed)
}

/// Parses an `id<TAB>name` label map. Lines starting with `#` and blank
/// lines are skipped.
pub fn parse_label_map(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    let mut names = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, name) = line.split_once('\t').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: "expected ID<TAB>NAME".into(),
        })?;
        if id.is_empty() || name.is_empty() {
            return Err(Error::Parse { line: i + 1, msg: "empty id or name".into() });
        }
        if !ids.insert(id.to_string()) {
            return Err(Error::Parse { line: i + 1, msg: format!("duplicate id {id:?}") });
        }
        if !names.insert(name.to_string()) {
            return Err(Error::Parse { line: i + 1, msg: format!("duplicate name {name:?}") });
        }
        out.push((id.to_string(), name.to_string()));
    }
    Ok(out)
}

pub fn parse_edge_list(text: &str, label_map: Option<&str>, directed: bool) -> Result<Graph> {
    let mut tokens: Vec<String> = Vec::new();
    let mut id_of: HashMap<String, NodeId> = HashMap::new();
    let mut intern = |tok: &str, tokens: &mut Vec<String>| -> NodeId {
        *id_of.entry(tok.to_string()).or_insert_with(|| {
            tokens.push(tok.to_string());
            tokens.len() - 1
        })
    };

    let mut edges = Vec::new();
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `u v [w]`, found {} fields", fields.len()),
            });
        }
        let weight = match fields.get(2) {
            Some(w) => w
                .parse::<f64>()
                .ok()
                .filter(|w| w.is_finite())
                .ok_or_else(|| Error::Parse { line: lineno, msg: format!("bad weight {w:?}") })?,
            None => 1.0,
        };
        let (a, b) = (fields[0], fields[1]);
        if a == b {
            return Err(Error::SelfLoop { line: lineno, node: a.to_string() });
        }
        if weight < 0.0 {
            return Err(Error::NegativeWeight { line: lineno, u: a.into(), v: b.into(), weight });
        }
        let u = intern(a, &mut tokens);
        let v = intern(b, &mut tokens);
        let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge { line: lineno, u: a.into(), v: b.into() });
        }
        edges.push(Edge { u, v, weight });
    }

    let mut labels = tokens.clone();
    if let Some(map) = label_map {
        let entries = parse_label_map(map)?;
        let names: HashMap<&str, &str> = entries.iter().map(|(i, n)| (i.as_str(), n.as_str())).collect();
        for l in labels.iter_mut() {
            if let Some(name) = names.get(l.as_str()) {
                *l = name.to_string();
            }
        }
        // ids present only in the sidecar become isolated nodes
        for (id, name) in &entries {
            if !id_of.contains_key(id) {
                labels.push(name.clone());
            }
        }
    }
    Graph::new(labels, edges, directed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    /// Keep edges with weight strictly above the threshold.
    StrictGreater,
    /// Turn a directed graph into an undirected one with weight
    /// `(w_ij + w_ji) / 2`, then keep edges strictly above the threshold.
    SymmetrizeAverage,
}

/// Drops light edges. Nodes are kept; those left without edges report
/// [`Graph::is_isolated`].
pub fn threshold_edges(g: &Graph, tau: f64, mode: ThresholdMode) -> Result<Graph> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidInput(format!("threshold must be nonnegative, got {tau}")));
    }
    match mode {
        ThresholdMode::StrictGreater => {
            let edges = g.edges.iter().filter(|e| e.weight > tau).copied().collect();
            Graph::new(g.labels.clone(), edges, g.directed)
        }
        ThresholdMode::SymmetrizeAverage => {
            if !g.directed {
                return Err(Error::InvalidInput("symmetrize-average needs a directed graph".into()));
            }
            let mut sums: HashMap<(NodeId, NodeId), f64> = HashMap::new();
            for e in &g.edges {
                *sums.entry((e.u.min(e.v), e.u.max(e.v))).or_default() += e.weight;
            }
            let mut edges: Vec<Edge> = sums
                .into_iter()
                .map(|((u, v), s)| Edge { u, v, weight: s / 2.0 })
                .filter(|e| e.weight > tau)
                .collect();
            edges.sort_by_key(|e| (e.u, e.v));
            Graph::new(g.labels.clone(), edges, false)
        }
    }
}
