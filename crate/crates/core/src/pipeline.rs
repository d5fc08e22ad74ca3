//! From a loaded graph to the analysed graph and its height function.
//!
//! Energies are computed on the loaded graph (after symmetrization, before
//! thresholding), so that a node's energy reflects all of its ties even
//! when only heavy edges are kept for the landscape. The steps are:
//! symmetrize, energy, threshold, drop isolated nodes, optionally keep one
//! component, break ties.

use crate::error::{Error, Result};
use crate::graph::{threshold_edges, Graph, NodeId, ThresholdMode};
use crate::height::{
    energy_from_degree, energy_from_stationary, energy_from_weighted_degree, make_injective, parse_energy_file,
    BaseEnergy, HeightFunction, TieBreak,
};
use crate::markov::markov_from_graph;

#[derive(Debug, Clone, PartialEq)]
pub enum EnergyKind {
    NegLogDegree,
    NegLogStrength,
    NegLogStationary,
    /// Contents of a `LABEL VALUE` file covering every loaded node.
    Values(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TieBreakSpec {
    IdAscending,
    IdDescending,
    /// Contents of a permutation file, one label per line.
    Permutation(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrepareOptions {
    /// Keep only edges heavier than this.
    pub min_weight: Option<f64>,
    /// Average the two directions of a directed graph into one undirected edge.
    pub symmetrize: bool,
    pub energy: EnergyKind,
    pub tie_break: TieBreakSpec,
    /// Keep only the component containing this label.
    pub component: Option<String>,
}

impl Default for PrepareOptions {
    fn default() -> Self {
        PrepareOptions {
            min_weight: None,
            symmetrize: false,
            energy: EnergyKind::NegLogDegree,
            tie_break: TieBreakSpec::IdAscending,
            component: None,
        }
    }
}

/// The analysed graph. `parent[i]` is the loaded-graph id of node `i`.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub graph: Graph,
    pub parent: Vec<NodeId>,
    pub height: HeightFunction,
}

fn symmetrized(loaded: &Graph, symmetrize: bool) -> Result<Graph> {
    if symmetrize {
        threshold_edges(loaded, 0.0, ThresholdMode::SymmetrizeAverage)
    } else {
        Ok(loaded.clone())
    }
}

/// Applies symmetrization, threshold, isolated-node removal and the
/// component filter, without computing energies.
pub fn restrict_graph(loaded: &Graph, opts: &PrepareOptions) -> Result<(Graph, Vec<NodeId>)> {
    let base = symmetrized(loaded, opts.symmetrize)?;
    restrict(&base, opts)
}

fn restrict(base: &Graph, opts: &PrepareOptions) -> Result<(Graph, Vec<NodeId>)> {
    let thresholded = match opts.min_weight {
        Some(t) => threshold_edges(base, t, ThresholdMode::StrictGreater)?,
        None => base.clone(),
    };
    let sub = thresholded.without_isolated();
    match &opts.component {
        None => Ok((sub.graph, sub.parent)),
        Some(label) => {
            let x = sub.graph.node(label).map_err(|_| {
                Error::InvalidInput(format!("component node {label:?} is missing or isolated after thresholding"))
            })?;
            let comp = sub.graph.component_of(x);
            let parent = comp.parent.iter().map(|&i| sub.parent[i]).collect();
            Ok((comp.graph, parent))
        }
    }
}

/// Energy of every loaded node (NaN where undefined, i.e. isolated nodes).
fn loaded_energy(base: &Graph, kind: &EnergyKind) -> Result<Vec<f64>> {
    if let EnergyKind::Values(text) = kind {
        return Ok(parse_energy_file(base, text)?.values);
    }
    let nz = base.without_isolated();
    let local = match kind {
        EnergyKind::NegLogDegree => energy_from_degree(&nz.graph)?,
        EnergyKind::NegLogStrength => energy_from_weighted_degree(&nz.graph)?,
        EnergyKind::NegLogStationary => energy_from_stationary(&markov_from_graph(&nz.graph)?)?,
        EnergyKind::Values(_) => unreachable!(),
    };
    let mut full = vec![f64::NAN; base.n()];
    for (i, &p) in nz.parent.iter().enumerate() {
        full[p] = local.values[i];
    }
    Ok(full)
}

pub fn prepare(loaded: &Graph, opts: &PrepareOptions) -> Result<Prepared> {
    let base = symmetrized(loaded, opts.symmetrize)?;
    let energy = loaded_energy(&base, &opts.energy)?;
    let (graph, parent) = restrict(&base, opts)?;
    let values: Vec<f64> = parent.iter().map(|&p| energy[p]).collect();
    let tie_break = match &opts.tie_break {
        TieBreakSpec::IdAscending => TieBreak::IdAscending,
        TieBreakSpec::IdDescending => TieBreak::IdDescending,
        TieBreakSpec::Permutation(text) => match TieBreak::parse_permutation(loaded, text)? {
            TieBreak::Explicit(keys) => TieBreak::Explicit(parent.iter().map(|&p| keys[p]).collect()),
            other => other,
        },
    };
    let height = make_injective(&BaseEnergy::new(values), &tie_break)?;
    Ok(Prepared { graph, parent, height })
}
