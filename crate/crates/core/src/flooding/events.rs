use serde::Serialize;

use crate::descent::{Decomposition, Role, RoleKind};
use crate::error::Result;
use crate::exec::Exec;
use crate::graph::{Graph, NodeId};
use crate::height::HeightFunction;

use super::complex::{build_flooding_complex_on, DEFAULT_SIMPLEX_CAP};
use super::persistence::{compute_persistence, Barcode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cause {
    Beta0Birth,
    Beta0Merge,
    Beta1Birth,
}

/// A step at which the Betti numbers change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalEvent {
    pub node: NodeId,
    pub step: usize,
    pub index: usize,
    pub causes: Vec<Cause>,
    /// Whether `node` is a nondegenerate critical node of this index.
    pub nondegenerate: bool,
}

/// Reads critical events off a barcode computed on level `L`.
///
/// A new component marks an index-`L` node. A merge or a new loop marks an
/// index-`L+1` node.
///
/// `nondegenerate` is left `false`; see [`critical_analysis`].
pub fn classify_critical(b: &Barcode) -> Vec<CriticalEvent> {
    let b0 = b.betti_curve(0);
    let b1 = b.betti_curve(1);
    let nodes = step_nodes(b);
    let mut out = Vec::new();
    for t in 0..b.steps {
        let (p0, p1) = if t == 0 { (0, 0) } else { (b0[t - 1], b1[t - 1]) };
        if b0[t] > p0 {
            out.push(event(nodes[t], t + 1, b.level, vec![Cause::Beta0Birth]));
        }
        let mut causes = Vec::new();
        if b0[t] < p0 {
            causes.push(Cause::Beta0Merge);
        }
        if b1[t] > p1 {
            causes.push(Cause::Beta1Birth);
        }
        if !causes.is_empty() {
            out.push(event(nodes[t], t + 1, b.level + 1, causes));
        }
    }
    out
}

fn event(node: NodeId, step: usize, index: usize, causes: Vec<Cause>) -> CriticalEvent {
    CriticalEvent { node, step, index, causes, nondegenerate: false }
}

// A barcode only names the nodes of its endpoints; every step with a Betti
// change is an endpoint, so that is enough.
fn step_nodes(b: &Barcode) -> Vec<NodeId> {
    let mut nodes = vec![usize::MAX; b.steps];
    for i in &b.intervals {
        nodes[i.birth - 1] = i.birth_node;
        if let (Some(d), Some(k)) = (i.death, i.killer) {
            nodes[d - 1] = k;
        }
    }
    nodes
}

/// Persistence of the flooding complex of every decomposition level.
#[derive(Debug, Clone, Serialize)]
pub struct LevelPersistence {
    pub level: usize,
    pub barcode: Barcode,
    pub events: Vec<CriticalEvent>,
}

/// Barcode of the flooding complex of the level-`k` subgraph `G_k`.
pub fn level_barcode(
    g: &Graph,
    h: &HeightFunction,
    d: &Decomposition,
    k: usize,
    cap: usize,
    exec: Exec,
) -> Result<Option<Barcode>> {
    let Some(level) = d.level(k) else { return Ok(None) };
    let c = build_flooding_complex_on(g, h, &level.nodes, k, cap, exec)?;
    Ok(Some(compute_persistence(&c)))
}

fn events_of(b: &Barcode, d: &Decomposition) -> Vec<CriticalEvent> {
    let mut ev = classify_critical(b);
    for e in &mut ev {
        e.nondegenerate = d.critical(e.index).contains(&e.node);
    }
    ev
}

/// Index-`k` candidates (`k >= 1`): merge and loop events of the flooding
/// complex of `G_{k-1}`, each flagged by membership in `C̄_k`.
pub fn classify_higher(g: &Graph, h: &HeightFunction, d: &Decomposition, k: usize) -> Result<Vec<CriticalEvent>> {
    assert!(k >= 1, "index-0 critical nodes are the minima");
    let Some(b) = level_barcode(g, h, d, k - 1, DEFAULT_SIMPLEX_CAP, Exec::default())? else {
        return Ok(Vec::new());
    };
    Ok(events_of(&b, d).into_iter().filter(|e| e.index == k).collect())
}

/// Runs persistence on every level and records the persistence-only
/// critical nodes in `d`: index 1 as [`RoleKind::Degenerate`], higher
/// indices as [`RoleKind::DegenerateCandidate`].
pub fn critical_analysis(
    g: &Graph,
    h: &HeightFunction,
    d: &mut Decomposition,
    cap: usize,
    exec: Exec,
) -> Result<Vec<LevelPersistence>> {
    let mut out = Vec::with_capacity(d.levels.len());
    for k in 0..d.levels.len() {
        let b = level_barcode(g, h, d, k, cap, exec)?.expect("level exists");
        let events = events_of(&b, d);
        out.push(LevelPersistence { level: k, barcode: b, events });
    }
    for lp in &out {
        for e in lp.events.iter().filter(|e| e.index >= 1 && !e.nondegenerate) {
            let kind = if e.index == 1 { RoleKind::Degenerate } else { RoleKind::DegenerateCandidate };
            d.add_role(e.node, Role { index: e.index, kind });
        }
    }
    Ok(out)
}

/// A finite zero-dimensional bar shorter than the denoising threshold: the
/// minimum that is merged into a deeper basin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedMinimum {
    pub minimum: NodeId,
    pub saddle: NodeId,
    pub persistence: f64,
}

/// Zero-dimensional bars with persistence (in height units) below `threshold`.
pub fn denoise(b: &Barcode, threshold: f64) -> Vec<MergedMinimum> {
    b.dim(0)
        .filter(|i| i.persistence() < threshold)
        .map(|i| MergedMinimum {
            minimum: i.birth_node,
            saddle: i.killer.expect("finite bar"),
            persistence: i.persistence(),
        })
        .collect()
}
