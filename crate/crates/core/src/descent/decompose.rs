use serde::Serialize;

use crate::error::Result;
use crate::exec::Exec;
use crate::graph::{Graph, NodeId};
use crate::height::HeightFunction;

use super::check_inputs;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Basin {
    pub critical: NodeId,
    /// Members in increasing height; the critical node comes first.
    pub members: Vec<NodeId>,
}

/// One level of the node decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Level {
    pub index: usize,
    /// `V_k`: the whole node set at level 0, the previous boundary above it.
    pub nodes: Vec<NodeId>,
    /// Nondegenerate index-`k` critical nodes (minima of the level subgraph).
    pub critical: Vec<NodeId>,
    pub basins: Vec<Basin>,
    /// Nodes reaching more than one critical node of this level.
    pub boundary: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoleKind {
    /// Minimum of the level subgraph, with a nonempty basin.
    Nondegenerate,
    /// Index-1 saddle found by persistence that is not a boundary minimum.
    Degenerate,
    /// Higher-index persistence event outside the level's critical set.
    DegenerateCandidate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Role {
    pub index: usize,
    pub kind: RoleKind,
}

/// The hierarchy `V = B_0 + sum A_0`, `B_{k-1} = B_k + sum A_k` together
/// with the critical role(s) of every node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub levels: Vec<Level>,
    roles: Vec<Vec<Role>>,
}

impl Decomposition {
    /// Highest index with a nondegenerate critical node.
    pub fn max_index(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    /// `C̄_k`, empty past the last level.
    pub fn critical(&self, k: usize) -> &[NodeId] {
        self.levels.get(k).map_or(&[], |l| l.critical.as_slice())
    }

    pub fn level(&self, k: usize) -> Option<&Level> {
        self.levels.get(k)
    }

    pub fn n(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self, x: NodeId) -> &[Role] {
        &self.roles[x]
    }

    /// Records an extra role for `x`; duplicates are ignored.
    pub fn add_role(&mut self, x: NodeId, role: Role) {
        let r = &mut self.roles[x];
        if !r.contains(&role) {
            r.push(role);
            r.sort();
        }
    }

    /// The level and critical node of the basin that absorbs `x`.
    pub fn basin_of(&self, x: NodeId) -> Option<(usize, NodeId)> {
        self.levels.iter().find_map(|l| {
            l.basins
                .iter()
                .find(|b| b.members.contains(&x))
                .map(|b| (l.index, b.critical))
        })
    }

    /// Verifies the partition at every level against the graph it came from.
    pub fn check(&self, g: &Graph, h: &HeightFunction) -> Result<(), String> {
        let n = self.roles.len();
        let mut expected: Vec<NodeId> = h.order().to_vec();
        for (k, level) in self.levels.iter().enumerate() {
            if level.index != k {
                return Err(format!("level {k} labelled {}", level.index));
            }
            if level.nodes != expected {
                return Err(format!("level {k} node set is not the previous boundary"));
            }
            let mut count = vec![0u8; n];
            for b in &level.basins {
                if b.members.first() != Some(&b.critical) {
                    return Err(format!("level {k}: critical node {} not first in its basin", b.critical));
                }
                for &x in &b.members {
                    count[x] += 1;
                }
            }
            for &x in &level.boundary {
                count[x] += 1;
            }
            let mut in_level = vec![false; n];
            for &x in &level.nodes {
                in_level[x] = true;
                if count[x] != 1 {
                    return Err(format!("level {k}: node {x} covered {} times", count[x]));
                }
            }
            if (0..n).any(|x| !in_level[x] && count[x] > 0) {
                return Err(format!("level {k}: cover leaves the level node set"));
            }
            let crit: Vec<NodeId> = level.basins.iter().map(|b| b.critical).collect();
            if crit != level.critical {
                return Err(format!("level {k}: basin keys differ from critical set"));
            }
            for &c in &level.critical {
                if g.neighbors(c).iter().any(|&(y, _)| in_level[y] && h.lower(y, c)) {
                    return Err(format!("level {k}: critical node {c} has a lower neighbor"));
                }
            }
            expected = level.boundary.clone();
        }
        if !expected.is_empty() {
            return Err("last level has a nonempty boundary".into());
        }
        Ok(())
    }
}

/// Colors one level: minima get their own color, a node whose lower
/// neighbors all carry one color takes it, anything else (including a
/// blank lower neighbor) stays blank and forms the boundary.
fn color_level(g: &Graph, h: &HeightFunction, nodes: &[NodeId], index: usize, in_level: &mut [bool]) -> Level {
    for &x in nodes {
        in_level[x] = true;
    }
    let mut color: Vec<Option<usize>> = vec![None; in_level.len()];
    let mut basins: Vec<Basin> = Vec::new();
    let mut boundary = Vec::new();
    for &x in nodes {
        let mut lower = g.neighbors(x).iter().map(|&(y, _)| y).filter(|&y| in_level[y] && h.lower(y, x));
        let assigned = match lower.next() {
            None => {
                basins.push(Basin { critical: x, members: Vec::new() });
                Some(basins.len() - 1)
            }
            Some(first) => {
                let c = color[first];
                if c.is_some() && lower.all(|y| color[y] == c) {
                    c
                } else {
                    None
                }
            }
        };
        color[x] = assigned;
        match assigned {
            Some(c) => basins[c].members.push(x),
            None => boundary.push(x),
        }
    }
    for &x in nodes {
        in_level[x] = false;
    }
    let critical = basins.iter().map(|b| b.critical).collect();
    Level { index, nodes: nodes.to_vec(), critical, basins, boundary }
}

/// Runs the level-by-level basin coloring until the boundary is empty.
///
/// Cost is `O(K n d)` for `K` levels and maximum degree `d`. The partition
/// property is checked before returning.
pub fn decompose(g: &Graph, h: &HeightFunction) -> Result<Decomposition> {
    check_inputs(g, h)?;
    let n = g.n();
    let mut levels = Vec::new();
    let mut roles = vec![Vec::new(); n];
    let mut in_level = vec![false; n];
    let mut current: Vec<NodeId> = h.order().to_vec();
    // every level removes at least its lowest node, so at most n levels
    while !current.is_empty() && levels.len() <= n {
        let level = color_level(g, h, &current, levels.len(), &mut in_level);
        for &c in &level.critical {
            roles[c].push(Role { index: level.index, kind: RoleKind::Nondegenerate });
        }
        current = level.boundary.clone();
        levels.push(level);
    }
    let d = Decomposition { levels, roles };
    if let Err(msg) = d.check(g, h) {
        panic!("node decomposition violates the partition property: {msg}");
    }
    Ok(d)
}

/// Decomposes the same graph under many height functions.
pub fn decompose_many(g: &Graph, hs: &[HeightFunction], exec: Exec) -> Vec<Result<Decomposition>> {
    exec.map(hs, |h| decompose(g, h))
}
