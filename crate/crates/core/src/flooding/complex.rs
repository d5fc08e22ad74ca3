use serde::Serialize;

use crate::descent::DescentDag;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Graph, NodeId};
use crate::height::HeightFunction;

/// Default bound on the number of simplices a complex may hold.
pub const DEFAULT_SIMPLEX_CAP: usize = 50_000_000;

const NONE: u32 = u32::MAX;

/// A simplex of dimension 0, 1 or 2. Vertices are filtration positions
/// (0-based; the vertex at position `p` enters at step `p + 1`), sorted
/// increasingly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    verts: [u32; 3],
    dim: u8,
}

impl Simplex {
    fn vertex(p: u32) -> Self {
        Simplex { verts: [p, NONE, NONE], dim: 0 }
    }
    fn edge(a: u32, b: u32) -> Self {
        Simplex { verts: [a, b, NONE], dim: 1 }
    }
    fn triangle(a: u32, b: u32, c: u32) -> Self {
        Simplex { verts: [a, b, c], dim: 2 }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts[..=self.dim as usize]
    }

    /// Filtration step (1-based) at which the simplex enters: the step of its top vertex.
    pub fn step(&self) -> usize {
        self.verts[self.dim as usize] as usize + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexSize {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
}

impl ComplexSize {
    pub fn total(&self) -> usize {
        self.vertices + self.edges + self.triangles
    }
}

/// The 2-skeleton of the flooding complex, filtered by height.
///
/// `{x, y}` with `h(x) < h(y)` is an edge iff `y` descends to `x`, and
/// `{x, y, z}` is a triangle iff `z` descends to `y` and `y` to `x`. Step
/// `t` adds the `t`-th lowest node together with every simplex it tops.
/// Simplices are totally ordered by (step, dimension, vertex positions).
#[derive(Debug, Clone)]
pub struct FiltrationComplex {
    level: usize,
    step_nodes: Vec<NodeId>,
    heights: Vec<f64>,
    simplices: Vec<Simplex>,
    /// Strictly lower reachable positions of every position, increasing.
    down: Vec<Vec<u32>>,
    vertex_index: Vec<usize>,
    edge_start: Vec<usize>,
}

/// Builds the flooding complex of the whole graph.
pub fn build_flooding_complex(g: &Graph, h: &HeightFunction) -> Result<FiltrationComplex> {
    let all: Vec<NodeId> = (0..g.n()).collect();
    build_flooding_complex_on(g, h, &all, 0, DEFAULT_SIMPLEX_CAP, Exec::default())
}

/// Builds the flooding complex of the subgraph induced by `nodes`, tagged
/// with the decomposition `level` it belongs to. Fails with
/// [`Error::SimplexCap`] before allocating when the complex would hold more
/// than `cap` simplices.
pub fn build_flooding_complex_on(
    g: &Graph,
    h: &HeightFunction,
    nodes: &[NodeId],
    level: usize,
    cap: usize,
    exec: Exec,
) -> Result<FiltrationComplex> {
    let dag = DescentDag::on_subset(g, h, nodes)?;
    let closure = dag.closure(exec);
    let m = closure.len();
    if m >= NONE as usize {
        return Err(Error::InvalidInput("too many nodes for a flooding complex".into()));
    }
    let down: Vec<Vec<u32>> = (0..m)
        .map(|i| closure.row(i).ones().filter(|&j| j != i).map(|j| j as u32).collect())
        .collect();

    let size = ComplexSize {
        vertices: m,
        edges: down.iter().map(Vec::len).sum(),
        triangles: down
            .iter()
            .map(|d| d.iter().map(|&s| down[s as usize].len()).sum::<usize>())
            .sum(),
    };
    if size.total() > cap {
        return Err(Error::SimplexCap {
            vertices: size.vertices,
            edges: size.edges,
            triangles: size.triangles,
            total: size.total(),
            cap,
        });
    }

    let mut simplices = Vec::with_capacity(size.total());
    let mut vertex_index = Vec::with_capacity(m);
    let mut edge_start = Vec::with_capacity(m);
    let mut tri = Vec::new();
    for t in 0..m {
        let top = t as u32;
        vertex_index.push(simplices.len());
        simplices.push(Simplex::vertex(top));
        edge_start.push(simplices.len());
        simplices.extend(down[t].iter().map(|&s| Simplex::edge(s, top)));
        tri.clear();
        for &s in &down[t] {
            tri.extend(down[s as usize].iter().map(|&r| Simplex::triangle(r, s, top)));
        }
        tri.sort_unstable();
        simplices.extend_from_slice(&tri);
    }

    Ok(FiltrationComplex {
        level,
        step_nodes: closure.order().to_vec(),
        heights: closure.order().iter().map(|&x| h.value(x)).collect(),
        simplices,
        down,
        vertex_index,
        edge_start,
    })
}

impl FiltrationComplex {
    /// Decomposition level whose subgraph this complex was built on.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of filtration steps (= vertices).
    pub fn steps(&self) -> usize {
        self.step_nodes.len()
    }

    /// Node entering at step `t` (1-based).
    pub fn node_at(&self, t: usize) -> NodeId {
        self.step_nodes[t - 1]
    }

    pub fn height_at(&self, t: usize) -> f64 {
        self.heights[t - 1]
    }

    pub fn step_nodes(&self) -> &[NodeId] {
        &self.step_nodes
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn size(&self) -> ComplexSize {
        let mut s = ComplexSize { vertices: 0, edges: 0, triangles: 0 };
        for x in &self.simplices {
            match x.dim {
                0 => s.vertices += 1,
                1 => s.edges += 1,
                _ => s.triangles += 1,
            }
        }
        s
    }

    pub(crate) fn vertex_index(&self, p: u32) -> usize {
        self.vertex_index[p as usize]
    }

    pub(crate) fn edge_index(&self, a: u32, b: u32) -> usize {
        let d = &self.down[b as usize];
        let i = d.binary_search(&a).expect("edge present by face closure");
        self.edge_start[b as usize] + i
    }

    /// Indices of the codimension-1 faces of simplex `i`, increasing.
    pub fn boundary(&self, i: usize) -> Vec<usize> {
        let s = self.simplices[i];
        let mut b = match s.dim {
            0 => Vec::new(),
            1 => vec![self.vertex_index(s.verts[0]), self.vertex_index(s.verts[1])],
            _ => {
                let [a, b, c] = s.verts;
                vec![self.edge_index(a, b), self.edge_index(a, c), self.edge_index(b, c)]
            }
        };
        b.sort_unstable();
        b
    }

    /// Checks face closure, one vertex per step and the top-vertex rule.
    pub fn check(&self) -> Result<(), String> {
        let mut prev: Option<(usize, usize, &[u32])> = None;
        let mut vertices_per_step = vec![0usize; self.steps()];
        for (i, s) in self.simplices.iter().enumerate() {
            let key = (s.step(), s.dim(), s.vertices());
            if let Some(p) = prev {
                if p >= key {
                    return Err(format!("simplex {i} out of order"));
                }
            }
            prev = Some(key);
            if s.vertices().windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("simplex {i} vertices not increasing"));
            }
            if s.dim == 0 {
                vertices_per_step[s.step() - 1] += 1;
            }
            for f in self.boundary(i) {
                if f >= i {
                    return Err(format!("face {f} of simplex {i} comes later"));
                }
            }
        }
        if vertices_per_step.iter().any(|&c| c != 1) {
            return Err("a step does not add exactly one vertex".into());
        }
        Ok(())
    }
}
