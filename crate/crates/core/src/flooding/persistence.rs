use serde::Serialize;

use crate::graph::NodeId;

use super::complex::FiltrationComplex;

/// A persistence interval in filtration steps (1-based, half-open).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub dim: usize,
    pub birth: usize,
    /// `None` for an essential class.
    pub death: Option<usize>,
    pub birth_node: NodeId,
    pub killer: Option<NodeId>,
    pub birth_h: f64,
    pub death_h: Option<f64>,
}

impl Interval {
    /// Length in height units; infinite for essential classes.
    pub fn persistence(&self) -> f64 {
        self.death_h.map_or(f64::INFINITY, |d| d - self.birth_h)
    }

    fn key(&self) -> (usize, usize, usize) {
        (self.dim, self.birth, self.death.unwrap_or(usize::MAX))
    }
}

/// Zero- and one-dimensional persistence of a [`FiltrationComplex`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Barcode {
    pub level: usize,
    pub steps: usize,
    /// Sorted by (dimension, birth, death), essential classes last.
    pub intervals: Vec<Interval>,
    /// Birth steps of 2-cycles of the 2-skeleton. Only the 2-skeleton is
    /// built, so tetrahedra that would fill these are absent.
    pub essential_dim2: Vec<usize>,
}

impl Barcode {
    /// Betti number of dimension `dim` after each step `1..=steps`.
    pub fn betti_curve(&self, dim: usize) -> Vec<usize> {
        let mut delta = vec![0i64; self.steps + 2];
        let mut add = |b: usize, d: Option<usize>| {
            delta[b] += 1;
            if let Some(d) = d {
                delta[d] -= 1;
            }
        };
        if dim == 2 {
            self.essential_dim2.iter().for_each(|&b| add(b, None));
        } else {
            for i in self.intervals.iter().filter(|i| i.dim == dim) {
                add(i.birth, i.death);
            }
        }
        let mut out = Vec::with_capacity(self.steps);
        let mut acc = 0i64;
        for d in &delta[1..=self.steps] {
            acc += d;
            out.push(acc as usize);
        }
        out
    }

    pub fn dim(&self, dim: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }
}

/// Symmetric difference of two increasing index lists.
fn add_columns(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

const UNPAIRED: u32 = u32::MAX;

/// Standard GF(2) column reduction with clearing: triangles are reduced
/// first and every edge that becomes a pivot row is skipped afterwards.
pub fn compute_persistence(c: &FiltrationComplex) -> Barcode {
    let simplices = c.simplices();
    let total = simplices.len();
    assert!(total < UNPAIRED as usize, "complex too large for 32-bit indices");
    // low row -> column owning it
    let mut owner = vec![UNPAIRED; total];
    let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); total];
    let mut essential_dim2 = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    for dim in [2usize, 1] {
        for j in 0..total {
            // clearing: an edge that is already a triangle pivot is a birth edge
            if simplices[j].dim() != dim || (dim == 1 && owner[j] != UNPAIRED) {
                continue;
            }
            let mut col: Vec<u32> = c.boundary(j).into_iter().map(|i| i as u32).collect();
            while let Some(&low) = col.last() {
                let o = owner[low as usize];
                if o == UNPAIRED {
                    break;
                }
                col = add_columns(&col, &reduced[o as usize]);
            }
            match col.last() {
                Some(&low) => {
                    owner[low as usize] = j as u32;
                    pairs.push((low as usize, j));
                    reduced[j] = col;
                }
                None if dim == 2 => essential_dim2.push(simplices[j].step()),
                None => {}
            }
        }
    }

    let mut paired = vec![false; total];
    for &(b, d) in &pairs {
        paired[b] = true;
        paired[d] = true;
    }
    let mut intervals = Vec::new();
    let mut interval = |dim: usize, b: usize, d: Option<usize>| {
        let bs = simplices[b].step();
        let ds = d.map(|d| simplices[d].step());
        if ds == Some(bs) {
            return;
        }
        intervals.push(Interval {
            dim,
            birth: bs,
            death: ds,
            birth_node: c.node_at(bs),
            killer: ds.map(|t| c.node_at(t)),
            birth_h: c.height_at(bs),
            death_h: ds.map(|t| c.height_at(t)),
        });
    };
    for &(b, d) in &pairs {
        let dim = simplices[b].dim();
        if dim <= 1 {
            interval(dim, b, Some(d));
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if !paired[i] && s.dim() <= 1 {
            interval(s.dim(), i, None);
        }
    }
    intervals.sort_by_key(Interval::key);
    Barcode { level: c.level(), steps: c.steps(), intervals, essential_dim2 }
}
