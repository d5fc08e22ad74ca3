//! Discrete transition path theory between two node sets.

mod montecarlo;

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::NodeId;
use crate::markov::MarkovChain;

pub use montecarlo::{monte_carlo, McEstimate, McOptions};

/// Interior size up to which the committor is solved by dense LU.
pub const DENSE_LIMIT: usize = 2000;
/// Residual bound `max |Pq - q|` on interior nodes for the iterative solver.
pub const COMMITTOR_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 1_000_000;
/// Default `J⁺` threshold for drawn arrows.
pub const ARROW_THRESHOLD: f64 = 0.001;
/// Bound on interior flux imbalance.
pub const CONSERVATION_TOL: f64 = 1e-9;
/// Relative bound between the two rate formulas.
pub const RATE_REL_TOL: f64 = 1e-9;
const REVERSIBLE_TOL: f64 = 1e-12;

/// Which orientation of the committor factors enters `J`, `ρ^A`, `ρ^B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `J(xy) = π(x) q⁻(x) p(x,y) q(y)` with the backward committor `q⁻`,
    /// which is `1 - q` on reversible chains.
    #[default]
    Standard,
    /// `J(xy) = π(x) q(x) p(x,y) (1 - q(y))` and `ρ^A = Σ π q`, kept for
    /// comparison. Its rate from the `A` side is always zero.
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TptOptions {
    pub convention: Convention,
    pub arrow_threshold: f64,
    pub max_sweeps: usize,
}

impl Default for TptOptions {
    fn default() -> Self {
        TptOptions { convention: Convention::Standard, arrow_threshold: ARROW_THRESHOLD, max_sweeps: DEFAULT_MAX_SWEEPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Current {
    pub from: NodeId,
    pub to: NodeId,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TptResult {
    pub source: Vec<NodeId>,
    pub target: Vec<NodeId>,
    pub convention: Convention,
    pub arrow_threshold: f64,
    /// Forward committor: probability of hitting `B` before `A`.
    pub committor: Vec<f64>,
    /// Probability of having come from `A` rather than `B` last.
    pub backward_committor: Vec<f64>,
    pub stationary: Vec<f64>,
    /// `π(x) q⁻(x) q(x)`, not normalized.
    pub reactive_distribution: Vec<f64>,
    /// `J(xy)` for every ordered pair with `p(x,y) > 0`, `x != y`.
    pub current: Vec<Current>,
    /// Positive entries of `J(xy) - J(yx)`.
    pub effective_current: Vec<Current>,
    /// Out-flow for interior and source nodes, in-flow for target nodes.
    pub transition_current: Vec<f64>,
    /// `J⁺` crossing the `q = 0.5` cut at each node, counting only edges
    /// above `arrow_threshold`.
    pub partial_current: Vec<f64>,
    /// The same without the threshold.
    pub partial_current_all: Vec<f64>,
    /// `q >= 0.5`.
    pub target_side: Vec<bool>,
    pub rate_from_source: f64,
    pub rate_into_target: f64,
    pub rho_a: f64,
    pub rho_b: f64,
}

impl TptResult {
    /// `ν` as the mean of both formulas.
    pub fn rate(&self) -> f64 {
        0.5 * (self.rate_from_source + self.rate_into_target)
    }

    /// Interior nodes sorted by decreasing partial current, ties by id.
    pub fn ranked_interior(&self) -> Vec<NodeId> {
        let n = self.committor.len();
        let mut end = vec![false; n];
        self.source.iter().chain(&self.target).for_each(|&x| end[x] = true);
        let mut v: Vec<NodeId> = (0..n).filter(|&x| !end[x]).collect();
        v.sort_by(|&a, &b| self.partial_current[b].total_cmp(&self.partial_current[a]).then(a.cmp(&b)));
        v
    }

    /// Every violated invariant, as text. Only [`Convention::Standard`]
    /// promises conservation and rate agreement.
    pub fn violations(&self) -> Vec<String> {
        let n = self.committor.len();
        let mut out = Vec::new();
        let mut end = vec![false; n];
        for &a in &self.source {
            end[a] = true;
            if self.committor[a] != 0.0 {
                out.push(format!("q({a}) != 0 on source"));
            }
        }
        for &b in &self.target {
            end[b] = true;
            if self.committor[b] != 1.0 {
                out.push(format!("q({b}) != 1 on target"));
            }
        }
        for x in 0..n {
            let q = self.committor[x];
            if !(0.0..=1.0).contains(&q) {
                out.push(format!("q({x}) = {q} outside [0,1]"));
            }
            let r = self.reactive_distribution[x];
            if r < 0.0 || (end[x] && r != 0.0) {
                out.push(format!("reactive distribution {r} at {x}"));
            }
        }
        let mut inflow = vec![0.0; n];
        let mut outflow = vec![0.0; n];
        for c in &self.effective_current {
            if c.value <= 0.0 {
                out.push(format!("nonpositive effective current {} -> {}", c.from, c.to));
            }
            outflow[c.from] += c.value;
            inflow[c.to] += c.value;
        }
        let mut seen = std::collections::HashSet::new();
        for c in &self.effective_current {
            if seen.contains(&(c.to, c.from)) {
                out.push(format!("effective current both ways on {}-{}", c.from, c.to));
            }
            seen.insert((c.from, c.to));
        }
        if (self.rho_a + self.rho_b - 1.0).abs() > 1e-12 {
            out.push(format!("rho_a + rho_b = {}", self.rho_a + self.rho_b));
        }
        if self.convention == Convention::Standard {
            for x in (0..n).filter(|&x| !end[x]) {
                if (outflow[x] - inflow[x]).abs() > CONSERVATION_TOL {
                    out.push(format!("flux imbalance {} at {x}", outflow[x] - inflow[x]));
                }
            }
            let (a, b) = (self.rate_from_source, self.rate_into_target);
            if (a - b).abs() > RATE_REL_TOL * a.abs().max(b.abs()) {
                out.push(format!("rates disagree: {a} vs {b}"));
            }
        }
        out
    }
}

fn validate_sets(n: usize, a: &[NodeId], b: &[NodeId]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("source and target sets must be nonempty".into()));
    }
    let mut mark = vec![0u8; n];
    for &x in a {
        if x >= n {
            return Err(Error::InvalidInput(format!("node {x} out of range")));
        }
        mark[x] = 1;
    }
    for &x in b {
        if x >= n {
            return Err(Error::InvalidInput(format!("node {x} out of range")));
        }
        if mark[x] == 1 {
            return Err(Error::InvalidInput("source and target sets overlap".into()));
        }
    }
    Ok(())
}

/// Probability of hitting `b` before `a`, from every node.
pub fn committor(mc: &MarkovChain, a: &[NodeId], b: &[NodeId]) -> Result<Vec<f64>> {
    committor_with(mc, a, b, DEFAULT_MAX_SWEEPS)
}

/// [`committor`] with an explicit sweep cap for the iterative solver.
pub fn committor_with(mc: &MarkovChain, a: &[NodeId], b: &[NodeId], max_sweeps: usize) -> Result<Vec<f64>> {
    let n = mc.n();
    validate_sets(n, a, b)?;
    let mut q = vec![f64::NAN; n];
    a.iter().for_each(|&x| q[x] = 0.0);
    b.iter().for_each(|&x| q[x] = 1.0);

    // interior nodes that cannot reach A ∪ B make the system singular
    let mut pred: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for x in 0..n {
        for &(y, p) in mc.row(x) {
            if p > 0.0 {
                pred[y].push(x);
            }
        }
    }
    let mut reach = vec![false; n];
    let mut queue: VecDeque<NodeId> = a.iter().chain(b).copied().collect();
    queue.iter().for_each(|&x| reach[x] = true);
    while let Some(y) = queue.pop_front() {
        for &x in &pred[y] {
            if !reach[x] {
                reach[x] = true;
                queue.push_back(x);
            }
        }
    }
    let stuck: Vec<String> = (0..n).filter(|&x| !reach[x]).map(|x| mc.labels()[x].clone()).collect();
    if !stuck.is_empty() {
        return Err(Error::SingularCommittor(stuck));
    }

    let interior: Vec<NodeId> = (0..n).filter(|&x| q[x].is_nan()).collect();
    if interior.is_empty() {
        return Ok(q);
    }
    let mut pos = vec![usize::MAX; n];
    interior.iter().enumerate().for_each(|(i, &x)| pos[x] = i);
    let rhs = |x: NodeId| -> f64 { b.iter().map(|&y| mc.prob(x, y)).sum() };

    if interior.len() <= DENSE_LIMIT {
        let m = interior.len();
        let mut mat = DMatrix::<f64>::identity(m, m);
        let mut r = DVector::<f64>::zeros(m);
        for (i, &x) in interior.iter().enumerate() {
            for &(y, p) in mc.row(x) {
                if pos[y] != usize::MAX {
                    mat[(i, pos[y])] -= p;
                }
            }
            r[i] = rhs(x);
        }
        let sol = mat
            .lu()
            .solve(&r)
            .ok_or_else(|| Error::SingularCommittor(interior.iter().map(|&x| mc.labels()[x].clone()).collect()))?;
        for (i, &x) in interior.iter().enumerate() {
            q[x] = sol[i].clamp(0.0, 1.0);
        }
    } else {
        for &x in &interior {
            q[x] = 0.5;
        }
        let mut residual = f64::INFINITY;
        let mut converged = false;
        for _ in 0..max_sweeps {
            // Gauss-Seidel with the self-loop eliminated
            for &x in &interior {
                let mut s = 0.0;
                let mut stay = 0.0;
                for &(y, p) in mc.row(x) {
                    if y == x {
                        stay += p;
                    } else {
                        s += p * q[y];
                    }
                }
                q[x] = s / (1.0 - stay);
            }
            residual = interior
                .iter()
                .map(|&x| (mc.row(x).iter().map(|&(y, p)| p * q[y]).sum::<f64>() - q[x]).abs())
                .fold(0.0, f64::max);
            if residual <= COMMITTOR_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { what: "committor sweep", iterations: max_sweeps, residual });
        }
        for &x in &interior {
            q[x] = q[x].clamp(0.0, 1.0);
        }
    }
    Ok(q)
}

/// Full transition path analysis from `a` to `b`. Every result is checked
/// against [`TptResult::violations`]; a failure is reported as
/// [`Error::Numerical`].
pub fn transition_path_analysis(mc: &MarkovChain, a: &[NodeId], b: &[NodeId], opts: &TptOptions) -> Result<TptResult> {
    let n = mc.n();
    let q = committor_with(mc, a, b, opts.max_sweeps)?;
    let pi = mc.stationary()?.to_vec();
    let reversible = mc.detailed_balance_defect()? <= REVERSIBLE_TOL;
    let qb: Vec<f64> = match opts.convention {
        Convention::Standard if !reversible => {
            let rev = mc.time_reversal()?;
            committor_with(&rev, b, a, opts.max_sweeps)?
        }
        _ => q.iter().map(|v| 1.0 - v).collect(),
    };

    let (from_w, to_w): (Vec<f64>, Vec<f64>) = match opts.convention {
        Convention::Standard => (qb.clone(), q.clone()),
        Convention::Swapped => (q.clone(), q.iter().map(|v| 1.0 - v).collect()),
    };
    let reactive_distribution: Vec<f64> = (0..n).map(|x| pi[x] * qb[x] * q[x]).collect();

    let mut current = Vec::new();
    let mut dense = std::collections::HashMap::new();
    for x in 0..n {
        for &(y, p) in mc.row(x) {
            if y != x && p > 0.0 {
                let v = pi[x] * from_w[x] * p * to_w[y];
                current.push(Current { from: x, to: y, value: v });
                dense.insert((x, y), v);
            }
        }
    }
    let mut effective_current = Vec::new();
    for c in &current {
        let back = dense.get(&(c.to, c.from)).copied().unwrap_or(0.0);
        let v = c.value - back;
        if v > 0.0 {
            effective_current.push(Current { from: c.from, to: c.to, value: v });
        }
    }

    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    a.iter().for_each(|&x| in_a[x] = true);
    b.iter().for_each(|&x| in_b[x] = true);
    let mut outflow = vec![0.0; n];
    let mut inflow = vec![0.0; n];
    for c in &effective_current {
        outflow[c.from] += c.value;
        inflow[c.to] += c.value;
    }
    let transition_current: Vec<f64> = (0..n).map(|x| if in_b[x] { inflow[x] } else { outflow[x] }).collect();

    let target_side: Vec<bool> = q.iter().map(|&v| v >= 0.5).collect();
    let mut partial_current = vec![0.0; n];
    let mut partial_current_all = vec![0.0; n];
    for c in effective_current.iter().filter(|c| !target_side[c.from] && target_side[c.to]) {
        partial_current_all[c.from] += c.value;
        partial_current_all[c.to] += c.value;
        if c.value > opts.arrow_threshold {
            partial_current[c.from] += c.value;
            partial_current[c.to] += c.value;
        }
    }

    let rate_from_source = current.iter().filter(|c| in_a[c.from]).map(|c| c.value).sum();
    let rate_into_target = current.iter().filter(|c| in_b[c.to]).map(|c| c.value).sum();
    let rho_a: f64 = (0..n).map(|x| pi[x] * last_from_a(opts.convention, &q, &qb, x)).sum();
    let rho_b: f64 = (0..n).map(|x| pi[x] * (1.0 - last_from_a(opts.convention, &q, &qb, x))).sum();

    let r = TptResult {
        source: a.to_vec(),
        target: b.to_vec(),
        convention: opts.convention,
        arrow_threshold: opts.arrow_threshold,
        committor: q,
        backward_committor: qb,
        stationary: pi,
        reactive_distribution,
        current,
        effective_current,
        transition_current,
        partial_current,
        partial_current_all,
        target_side,
        rate_from_source,
        rate_into_target,
        rho_a,
        rho_b,
    };
    let bad = r.violations();
    if !bad.is_empty() {
        return Err(Error::Numerical(format!("transition path invariants violated: {}", bad.join("; "))));
    }
    Ok(r)
}

// Weight of x in ρ^A: the probability of having last visited A.
fn last_from_a(c: Convention, q: &[f64], qb: &[f64], x: NodeId) -> f64 {
    match c {
        Convention::Standard => qb[x],
        Convention::Swapped => q[x],
    }
}

/// Runs [`transition_path_analysis`] for many `(A, B)` pairs.
pub fn tpt_many(
    mc: &MarkovChain,
    pairs: &[(Vec<NodeId>, Vec<NodeId>)],
    opts: &TptOptions,
    exec: Exec,
) -> Vec<Result<TptResult>> {
    // settle the stationary distribution once, before fanning out
    let _ = mc.stationary();
    exec.map(pairs, |(a, b)| transition_path_analysis(mc, a, b, opts))
}
