use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::NodeId;
use crate::markov::MarkovChain;

use super::validate_sets;

/// Dense reactive-edge counts are kept only for chains up to this size.
const EDGE_COUNT_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McOptions {
    /// Total number of simulated steps, split evenly across replicas.
    pub steps: u64,
    pub replicas: usize,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { steps: 10_000_000, replicas: 16, seed: 0x5eed }
    }
}

/// Equilibrium-trajectory estimates with standard errors across replicas.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub steps: u64,
    pub replicas: usize,
    /// Completed `A -> B` reactive paths per step.
    pub rate: f64,
    pub rate_se: f64,
    /// Fraction of steps spent at each node while reactive.
    pub reactive_distribution: Vec<f64>,
    pub reactive_distribution_se: Vec<f64>,
    /// Reactive traversals of `x -> y` per step, row-major `n * n`; empty
    /// for chains larger than 512 states.
    pub edge_frequency: Vec<f64>,
    pub edge_frequency_se: Vec<f64>,
}

struct Replica {
    reactive_paths: u64,
    visits: Vec<u64>,
    edges: Vec<u64>,
}

fn run_replica(cum: &[Vec<(NodeId, f64)>], pi_cum: &[f64], end: &[u8], steps: u64, rng: &mut ChaCha8Rng) -> Replica {
    let n = cum.len();
    let track_edges = n <= EDGE_COUNT_LIMIT;
    let sample = |row: &[(NodeId, f64)], u: f64| -> NodeId {
        let i = row.partition_point(|&(_, c)| c <= u);
        row[i.min(row.len() - 1)].0
    };
    let mut out = Replica {
        reactive_paths: 0,
        visits: vec![0; n],
        edges: if track_edges { vec![0; n * n] } else { Vec::new() },
    };
    let u: f64 = rng.random();
    let mut x = pi_cum.partition_point(|&c| c <= u).min(n - 1);
    // the last A state followed by the interior states visited since
    let mut path: Vec<NodeId> = Vec::new();
    let mut active = false;
    if end[x] == 1 {
        path.push(x);
        active = true;
    }
    for _ in 0..steps {
        let y = sample(&cum[x], rng.random());
        match end[y] {
            1 => {
                path.clear();
                path.push(y);
                active = true;
            }
            2 => {
                if active {
                    out.reactive_paths += 1;
                    for &s in &path[1..] {
                        out.visits[s] += 1;
                    }
                    if track_edges {
                        for w in path.windows(2) {
                            out.edges[w[0] * n + w[1]] += 1;
                        }
                        out.edges[path[path.len() - 1] * n + y] += 1;
                    }
                }
                path.clear();
                active = false;
            }
            _ => {
                if active {
                    path.push(y);
                }
            }
        }
        x = y;
    }
    out
}

fn mean_se(samples: &[f64]) -> (f64, f64) {
    let r = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / r;
    if samples.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Estimates the rate, reactive distribution and reactive edge frequencies
/// from a stationary trajectory. Replicas start from independent
/// stationary draws on their own ChaCha stream, so results depend only on
/// `opts`, never on the execution policy.
pub fn monte_carlo(mc: &MarkovChain, a: &[NodeId], b: &[NodeId], opts: &McOptions, exec: Exec) -> Result<McEstimate> {
    let n = mc.n();
    validate_sets(n, a, b)?;
    if opts.replicas == 0 || opts.steps < opts.replicas as u64 {
        return Err(Error::InvalidInput("need at least one step per replica".into()));
    }
    let pi = mc.stationary()?;
    let mut pi_cum = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &p in pi {
        acc += p;
        pi_cum.push(acc);
    }
    let cum: Vec<Vec<(NodeId, f64)>> = (0..n)
        .map(|x| {
            let mut acc = 0.0;
            mc.row(x)
                .iter()
                .map(|&(y, p)| {
                    acc += p;
                    (y, acc)
                })
                .collect()
        })
        .collect();
    let mut end = vec![0u8; n];
    a.iter().for_each(|&x| end[x] = 1);
    b.iter().for_each(|&x| end[x] = 2);

    let per = opts.steps / opts.replicas as u64;
    let runs = exec.map_range(opts.replicas, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(r as u64);
        run_replica(&cum, &pi_cum, &end, per, &mut rng)
    });

    let scale = 1.0 / per as f64;
    let (rate, rate_se) = mean_se(&runs.iter().map(|r| r.reactive_paths as f64 * scale).collect::<Vec<_>>());
    let per_node = |x: usize| mean_se(&runs.iter().map(|r| r.visits[x] as f64 * scale).collect::<Vec<_>>());
    let (reactive_distribution, reactive_distribution_se) = (0..n).map(per_node).unzip();
    let (edge_frequency, edge_frequency_se) = if n <= EDGE_COUNT_LIMIT {
        (0..n * n)
            .map(|i| mean_se(&runs.iter().map(|r| r.edges[i] as f64 * scale).collect::<Vec<_>>()))
            .unzip()
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(McEstimate {
        steps: per * opts.replicas as u64,
        replicas: opts.replicas,
        rate,
        rate_se,
        reactive_distribution,
        reactive_distribution_se,
        edge_frequency,
        edge_frequency_se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::markov::markov_from_graph;

    #[test]
    fn policy_does_not_change_the_estimate() {
        let g = Graph::from_pairs(&[("0", "1"), ("1", "2"), ("2", "3"), ("0", "2")]).unwrap();
        let mc = markov_from_graph(&g).unwrap();
        let opts = McOptions { steps: 40_000, replicas: 4, seed: 7 };
        let s = monte_carlo(&mc, &[0], &[3], &opts, Exec::Sequential).unwrap();
        let p = monte_carlo(&mc, &[0], &[3], &opts, Exec::Parallel).unwrap();
        assert_eq!(s.rate, p.rate);
        assert_eq!(s.reactive_distribution, p.reactive_distribution);
    }

    #[test]
    fn path_rate_close_to_exact() {
        let g = Graph::from_pairs(&[("0", "1"), ("1", "2"), ("2", "3"), ("3", "4")]).unwrap();
        let mc = markov_from_graph(&g).unwrap();
        let e = monte_carlo(&mc, &[0], &[4], &McOptions { steps: 1_000_000, replicas: 8, seed: 1 }, Exec::default())
            .unwrap();
        let exact = 1.0 / 32.0;
        assert!((e.rate - exact).abs() < 5.0 * e.rate_se, "{} vs {exact} (se {})", e.rate, e.rate_se);
    }
}
