//! Topological landscapes for networks carrying a node function.
//!
//! Given a graph and an injective height function on its nodes, this crate
//! computes the discrete gradient flow, local minima and their attraction
//! basins, the hierarchy of nondegenerate saddles of every index, persistence
//! barcodes of the flooding complex (which also expose degenerate saddles),
//! minimax paths, and transition path theory statistics on the random walk
//! induced by the network.
//!
//! ```
//! use netland::{datasets, descent, height::{self, TieBreak}};
//!
//! let g = datasets::fig1_left();
//! // h(node) = its integer label
//! let base = height::BaseEnergy::new(g.labels().iter().map(|l| l.parse().unwrap()).collect());
//! let h = height::make_injective(&base, &TieBreak::IdAscending).unwrap();
//! let d = descent::decompose(&g, &h).unwrap();
//! assert_eq!(d.levels.len(), 2);
//! assert_eq!(g.label(d.critical(1)[0]), "3");
//! ```

pub mod datasets;
pub mod descent;
pub mod error;
pub mod exec;
pub mod flooding;
pub mod graph;
pub mod height;
pub mod markov;
pub mod pipeline;
pub mod report;
pub mod tpt;

pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::{Graph, NodeId};
pub use height::HeightFunction;
pub use markov::MarkovChain;
