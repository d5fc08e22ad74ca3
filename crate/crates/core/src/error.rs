use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("line {line}: negative weight {weight} on edge {u} {v}")]
    NegativeWeight {
        line: usize,
        u: String,
        v: String,
        weight: f64,
    },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: String },

    #[error("node {0} is isolated; drop isolated nodes before building an energy")]
    IsolatedNode(String),

    #[error("unknown node label {0:?}")]
    UnknownNode(String),

    #[error("graph is directed; symmetrize it first (threshold with symmetrize-average)")]
    DirectedGraph,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("nodes {a} and {b} are not connected")]
    Disconnected { a: String, b: String },

    #[error("node {0} has no outgoing weight")]
    DanglingNode(String),

    #[error("markov chain is reducible; recurrent classes: {0:?}")]
    Reducible(Vec<Vec<String>>),

    #[error("committor system is singular: nodes {0:?} cannot reach the source or target set")]
    SingularCommittor(Vec<String>),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error(
        "flooding complex too large: {vertices} vertices, {edges} edges, {triangles} triangles \
         ({total} simplices) exceeds the cap of {cap}"
    )]
    SimplexCap {
        vertices: usize,
        edges: usize,
        triangles: usize,
        total: usize,
        cap: usize,
    },
}

/// Broad failure classes, used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Numeric,
    Resource,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::SingularCommittor(_)
            | Error::NoConvergence { .. }
            | Error::Reducible(_)
            | Error::Numerical(_) => {
                ErrorClass::Numeric
            }
            Error::SimplexCap { .. } => ErrorClass::Resource,
            _ => ErrorClass::Input,
        }
    }
}
