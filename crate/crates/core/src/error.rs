//! Crate-wide error type.

/// Errors produced by graph construction, gadget building, decoding and
/// simulation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument or input file was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation that requires a connected graph saw an unreachable node.
    #[error("graph is disconnected: node {0} is unreachable from node 0")]
    Disconnected(usize),

    /// A node tried to push more bits onto a directed edge in one round than
    /// the bandwidth allows.
    #[error(
        "bandwidth exceeded in round {round} on edge {from}->{to}: \
         {attempted} bits attempted, limit {limit}"
    )]
    BandwidthExceeded {
        round: usize,
        from: usize,
        to: usize,
        attempted: usize,
        limit: usize,
    },

    /// The round limit was reached with nodes still running.
    #[error(
        "simulation hit the {max_rounds}-round limit with {unhalted} of \
         {nodes} nodes still running"
    )]
    Timeout {
        max_rounds: usize,
        unhalted: usize,
        nodes: usize,
    },

    /// An eccentricity estimate fell outside the approximation band it
    /// promised to satisfy.
    #[error(
        "approximation contract violated at node {node}: estimate {estimate} \
         outside [{lo}, {hi}]"
    )]
    ApproxContract {
        node: usize,
        estimate: f64,
        lo: f64,
        hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
