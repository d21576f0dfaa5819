//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by geometry, solvers, stability analysis and the evolver.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition (bad point, bad curvature,
    /// invalid areas, unknown template, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A cycle does not close, an incidence is inconsistent, or a graph
    /// violates the degree rules.
    #[error("topology error: {0}")]
    Topology(String),

    /// A Möbius image was requested for an arc passing through the pole.
    #[error("pole error: {0}")]
    Pole(String),

    /// A root find or relaxation failed to converge. Carries the last iterate
    /// in printable form so callers can diagnose the failure.
    #[error("solver error: {message} (last iterate: {last_iterate})")]
    Solver {
        message: String,
        last_iterate: String,
    },

    /// Data that should agree with itself does not (unbalanced curvatures,
    /// mismatched discretization sizes, ...).
    #[error("consistency error: {0}")]
    Consistency(String),

    /// An operation requires a stationary graph and the input is not.
    #[error("stationarity precondition failed: {0}")]
    NotStationary(String),

    /// A relaxation step collapsed an edge below the minimum length; the
    /// engine refuses to perform topology surgery.
    #[error("topology event: edge {edge} collapsed ({message})")]
    TopologyEvent { edge: usize, message: String },

    /// A template cannot be instantiated for the requested areas.
    #[error("infeasible instantiation: {0}")]
    Infeasible(String),

    /// Serialization / document errors.
    #[error("document error: {0}")]
    Document(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn topology(msg: impl Into<String>) -> Self {
        Error::Topology(msg.into())
    }

    pub fn solver(message: impl Into<String>, last_iterate: impl Into<String>) -> Self {
        Error::Solver {
            message: message.into(),
            last_iterate: last_iterate.into(),
        }
    }
}
