//! Least-perimeter partitions of the unit disk into regions of prescribed areas.
//!
//! The crate has three layers:
//!
//! * exact geometry: circular arcs, Möbius maps, standard-graph construction
//!   and inverse solvers ([`geometry`], [`standard`], [`solver`]);
//! * stability analysis: the discretized index form, constrained spectra,
//!   Jacobi functions and instability certificates ([`stability`],
//!   [`configurations`]);
//! * a discrete relaxation engine over polyline curve networks with exact
//!   area constraints and a catalog of candidate topologies ([`evolver`]).
//!
//! Graphs move between the layers as [`graph::PartitionGraph`] (exact arcs)
//! or [`evolver::DiscreteGraph`] (polylines), and serialize to a common JSON
//! document ([`document`]). [`svg`] renders either kind to a figure.

pub mod configurations;
pub mod document;
pub mod error;
pub mod evolver;
pub mod geometry;
pub mod graph;
pub mod oracle;
pub mod solver;
pub mod stability;
pub mod standard;
pub mod svg;
pub mod util;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
