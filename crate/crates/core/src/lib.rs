//! Distance-gadget laboratory and bandwidth-limited synchronous network simulator.
//!
//! The crate has three layers:
//!
//! * **Graph ground truth** — [`graph`] holds a labeled undirected simple
//!   graph with named node roles and an Alice/Bob side map; [`dist`] computes
//!   exact hop distances, eccentricities, diameter and radius by per-source
//!   breadth-first search. Everything else in the crate is checked against
//!   these oracles.
//! * **Two-party instances and gadgets** — [`boolean`] holds paired bit
//!   vectors with the disjointness/intersection functions and index
//!   machinery; [`gadgets`] builds graphs whose distances or eccentricities
//!   encode the bitwise intersection of the two vectors, and decoders that
//!   recover the intersection size from distance data.
//! * **Simulation** — [`sim`] is a deterministic round-synchronous message
//!   passing engine with per-edge bandwidth enforcement and cut-traffic
//!   accounting; [`algorithms`] provides the reference node programs
//!   (leader election + BFS tree, pipelined all-source BFS, eccentricity
//!   aggregation) that run on it.

pub mod algorithms;
pub mod boolean;
pub mod dist;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod sim;

pub use error::{Error, Result};
