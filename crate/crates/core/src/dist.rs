//! Exact hop-distance oracle: per-source breadth-first search, the full
//! distance matrix, and the derived eccentricity/diameter/radius parameters.
//!
//! These routines are the ground truth the gadget distance laws and the
//! simulator outputs are verified against, so they stay deliberately plain:
//! a queue-based BFS per source and nothing shared with the simulator.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

/// Hop distance that is explicit about unreachability.
///
/// Disconnected inputs yield `Unreachable` rather than a large integer so
/// that a disconnection bug fails loudly instead of skewing maxima.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(u32),
    Unreachable,
}

impl Dist {
    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Unreachable => None,
        }
    }
}

impl std::fmt::Display for Dist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Unreachable => write!(f, "inf"),
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // JSON: finite distances as numbers, unreachable as null.
        self.finite().serialize(s)
    }
}

/// Hop distances from `source` to every node.
pub fn bfs(graph: &LabeledGraph, source: usize) -> Result<Vec<Dist>> {
    let n = graph.node_count();
    if source >= n {
        return Err(Error::input(format!(
            "bfs source {source} out of range for {n} nodes"
        )));
    }
    let mut dist = vec![Dist::Unreachable; n];
    dist[source] = Dist::Finite(0);
    let mut queue = VecDeque::with_capacity(n);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].finite().expect("queued nodes are reached");
        for &v in graph.neighbors(u) {
            if dist[v] == Dist::Unreachable {
                dist[v] = Dist::Finite(du + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// Exact all-pairs hop distances, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<Dist>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, u: usize, v: usize) -> Dist {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[Dist] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Rows as plain vectors; JSON-friendly.
    pub fn rows(&self) -> Vec<Vec<Dist>> {
        (0..self.n).map(|u| self.row(u).to_vec()).collect()
    }
}

/// Full distance matrix by independent per-source BFS.
///
/// Sources are searched in parallel over the read-only graph; the result is
/// identical to running the searches one by one.
pub fn apsp_oracle(graph: &LabeledGraph) -> DistanceMatrix {
    let n = graph.node_count();
    let rows: Vec<Vec<Dist>> = (0..n)
        .into_par_iter()
        .map(|u| bfs(graph, u).expect("source index in range"))
        .collect();
    DistanceMatrix {
        n,
        data: rows.into_iter().flatten().collect(),
    }
}

/// Eccentricity vector with its extremes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceParams {
    pub eccentricities: Vec<u32>,
    pub diameter: u32,
    pub radius: u32,
}

/// Per-node eccentricities plus diameter (their maximum) and radius (their
/// minimum). Errors on disconnected input, where these are undefined.
pub fn distance_params(dm: &DistanceMatrix) -> Result<DistanceParams> {
    let mut eccentricities = Vec::with_capacity(dm.n());
    for u in 0..dm.n() {
        let mut e = 0;
        for v in 0..dm.n() {
            match dm.at(u, v) {
                Dist::Finite(d) => e = e.max(d),
                Dist::Unreachable => return Err(Error::Disconnected(v)),
            }
        }
        eccentricities.push(e);
    }
    let diameter = eccentricities.iter().copied().max().unwrap_or(0);
    let radius = eccentricities.iter().copied().min().unwrap_or(0);
    Ok(DistanceParams {
        eccentricities,
        diameter,
        radius,
    })
}
