//! Undirected simple graphs with named node roles and an Alice/Bob side map.
//!
//! Roles identify the structurally meaningful nodes of a gadget (the `a_p`
//! row, helper rows, spine nodes, padding, subdivision intermediates) so that
//! decoders can find them after the graph has been serialized, subdivided or
//! shuffled through the simulator. The side map declares which party
//! simulates which node; edges whose endpoints sit on different sides form
//! the cut whose traffic the simulator accounts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which party simulates a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Alice,
    Bob,
}

/// Structural name of a node inside a gadget.
///
/// Tags mirror the construction vocabulary: `A(p)`/`B(p)` are the input rows,
/// `AHelper(i, bit)` is helper node `a^bit_i`, `APrime(j)` is spine node
/// `a'_j`, `BDoublePrime(p)` is the pendant `b''_p`, `Padding(i)` is filler
/// node `a''_i`, `Intermediate { edge, pos }` is the `pos`-th node inserted
/// when subdividing the `edge`-th listed edge, and `Line(i)` is node `A_i` of
/// a line network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    A0,
    B0,
    A(usize),
    B(usize),
    AHelper(usize, u8),
    BHelper(usize, u8),
    APrime(usize),
    BPrime(usize),
    BDoublePrime(usize),
    Padding(usize),
    Intermediate { edge: usize, pos: usize },
    Line(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::A0 => write!(f, "a_0"),
            Role::B0 => write!(f, "b_0"),
            Role::A(p) => write!(f, "a_{p}"),
            Role::B(p) => write!(f, "b_{p}"),
            Role::AHelper(i, bit) => write!(f, "a^{bit}_{i}"),
            Role::BHelper(i, bit) => write!(f, "b^{bit}_{i}"),
            Role::APrime(j) => write!(f, "a'_{j}"),
            Role::BPrime(j) => write!(f, "b'_{j}"),
            Role::BDoublePrime(p) => write!(f, "b''_{p}"),
            Role::Padding(i) => write!(f, "a''_{i}"),
            Role::Intermediate { edge, pos } => write!(f, "mid_{edge}_{pos}"),
            Role::Line(i) => write!(f, "A_{i}"),
        }
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn num(part: &str, whole: &str) -> Result<usize> {
            part.parse()
                .map_err(|_| Error::input(format!("bad role tag {whole:?}")))
        }
        let bad = || Error::input(format!("bad role tag {s:?}"));

        if let Some(rest) = s.strip_prefix("mid_") {
            let (e, p) = rest.split_once('_').ok_or_else(bad)?;
            return Ok(Role::Intermediate {
                edge: num(e, s)?,
                pos: num(p, s)?,
            });
        }
        if let Some(rest) = s.strip_prefix("A_") {
            return Ok(Role::Line(num(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix("a''_") {
            return Ok(Role::Padding(num(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix("b''_") {
            return Ok(Role::BDoublePrime(num(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix("a'_") {
            return Ok(Role::APrime(num(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix("b'_") {
            return Ok(Role::BPrime(num(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix("a^").or_else(|| s.strip_prefix("b^")) {
            let (bit, i) = rest.split_once('_').ok_or_else(bad)?;
            let bit = match bit {
                "0" => 0,
                "1" => 1,
                _ => return Err(bad()),
            };
            let i = num(i, s)?;
            return Ok(if s.starts_with('a') {
                Role::AHelper(i, bit)
            } else {
                Role::BHelper(i, bit)
            });
        }
        if let Some(rest) = s.strip_prefix("a_") {
            let p = num(rest, s)?;
            return Ok(if p == 0 { Role::A0 } else { Role::A(p) });
        }
        if let Some(rest) = s.strip_prefix("b_") {
            let p = num(rest, s)?;
            return Ok(if p == 0 { Role::B0 } else { Role::B(p) });
        }
        Err(bad())
    }
}

/// Undirected simple graph with sorted adjacency lists, optional role tags
/// and an optional side per node.
///
/// Adjacency lists are kept sorted so that iteration order, and everything
/// downstream of it (simulator ports, serialized files, DOT output), is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    adj: Vec<Vec<usize>>,
    roles: Vec<Option<Role>>,
    sides: Vec<Option<Side>>,
}

impl LabeledGraph {
    /// An edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        LabeledGraph {
            adj: vec![Vec::new(); n],
            roles: vec![None; n],
            sides: vec![None; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = LabeledGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Inserts the undirected edge `(u, v)`.
    ///
    /// Self-loops, duplicate edges and out-of-range endpoints are rejected;
    /// the graph stays simple by construction.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::input(format!(
                "edge ({u}, {v}) out of range for {n} nodes"
            )));
        }
        if u == v {
            return Err(Error::input(format!("self-loop at node {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::input(format!("duplicate edge ({u}, {v})")));
        }
        let pos_u = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos_u, v);
        let pos_v = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos_v, u);
        Ok(())
    }

    fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let pos_u = self.adj[u]
            .binary_search(&v)
            .map_err(|_| Error::input(format!("edge ({u}, {v}) does not exist")))?;
        self.adj[u].remove(pos_u);
        let pos_v = self.adj[v]
            .binary_search(&u)
            .expect("adjacency is symmetric");
        self.adj[v].remove(pos_v);
        Ok(())
    }

    /// Appends a fresh isolated node and returns its index.
    pub fn push_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.roles.push(None);
        self.sides.push(None);
        self.adj.len() - 1
    }

    /// All edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn role(&self, u: usize) -> Option<Role> {
        self.roles[u]
    }

    /// Tags node `u` with `role`. Each role may name at most one node and
    /// each node may carry at most one role.
    pub fn set_role(&mut self, u: usize, role: Role) -> Result<()> {
        if u >= self.adj.len() {
            return Err(Error::input(format!("node {u} out of range")));
        }
        if let Some(existing) = self.roles[u] {
            return Err(Error::input(format!(
                "node {u} already tagged {existing}, cannot retag {role}"
            )));
        }
        if self.find_role(role).is_some() {
            return Err(Error::input(format!("role {role} already assigned")));
        }
        self.roles[u] = Some(role);
        Ok(())
    }

    /// The node carrying `role`, if any. Linear scan; graphs here are small.
    pub fn find_role(&self, role: Role) -> Option<usize> {
        self.roles.iter().position(|r| *r == Some(role))
    }

    pub fn side(&self, u: usize) -> Option<Side> {
        self.sides[u]
    }

    pub fn set_side(&mut self, u: usize, side: Side) -> Result<()> {
        if u >= self.adj.len() {
            return Err(Error::input(format!("node {u} out of range")));
        }
        self.sides[u] = Some(side);
        Ok(())
    }

    /// Nodes assigned to `side`, ascending.
    pub fn side_nodes(&self, side: Side) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&u| self.sides[u] == Some(side))
            .collect()
    }

    /// Edges whose endpoints are simulated by different parties, `u < v`,
    /// sorted. Requires every node to carry a side.
    pub fn cut_edges(&self) -> Result<Vec<(usize, usize)>> {
        for u in 0..self.node_count() {
            if self.sides[u].is_none() {
                return Err(Error::input(format!("node {u} has no declared side")));
            }
        }
        Ok(self
            .edges()
            .into_iter()
            .filter(|&(u, v)| self.sides[u] != self.sides[v])
            .collect())
    }

    /// Replaces each listed edge by a path of `ell` edges, inserting
    /// `ell - 1` fresh nodes per edge.
    ///
    /// The inserted nodes carry `Intermediate { edge, pos }` roles, where
    /// `edge` is the index of the edge in `edges` and `pos` counts 1..ell-1
    /// from the first endpoint. They inherit a side only when both endpoints
    /// agree on one. With `ell = 1` the graph is returned unchanged.
    pub fn subdivide_edges(
        &self,
        edges: &[(usize, usize)],
        ell: usize,
    ) -> Result<LabeledGraph> {
        if ell == 0 {
            return Err(Error::input("subdivision length must be >= 1"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in edges {
            if !self.has_edge(u, v) {
                return Err(Error::input(format!("edge ({u}, {v}) does not exist")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) listed twice for subdivision"
                )));
            }
        }
        let mut g = self.clone();
        if ell == 1 {
            return Ok(g);
        }
        for (edge_id, &(u, v)) in edges.iter().enumerate() {
            g.remove_edge(u, v)?;
            let side = match (self.sides[u], self.sides[v]) {
                (Some(a), Some(b)) if a == b => Some(a),
                _ => None,
            };
            let mut prev = u;
            for pos in 1..ell {
                let w = g.push_node();
                g.set_role(w, Role::Intermediate { edge: edge_id, pos })?;
                if let Some(s) = side {
                    g.set_side(w, s)?;
                }
                g.add_edge(prev, w)?;
                prev = w;
            }
            g.add_edge(prev, v)?;
        }
        Ok(g)
    }
}

/// Seeded random connected graph with `n` nodes and `m` edges.
///
/// A random spanning tree (each node attaches to a uniformly random earlier
/// node, under a random relabeling) guarantees connectivity; the remaining
/// `m - (n - 1)` edges are drawn uniformly from the unused pairs.
pub fn random_connected(n: usize, m: usize, seed: u64) -> Result<LabeledGraph> {
    if n == 0 {
        return Err(Error::input("graph needs at least one node"));
    }
    let max_m = n * (n - 1) / 2;
    if n > 1 && (m < n - 1 || m > max_m) {
        return Err(Error::input(format!(
            "edge count must satisfy n-1 <= m <= n(n-1)/2, got n={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    let mut g = LabeledGraph::new(n);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(label[i], label[j])?;
    }
    if n > 1 {
        let mut spare: Vec<(usize, usize)> = Vec::with_capacity(max_m - (n - 1));
        for u in 0..n {
            for v in (u + 1)..n {
                if !g.has_edge(u, v) {
                    spare.push((u, v));
                }
            }
        }
        spare.shuffle(&mut rng);
        for &(u, v) in spare.iter().take(m - (n - 1)) {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

// --- file formats -----------------------------------------------------------

/// Role/side sidecar, serialized as
/// `{"roles": {"tag": index, ...}, "side": {"alice": [...], "bob": [...]}}`.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Sidecar {
    pub roles: BTreeMap<String, usize>,
    pub side: SideLists,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct SideLists {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl LabeledGraph {
    /// Edge-list text: first line `n m`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format. Roles and sides come separately via
    /// [`LabeledGraph::apply_sidecar`].
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::input("empty edge-list file"))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::input(format!("bad header line {header:?}")))?;
        let m: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::input(format!("bad header line {header:?}")))?;
        if parts.next().is_some() {
            return Err(Error::input(format!("bad header line {header:?}")));
        }
        let mut g = LabeledGraph::new(n);
        let mut count = 0;
        for line in lines {
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::input(format!("bad edge line {line:?}")))?;
            let v: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::input(format!("bad edge line {line:?}")))?;
            if parts.next().is_some() {
                return Err(Error::input(format!("bad edge line {line:?}")));
            }
            g.add_edge(u, v)?;
            count += 1;
        }
        if count != m {
            return Err(Error::input(format!(
                "header announced {m} edges but file has {count}"
            )));
        }
        Ok(g)
    }

    pub fn sidecar(&self) -> Sidecar {
        let mut sc = Sidecar::default();
        for u in 0..self.node_count() {
            if let Some(role) = self.roles[u] {
                sc.roles.insert(role.to_string(), u);
            }
            match self.sides[u] {
                Some(Side::Alice) => sc.side.alice.push(u),
                Some(Side::Bob) => sc.side.bob.push(u),
                None => {}
            }
        }
        sc
    }

    pub fn apply_sidecar(&mut self, sc: &Sidecar) -> Result<()> {
        for (tag, &u) in &sc.roles {
            let role: Role = tag.parse()?;
            self.set_role(u, role)?;
        }
        for &u in &sc.side.alice {
            self.set_side(u, Side::Alice)?;
        }
        for &u in &sc.side.bob {
            if self.sides[u] == Some(Side::Alice) {
                return Err(Error::input(format!("node {u} listed on both sides")));
            }
            self.set_side(u, Side::Bob)?;
        }
        Ok(())
    }

    /// DOT rendering with role tags as labels and sides as fill colors.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gadget {\n  node [shape=circle];\n");
        for u in 0..self.node_count() {
            let label = match self.roles[u] {
                Some(role) => format!("{role}"),
                None => format!("{u}"),
            };
            let color = match self.sides[u] {
                Some(Side::Alice) => ", style=filled, fillcolor=lightblue",
                Some(Side::Bob) => ", style=filled, fillcolor=lightsalmon",
                None => "",
            };
            out.push_str(&format!("  {u} [label=\"{label}\"{color}];\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}
