//! Reduction-graph constructors and decoders.
//!
//! Each builder turns a two-party bit-vector instance `(x, y)` into a graph
//! whose distance data encodes the intersection size `|x ∩ y|`:
//!
//! * the **pairwise gadget** ([`build_apsp_gadget`]) makes `d(a_i, b_j)`
//!   equal 3 exactly when the pair's bit is set in both vectors, and 2
//!   otherwise, so the full distance matrix of the Alice rows reveals the
//!   count;
//! * the **eccentricity gadget** ([`build_ecc_gadget`]) makes
//!   `e(a_p) = 3ℓ+1` when `x_p = y_p = 1` and `5ℓ+1` otherwise, where `ℓ` is
//!   a subdivision length that widens the gap until even a `(5/3 − ε)`-
//!   approximation of the eccentricities separates the two cases;
//! * the **line network** ([`build_line`]) is the endpoint-input path used
//!   for cut-traffic experiments.
//!
//! The decoders mirror the counting step of the simulation argument: they
//! read only Alice-side rows/entries of the distance data and return
//! `|x ∩ y|`.

use std::cell::RefCell;
use std::collections::BTreeSet;

use crate::boolean::{helper_rows, index_bit, index_to_pair, Bits};
use crate::dist::{Dist, DistanceMatrix};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Role, Side};

/// Parameters of the pairwise distance gadget on `n` nodes: `s` index rows
/// per side and `k = s(s-1)/2` instance bits, one per unordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApspParams {
    pub n: usize,
    pub s: usize,
    pub k: usize,
    /// Even `n` spends the extra node on a second hub `b_0`.
    pub has_b0: bool,
}

pub fn apsp_params(n: usize) -> Result<ApspParams> {
    if n < 5 {
        return Err(Error::input(format!(
            "pairwise gadget needs n >= 5, got n={n}"
        )));
    }
    let s = (n - 1) / 2;
    Ok(ApspParams {
        n,
        s,
        k: s * (s - 1) / 2,
        has_b0: n.is_multiple_of(2),
    })
}

/// Builds the pairwise distance gadget for instance `(x, y)`.
///
/// Alice's side is a star `a_0, a_1..a_s` plus the edge `(a_i, a_j)` for
/// every pair whose `x`-bit is 0; Bob's side mirrors it with `y` (the hub
/// `b_0` exists only for even `n`). The sides are joined by the rungs
/// `(a_i, b_i)`, which form the whole cut.
pub fn build_apsp_gadget(n: usize, x: &Bits, y: &Bits) -> Result<LabeledGraph> {
    let prm = apsp_params(n)?;
    if x.len() != prm.k || y.len() != prm.k {
        return Err(Error::input(format!(
            "instance length must be k={} for n={n}, got |x|={}, |y|={}",
            prm.k,
            x.len(),
            y.len()
        )));
    }
    let s = prm.s;
    let a = |i: usize| i; // a_0..a_s
    let b = |i: usize| if prm.has_b0 { s + 1 + i } else { s + i };

    let mut g = LabeledGraph::new(n);
    g.set_role(a(0), Role::A0)?;
    g.set_side(a(0), Side::Alice)?;
    if prm.has_b0 {
        g.set_role(b(0), Role::B0)?;
        g.set_side(b(0), Side::Bob)?;
    }
    for i in 1..=s {
        g.set_role(a(i), Role::A(i))?;
        g.set_side(a(i), Side::Alice)?;
        g.set_role(b(i), Role::B(i))?;
        g.set_side(b(i), Side::Bob)?;
    }
    for i in 1..=s {
        g.add_edge(a(0), a(i))?;
        g.add_edge(a(i), b(i))?;
        if prm.has_b0 {
            g.add_edge(b(0), b(i))?;
        }
    }
    for p in 1..=prm.k {
        let (i, j) = index_to_pair(p, s)?;
        if !x.get(p) {
            g.add_edge(a(i), a(j))?;
        }
        if !y.get(p) {
            g.add_edge(b(i), b(j))?;
        }
    }
    Ok(g)
}

/// Read access to pairwise distances, so decoders can be audited for which
/// rows they touch.
pub trait DistanceLookup {
    fn distance(&self, u: usize, v: usize) -> Dist;
}

impl DistanceLookup for DistanceMatrix {
    fn distance(&self, u: usize, v: usize) -> Dist {
        self.at(u, v)
    }
}

/// Wrapper that records which rows a decoder reads.
pub struct RecordingDistances<'a, L: ?Sized> {
    inner: &'a L,
    rows: RefCell<BTreeSet<usize>>,
}

impl<'a, L: DistanceLookup + ?Sized> RecordingDistances<'a, L> {
    pub fn new(inner: &'a L) -> Self {
        RecordingDistances {
            inner,
            rows: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn accessed_rows(&self) -> Vec<usize> {
        self.rows.borrow().iter().copied().collect()
    }
}

impl<L: DistanceLookup + ?Sized> DistanceLookup for RecordingDistances<'_, L> {
    fn distance(&self, u: usize, v: usize) -> Dist {
        self.rows.borrow_mut().insert(u);
        self.inner.distance(u, v)
    }
}

/// Read access to per-node eccentricity values.
pub trait EccLookup {
    fn ecc(&self, u: usize) -> u32;
}

impl EccLookup for [u32] {
    fn ecc(&self, u: usize) -> u32 {
        self[u]
    }
}

/// Wrapper that records which entries a decoder reads.
pub struct RecordingEcc<'a, L: ?Sized> {
    inner: &'a L,
    nodes: RefCell<BTreeSet<usize>>,
}

impl<'a, L: EccLookup + ?Sized> RecordingEcc<'a, L> {
    pub fn new(inner: &'a L) -> Self {
        RecordingEcc {
            inner,
            nodes: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn accessed(&self) -> Vec<usize> {
        self.nodes.borrow().iter().copied().collect()
    }
}

impl<L: EccLookup + ?Sized> EccLookup for RecordingEcc<'_, L> {
    fn ecc(&self, u: usize) -> u32 {
        self.nodes.borrow_mut().insert(u);
        self.inner.ecc(u)
    }
}

/// Largest `p` such that roles `A(1)..A(p)` are all present.
fn indexed_row_count(g: &LabeledGraph) -> usize {
    (1..)
        .take_while(|&p| g.find_role(Role::A(p)).is_some())
        .count()
}

/// Recovers `|x ∩ y|` from the distance matrix of a pairwise gadget by
/// counting the index pairs `i < j` at distance 3.
///
/// Only rows of `a_1..a_s` are read, mirroring the party that simulates the
/// Alice side.
pub fn decode_apsp<L: DistanceLookup + ?Sized>(dm: &L, g: &LabeledGraph) -> Result<usize> {
    let s = indexed_row_count(g);
    if s < 2 {
        return Err(Error::input(
            "graph carries no a_1..a_s index rows to decode",
        ));
    }
    let mut count = 0;
    for i in 1..=s {
        let ai = g
            .find_role(Role::A(i))
            .expect("checked by indexed_row_count");
        for j in (i + 1)..=s {
            let bj = g
                .find_role(Role::B(j))
                .ok_or_else(|| Error::input(format!("missing role tag b_{j}")))?;
            if dm.distance(ai, bj) == Dist::Finite(3) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Parameters of the eccentricity gadget: `k` instance bits, `s` helper rows
/// (the bits needed to tell the indices apart), subdivision length `ell`.
///
/// `k` is the largest value whose worst-case instance (all bits set) still
/// fits in `n` nodes after subdivision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EccParams {
    pub n: usize,
    pub ell: usize,
    pub k: usize,
    pub s: usize,
}

impl EccParams {
    /// Named nodes of the unsubdivided core: the `a_p`/`b_p` rows, helper
    /// rows, two spines and the `b''_p` pendants.
    pub fn core_nodes(&self) -> usize {
        3 * self.k + 4 * self.s + 6
    }

    /// Edges replaced by paths, for an instance with `wx`/`wy` set bits.
    pub fn stretched_edges(&self, wx: usize, wy: usize) -> usize {
        3 * self.k + 2 * self.k * self.s + 4 + wx + wy
    }

    /// Node count realized before padding.
    pub fn realized_nodes(&self, wx: usize, wy: usize) -> usize {
        self.core_nodes() + (self.ell - 1) * self.stretched_edges(wx, wy)
    }

    /// Filler nodes attached to `a'_1` so the graph has exactly `n` nodes.
    /// The parameter solver budgets the all-bits-set worst case, so this
    /// cannot go negative for in-range weights.
    pub fn padding(&self, wx: usize, wy: usize) -> usize {
        self.n
            .checked_sub(self.realized_nodes(wx, wy))
            .expect("instance weights exceed the worst case the solver budgeted")
    }

    /// Cut size: the helper cross edges plus the spine bridge.
    pub fn cut_size(&self) -> usize {
        2 * self.s + 1
    }
}

/// Worst-case node demand for a given `k`: all instance bits set.
fn ecc_cost(k: usize, ell: usize) -> usize {
    let s = helper_rows(k);
    3 * k + 4 * s + 6 + (ell - 1) * (3 * k + 2 * k * s + 4 + 2 * k)
}

pub fn ecc_params(n: usize, ell: usize) -> Result<EccParams> {
    if ell < 1 {
        return Err(Error::input("subdivision length ell must be >= 1"));
    }
    let min_n = 31 * ell - 8;
    if n < min_n {
        return Err(Error::input(format!(
            "eccentricity gadget needs n >= 31*ell - 8 = {min_n}, got n={n}"
        )));
    }
    // ecc_cost is monotone in k, and min_n guarantees k = 3 fits.
    let mut k = 2;
    while ecc_cost(k + 1, ell) <= n {
        k += 1;
    }
    Ok(EccParams {
        n,
        ell,
        k,
        s: helper_rows(k),
    })
}

/// Builds the eccentricity gadget for instance `(x, y)` with subdivision
/// length `ell`.
///
/// The core wires each `a_p` to the helper row according to the binary
/// expansion of `p - 1` and to the spine head `a'_1`; the spine runs
/// `a'_1 - a'_2 - a'_3`; bit `x_p = 1` adds the shortcut `(a_p, a'_3)`. The
/// Bob side mirrors this and additionally hangs the pendant `b''_p` off each
/// `b_p`. Helper rows cross between the sides on complementary bits and the
/// spines meet at `(a'_3, b'_3)`; those cross edges plus the padding
/// attachments at `a'_1` are the only edges *not* replaced by length-`ell`
/// paths.
pub fn build_ecc_gadget(n: usize, ell: usize, x: &Bits, y: &Bits) -> Result<LabeledGraph> {
    let prm = ecc_params(n, ell)?;
    let (k, s) = (prm.k, prm.s);
    if x.len() != k || y.len() != k {
        return Err(Error::input(format!(
            "instance length must be k={k} for n={n}, ell={ell}, got |x|={}, |y|={}",
            x.len(),
            y.len()
        )));
    }
    let padding = prm.padding(x.weight(), y.weight());

    let a = |p: usize| p - 1;
    let a_h = |i: usize, bit: u8| k + 2 * (i - 1) + bit as usize;
    let a_pr = |j: usize| k + 2 * s + (j - 1);
    let b = |p: usize| k + 2 * s + 3 + (p - 1);
    let b_h = |i: usize, bit: u8| 2 * k + 2 * s + 3 + 2 * (i - 1) + bit as usize;
    let b_pr = |j: usize| 2 * k + 4 * s + 3 + (j - 1);
    let b_pp = |p: usize| 2 * k + 4 * s + 6 + (p - 1);
    let pad = |i: usize| 3 * k + 4 * s + 6 + (i - 1);

    let mut g = LabeledGraph::new(prm.core_nodes() + padding);
    for p in 1..=k {
        g.set_role(a(p), Role::A(p))?;
        g.set_role(b(p), Role::B(p))?;
        g.set_role(b_pp(p), Role::BDoublePrime(p))?;
    }
    for i in 1..=s {
        for bit in [0u8, 1] {
            g.set_role(a_h(i, bit), Role::AHelper(i, bit))?;
            g.set_role(b_h(i, bit), Role::BHelper(i, bit))?;
        }
    }
    for j in 1..=3 {
        g.set_role(a_pr(j), Role::APrime(j))?;
        g.set_role(b_pr(j), Role::BPrime(j))?;
    }
    for i in 1..=padding {
        g.set_role(pad(i), Role::Padding(i))?;
    }
    for u in 0..g.node_count() {
        let alice = u < k + 2 * s + 3 || u >= 3 * k + 4 * s + 6;
        g.set_side(u, if alice { Side::Alice } else { Side::Bob })?;
    }

    // Edges that will be replaced by length-ell paths, in construction order.
    let mut stretched: Vec<(usize, usize)> = Vec::new();
    for p in 1..=k {
        for i in 1..=s {
            stretched.push((a(p), a_h(i, index_bit(p, i))));
        }
        stretched.push((a(p), a_pr(1)));
    }
    stretched.push((a_pr(1), a_pr(2)));
    stretched.push((a_pr(2), a_pr(3)));
    for p in 1..=k {
        if x.get(p) {
            stretched.push((a(p), a_pr(3)));
        }
    }
    for p in 1..=k {
        for i in 1..=s {
            stretched.push((b(p), b_h(i, index_bit(p, i))));
        }
        stretched.push((b(p), b_pr(1)));
        stretched.push((b(p), b_pp(p)));
    }
    stretched.push((b_pr(1), b_pr(2)));
    stretched.push((b_pr(2), b_pr(3)));
    for p in 1..=k {
        if y.get(p) {
            stretched.push((b(p), b_pr(3)));
        }
    }
    debug_assert_eq!(stretched.len(), prm.stretched_edges(x.weight(), y.weight()));
    for &(u, v) in &stretched {
        g.add_edge(u, v)?;
    }

    // Cross edges and padding attachments stay unit length.
    for i in 1..=s {
        g.add_edge(a_h(i, 0), b_h(i, 1))?;
        g.add_edge(a_h(i, 1), b_h(i, 0))?;
    }
    g.add_edge(a_pr(3), b_pr(3))?;
    for i in 1..=padding {
        g.add_edge(a_pr(1), pad(i))?;
    }

    let g = g.subdivide_edges(&stretched, ell)?;
    debug_assert_eq!(g.node_count(), n);
    Ok(g)
}

/// Recovers `|x ∩ y|` from exact eccentricities of an eccentricity gadget:
/// the count of rows with `e(a_p) < 5ℓ+1`.
pub fn decode_ecc<L: EccLookup + ?Sized>(ecc: &L, g: &LabeledGraph, ell: usize) -> Result<usize> {
    if ell < 1 {
        return Err(Error::input("subdivision length ell must be >= 1"));
    }
    let k = indexed_row_count(g);
    if k == 0 {
        return Err(Error::input("graph carries no a_p rows to decode"));
    }
    let cutoff = (5 * ell + 1) as u32;
    let mut count = 0;
    for p in 1..=k {
        let ap = g
            .find_role(Role::A(p))
            .expect("checked by indexed_row_count");
        if ecc.ecc(ap) < cutoff {
            count += 1;
        }
    }
    Ok(count)
}

/// Subdivision length that makes the eccentricity gap survive a
/// `(5/3 − eps)`-approximation: `ceil(2 / (9 eps))`.
pub fn subdivision_length(eps: f64) -> Result<usize> {
    check_eps(eps)?;
    Ok(((2.0 / (9.0 * eps)).ceil() as usize).max(1))
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 2.0 / 3.0) {
        return Err(Error::input(format!(
            "approximation slack must satisfy 0 < eps < 2/3, got {eps}"
        )));
    }
    Ok(())
}

/// Decision thresholds for approximate decoding: an estimate at most `low`
/// (= 3ℓ+1) means the bit pair is set, anything at least `high`
/// (= (5ℓ+1)/(5/3−eps), the smallest admissible estimate of an unset row)
/// means it is not. Decoding is sound exactly when `low < high`.
pub fn decision_thresholds(ell: usize, eps: f64) -> Result<(f64, f64)> {
    check_eps(eps)?;
    if ell < 1 {
        return Err(Error::input("subdivision length ell must be >= 1"));
    }
    let low = (3 * ell + 1) as f64;
    let high = (5 * ell + 1) as f64 / (5.0 / 3.0 - eps);
    Ok((low, high))
}

/// Recovers `|x ∩ y|` from `(5/3 − eps)`-approximate eccentricities: rows
/// with an estimate at most `3ℓ+1` are counted as intersecting.
///
/// Correct for every estimate vector inside the approximation band, provided
/// the thresholds separate (guaranteed when `ell` comes from
/// [`subdivision_length`]).
pub fn decode_ecc_approx(est: &[f64], g: &LabeledGraph, ell: usize, eps: f64) -> Result<usize> {
    let (low, high) = decision_thresholds(ell, eps)?;
    if low >= high {
        return Err(Error::input(format!(
            "thresholds do not separate at ell={ell}, eps={eps}: {low} >= {high}"
        )));
    }
    let k = indexed_row_count(g);
    if k == 0 {
        return Err(Error::input("graph carries no a_p rows to decode"));
    }
    let mut count = 0;
    for p in 1..=k {
        let ap = g
            .find_role(Role::A(p))
            .expect("checked by indexed_row_count");
        if est[ap] <= low {
            count += 1;
        }
    }
    Ok(count)
}

/// Like [`decode_ecc_approx`], but first verifies that every estimate lies
/// inside the promised band `[e/(5/3−eps), e]` around the true eccentricity.
pub fn decode_ecc_approx_verified(
    est: &[f64],
    true_ecc: &[u32],
    g: &LabeledGraph,
    ell: usize,
    eps: f64,
) -> Result<usize> {
    check_eps(eps)?;
    let rho = 5.0 / 3.0 - eps;
    for (node, (&guess, &exact)) in est.iter().zip(true_ecc).enumerate() {
        let (lo, hi) = (exact as f64 / rho, exact as f64);
        if !(guess >= lo && guess <= hi) {
            return Err(Error::ApproxContract {
                node,
                estimate: guess,
                lo,
                hi,
            });
        }
    }
    decode_ecc_approx(est, g, ell, eps)
}

/// Path of `d + 1` nodes with endpoint inputs: `A_0` is Alice's, `A_d` is
/// Bob's, intermediate nodes start unassigned.
pub fn build_line(d: usize) -> Result<LabeledGraph> {
    if d < 1 {
        return Err(Error::input(format!("line network needs d >= 1, got {d}")));
    }
    let mut g = LabeledGraph::new(d + 1);
    for i in 0..=d {
        g.set_role(i, Role::Line(i))?;
        if i > 0 {
            g.add_edge(i - 1, i)?;
        }
    }
    g.set_side(0, Side::Alice)?;
    g.set_side(d, Side::Bob)?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::intersection_size;
    use crate::dist::{apsp_oracle, distance_params};

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn apsp_params_examples() {
        let p = apsp_params(8).unwrap();
        assert_eq!((p.s, p.k, p.has_b0), (3, 3, true));
        let p = apsp_params(5).unwrap();
        assert_eq!((p.s, p.k, p.has_b0), (2, 1, false));
        let p = apsp_params(9).unwrap();
        assert_eq!((p.s, p.k, p.has_b0), (4, 6, false));
        assert!(apsp_params(4).is_err());
    }

    #[test]
    fn pairwise_gadget_reference_instance() {
        // n = 8, x = 010, y = 110: 9 base edges plus (a_1,a_2), (a_2,a_3)
        // from the x-zeros and (b_2,b_3) from the y-zero.
        let g = build_apsp_gadget(8, &bits("010"), &bits("110")).unwrap();
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.edge_count(), 12);
        let mut expected = vec![
            (0, 1),
            (0, 2),
            (0, 3), // a_0 star
            (4, 5),
            (4, 6),
            (4, 7), // b_0 star
            (1, 5),
            (2, 6),
            (3, 7), // rungs
            (1, 2),
            (2, 3), // x zeros
            (6, 7), // y zero
        ];
        expected.sort();
        assert_eq!(g.edges(), expected);

        let all_ones = build_apsp_gadget(8, &bits("111"), &bits("111")).unwrap();
        assert_eq!(all_ones.edge_count(), 9, "base edges only");
    }

    #[test]
    fn pairwise_gadget_rejects_wrong_length() {
        assert!(build_apsp_gadget(8, &bits("01"), &bits("110")).is_err());
    }

    #[test]
    fn pairwise_gadget_reference_distances() {
        let g = build_apsp_gadget(8, &bits("010"), &bits("110")).unwrap();
        let dm = apsp_oracle(&g);
        let node = |r: Role| g.find_role(r).unwrap();
        assert_eq!(dm.at(node(Role::A(1)), node(Role::B(3))), Dist::Finite(3));
        assert_eq!(dm.at(node(Role::A(1)), node(Role::B(2))), Dist::Finite(2));
        assert_eq!(dm.at(node(Role::A(2)), node(Role::B(3))), Dist::Finite(2));
    }

    #[test]
    fn decode_apsp_examples() {
        for (x, y, want) in [
            ("010", "110", 1),
            ("000", "110", 0),
            ("111", "111", 3),
        ] {
            let g = build_apsp_gadget(8, &bits(x), &bits(y)).unwrap();
            let got = decode_apsp(&apsp_oracle(&g), &g).unwrap();
            assert_eq!(got, want, "x={x}, y={y}");
            assert_eq!(got, intersection_size(&bits(x), &bits(y)).unwrap());
        }
    }

    #[test]
    fn decode_apsp_rejects_untagged_graph() {
        let g = LabeledGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(decode_apsp(&apsp_oracle(&g), &g).is_err());
    }

    #[test]
    fn ecc_params_examples() {
        let p = ecc_params(23, 1).unwrap();
        assert_eq!((p.k, p.s), (3, 2));
        assert_eq!(p.core_nodes(), 23);

        let p = ecc_params(54, 2).unwrap();
        assert_eq!((p.k, p.s), (3, 2));
        assert_eq!(p.realized_nodes(3, 3), 54, "all bits set fills n exactly");

        let p = ecc_params(24, 1).unwrap();
        assert_eq!((p.k, p.s), (3, 2), "k = 4 would need 26 nodes");
        assert_eq!(p.padding(0, 0), 1);

        assert!(ecc_params(22, 1).is_err());
        assert!(ecc_params(53, 2).is_err());
        assert!(ecc_params(23, 0).is_err());
    }

    #[test]
    fn ecc_gadget_reference_instance() {
        let g = build_ecc_gadget(23, 1, &bits("100"), &bits("110")).unwrap();
        assert_eq!(g.node_count(), 23);
        let params = distance_params(&apsp_oracle(&g)).unwrap();
        let e = |r: Role| params.eccentricities[g.find_role(r).unwrap()];
        assert_eq!(e(Role::A(1)), 4, "x_1 = y_1 = 1");
        assert_eq!(e(Role::A(2)), 6);
        assert_eq!(e(Role::A(3)), 6);
    }

    #[test]
    fn ecc_gadget_prop_bounds_at_unit_length() {
        // d(a_p, v) <= 5 for v != b''_p, and d(a_p, b''_p) <= 6.
        for (x, y) in [("100", "110"), ("000", "000"), ("111", "111")] {
            let g = build_ecc_gadget(23, 1, &bits(x), &bits(y)).unwrap();
            let dm = apsp_oracle(&g);
            for p in 1..=3usize {
                let ap = g.find_role(Role::A(p)).unwrap();
                let bpp = g.find_role(Role::BDoublePrime(p)).unwrap();
                for v in 0..g.node_count() {
                    let d = dm.at(ap, v).finite().unwrap();
                    if v == bpp {
                        assert!(d <= 6, "d(a_{p}, b''_{p}) = {d}");
                    } else {
                        assert!(d <= 5, "d(a_{p}, {v}) = {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn ecc_dichotomy_exhaustive_at_unit_length() {
        for x in Bits::enumerate(3) {
            for y in Bits::enumerate(3) {
                let g = build_ecc_gadget(23, 1, &x, &y).unwrap();
                let params = distance_params(&apsp_oracle(&g)).unwrap();
                for p in 1..=3usize {
                    let e = params.eccentricities[g.find_role(Role::A(p)).unwrap()];
                    let want = if x.get(p) && y.get(p) { 4 } else { 6 };
                    assert_eq!(e, want, "x={x}, y={y}, p={p}");
                }
                let got = decode_ecc(
                    params.eccentricities.as_slice(),
                    &g,
                    1,
                )
                .unwrap();
                assert_eq!(got, intersection_size(&x, &y).unwrap());
            }
        }
    }

    #[test]
    fn ecc_dichotomy_spot_checks_at_length_two() {
        for (x, y) in [("110", "011"), ("000", "111")] {
            let (x, y) = (bits(x), bits(y));
            let g = build_ecc_gadget(54, 2, &x, &y).unwrap();
            assert_eq!(g.node_count(), 54);
            let params = distance_params(&apsp_oracle(&g)).unwrap();
            for p in 1..=3usize {
                let e = params.eccentricities[g.find_role(Role::A(p)).unwrap()];
                let want = if x.get(p) && y.get(p) { 7 } else { 11 };
                assert_eq!(e, want, "p={p}");
            }
            let got = decode_ecc(params.eccentricities.as_slice(), &g, 2).unwrap();
            assert_eq!(got, intersection_size(&x, &y).unwrap());
        }
    }

    #[test]
    fn ecc_dichotomy_at_larger_k() {
        // k = 4 leaves padding at n = 30; k = 5 brings in a third helper
        // row at n = 33.
        for (n, k) in [(30usize, 4usize), (33, 5)] {
            let prm = ecc_params(n, 1).unwrap();
            assert_eq!(prm.k, k);
            for seed in 0..8u64 {
                let x = Bits::random(k, seed);
                let y = Bits::random(k, 100 + seed);
                let g = build_ecc_gadget(n, 1, &x, &y).unwrap();
                let params = distance_params(&apsp_oracle(&g)).unwrap();
                for p in 1..=k {
                    let e = params.eccentricities[g.find_role(Role::A(p)).unwrap()];
                    let want = if x.get(p) && y.get(p) { 4 } else { 6 };
                    assert_eq!(e, want, "n={n}, x={x}, y={y}, p={p}");
                }
                let got = decode_ecc(params.eccentricities.as_slice(), &g, 1).unwrap();
                assert_eq!(got, intersection_size(&x, &y).unwrap());
            }
        }
    }

    #[test]
    fn ecc_gadget_node_count_is_exact_for_all_weights() {
        for ell in 1..=3usize {
            let n = 31 * ell - 8 + 7; // a little slack, so padding varies
            let prm = ecc_params(n, ell).unwrap();
            for x in Bits::enumerate(prm.k) {
                for y in Bits::enumerate(prm.k) {
                    let g = build_ecc_gadget(n, ell, &x, &y).unwrap();
                    assert_eq!(g.node_count(), n, "ell={ell}, x={x}, y={y}");
                }
            }
        }
    }

    #[test]
    fn threshold_examples_and_sweep() {
        assert_eq!(subdivision_length(0.1).unwrap(), 3);
        let (low, high) = decision_thresholds(3, 0.1).unwrap();
        assert_eq!(low, 10.0);
        assert!((high - 16.0 / (5.0 / 3.0 - 0.1)).abs() < 1e-12);
        assert!((high - 10.2128).abs() < 1e-3);

        assert_eq!(subdivision_length(0.5).unwrap(), 1);
        let (low, high) = decision_thresholds(1, 0.5).unwrap();
        assert_eq!(low, 4.0);
        assert!((high - 36.0 / 7.0).abs() < 1e-12);

        for t in 1..=66 {
            let eps = 0.01 * t as f64;
            let ell = subdivision_length(eps).unwrap();
            let (low, high) = decision_thresholds(ell, eps).unwrap();
            assert!(low < high, "eps={eps}: {low} !< {high}");
        }
        assert!(subdivision_length(0.0).is_err());
        assert!(subdivision_length(2.0 / 3.0).is_err());
    }

    #[test]
    fn approx_decoder_on_exact_and_adversarial_estimates() {
        let eps = 0.1;
        let ell = subdivision_length(eps).unwrap();
        let n = 31 * ell - 8;
        let rho = 5.0 / 3.0 - eps;
        for (x, y) in [("101", "110"), ("000", "111"), ("111", "111")] {
            let (x, y) = (bits(x), bits(y));
            let g = build_ecc_gadget(n, ell, &x, &y).unwrap();
            let exact = distance_params(&apsp_oracle(&g)).unwrap().eccentricities;
            let want = intersection_size(&x, &y).unwrap();

            let as_f64: Vec<f64> = exact.iter().map(|&e| e as f64).collect();
            assert_eq!(
                decode_ecc_approx(&as_f64, &g, ell, eps).unwrap(),
                want,
                "exact values satisfy the contract"
            );

            // Worst admissible estimates at both band endpoints.
            for shrink in [true, false] {
                let est: Vec<f64> = exact
                    .iter()
                    .map(|&e| if shrink { e as f64 / rho } else { e as f64 })
                    .collect();
                assert_eq!(
                    decode_ecc_approx_verified(&est, &exact, &g, ell, eps).unwrap(),
                    want
                );
            }
        }
    }

    #[test]
    fn approx_decoder_flags_contract_violations() {
        let g = build_ecc_gadget(23, 1, &bits("100"), &bits("110")).unwrap();
        let exact = distance_params(&apsp_oracle(&g)).unwrap().eccentricities;
        let mut est: Vec<f64> = exact.iter().map(|&e| e as f64).collect();
        est[0] = exact[0] as f64 + 1.0; // above the true value
        assert!(matches!(
            decode_ecc_approx_verified(&est, &exact, &g, 1, 0.5),
            Err(Error::ApproxContract { .. })
        ));
    }

    #[test]
    fn decoders_read_only_alice_entries() {
        let g = build_apsp_gadget(9, &bits("011010"), &bits("110100")).unwrap();
        let dm = apsp_oracle(&g);
        let recorder = RecordingDistances::new(&dm);
        decode_apsp(&recorder, &g).unwrap();
        let alice: Vec<usize> = g.side_nodes(Side::Alice);
        for row in recorder.accessed_rows() {
            assert!(alice.contains(&row), "row {row} is not Alice's");
        }

        let g = build_ecc_gadget(23, 1, &bits("100"), &bits("110")).unwrap();
        let ecc = distance_params(&apsp_oracle(&g)).unwrap().eccentricities;
        let recorder = RecordingEcc::new(ecc.as_slice());
        decode_ecc(&recorder, &g, 1).unwrap();
        let alice = g.side_nodes(Side::Alice);
        for node in recorder.accessed() {
            assert!(alice.contains(&node), "node {node} is not Alice's");
        }
    }

    #[test]
    fn line_network() {
        let g = build_line(1).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));

        let g = build_line(4).unwrap();
        let params = distance_params(&apsp_oracle(&g)).unwrap();
        assert_eq!(params.diameter, 4);
        assert_eq!(g.role(0), Some(Role::Line(0)));
        assert_eq!(g.side(0), Some(Side::Alice));
        assert_eq!(g.side(4), Some(Side::Bob));
        assert_eq!(g.side(2), None);

        assert!(build_line(0).is_err());
    }
}
