//! Bit-vector instances for the two-party intersection and disjointness
//! functions, plus the pair↔index bijection and binary-expansion helper the
//! gadget constructors are built on.
//!
//! Index conventions follow the two-party setting: bit positions run 1..=k,
//! so `x.get(1)` is the first bit. Parsing and printing use '0'/'1' strings
//! with position 1 first.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A dense bit vector indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    pub fn zeros(k: usize) -> Self {
        Bits(vec![false; k])
    }

    pub fn ones(k: usize) -> Self {
        Bits(vec![true; k])
    }

    /// Uniformly random bits from a seeded generator; same seed, same bits.
    pub fn random(k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Bits((0..k).map(|_| rng.gen::<bool>()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The bit at 1-based position `p`.
    ///
    /// Panics if `p` is 0 or greater than the length.
    pub fn get(&self, p: usize) -> bool {
        self.0[p - 1]
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Enumerates all 2^k vectors of length `k` in counting order; test helper
    /// for exhaustive sweeps.
    pub fn enumerate(k: usize) -> impl Iterator<Item = Bits> {
        assert!(k < usize::BITS as usize);
        (0..1usize << k).map(move |m| Bits((0..k).map(|i| m >> i & 1 == 1).collect()))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::input(format!(
                    "bit vector may contain only '0'/'1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bits)
    }
}

/// A two-party instance: paired vectors of length `k` and a threshold
/// `rho` in 1..=k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionInstance {
    pub k: usize,
    pub x: Bits,
    pub y: Bits,
    pub rho: usize,
}

impl IntersectionInstance {
    pub fn new(x: Bits, y: Bits, rho: usize) -> Result<Self> {
        let k = x.len();
        if y.len() != k {
            return Err(Error::input(format!(
                "bit vectors differ in length: {} vs {}",
                k,
                y.len()
            )));
        }
        if k == 0 || rho == 0 || rho > k {
            return Err(Error::input(format!(
                "threshold must satisfy 1 <= rho <= k, got rho={rho}, k={k}"
            )));
        }
        Ok(IntersectionInstance { k, x, y, rho })
    }

    /// The intersection function: true (= 1) iff at least `rho` positions are
    /// set in both vectors.
    pub fn eval(&self) -> bool {
        intersection_size(&self.x, &self.y).expect("lengths checked at construction") >= self.rho
    }
}

/// Number of positions set in both vectors.
pub fn intersection_size(x: &Bits, y: &Bits) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::input(format!(
            "bit vectors differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(x.iter().zip(y.iter()).filter(|&(a, b)| a && b).count())
}

/// The disjointness function: true (= 1) iff no position is set in both
/// vectors. Equals the intersection function with threshold 1, negated.
pub fn disjointness(x: &Bits, y: &Bits) -> Result<bool> {
    Ok(intersection_size(x, y)? == 0)
}

/// Number of unordered pairs over `[s]`, the length of instances the
/// pair↔index bijection ranges over.
pub fn pair_count(s: usize) -> usize {
    s * (s.saturating_sub(1)) / 2
}

/// Maps the pair `(i, j)` with `1 <= i < j <= s` to its 1-based position in
/// the lexicographic enumeration of all such pairs.
///
/// Closed form: the pairs with first coordinate < i number
/// `(i-1)(2s-i)/2`, and `(i, j)` is the `(j-i)`-th pair with first
/// coordinate `i`.
pub fn pair_to_index(i: usize, j: usize, s: usize) -> Result<usize> {
    if !(1 <= i && i < j && j <= s) {
        return Err(Error::input(format!(
            "pair out of range: need 1 <= i < j <= s, got i={i}, j={j}, s={s}"
        )));
    }
    Ok((i - 1) * (2 * s - i) / 2 + (j - i))
}

/// Inverse of [`pair_to_index`]: the `p`-th pair in lexicographic order.
pub fn index_to_pair(p: usize, s: usize) -> Result<(usize, usize)> {
    let k = pair_count(s);
    if p == 0 || p > k {
        return Err(Error::input(format!(
            "pair index out of range: need 1 <= p <= s(s-1)/2 = {k}, got p={p}"
        )));
    }
    let mut rest = p;
    for i in 1..s {
        let with_first_i = s - i;
        if rest <= with_first_i {
            return Ok((i, i + rest));
        }
        rest -= with_first_i;
    }
    unreachable!("p was range-checked above")
}

/// The `i`-th least-significant bit (1-based) of `p - 1`.
///
/// This is the binary-expansion helper the eccentricity gadget uses to wire
/// node `a_p` to its helper row: index `p` in 1..=k is encoded as the integer
/// `p - 1`.
pub fn index_bit(p: usize, i: usize) -> u8 {
    assert!(p >= 1 && i >= 1, "index_bit takes 1-based arguments");
    if i as u32 > usize::BITS {
        return 0;
    }
    ((p - 1) >> (i - 1) & 1) as u8
}

/// Bits needed to distinguish the integers 0..k-1, i.e. the helper-row count
/// of the eccentricity gadget: `floor(log2(k-1)) + 1` for `k >= 2`.
pub fn helper_rows(k: usize) -> usize {
    assert!(k >= 2, "helper_rows requires k >= 2");
    (usize::BITS - (k - 1).leading_zeros()) as usize
}
