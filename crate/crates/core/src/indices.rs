//! Multi-index arithmetic over `n` qudits of local dimension `d`.
//!
//! A computational basis vector `|i₁ i₂ … iₙ⟩` is a [`MultiIndex`]. Its rank is
//! the big-endian base-`d` integer of the digit string, so party 1 is the most
//! significant digit and `"001"` has rank 1 for qubits. Parties are labelled
//! from 1 throughout, ranks from 0.
//!
//! The workhorse is [`permute_pair`]: given a bipartition `γ` and two basis
//! vectors, it exchanges the digits of the two vectors at every party in `γ`.
//! Every linear-entropy and witness formula in this crate is phrased through it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Party count and local dimension shared by every object on the same space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Space {
    pub n: usize,
    pub d: usize,
}

impl Space {
    /// Largest total dimension handled by the dense routines.
    pub const MAX_DIM: usize = 1 << 16;

    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("party count n must be at least 1".into()));
        }
        if !(2..=255).contains(&d) {
            return Err(Error::InvalidInput(format!("local dimension d = {d} must lie in [2, 255]")));
        }
        let dim = d
            .checked_pow(n as u32)
            .filter(|&dim| dim <= Self::MAX_DIM)
            .ok_or_else(|| Error::InvalidInput(format!("d^n = {d}^{n} exceeds {}", Self::MAX_DIM)))?;
        debug_assert!(dim >= 2);
        Ok(Space { n, d })
    }

    /// Total Hilbert-space dimension `d^n`.
    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn ensure_same(&self, other: &Space) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch { expected_n: self.n, expected_d: self.d, n: other.n, d: other.d })
        }
    }

    /// All basis vectors in rank order.
    pub fn indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.dim()).map(move |r| MultiIndex::from_rank(r, *self))
    }
}

/// A computational basis vector, stored as its digit string.
///
/// Ordering is lexicographic on the digits, which coincides with rank order for
/// indices on the same space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    digits: Vec<u8>,
    d: u8,
}

impl MultiIndex {
    pub fn new(digits: Vec<u8>, d: usize) -> Result<Self> {
        Space::new(digits.len(), d)?;
        if let Some(&bad) = digits.iter().find(|&&x| x as usize >= d) {
            return Err(Error::InvalidInput(format!("digit {bad} is not below d = {d}")));
        }
        Ok(MultiIndex { digits, d: d as u8 })
    }

    /// Parses a bare digit string such as `"0011"` on a known space.
    pub fn parse(s: &str, space: Space) -> Result<Self> {
        let s = s.trim();
        if s.chars().count() != space.n {
            return Err(Error::Parse(format!("index {s:?} has length {} but n = {}", s.chars().count(), space.n)));
        }
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .filter(|&v| (v as usize) < space.d)
                    .map(|v| v as u8)
                    .ok_or_else(|| Error::Parse(format!("index {s:?}: digit {c:?} is not below d = {}", space.d)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiIndex { digits, d: space.d as u8 })
    }

    pub fn from_rank(mut rank: usize, space: Space) -> Self {
        let mut digits = vec![0u8; space.n];
        for slot in digits.iter_mut().rev() {
            *slot = (rank % space.d) as u8;
            rank /= space.d;
        }
        debug_assert_eq!(rank, 0, "rank out of range");
        MultiIndex { digits, d: space.d as u8 }
    }

    pub fn rank(&self) -> usize {
        let d = self.d as usize;
        self.digits.iter().fold(0, |acc, &x| acc * d + x as usize)
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn d(&self) -> usize {
        self.d as usize
    }

    pub fn space(&self) -> Space {
        Space { n: self.n(), d: self.d() }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Digit of a 1-based party.
    pub fn digit(&self, party: usize) -> u8 {
        self.digits[party - 1]
    }

    /// Same digit string viewed on a space with a larger local dimension.
    pub fn embed(&self, d: usize) -> Result<Self> {
        MultiIndex::new(self.digits.clone(), d)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.digits {
            write!(f, "{}", std::char::from_digit(x as u32, 36).unwrap_or('?'))?;
        }
        Ok(())
    }
}

/// A bipartition `γ|γ̄`, stored as the side that contains party 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    // Sorted 1-based party labels, always containing party 1.
    parties: Vec<usize>,
    n: usize,
}

impl Bipartition {
    /// Builds the canonical bipartition from either side of the split.
    pub fn new(parties: &[usize], n: usize) -> Result<Self> {
        let mut side: Vec<usize> = parties.to_vec();
        side.sort_unstable();
        side.dedup();
        if side.len() != parties.len() {
            return Err(Error::InvalidInput(format!("repeated party in {parties:?}")));
        }
        if let Some(&p) = side.iter().find(|&&p| p == 0 || p > n) {
            return Err(Error::InvalidInput(format!("party {p} outside 1..={n}")));
        }
        if side.is_empty() || side.len() >= n {
            return Err(Error::InvalidInput(format!("{parties:?} is not a proper nonempty subset of 1..={n}")));
        }
        if side[0] != 1 {
            side = (1..=n).filter(|p| !side.contains(p)).collect();
        }
        Ok(Bipartition { parties: side, n })
    }

    /// Parses a comma separated party list such as `"1,3"`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let parties = s
            .split(',')
            .map(|t| t.trim().trim_matches(|c| c == '{' || c == '}').parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("bipartition {s:?}: {e}")))?;
        Bipartition::new(&parties, n)
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn contains(&self, party: usize) -> bool {
        self.parties.binary_search(&party).is_ok()
    }

    /// Parties on the other side of the split.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|&p| !self.contains(p)).collect()
    }

    /// 0-based digit positions of the canonical side.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.parties.iter().map(|p| p - 1)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.parties.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// An unordered pair of distinct basis vectors, smaller index first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexPair {
    first: MultiIndex,
    second: MultiIndex,
}

impl IndexPair {
    pub fn new(a: MultiIndex, b: MultiIndex) -> Result<Self> {
        a.space().ensure_same(&b.space())?;
        if a == b {
            return Err(Error::InvalidInput(format!("pair ({a}, {b}) has equal indices")));
        }
        Ok(if a < b { IndexPair { first: a, second: b } } else { IndexPair { first: b, second: a } })
    }

    pub fn parse(a: &str, b: &str, space: Space) -> Result<Self> {
        IndexPair::new(MultiIndex::parse(a, space)?, MultiIndex::parse(b, space)?)
    }

    pub fn first(&self) -> &MultiIndex {
        &self.first
    }

    pub fn second(&self) -> &MultiIndex {
        &self.second
    }

    pub fn space(&self) -> Space {
        self.first.space()
    }

    pub fn as_tuple(&self) -> (MultiIndex, MultiIndex) {
        (self.first.clone(), self.second.clone())
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Exchanges the digits at every party of `gamma` between the two indices.
///
/// The output keeps the input order: the first returned index descends from
/// `pair.0`.
pub fn permute_pair(gamma: &Bipartition, pair: (&MultiIndex, &MultiIndex)) -> Result<(MultiIndex, MultiIndex)> {
    let (a, b) = pair;
    a.space().ensure_same(&b.space())?;
    if gamma.n() != a.n() {
        return Err(Error::InvalidInput(format!("bipartition {gamma} is for n = {}, indices have n = {}", gamma.n(), a.n())));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    for pos in gamma.positions() {
        std::mem::swap(&mut x.digits[pos], &mut y.digits[pos]);
    }
    Ok((x, y))
}

/// Whether `gamma` maps the pair onto itself as an unordered pair.
///
/// Such pairs contribute nothing to the `γ`-reduced linear entropy.
pub fn pair_is_fixed(gamma: &Bipartition, pair: &IndexPair) -> Result<bool> {
    let (x, y) = permute_pair(gamma, (pair.first(), pair.second()))?;
    Ok((x == pair.first && y == pair.second) || (x == pair.second && y == pair.first))
}

/// All `2^(n-1) - 1` canonical bipartitions, ordered by size and then
/// lexicographically.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("bipartitions need n >= 2, got {n}")));
    }
    if n > 20 {
        return Err(Error::InvalidInput(format!("n = {n} is too large to enumerate bipartitions")));
    }
    let mut out = Vec::with_capacity((1 << (n - 1)) - 1);
    for size in 1..n {
        let mut rest = Vec::new();
        combinations(&(2..=n).collect::<Vec<_>>(), size - 1, 0, &mut rest, &mut |combo| {
            let mut parties = vec![1];
            parties.extend_from_slice(combo);
            out.push(Bipartition { parties, n });
        });
    }
    Ok(out)
}

/// Calls `visit` on every `k`-subset of `items` in lexicographic order.
pub(crate) fn combinations<T: Copy>(items: &[T], k: usize, start: usize, acc: &mut Vec<T>, visit: &mut impl FnMut(&[T])) {
    if acc.len() == k {
        visit(acc);
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - acc.len() {
            break;
        }
        acc.push(items[i]);
        combinations(items, k, i + 1, acc, visit);
        acc.pop();
    }
}

/// Rank-level pair permutation used by the hot evaluation paths.
///
/// `positions` are 0-based digit positions, `weights[pos]` is `d^(n-1-pos)`.
pub(crate) fn permute_ranks(a: usize, b: usize, positions: &[usize], d: usize, n: usize) -> (usize, usize) {
    let (mut x, mut y) = (a, b);
    for &pos in positions {
        let w = d.pow((n - 1 - pos) as u32);
        let da = (a / w) % d;
        let db = (b / w) % d;
        if da != db {
            x = x - da * w + db * w;
            y = y - db * w + da * w;
        }
    }
    (x, y)
}

impl FromStr for Space {
    type Err = Error;

    /// Parses `"n,d"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected \"n,d\", got {s:?}")));
        }
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        Space::new(parse(parts[0])?, parse(parts[1])?)
    }
}
