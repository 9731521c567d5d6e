//! Pair selections for the named states.

use crate::error::Result;
use crate::indices::{IndexPair, MultiIndex, Space};
use crate::witness::PairSet;

/// `{(001,100), (001,010), (010,100)}` for the three-qubit W state.
pub fn w_pairs() -> PairSet {
    PairSet::from_strs(Space { n: 3, d: 2 }, &[("001", "100"), ("001", "010"), ("010", "100")]).expect("valid pairs")
}

/// The four pairs through `0011` used for the four-qubit singlet.
pub fn singlet4_pairs() -> PairSet {
    PairSet::from_strs(
        Space { n: 4, d: 2 },
        &[("0011", "0101"), ("0011", "1010"), ("0011", "0110"), ("0011", "1001")],
    )
    .expect("valid pairs")
}

/// The single pair `(0…0, (d-1)…(d-1))`.
pub fn ghz_pairs(n: usize, d: usize) -> Result<PairSet> {
    let space = Space::new(n, d)?;
    let pair = IndexPair::new(MultiIndex::from_rank(0, space), MultiIndex::from_rank(space.dim() - 1, space))?;
    PairSet::new(space, [pair])
}
