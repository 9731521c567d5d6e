#![allow(dead_code)]

use gmebound::sampling::{random_near, random_pure, random_sparse_pure};
use gmebound::{make_dicke_state, make_ghz_default, make_singlet4, make_w_state, MultiIndex, PureState, Space};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

/// The small spaces used by the randomized suites.
pub const SPACES: [(usize, usize); 6] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)];

pub fn space(n: usize, d: usize) -> Space {
    Space::new(n, d).unwrap()
}

/// Named states living on `space`, used as centers for perturbed samples.
pub fn anchors(space: Space) -> Vec<PureState> {
    let (n, d) = (space.n, space.d);
    let mut out = vec![make_ghz_default(n, d).unwrap()];
    for m in 1..n {
        out.push(make_dicke_state(n, d, m).unwrap());
    }
    if (n, d) == (3, 2) {
        out.push(make_w_state());
    }
    if (n, d) == (4, 2) {
        out.push(make_singlet4());
    }
    out
}

/// Cycles through dense, sparse and near-anchor draws.
pub fn mixed_draw(rng: &mut impl Rng, i: usize) -> PureState {
    let (n, d) = SPACES[i % SPACES.len()];
    let sp = space(n, d);
    match (i / SPACES.len()) % 3 {
        0 => random_pure(rng, sp),
        1 => {
            let k = rng.random_range(3..=6);
            random_sparse_pure(rng, sp, k)
        }
        _ => {
            let anchors = anchors(sp);
            let target = &anchors[rng.random_range(0..anchors.len())];
            let eps = rng.random_range(0.0..0.3);
            random_near(rng, target, eps)
        }
    }
}

/// Relabels parties: digit `p` of the output is digit `perm[p]` of the input.
pub fn relabel_index(eta: &MultiIndex, perm: &[usize]) -> MultiIndex {
    MultiIndex::new(perm.iter().map(|&p| eta.digits()[p]).collect(), eta.d()).unwrap()
}

pub fn relabel_matrix(m: &DMatrix<C64>, space: Space, perm: &[usize]) -> DMatrix<C64> {
    let map: Vec<usize> = (0..space.dim()).map(|r| relabel_index(&MultiIndex::from_rank(r, space), perm).rank()).collect();
    let mut out = DMatrix::<C64>::zeros(space.dim(), space.dim());
    for r in 0..space.dim() {
        for c in 0..space.dim() {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    out
}
