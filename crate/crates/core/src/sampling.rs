//! Seeded random states for property checks and sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::indices::{Bipartition, MultiIndex, Space};
use crate::states::{DensityMatrix, PureState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A complex number with independent standard normal parts.
pub fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn complex_vector(rng: &mut impl Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// Unitarily invariant random pure state.
pub fn random_pure(rng: &mut impl Rng, space: Space) -> PureState {
    let amps = complex_vector(rng, space.dim());
    PureState::normalized(space, amps.into_iter().enumerate().map(|(r, c)| (MultiIndex::from_rank(r, space), c)))
        .expect("nonzero with probability one")
}

/// Random pure state supported on `k` distinct basis vectors.
pub fn random_sparse_pure(rng: &mut impl Rng, space: Space, k: usize) -> PureState {
    let ranks = rand::seq::index::sample(rng, space.dim(), k.clamp(1, space.dim()));
    let amps: Vec<_> = ranks.iter().map(|r| (MultiIndex::from_rank(r, space), complex_normal(rng))).collect();
    PureState::normalized(space, amps).expect("nonzero with probability one")
}

/// `target + eps·noise`, renormalized.
pub fn random_near(rng: &mut impl Rng, target: &PureState, eps: f64) -> PureState {
    let space = target.space();
    let amps: Vec<_> = (0..space.dim())
        .map(|r| (MultiIndex::from_rank(r, space), target.amplitude_at(r) + complex_normal(rng) * eps))
        .collect();
    PureState::normalized(space, amps).expect("nonzero with probability one")
}

/// Random pure state that is a product across `gamma`.
pub fn random_product_across(rng: &mut impl Rng, space: Space, gamma: &Bipartition) -> PureState {
    let inside: Vec<usize> = gamma.positions().collect();
    let outside: Vec<usize> = (0..space.n).filter(|p| !inside.contains(p)).collect();
    let u = complex_vector(rng, space.d.pow(inside.len() as u32));
    let v = complex_vector(rng, space.d.pow(outside.len() as u32));
    let sub = |eta: &MultiIndex, positions: &[usize]| positions.iter().fold(0, |acc, &p| acc * space.d + eta.digits()[p] as usize);
    let amps: Vec<_> = space
        .indices()
        .map(|eta| {
            let c = u[sub(&eta, &inside)] * v[sub(&eta, &outside)];
            (eta, c)
        })
        .collect();
    PureState::normalized(space, amps).expect("nonzero with probability one")
}

/// Random product of single-party pure states.
pub fn random_full_product(rng: &mut impl Rng, space: Space) -> PureState {
    let locals: Vec<Vec<C64>> = (0..space.n).map(|_| complex_vector(rng, space.d)).collect();
    let amps: Vec<_> = space
        .indices()
        .map(|eta| {
            let c = eta.digits().iter().zip(&locals).map(|(&g, l)| l[g as usize]).product();
            (eta, c)
        })
        .collect();
    PureState::normalized(space, amps).expect("nonzero with probability one")
}

/// Random mixture of up to `max_terms` states each product across a random bipartition.
pub fn random_biseparable(rng: &mut impl Rng, space: Space, max_terms: usize) -> Result<DensityMatrix> {
    let bipartitions = crate::indices::enumerate_bipartitions(space.n)?;
    let terms = rng.random_range(1..=max_terms.max(1));
    let components: Vec<(f64, DensityMatrix)> = (0..terms)
        .map(|_| {
            let gamma = &bipartitions[rng.random_range(0..bipartitions.len())];
            (rng.random::<f64>() + 1e-3, random_product_across(rng, space, gamma).projector())
        })
        .collect();
    mix(components)
}

/// Random mixture of up to `max_terms` fully product pure states.
pub fn random_separable(rng: &mut impl Rng, space: Space, max_terms: usize) -> Result<DensityMatrix> {
    let terms = rng.random_range(1..=max_terms.max(1));
    let components: Vec<(f64, DensityMatrix)> =
        (0..terms).map(|_| (rng.random::<f64>() + 1e-3, random_full_product(rng, space).projector())).collect();
    mix(components)
}

fn mix(mut components: Vec<(f64, DensityMatrix)>) -> Result<DensityMatrix> {
    let total: f64 = components.iter().map(|(w, _)| w).sum();
    components.iter_mut().for_each(|(w, _)| *w /= total);
    DensityMatrix::mixture(&components)
}

/// Random density matrix `GG†/Tr(GG†)` with a `dim × rank` Ginibre matrix `G`.
pub fn random_density(rng: &mut impl Rng, space: Space, rank: usize) -> DensityMatrix {
    let dim = space.dim();
    let g = DMatrix::from_fn(dim, rank.clamp(1, dim), |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    DensityMatrix::new(space, m / C64::new(trace, 0.0)).expect("Ginibre construction is a state")
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..d {
        let phase = r[(j, j)] / r[(j, j)].norm();
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::linear_entropy_trace;

    #[test]
    fn seeded_draws_repeat() {
        let space = Space::new(3, 2).unwrap();
        assert_eq!(random_pure(&mut rng(7), space), random_pure(&mut rng(7), space));
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(&mut rng(1), 3);
        let err = (&u * u.adjoint() - DMatrix::<C64>::identity(3, 3)).norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn product_states_have_pure_cut() {
        let space = Space::new(4, 3).unwrap();
        let gamma = Bipartition::new(&[1, 3], 4).unwrap();
        let psi = random_product_across(&mut rng(3), space, &gamma);
        assert!(linear_entropy_trace(&psi, &gamma).unwrap() < 1e-12);
    }

    #[test]
    fn density_is_valid() {
        let rho = random_density(&mut rng(5), Space::new(2, 3).unwrap(), 3);
        assert!(rho.min_eigenvalue() > -1e-12);
        assert_eq!(random_sparse_pure(&mut rng(2), Space::new(3, 3).unwrap(), 4).support_len(), 4);
    }
}
