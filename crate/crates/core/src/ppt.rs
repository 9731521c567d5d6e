//! PPT witnesses for the GHZ family `(|η₁⟩ + |η₂⟩)/√2` with `η₁ + η₂ = (d-1, …, d-1)`.
//!
//! The operator is `(|λ⁻⟩⟨λ⁻|)^{T_γ}` with `|λ⁻⟩ = (|η₁^γ⟩ - |η₂^γ⟩)/√2`, whose
//! expectation reduces to `Ω = ½(ρ_{η₁^γη₁^γ} + ρ_{η₂^γη₂^γ}) - Re ρ_{η₁η₂}`.
//! It always dominates the single-pair witness term
//! `-W = √(ρ_{η₁^γη₁^γ}ρ_{η₂^γη₂^γ}) - |ρ_{η₁η₂}|`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{permute_pair, Bipartition, IndexPair, MultiIndex, Space};
use crate::states::{partial_transpose_matrix, DensityMatrix};

/// Dominance is checked with this slack.
pub const DOMINANCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PptWitness {
    eta1: MultiIndex,
    eta2: MultiIndex,
    gamma: Bipartition,
    images: (MultiIndex, MultiIndex),
    operator: DMatrix<C64>,
}

fn check_complementary(eta1: &MultiIndex, eta2: &MultiIndex) -> Result<()> {
    eta1.space().ensure_same(&eta2.space())?;
    let top = (eta1.d() - 1) as u8;
    if eta1.digits().iter().zip(eta2.digits()).any(|(a, b)| a + b != top) {
        return Err(Error::InvalidInput(format!("indices {eta1} and {eta2} do not sum to {top} in every digit")));
    }
    Ok(())
}

/// Builds `(|λ⁻⟩⟨λ⁻|)^{T_γ}` for the pair `(η₁, η₂)`.
pub fn build_ppt_witness(eta1: &MultiIndex, eta2: &MultiIndex, gamma: &Bipartition) -> Result<PptWitness> {
    check_complementary(eta1, eta2)?;
    let space = eta1.space();
    if gamma.n() != space.n {
        return Err(Error::InvalidInput(format!("bipartition {gamma} is for n = {}, indices have n = {}", gamma.n(), space.n)));
    }
    let (x, y) = permute_pair(gamma, (eta1, eta2))?;
    let dim = space.dim();
    let mut projector = DMatrix::<C64>::zeros(dim, dim);
    let half = C64::new(0.5, 0.0);
    projector[(x.rank(), x.rank())] += half;
    projector[(y.rank(), y.rank())] += half;
    projector[(x.rank(), y.rank())] -= half;
    projector[(y.rank(), x.rank())] -= half;
    let operator = partial_transpose_matrix(space, &projector, gamma)?;
    Ok(PptWitness { eta1: eta1.clone(), eta2: eta2.clone(), gamma: gamma.clone(), images: (x, y), operator })
}

impl PptWitness {
    pub fn space(&self) -> Space {
        self.eta1.space()
    }

    pub fn pair(&self) -> (&MultiIndex, &MultiIndex) {
        (&self.eta1, &self.eta2)
    }

    pub fn gamma(&self) -> &Bipartition {
        &self.gamma
    }

    /// `(η₁^γ, η₂^γ)`.
    pub fn images(&self) -> (&MultiIndex, &MultiIndex) {
        (&self.images.0, &self.images.1)
    }

    pub fn operator(&self) -> &DMatrix<C64> {
        &self.operator
    }

    /// `½(ρ_{η₁^γη₁^γ} + ρ_{η₂^γη₂^γ}) - Re ρ_{η₁η₂}` read from matrix elements.
    pub fn closed_form(&self, rho: &DensityMatrix) -> Result<f64> {
        self.space().ensure_same(&rho.space())?;
        let (x, y) = &self.images;
        Ok(0.5 * (rho.diag(x.rank()) + rho.diag(y.rank())) - rho.entry(self.eta1.rank(), self.eta2.rank()).re)
    }
}

/// `Tr(Ω ρ)`; negative values certify a negative partial transpose across `γ`.
pub fn ppt_expectation(witness: &PptWitness, rho: &DensityMatrix) -> Result<f64> {
    witness.space().ensure_same(&rho.space())?;
    Ok(rho.expectation(witness.operator()).re)
}

/// Both sides of `-W ≤ Ω` for one pair and bipartition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PptComparison {
    pub omega: f64,
    pub minus_w: f64,
    pub dominance: bool,
}

pub fn compare_with_wr(eta1: &MultiIndex, eta2: &MultiIndex, gamma: &Bipartition, rho: &DensityMatrix) -> Result<PptComparison> {
    let witness = build_ppt_witness(eta1, eta2, gamma)?;
    let omega = ppt_expectation(&witness, rho)?;
    let (x, y) = witness.images();
    let minus_w = (rho.diag(x.rank()).max(0.0) * rho.diag(y.rank()).max(0.0)).sqrt() - rho.entry(eta1.rank(), eta2.rank()).norm();
    Ok(PptComparison { omega, minus_w, dominance: minus_w <= omega + DOMINANCE_TOL })
}

/// Every unordered pair `(η, η̄)` with `η + η̄ = (d-1, …, d-1)`, smaller index first.
pub fn ghz_family_pairs(space: Space) -> Vec<IndexPair> {
    let top = (space.d - 1) as u8;
    space
        .indices()
        .filter_map(|eta| {
            let partner = MultiIndex::new(eta.digits().iter().map(|&g| top - g).collect(), space.d).ok()?;
            (eta < partner).then(|| IndexPair::new(eta, partner).ok()).flatten()
        })
        .collect()
}
