//! The Dicke-state witness `Q_m^(d)`, dimensionality certificates and the
//! bridge from `Q` to a bound on `E_m`.
//!
//! ```text
//! Q_m^(d)(ρ) = 1/m [ Σ_{l,l'} Σ_{(α,β)∈σ} ( |⟨α^l|ρ|β^l'⟩| - Σ_{δ∈Δ} √(⟨φ₁|ρ|φ₁⟩⟨φ₂|ρ|φ₂⟩) )
//!                    - N_D Σ_l Σ_α ⟨α^l|ρ|α^l⟩ ]
//! ```
//!
//! where `σ` holds the pairs of `m`-subsets overlapping in `m-1` parties,
//! `N_D = (d-1)m(n-m-1)` and `(φ₁, φ₂)` is `(α^l, β^l')` with the digits of one
//! party `δ` exchanged. The two-copy expectation `⟨φ₁φ₂|ρ⊗ρ|φ₁φ₂⟩` factorizes
//! into two diagonal elements because the swap is a pure index permutation.
//!
//! The party ranges for `δ` are `α` when `l' = l`, the complement of `α\β`
//! when `l' < l`, and the complement of `β\α` when `l' > l`. Swaps that give
//! back the same unordered pair are skipped and repeated images counted once.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{IndexPair, MultiIndex, Space};
use crate::states::{excitation_index, subsets_of_size};
use crate::witness::{compile, ElementSource, NrVariant, PairSet};

/// Whether `σ` runs over ordered or unordered subset pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaOrder {
    /// Both `(α, β)` and `(β, α)`; this is the reading that gives `Q = d-1` on
    /// Dicke states.
    #[default]
    Ordered,
    /// Each subset pair once, `α < β` lexicographically.
    Unordered,
}

/// One `(α^l, β^l')` term of the witness.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeTerm {
    pub row: MultiIndex,
    pub col: MultiIndex,
    /// Images `P_δ(α^l, β^l')`, one per distinct nontrivial swap.
    pub images: Vec<(MultiIndex, MultiIndex)>,
}

/// Parameters of `Q_m^(d)` with its terms laid out.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeWitnessSpec {
    space: Space,
    m: usize,
    order: SigmaOrder,
    sigma: Vec<(Vec<usize>, Vec<usize>)>,
    terms: Vec<DickeTerm>,
    diagonal: Vec<MultiIndex>,
}

fn swap_party(a: &MultiIndex, b: &MultiIndex, party: usize) -> Result<(MultiIndex, MultiIndex)> {
    let (mut x, mut y) = (a.digits().to_vec(), b.digits().to_vec());
    std::mem::swap(&mut x[party - 1], &mut y[party - 1]);
    Ok((MultiIndex::new(x, a.d())?, MultiIndex::new(y, a.d())?))
}

impl DickeWitnessSpec {
    pub fn new(n: usize, d: usize, m: usize) -> Result<Self> {
        Self::with_order(n, d, m, SigmaOrder::Ordered)
    }

    pub fn with_order(n: usize, d: usize, m: usize, order: SigmaOrder) -> Result<Self> {
        let space = Space::new(n, d)?;
        if m == 0 || m > n / 2 {
            return Err(Error::InvalidInput(format!("excitation count m = {m} must lie in 1..={}", n / 2)));
        }
        let subsets = subsets_of_size(n, m);
        let mut sigma = Vec::new();
        for (i, alpha) in subsets.iter().enumerate() {
            for (j, beta) in subsets.iter().enumerate() {
                let overlap = alpha.iter().filter(|p| beta.contains(p)).count();
                let keep = match order {
                    SigmaOrder::Ordered => i != j,
                    SigmaOrder::Unordered => i < j,
                };
                if keep && overlap == m - 1 {
                    sigma.push((alpha.clone(), beta.clone()));
                }
            }
        }

        let mut terms = Vec::new();
        for l in 0..d - 1 {
            for lp in 0..d - 1 {
                for (alpha, beta) in &sigma {
                    let row = excitation_index(space, alpha, l)?;
                    let col = excitation_index(space, beta, lp)?;
                    let parties: Vec<usize> = match lp.cmp(&l) {
                        std::cmp::Ordering::Equal => alpha.clone(),
                        std::cmp::Ordering::Less => (1..=n).filter(|p| !(alpha.contains(p) && !beta.contains(p))).collect(),
                        std::cmp::Ordering::Greater => (1..=n).filter(|p| !(beta.contains(p) && !alpha.contains(p))).collect(),
                    };
                    let mut images: Vec<(MultiIndex, MultiIndex)> = Vec::new();
                    for party in parties {
                        let (x, y) = swap_party(&row, &col, party)?;
                        let trivial = (x == row && y == col) || (x == col && y == row);
                        let seen = images.iter().any(|(u, v)| (*u == x && *v == y) || (*u == y && *v == x));
                        if !trivial && !seen {
                            images.push((x, y));
                        }
                    }
                    terms.push(DickeTerm { row, col, images });
                }
            }
        }

        let diagonal = (0..d - 1)
            .flat_map(|l| subsets.iter().map(move |alpha| (alpha, l)))
            .map(|(alpha, l)| excitation_index(space, alpha, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(DickeWitnessSpec { space, m, order, sigma, terms, diagonal })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn d(&self) -> usize {
        self.space.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> SigmaOrder {
        self.order
    }

    /// `N_D = (d-1)m(n-m-1)`.
    pub fn n_d(&self) -> usize {
        (self.d() - 1) * self.m * (self.n() - self.m - 1)
    }

    pub fn sigma(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.sigma
    }

    pub fn terms(&self) -> &[DickeTerm] {
        &self.terms
    }

    /// The indices `α^l` entering the `N_D` penalty.
    pub fn diagonal(&self) -> &[MultiIndex] {
        &self.diagonal
    }

    /// False for two qudits with `d > 2`: there `N_D = 0` and the cross-level
    /// terms are single-party coherences no swap can penalize, so product
    /// states such as `|1⟩(|0⟩+|2⟩)/√2` reach `Q = 1`.
    pub fn is_sound_regime(&self) -> bool {
        self.n() > 2 || self.d() == 2
    }

    /// `|R_σ| = ½(d-1)²C(n,m)m(n-m)`.
    pub fn r_sigma_size(&self) -> usize {
        let (n, d, m) = (self.n(), self.d(), self.m);
        (d - 1) * (d - 1) * binomial(n, m) * m * (n - m) / 2
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `Q_m^(d)(ρ)`.
pub fn q_witness(spec: &DickeWitnessSpec, rho: &impl ElementSource) -> Result<f64> {
    spec.space().ensure_same(&rho.space())?;
    let diag = |eta: &MultiIndex| rho.diag(eta.rank()).max(0.0);
    let mut sum = 0.0;
    for term in &spec.terms {
        sum += rho.element(term.row.rank(), term.col.rank()).norm();
        for (x, y) in &term.images {
            sum -= (diag(x) * diag(y)).sqrt();
        }
    }
    let population: f64 = spec.diagonal.iter().map(diag).sum();
    Ok((sum - spec.n_d() as f64 * population) / spec.m as f64)
}

/// Largest `f` with `q > f - 2 + tol`, and at least 1.
pub fn dimensionality_certificate(q: f64, tol: f64) -> usize {
    if !q.is_finite() {
        return 1;
    }
    let f = (q + 2.0 - tol).ceil() - 1.0;
    if f < 1.0 {
        1
    } else {
        f as usize
    }
}

/// `E_m` bounds obtained from a value of `Q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmBound {
    /// `|R_σ|` from the closed form.
    pub r_sigma_size: usize,
    /// `m√(1/|R_σ|)·q`.
    pub weak: f64,
    /// `N_{R_σ}` of the materialized selection, when it compiles.
    pub n_r: Option<usize>,
    /// `m√(1/(|R_σ| - N_{R_σ}))·q`, when `R_σ` compiles.
    pub strong: Option<f64>,
}

/// Bounds on `E_m` implied by `q = Q_m^(d)(ρ)`.
pub fn em_bound_from_q(spec: &DickeWitnessSpec, q: f64, variant: NrVariant) -> Result<EmBound> {
    let size = spec.r_sigma_size();
    let m = spec.m as f64;
    let weak = m * (1.0 / size as f64).sqrt() * q;
    let compiled = materialize_r_sigma(spec).and_then(|r| compile(&r, variant)).ok();
    let n_r = compiled.as_ref().map(|w| w.n_r());
    let strong = n_r.map(|n_r| m * (1.0 / (size - n_r) as f64).sqrt() * q);
    Ok(EmBound { r_sigma_size: size, weak, n_r, strong })
}

/// `R_σ = {(α^a, β^b) : (α, β) ∈ σ, a ≤ b}` as a pair selection.
pub fn materialize_r_sigma(spec: &DickeWitnessSpec) -> Result<PairSet> {
    let space = spec.space();
    let subsets = subsets_of_size(space.n, spec.m);
    let mut pairs = BTreeSet::new();
    for alpha in &subsets {
        for beta in &subsets {
            let overlap = alpha.iter().filter(|p| beta.contains(p)).count();
            if alpha == beta || overlap != spec.m - 1 {
                continue;
            }
            for a in 0..space.d - 1 {
                for b in a..space.d - 1 {
                    pairs.insert(IndexPair::new(excitation_index(space, alpha, a)?, excitation_index(space, beta, b)?)?);
                }
            }
        }
    }
    PairSet::new(space, pairs)
}
