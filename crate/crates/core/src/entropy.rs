//! Reduced linear entropies and the pure-state measure `E_m`.
//!
//! Two independent routes compute `S_L(ρ_γ) = 2(1 - Tr ρ_γ²)`:
//! [`linear_entropy_trace`] forms the reduced matrix explicitly, while
//! [`linear_entropy_coeff`] sums `|c_{η₁}c_{η₂} - c_{η₁^γ}c_{η₂^γ}|²` over ordered
//! pairs of basis vectors. The second form is the one the witnesses are built
//! from; the first exists to check it.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{enumerate_bipartitions, permute_ranks, Bipartition};
use crate::states::{partial_trace, PureState};

/// Linear entropy of one bipartition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartitionEntropy {
    #[serde(serialize_with = "crate::io::serialize_display")]
    pub gamma: Bipartition,
    pub linear_entropy: f64,
}

/// Full entropy profile of a pure state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub entries: Vec<BipartitionEntropy>,
    #[serde(serialize_with = "crate::io::serialize_display")]
    pub minimizing: Bipartition,
    pub em: f64,
}

/// `2(1 - Tr ρ_γ²)` through the explicit partial trace.
pub fn linear_entropy_trace(psi: &PureState, gamma: &Bipartition) -> Result<f64> {
    let reduced = partial_trace(&psi.projector(), gamma)?;
    Ok((2.0 * (1.0 - reduced.purity())).max(0.0))
}

/// `Σ_{η₁≠η₂} |c_{η₁}c_{η₂} - c_{η₁^γ}c_{η₂^γ}|²`, summed over ordered pairs.
///
/// Only pairs inside the support or mapped into it by `P_γ` can contribute, so
/// the cost is quadratic in the support size.
pub fn linear_entropy_coeff(psi: &PureState, gamma: &Bipartition) -> Result<f64> {
    let space = psi.space();
    if gamma.n() != space.n {
        return Err(Error::InvalidInput(format!("bipartition {gamma} is for n = {}, state has n = {}", gamma.n(), space.n)));
    }
    let positions: Vec<usize> = gamma.positions().collect();
    let support: Vec<usize> = psi.support_ranks().map(|(r, _)| r).collect();
    let mut terms: HashSet<(usize, usize)> = HashSet::new();
    for &a in &support {
        for &b in &support {
            if a != b {
                terms.insert((a, b));
                terms.insert(permute_ranks(a, b, &positions, space.d, space.n));
            }
        }
    }
    let mut ordered: Vec<(usize, usize)> = terms.into_iter().filter(|(a, b)| a != b).collect();
    ordered.sort_unstable();
    let sum: f64 = ordered
        .iter()
        .map(|&(a, b)| {
            let (x, y) = permute_ranks(a, b, &positions, space.d, space.n);
            (psi.amplitude_at(a) * psi.amplitude_at(b) - psi.amplitude_at(x) * psi.amplitude_at(y)).norm_sqr()
        })
        .sum();
    Ok(sum.max(0.0))
}

/// `E_m(|ψ⟩⟨ψ|) = min_γ √S_L(ρ_γ)` together with every bipartition's entropy.
pub fn gme_measure_pure(psi: &PureState) -> Result<EntropyReport> {
    let bipartitions = enumerate_bipartitions(psi.space().n)?;
    let entries = bipartitions
        .into_iter()
        .map(|gamma| Ok(BipartitionEntropy { linear_entropy: linear_entropy_coeff(psi, &gamma)?, gamma }))
        .collect::<Result<Vec<_>>>()?;
    // First minimum in canonical order wins ties.
    let best = entries
        .iter()
        .fold(&entries[0], |best, e| if e.linear_entropy < best.linear_entropy { e } else { best });
    Ok(EntropyReport { minimizing: best.gamma.clone(), em: best.linear_entropy.sqrt(), entries: entries.clone() })
}

/// Rényi-2 entropy `-log₂((2 - S_L)/2)` of a reduced state with linear entropy `s_l`.
pub fn renyi2_from_linear(s_l: f64) -> Result<f64> {
    if !(0.0..2.0).contains(&s_l) {
        return Err(Error::InvalidInput(format!("linear entropy {s_l} outside [0, 2)")));
    }
    Ok(-((2.0 - s_l) / 2.0).log2())
}
