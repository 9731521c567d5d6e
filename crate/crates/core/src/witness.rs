//! Nonlinear GME witnesses compiled from a selection of coefficient pairs.
//!
//! Given a set `R` of basis-vector pairs, [`compile`] derives everything the
//! witness needs:
//!
//! * `R^γ`, the pairs of `R` that a bipartition `γ` maps onto themselves,
//! * `N_R`, the minimum or maximum of `|R^γ|` over bipartitions,
//! * for every pair, the bipartitions `Γ(η₁, η₂)` whose swap image leaves `R`,
//!   and the distinct images `(η₁^γ, η₂^γ)` they produce,
//! * `I(R)` and the diagonal weights `N_η`.
//!
//! [`CompiledWitness::evaluate`] then returns
//!
//! ```text
//! W_R(ρ) = 2/√(|R| - N_R) · [ Σ_{(η₁,η₂)∈R} ( |ρ_{η₁η₂}| - Σ_images √(ρ_{η₁^γη₁^γ} ρ_{η₂^γη₂^γ}) )
//!                             - ½ Σ_{η∈I(R)} N_η ρ_{ηη} ]
//! ```
//!
//! which is nonpositive on every biseparable state and bounds `E_m(ρ)` from
//! below. The bound counts each pair once per orbit of the bipartition swap,
//! so two pairs of `R` that are swap images of each other are rejected.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{enumerate_bipartitions, pair_is_fixed, permute_pair, Bipartition, IndexPair, MultiIndex, Space};
use crate::states::{make_isotropic, make_max_entangled, DensityMatrix, PureState};

/// Read access to density-matrix entries by rank.
pub trait ElementSource {
    fn space(&self) -> Space;
    fn element(&self, row: usize, col: usize) -> C64;
    fn diag(&self, rank: usize) -> f64 {
        self.element(rank, rank).re
    }
}

impl ElementSource for DensityMatrix {
    fn space(&self) -> Space {
        DensityMatrix::space(self)
    }

    fn element(&self, row: usize, col: usize) -> C64 {
        self.entry(row, col)
    }
}

/// A canonical, duplicate-free set of index pairs on one space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    space: Space,
    pairs: Vec<IndexPair>,
}

impl PairSet {
    /// Sorts the pairs canonically; duplicates and mixed spaces are errors.
    pub fn new(space: Space, pairs: impl IntoIterator<Item = IndexPair>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for pair in pairs {
            space.ensure_same(&pair.space())?;
            let shown = pair.to_string();
            if !seen.insert(pair) {
                return Err(Error::InvalidInput(format!("duplicate pair {shown}")));
            }
        }
        Ok(PairSet { space, pairs: seen.into_iter().collect() })
    }

    /// Convenience constructor from digit strings.
    pub fn from_strs(space: Space, pairs: &[(&str, &str)]) -> Result<Self> {
        let parsed = pairs.iter().map(|(a, b)| IndexPair::parse(a, b, space)).collect::<Result<Vec<_>>>()?;
        PairSet::new(space, parsed)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn pairs(&self) -> &[IndexPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: &IndexPair) -> bool {
        self.pairs.binary_search(pair).is_ok()
    }
}

/// How `N_R` is taken over bipartitions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NrVariant {
    /// `N_R = min_γ |R^γ|`.
    #[default]
    Minimal,
    /// `N_R = max_γ |R^γ|`; each bipartition sums only `|R| - N_R` pairs.
    Maximal,
}

impl FromStr for NrVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimal" => Ok(NrVariant::Minimal),
            "max" | "maximal" => Ok(NrVariant::Maximal),
            other => Err(Error::Parse(format!("unknown N_R variant {other:?} (expected min or max)"))),
        }
    }
}

impl fmt::Display for NrVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NrVariant::Minimal => "min",
            NrVariant::Maximal => "max",
        })
    }
}

/// One pair of `R` with its penalty terms.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessTerm {
    pub pair: IndexPair,
    /// `Γ(η₁, η₂)`: bipartitions whose swap image of the pair is not in `R`.
    pub gamma_set: Vec<Bipartition>,
    /// Distinct unordered images `(η₁^γ, η₂^γ)` over `Γ(η₁, η₂)`.
    pub images: Vec<IndexPair>,
}

/// A pair and its noise images, as matrix ranks.
type RankTerm = ((usize, usize), Vec<(usize, usize)>);

/// A selection `R` together with every derived quantity of the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledWitness {
    pairs: PairSet,
    variant: NrVariant,
    n_r: usize,
    terms: Vec<WitnessTerm>,
    index_set: Vec<MultiIndex>,
    n_eta: BTreeMap<MultiIndex, usize>,
    prefactor: f64,
    // Rank-level copies for evaluation.
    rank_terms: Vec<RankTerm>,
    rank_diag: Vec<(usize, usize)>,
}

/// Every non-fixed swap image of a pair, keyed by the bipartition producing it.
fn swap_images(pair: &IndexPair, bipartitions: &[Bipartition]) -> Result<Vec<(Bipartition, Option<IndexPair>)>> {
    bipartitions
        .iter()
        .map(|gamma| {
            if pair_is_fixed(gamma, pair)? {
                Ok((gamma.clone(), None))
            } else {
                let (x, y) = permute_pair(gamma, (pair.first(), pair.second()))?;
                Ok((gamma.clone(), Some(IndexPair::new(x, y)?)))
            }
        })
        .collect()
}

/// Compiles `R` into a witness.
///
/// Fails when `|R| = N_R` (the prefactor is undefined) or when two pairs of `R`
/// are swap images of each other under some bipartition.
pub fn compile(pairs: &PairSet, variant: NrVariant) -> Result<CompiledWitness> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("pair set is empty".into()));
    }
    let space = pairs.space();
    let bipartitions = enumerate_bipartitions(space.n)?;
    let images: Vec<Vec<(Bipartition, Option<IndexPair>)>> =
        pairs.pairs().iter().map(|p| swap_images(p, &bipartitions)).collect::<Result<_>>()?;

    // R^γ as pair positions, per bipartition.
    let fixed: Vec<Vec<usize>> = (0..bipartitions.len())
        .map(|g| (0..pairs.len()).filter(|&i| images[i][g].1.is_none()).collect())
        .collect();
    let sizes = fixed.iter().map(Vec::len);
    let n_r = match variant {
        NrVariant::Minimal => sizes.min(),
        NrVariant::Maximal => sizes.max(),
    }
    .unwrap_or(0);
    if n_r >= pairs.len() {
        return Err(Error::DegenerateSelection { size: pairs.len(), n_r });
    }

    let mut terms = Vec::with_capacity(pairs.len());
    for (pair, pair_images) in pairs.pairs().iter().zip(&images) {
        let mut gamma_set = Vec::new();
        let mut distinct: Vec<IndexPair> = Vec::new();
        for (gamma, image) in pair_images {
            let Some(image) = image else { continue };
            if pairs.contains(image) {
                return Err(Error::OverlappingPairs { first: pair.to_string(), second: image.to_string(), gamma: gamma.to_string() });
            }
            gamma_set.push(gamma.clone());
            if !distinct.contains(image) {
                distinct.push(image.clone());
            }
        }
        terms.push(WitnessTerm { pair: pair.clone(), gamma_set, images: distinct });
    }

    // N_η = max_γ of how often η occurs among the pairs left out of the γ-sum.
    // The maximal variant sums the first |R| - N_R non-fixed pairs in canonical
    // order and leaves out the rest.
    let mut n_eta: BTreeMap<MultiIndex, usize> = BTreeMap::new();
    for pair in pairs.pairs() {
        n_eta.insert(pair.first().clone(), 0);
        n_eta.insert(pair.second().clone(), 0);
    }
    let keep = pairs.len() - n_r;
    for (g, fixed_here) in fixed.iter().enumerate() {
        let mut left_out: Vec<usize> = fixed_here.clone();
        if variant == NrVariant::Maximal {
            left_out.extend((0..pairs.len()).filter(|&i| images[i][g].1.is_some()).skip(keep));
        }
        let mut counts: HashMap<&MultiIndex, usize> = HashMap::new();
        for &i in &left_out {
            let pair = &pairs.pairs()[i];
            *counts.entry(pair.first()).or_default() += 1;
            *counts.entry(pair.second()).or_default() += 1;
        }
        for (eta, count) in counts {
            let slot = n_eta.get_mut(eta).expect("index of R");
            *slot = (*slot).max(count);
        }
    }

    let index_set: Vec<MultiIndex> = n_eta.keys().cloned().collect();
    let rank_terms = terms
        .iter()
        .map(|t| {
            let imgs = t.images.iter().map(|p| (p.first().rank(), p.second().rank())).collect();
            ((t.pair.first().rank(), t.pair.second().rank()), imgs)
        })
        .collect();
    let rank_diag = n_eta.iter().filter(|(_, &w)| w > 0).map(|(eta, &w)| (eta.rank(), w)).collect();

    Ok(CompiledWitness {
        pairs: pairs.clone(),
        variant,
        n_r,
        terms,
        index_set,
        n_eta,
        prefactor: 2.0 / ((pairs.len() - n_r) as f64).sqrt(),
        rank_terms,
        rank_diag,
    })
}

impl CompiledWitness {
    pub fn pairs(&self) -> &PairSet {
        &self.pairs
    }

    pub fn space(&self) -> Space {
        self.pairs.space()
    }

    pub fn variant(&self) -> NrVariant {
        self.variant
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn terms(&self) -> &[WitnessTerm] {
        &self.terms
    }

    /// `I(R)`: every index occurring in some pair.
    pub fn index_set(&self) -> &[MultiIndex] {
        &self.index_set
    }

    pub fn n_eta(&self) -> &BTreeMap<MultiIndex, usize> {
        &self.n_eta
    }

    /// `2/√(|R| - N_R)`.
    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    /// Off-diagonal elements read by [`evaluate`](Self::evaluate).
    pub fn off_diagonal_elements(&self) -> Vec<IndexPair> {
        self.pairs.pairs().to_vec()
    }

    /// Diagonal elements read by [`evaluate`](Self::evaluate): every index of a
    /// penalty image plus the indices of `I(R)` with `N_η > 0`.
    pub fn diagonal_elements(&self) -> Vec<MultiIndex> {
        let mut out: BTreeSet<MultiIndex> = BTreeSet::new();
        for term in &self.terms {
            for image in &term.images {
                out.insert(image.first().clone());
                out.insert(image.second().clone());
            }
        }
        out.extend(self.n_eta.iter().filter(|(_, &w)| w > 0).map(|(eta, _)| eta.clone()));
        out.into_iter().collect()
    }

    /// `W_R(ρ)`; a positive value certifies GME and lower-bounds `E_m(ρ)`.
    pub fn evaluate(&self, rho: &impl ElementSource) -> Result<f64> {
        self.space().ensure_same(&rho.space())?;
        let diag = |r: usize| rho.diag(r).max(0.0);
        let mut bracket = 0.0;
        for &((a, b), ref images) in &self.rank_terms {
            bracket += rho.element(a, b).norm();
            for &(x, y) in images {
                bracket -= (diag(x) * diag(y)).sqrt();
            }
        }
        let penalty: f64 = self.rank_diag.iter().map(|&(r, w)| w as f64 * diag(r)).sum();
        Ok(self.prefactor * (bracket - 0.5 * penalty))
    }
}

/// Options for [`auto_select_r`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AutoSelect {
    /// Amplitudes below this modulus are ignored.
    pub tau: f64,
    /// Upper bound on `|R|`; `None` keeps every admissible pair.
    pub max_pairs: Option<usize>,
}

impl Default for AutoSelect {
    fn default() -> Self {
        AutoSelect { tau: 0.1, max_pairs: None }
    }
}

/// Chooses `R` from the support of a target state.
///
/// A greedy cover first picks pairs until every bipartition has a pair that
/// contributes to its entropy, then drops redundant cover pairs, and finally
/// appends the remaining support pairs by decreasing `|c_{η₁}c_{η₂}|`. Pairs that
/// are swap images of an already chosen pair are skipped.
pub fn auto_select_r(target: &PureState, options: AutoSelect) -> Result<PairSet> {
    let space = target.space();
    let bipartitions = enumerate_bipartitions(space.n)?;
    let support: Vec<(MultiIndex, C64)> = target.support().filter(|(_, c)| c.norm() >= options.tau).collect();

    struct Candidate {
        pair: IndexPair,
        weight: f64,
        covers: Vec<bool>,
        images: Vec<IndexPair>,
    }
    let mut candidates = Vec::new();
    for (i, (a, ca)) in support.iter().enumerate() {
        for (b, cb) in &support[i + 1..] {
            let pair = IndexPair::new(a.clone(), b.clone())?;
            let imgs = swap_images(&pair, &bipartitions)?;
            let covers: Vec<bool> = imgs.iter().map(|(_, img)| img.is_some()).collect();
            if covers.iter().any(|&c| c) {
                let images = imgs.into_iter().filter_map(|(_, img)| img).collect();
                candidates.push(Candidate { pair, weight: (ca * cb).norm(), covers, images });
            }
        }
    }
    // Larger |c c| first, then lexicographic pair order.
    candidates.sort_by(|x, y| y.weight.total_cmp(&x.weight).then_with(|| x.pair.cmp(&y.pair)));

    let overlaps = |c: &Candidate, taken: &HashSet<&IndexPair>| c.images.iter().any(|img| taken.contains(img));
    let mut chosen: Vec<usize> = Vec::new();
    let mut taken: HashSet<&IndexPair> = HashSet::new();
    let mut uncovered = vec![true; bipartitions.len()];
    while uncovered.iter().any(|&u| u) {
        let gain = |c: &Candidate| c.covers.iter().zip(&uncovered).filter(|(&cv, &u)| cv && u).count();
        let best = candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| !taken.contains(&c.pair) && !overlaps(c, &taken))
            .map(|(i, c)| (i, gain(c)))
            .filter(|&(_, g)| g > 0)
            .fold(None, |best: Option<(usize, usize)>, (i, g)| match best {
                Some((_, bg)) if bg >= g => best,
                _ => Some((i, g)),
            });
        let Some((i, _)) = best else {
            let missing: Vec<String> =
                bipartitions.iter().zip(&uncovered).filter(|(_, &u)| u).map(|(g, _)| g.to_string()).collect();
            return Err(Error::Coverage(format!(
                "no support pair at tau = {} contributes to bipartitions {}",
                options.tau,
                missing.join(" ")
            )));
        };
        for (u, &c) in uncovered.iter_mut().zip(&candidates[i].covers) {
            *u &= !c;
        }
        chosen.push(i);
        taken.insert(&candidates[i].pair);
    }

    // Drop cover pairs that became redundant, weakest first.
    let mut order = chosen.clone();
    order.sort_by_key(|&a| std::cmp::Reverse(a));
    for i in order {
        let rest: Vec<usize> = chosen.iter().copied().filter(|&j| j != i).collect();
        let covered = (0..bipartitions.len()).all(|g| rest.iter().any(|&j| candidates[j].covers[g]));
        if covered {
            chosen = rest;
            taken.remove(&candidates[i].pair);
        }
    }

    let cap = options.max_pairs.unwrap_or(usize::MAX).max(chosen.len());
    for (i, c) in candidates.iter().enumerate() {
        if chosen.len() >= cap {
            break;
        }
        if !taken.contains(&c.pair) && !overlaps(c, &taken) {
            chosen.push(i);
            taken.insert(&c.pair);
        }
    }
    PairSet::new(space, chosen.into_iter().map(|i| candidates[i].pair.clone()))
}

/// Grid used to check the sign pattern of a witness along the noise line.
const THRESHOLD_GRID: usize = 64;
/// Bisection stops once the bracket is narrower than this.
pub const THRESHOLD_RESOLUTION: f64 = 1e-12;

/// Finds the unique `p*` in `[0, 1]` where `f` turns positive.
///
/// `f(1)` must be positive and `f` must change sign once on a sampling grid.
pub fn bisect_threshold(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let at_one = f(1.0)?;
    if at_one.is_nan() || at_one <= 0.0 {
        return Err(Error::NotDetecting(at_one));
    }
    let grid: Vec<f64> = (0..=THRESHOLD_GRID).map(|k| k as f64 / THRESHOLD_GRID as f64).collect();
    let values = grid.iter().map(|&p| f(p)).collect::<Result<Vec<_>>>()?;
    let first_positive = values.iter().position(|&v| v > 0.0).expect("positive at p = 1");
    if let Some(k) = values[first_positive..].iter().position(|&v| v <= 0.0) {
        return Err(Error::NonMonotone(format!(
            "value {} at p = {} after turning positive at p = {}",
            values[first_positive + k],
            grid[first_positive + k],
            grid[first_positive]
        )));
    }
    if first_positive == 0 {
        return Err(Error::NonMonotone(format!("positive already at p = 0 (value {})", values[0])));
    }
    let (mut lo, mut hi) = (grid[first_positive - 1], grid[first_positive]);
    while hi - lo > THRESHOLD_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Visibility `p*` at which `W_R(p|ψ⟩⟨ψ| + (1-p)1/d^n)` crosses zero.
pub fn noise_threshold(witness: &CompiledWitness, target: &PureState) -> Result<f64> {
    witness.space().ensure_same(&target.space())?;
    bisect_threshold(|p| witness.evaluate(&make_isotropic(target, p)?))
}

/// The pairs `(ii, jj)`, `i < j`, of the two-qudit maximally entangled state.
pub fn isotropic_pairs(d: usize) -> Result<PairSet> {
    let space = Space::new(2, d)?;
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            pairs.push(IndexPair::new(MultiIndex::new(vec![i as u8; 2], d)?, MultiIndex::new(vec![j as u8; 2], d)?)?);
        }
    }
    PairSet::new(space, pairs)
}

/// Witness value on the two-qudit isotropic state of visibility `p`.
pub fn bipartite_bound_isotropic(d: usize, p: f64) -> Result<f64> {
    let witness = compile(&isotropic_pairs(d)?, NrVariant::Minimal)?;
    witness.evaluate(&make_isotropic(&make_max_entangled(d)?, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_ghz_default, make_singlet4, make_w_state};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn w_pairs() -> PairSet {
        PairSet::from_strs(Space::new(3, 2).unwrap(), &[("001", "100"), ("001", "010"), ("010", "100")]).unwrap()
    }

    fn singlet_pairs() -> PairSet {
        PairSet::from_strs(
            Space::new(4, 2).unwrap(),
            &[("0011", "0101"), ("0011", "1010"), ("0011", "0110"), ("0011", "1001")],
        )
        .unwrap()
    }

    fn idx(s: &str) -> MultiIndex {
        MultiIndex::parse(s, Space::new(s.len(), 2).unwrap()).unwrap()
    }

    #[test]
    fn w_witness_compiles_to_the_three_qubit_bound() {
        let w = compile(&w_pairs(), NrVariant::Minimal).unwrap();
        assert_eq!(w.n_r(), 1);
        assert!((w.prefactor() - SQRT2).abs() < 1e-15);
        for eta in ["001", "010", "100"] {
            assert_eq!(w.n_eta()[&idx(eta)], 1);
        }
        let images: BTreeSet<String> =
            w.terms().iter().flat_map(|t| t.images.iter().map(|p| p.to_string())).collect();
        let expected: BTreeSet<String> =
            ["(000, 101)", "(000, 110)", "(000, 011)"].iter().map(|s| s.to_string()).collect();
        assert_eq!(images, expected);
        for term in w.terms() {
            assert_eq!(term.images.len(), 1);
            assert_eq!(term.gamma_set.len(), 2);
        }
    }

    #[test]
    fn singlet_witness_constants() {
        for variant in [NrVariant::Minimal, NrVariant::Maximal] {
            let w = compile(&singlet_pairs(), variant).unwrap();
            assert_eq!(w.n_eta()[&idx("0011")], 2);
            for eta in ["0101", "1010", "0110", "1001"] {
                assert_eq!(w.n_eta()[&idx(eta)], 1);
            }
            assert_eq!(w.diagonal_elements().len(), 9);
        }
        let max = compile(&singlet_pairs(), NrVariant::Maximal).unwrap();
        assert_eq!(max.n_r(), 2);
        assert!((max.prefactor() - 2.0 / SQRT2).abs() < 1e-15);
        let min = compile(&singlet_pairs(), NrVariant::Minimal).unwrap();
        assert_eq!(min.n_r(), 0);
    }

    #[test]
    fn ghz_single_pair() {
        let space = Space::new(3, 2).unwrap();
        let r = PairSet::from_strs(space, &[("000", "111")]).unwrap();
        let w = compile(&r, NrVariant::Minimal).unwrap();
        assert_eq!(w.n_r(), 0);
        assert_eq!(w.terms()[0].gamma_set.len(), 3);
        assert_eq!(w.index_set().len(), 2);
        assert!(w.n_eta().values().all(|&v| v == 0));
        let value = w.evaluate(&make_ghz_default(3, 2).unwrap().projector()).unwrap();
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn w_witness_values() {
        let w = compile(&w_pairs(), NrVariant::Minimal).unwrap();
        let pure = w.evaluate(&make_w_state().projector()).unwrap();
        assert!((pure - SQRT2 / 2.0).abs() < 1e-12);
        let mixed = w.evaluate(&DensityMatrix::maximally_mixed(Space::new(3, 2).unwrap())).unwrap();
        assert!((mixed - (-3.0 * SQRT2 / 16.0 - 3.0 * SQRT2 / 8.0)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_overlapping_selections_are_rejected() {
        let space = Space::new(3, 2).unwrap();
        // Both pairs differ in one party only, so every bipartition fixes them.
        let fixed = PairSet::from_strs(space, &[("000", "001")]).unwrap();
        assert!(matches!(compile(&fixed, NrVariant::Minimal), Err(Error::DegenerateSelection { .. })));
        // (00,11) and (10,01) are the two halves of one swap orbit.
        let two = Space::new(2, 2).unwrap();
        let orbit = PairSet::from_strs(two, &[("00", "11"), ("01", "10")]).unwrap();
        assert!(matches!(compile(&orbit, NrVariant::Minimal), Err(Error::OverlappingPairs { .. })));
        assert!(PairSet::from_strs(space, &[("000", "111"), ("111", "000")]).is_err());
    }

    #[test]
    fn singlet_threshold() {
        for variant in [NrVariant::Minimal, NrVariant::Maximal] {
            let w = compile(&singlet_pairs(), variant).unwrap();
            let p = noise_threshold(&w, &make_singlet4()).unwrap();
            assert!((p - 21.0 / 29.0).abs() < 1e-9, "{variant}: {p}");
        }
    }

    #[test]
    fn w_and_ghz_thresholds_are_regression_constants() {
        let w = compile(&w_pairs(), NrVariant::Minimal).unwrap();
        let p_w = noise_threshold(&w, &make_w_state()).unwrap();
        // Σ_off = p, penalties 3(1-p)/8 and ½(p + 3(1-p)/8): p/2 = 9(1-p)/16, p = 9/17.
        assert!((p_w - 9.0 / 17.0).abs() < 1e-9, "{p_w}");

        let space = Space::new(3, 2).unwrap();
        let ghz = compile(&PairSet::from_strs(space, &[("000", "111")]).unwrap(), NrVariant::Minimal).unwrap();
        let p_g = noise_threshold(&ghz, &make_ghz_default(3, 2).unwrap()).unwrap();
        // p/2 = 3(1-p)/8, p = 3/7.
        assert!((p_g - 3.0 / 7.0).abs() < 1e-9, "{p_g}");
    }

    #[test]
    fn not_detecting_is_an_error() {
        let space = Space::new(3, 2).unwrap();
        let ghz = compile(&PairSet::from_strs(space, &[("000", "111")]).unwrap(), NrVariant::Minimal).unwrap();
        assert!(matches!(noise_threshold(&ghz, &make_w_state()), Err(Error::NotDetecting(_))));
    }

    #[test]
    fn isotropic_bound_matches_closed_form() {
        for p in [0.0, 0.25, 0.5, 1.0] {
            let v = bipartite_bound_isotropic(3, p).unwrap();
            assert!((v - 2.0 * (4.0 * p - 1.0) / 27f64.sqrt()).abs() < 1e-10, "p = {p}: {v}");
        }
        assert!((bipartite_bound_isotropic(3, 1.0).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn auto_selection_examples() {
        let ghz = make_ghz_default(4, 3).unwrap();
        let r = auto_select_r(&ghz, AutoSelect::default()).unwrap();
        assert_eq!(r.pairs().len(), 1);
        assert_eq!(r.pairs()[0].to_string(), "(0000, 2222)");

        let w = auto_select_r(&make_w_state(), AutoSelect::default()).unwrap();
        assert_eq!(w, w_pairs());

        let space = Space::new(3, 2).unwrap();
        let product = PureState::new(space, [(MultiIndex::from_rank(0, space), C64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(auto_select_r(&product, AutoSelect::default()), Err(Error::Coverage(_))));
    }

    #[test]
    fn auto_selection_cap_keeps_the_cover() {
        let r = auto_select_r(&make_singlet4(), AutoSelect { tau: 0.1, max_pairs: Some(1) }).unwrap();
        let bips = enumerate_bipartitions(4).unwrap();
        for gamma in &bips {
            assert!(r.pairs().iter().any(|p| !pair_is_fixed(gamma, p).unwrap()), "{gamma} uncovered");
        }
        assert!(compile(&r, NrVariant::Minimal).is_ok());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("min".parse::<NrVariant>().unwrap(), NrVariant::Minimal);
        assert_eq!("max".parse::<NrVariant>().unwrap(), NrVariant::Maximal);
        assert!("mid".parse::<NrVariant>().is_err());
    }
}
