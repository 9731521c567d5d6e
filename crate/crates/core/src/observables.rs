//! Local-observable decompositions of density-matrix elements.
//!
//! Every element `⟨a|ρ|b⟩ = Tr(ρ |b⟩⟨a|)` factorizes over parties. Off-diagonal
//! factors use `|j⟩⟨k| = ½(S_jk + i A_jk)` for `j < k` (and the conjugate for
//! `j > k`), diagonal factors expand `|x⟩⟨x|` over the diagonal generalized
//! Gell-Mann matrices. Multiplying out gives real coefficients on tensor
//! products of Hermitian operators for the real and imaginary parts.
//!
//! A measurement setting is a tuple of non-identity local observables. Tuples
//! containing identities are folded into any setting that agrees on the
//! remaining parties, and diagonal observables are not merged across tuples.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{IndexPair, MultiIndex, Space};
use crate::states::DensityMatrix;
use crate::witness::{CompiledWitness, ElementSource};

/// One generalized Gell-Mann matrix. Levels are 0-based; `Diagonal(0)` is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GellMannKind {
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
    Diagonal(usize),
}

impl GellMannKind {
    pub const IDENTITY: GellMannKind = GellMannKind::Diagonal(0);

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn matrix(&self, d: usize) -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(d, d);
        match *self {
            GellMannKind::Symmetric(j, k) => {
                m[(j, k)] = C64::new(1.0, 0.0);
                m[(k, j)] = C64::new(1.0, 0.0);
            }
            GellMannKind::Antisymmetric(j, k) => {
                m[(j, k)] = C64::new(0.0, -1.0);
                m[(k, j)] = C64::new(0.0, 1.0);
            }
            GellMannKind::Diagonal(0) => m.fill_with_identity(),
            GellMannKind::Diagonal(l) => {
                let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
                for i in 0..l {
                    m[(i, i)] = C64::new(scale, 0.0);
                }
                m[(l, l)] = C64::new(-(l as f64) * scale, 0.0);
            }
        }
        m
    }

    /// Diagonal entries of a diagonal operator.
    fn diagonal_entries(l: usize, d: usize) -> Vec<f64> {
        GellMannKind::Diagonal(l).matrix(d).diagonal().iter().map(|z| z.re).collect()
    }
}

impl fmt::Display for GellMannKind {
    /// Labels use 1-based levels: `S12` couples levels 0 and 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GellMannKind::Symmetric(j, k) => write!(f, "S{}{}", j + 1, k + 1),
            GellMannKind::Antisymmetric(j, k) => write!(f, "A{}{}", j + 1, k + 1),
            GellMannKind::Diagonal(0) => f.write_str("I"),
            GellMannKind::Diagonal(l) => write!(f, "D{l}"),
        }
    }
}

impl Serialize for GellMannKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GellMannOp {
    pub kind: GellMannKind,
    pub matrix: DMatrix<C64>,
}

/// Identity, symmetric, antisymmetric, then diagonal operators: `d²` in total.
pub fn gell_mann_basis(d: usize) -> Result<Vec<GellMannOp>> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("local dimension d = {d} must be at least 2")));
    }
    let mut kinds = vec![GellMannKind::IDENTITY];
    let offdiag: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    kinds.extend(offdiag.iter().map(|&(j, k)| GellMannKind::Symmetric(j, k)));
    kinds.extend(offdiag.iter().map(|&(j, k)| GellMannKind::Antisymmetric(j, k)));
    kinds.extend((1..d).map(GellMannKind::Diagonal));
    Ok(kinds.into_iter().map(|kind| GellMannOp { kind, matrix: kind.matrix(d) }).collect())
}

/// A tensor product of local operators, one per party.
pub type Setting = Vec<GellMannKind>;

/// Real or imaginary part of an off-diagonal element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Real,
    Imaginary,
}

/// Which parts of the off-diagonal elements a plan covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartMode {
    /// Real parts only; enough for targets with real, positive coherences.
    RealOnly,
    /// Real and imaginary parts, so the modulus `|ρ_{η₁η₂}|` is available.
    #[default]
    Modulus,
}

impl std::str::FromStr for PartMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" | "real-only" => Ok(PartMode::RealOnly),
            "modulus" | "full" => Ok(PartMode::Modulus),
            other => Err(Error::Parse(format!("unknown part mode {other:?} (expected real or modulus)"))),
        }
    }
}

const COEFF_EPS: f64 = 1e-15;

/// Expands `⊗_p |b_p⟩⟨a_p|` into `(setting, complex coefficient)` terms.
fn expand(a: &MultiIndex, b: &MultiIndex) -> Vec<(Setting, C64)> {
    let d = a.d();
    let half = C64::new(0.5, 0.0);
    let half_i = C64::new(0.0, 0.5);
    let mut terms: Vec<(Setting, C64)> = vec![(Vec::new(), C64::new(1.0, 0.0))];
    for (&ka, &jb) in a.digits().iter().zip(b.digits()) {
        let (j, k) = (jb as usize, ka as usize);
        let local: Vec<(GellMannKind, C64)> = if j == k {
            // |x⟩⟨x| = Σ_l Tr(D_l |x⟩⟨x|)/Tr(D_l²) D_l
            (0..d)
                .map(|l| {
                    let entries = GellMannKind::diagonal_entries(l, d);
                    let norm: f64 = entries.iter().map(|e| e * e).sum();
                    (GellMannKind::Diagonal(l), C64::new(entries[j] / norm, 0.0))
                })
                .filter(|(_, c)| c.norm() > COEFF_EPS)
                .collect()
        } else if j < k {
            vec![(GellMannKind::Symmetric(j, k), half), (GellMannKind::Antisymmetric(j, k), half_i)]
        } else {
            vec![(GellMannKind::Symmetric(k, j), half), (GellMannKind::Antisymmetric(k, j), -half_i)]
        };
        terms = terms
            .iter()
            .flat_map(|(setting, c)| {
                local.iter().map(move |(op, lc)| {
                    let mut s = setting.clone();
                    s.push(*op);
                    (s, c * lc)
                })
            })
            .collect();
    }
    terms
}

fn select(terms: Vec<(Setting, C64)>, part: Part) -> Vec<(Setting, f64)> {
    terms
        .into_iter()
        .map(|(s, c)| (s, if part == Part::Real { c.re } else { c.im }))
        .filter(|(_, c)| c.abs() > COEFF_EPS)
        .collect()
}

/// Terms whose weighted expectations sum to the requested part of `⟨η₁|ρ|η₂⟩`.
pub fn decompose_offdiagonal(pair: &IndexPair, part: Part) -> Vec<(Setting, f64)> {
    select(expand(pair.first(), pair.second()), part)
}

/// Terms whose weighted expectations sum to `⟨η|ρ|η⟩`; only diagonal operators occur.
pub fn decompose_diagonal(eta: &MultiIndex) -> Vec<(Setting, f64)> {
    select(expand(eta, eta), Part::Real)
}

/// A matrix element requested by a plan.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementRef {
    OffDiagonal(IndexPair, Part),
    Diagonal(MultiIndex),
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRef::OffDiagonal(p, Part::Real) => write!(f, "Re<{}|rho|{}>", p.first(), p.second()),
            ElementRef::OffDiagonal(p, Part::Imaginary) => write!(f, "Im<{}|rho|{}>", p.first(), p.second()),
            ElementRef::Diagonal(eta) => write!(f, "<{eta}|rho|{eta}>"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementPlan {
    pub element: ElementRef,
    pub terms: Vec<(Setting, f64)>,
}

/// Elements, their expansions, and the deduplicated settings.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionPlan {
    space: Space,
    elements: Vec<ElementPlan>,
    settings: Vec<Setting>,
    assignment: BTreeMap<Setting, usize>,
}

fn extends(setting: &Setting, tuple: &Setting) -> bool {
    setting.iter().zip(tuple).all(|(s, t)| t.is_identity() || s == t)
}

impl DecompositionPlan {
    /// Expands the requested elements and groups their operator tuples into settings.
    pub fn new(space: Space, off_diagonal: &[IndexPair], diagonal: &[MultiIndex], mode: PartMode) -> Result<Self> {
        let mut elements = Vec::new();
        for pair in off_diagonal {
            space.ensure_same(&pair.space())?;
            let parts: &[Part] = match mode {
                PartMode::RealOnly => &[Part::Real],
                PartMode::Modulus => &[Part::Real, Part::Imaginary],
            };
            for &part in parts {
                elements.push(ElementPlan { element: ElementRef::OffDiagonal(pair.clone(), part), terms: decompose_offdiagonal(pair, part) });
            }
        }
        for eta in diagonal {
            space.ensure_same(&eta.space())?;
            elements.push(ElementPlan { element: ElementRef::Diagonal(eta.clone()), terms: decompose_diagonal(eta) });
        }

        let tuples: BTreeSet<Setting> = elements
            .iter()
            .flat_map(|e| e.terms.iter().map(|(s, _)| s.clone()))
            .filter(|s| s.iter().any(|op| !op.is_identity()))
            .collect();
        // A tuple is its own setting unless a different tuple extends it.
        let settings: Vec<Setting> =
            tuples.iter().filter(|t| !tuples.iter().any(|s| s != *t && extends(s, t))).cloned().collect();
        let assignment = tuples
            .iter()
            .map(|t| (t.clone(), settings.iter().position(|s| extends(s, t)).expect("maximal tuple exists")))
            .collect();
        Ok(DecompositionPlan { space, elements, settings, assignment })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn elements(&self) -> &[ElementPlan] {
        &self.elements
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    pub fn setting_count(&self) -> usize {
        self.settings.len()
    }

    /// Index into [`settings`](Self::settings) of the setting that measures `tuple`.
    pub fn setting_for(&self, tuple: &Setting) -> Option<usize> {
        self.assignment.get(tuple).copied()
    }

    /// Number of distinct matrix elements (real and imaginary parts count once).
    pub fn element_count(&self) -> usize {
        let distinct: BTreeSet<ElementRef> = self
            .elements
            .iter()
            .map(|e| match &e.element {
                ElementRef::OffDiagonal(p, _) => ElementRef::OffDiagonal(p.clone(), Part::Real),
                other => other.clone(),
            })
            .collect();
        distinct.len()
    }

    /// Rebuilds every planned element from local expectation values of `rho`.
    pub fn reconstruct(&self, rho: &DensityMatrix) -> Result<ReconstructedElements> {
        self.space.ensure_same(&rho.space())?;
        let d = self.space.d;
        let mut cache: HashMap<Setting, f64> = HashMap::new();
        let mut expectation = |setting: &Setting| -> f64 {
            *cache.entry(setting.clone()).or_insert_with(|| {
                let op = setting.iter().skip(1).fold(setting[0].matrix(d), |acc, k| acc.kronecker(&k.matrix(d)));
                rho.expectation(&op).re
            })
        };
        let mut values: HashMap<(usize, usize), C64> = HashMap::new();
        for plan in &self.elements {
            let value: f64 = plan.terms.iter().map(|(s, c)| c * expectation(s)).sum();
            match &plan.element {
                ElementRef::Diagonal(eta) => {
                    values.insert((eta.rank(), eta.rank()), C64::new(value, 0.0));
                }
                ElementRef::OffDiagonal(p, part) => {
                    let slot = values.entry((p.first().rank(), p.second().rank())).or_insert(C64::new(0.0, 0.0));
                    match part {
                        Part::Real => slot.re = value,
                        Part::Imaginary => slot.im = value,
                    }
                }
            }
        }
        Ok(ReconstructedElements { space: self.space, values })
    }
}

/// Matrix elements recovered from local expectation values.
///
/// Elements outside the plan read as NaN, so an incomplete plan cannot go unnoticed.
#[derive(Clone, Debug)]
pub struct ReconstructedElements {
    space: Space,
    values: HashMap<(usize, usize), C64>,
}

impl ElementSource for ReconstructedElements {
    fn space(&self) -> Space {
        self.space
    }

    fn element(&self, row: usize, col: usize) -> C64 {
        if let Some(v) = self.values.get(&(row, col)) {
            *v
        } else if let Some(v) = self.values.get(&(col, row)) {
            v.conj()
        } else {
            C64::new(f64::NAN, f64::NAN)
        }
    }
}

/// Plans the measurements for every element a compiled witness reads.
pub fn plan_settings(witness: &CompiledWitness, mode: PartMode) -> Result<DecompositionPlan> {
    DecompositionPlan::new(witness.space(), &witness.off_diagonal_elements(), &witness.diagonal_elements(), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{compile, isotropic_pairs, NrVariant};

    fn two_qutrits() -> Space {
        Space::new(2, 3).unwrap()
    }

    fn idx(s: &str, d: usize) -> MultiIndex {
        MultiIndex::parse(s, Space::new(s.len(), d).unwrap()).unwrap()
    }

    #[test]
    fn basis_shapes() {
        let b2 = gell_mann_basis(2).unwrap();
        assert_eq!(b2.len(), 4);
        let labels: Vec<String> = b2.iter().map(|op| op.kind.to_string()).collect();
        assert_eq!(labels, ["I", "S12", "A12", "D1"]);
        let b3 = gell_mann_basis(3).unwrap();
        assert_eq!(b3.len(), 9);
        let d2 = GellMannKind::Diagonal(2).matrix(3);
        let s3 = 1.0 / 3f64.sqrt();
        assert!((d2[(0, 0)].re - s3).abs() < 1e-15 && (d2[(2, 2)].re + 2.0 * s3).abs() < 1e-15);
        let a = GellMannKind::Antisymmetric(1, 2).matrix(3);
        assert_eq!(a[(1, 2)], C64::new(0.0, -1.0));
        assert_eq!(a[(2, 1)], C64::new(0.0, 1.0));
        assert!(gell_mann_basis(1).is_err());
    }

    #[test]
    fn qutrit_coherence_expansion() {
        let pair = IndexPair::parse("00", "11", two_qutrits()).unwrap();
        let s = GellMannKind::Symmetric(0, 1);
        let a = GellMannKind::Antisymmetric(0, 1);
        let re = decompose_offdiagonal(&pair, Part::Real);
        assert_eq!(re, vec![(vec![s, s], 0.25), (vec![a, a], -0.25)]);
        let im = decompose_offdiagonal(&pair, Part::Imaginary);
        assert_eq!(im, vec![(vec![s, a], -0.25), (vec![a, s], -0.25)]);
    }

    #[test]
    fn qutrit_population_expansion() {
        // Coefficients ordered as (party 1 label, party 2 label) over D0, D1, D2.
        let terms: BTreeMap<Setting, f64> = decompose_diagonal(&idx("01", 3)).into_iter().collect();
        let r3 = 3f64.sqrt();
        let expected = [
            ((0, 0), 1.0 / 9.0),
            ((0, 1), -1.0 / 6.0),
            ((0, 2), 1.0 / (6.0 * r3)),
            ((1, 0), 1.0 / 6.0),
            ((1, 1), -0.25),
            ((1, 2), 1.0 / (4.0 * r3)),
            ((2, 0), 1.0 / (6.0 * r3)),
            ((2, 1), -1.0 / (4.0 * r3)),
            ((2, 2), 1.0 / 12.0),
        ];
        for ((x, y), c) in expected {
            let key = vec![GellMannKind::Diagonal(x), GellMannKind::Diagonal(y)];
            assert!((terms[&key] - c).abs() < 1e-15, "D{x} D{y}");
        }
        let zero = decompose_diagonal(&idx("02", 3));
        assert!(!zero.iter().any(|(s, _)| s == &vec![GellMannKind::Diagonal(0), GellMannKind::Diagonal(1)]));
    }

    #[test]
    fn isotropic_plan_has_ten_settings() {
        let w = compile(&isotropic_pairs(3).unwrap(), NrVariant::Minimal).unwrap();
        let plan = plan_settings(&w, PartMode::RealOnly).unwrap();
        assert_eq!(plan.element_count(), 9);
        assert_eq!(plan.setting_count(), 10);
        let shown: Vec<String> =
            plan.settings().iter().map(|s| s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("x")).collect();
        assert_eq!(
            shown,
            ["S12xS12", "S13xS13", "S23xS23", "A12xA12", "A13xA13", "A23xA23", "D1xD1", "D1xD2", "D2xD1", "D2xD2"]
        );
    }

    #[test]
    fn w_plan_reads_ten_elements() {
        let space = Space::new(3, 2).unwrap();
        let r = crate::witness::PairSet::from_strs(space, &[("001", "100"), ("001", "010"), ("010", "100")]).unwrap();
        let plan = plan_settings(&compile(&r, NrVariant::Minimal).unwrap(), PartMode::RealOnly).unwrap();
        assert_eq!(plan.element_count(), 10);
    }
}
