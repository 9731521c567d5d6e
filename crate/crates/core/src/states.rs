//! Pure states, density matrices and the named states used throughout.
//!
//! Pure states are sparse amplitude maps; density matrices are dense over the
//! full `d^n` space. White noise is always normalized by the total dimension,
//! so `p|ψ⟩⟨ψ| + (1-p)·1/16` for four qubits.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::indices::{Bipartition, MultiIndex, Space};

/// Normalization tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and trace tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue admitted for untrusted density matrices.
pub const PSD_FLOOR: f64 = -1e-10;

/// Sparse pure state `Σ c_η |η⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    space: Space,
    // Keyed by rank; zero amplitudes are never stored.
    amplitudes: BTreeMap<usize, C64>,
}

impl PureState {
    /// Builds a state from explicit amplitudes, which must already be normalized.
    pub fn new(space: Space, amplitudes: impl IntoIterator<Item = (MultiIndex, C64)>) -> Result<Self> {
        let state = Self::collect(space, amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!("pure state has squared norm {norm}, expected 1")));
        }
        Ok(state)
    }

    /// Builds a state and rescales it to unit norm.
    pub fn normalized(space: Space, amplitudes: impl IntoIterator<Item = (MultiIndex, C64)>) -> Result<Self> {
        let mut state = Self::collect(space, amplitudes)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidInput("cannot normalize a zero or non-finite state".into()));
        }
        state.amplitudes.values_mut().for_each(|c| *c /= norm);
        Ok(state)
    }

    /// Normalizes a dense amplitude vector indexed by rank.
    pub fn from_vector(space: Space, v: &DVector<C64>) -> Result<Self> {
        if v.len() != space.dim() {
            return Err(Error::InvalidInput(format!("vector length {} does not match d^n = {}", v.len(), space.dim())));
        }
        Self::normalized(space, v.iter().enumerate().map(|(r, &c)| (MultiIndex::from_rank(r, space), c)))
    }

    fn collect(space: Space, amplitudes: impl IntoIterator<Item = (MultiIndex, C64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (eta, c) in amplitudes {
            space.ensure_same(&eta.space())?;
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidInput(format!("amplitude of {eta} is not finite")));
            }
            *map.entry(eta.rank()).or_insert(C64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.norm_sqr() > 0.0);
        Ok(PureState { space, amplitudes: map })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn amplitude(&self, eta: &MultiIndex) -> C64 {
        self.amplitude_at(eta.rank())
    }

    pub fn amplitude_at(&self, rank: usize) -> C64 {
        self.amplitudes.get(&rank).copied().unwrap_or_default()
    }

    /// Nonzero amplitudes in rank order.
    pub fn support(&self) -> impl Iterator<Item = (MultiIndex, C64)> + '_ {
        self.amplitudes.iter().map(|(&r, &c)| (MultiIndex::from_rank(r, self.space), c))
    }

    pub(crate) fn support_ranks(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.amplitudes.iter().map(|(&r, &c)| (r, c))
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn to_vector(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.space.dim());
        for (&r, &c) in &self.amplitudes {
            v[r] = c;
        }
        v
    }

    /// The projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        let v = self.to_vector();
        DensityMatrix { space: self.space, matrix: &v * v.adjoint() }
    }

    /// Same digit strings on a space with larger local dimension.
    pub fn embed(&self, d: usize) -> Result<Self> {
        if d < self.space.d {
            return Err(Error::InvalidInput(format!("cannot embed d = {} into d = {d}", self.space.d)));
        }
        let space = Space::new(self.space.n, d)?;
        let amps: Vec<(MultiIndex, C64)> = self.support().map(|(eta, c)| Ok((eta.embed(d)?, c))).collect::<Result<_>>()?;
        PureState::new(space, amps)
    }

    /// Applies a single-party `d×d` unitary to a 1-based party.
    pub fn apply_local(&self, party: usize, unitary: &DMatrix<C64>) -> Result<Self> {
        let Space { n, d } = self.space;
        if party == 0 || party > n || unitary.nrows() != d || unitary.ncols() != d {
            return Err(Error::InvalidInput(format!("cannot apply a {}x{} operator to party {party}", unitary.nrows(), unitary.ncols())));
        }
        let w = d.pow((n - party) as u32);
        let mut out = DVector::<C64>::zeros(self.space.dim());
        for (&r, &c) in &self.amplitudes {
            let digit = (r / w) % d;
            let base = r - digit * w;
            for k in 0..d {
                out[base + k * w] += unitary[(k, digit)] * c;
            }
        }
        PureState::from_vector(self.space, &out)
    }
}

/// Dense Hermitian trace-one matrix over the `d^n` computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: Space,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (eigenvalue floor
    /// [`PSD_FLOOR`]).
    pub fn new(space: Space, matrix: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_hermitian(space, matrix)?;
        let min_eig = rho.min_eigenvalue();
        if min_eig < PSD_FLOOR {
            return Err(Error::InvalidInput(format!("density matrix has eigenvalue {min_eig} below {PSD_FLOOR}")));
        }
        Ok(rho)
    }

    /// Checks shape, Hermiticity and trace but not positivity.
    pub(crate) fn from_hermitian(space: Space, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = space.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidInput(format!("matrix is {}x{}, expected {dim}x{dim}", matrix.nrows(), matrix.ncols())));
        }
        if matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let skew = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if skew > HERMITIAN_TOL {
            return Err(Error::InvalidInput(format!("matrix is not Hermitian (max deviation {skew})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > HERMITIAN_TOL || trace.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidInput(format!("trace is {trace}, expected 1")));
        }
        Ok(DensityMatrix { space, matrix })
    }

    /// Maximally mixed state `1/d^n`.
    pub fn maximally_mixed(space: Space) -> Self {
        let dim = space.dim();
        DensityMatrix { space, matrix: DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0) }
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be nonnegative and sum to 1.
    pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::InvalidInput("empty mixture".into()))?;
        let space = first.1.space;
        let mut total = 0.0;
        let mut matrix = DMatrix::zeros(space.dim(), space.dim());
        for (w, rho) in components {
            space.ensure_same(&rho.space)?;
            if w.is_nan() || *w < 0.0 {
                return Err(Error::InvalidInput(format!("negative or NaN mixture weight {w}")));
            }
            total += w;
            matrix += &rho.matrix * C64::new(*w, 0.0);
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("mixture weights sum to {total}")));
        }
        Ok(DensityMatrix { space, matrix })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `⟨η₁|ρ|η₂⟩`.
    pub fn element(&self, row: &MultiIndex, col: &MultiIndex) -> C64 {
        self.matrix[(row.rank(), col.rank())]
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Real diagonal entry `ρ_{ηη}` by rank.
    pub fn diag(&self, rank: usize) -> f64 {
        self.matrix[(rank, rank)].re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eig: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| a.total_cmp(b));
        eig
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Tr(A ρ)` for an operator on the same space.
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        (op * &self.matrix).trace()
    }

    /// Tensor product `self ⊗ other`, parties of `self` first.
    pub fn kron(&self, other: &DensityMatrix) -> Result<Self> {
        if self.space.d != other.space.d {
            return Err(Error::InvalidInput("tensor factors must share d".into()));
        }
        let space = Space::new(self.space.n + other.space.n, self.space.d)?;
        Ok(DensityMatrix { space, matrix: self.matrix.kronecker(&other.matrix) })
    }
}

/// Visibility of a state mixed with white noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!("visibility p = {p} outside [0, 1]")));
        }
        Ok(NoiseModel { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// `p|ψ⟩⟨ψ| + (1-p)·1/d^n`.
///
/// The noise term is normalized by the total dimension `d^n`; some texts write
/// it as `(1-p)/d` with `d` standing for the full dimension.
pub fn make_isotropic(pure: &PureState, p: f64) -> Result<DensityMatrix> {
    let p = NoiseModel::new(p)?.p();
    let dim = pure.space.dim();
    let v = pure.to_vector();
    let mut matrix = (&v * v.adjoint()) * C64::new(p, 0.0);
    let noise = (1.0 - p) / dim as f64;
    for i in 0..dim {
        matrix[(i, i)] += noise;
    }
    Ok(DensityMatrix { space: pure.space, matrix })
}

/// `|W⟩ = (|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn make_w_state() -> PureState {
    let space = Space { n: 3, d: 2 };
    let c = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let amps = ["001", "010", "100"].iter().map(|s| (MultiIndex::parse(s, space).unwrap(), c));
    PureState::new(space, amps).expect("W state is normalized")
}

/// `(|η₁⟩ + |η₂⟩)/√2`.
pub fn make_ghz_state(eta1: &MultiIndex, eta2: &MultiIndex) -> Result<PureState> {
    if eta1 == eta2 {
        return Err(Error::InvalidInput(format!("GHZ state needs distinct indices, got {eta1} twice")));
    }
    let space = eta1.space();
    space.ensure_same(&eta2.space())?;
    let c = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::new(space, [(eta1.clone(), c), (eta2.clone(), c)])
}

/// `(|0…0⟩ + |(d-1)…(d-1)⟩)/√2`.
pub fn make_ghz_default(n: usize, d: usize) -> Result<PureState> {
    let space = Space::new(n, d)?;
    make_ghz_state(&MultiIndex::from_rank(0, space), &MultiIndex::from_rank(space.dim() - 1, space))
}

/// `|α^l⟩`: digit `l+1` at the parties in `alpha` (1-based), digit `l` elsewhere.
pub fn excitation_index(space: Space, alpha: &[usize], level: usize) -> Result<MultiIndex> {
    if level + 1 >= space.d {
        return Err(Error::InvalidInput(format!("level {level} needs d > {}", level + 1)));
    }
    let mut digits = vec![level as u8; space.n];
    for &party in alpha {
        if party == 0 || party > space.n {
            return Err(Error::InvalidInput(format!("party {party} outside 1..={}", space.n)));
        }
        digits[party - 1] = (level + 1) as u8;
    }
    MultiIndex::new(digits, space.d)
}

/// Generalized Dicke state with `m` excitations spread over `d-1` levels.
pub fn make_dicke_state(n: usize, d: usize, m: usize) -> Result<PureState> {
    if m == 0 || m >= n {
        return Err(Error::InvalidInput(format!("excitation count m = {m} must satisfy 0 < m < n = {n}")));
    }
    let space = Space::new(n, d)?;
    let subsets = subsets_of_size(n, m);
    let c = C64::new(1.0 / ((subsets.len() * (d - 1)) as f64).sqrt(), 0.0);
    let mut amps = Vec::with_capacity(subsets.len() * (d - 1));
    for level in 0..d - 1 {
        for alpha in &subsets {
            amps.push((excitation_index(space, alpha, level)?, c));
        }
    }
    PureState::new(space, amps)
}

/// Four-qubit singlet `(2|0011⟩ + 2|1100⟩ − |0110⟩ − |1001⟩ − |1010⟩ − |0101⟩)/(2√3)`.
pub fn make_singlet4() -> PureState {
    let space = Space { n: 4, d: 2 };
    let s = 1.0 / (2.0 * 3f64.sqrt());
    let amps = [("0011", 2.0), ("1100", 2.0), ("0110", -1.0), ("1001", -1.0), ("1010", -1.0), ("0101", -1.0)]
        .iter()
        .map(|&(k, w)| (MultiIndex::parse(k, space).unwrap(), C64::new(w * s, 0.0)));
    PureState::new(space, amps).expect("singlet is normalized")
}

/// `Σ_i |ii…⟩/√d` on two parties.
pub fn make_max_entangled(d: usize) -> Result<PureState> {
    let space = Space::new(2, d)?;
    let c = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let amps: Vec<_> = (0..d).map(|i| Ok((MultiIndex::new(vec![i as u8; 2], d)?, c))).collect::<Result<_>>()?;
    PureState::new(space, amps)
}

/// Reduced state on the parties of `gamma` (in increasing party order).
pub fn partial_trace(rho: &DensityMatrix, gamma: &Bipartition) -> Result<DensityMatrix> {
    let Space { n, d } = rho.space;
    if gamma.n() != n {
        return Err(Error::InvalidInput(format!("bipartition {gamma} is for n = {}, state has n = {n}", gamma.n())));
    }
    let kept: Vec<usize> = gamma.positions().collect();
    let traced: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();
    let reduced_space = Space::new(kept.len(), d)?;
    let sub_rank = |r: usize, positions: &[usize]| {
        positions.iter().fold(0, |acc, &pos| acc * d + (r / d.pow((n - 1 - pos) as u32)) % d)
    };
    // Group full ranks by the traced-out digits.
    let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for r in 0..rho.space.dim() {
        groups.entry(sub_rank(r, &traced)).or_default().push((sub_rank(r, &kept), r));
    }
    let rd = reduced_space.dim();
    let mut out = DMatrix::<C64>::zeros(rd, rd);
    for members in groups.values() {
        for &(g1, r1) in members {
            for &(g2, r2) in members {
                out[(g1, g2)] += rho.matrix[(r1, r2)];
            }
        }
    }
    Ok(DensityMatrix { space: reduced_space, matrix: out })
}

/// Partial transpose on the parties of `gamma`: the output entry at
/// `(η₁, η₂)` is the input entry at `P_γ(η₁, η₂)`.
pub fn partial_transpose(rho: &DensityMatrix, gamma: &Bipartition) -> Result<DMatrix<C64>> {
    partial_transpose_matrix(rho.space, rho.matrix(), gamma)
}

pub(crate) fn partial_transpose_matrix(space: Space, m: &DMatrix<C64>, gamma: &Bipartition) -> Result<DMatrix<C64>> {
    let Space { n, d } = space;
    if gamma.n() != n {
        return Err(Error::InvalidInput(format!("bipartition {gamma} is for n = {}, state has n = {n}", gamma.n())));
    }
    let positions: Vec<usize> = gamma.positions().collect();
    let dim = space.dim();
    Ok(DMatrix::from_fn(dim, dim, |a, b| {
        let (x, y) = crate::indices::permute_ranks(a, b, &positions, d, n);
        m[(x, y)]
    }))
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let items: Vec<usize> = (1..=n).collect();
    crate::indices::combinations(&items, k, 0, &mut Vec::new(), &mut |s| out.push(s.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::enumerate_bipartitions;

    fn idx(s: &str, d: usize) -> MultiIndex {
        MultiIndex::parse(s, Space::new(s.len(), d).unwrap()).unwrap()
    }

    #[test]
    fn w_state_amplitudes() {
        let w = make_w_state();
        assert!((w.amplitude(&idx("001", 2)).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(w.amplitude(&idx("000", 2)), C64::new(0.0, 0.0));
        assert!((w.norm_sqr() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn ghz_state_amplitudes() {
        let g = make_ghz_default(3, 2).unwrap();
        assert!((g.amplitude(&idx("000", 2)).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((g.amplitude(&idx("111", 2)).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.support_len(), 2);
        assert!(make_ghz_state(&idx("01", 2), &idx("01", 2)).is_err());
        // Digitwise complementary pairs are accepted.
        assert!(make_ghz_state(&idx("012", 3), &idx("210", 3)).is_ok());
    }

    #[test]
    fn dicke_states() {
        let w = make_dicke_state(3, 2, 1).unwrap();
        assert_eq!(w, make_w_state());
        let d42 = make_dicke_state(4, 2, 2).unwrap();
        assert_eq!(d42.support_len(), 6);
        for (eta, c) in d42.support() {
            assert_eq!(eta.digits().iter().filter(|&&x| x == 1).count(), 2);
            assert!((c.re - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(make_dicke_state(3, 3, 1).unwrap().support_len(), 6);
        assert!(make_dicke_state(3, 2, 0).is_err());
        assert!(make_dicke_state(3, 2, 3).is_err());
    }

    #[test]
    fn singlet_amplitudes() {
        let s = make_singlet4();
        let r3 = 3f64.sqrt();
        assert!((s.amplitude(&idx("0011", 2)).re - 2.0 / (2.0 * r3)).abs() < 1e-15);
        assert!((s.amplitude(&idx("0110", 2)).re + 1.0 / (2.0 * r3)).abs() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn isotropic_endpoints() {
        let s = make_singlet4();
        let pure = make_isotropic(&s, 1.0).unwrap();
        assert!((pure.matrix() - s.projector().matrix()).norm() < 1e-15);
        let mixed = make_isotropic(&s, 0.0).unwrap();
        for r in 0..16 {
            assert!((mixed.diag(r) - 1.0 / 16.0).abs() < 1e-15);
        }
        assert!(make_isotropic(&s, 1.5).is_err());
        assert!(make_isotropic(&s, -0.1).is_err());
    }

    #[test]
    fn partial_trace_of_w() {
        let rho = make_w_state().projector();
        let g1 = Bipartition::new(&[1], 3).unwrap();
        let red = partial_trace(&rho, &g1).unwrap();
        assert!((red.entry(0, 0).re - 2.0 / 3.0).abs() < 1e-15);
        assert!((red.entry(1, 1).re - 1.0 / 3.0).abs() < 1e-15);
        assert!(red.entry(0, 1).norm() < 1e-15);
        assert!((red.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_is_pure() {
        let space = Space::new(3, 2).unwrap();
        let plus = C64::new(0.5f64.sqrt(), 0.0);
        let psi = PureState::new(space, [(idx("000", 2), plus), (idx("100", 2), plus)]).unwrap();
        for gamma in enumerate_bipartitions(3).unwrap() {
            let red = partial_trace(&psi.projector(), &gamma).unwrap();
            assert!((red.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_examples() {
        let g1 = Bipartition::new(&[1], 3).unwrap();
        let mixed = DensityMatrix::maximally_mixed(Space::new(3, 2).unwrap());
        assert_eq!(&partial_transpose(&mixed, &g1).unwrap(), mixed.matrix());

        let ghz = make_ghz_default(3, 2).unwrap().projector();
        let pt = partial_transpose(&ghz, &g1).unwrap();
        assert!((pt[(idx("100", 2).rank(), idx("011", 2).rank())].re - 0.5).abs() < 1e-15);
        assert!(pt[(0, 7)].norm() < 1e-15);
        let twice = partial_transpose_matrix(ghz.space(), &pt, &g1).unwrap();
        assert_eq!(&twice, ghz.matrix());
    }

    #[test]
    fn density_matrix_validation() {
        let space = Space::new(1, 2).unwrap();
        let bad_trace = DMatrix::from_diagonal_element(2, 2, C64::new(1.0, 0.0));
        assert!(DensityMatrix::new(space, bad_trace).is_err());
        let not_psd = DMatrix::from_row_slice(2, 2, &[C64::new(1.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-0.5, 0.0)]);
        assert!(DensityMatrix::new(space, not_psd).is_err());
        let not_herm = DMatrix::from_row_slice(2, 2, &[C64::new(0.5, 0.0), C64::new(0.1, 0.0), C64::new(0.2, 0.0), C64::new(0.5, 0.0)]);
        assert!(DensityMatrix::new(space, not_herm).is_err());
    }

    #[test]
    fn local_unitary_preserves_norm() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0].map(|x| C64::new(x * 0.5f64.sqrt(), 0.0)));
        let psi = make_w_state().apply_local(2, &h).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let back = psi.apply_local(2, &h).unwrap();
        assert!((back.to_vector() - make_w_state().to_vector()).norm() < 1e-12);
    }
}
