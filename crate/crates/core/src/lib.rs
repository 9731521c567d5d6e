//! Certified lower bounds on a genuine multipartite entanglement measure.
//!
//! The crate builds nonlinear witnesses from selections of density-matrix
//! elements and evaluates them on `n`-qudit states. A positive witness value
//! certifies genuine multipartite entanglement and is at the same time a lower
//! bound on `E_m`, the minimum over bipartitions of the square-rooted reduced
//! linear entropy (extended to mixed states by the convex roof).
//!
//! ```
//! use gmebound::{compile, make_isotropic, make_singlet4, noise_threshold, NrVariant, PairSet, Space};
//!
//! let space = Space::new(4, 2).unwrap();
//! let r = PairSet::from_strs(space, &[("0011", "0101"), ("0011", "1010"), ("0011", "0110"), ("0011", "1001")]).unwrap();
//! let w = compile(&r, NrVariant::Maximal).unwrap();
//! assert!(w.evaluate(&make_isotropic(&make_singlet4(), 0.8).unwrap()).unwrap() > 0.0);
//! let p = noise_threshold(&w, &make_singlet4()).unwrap();
//! assert!((p - 21.0 / 29.0).abs() < 1e-9);
//! ```

pub mod dicke;
pub mod entropy;
pub mod error;
pub mod indices;
pub mod io;
pub mod observables;
pub mod ppt;
pub mod presets;
pub mod sampling;
pub mod states;
pub mod witness;

pub use dicke::{dimensionality_certificate, em_bound_from_q, materialize_r_sigma, q_witness, DickeWitnessSpec, SigmaOrder};
pub use entropy::{gme_measure_pure, linear_entropy_coeff, linear_entropy_trace, renyi2_from_linear, EntropyReport};
pub use error::{Error, Result};
pub use indices::{enumerate_bipartitions, pair_is_fixed, permute_pair, Bipartition, IndexPair, MultiIndex, Space};
pub use observables::{decompose_diagonal, decompose_offdiagonal, gell_mann_basis, plan_settings, DecompositionPlan, GellMannKind, GellMannOp, Part};
pub use ppt::{build_ppt_witness, compare_with_wr, ppt_expectation, PptComparison, PptWitness};
pub use states::{
    make_dicke_state, make_ghz_default, make_ghz_state, make_isotropic, make_max_entangled, make_singlet4, make_w_state,
    partial_trace, partial_transpose, DensityMatrix, NoiseModel, PureState,
};
pub use witness::{
    auto_select_r, bipartite_bound_isotropic, compile, noise_threshold, AutoSelect, CompiledWitness, ElementSource, NrVariant,
    PairSet,
};
