//! The acceptance checks, one function per criterion.
//!
//! Each check computes its quantities from the library and compares them with
//! pinned targets and tolerances. Nothing here is adjusted to make a check pass.

use std::f64::consts::SQRT_2;
use std::time::Instant;

use gmebound::ppt::ghz_family_pairs;
use gmebound::presets::{ghz_pairs, singlet4_pairs, w_pairs};
use gmebound::sampling::{
    complex_vector, random_biseparable, random_density, random_near, random_product_across, random_pure, random_sparse_pure, rng,
};
use gmebound::witness::{bisect_threshold, isotropic_pairs};
use gmebound::{
    auto_select_r, bipartite_bound_isotropic, build_ppt_witness, compare_with_wr, compile, em_bound_from_q, enumerate_bipartitions,
    gme_measure_pure, linear_entropy_coeff, linear_entropy_trace, make_dicke_state, make_ghz_default, make_isotropic,
    make_max_entangled, make_singlet4, make_w_state, materialize_r_sigma, noise_threshold, plan_settings, ppt_expectation,
    q_witness, AutoSelect, Bipartition, CompiledWitness, DecompositionPlan, DensityMatrix, DickeWitnessSpec, ElementSource,
    MultiIndex, NrVariant, PureState, Space,
};
use gmebound::observables::{ElementRef, PartMode};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

/// The Dicke tuples `(n, d, m)` used by the calibration and bridge checks.
pub const DICKE_TUPLES: [(usize, usize, usize); 6] = [(3, 2, 1), (4, 2, 1), (4, 2, 2), (5, 2, 2), (3, 3, 1), (4, 3, 2)];

/// Spaces sampled by the randomized checks.
const SPACES: [(usize, usize); 6] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)];

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    /// `PASS criterion 3 (...): detail [0.012 s]`
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} criterion {} ({}): {} [{:.3} s]", self.id, self.title, self.detail, self.seconds)
    }
}

/// Collects named sub-checks into one verdict.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.failed.push(what.clone());
        }
        self.notes.push(what);
    }

    fn close(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.check(ok, format!("{name} = {got:.12} (want {want:.12} ± {tol:e})"));
    }

    fn summary(self) -> (bool, String) {
        if self.failed.is_empty() {
            (true, self.notes.join("; "))
        } else {
            (false, format!("failed: {}", self.failed.join("; ")))
        }
    }
}

type CheckResult = gmebound::Result<(bool, String)>;

fn timed(id: u8, title: &'static str, budget: Option<f64>, body: impl FnOnce() -> CheckResult) -> Outcome {
    let start = Instant::now();
    let result = body();
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(limit) = budget {
        if seconds > limit {
            passed = false;
            detail.push_str(&format!("; runtime {seconds:.3} s over budget {limit} s"));
        }
    }
    Outcome { id, title, passed, detail, seconds }
}

/// Runs one criterion by number.
pub fn run(id: u8, seed: u64) -> Outcome {
    match id {
        1 => singlet_threshold(),
        2 => dicke_threshold(),
        3 => isotropic_bound(),
        4 => dicke_calibration(),
        5 => w_chain(),
        6 => ppt_suite(seed),
        7 => measurement_plans(seed),
        8 => soundness(seed),
        9 => bridge(seed),
        _ => Outcome { id, title: "unknown", passed: false, detail: format!("no criterion {id}"), seconds: 0.0 },
    }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA.iter().map(|&id| run(id, seed)).collect()
}

pub fn singlet_threshold() -> Outcome {
    timed(1, "four-qubit singlet threshold", Some(1.0), || {
        let witness = compile(&singlet4_pairs(), NrVariant::Maximal)?;
        let p = noise_threshold(&witness, &make_singlet4())?;
        let mut c = Checks::default();
        c.close("p*", p, 21.0 / 29.0, 1e-6);
        Ok(c.summary())
    })
}

/// Zero crossing of `Q_m^(d)` along `p|ψ⟩⟨ψ| + (1-p)1/d^n`.
pub fn dicke_noise_threshold(spec: &DickeWitnessSpec, target: &PureState) -> gmebound::Result<f64> {
    bisect_threshold(|p| q_witness(spec, &make_isotropic(target, p)?))
}

pub fn dicke_threshold() -> Outcome {
    timed(2, "Dicke witness threshold on the singlet", Some(2.0), || {
        let spec = DickeWitnessSpec::new(4, 2, 2)?;
        let p = dicke_noise_threshold(&spec, &make_singlet4())?;
        let mut c = Checks::default();
        c.close("Q zero crossing", p, 27.0 / 35.0, 1e-6);
        Ok(c.summary())
    })
}

pub fn isotropic_bound() -> Outcome {
    timed(3, "isotropic two-qutrit bound", None, || {
        let mut c = Checks::default();
        for p in [0.0, 0.25, 0.5, 1.0] {
            let closed = 2.0 * (4.0 * p - 1.0) / 27f64.sqrt();
            c.close(&format!("W(p={p})"), bipartite_bound_isotropic(3, p)?, closed, 1e-10);
        }
        let em = gme_measure_pure(&make_max_entangled(3)?)?.em;
        c.close("W(1) - E_m", bipartite_bound_isotropic(3, 1.0)? - em, 0.0, 1e-10);
        Ok(c.summary())
    })
}

pub fn dicke_calibration() -> Outcome {
    timed(4, "Dicke calibration", None, || {
        let mut c = Checks::default();
        for (n, d, m) in DICKE_TUPLES {
            let q = q_witness(&DickeWitnessSpec::new(n, d, m)?, &make_dicke_state(n, d, m)?.projector())?;
            c.close(&format!("Q({n},{d},{m})"), q, (d - 1) as f64, 1e-9);
        }
        Ok(c.summary())
    })
}

pub fn w_chain() -> Outcome {
    timed(5, "W-state chain", None, || {
        let w = make_w_state();
        let mut c = Checks::default();
        for gamma in enumerate_bipartitions(3)? {
            let (a, b) = (linear_entropy_trace(&w, &gamma)?, linear_entropy_coeff(&w, &gamma)?);
            c.close(&format!("S_L trace {gamma}"), a, 8.0 / 9.0, 1e-10);
            c.close(&format!("S_L coeff {gamma}"), b, 8.0 / 9.0, 1e-10);
        }
        c.close("E_m", gme_measure_pure(&w)?.em, 2.0 * SQRT_2 / 3.0, 1e-10);
        c.close("W_R", compile(&w_pairs(), NrVariant::Minimal)?.evaluate(&w.projector())?, SQRT_2 / 2.0, 1e-10);
        Ok(c.summary())
    })
}

fn three_qubit(s: &str) -> gmebound::Result<MultiIndex> {
    MultiIndex::parse(s, Space::new(3, 2)?)
}

pub fn ppt_suite(seed: u64) -> Outcome {
    timed(6, "PPT suite", None, || {
        let mut c = Checks::default();
        let gamma = Bipartition::new(&[1], 3)?;
        let op = build_ppt_witness(&three_qubit("001")?, &three_qubit("110")?, &gamma)?.operator().clone();
        // λ⁻ = (|101⟩ - |010⟩)/√2 transposed on party 1.
        let expected = |row: usize, col: usize| match (row, col) {
            (2, 2) | (5, 5) => 0.5,
            (1, 6) | (6, 1) => -0.5,
            _ => 0.0,
        };
        let entry_err = (0..64).map(|k| (op[(k / 8, k % 8)] - C64::new(expected(k / 8, k % 8), 0.0)).norm()).fold(0.0, f64::max);
        c.check(entry_err == 0.0, format!("operator max entry error {entry_err:e}"));

        let mut r = rng(seed);
        let space = Space::new(3, 2)?;
        let pairs = ghz_family_pairs(space);
        let bips = enumerate_bipartitions(3)?;
        let (mut route_err, mut violations, mut worst_gap) = (0.0f64, 0, f64::INFINITY);
        for _ in 0..500 {
            let pair = &pairs[r.random_range(0..pairs.len())];
            let gamma = &bips[r.random_range(0..bips.len())];
            let rank = r.random_range(1..=8);
            let rho = random_density(&mut r, space, rank);
            let w = build_ppt_witness(pair.first(), pair.second(), gamma)?;
            route_err = route_err.max((ppt_expectation(&w, &rho)? - w.closed_form(&rho)?).abs());
            let cmp = compare_with_wr(pair.first(), pair.second(), gamma, &rho)?;
            worst_gap = worst_gap.min(cmp.omega - cmp.minus_w);
            violations += usize::from(!cmp.dominance);
        }
        c.check(route_err <= 1e-12, format!("route difference {route_err:e} (tol 1e-12)"));
        c.check(violations == 0, format!("{violations} dominance violations in 500 states (min Ω+W = {worst_gap:.3e})"));
        Ok(c.summary())
    })
}

/// Largest deviation between planned elements and the true matrix elements.
fn plan_error(plan: &DecompositionPlan, rho: &DensityMatrix) -> gmebound::Result<f64> {
    let rebuilt = plan.reconstruct(rho)?;
    let mut worst = 0.0f64;
    for e in plan.elements() {
        let (row, col, re_only) = match &e.element {
            ElementRef::Diagonal(eta) => (eta.rank(), eta.rank(), true),
            ElementRef::OffDiagonal(p, gmebound::Part::Real) => (p.first().rank(), p.second().rank(), true),
            ElementRef::OffDiagonal(p, gmebound::Part::Imaginary) => (p.first().rank(), p.second().rank(), false),
        };
        let (got, want) = (rebuilt.element(row, col), rho.entry(row, col));
        let err = if re_only { (got.re - want.re).abs() } else { (got.im - want.im).abs() };
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
    }
    Ok(worst)
}

pub fn measurement_plans(seed: u64) -> Outcome {
    timed(7, "measurement planning", None, || {
        let mut c = Checks::default();
        let iso = compile(&isotropic_pairs(3)?, NrVariant::Minimal)?;
        let iso_plan = plan_settings(&iso, PartMode::RealOnly)?;
        c.check(iso_plan.setting_count() == 10, format!("qutrit settings {} (want 10)", iso_plan.setting_count()));
        let w = compile(&w_pairs(), NrVariant::Minimal)?;
        let w_plan = plan_settings(&w, PartMode::Modulus)?;
        c.check(w_plan.element_count() == 10, format!("W elements {} (want 10)", w_plan.element_count()));

        let mut r = rng(seed);
        let plans = [iso_plan, plan_settings(&iso, PartMode::Modulus)?, w_plan];
        let mut worst = 0.0f64;
        for plan in &plans {
            for _ in 0..100 {
                let rank = r.random_range(1..=plan.space().dim());
                worst = worst.max(plan_error(plan, &random_density(&mut r, plan.space(), rank))?);
            }
        }
        c.check(worst <= 1e-12, format!("reconstruction error {worst:e} (tol 1e-12)"));
        Ok(c.summary())
    })
}

fn draw_pure(r: &mut impl Rng, i: usize) -> gmebound::Result<PureState> {
    let (n, d) = SPACES[i % SPACES.len()];
    let space = Space::new(n, d)?;
    Ok(match (i / SPACES.len()) % 3 {
        0 => random_pure(r, space),
        1 => {
            let k = r.random_range(3..=6);
            random_sparse_pure(r, space, k)
        }
        _ => {
            let target = if i.is_multiple_of(2) { make_ghz_default(n, d)? } else { make_dicke_state(n, d, 1)? };
            let eps = r.random_range(0.0..0.3);
            random_near(r, &target, eps)
        }
    })
}

/// Witnesses used for the biseparable checks.
fn witness_zoo() -> gmebound::Result<Vec<CompiledWitness>> {
    let mut sets = vec![w_pairs(), singlet4_pairs(), ghz_pairs(3, 2)?, ghz_pairs(4, 3)?, ghz_pairs(2, 3)?, isotropic_pairs(3)?];
    for (n, d, m) in [(3, 2, 1), (4, 2, 2), (3, 3, 1)] {
        sets.push(materialize_r_sigma(&DickeWitnessSpec::new(n, d, m)?)?);
    }
    sets.push(auto_select_r(&make_dicke_state(4, 3, 1)?, AutoSelect::default())?);
    let mut out = Vec::new();
    for set in &sets {
        for variant in [NrVariant::Minimal, NrVariant::Maximal] {
            out.push(compile(set, variant)?);
        }
    }
    Ok(out)
}

pub fn soundness(seed: u64) -> Outcome {
    timed(8, "soundness properties", None, || {
        let mut c = Checks::default();
        let mut r = rng(seed);

        let (mut worst, mut evaluated) = (f64::NEG_INFINITY, 0);
        for i in 0..300 {
            let psi = draw_pure(&mut r, i)?;
            let Ok(selection) = auto_select_r(&psi, AutoSelect::default()) else { continue };
            let em = gme_measure_pure(&psi)?.em;
            for variant in [NrVariant::Minimal, NrVariant::Maximal] {
                if let Ok(w) = compile(&selection, variant) {
                    worst = worst.max(w.evaluate(&psi.projector())? - em);
                    evaluated += 1;
                }
            }
        }
        c.check(worst <= 1e-9 && evaluated >= 300, format!("max W - E_m = {worst:.3e} over {evaluated} evaluations"));

        let mut worst_w = f64::NEG_INFINITY;
        for w in witness_zoo()? {
            let space = w.space();
            for gamma in enumerate_bipartitions(space.n)? {
                for _ in 0..4 {
                    worst_w = worst_w.max(w.evaluate(&random_product_across(&mut r, space, &gamma).projector())?);
                }
            }
            for _ in 0..6 {
                worst_w = worst_w.max(w.evaluate(&random_biseparable(&mut r, space, 4)?)?);
            }
        }
        c.check(worst_w <= 1e-9, format!("max witness on biseparable {worst_w:.3e}"));

        let mut worst_q = f64::NEG_INFINITY;
        for (n, d, m) in DICKE_TUPLES {
            let spec = DickeWitnessSpec::new(n, d, m)?;
            let space = spec.space();
            for gamma in enumerate_bipartitions(n)? {
                for _ in 0..4 {
                    worst_q = worst_q.max(q_witness(&spec, &random_product_across(&mut r, space, &gamma).projector())?);
                }
            }
            for _ in 0..6 {
                worst_q = worst_q.max(q_witness(&spec, &random_biseparable(&mut r, space, 4)?)?);
            }
        }
        c.check(worst_q <= 1e-9, format!("max Q on biseparable {worst_q:.3e}"));

        let mut cs_ok = true;
        for _ in 0..1000 {
            let len = r.random_range(1..=12);
            let a = complex_vector(&mut r, len);
            let lhs = len as f64 * a.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let rhs = a.iter().sum::<C64>().norm_sqr();
            cs_ok &= lhs >= rhs * (1.0 - 1e-12);
        }
        c.check(cs_ok, "|I|Σ|a|² ≥ |Σa|² on 1000 vectors");

        let mut worst_excess = f64::NEG_INFINITY;
        for i in 0..200 {
            let (n, d, m) = DICKE_TUPLES[i % DICKE_TUPLES.len()];
            let rank = r.random_range(1..=6);
            let q = q_witness(&DickeWitnessSpec::new(n, d, m)?, &random_density(&mut r, Space::new(n, d)?, rank))?;
            worst_excess = worst_excess.max(q - (d - 1) as f64);
        }
        c.check(worst_excess <= 1e-9, format!("max Q - (d-1) on 200 mixed states {worst_excess:.3e}"));
        Ok(c.summary())
    })
}

pub fn bridge(seed: u64) -> Outcome {
    timed(9, "R_sigma bridge", None, || {
        let mut c = Checks::default();
        for (n, d, m) in DICKE_TUPLES {
            let spec = DickeWitnessSpec::new(n, d, m)?;
            let got = materialize_r_sigma(&spec)?.len();
            c.check(got == spec.r_sigma_size(), format!("|R_σ({n},{d},{m})| = {got} (want {})", spec.r_sigma_size()));
        }
        let mut r = rng(seed);
        let (mut worst, mut detected) = (f64::NEG_INFINITY, 0);
        for i in 0..120 {
            let (n, d, m) = DICKE_TUPLES[i % DICKE_TUPLES.len()];
            let spec = DickeWitnessSpec::new(n, d, m)?;
            let psi = if i % 2 == 0 {
                let eps = r.random_range(0.0..0.4);
                random_near(&mut r, &make_dicke_state(n, d, m)?, eps)
            } else {
                random_pure(&mut r, spec.space())
            };
            let q = q_witness(&spec, &psi.projector())?;
            detected += usize::from(q > 0.0);
            let bound = em_bound_from_q(&spec, q, NrVariant::Minimal)?;
            worst = worst.max(bound.weak - gme_measure_pure(&psi)?.em);
        }
        c.check(worst <= 1e-9, format!("max weak bound - E_m = {worst:.3e} ({detected} of 120 states with Q > 0)"));
        Ok(c.summary())
    })
}
