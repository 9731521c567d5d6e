mod common;

use common::{mixed_draw, space, SPACES};
use gmebound::sampling::{complex_vector, random_pure, random_unitary, rng};
use gmebound::{enumerate_bipartitions, linear_entropy_coeff, linear_entropy_trace, partial_trace, renyi2_from_linear, Bipartition};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn coefficient_and_trace_routes_agree() {
    let mut r = rng(101);
    for i in 0..200 {
        let psi = mixed_draw(&mut r, i);
        for gamma in enumerate_bipartitions(psi.space().n).unwrap() {
            let a = linear_entropy_coeff(&psi, &gamma).unwrap();
            let b = linear_entropy_trace(&psi, &gamma).unwrap();
            assert!((a - b).abs() < 1e-10, "sample {i}, {gamma}: {a} vs {b}");
        }
    }
}

#[test]
fn complementary_reductions_share_purity() {
    let mut r = rng(102);
    for i in 0..60 {
        let psi = mixed_draw(&mut r, i);
        let n = psi.space().n;
        let rho = psi.projector();
        for gamma in enumerate_bipartitions(n).unwrap() {
            let inside = partial_trace(&rho, &gamma).unwrap().purity();
            // Tracing the other way: keep the complement.
            let comp = gamma.complement();
            let outside = if comp.contains(&1) {
                partial_trace(&rho, &Bipartition::new(&comp, n).unwrap()).unwrap().purity()
            } else {
                let kept: Vec<usize> = comp;
                reduced_purity(&psi, &kept)
            };
            assert!((inside - outside).abs() < 1e-10, "{gamma}: {inside} vs {outside}");
        }
    }
}

// Purity of the reduction onto `kept` (1-based) from the amplitudes directly.
fn reduced_purity(psi: &gmebound::PureState, kept: &[usize]) -> f64 {
    let sp = psi.space();
    let d = sp.d;
    let sub = |r: usize, parties: &[usize]| {
        let eta = gmebound::MultiIndex::from_rank(r, sp);
        parties.iter().fold(0, |acc, &p| acc * d + eta.digit(p) as usize)
    };
    let traced: Vec<usize> = (1..=sp.n).filter(|p| !kept.contains(p)).collect();
    let kd = d.pow(kept.len() as u32);
    let mut m = nalgebra::DMatrix::<num_complex::Complex64>::zeros(kd, kd);
    for a in 0..sp.dim() {
        for b in 0..sp.dim() {
            if sub(a, &traced) == sub(b, &traced) {
                m[(sub(a, kept), sub(b, kept))] += psi.amplitude_at(a) * psi.amplitude_at(b).conj();
            }
        }
    }
    (&m * &m).trace().re
}

#[test]
fn entropies_are_local_unitary_invariant() {
    let mut r = rng(103);
    for i in 0..60 {
        let (n, d) = SPACES[i % SPACES.len()];
        let psi = random_pure(&mut r, space(n, d));
        let mut rotated = psi.clone();
        for party in 1..=n {
            rotated = rotated.apply_local(party, &random_unitary(&mut r, d)).unwrap();
        }
        for gamma in enumerate_bipartitions(n).unwrap() {
            let a = linear_entropy_coeff(&psi, &gamma).unwrap();
            let b = linear_entropy_coeff(&rotated, &gamma).unwrap();
            assert!((a - b).abs() < 1e-9, "{gamma}: {a} vs {b}");
        }
    }
}

#[test]
fn entropies_stay_in_range() {
    let mut r = rng(104);
    for i in 0..100 {
        let psi = mixed_draw(&mut r, i);
        let d = psi.space().d as f64;
        for gamma in enumerate_bipartitions(psi.space().n).unwrap() {
            let s = linear_entropy_coeff(&psi, &gamma).unwrap();
            let k = gamma.len().min(psi.space().n - gamma.len()) as i32;
            assert!(s >= 0.0 && s <= 2.0 * (1.0 - d.powi(-k)) + 1e-10, "{gamma}: {s}");
        }
    }
}

#[test]
fn sum_of_squares_dominates_square_of_sum() {
    let mut r = rng(105);
    for _ in 0..1000 {
        let len = r.random_range(1..=20);
        let a = complex_vector(&mut r, len);
        let lhs = len as f64 * a.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let rhs = a.iter().sum::<num_complex::Complex64>().norm_sqr();
        assert!(lhs >= rhs - 1e-9 * lhs.max(1.0), "{lhs} < {rhs}");
    }
}

proptest! {
    #[test]
    fn renyi_is_monotone(a in 0.0f64..1.99, b in 0.0f64..1.99) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(renyi2_from_linear(lo).unwrap() <= renyi2_from_linear(hi).unwrap());
    }
}
