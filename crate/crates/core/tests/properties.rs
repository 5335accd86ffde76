use std::f64::consts::PI;

use canon_core::inverse::InverseSolver;
use canon_core::measure::{trig_moments, MeasureSpec, MomentSequence, PeriodicMeasure};
use canon_core::opuc::{
    direct_moments, g_via_opuc, h_via_opuc, moments_from_verblunsky, verblunsky_from_moments, verblunsky_from_steps,
};
use canon_core::{periodize, recover, Complex64, StepHamiltonian, VerblunskySeq};
use proptest::prelude::*;

const N: usize = 12;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| rel(*x, *y)).fold(0.0, f64::max)
}

/// Background plus a small trigonometric perturbation plus atoms in `[-π, π)`.
fn spec() -> impl Strategy<Value = MeasureSpec> {
    (
        0.5f64..1.5,
        prop::collection::vec(-0.1f64..0.1, 0..4),
        prop::collection::vec(-0.1f64..0.1, 0..4),
        prop::collection::vec((-PI..PI, 0.0f64..0.5), 0..4),
    )
        .prop_map(|(a0, a, b, atoms)| {
            let mut ac = vec![a0];
            ac.extend(a);
            let mut spec = MeasureSpec::trig_poly(ac, b);
            spec.atoms = atoms;
            spec
        })
}

fn even_spec() -> impl Strategy<Value = MeasureSpec> {
    (
        0.5f64..1.5,
        prop::collection::vec(-0.1f64..0.1, 0..4),
        prop::collection::vec((0.1f64..3.0, 0.0f64..0.5), 0..3),
        0.0f64..0.5,
    )
        .prop_map(|(a0, a, pairs, center)| {
            let mut ac = vec![a0];
            ac.extend(a);
            let mut spec = MeasureSpec::trig_poly(ac, vec![]).with_atom(0.0, center);
            for (loc, w) in pairs {
                spec = spec.with_atom(loc, w).with_atom(-loc, w);
            }
            spec
        })
}

fn moments(spec: &MeasureSpec) -> MomentSequence {
    let pm = PeriodicMeasure::from_periodic(spec.clone(), PI).unwrap();
    trig_moments(&pm, N + 1).unwrap()
}

fn conjugate(m: &MomentSequence) -> MomentSequence {
    MomentSequence::new(m.half_period(), m.as_slice().iter().map(|g| g.conj()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn routes_agree(s in spec()) {
        let m = moments(&s);
        let fast = recover(&m, N).unwrap();
        let dense = InverseSolver::default().recover_dense(&m, N).unwrap();
        let h = h_via_opuc(&m, N).unwrap().into_result().unwrap();
        let g = g_via_opuc(&m, N).unwrap().into_result().unwrap();
        prop_assert!(max_rel(&fast.hamiltonian.h11(), &h) < 1e-10);
        prop_assert!(max_rel(&fast.hamiltonian.g(), &g) < 1e-10);
        prop_assert!(max_rel(&dense.hamiltonian.h11(), &h) < 1e-10);
        prop_assert!(max_rel(&dense.hamiltonian.g(), &g) < 1e-10);
    }

    #[test]
    fn scaling_the_measure(s in spec(), c in 0.1f64..10.0) {
        let m = moments(&s);
        let base = recover(&m, N).unwrap().hamiltonian;
        let scaled = recover(&m.scaled(c), N).unwrap().hamiltonian;
        let expect: Vec<f64> = base.h11().iter().map(|h| h / c).collect();
        prop_assert!(max_rel(&scaled.h11(), &expect) < 1e-10);
        prop_assert!(max_rel(&scaled.g(), &base.g()) < 1e-10);
    }

    #[test]
    fn reflection_flips_g(s in spec()) {
        let m = moments(&s);
        let base = recover(&m, N).unwrap().hamiltonian;
        let mirrored = recover(&conjugate(&m), N).unwrap().hamiltonian;
        let flipped: Vec<f64> = base.g().iter().map(|g| -g).collect();
        prop_assert!(max_rel(&mirrored.h11(), &base.h11()) < 1e-10);
        prop_assert!(max_rel(&mirrored.g(), &flipped) < 1e-10);
    }

    #[test]
    fn moments_are_linear(s1 in spec(), atoms in prop::collection::vec((-PI..PI, 0.0f64..1.0), 0..3), lebesgue in 0.0f64..1.0) {
        let mut s2 = MeasureSpec::lebesgue(lebesgue);
        s2.atoms = atoms.clone();
        let mut sum = s1.clone().with_lebesgue(lebesgue);
        sum.atoms.extend(atoms);
        let (m1, m2, ms) = (moments(&s1), moments(&s2), moments(&sum));
        for k in 0..=N {
            prop_assert!((m1.as_slice()[k] + m2.as_slice()[k] - ms.as_slice()[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn even_measures_have_no_off_diagonal(s in even_spec()) {
        prop_assert!(s.is_even());
        let m = moments(&s);
        prop_assert!(m.is_real(1e-12));
        let h = recover(&m, N).unwrap().hamiltonian;
        prop_assert!(h.g().iter().all(|g| g.abs() < 1e-10));
    }

    #[test]
    fn direct_then_inverse(h0 in 0.1f64..10.0, ratios in prop::collection::vec(0.5f64..2.0, N), step in 0.1f64..2.0) {
        let mut h = vec![h0];
        for r in ratios {
            h.push(h.last().unwrap() * r);
        }
        let ham = StepHamiltonian::diagonal(step, &h).unwrap();
        let m = direct_moments(&ham, N).unwrap();
        prop_assert!((m.half_period() - PI / (2.0 * step)).abs() < 1e-12);
        let back = recover(&m, N).unwrap().hamiltonian;
        prop_assert!(max_rel(&back.h11(), &h) < 1e-9);
        prop_assert!(back.g().iter().all(|g| g.abs() < 1e-9));
        let v = verblunsky_from_steps(&ham).unwrap();
        let w = verblunsky_from_moments(&m).unwrap();
        for (a, b) in v.alpha.iter().zip(&w.alpha) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn verblunsky_round_trip(gamma0 in 0.1f64..10.0, raw in prop::collection::vec((0.0f64..0.8, -PI..PI), 1..N)) {
        let alpha: Vec<Complex64> = raw.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
        let v = VerblunskySeq::new(gamma0, alpha.clone()).unwrap();
        let m = moments_from_verblunsky(&v, alpha.len()).unwrap();
        let back = verblunsky_from_moments(&m).unwrap();
        prop_assert!((back.gamma0 - gamma0).abs() < 1e-12 * gamma0);
        for (a, b) in back.alpha.iter().zip(&alpha) {
            prop_assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn periodizing_a_periodic_measure(s in spec()) {
        let direct = moments(&s);
        let wrapped = trig_moments(&periodize(&s, PI).unwrap(), N + 1).unwrap();
        for k in 0..=N + 1 {
            prop_assert!((direct.as_slice()[k] - wrapped.as_slice()[k]).norm() < 1e-12);
        }
    }
}
