use proptest::prelude::*;
use stechkin::oracle::DiagonalInstance;
use stechkin::spectral::{check_admissibility, spectral_integral, TailRate};
use stechkin::{Atom, SpectralMeasure, StechkinProblem, Symbol};

fn atoms() -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::btree_map(-500i32..=500, 0.01f64..2.0, 1..10).prop_map(|m| {
        m.into_iter()
            .map(|(t, w)| Atom::new(t as f64 / 100.0, w))
            .collect()
    })
}

/// `(α_φ, α_ψ)` with `0 ≤ α_φ < α_ψ ≤ 4`.
fn exponents() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..4.0, 0.0f64..1.0).prop_map(|(b, s)| (b * s * 0.999, b))
}

fn problem(atoms: Vec<Atom>, (a, b): (f64, f64)) -> StechkinProblem {
    StechkinProblem::new(
        SpectralMeasure::discrete(atoms).unwrap(),
        Symbol::power(a).unwrap(),
        Symbol::power(b).unwrap(),
    )
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn n_decreases_and_tau_m_increases(atoms in atoms(), ex in exponents(), t1 in 0.01f64..50.0, f in 1.0f64..20.0) {
        let p = problem(atoms, ex);
        let (c1, c2) = (p.best_approx(t1).unwrap(), p.best_approx(t1 * f).unwrap());
        prop_assert!(c2.n <= c1.n * (1.0 + 1e-14));
        prop_assert!(c2.e >= c1.e * (1.0 - 1e-14));
        // Modulus of continuity of N² in τ.
        let lhs = c1.n * c1.n - c2.n * c2.n;
        prop_assert!(lhs <= 2.0 * (c2.tau - c1.tau) * c1.m * c1.m * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn hormander_identity(atoms in atoms(), ex in exponents(), tau in 0.01f64..100.0) {
        let p = problem(atoms, ex);
        let c = p.best_approx(tau).unwrap();
        let h = p.hormander_coefficient(tau).unwrap();
        prop_assert!(rel(h * h, c.n * c.n + tau * c.m * c.m) <= 1e-12);
    }

    #[test]
    fn extremal_element_attains_both_bounds(atoms in atoms(), ex in exponents(), tau in 0.01f64..100.0) {
        let x = problem(atoms, ex).extremal_element(tau).unwrap();
        let (additive, hormander) = x.relative_residuals();
        prop_assert!(additive <= 1e-12 && hormander <= 1e-12, "{additive} {hormander}");
    }

    #[test]
    fn scaling_the_measure(atoms in atoms(), ex in exponents(), tau in 0.05f64..20.0, c in 0.1f64..10.0) {
        let p = problem(atoms.clone(), ex);
        let scaled: Vec<Atom> = atoms.iter().map(|a| Atom::new(a.t, c * a.w)).collect();
        let q = problem(scaled, ex);
        let (a, b) = (p.best_approx(tau).unwrap(), q.best_approx(tau).unwrap());
        prop_assert!(rel(b.n, c.sqrt() * a.n) <= 1e-13);
        prop_assert!(rel(b.e, c.sqrt() * a.e) <= 1e-13);
    }

    #[test]
    fn spectral_integral_is_additive_and_monotone(atoms in atoms(), split in 0usize..10, k in 0.0f64..3.0) {
        let split = split.min(atoms.len());
        let w1 = |t: f64| (t * t + 1.0).powf(-k);
        let w2 = |t: f64| 1.0 + (t * t + 1.0).powf(-k);
        let whole = SpectralMeasure::discrete(atoms.clone()).unwrap();
        let total = spectral_integral(&whole, w1, TailRate::Vanishing, 1e-12).unwrap().value;
        let mut parts = 0.0;
        for chunk in [&atoms[..split], &atoms[split..]] {
            if !chunk.is_empty() {
                let m = SpectralMeasure::discrete(chunk.to_vec()).unwrap();
                parts += spectral_integral(&m, w1, TailRate::Vanishing, 1e-12).unwrap().value;
            }
        }
        prop_assert!(rel(total, parts) <= 1e-14);
        let larger = spectral_integral(&whole, w2, TailRate::Vanishing, 1e-12).unwrap().value;
        prop_assert!(larger >= total);
    }

    #[test]
    fn oracle_value_decreases_with_budget(atoms in atoms(), ex in exponents(), s in 0.05f64..0.9) {
        let inst = DiagonalInstance::new(atoms, Symbol::power(ex.0).unwrap(), Symbol::power(ex.1).unwrap()).unwrap();
        let full = inst.problem().unwrap().norm_phi_f().unwrap();
        let e1 = inst.brute_force_best_approx(s * full).unwrap().e;
        let e2 = inst.brute_force_best_approx((s + 0.05).min(1.0) * full).unwrap().e;
        prop_assert!(e2 <= e1 * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn power_rule_for_admissibility(a in 0.0f64..4.0, b in 0.0f64..4.0) {
        let r = check_admissibility(
            &Symbol::power(a).unwrap(),
            &Symbol::power(b).unwrap(),
            &SpectralMeasure::lebesgue(),
        );
        match r {
            Ok(report) => prop_assert_eq!(report.condition3_holds, a <= b),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
