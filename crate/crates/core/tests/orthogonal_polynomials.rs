use stechkin::applications::{opoly_constants, opoly_measure, FamilyKind, OrthogonalFamily};
use stechkin::{StechkinProblem, Symbol};

fn families() -> Vec<OrthogonalFamily> {
    vec![
        OrthogonalFamily::hermite(),
        OrthogonalFamily::laguerre(0.0).unwrap(),
        OrthogonalFamily::laguerre(0.5).unwrap(),
        OrthogonalFamily::jacobi(0.0, 0.0).unwrap(),
        OrthogonalFamily::jacobi(0.5, -0.3).unwrap(),
    ]
}

/// Five interior points, chosen where each family has its mass.
pub fn interior_points(kind: FamilyKind) -> [f64; 5] {
    match kind {
        FamilyKind::Hermite => [-2.0, -0.7, 0.0, 0.4, 1.9],
        FamilyKind::Laguerre { .. } => [0.1, 0.9, 2.5, 5.0, 11.0],
        FamilyKind::Jacobi { .. } => [-0.95, -0.4, 0.05, 0.6, 0.97],
    }
}

#[test]
fn gram_matrices_to_degree_twenty() {
    for fam in families() {
        let g = fam.gram_matrix(20).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (v - target).abs() <= 1e-8,
                    "{:?}: G[{i}][{j}] = {v}",
                    fam.kind()
                );
            }
        }
    }
}

#[test]
fn differential_equation_residuals() {
    for fam in families() {
        for t in interior_points(fam.kind()) {
            for n in 0..=10 {
                let (f, f1, f2) = fam.eval_derivatives(n, t).unwrap();
                let (a, d, dd) = fam.ode_coefficients(t);
                let scale = (d * f2).abs() + ((a + dd) * f1).abs() + (fam.gamma(n) * f).abs();
                let r = fam.ode_residual(n, t).unwrap();
                assert!(
                    r <= 1e-6 * scale.max(f64::MIN_POSITIVE),
                    "{:?} n={n} t={t}: {r} vs {scale}",
                    fam.kind()
                );
            }
        }
    }
}

#[test]
fn gamma_displays() {
    let h = OrthogonalFamily::hermite();
    let l = OrthogonalFamily::laguerre(0.5).unwrap();
    let j = OrthogonalFamily::jacobi(0.5, -0.3).unwrap();
    for n in 0..=10usize {
        let k = n as f64;
        assert_eq!(h.gamma(n), -2.0 * k);
        assert_eq!(l.gamma(n), -k);
        assert_eq!(j.gamma(n), -k * (k + 0.5 - 0.3 + 1.0));
    }
}

#[test]
fn expansion_constants_match_induced_discrete_measure() {
    let cases = [
        (OrthogonalFamily::hermite(), 0.3, 2.0),
        (OrthogonalFamily::laguerre(0.5).unwrap(), 1.7, 0.5),
        (OrthogonalFamily::jacobi(0.5, -0.3).unwrap(), -0.2, 5.0),
    ];
    let (phi, psi) = (Symbol::power(1.0).unwrap(), Symbol::power(4.0).unwrap());
    for (fam, t, tau) in cases {
        let c = opoly_constants(&fam, &phi, &psi, tau, t, 10_000, 1e-10).unwrap();
        let terms = c.truncation.unwrap().terms;
        let measure = opoly_measure(&fam, t, terms - 1).unwrap();
        let d = StechkinProblem::new(measure, phi.clone(), psi.clone())
            .unwrap()
            .best_approx(tau)
            .unwrap();
        let tol = |x: f64| 1e-12 * x + 1e-15;
        assert!(
            (c.n - d.n).abs() <= tol(c.n),
            "{:?}: {} vs {}",
            fam.kind(),
            c.n,
            d.n
        );
        assert!(
            (c.e - d.e).abs() <= tol(c.e),
            "{:?}: {} vs {}",
            fam.kind(),
            c.e,
            d.e
        );
    }
}

#[test]
fn induced_measure_has_orthonormal_mass() {
    // Σ F_n(t)² over n ≤ K is the Christoffel–Darboux kernel, always positive.
    let fam = OrthogonalFamily::jacobi(0.0, 0.0).unwrap();
    let m = opoly_measure(&fam, 0.25, 12).unwrap();
    assert_eq!(m.finite_atoms().unwrap().len(), 13);
    assert!(m.total_mass() > 0.0);
}
