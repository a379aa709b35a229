use num_complex::Complex64;

use super::PointConstants;
use crate::error::{Error, Result};
use crate::numerics::{sum_lattice, sum_lattice_complex, IndexSet, SeriesOptions, SeriesResult};
use crate::spectral::{
    check_admissibility_with, rational_kernel, L2Condition, SpectralMeasure, Symbol,
};

/// `N² = Σ_ℤ |φ(n)|²/(1 + τ|ψ(n)|²)²`, `E = τ(Σ_ℤ |φ(n)ψ(n)|²/(1 + τ|ψ(n)|²)²)^(1/2)`.
pub fn circle_constants(
    phi: &Symbol,
    psi: &Symbol,
    tau: f64,
    rel_tol: f64,
) -> Result<PointConstants> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "τ must be positive and finite, got {tau}"
        )));
    }
    if phi.is_zero() {
        return Ok(PointConstants::from_squares(
            None,
            tau,
            (0.0, 0.0),
            (0.0, 0.0),
            None,
        ));
    }
    let report =
        check_admissibility_with(phi, psi, &SpectralMeasure::unit_lattice(), rel_tol)?.require()?;
    if report.l2_condition != L2Condition::Holds {
        return Err(Error::Admissibility(format!(
            "{{|φ(n)|/(1+|ψ(n)|²)^(1/2)}} is not shown to be square summable: {}",
            report.notes
        )));
    }
    let n2 = sum_lattice(
        |x| rational_kernel(phi, psi, tau, 0, 2, x),
        IndexSet::Integers,
        rel_tol,
    )?;
    let m2 = sum_lattice(
        |x| rational_kernel(phi, psi, tau, 1, 2, x),
        IndexSet::Integers,
        rel_tol,
    )?;
    Ok(PointConstants::from_squares(
        None,
        tau,
        (n2.value, n2.tail_bound),
        (m2.value, m2.tail_bound),
        None,
    ))
}

/// `g_τ(x) = Σ_ℤ φ(n) x̂(n)/(1 + τ|ψ(n)|²)`.
///
/// `xhat` is sampled at the integers; between them it should be a smooth
/// interpolant, which the integral-test tail bound relies on.
pub fn circle_extremal_functional<X>(
    phi: &Symbol,
    psi: &Symbol,
    tau: f64,
    xhat: X,
    rel_tol: f64,
) -> Result<SeriesResult<Complex64>>
where
    X: Fn(f64) -> Complex64,
{
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "τ must be positive and finite, got {tau}"
        )));
    }
    sum_lattice_complex(
        |x| {
            let v = xhat(x);
            if v == Complex64::new(0.0, 0.0) {
                return v;
            }
            phi.eval(x) * v / (1.0 + tau * psi.abs2(x))
        },
        IndexSet::Integers,
        &SeriesOptions::new(rel_tol),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(a: f64) -> Symbol {
        Symbol::power(a).unwrap()
    }

    #[test]
    fn circle_value() {
        let c = circle_constants(&pow(1.0), &pow(2.0), 1.0, 1e-10).unwrap();
        assert!((c.n * c.n - 0.531_047).abs() < 1e-6);
        assert!(c.n_error < 1e-10);
        let z = circle_constants(&Symbol::zero(), &pow(2.0), 1.0, 1e-10).unwrap();
        assert_eq!((z.n, z.e), (0.0, 0.0));
    }

    #[test]
    fn circle_value_is_twice_the_half_sum() {
        let c = circle_constants(&pow(1.0), &pow(2.0), 1.0, 1e-12).unwrap();
        let half = sum_lattice(
            |x| x * x / (1.0 + x.powi(4)).powi(2),
            IndexSet::NonNegative,
            1e-12,
        )
        .unwrap();
        assert!((c.n * c.n - 2.0 * half.value).abs() < 1e-11);
    }

    #[test]
    fn extremal_functional_symmetry() {
        let (phi, psi) = (pow(1.0), pow(2.0));
        let r = circle_extremal_functional(
            &phi,
            &psi,
            1.0,
            |x| Complex64::new(1.0 / (1.0 + x * x), 0.0),
            1e-10,
        )
        .unwrap();
        assert!(r.value.norm() < 1e-12);
        let r = circle_extremal_functional(&phi, &psi, 1.0, |_| Complex64::new(0.0, 0.0), 1e-10)
            .unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        let delta = |x: f64| Complex64::new(if x == 0.0 { 1.0 } else { 0.0 }, 0.0);
        let r = circle_extremal_functional(&phi, &psi, 1.0, delta, 1e-10).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }
}
