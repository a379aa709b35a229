use std::f64::consts::PI;

use num_complex::Complex64;

use super::PointConstants;
use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_with, Interval, QuadOptions, QuadResult};
use crate::spectral::{
    check_admissibility_with, rational_kernel, L2Condition, SpectralMeasure, Symbol,
};

/// Orders `k < r` of the derivatives and the scale `h > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaikovParams {
    pub k: u32,
    pub r: u32,
    pub h: f64,
}

impl TaikovParams {
    pub fn new(k: u32, r: u32, h: f64) -> Result<Self> {
        if k == 0 || k >= r {
            return Err(Error::invalid(format!(
                "need 0 < k < r, got k = {k}, r = {r}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid(format!(
                "h must be positive and finite, got {h}"
            )));
        }
        Ok(TaikovParams { k, r, h })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaikovConstants {
    pub a: f64,
    pub b: f64,
    /// `a·h^(−k−1/2)`.
    pub n: f64,
    /// `b·h^(r−k−1/2)`.
    pub e: f64,
}

/// Taikov's constants for `‖x^(k)‖_C ≤ a h^(−k−1/2)‖x‖ + b h^(r−k−1/2)‖x^(r)‖`:
///
/// ```text
/// a² = (r − k − 1/2) / (2r² sin(π(2k+1)/(2r)))
/// b² = (r + 1/2)     / (2r² sin(π(2k+1)/(2r)))
/// ```
pub fn taikov_constants(params: &TaikovParams) -> TaikovConstants {
    let (k, r) = (params.k as f64, params.r as f64);
    let s = (PI * (2.0 * k + 1.0) / (2.0 * r)).sin();
    let a = ((r - k - 0.5) / (2.0 * r * r) / s).sqrt();
    let b = ((r + 0.5) / (2.0 * r * r) / s).sqrt();
    TaikovConstants {
        a,
        b,
        n: a * params.h.powf(-k - 0.5),
        e: b * params.h.powf(r - k - 0.5),
    }
}

/// `(r − k − 1/2)/(k + 1/2)`, the exponent making `E·N^p` independent of
/// the scale.
pub fn taikov_exponent(k: u32, r: u32) -> f64 {
    (r as f64 - k as f64 - 0.5) / (k as f64 + 0.5)
}

fn require_line_hypothesis(phi: &Symbol, psi: &Symbol, rel_tol: f64) -> Result<()> {
    let report =
        check_admissibility_with(phi, psi, &SpectralMeasure::lebesgue(), rel_tol)?.require()?;
    match report.l2_condition {
        L2Condition::Holds | L2Condition::NotApplicable => Ok(()),
        _ => Err(Error::Admissibility(format!(
            "|φ|/(1+|ψ|²)^(1/2) is not shown to be in L₂(ℝ): {}",
            report.notes
        ))),
    }
}

/// `N² = ∫ |φ|²/(1 + τ|ψ|²)² ds` and `E = τ(∫ |φψ|²/(1 + τ|ψ|²)² ds)^(1/2)`
/// over the real line.
pub fn line_constants(
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
    require_line_hypothesis(phi, psi, rel_tol)?;
    let line = Interval::real_line();
    let n2: QuadResult = integrate(|s| rational_kernel(phi, psi, tau, 0, 2, s), line, rel_tol)?;
    let m2: QuadResult = integrate(|s| rational_kernel(phi, psi, tau, 1, 2, s), line, rel_tol)?;
    Ok(PointConstants::from_squares(
        None,
        tau,
        (n2.value, n2.abs_error_estimate),
        (m2.value, m2.abs_error_estimate),
        None,
    ))
}

/// `g_τ(x) = ∫ φ(s) x̂(s)/(1 + τ|ψ(s)|²) ds` for a Fourier image `x̂`.
///
/// The error is controlled relative to the integral of the modulus, so
/// values that cancel to zero are still resolved.
pub fn line_extremal_functional<X>(
    phi: &Symbol,
    psi: &Symbol,
    tau: f64,
    xhat: X,
    rel_tol: f64,
) -> Result<QuadResult<Complex64>>
where
    X: Fn(f64) -> Complex64,
{
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "τ must be positive and finite, got {tau}"
        )));
    }
    let line = Interval::real_line();
    let integrand = |s: f64| {
        let x = xhat(s);
        if x == Complex64::new(0.0, 0.0) {
            return x;
        }
        phi.eval(s) * x / (1.0 + tau * psi.abs2(s))
    };
    let scale: QuadResult = integrate(|s| integrand(s).norm(), line, rel_tol)?;
    let opts = QuadOptions {
        abs_tol: rel_tol * scale.value,
        ..QuadOptions::new(rel_tol)
    };
    integrate_with(integrand, line, &opts)
}
