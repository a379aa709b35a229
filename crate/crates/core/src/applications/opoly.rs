//! Classical orthonormal polynomials and the pointwise inequalities of
//! their expansions.
//!
//! `F_n` is built from the monic three-term recurrence
//! `P_{n+1} = (t − α_n)P_n − β_n P_{n−1}` and the total mass `μ₀` of the
//! weight, which give the orthonormal form
//!
//! ```text
//! √β_{n+1} F_{n+1} = (t − α_n) F_n − √β_n F_{n−1},   F_0 = μ₀^(−1/2).
//! ```
//!
//! Spectral sums over `n` are truncated once a bound on the omitted tail,
//! built from a uniform envelope of `F_n(t)²`, drops below the tolerance.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::{PointConstants, Truncation};
use crate::error::{Error, Result};
use crate::numerics::{integrate_with, Interval, NeumaierSum, QuadOptions};
use crate::spectral::{rational_kernel, Asymptotic, Atom, SpectralMeasure, Symbol};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// Weight `e^(−t²)` on `ℝ`.
    Hermite,
    /// Weight `t^α e^(−t)` on `[0, ∞)`.
    Laguerre { alpha: f64 },
    /// Weight `(1 − t)^α (1 + t)^β` on `[−1, 1]`.
    Jacobi { alpha: f64, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalFamily {
    kind: FamilyKind,
    mu0: f64,
}

/// Gram entries up to this degree are checked on construction.
const GATE_DEGREE: usize = 4;
const GATE_TOL: f64 = 1e-8;
/// Upper limit on the number of expansion terms.
pub const TERM_CAP: usize = 10_000;
/// Cramér's constant: `|F_n(t)| e^(−t²/2) ≤ K π^(−1/4)` for Hermite.
const CRAMER: f64 = 1.086_435;

impl OrthogonalFamily {
    pub fn new(kind: FamilyKind) -> Result<Self> {
        let mu0 = match kind {
            FamilyKind::Hermite => PI.sqrt(),
            FamilyKind::Laguerre { alpha } => {
                if !(alpha > -1.0 && alpha.is_finite()) {
                    return Err(Error::invalid(format!(
                        "Laguerre parameter must exceed −1, got {alpha}"
                    )));
                }
                ln_gamma(alpha + 1.0).exp()
            }
            FamilyKind::Jacobi { alpha, beta } => {
                if !(alpha > -1.0 && beta > -1.0 && alpha.is_finite() && beta.is_finite()) {
                    return Err(Error::invalid(format!(
                        "Jacobi parameters must exceed −1, got ({alpha}, {beta})"
                    )));
                }
                ((alpha + beta + 1.0) * 2f64.ln() + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
                    - ln_gamma(alpha + beta + 2.0))
                .exp()
            }
        };
        let family = OrthogonalFamily { kind, mu0 };
        let gram = family.gram_matrix(GATE_DEGREE)?;
        let dev = gram_deviation(&gram);
        if dev > GATE_TOL {
            return Err(Error::Residual {
                what: "orthonormality of the recurrence",
                residual: dev,
                tolerance: GATE_TOL,
            });
        }
        Ok(family)
    }

    pub fn hermite() -> Self {
        Self::new(FamilyKind::Hermite).expect("Hermite recurrence is orthonormal")
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        Self::new(FamilyKind::Laguerre { alpha })
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(FamilyKind::Jacobi { alpha, beta })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn interval(&self) -> Interval {
        match self.kind {
            FamilyKind::Hermite => Interval::real_line(),
            FamilyKind::Laguerre { .. } => Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            FamilyKind::Jacobi { .. } => Interval { lo: -1.0, hi: 1.0 },
        }
    }

    pub fn weight(&self, t: f64) -> f64 {
        match self.kind {
            FamilyKind::Hermite => (-t * t).exp(),
            FamilyKind::Laguerre { alpha } => t.powf(alpha) * (-t).exp(),
            FamilyKind::Jacobi { alpha, beta } => (1.0 - t).powf(alpha) * (1.0 + t).powf(beta),
        }
    }

    /// Monic recurrence coefficients `(α_n, β_n)`; `β_0` is unused.
    pub fn recurrence(&self, n: usize) -> (f64, f64) {
        let k = n as f64;
        match self.kind {
            FamilyKind::Hermite => (0.0, k / 2.0),
            FamilyKind::Laguerre { alpha } => (2.0 * k + alpha + 1.0, k * (k + alpha)),
            FamilyKind::Jacobi { alpha: a, beta: b } => {
                let s = 2.0 * k + a + b;
                let alpha_n = if n == 0 {
                    (b - a) / (a + b + 2.0)
                } else {
                    (b * b - a * a) / (s * (s + 2.0))
                };
                let beta_n = match n {
                    0 => 0.0,
                    1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b)),
                    _ => {
                        4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))
                    }
                };
                (alpha_n, beta_n)
            }
        }
    }

    /// `γ_n`: `−2n`, `−n` or `−n(n + α + β + 1)`.
    pub fn gamma(&self, n: usize) -> f64 {
        let k = n as f64;
        match self.kind {
            FamilyKind::Hermite => -2.0 * k,
            FamilyKind::Laguerre { .. } => -k,
            FamilyKind::Jacobi { alpha, beta } => -k * (k + alpha + beta + 1.0),
        }
    }

    /// `(A(t), D(t), D'(t))` of `D y'' + (A + D')y' − γ_n y = 0`.
    pub fn ode_coefficients(&self, t: f64) -> (f64, f64, f64) {
        match self.kind {
            FamilyKind::Hermite => (-2.0 * t, 1.0, 0.0),
            FamilyKind::Laguerre { alpha } => (alpha - t, t, 1.0),
            FamilyKind::Jacobi { alpha, beta } => {
                (beta - alpha - (alpha + beta) * t, 1.0 - t * t, -2.0 * t)
            }
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let i = self.interval();
        if t.is_nan() || !i.contains(t) || t.is_infinite() {
            return Err(Error::Domain {
                t,
                interval: i.to_string(),
            });
        }
        Ok(())
    }

    /// `F_0(t), …, F_{n_max}(t)` without a domain check.
    fn values(&self, n_max: usize, t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut prev = 0.0;
        let mut cur = 1.0 / self.mu0.sqrt();
        out.push(cur);
        for k in 0..n_max {
            let (a, b) = self.recurrence(k);
            let (_, b_next) = self.recurrence(k + 1);
            let next = ((t - a) * cur - b.sqrt() * prev) / b_next.sqrt();
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }

    pub fn eval(&self, n: usize, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.values(n, t)[n])
    }

    /// All of `F_0(t), …, F_{n_max}(t)`.
    pub fn eval_all(&self, n_max: usize, t: f64) -> Result<Vec<f64>> {
        self.check_domain(t)?;
        Ok(self.values(n_max, t))
    }

    /// `(F_n, F_n', F_n'')` from the differentiated recurrence.
    pub fn eval_derivatives(&self, n: usize, t: f64) -> Result<(f64, f64, f64)> {
        self.check_domain(t)?;
        let mut p = [0.0, 1.0 / self.mu0.sqrt()];
        let mut d1 = [0.0, 0.0];
        let mut d2 = [0.0, 0.0];
        for k in 0..n {
            let (a, b) = self.recurrence(k);
            let (_, b_next) = self.recurrence(k + 1);
            let (sb, sn) = (b.sqrt(), b_next.sqrt());
            let p_next = ((t - a) * p[1] - sb * p[0]) / sn;
            let d1_next = (p[1] + (t - a) * d1[1] - sb * d1[0]) / sn;
            let d2_next = (2.0 * d1[1] + (t - a) * d2[1] - sb * d2[0]) / sn;
            p = [p[1], p_next];
            d1 = [d1[1], d1_next];
            d2 = [d2[1], d2_next];
        }
        Ok((p[1], d1[1], d2[1]))
    }

    /// `|D F_n'' + (A + D')F_n' − γ_n F_n|` at an interior point.
    pub fn ode_residual(&self, n: usize, t: f64) -> Result<f64> {
        let i = self.interval();
        if !(t > i.lo && t < i.hi) {
            return Err(Error::Domain {
                t,
                interval: format!("the interior of {i}"),
            });
        }
        let (f, f1, f2) = self.eval_derivatives(n, t)?;
        let (a, d, dd) = self.ode_coefficients(t);
        Ok((d * f2 + (a + dd) * f1 - self.gamma(n) * f).abs())
    }

    /// `G_ij = ∫_I h F_i F_j dt` for `i, j ≤ n_max`.
    pub fn gram_matrix(&self, n_max: usize) -> Result<Vec<Vec<f64>>> {
        let opts = QuadOptions {
            rel_tol: 1e-13,
            abs_tol: 1e-13,
            max_panels: 20_000,
        };
        let domain = self.interval();
        let mut g = vec![vec![0.0; n_max + 1]; n_max + 1];
        for i in 0..=n_max {
            for j in 0..=i {
                let r = integrate_with(
                    |t: f64| {
                        // Endpoint singularities of the weight carry no mass.
                        if t == domain.lo || t == domain.hi {
                            return 0.0;
                        }
                        let v = self.values(i, t);
                        self.weight(t) * v[i] * v[j]
                    },
                    domain,
                    &opts,
                )?;
                g[i][j] = r.value;
                g[j][i] = r.value;
            }
        }
        Ok(g)
    }

    /// Upper bound on `F_x(t)²` valid for all real `x ≥ 1`, or `None` when
    /// no bound is known for the parameters.
    pub fn envelope(&self, x: f64, t: f64) -> Option<f64> {
        match self.kind {
            FamilyKind::Hermite => Some(CRAMER * CRAMER / PI.sqrt() * (t * t).exp()),
            FamilyKind::Laguerre { alpha } => {
                let lg = ln_gamma(x + alpha + 1.0) - ln_gamma(x + 1.0);
                if alpha >= 0.0 {
                    Some((lg - 2.0 * ln_gamma(alpha + 1.0) + t).exp())
                } else {
                    Some(4.0 * (t - lg).exp())
                }
            }
            FamilyKind::Jacobi { alpha, beta } => {
                let mut best: Option<f64> = None;
                if alpha >= -0.5 && beta >= -0.5 && t.abs() < 1.0 {
                    let c = 2.0 * E * (2.0 + alpha.hypot(beta)) / PI;
                    best = Some(c / ((1.0 - t).powf(alpha + 0.5) * (1.0 + t).powf(beta + 0.5)));
                }
                if alpha.max(beta) >= -0.5 {
                    let end = jacobi_endpoint_square(x, alpha, beta)
                        .max(jacobi_endpoint_square(x, beta, alpha));
                    best = Some(best.map_or(end, |b| b.min(end)));
                }
                best
            }
        }
    }

    /// Growth exponent `p` of the envelope, `F_n(t)² ≲ n^p`.
    fn envelope_exponent(&self) -> f64 {
        match self.kind {
            FamilyKind::Hermite => 0.0,
            FamilyKind::Laguerre { alpha } => alpha.abs(),
            FamilyKind::Jacobi { alpha, beta } => {
                if alpha >= -0.5 && beta >= -0.5 {
                    0.0
                } else {
                    (2.0 * alpha.max(beta) + 1.0).max(0.0)
                }
            }
        }
    }
}

/// `F_x(1)²` for Jacobi `(a, b)`: `C(x+a, x)²/h_x`.
fn jacobi_endpoint_square(x: f64, a: f64, b: f64) -> f64 {
    (ln_gamma(x + a + 1.0) + (2.0 * x + a + b + 1.0).ln() + ln_gamma(x + a + b + 1.0)
        - ln_gamma(x + 1.0)
        - 2.0 * ln_gamma(a + 1.0)
        - (a + b + 1.0) * 2f64.ln()
        - ln_gamma(x + b + 1.0))
    .exp()
}

fn gram_deviation(g: &[Vec<f64>]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((v - target).abs());
        }
    }
    dev
}

/// Tail bound `Σ_{n>k} g(n) ≤ ∫_k^∞ g` for an eventually decreasing `g`.
/// The flag reports whether `g` was seen to decrease past `k`.
fn tail_integral<G: Fn(f64) -> f64>(g: G, k: usize) -> Result<(f64, bool)> {
    let k = k as f64;
    let probes = [k, 1.5 * k, 2.0 * k, 4.0 * k, 16.0 * k, 256.0 * k];
    let decreasing = probes.windows(2).all(|w| g(w[1]) <= g(w[0]));
    let r = integrate_with(
        &g,
        Interval {
            lo: k,
            hi: f64::INFINITY,
        },
        &QuadOptions {
            // Only a bound is needed; the estimated error is added on top.
            rel_tol: 1e-6,
            abs_tol: 0.0,
            max_panels: 4_000,
        },
    )?;
    Ok((r.value + r.abs_error_estimate, decreasing))
}

/// Whether `Σ |φ(n)|² F_n(t)²/(1 + |ψ(n)|²)` converges, decided from the
/// envelope growth when the symbols allow it.
fn pointwise_condition(family: &OrthogonalFamily, phi: &Symbol, psi: &Symbol) -> Option<bool> {
    let p = family.envelope_exponent();
    match (phi.asymptotic(), psi.asymptotic()) {
        (Asymptotic::Vanishing, _) => Some(true),
        (Asymptotic::Exact(a), Asymptotic::Exact(b)) => {
            let d = if b > 0.0 { 2.0 * a - 2.0 * b } else { 2.0 * a };
            Some(d + p < -1.0)
        }
        (Asymptotic::Exact(a), Asymptotic::Vanishing) => Some(2.0 * a + p < -1.0),
        (Asymptotic::Bounded(g), Asymptotic::Exact(b)) if 2.0 * g - 2.0 * b + p < -1.0 => {
            Some(true)
        }
        _ => None,
    }
}

/// Atoms `(n, F_n(t)²)` for `n ≤ cutoff`.
pub fn opoly_measure(family: &OrthogonalFamily, t: f64, cutoff: usize) -> Result<SpectralMeasure> {
    let f = family.eval_all(cutoff, t)?;
    SpectralMeasure::discrete(
        f.iter()
            .enumerate()
            .map(|(n, v)| Atom::new(n as f64, v * v))
            .collect(),
    )
}

struct Envelope<'a> {
    family: &'a OrthogonalFamily,
    t: f64,
    empirical: f64,
    rigorous: bool,
}

impl<'a> Envelope<'a> {
    fn new(family: &'a OrthogonalFamily, t: f64, values: &[f64]) -> Self {
        let rigorous = family.envelope(2.0, t).is_some();
        // Fallback: a multiple of the largest square seen in the upper half.
        let half = values.len() / 2;
        let empirical = 4.0 * values[half..].iter().map(|v| v * v).fold(0.0, f64::max);
        Envelope {
            family,
            t,
            empirical,
            rigorous,
        }
    }

    fn at(&self, x: f64) -> f64 {
        self.family.envelope(x, self.t).unwrap_or(self.empirical)
    }
}

/// `N_pt² = Σ |φ(n)F_n(t)|²/(1 + τ|ψ(n)|²)²` and `E_pt = τ(Σ |φ(n)ψ(n)F_n(t)|²/(1 + τ|ψ(n)|²)²)^(1/2)`.
///
/// The cutoff doubles from 32 until both tail bounds fall below
/// `rel_tol` times the partial sums, or `max_n` (at most 10⁴) is reached.
pub fn opoly_constants(
    family: &OrthogonalFamily,
    phi: &Symbol,
    psi: &Symbol,
    tau: f64,
    t: f64,
    max_n: usize,
    rel_tol: f64,
) -> Result<PointConstants> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "τ must be positive and finite, got {tau}"
        )));
    }
    family.check_domain(t)?;
    let cap = max_n.clamp(1, TERM_CAP);
    if pointwise_condition(family, phi, psi) == Some(false) {
        return Err(Error::Admissibility(format!(
            "Σ |φ(n)|² F_n(t)²/(1+|ψ(n)|²) diverges for φ = {phi}, ψ = {psi}"
        )));
    }
    let kn = |x: f64| rational_kernel(phi, psi, tau, 0, 2, x);
    let km = |x: f64| rational_kernel(phi, psi, tau, 1, 2, x);

    let mut k = 32.min(cap);
    loop {
        let f = family.values(k, t);
        let env = Envelope::new(family, t, &f);
        let mut n2 = NeumaierSum::default();
        let mut m2 = NeumaierSum::default();
        for (n, v) in f.iter().enumerate() {
            let x = n as f64;
            n2.add(kn(x) * v * v);
            m2.add(km(x) * v * v);
        }
        let (n2, m2) = (n2.total(), m2.total());
        let tails = (
            tail_integral(|x| kn(x) * env.at(x), k),
            tail_integral(|x| km(x) * env.at(x), k),
        );
        let ((n2_tail, dec_n), (m2_tail, dec_m)) = match tails {
            (Ok(a), Ok(b)) => (a, b),
            (Err(_), _) | (_, Err(_)) if k < cap => {
                k = (2 * k).min(cap);
                continue;
            }
            (Err(e), _) | (_, Err(e)) => {
                return Err(Error::Admissibility(format!(
                    "the expansion tail could not be bounded at n = {k}: {e}"
                )))
            }
        };
        let small = |tail: f64, sum: f64| tail <= rel_tol * sum || tail == 0.0;
        let done = small(n2_tail, n2) && small(m2_tail, m2);
        if done || k >= cap {
            let rounding = 4.0 * f64::EPSILON * (k + 1) as f64;
            let truncation = Truncation {
                terms: k + 1,
                n2_tail,
                m2_tail,
                rigorous: done && env.rigorous && dec_n && dec_m,
            };
            return Ok(PointConstants::from_squares(
                Some(t),
                tau,
                (n2, n2_tail + rounding * n2),
                (m2, m2_tail + rounding * m2),
                Some(truncation),
            ));
        }
        k = (2 * k).min(cap);
    }
}

/// Truncated value of `g_{t,τ}(x) = Σ φ(n) x_n F_n(t)/(1 + τ|ψ(n)|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpolyFunctional {
    pub value: Complex64,
    pub terms: usize,
    /// Cauchy–Schwarz bound on the omitted terms.
    pub tail_bound: f64,
    pub rigorous: bool,
}

/// `x_coeffs` gives `x_n` at the integers; between them it should be a
/// decreasing interpolant of `|x_n|`, used for the tail bound.
#[allow(clippy::too_many_arguments)]
pub fn opoly_extremal_functional<X>(
    family: &OrthogonalFamily,
    phi: &Symbol,
    psi: &Symbol,
    tau: f64,
    t: f64,
    x_coeffs: X,
    max_n: usize,
    rel_tol: f64,
) -> Result<OpolyFunctional>
where
    X: Fn(f64) -> f64,
{
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "τ must be positive and finite, got {tau}"
        )));
    }
    family.check_domain(t)?;
    let cap = max_n.clamp(1, TERM_CAP);
    let coeff = |x: f64| phi.eval(x) / (1.0 + tau * psi.abs2(x));
    let kn = |x: f64| rational_kernel(phi, psi, tau, 0, 2, x);
    let mut k = 32.min(cap);
    loop {
        let f = family.values(k, t);
        let env = Envelope::new(family, t, &f);
        let mut re = NeumaierSum::default();
        let mut im = NeumaierSum::default();
        let mut scale = 0.0;
        for (n, v) in f.iter().enumerate() {
            let x = n as f64;
            let xn = x_coeffs(x);
            if xn == 0.0 {
                continue;
            }
            let z = coeff(x) * xn * *v;
            re.add(z.re);
            im.add(z.im);
            scale += z.norm();
        }
        let value = Complex64::new(re.total(), im.total());
        let (x_tail, dec_x) = tail_integral(|s| x_coeffs(s).powi(2), k)?;
        let (g_tail, dec_g) = if x_tail == 0.0 {
            (0.0, true)
        } else {
            tail_integral(|s| kn(s) * env.at(s), k)?
        };
        let tail_bound = (x_tail * g_tail).sqrt();
        let done = tail_bound <= rel_tol * scale || tail_bound == 0.0;
        if done || k >= cap {
            return Ok(OpolyFunctional {
                value,
                terms: k + 1,
                tail_bound,
                rigorous: done && env.rigorous && dec_x && dec_g,
            });
        }
        k = (2 * k).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pow(a: f64) -> Symbol {
        Symbol::power(a).unwrap()
    }

    #[test]
    fn low_degree_values() {
        let legendre = OrthogonalFamily::jacobi(0.0, 0.0).unwrap();
        assert_relative_eq!(
            legendre.eval(0, 0.3).unwrap(),
            0.5f64.sqrt(),
            max_relative = 1e-15
        );
        let h = OrthogonalFamily::hermite();
        assert_relative_eq!(
            h.eval(0, 0.0).unwrap(),
            PI.powf(-0.25),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            h.eval(1, 1.0).unwrap(),
            2f64.sqrt() * PI.powf(-0.25),
            max_relative = 1e-15
        );
        assert!((h.eval(1, 1.0).unwrap() - 1.062_252_0).abs() < 1e-7);
        // Positive leading coefficient: F_1 = t − 1 rather than 1 − t.
        let l = OrthogonalFamily::laguerre(0.0).unwrap();
        assert_relative_eq!(l.eval(1, 2.0).unwrap(), 1.0, max_relative = 1e-15);
        assert!(l.eval(1, 10.0).unwrap() > 0.0);
    }

    #[test]
    fn domain_errors() {
        let l = OrthogonalFamily::laguerre(0.5).unwrap();
        assert!(matches!(l.eval(2, -0.1), Err(Error::Domain { .. })));
        let j = OrthogonalFamily::jacobi(0.0, 0.0).unwrap();
        assert!(j.eval(2, 1.5).is_err());
        assert!(j.ode_residual(2, 1.0).is_err());
        assert!(OrthogonalFamily::laguerre(-1.0).is_err());
        assert!(OrthogonalFamily::jacobi(0.0, -2.0).is_err());
    }

    #[test]
    fn gamma_values() {
        let h = OrthogonalFamily::hermite();
        assert_eq!(h.gamma(3), -6.0);
        let l = OrthogonalFamily::laguerre(0.5).unwrap();
        assert_eq!(l.gamma(4), -4.0);
        let j = OrthogonalFamily::jacobi(0.0, 0.0).unwrap();
        assert_eq!(j.gamma(2), -6.0);
    }

    #[test]
    fn ode_residuals() {
        let j = OrthogonalFamily::jacobi(0.0, 0.0).unwrap();
        assert_eq!(j.ode_residual(0, 0.3).unwrap(), 0.0);
        assert!(j.ode_residual(2, 0.3).unwrap() <= 1e-8 * 7.0);
        let h = OrthogonalFamily::hermite();
        assert!(h.ode_residual(3, 0.5).unwrap() <= 1e-8 * 7.0);
    }

    #[test]
    fn derivatives_against_central_differences() {
        let fam = OrthogonalFamily::jacobi(0.5, -0.3).unwrap();
        let (t, step) = (0.2, 1e-4);
        for n in [1, 4, 7] {
            let f = |x: f64| fam.eval(n, x).unwrap();
            // Sixth-order central difference for the first derivative.
            let d1 = (-f(t - 3.0 * step) + 9.0 * f(t - 2.0 * step) - 45.0 * f(t - step)
                + 45.0 * f(t + step)
                - 9.0 * f(t + 2.0 * step)
                + f(t + 3.0 * step))
                / (60.0 * step);
            let (_, e1, _) = fam.eval_derivatives(n, t).unwrap();
            assert_relative_eq!(e1, d1, max_relative = 1e-8, epsilon = 1e-10);
        }
    }

    #[test]
    fn gram_small() {
        for fam in [
            OrthogonalFamily::hermite(),
            OrthogonalFamily::laguerre(0.5).unwrap(),
            OrthogonalFamily::jacobi(0.5, -0.3).unwrap(),
        ] {
            assert!(gram_deviation(&fam.gram_matrix(6).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn envelopes_dominate() {
        let cases = [
            (OrthogonalFamily::hermite(), vec![-2.0, 0.0, 0.5, 3.0]),
            (
                OrthogonalFamily::laguerre(0.0).unwrap(),
                vec![0.0, 0.5, 4.0],
            ),
            (OrthogonalFamily::laguerre(-0.5).unwrap(), vec![0.1, 2.0]),
            (OrthogonalFamily::laguerre(2.0).unwrap(), vec![0.3, 7.0]),
            (
                OrthogonalFamily::jacobi(0.5, -0.3).unwrap(),
                vec![-0.99, 0.0, 0.9],
            ),
            (
                OrthogonalFamily::jacobi(0.0, 0.0).unwrap(),
                vec![-1.0, 0.3, 1.0],
            ),
        ];
        for (fam, ts) in cases {
            for t in ts {
                let v = fam.eval_all(200, t).unwrap();
                for (n, f) in v.iter().enumerate().skip(1) {
                    let env = fam.envelope(n as f64, t).unwrap();
                    assert!(
                        f * f <= env * (1.0 + 1e-12),
                        "{fam:?} n={n} t={t}: {} > {env}",
                        f * f
                    );
                }
            }
        }
    }

    #[test]
    fn single_surviving_term() {
        let fam = OrthogonalFamily::hermite();
        let phi = Symbol::indicator(0.0).unwrap();
        let c = opoly_constants(&fam, &phi, &pow(1.0), 1.0, 0.4, 1000, 1e-10).unwrap();
        assert_relative_eq!(c.n, fam.eval(0, 0.4).unwrap().abs(), max_relative = 1e-15);
        assert_eq!(c.e, 0.0);
        let z = opoly_constants(&fam, &Symbol::zero(), &pow(1.0), 1.0, 0.4, 1000, 1e-10).unwrap();
        assert_eq!((z.n, z.e), (0.0, 0.0));
    }

    #[test]
    fn legendre_at_zero_matches_direct_sum() {
        let fam = OrthogonalFamily::jacobi(0.0, 0.0).unwrap();
        let c = opoly_constants(&fam, &pow(1.0), &pow(3.0), 1.0, 0.0, TERM_CAP, 1e-10).unwrap();
        let v = fam.eval_all(200, 0.0).unwrap();
        let direct: f64 = v
            .iter()
            .enumerate()
            .map(|(n, f)| {
                let x = n as f64;
                x * x * f * f / (1.0 + x.powi(6)).powi(2)
            })
            .sum();
        assert_relative_eq!(c.n * c.n, direct, max_relative = 1e-10);
        assert!(c.truncation.unwrap().rigorous);
    }

    #[test]
    fn divergent_expansion_rejected() {
        let fam = OrthogonalFamily::hermite();
        let r = opoly_constants(&fam, &pow(1.0), &pow(1.0), 1.0, 0.0, 100, 1e-10);
        assert!(matches!(r, Err(Error::Admissibility(_))));
    }

    /// Orthonormal Hermite functions `H_n/√(2ⁿ n! √π)` from the physicists'
    /// recurrence `H_{n+1} = 2tH_n − 2nH_{n−1}`, rescaled step by step.
    fn hermite_oracle(n_max: usize, t: f64) -> Vec<f64> {
        let mut out = vec![PI.powf(-0.25)];
        let (mut prev, mut cur) = (0.0, PI.powf(-0.25));
        for n in 0..n_max {
            let k = n as f64;
            let next = (2.0 / (k + 1.0)).sqrt() * t * cur - (k / (k + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }

    #[test]
    fn hermite_extremal_functional_against_oracle() {
        let fam = OrthogonalFamily::hermite();
        let (phi, psi) = (pow(1.0), pow(2.0));
        let r = opoly_extremal_functional(
            &fam,
            &phi,
            &psi,
            1.0,
            0.5,
            |x| 1.0 / (1.0 + x * x),
            TERM_CAP,
            1e-12,
        )
        .unwrap();
        let f = hermite_oracle(500, 0.5);
        let oracle: f64 = f
            .iter()
            .enumerate()
            .map(|(n, v)| {
                let x = n as f64;
                x / (1.0 + x.powi(4)) / (1.0 + x * x) * v
            })
            .sum();
        assert!(
            (r.value.re - oracle).abs() <= 1e-10,
            "{} vs {oracle}",
            r.value.re
        );
        let zero =
            opoly_extremal_functional(&fam, &phi, &psi, 1.0, 0.5, |_| 0.0, 100, 1e-10).unwrap();
        assert_eq!(zero.value, Complex64::new(0.0, 0.0));
    }
}
