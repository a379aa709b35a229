//! The parametric solution of the best approximation problem for
//! `F(x) = (φ(A)x, f)` on the class `‖ψ(A)x‖ ≤ 1`:
//!
//! ```text
//! N(τ)² = ∫ |φ|² / (1 + τ|ψ|²)² dμ
//! M(τ)² = ∫ |φψ|² / (1 + τ|ψ|²)² dμ
//! E(N(τ)) = τ M(τ)
//! ```
//!
//! together with the extremal element `x_τ`, whose spectral coefficients
//! are `conj(φ)/(1 + τ|ψ|²)`, and the single-constant (Hörmander) form
//! `|F(x)| ≤ H(τ)(‖x‖² + τ‖ψ(A)x‖²)^(1/2)` with `H² = N² + τM²`.

use num_complex::Complex64;

use crate::error::{Error, RangeEnd, Result};
use crate::numerics::{solve_monotone, sup_search, ArgLocation, Growth, Interval, NeumaierSum};
use crate::spectral::{
    check_admissibility, kernel_tail, norm_phi_f, rational_kernel, spectral_integral,
    AdmissibilityReport, Asymptotic, Atom, SpectralMeasure, Symbol,
};
use crate::Precision;

/// `(τ, N, M, E)` with `E = τM`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpConstants {
    pub tau: f64,
    pub n: f64,
    pub m: f64,
    pub e: f64,
    /// Absolute error bounds on `N` and `M` from quadrature or series tails.
    pub n_error: f64,
    pub m_error: f64,
}

impl SharpConstants {
    fn from_squares(tau: f64, n2: f64, n2_err: f64, m2: f64, m2_err: f64) -> Self {
        let n = n2.sqrt();
        let m = m2.sqrt();
        SharpConstants {
            tau,
            n,
            m,
            e: tau * m,
            n_error: sqrt_error(n, n2_err),
            m_error: sqrt_error(m, m2_err),
        }
    }

    pub fn e_error(&self) -> f64 {
        self.tau * self.m_error
    }
}

fn sqrt_error(root: f64, sq_err: f64) -> f64 {
    if root > 0.0 {
        sq_err / (2.0 * root)
    } else {
        sq_err.sqrt()
    }
}

/// `E‖ψ(A)x‖ + N‖x‖`.
pub fn additive_bound(constants: &SharpConstants, norm_x: f64, norm_psi_x: f64) -> f64 {
    constants.e * norm_psi_x + constants.n * norm_x
}

/// Spectral data of the extremal element `x_τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalElement {
    pub tau: f64,
    /// `conj(φ(t))/(1 + τ|ψ(t)|²)` at each atom; empty for measures
    /// without finitely many atoms (see [`ExtremalElement::coefficient`]).
    pub coeff: Vec<(f64, Complex64)>,
    pub norm_x: f64,
    pub norm_psi_x: f64,
    /// `|F(x_τ)|`.
    pub functional_value: f64,
    pub constants: SharpConstants,
    pub hormander_coefficient: f64,
    /// `| |F(x_τ)| − (N‖x_τ‖ + E‖ψ(A)x_τ‖) |`.
    pub additive_residual: f64,
    /// `| |F(x_τ)| − H(‖x_τ‖² + τ‖ψ(A)x_τ‖²)^(1/2) |`.
    pub hormander_residual: f64,
}

impl ExtremalElement {
    pub fn coefficient(phi: &Symbol, psi: &Symbol, tau: f64, t: f64) -> Complex64 {
        phi.eval(t).conj() / (1.0 + tau * psi.abs2(t))
    }

    /// Residuals divided by `|F(x_τ)|` (zero when both vanish).
    pub fn relative_residuals(&self) -> (f64, f64) {
        let rel = |r: f64| {
            if r == 0.0 {
                0.0
            } else {
                r / self.functional_value
            }
        };
        (rel(self.additive_residual), rel(self.hormander_residual))
    }
}

/// Behaviour of `N(τ)` and `τM(τ)` over a grid of `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub tau_grid: Vec<f64>,
    pub n_values: Vec<f64>,
    /// Grid steps where `N` increases beyond the numerical error.
    pub monotonicity_violations: usize,
    /// Grid steps where `τM(τ)` decreases beyond the numerical error.
    pub tau_m_violations: usize,
    pub continuity_max_jump: f64,
    /// Grid steps where `N(τ₁)² − N(τ₂)²` exceeds `2(τ₂ − τ₁)M(τ₁)²`.
    pub continuity_violations: usize,
    /// `N` at the smallest grid point.
    pub limit_tau0: f64,
    /// `‖φ(A)f‖`, `+∞` when `f ∉ D(φ(A))`.
    pub norm_phi_f: f64,
    /// `N` at the largest grid point.
    pub limit_tau_inf: f64,
    /// Whether `sup |φ|/(1 + τ|ψ|²) → 0` as `τ → ∞` on the support, when
    /// that can be decided.
    pub decay_condition: Option<bool>,
    /// `τM(τ)` at the smallest grid point.
    pub tau_m_limit0: f64,
}

/// The value `sup (|φ|²/(1 + τ|ψ|²))^(1/2)` and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlpConstant {
    pub value: f64,
    pub location: ArgLocation,
    /// True when an exact formula was used.
    pub closed_form: bool,
}

struct Kernels {
    n2: f64,
    n2_err: f64,
    m2: f64,
    m2_err: f64,
    h2: f64,
    h2_err: f64,
}

/// A symbol pair together with a measure that passed the admissibility check.
#[derive(Debug, Clone)]
pub struct StechkinProblem {
    measure: SpectralMeasure,
    phi: Symbol,
    psi: Symbol,
    precision: Precision,
    admissibility: AdmissibilityReport,
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "τ must be positive and finite, got {tau}"
        )))
    }
}

impl StechkinProblem {
    pub fn new(measure: SpectralMeasure, phi: Symbol, psi: Symbol) -> Result<Self> {
        let admissibility = check_admissibility(&phi, &psi, &measure)?.require()?;
        Ok(StechkinProblem {
            measure,
            phi,
            psi,
            precision: Precision::default(),
            admissibility,
        })
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn measure(&self) -> &SpectralMeasure {
        &self.measure
    }

    pub fn phi(&self) -> &Symbol {
        &self.phi
    }

    pub fn psi(&self) -> &Symbol {
        &self.psi
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn admissibility(&self) -> &AdmissibilityReport {
        &self.admissibility
    }

    fn kernels(&self, tau: f64) -> Result<Kernels> {
        check_tau(tau)?;
        if self.phi.is_zero() {
            return Ok(Kernels {
                n2: 0.0,
                n2_err: 0.0,
                m2: 0.0,
                m2_err: 0.0,
                h2: 0.0,
                h2_err: 0.0,
            });
        }
        if let Some(atoms) = self.measure.finite_atoms() {
            return Ok(self.atom_kernels(&atoms, tau));
        }
        let (phi, psi) = (&self.phi, &self.psi);
        let tol = self
            .precision
            .quad_rel_tol
            .min(self.precision.series_rel_tol);
        let n = spectral_integral(
            &self.measure,
            |t| rational_kernel(phi, psi, tau, 0, 2, t),
            kernel_tail(phi, psi, 0, 2),
            tol,
        )?;
        let m = spectral_integral(
            &self.measure,
            |t| rational_kernel(phi, psi, tau, 1, 2, t),
            kernel_tail(phi, psi, 1, 2),
            tol,
        )?;
        let h = spectral_integral(
            &self.measure,
            |t| rational_kernel(phi, psi, tau, 0, 1, t),
            kernel_tail(phi, psi, 0, 1),
            tol,
        )?;
        for (what, r) in [("N", &n), ("M", &m), ("H", &h)] {
            if r.is_infinite() {
                return Err(Error::Admissibility(format!(
                    "the integral defining {what}(τ) diverges for this measure"
                )));
            }
        }
        Ok(Kernels {
            n2: n.value,
            n2_err: n.error_bound,
            m2: m.value,
            m2_err: m.error_bound,
            h2: h.value,
            h2_err: h.error_bound,
        })
    }

    /// One pass over the atoms, so `N`, `M` and `H` share every rounding.
    fn atom_kernels(&self, atoms: &[Atom], tau: f64) -> Kernels {
        let mut n2 = NeumaierSum::default();
        let mut m2 = NeumaierSum::default();
        let mut h2 = NeumaierSum::default();
        for a in atoms {
            let p = self.phi.abs2(a.t);
            let q = self.psi.abs2(a.t);
            let d = 1.0 + tau * q;
            let h = a.w * p / d;
            h2.add(h);
            n2.add(h / d);
            m2.add(h * q / d);
        }
        let rounding = |v: f64| 4.0 * f64::EPSILON * atoms.len() as f64 * v;
        let (n2, m2, h2) = (n2.total(), m2.total(), h2.total());
        Kernels {
            n2,
            n2_err: rounding(n2),
            m2,
            m2_err: rounding(m2),
            h2,
            h2_err: rounding(h2),
        }
    }

    pub fn n_value(&self, tau: f64) -> Result<f64> {
        Ok(self.kernels(tau)?.n2.sqrt())
    }

    pub fn m_value(&self, tau: f64) -> Result<f64> {
        Ok(self.kernels(tau)?.m2.sqrt())
    }

    pub fn best_approx(&self, tau: f64) -> Result<SharpConstants> {
        let k = self.kernels(tau)?;
        Ok(SharpConstants::from_squares(
            tau, k.n2, k.n2_err, k.m2, k.m2_err,
        ))
    }

    /// `‖φ(A)f‖`, the limit of `N(τ)` as `τ → 0`.
    pub fn norm_phi_f(&self) -> Result<f64> {
        let tol = self
            .precision
            .quad_rel_tol
            .min(self.precision.series_rel_tol);
        norm_phi_f(&self.measure, &self.phi, tol)
    }

    /// `lim N(τ)` as `τ → ∞` for measures with finitely many atoms: the
    /// mass of `φf` on atoms where `ψ` vanishes.
    pub fn n_floor(&self) -> Option<f64> {
        let atoms = self.measure.finite_atoms()?;
        let s: NeumaierSum = atoms
            .iter()
            .filter(|a| self.psi.abs2(a.t) == 0.0)
            .map(|a| a.w * self.phi.abs2(a.t))
            .collect();
        Some(s.total().sqrt())
    }

    /// Whether `sup |φ|/(1 + τ|ψ|²) → 0` as `τ → ∞` over the support.
    pub fn decay_condition(&self) -> Option<bool> {
        if self.phi.is_zero() {
            return Some(true);
        }
        if let Some(floor) = self.n_floor() {
            return Some(floor == 0.0);
        }
        match (self.phi.asymptotic(), self.psi.asymptotic()) {
            (Asymptotic::Vanishing, _) => None,
            (Asymptotic::Exact(a), Asymptotic::Exact(b)) => {
                Some(a > 0.0 && b > 0.0 && a <= 2.0 * b)
            }
            (Asymptotic::Exact(_), Asymptotic::Vanishing) => Some(false),
            _ => None,
        }
    }

    /// The `τ` with `N(τ) = n_target`, and the constants there.
    pub fn solve_tau(&self, n_target: f64) -> Result<SharpConstants> {
        if !(n_target > 0.0 && n_target.is_finite()) {
            return Err(Error::invalid(format!(
                "N target must be positive and finite, got {n_target}"
            )));
        }
        let upper = self.norm_phi_f()?;
        if n_target >= upper {
            return Err(Error::OutOfRange {
                target: n_target,
                end: RangeEnd::TauZero,
                limit: upper,
                reason: format!(
                    "N(τ) < ‖φ(A)f‖ = {upper:e} for every τ > 0; for larger N the best approximation is not parametrised"
                ),
            });
        }
        if let Some(floor) = self.n_floor() {
            if n_target <= floor {
                return Err(Error::OutOfRange {
                    target: n_target,
                    end: RangeEnd::TauInfinity,
                    limit: floor,
                    reason: format!(
                        "ψ vanishes on atoms carrying φf-mass, so N(τ) stays above {floor:e} as τ → ∞"
                    ),
                });
            }
        }
        let root = solve_monotone(
            |tau| self.n_value(tau),
            n_target,
            self.precision.root_rel_tol,
        )?;
        self.best_approx(root.tau)
    }

    /// `H(τ) = (∫|φ|²/(1 + τ|ψ|²) dμ)^(1/2)`, checked against `N² + τM²`.
    pub fn hormander_coefficient(&self, tau: f64) -> Result<f64> {
        let k = self.kernels(tau)?;
        let residual = (k.h2 - (k.n2 + tau * k.m2)).abs();
        let tolerance = 1e-10 * k.h2 + k.h2_err + k.n2_err + tau * k.m2_err;
        if residual > tolerance {
            return Err(Error::Residual {
                what: "H² = N² + τM²",
                residual,
                tolerance,
            });
        }
        Ok(k.h2.sqrt())
    }

    pub fn extremal_element(&self, tau: f64) -> Result<ExtremalElement> {
        let k = self.kernels(tau)?;
        let constants = SharpConstants::from_squares(tau, k.n2, k.n2_err, k.m2, k.m2_err);
        let (phi, psi) = (&self.phi, &self.psi);
        let (coeff, norm_x2, norm_psi_x2, value) = match self.measure.finite_atoms() {
            Some(atoms) => {
                let coeff: Vec<(f64, Complex64)> = atoms
                    .iter()
                    .map(|a| (a.t, ExtremalElement::coefficient(phi, psi, tau, a.t)))
                    .collect();
                let mut nx = NeumaierSum::default();
                let mut npx = NeumaierSum::default();
                let mut re = NeumaierSum::default();
                let mut im = NeumaierSum::default();
                for (a, (_, c)) in atoms.iter().zip(&coeff) {
                    nx.add(a.w * c.norm_sqr());
                    npx.add(a.w * psi.abs2(a.t) * c.norm_sqr());
                    let z = phi.eval(a.t) * c * a.w;
                    re.add(z.re);
                    im.add(z.im);
                }
                let value = Complex64::new(re.total(), im.total()).norm();
                (coeff, nx.total(), npx.total(), value)
            }
            None => {
                // The element's norms are the defining integrals of N and M,
                // and F(x_τ) is H².
                (Vec::new(), k.n2, k.m2, k.h2)
            }
        };
        let norm_x = norm_x2.sqrt();
        let norm_psi_x = norm_psi_x2.sqrt();
        let h = k.h2.sqrt();
        Ok(ExtremalElement {
            tau,
            coeff,
            norm_x,
            norm_psi_x,
            functional_value: value,
            constants,
            hormander_coefficient: h,
            additive_residual: (value - additive_bound(&constants, norm_x, norm_psi_x)).abs(),
            hormander_residual: (value - h * (norm_x2 + tau * norm_psi_x2).sqrt()).abs(),
        })
    }

    /// Monotonicity, continuity and limits of `N(τ)` and `τM(τ)` over an
    /// increasing grid of at least three positive points.
    pub fn lemma_suite(&self, tau_grid: &[f64]) -> Result<LemmaReport> {
        if tau_grid.len() < 3 {
            return Err(Error::invalid("τ grid needs at least three points"));
        }
        for &t in tau_grid {
            check_tau(t)?;
        }
        if tau_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("τ grid must be strictly increasing"));
        }
        let consts = tau_grid
            .iter()
            .map(|&t| self.best_approx(t))
            .collect::<Result<Vec<_>>>()?;

        let mut monotonicity_violations = 0;
        let mut tau_m_violations = 0;
        let mut continuity_violations = 0;
        let mut continuity_max_jump: f64 = 0.0;
        for w in consts.windows(2) {
            let (c1, c2) = (&w[0], &w[1]);
            let n_slack = c1.n_error + c2.n_error + 4.0 * f64::EPSILON * c1.n;
            if c2.n > c1.n + n_slack {
                monotonicity_violations += 1;
            }
            let e_slack = c1.e_error() + c2.e_error() + 4.0 * f64::EPSILON * c2.e;
            if c2.e + e_slack < c1.e {
                tau_m_violations += 1;
            }
            let jump = (c1.n - c2.n).abs();
            continuity_max_jump = continuity_max_jump.max(jump);
            // N(τ₁)² − N(τ₂)² = (τ₂−τ₁)∫|φψ|²(2+(τ₁+τ₂)|ψ|²)/(D₁²D₂²) dμ ≤ 2(τ₂−τ₁)M(τ₁)².
            let lhs = c1.n * c1.n - c2.n * c2.n;
            let bound = 2.0 * (c2.tau - c1.tau) * c1.m * c1.m;
            let slack = 2.0 * (c1.n * c1.n_error + c2.n * c2.n_error)
                + 4.0 * (c2.tau - c1.tau) * c1.m * c1.m_error
                + 8.0 * f64::EPSILON * c1.n * c1.n;
            if lhs > bound + slack {
                continuity_violations += 1;
            }
        }
        let first = consts[0];
        let last = consts[consts.len() - 1];
        Ok(LemmaReport {
            tau_grid: tau_grid.to_vec(),
            n_values: consts.iter().map(|c| c.n).collect(),
            monotonicity_violations,
            tau_m_violations,
            continuity_max_jump,
            continuity_violations,
            limit_tau0: first.n,
            norm_phi_f: self.norm_phi_f()?,
            limit_tau_inf: last.n,
            decay_condition: self.decay_condition(),
            tau_m_limit0: first.e,
        })
    }
}

/// `sup_t (|φ(t)|²/(1 + τ|ψ(t)|²))^(1/2)` over `domain`. Power pairs on
/// domains of the form `ℝ`, `[0, ∞)` or `(−∞, 0]` use the exact stationary
/// point of `u^(2a)/(1 + τu^(2b))`.
pub fn hlp_constant(phi: &Symbol, psi: &Symbol, tau: f64, domain: Interval) -> Result<HlpConstant> {
    check_tau(tau)?;
    if phi.is_zero() {
        return Ok(HlpConstant {
            value: 0.0,
            location: ArgLocation::At(0.0),
            closed_form: true,
        });
    }
    let sign = if domain.hi == f64::INFINITY {
        1.0
    } else {
        -1.0
    };
    let full_ray = (domain.lo <= 0.0 && domain.hi == f64::INFINITY)
        || (domain.hi >= 0.0 && domain.lo == f64::NEG_INFINITY);
    let infinite = || HlpConstant {
        value: f64::INFINITY,
        location: if sign > 0.0 {
            ArgLocation::PlusInfinity
        } else {
            ArgLocation::MinusInfinity
        },
        closed_form: true,
    };
    let psi_exp = if psi.is_zero() {
        Some(0.0)
    } else {
        psi.power_exponent()
    };
    if let (Some(a), Some(b), true) = (phi.power_exponent(), psi_exp, full_ray) {
        // With ψ ≡ 0 the ratio is |φ|² (b = 0 but no τ in the denominator).
        let tau_eff = if psi.is_zero() { 0.0 } else { tau };
        let closed = if a == 0.0 {
            let v = if b == 0.0 { 1.0 / (1.0 + tau_eff) } else { 1.0 };
            HlpConstant {
                value: v.sqrt(),
                location: ArgLocation::At(0.0),
                closed_form: true,
            }
        } else if b == 0.0 || a > b {
            infinite()
        } else if a == b {
            HlpConstant {
                value: (1.0 / tau).sqrt(),
                location: if sign > 0.0 {
                    ArgLocation::PlusInfinity
                } else {
                    ArgLocation::MinusInfinity
                },
                closed_form: true,
            }
        } else {
            let s = a / (tau * (b - a));
            let v = s.powf(a / b) * (b - a) / b;
            HlpConstant {
                value: v.sqrt(),
                location: ArgLocation::At(sign * s.powf(1.0 / (2.0 * b))),
                closed_form: true,
            }
        };
        return Ok(closed);
    }

    let growth = match (phi.asymptotic(), psi.asymptotic()) {
        (Asymptotic::Exact(a), Asymptotic::Exact(b)) if b > 0.0 => Growth::Exponent(2.0 * (a - b)),
        (Asymptotic::Exact(a), Asymptotic::Vanishing) => Growth::Exponent(2.0 * a),
        (Asymptotic::Vanishing, _) => Growth::Exponent(-1.0),
        (Asymptotic::Bounded(g), _) if g <= 0.0 => Growth::Exponent(g.min(-0.0)),
        _ => Growth::Unknown,
    };
    let s = sup_search(|t| rational_kernel(phi, psi, tau, 0, 1, t), domain, growth)?;
    let mut best = s;
    // Table symbols live on isolated points a grid cannot see.
    if let Some(points) = phi.table_points() {
        for &(t, _) in points.iter().filter(|p| domain.contains(p.0)) {
            let v = phi.abs2(t) / (1.0 + tau * psi.abs2(t));
            if v > best.value {
                best.value = v;
                best.location = ArgLocation::At(t);
            }
        }
    }
    Ok(HlpConstant {
        value: best.value.sqrt(),
        location: best.location,
        closed_form: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pow(a: f64) -> Symbol {
        Symbol::power(a).unwrap()
    }

    fn one_atom() -> SpectralMeasure {
        SpectralMeasure::single_atom(1.0, 1.0).unwrap()
    }

    fn two_atoms() -> SpectralMeasure {
        SpectralMeasure::discrete(vec![Atom::new(1.0, 1.0), Atom::new(2.0, 1.0)]).unwrap()
    }

    fn problem(m: SpectralMeasure, a: f64, b: f64) -> StechkinProblem {
        StechkinProblem::new(m, pow(a), pow(b)).unwrap()
    }

    #[test]
    fn single_atom_values() {
        let p = problem(one_atom(), 1.0, 2.0);
        let c = p.best_approx(1.0).unwrap();
        assert_eq!((c.n, c.m, c.e), (0.5, 0.5, 0.5));
        let c = p.best_approx(3.0).unwrap();
        assert_eq!((c.n, c.m, c.e), (0.25, 0.25, 0.75));
    }

    #[test]
    fn two_atom_values() {
        let p = problem(two_atoms(), 1.0, 2.0);
        let c = p.best_approx(1.0).unwrap();
        assert_relative_eq!(c.n, (0.25f64 + 4.0 / 289.0).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.m, (0.25f64 + 64.0 / 289.0).sqrt(), max_relative = 1e-15);
        assert!((c.n - 0.513654).abs() < 1e-6);
        assert!((c.e - 0.686624).abs() < 1e-6);
    }

    #[test]
    fn zero_symbols() {
        let p = StechkinProblem::new(two_atoms(), Symbol::zero(), pow(2.0)).unwrap();
        assert_eq!(p.n_value(0.3).unwrap(), 0.0);
        let x = p.extremal_element(0.3).unwrap();
        assert!(x.coeff.iter().all(|(_, c)| c.norm() == 0.0));
        assert_eq!(x.additive_residual, 0.0);
        assert_eq!(p.hormander_coefficient(0.3).unwrap(), 0.0);
        let p = StechkinProblem::new(two_atoms(), pow(1.0), Symbol::zero()).unwrap();
        assert_eq!(p.m_value(2.0).unwrap(), 0.0);
    }

    #[test]
    fn bad_tau() {
        let p = problem(one_atom(), 1.0, 2.0);
        assert!(p.best_approx(0.0).is_err());
        assert!(p.best_approx(f64::NAN).is_err());
    }

    #[test]
    fn solve_tau_inverts() {
        let c = problem(one_atom(), 1.0, 1.0).solve_tau(0.5).unwrap();
        assert_relative_eq!(c.tau, 1.0, max_relative = 1e-10);
        // M = N = 1/(1+τ), so E = τM = 1/2.
        assert_relative_eq!(c.e, 0.5, max_relative = 1e-10);
        let c = problem(one_atom(), 1.0, 2.0).solve_tau(0.25).unwrap();
        assert_relative_eq!(c.tau, 3.0, max_relative = 1e-10);
        assert_relative_eq!(c.e, 0.75, max_relative = 1e-10);
        let p = problem(two_atoms(), 1.0, 2.0);
        let target = p.n_value(1.0).unwrap();
        assert_relative_eq!(p.solve_tau(target).unwrap().tau, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn solve_tau_range_errors() {
        let p = problem(one_atom(), 1.0, 2.0);
        match p.solve_tau(1.0) {
            Err(Error::OutOfRange { end, limit, .. }) => {
                assert_eq!(end, RangeEnd::TauZero);
                assert_eq!(limit, 1.0);
            }
            other => panic!("{other:?}"),
        }
        // ψ(0) = 0 on an atom carrying φ-mass.
        let m = SpectralMeasure::discrete(vec![Atom::new(0.0, 1.0), Atom::new(1.0, 1.0)]).unwrap();
        let p = StechkinProblem::new(m, pow(0.0), pow(1.0)).unwrap();
        assert_eq!(p.n_floor(), Some(1.0));
        match p.solve_tau(0.9) {
            Err(Error::OutOfRange { end, limit, .. }) => {
                assert_eq!(end, RangeEnd::TauInfinity);
                assert_eq!(limit, 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(p.solve_tau(1.2).is_ok());
    }

    #[test]
    fn extremal_element_certificates() {
        let x = problem(one_atom(), 1.0, 2.0).extremal_element(1.0).unwrap();
        assert_eq!(x.coeff, vec![(1.0, Complex64::new(0.5, 0.0))]);
        assert_eq!(
            (x.norm_x, x.norm_psi_x, x.functional_value),
            (0.5, 0.5, 0.5)
        );
        assert_eq!(x.additive_residual, 0.0);

        let x = problem(two_atoms(), 1.0, 2.0)
            .extremal_element(1.0)
            .unwrap();
        assert_relative_eq!(x.functional_value, 0.5 + 4.0 / 17.0, max_relative = 1e-15);
        assert!(x.additive_residual <= 1e-12);
        assert!(x.hormander_residual <= 1e-12);
        let c = x.constants;
        assert!((additive_bound(&c, x.norm_x, x.norm_psi_x) - 0.735294).abs() < 1e-6);
    }

    #[test]
    fn additive_bound_arithmetic() {
        let c = problem(one_atom(), 1.0, 2.0).best_approx(1.0).unwrap();
        assert_eq!(additive_bound(&c, 1.0, 1.0), 1.0);
        assert_eq!(additive_bound(&c, 0.0, 0.0), 0.0);
    }

    #[test]
    fn hormander_values() {
        assert_relative_eq!(
            problem(one_atom(), 1.0, 2.0)
                .hormander_coefficient(1.0)
                .unwrap(),
            0.5f64.sqrt(),
            max_relative = 1e-15
        );
        assert!(
            (problem(two_atoms(), 1.0, 2.0)
                .hormander_coefficient(1.0)
                .unwrap()
                - 0.857493)
                .abs()
                < 1e-6
        );
    }

    #[test]
    fn hlp_values() {
        let line = Interval::real_line();
        let h = hlp_constant(&pow(1.0), &pow(2.0), 1.0, line).unwrap();
        assert_relative_eq!(h.value, 0.5f64.sqrt(), max_relative = 1e-15);
        assert!(matches!(h.location, ArgLocation::At(t) if (t - 1.0).abs() < 1e-15));
        let bounded = Symbol::custom_real(|t| t.cos(), Some(0.0));
        let h = hlp_constant(&bounded, &Symbol::zero(), 7.0, line).unwrap();
        assert_relative_eq!(h.value, 1.0, max_relative = 1e-12);
        assert_eq!(
            hlp_constant(&Symbol::zero(), &pow(1.0), 1.0, line)
                .unwrap()
                .value,
            0.0
        );
        assert!(hlp_constant(&pow(2.0), &pow(1.0), 1.0, line)
            .unwrap()
            .value
            .is_infinite());
        assert_relative_eq!(
            hlp_constant(&pow(2.0), &pow(2.0), 4.0, line).unwrap().value,
            0.5
        );
    }

    #[test]
    fn hlp_closed_form_matches_search() {
        let line = Interval::real_line();
        for (a, b, tau) in [(1.0, 2.0, 0.3), (0.5, 3.0, 2.0), (2.0, 3.0, 10.0)] {
            let closed = hlp_constant(&pow(a), &pow(b), tau, line).unwrap();
            let phi = Symbol::custom_real(move |t: f64| t.abs().powf(a), Some(a));
            let psi = Symbol::custom_real(move |t: f64| t.abs().powf(b), Some(b));
            let searched = hlp_constant(&phi, &psi, tau, line).unwrap();
            assert!(!searched.closed_form);
            assert_relative_eq!(closed.value, searched.value, max_relative = 1e-10);
        }
    }

    #[test]
    fn lemma_suite_single_atom() {
        let p = problem(one_atom(), 1.0, 2.0);
        let r = p.lemma_suite(&[0.01, 0.1, 1.0, 10.0, 100.0]).unwrap();
        assert_eq!(r.monotonicity_violations, 0);
        assert_eq!(r.continuity_violations, 0);
        assert_eq!(r.tau_m_violations, 0);
        assert_relative_eq!(r.limit_tau0, 1.0 / 1.01, max_relative = 1e-15);
        assert_eq!(r.norm_phi_f, 1.0);
        assert_eq!(r.decay_condition, Some(true));
        assert!(p.lemma_suite(&[1.0, 2.0]).is_err());
        assert!(p.lemma_suite(&[1.0, 3.0, 2.0]).is_err());
    }

    #[test]
    fn lemma_suite_zero_symbol() {
        let p = StechkinProblem::new(two_atoms(), Symbol::zero(), pow(2.0)).unwrap();
        let r = p.lemma_suite(&[0.1, 1.0, 10.0]).unwrap();
        assert_eq!(r.monotonicity_violations, 0);
        assert_eq!(
            (r.limit_tau0, r.limit_tau_inf, r.tau_m_limit0),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn rejects_inadmissible_pairs() {
        let r = StechkinProblem::new(SpectralMeasure::lebesgue(), pow(2.0), pow(1.0));
        assert!(matches!(r, Err(Error::Admissibility(_))));
    }

    #[test]
    fn lebesgue_line_value() {
        let p = problem(SpectralMeasure::lebesgue(), 1.0, 2.0);
        let n = p.n_value(1.0).unwrap();
        assert_relative_eq!(
            n * n,
            std::f64::consts::PI * 2f64.sqrt() / 8.0,
            max_relative = 1e-9
        );
        let x = p.extremal_element(1.0).unwrap();
        assert!(x.coeff.is_empty());
        assert!(x.relative_residuals().0 < 1e-9);
    }
}
