use std::cell::Cell;

use super::measure::{Density, LatticeWeights, SpectralMeasure};
use super::symbol::{Asymptotic, Symbol};
use crate::error::{Error, Result};
use crate::numerics::{integrate_with, sum_lattice_with, NeumaierSum, QuadOptions, SeriesOptions};

/// How a non-negative weight behaves as `|t| → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRate {
    /// Zero outside a bounded set.
    Vanishing,
    /// `weight(t) ≍ |t|^p`.
    Exact(f64),
    /// `weight(t) ≤ C|t|^p`.
    AtMost(f64),
    Unknown,
}

impl TailRate {
    fn proves_divergence(self) -> bool {
        matches!(self, TailRate::Exact(p) if p >= -1.0)
    }
}

/// `∫ weight dμ` with an error bound. `value = +∞` is returned only when
/// divergence follows from the tail rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIntegral {
    pub value: f64,
    pub error_bound: f64,
    /// Terms summed or quadrature panels used.
    pub work: usize,
}

impl SpectralIntegral {
    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }

    fn infinite() -> Self {
        SpectralIntegral {
            value: f64::INFINITY,
            error_bound: 0.0,
            work: 0,
        }
    }
}

/// Tail rate of `|φ|²|ψ|^(2m) / (1 + τ|ψ|²)^k` for any `τ > 0`.
pub fn kernel_tail(phi: &Symbol, psi: &Symbol, m: u32, k: u32) -> TailRate {
    let (m, k) = (m as f64, k as f64);
    let phi_a = phi.asymptotic();
    let psi_a = psi.asymptotic();
    if phi_a == Asymptotic::Vanishing || (m > 0.0 && psi_a == Asymptotic::Vanishing) {
        return TailRate::Vanishing;
    }
    let psi_exp = |b: f64| if b > 0.0 { 2.0 * b * (m - k) } else { 0.0 };
    match (phi_a, psi_a) {
        (Asymptotic::Exact(a), Asymptotic::Exact(b)) => TailRate::Exact(2.0 * a + psi_exp(b)),
        (Asymptotic::Exact(a), Asymptotic::Vanishing) => TailRate::Exact(2.0 * a),
        (Asymptotic::Bounded(g), Asymptotic::Exact(b)) => TailRate::AtMost(2.0 * g + psi_exp(b)),
        (Asymptotic::Bounded(g) | Asymptotic::Exact(g), _) if k >= m => {
            // |ψ|^(2m)/(1+τ|ψ|²)^k ≤ τ^(-m) whatever ψ is.
            TailRate::AtMost(2.0 * g)
        }
        (Asymptotic::Bounded(g), Asymptotic::Vanishing) => TailRate::AtMost(2.0 * g),
        _ => TailRate::Unknown,
    }
}

/// `∫ weight(t) μ(dt)` for a weight that is non-negative on the support.
pub fn spectral_integral<W>(
    measure: &SpectralMeasure,
    weight: W,
    tail: TailRate,
    rel_tol: f64,
) -> Result<SpectralIntegral>
where
    W: Fn(f64) -> f64,
{
    let negative = Cell::new(None);
    let checked = |t: f64| {
        let v = weight(t);
        if v < 0.0 && negative.get().is_none() {
            negative.set(Some((t, v)));
        }
        v
    };
    let result = integrate_measure(measure, &checked, tail, rel_tol)?;
    if let Some((t, v)) = negative.get() {
        return Err(Error::invalid(format!(
            "weight is negative ({v:e}) at t = {t}"
        )));
    }
    Ok(result)
}

fn integrate_measure<W: Fn(f64) -> f64>(
    measure: &SpectralMeasure,
    weight: &W,
    tail: TailRate,
    rel_tol: f64,
) -> Result<SpectralIntegral> {
    match measure {
        SpectralMeasure::Discrete(atoms) => {
            let mut acc = NeumaierSum::default();
            for a in atoms.iter().filter(|a| a.w > 0.0) {
                let v = weight(a.t);
                if !v.is_finite() {
                    return Err(Error::NonFinite { t: a.t, value: v });
                }
                acc.add(a.w * v);
            }
            let value = acc.total();
            Ok(SpectralIntegral {
                value,
                error_bound: f64::EPSILON * atoms.len() as f64 * value.abs(),
                work: atoms.len(),
            })
        }
        SpectralMeasure::Lattice { index_set, weights } => match weights {
            LatticeWeights::Table(m) => {
                let mut acc = NeumaierSum::default();
                for (&n, &w) in m.iter().filter(|(_, &w)| w > 0.0) {
                    let t = n as f64;
                    let v = weight(t);
                    if !v.is_finite() {
                        return Err(Error::NonFinite { t, value: v });
                    }
                    acc.add(w * v);
                }
                let value = acc.total();
                Ok(SpectralIntegral {
                    value,
                    error_bound: f64::EPSILON * m.len() as f64 * value.abs(),
                    work: m.len(),
                })
            }
            LatticeWeights::Uniform(c) => {
                if *c == 0.0 {
                    return Ok(SpectralIntegral {
                        value: 0.0,
                        error_bound: 0.0,
                        work: 0,
                    });
                }
                if tail.proves_divergence() {
                    return Ok(SpectralIntegral::infinite());
                }
                let r =
                    sum_lattice_with(|x| c * weight(x), *index_set, &SeriesOptions::new(rel_tol))?;
                Ok(SpectralIntegral {
                    value: r.value,
                    error_bound: r.tail_bound,
                    work: r.terms_used,
                })
            }
        },
        SpectralMeasure::Density { support, density } => {
            let unbounded = support.iter().any(|i| !i.is_bounded());
            if unbounded && matches!(density, Density::One) && tail.proves_divergence() {
                return Ok(SpectralIntegral::infinite());
            }
            let opts = QuadOptions::new(rel_tol);
            let mut value = NeumaierSum::default();
            let mut error_bound = 0.0;
            let mut work = 0;
            for &interval in support {
                let r = match density {
                    Density::One => integrate_with(weight, interval, &opts)?,
                    Density::Custom { f, .. } => {
                        integrate_with(|t| weight(t) * f(t), interval, &opts)?
                    }
                };
                value.add(r.value);
                error_bound += r.abs_error_estimate;
                work += r.panels_used;
            }
            Ok(SpectralIntegral {
                value: value.total(),
                error_bound,
                work,
            })
        }
    }
}

/// `‖φ(A)f‖ = (∫|φ|² dμ)^(1/2)`; `+∞` means `f ∉ D(φ(A))`.
pub fn norm_phi_f(measure: &SpectralMeasure, phi: &Symbol, rel_tol: f64) -> Result<f64> {
    if phi.is_zero() {
        return Ok(0.0);
    }
    let tail = match phi.asymptotic() {
        Asymptotic::Vanishing => TailRate::Vanishing,
        Asymptotic::Exact(a) => TailRate::Exact(2.0 * a),
        Asymptotic::Bounded(g) => TailRate::AtMost(2.0 * g),
        Asymptotic::Unknown => TailRate::Unknown,
    };
    let r = spectral_integral(measure, |t| phi.abs2(t), tail, rel_tol)?;
    Ok(r.value.sqrt())
}
