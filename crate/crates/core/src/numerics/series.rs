//! Lattice sums `Σ_{n ∈ ℤ or ℤ₊} term(n)` with rigorous tail brackets.
//!
//! Once the terms of one side are seen to decrease in modulus (with a fixed
//! sign) three times in a row, the remainder after index `n` is bracketed by
//! the integral test,
//!
//! ```text
//! ∫_{n+1}^∞ term ≤ Σ_{m>n} term(m) ≤ ∫_n^∞ term,
//! ```
//!
//! and the midpoint is added to the partial sum. The reported `tail_bound`
//! is the half-width of the bracket plus the quadrature error. This needs
//! `term` to be a smooth, eventually monotone function of a real argument
//! that agrees with the series at the integers.

use num_complex::Complex64;

use super::{check_rel_tol, integrate_with, IndexSet, Interval, NeumaierSum, QuadOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult<T = f64> {
    pub value: T,
    pub tail_bound: f64,
    pub terms_used: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Budget per side of the lattice.
    pub max_terms: usize,
}

impl SeriesOptions {
    pub fn new(rel_tol: f64) -> Self {
        SeriesOptions {
            rel_tol,
            abs_tol: 0.0,
            max_terms: 20_000_000,
        }
    }
}

const MONOTONE_RUN: usize = 3;

struct Side {
    value: f64,
    bound: f64,
    terms: usize,
}

fn tail_bracket<F: Fn(f64) -> f64>(
    g: &F,
    n: f64,
    scale: f64,
    opts: &SeriesOptions,
) -> Result<(f64, f64)> {
    let quad = QuadOptions {
        rel_tol: (opts.rel_tol * 1e-2).max(1e-14),
        abs_tol: opts.rel_tol * scale * 1e-3,
        max_panels: 2_000,
    };
    let first = integrate_with(g, Interval { lo: n, hi: n + 1.0 }, &quad)?;
    let rest = integrate_with(
        g,
        Interval {
            lo: n + 1.0,
            hi: f64::INFINITY,
        },
        &quad,
    )?;
    let estimate = rest.value + 0.5 * first.value;
    let bound = 0.5 * first.value.abs() + first.abs_error_estimate + rest.abs_error_estimate;
    Ok((estimate, bound))
}

fn sum_side<F: Fn(f64) -> f64>(
    term: &F,
    sign: f64,
    start: u64,
    opts: &SeriesOptions,
) -> Result<Side> {
    let g = |x: f64| term(sign * x);
    let mut acc = NeumaierSum::default();
    let mut prev: Option<f64> = None;
    let mut run = 0usize;
    let mut next_check = start;
    let mut n = start;
    let mut terms = 0usize;
    loop {
        if terms >= opts.max_terms {
            return Err(Error::NonConvergence {
                what: "lattice series (no decay detected)",
                estimate: acc.total(),
                error: prev.map_or(f64::INFINITY, f64::abs),
                work: terms,
            });
        }
        let x = sign * n as f64;
        let v = term(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { t: x, value: v });
        }
        acc.add(v);
        terms += 1;
        if let Some(p) = prev {
            let both_zero = v == 0.0 && p == 0.0;
            let shrinking = v.abs() < p.abs() && v * p >= 0.0;
            run = if both_zero || shrinking { run + 1 } else { 0 };
        }
        prev = Some(v);

        if run >= MONOTONE_RUN && n >= next_check {
            let partial = acc.total();
            let scale = partial.abs().max(opts.abs_tol);
            if 0.5 * v.abs() <= opts.rel_tol * scale {
                if let Ok((estimate, bound)) = tail_bracket(&g, n as f64, scale, opts) {
                    let value = partial + estimate;
                    if bound <= opts.rel_tol * value.abs() || bound <= opts.abs_tol {
                        return Ok(Side {
                            value,
                            bound,
                            terms,
                        });
                    }
                }
                next_check = n + (n / 4).max(1);
            }
        }
        n += 1;
    }
}

/// Sum `term(n)` over the index set to relative tolerance `rel_tol`.
pub fn sum_lattice<F: Fn(f64) -> f64>(
    term: F,
    index_set: IndexSet,
    rel_tol: f64,
) -> Result<SeriesResult> {
    sum_lattice_with(term, index_set, &SeriesOptions::new(rel_tol))
}

pub fn sum_lattice_with<F: Fn(f64) -> f64>(
    term: F,
    index_set: IndexSet,
    opts: &SeriesOptions,
) -> Result<SeriesResult> {
    check_rel_tol(opts.rel_tol)?;
    match index_set {
        IndexSet::NonNegative => {
            let side = sum_side(&term, 1.0, 0, opts)?;
            Ok(SeriesResult {
                value: side.value,
                tail_bound: side.bound,
                terms_used: side.terms,
            })
        }
        IndexSet::Integers => {
            let center = term(0.0);
            if !center.is_finite() {
                return Err(Error::NonFinite {
                    t: 0.0,
                    value: center,
                });
            }
            let pos = sum_side(&term, 1.0, 1, opts)?;
            let neg = sum_side(&term, -1.0, 1, opts)?;
            let value: NeumaierSum = [center, pos.value, neg.value].into_iter().collect();
            Ok(SeriesResult {
                value: value.total(),
                tail_bound: pos.bound + neg.bound,
                terms_used: 1 + pos.terms + neg.terms,
            })
        }
    }
}

/// Complex series, summed as two real series.
pub fn sum_lattice_complex<F: Fn(f64) -> Complex64>(
    term: F,
    index_set: IndexSet,
    opts: &SeriesOptions,
) -> Result<SeriesResult<Complex64>> {
    let re = sum_lattice_with(|x| term(x).re, index_set, opts)?;
    let im = sum_lattice_with(|x| term(x).im, index_set, opts)?;
    Ok(SeriesResult {
        value: Complex64::new(re.value, im.value),
        tail_bound: re.tail_bound + im.tail_bound,
        terms_used: re.terms_used.max(im.terms_used),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_series() {
        let r = sum_lattice(|_| 0.0, IndexSet::Integers, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.terms_used >= 1);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn geometric_series() {
        let r = sum_lattice(|x: f64| 2f64.powf(-x), IndexSet::NonNegative, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() <= r.tail_bound + 1e-15);
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(r.tail_bound <= 1e-10 * r.value);
    }

    #[test]
    fn rational_series_over_integers() {
        // Frozen from extended-precision summation.
        let exact = 0.531_046_991_776_716_9;
        let term = |x: f64| x * x / (1.0 + x.powi(4)).powi(2);
        for tol in [1e-10, 1e-13] {
            let r = sum_lattice(term, IndexSet::Integers, tol).unwrap();
            assert!((r.value - exact).abs() <= r.tail_bound, "{r:?}");
            assert!(r.tail_bound <= tol * r.value);
        }
    }

    #[test]
    fn slow_decay_uses_integral_tail() {
        // Σ_{n≥1} 1/n² = π²/6; the n = 0 term is replaced by 0.
        let r = sum_lattice(
            |x: f64| if x == 0.0 { 0.0 } else { 1.0 / (x * x) },
            IndexSet::NonNegative,
            1e-10,
        )
        .unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((r.value - exact).abs() <= r.tail_bound + 1e-14);
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn divergent_series_fails() {
        let opts = SeriesOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_terms: 10_000,
        };
        let r = sum_lattice_with(|x: f64| x * x, IndexSet::Integers, &opts);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn complex_series() {
        let opts = SeriesOptions::new(1e-10);
        let r = sum_lattice_complex(
            |x: f64| Complex64::new(2f64.powf(-x), 3f64.powf(-x)),
            IndexSet::NonNegative,
            &opts,
        )
        .unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-10);
        assert!((r.value.im - 1.5).abs() < 1e-10);
    }
}
