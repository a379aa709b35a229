use super::check_rel_tol;
use crate::error::{Error, RangeEnd, Result};

pub const BRACKET_HI_MAX: f64 = 1e12;
pub const BRACKET_LO_MIN: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub tau: f64,
    pub value: f64,
    /// Final bracket `[lo, hi]` with `f(lo) ≥ target ≥ f(hi)`.
    pub bracket: (f64, f64),
    pub f_lo: f64,
    pub f_hi: f64,
    pub evaluations: usize,
}

impl RootResult {
    /// Non-increase of `f` across the final bracket.
    pub fn bracket_is_monotone(&self) -> bool {
        self.f_lo >= self.f_hi
    }
}

/// Solve `f(τ) = target` for a continuous non-increasing `f` on `(0, ∞)`.
///
/// The bracket starts at `[1e-8, 1]`; the upper end doubles up to `1e12`
/// and the lower end shrinks by decades down to `1e-30`. Bisection then
/// runs on `ln τ` until `|f(τ) - target| ≤ rel_tol·target`.
pub fn solve_monotone<F>(mut f: F, target: f64, rel_tol: f64) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_rel_tol(rel_tol)?;
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::invalid(format!(
            "target must be positive and finite, got {target}"
        )));
    }
    let mut evaluations = 0usize;
    let mut eval = |t: f64| -> Result<f64> {
        evaluations += 1;
        let v = f(t)?;
        if v.is_nan() {
            return Err(Error::NonFinite { t, value: v });
        }
        Ok(v)
    };

    let mut hi = 1.0;
    let mut f_hi = eval(hi)?;
    while f_hi > target {
        if hi >= BRACKET_HI_MAX {
            return Err(Error::OutOfRange {
                target,
                end: RangeEnd::TauInfinity,
                limit: f_hi,
                reason: format!("f({hi:e}) = {f_hi:e} is still above the target"),
            });
        }
        hi = (hi * 2.0).min(BRACKET_HI_MAX);
        f_hi = eval(hi)?;
    }

    let mut lo = 1e-8;
    let mut f_lo = eval(lo)?;
    while f_lo < target {
        if lo <= BRACKET_LO_MIN {
            return Err(Error::OutOfRange {
                target,
                end: RangeEnd::TauZero,
                limit: f_lo,
                reason: format!("f({lo:e}) = {f_lo:e} is still below the target"),
            });
        }
        lo = (lo * 0.1).max(BRACKET_LO_MIN);
        f_lo = eval(lo)?;
    }
    let tol = rel_tol * target;
    let done = |v: f64| (v - target).abs() <= tol;
    if done(f_lo) {
        return Ok(RootResult {
            tau: lo,
            value: f_lo,
            bracket: (lo, hi),
            f_lo,
            f_hi,
            evaluations,
        });
    }
    if done(f_hi) {
        return Ok(RootResult {
            tau: hi,
            value: f_hi,
            bracket: (lo, hi),
            f_lo,
            f_hi,
            evaluations,
        });
    }

    loop {
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            // Bracket exhausted in floating point; return the closer end.
            let (tau, value) = if (f_lo - target).abs() <= (f_hi - target).abs() {
                (lo, f_lo)
            } else {
                (hi, f_hi)
            };
            return Ok(RootResult {
                tau,
                value,
                bracket: (lo, hi),
                f_lo,
                f_hi,
                evaluations,
            });
        }
        let f_mid = eval(mid)?;
        if done(f_mid) {
            return Ok(RootResult {
                tau: mid,
                value: f_mid,
                bracket: (lo, hi),
                f_lo,
                f_hi,
                evaluations,
            });
        }
        if f_mid > target {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal() {
        let r = solve_monotone(|t| Ok(1.0 / (1.0 + t)), 0.5, 1e-12).unwrap();
        assert!((r.tau - 1.0).abs() < 1e-11);
        assert!(r.bracket_is_monotone());
    }

    #[test]
    fn reciprocal_squared() {
        let r = solve_monotone(|t| Ok(1.0 / (1.0 + t).powi(2)), 0.25, 1e-12).unwrap();
        assert!((r.tau - 1.0).abs() < 1e-11);
        assert!((r.value - 0.25).abs() <= 1e-12 * 0.25);
    }

    #[test]
    fn target_above_range() {
        let r = solve_monotone(|t| Ok(1.0 / (1.0 + t)), 1.5, 1e-12);
        match r {
            Err(Error::OutOfRange { end, .. }) => assert_eq!(end, RangeEnd::TauZero),
            other => panic!("expected out of range, got {other:?}"),
        }
    }

    #[test]
    fn target_below_range() {
        // Limit at infinity is 0.2.
        let r = solve_monotone(|t| Ok(0.2 + 1.0 / (1.0 + t)), 0.1, 1e-12);
        match r {
            Err(Error::OutOfRange { end, limit, .. }) => {
                assert_eq!(end, RangeEnd::TauInfinity);
                assert!(limit > 0.2);
            }
            other => panic!("expected out of range, got {other:?}"),
        }
    }

    #[test]
    fn target_near_upper_limit_needs_small_tau() {
        let target = 1.0 - 1e-10;
        let r = solve_monotone(|t| Ok(1.0 / (1.0 + t)), target, 1e-14).unwrap();
        assert!(r.tau < 1e-8);
        assert!((r.value - target).abs() <= 1e-14 * target);
    }

    #[test]
    fn errors_propagate() {
        let r = solve_monotone(|_| Err(Error::invalid("boom")), 0.5, 1e-12);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }
}
