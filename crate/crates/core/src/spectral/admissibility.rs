//! Admissibility of a symbol pair for a given measure: boundedness of
//! `|φ|/(1 + |ψ|²)^(1/2)` on the support (so that `D(ψ(A)) ⊂ D(φ(A))`),
//! and square integrability of the same ratio against the measure.

use serde::Serialize;

use super::integral::{kernel_tail, spectral_integral};
use super::measure::{LatticeWeights, SpectralMeasure};
use super::symbol::{rational_kernel, Asymptotic, Symbol};
use crate::error::{Error, Result};
use crate::numerics::{sup_search, Growth, IndexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum L2Condition {
    Holds,
    Fails,
    /// Finite measures with finitely many atoms satisfy it trivially.
    NotApplicable,
    /// The integral neither converged nor could be shown to diverge.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub condition3_holds: bool,
    /// Estimate of `sup |φ|/(1 + |ψ|²)^(1/2)` over the support.
    pub ess_sup_estimate: f64,
    pub l2_condition: L2Condition,
    pub notes: String,
}

impl AdmissibilityReport {
    /// Turn a failed boundedness condition into an error.
    pub fn require(self) -> Result<Self> {
        if self.condition3_holds {
            Ok(self)
        } else {
            Err(Error::Admissibility(self.notes))
        }
    }
}

fn ratio(phi: &Symbol, psi: &Symbol, t: f64) -> f64 {
    rational_kernel(phi, psi, 1.0, 0, 1, t).sqrt()
}

/// Exponent `d` with `ratio ≲ |t|^d` at infinity when boundedness can be
/// decided: `Ok(Some(d))` means bounded, `Ok(None)` means provably unbounded.
fn decide_unbounded(phi: &Symbol, psi: &Symbol) -> Result<Option<f64>> {
    use Asymptotic::*;
    let undecidable = |why: &str| {
        Err(Error::Undecidable(format!(
            "boundedness of |φ|/(1+|ψ|²)^(1/2) on an unbounded support for φ = {phi}, ψ = {psi}: {why}"
        )))
    };
    match (phi.asymptotic(), psi.asymptotic()) {
        (Vanishing, _) => Ok(Some(f64::NEG_INFINITY)),
        (Exact(a), Exact(b)) => Ok((a <= b).then_some(a - b)),
        (Exact(a), Vanishing) => Ok((a == 0.0).then_some(0.0)),
        (Exact(a), Bounded(h)) => {
            if a == 0.0 {
                Ok(Some(0.0))
            } else if a > h.max(0.0) {
                Ok(None)
            } else {
                undecidable("the growth order of ψ is only an upper bound")
            }
        }
        (Bounded(g), Exact(b)) if g <= b => Ok(Some(g - b)),
        (Bounded(g), _) if g <= 0.0 => Ok(Some(g)),
        (Exact(0.0), Unknown) => Ok(Some(0.0)),
        (Bounded(_), _) => undecidable("the growth bounds do not settle it"),
        _ => undecidable("a symbol has no growth order"),
    }
}

fn lattice_sup(phi: &Symbol, psi: &Symbol, set: IndexSet) -> f64 {
    const SCAN: i64 = 10_000;
    let lo = match set {
        IndexSet::Integers => -SCAN,
        IndexSet::NonNegative => 0,
    };
    let mut best = (lo..=SCAN)
        .map(|n| ratio(phi, psi, n as f64))
        .fold(0.0, f64::max);
    for far in [1e6, 1e9, 1e12] {
        best = best.max(ratio(phi, psi, far));
        if set == IndexSet::Integers {
            best = best.max(ratio(phi, psi, -far));
        }
    }
    best
}

pub fn check_admissibility(
    phi: &Symbol,
    psi: &Symbol,
    measure: &SpectralMeasure,
) -> Result<AdmissibilityReport> {
    check_admissibility_with(phi, psi, measure, 1e-8)
}

/// `rel_tol` governs the square-integrability integral.
pub fn check_admissibility_with(
    phi: &Symbol,
    psi: &Symbol,
    measure: &SpectralMeasure,
    rel_tol: f64,
) -> Result<AdmissibilityReport> {
    let mut notes = Vec::new();
    let (condition3_holds, ess_sup_estimate) = if phi.is_zero() {
        notes.push("φ is identically zero".to_string());
        (true, 0.0)
    } else if let Some(atoms) = measure.finite_atoms() {
        let mut best: f64 = 0.0;
        for a in &atoms {
            let r = ratio(phi, psi, a.t);
            if !r.is_finite() {
                return Err(Error::NonFinite { t: a.t, value: r });
            }
            best = best.max(r);
        }
        notes.push(format!("maximum over {} atoms", atoms.len()));
        (true, best)
    } else if !measure.has_unbounded_support() {
        let mut best: f64 = 0.0;
        for interval in measure.hull() {
            let s = sup_search(|t| ratio(phi, psi, t), interval, Growth::Unknown)?;
            best = best.max(s.value);
        }
        notes.push("supremum search over a bounded support".to_string());
        (best.is_finite(), best)
    } else {
        match decide_unbounded(phi, psi)? {
            None => {
                notes.push(format!(
                    "|φ|/(1+|ψ|²)^(1/2) grows without bound for φ = {phi}, ψ = {psi}"
                ));
                (false, f64::INFINITY)
            }
            Some(d) => {
                let best = match measure {
                    SpectralMeasure::Lattice { index_set, .. } => lattice_sup(phi, psi, *index_set),
                    _ => {
                        let mut best: f64 = 0.0;
                        for interval in measure.hull() {
                            let s = sup_search(
                                |t| ratio(phi, psi, t),
                                interval,
                                Growth::Exponent(d.min(0.0)),
                            )?;
                            best = best.max(s.value);
                        }
                        best
                    }
                };
                notes.push(format!("bounded: ratio decays like |t|^{d} or faster"));
                (true, best)
            }
        }
    };

    let l2_condition = match measure {
        SpectralMeasure::Discrete(_)
        | SpectralMeasure::Lattice {
            weights: LatticeWeights::Table(_),
            ..
        } => L2Condition::NotApplicable,
        _ if phi.is_zero() => L2Condition::Holds,
        _ => {
            let weight = |t: f64| rational_kernel(phi, psi, 1.0, 0, 1, t);
            match spectral_integral(measure, weight, kernel_tail(phi, psi, 0, 1), rel_tol) {
                Ok(r) if r.is_infinite() => {
                    notes.push("∫|φ|²/(1+|ψ|²) dμ diverges".to_string());
                    L2Condition::Fails
                }
                Ok(r) => {
                    notes.push(format!("∫|φ|²/(1+|ψ|²) dμ = {:e}", r.value));
                    L2Condition::Holds
                }
                Err(Error::NonConvergence { .. }) => {
                    notes.push("∫|φ|²/(1+|ψ|²) dμ did not converge".to_string());
                    L2Condition::Undetermined
                }
                Err(e) => return Err(e),
            }
        }
    };

    Ok(AdmissibilityReport {
        condition3_holds,
        ess_sup_estimate,
        l2_condition,
        notes: notes.join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(a: f64) -> Symbol {
        Symbol::power(a).unwrap()
    }

    #[test]
    fn line_power_pairs() {
        let r = check_admissibility(&pow(1.0), &pow(2.0), &SpectralMeasure::lebesgue()).unwrap();
        assert!(r.condition3_holds);
        assert_eq!(r.l2_condition, L2Condition::Holds);
        // sup |t|/(1+t⁴)^(1/2) = 2^(-1/2) at |t| = 1.
        assert!((r.ess_sup_estimate - 0.5f64.sqrt()).abs() < 1e-10);

        let r = check_admissibility(&pow(2.0), &pow(1.0), &SpectralMeasure::lebesgue()).unwrap();
        assert!(!r.condition3_holds);
        assert_eq!(r.ess_sup_estimate, f64::INFINITY);
        assert!(r.require().is_err());
    }

    #[test]
    fn zero_numerator() {
        let r =
            check_admissibility(&Symbol::zero(), &pow(3.0), &SpectralMeasure::lebesgue()).unwrap();
        assert!(r.condition3_holds);
        assert_eq!(r.ess_sup_estimate, 0.0);
    }

    #[test]
    fn discrete_always_bounded() {
        let m = SpectralMeasure::single_atom(3.0, 1.0).unwrap();
        let r = check_admissibility(&pow(4.0), &pow(1.0), &m).unwrap();
        assert!(r.condition3_holds);
        assert_eq!(r.l2_condition, L2Condition::NotApplicable);
        assert!((r.ess_sup_estimate - 81.0 / 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lattice_l2() {
        let m = SpectralMeasure::unit_lattice();
        let r = check_admissibility(&pow(1.0), &pow(2.0), &m).unwrap();
        assert!(r.condition3_holds);
        assert_eq!(r.l2_condition, L2Condition::Holds);
        let r = check_admissibility(&pow(1.0), &pow(1.0), &m).unwrap();
        assert!(r.condition3_holds);
        assert_eq!(r.l2_condition, L2Condition::Fails);
    }

    #[test]
    fn custom_without_growth_is_undecidable() {
        let phi = Symbol::custom_real(|t| t * t, None);
        let r = check_admissibility(&phi, &pow(2.0), &SpectralMeasure::lebesgue());
        assert!(matches!(r, Err(Error::Undecidable(_))));
        let phi = Symbol::custom_real(|t| t.cos(), Some(0.0));
        let r = check_admissibility(&phi, &pow(1.0), &SpectralMeasure::lebesgue()).unwrap();
        assert!(r.condition3_holds);
    }
}
