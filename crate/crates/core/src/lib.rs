//! Sharp constants for additive inequalities of the form
//!
//! ```text
//! |(φ(A)x, f)| ≤ N‖x‖ + E‖ψ(A)x‖
//! ```
//!
//! where `A` is self-adjoint and `φ`, `ψ` are scalar symbols. Everything is
//! expressed through the scalar spectral measure `μ_f(dt) = d(E(t)f, f)`; the
//! operator itself never appears.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: adaptive quadrature, lattice series with tail bounds,
//!   monotone root finding and supremum search.
//! * [`spectral`]: symbols, spectral measures, admissibility checks and
//!   spectral integrals.
//! * [`stechkin`]: the parametric solution `(N(τ), τM(τ))` of the best
//!   approximation problem, extremal elements, the Hörmander coefficient,
//!   the HLP constant and a behavioural suite for `N(τ)`.
//! * [`oracle`]: brute-force finite-dimensional verification.
//! * [`applications`]: the line, circle and orthogonal-polynomial settings.

pub mod applications;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod spectral;
pub mod stechkin;

pub use error::{Error, Result};
pub use spectral::{Atom, IndexSet, SpectralMeasure, Symbol};
pub use stechkin::{SharpConstants, StechkinProblem};

/// Relative tolerances used by the numerical kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub quad_rel_tol: f64,
    pub series_rel_tol: f64,
    pub root_rel_tol: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            quad_rel_tol: 1e-10,
            series_rel_tol: 1e-10,
            root_rel_tol: 1e-12,
        }
    }
}

impl Precision {
    /// Same tolerance for quadrature and series; root finding stays two
    /// orders tighter.
    pub fn uniform(rel_tol: f64) -> Self {
        Precision {
            quad_rel_tol: rel_tol,
            series_rel_tol: rel_tol,
            root_rel_tol: (rel_tol * 1e-2).max(1e-14),
        }
    }
}
