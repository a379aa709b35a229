//! Concrete settings: derivatives on the line (Lebesgue spectral measure),
//! Fourier series on the circle (unit weights on `ℤ`) and expansions in
//! classical orthogonal polynomials (atoms `(n, F_n(t)²)`).

mod circle;
mod line;
mod opoly;

pub use circle::{circle_constants, circle_extremal_functional};
pub use line::{
    line_constants, line_extremal_functional, taikov_constants, taikov_exponent, TaikovConstants,
    TaikovParams,
};
pub use opoly::{
    opoly_constants, opoly_extremal_functional, opoly_measure, FamilyKind, OpolyFunctional,
    OrthogonalFamily,
};

/// Sharp constants of a pointwise inequality `|φ(A)x(t)| ≤ N‖x‖ + E‖ψ(A)x‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointConstants {
    /// Evaluation point; absent for shift-invariant settings.
    pub t: Option<f64>,
    pub tau: f64,
    pub n: f64,
    pub m: f64,
    pub e: f64,
    /// Absolute error bounds on `N` and `E`.
    pub n_error: f64,
    pub e_error: f64,
    pub truncation: Option<Truncation>,
}

/// How a spectral sum was cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub terms: usize,
    /// Bounds on the omitted parts of `N²` and `M²`.
    pub n2_tail: f64,
    pub m2_tail: f64,
    /// False when the tail bound rests on an empirical envelope or the
    /// term cap was reached first.
    pub rigorous: bool,
}

fn sqrt_error(root: f64, sq_err: f64) -> f64 {
    if root > 0.0 {
        sq_err / (2.0 * root)
    } else {
        sq_err.sqrt()
    }
}

impl PointConstants {
    fn from_squares(
        t: Option<f64>,
        tau: f64,
        n2: (f64, f64),
        m2: (f64, f64),
        truncation: Option<Truncation>,
    ) -> Self {
        let n = n2.0.sqrt();
        let m = m2.0.sqrt();
        PointConstants {
            t,
            tau,
            n,
            m,
            e: tau * m,
            n_error: sqrt_error(n, n2.1),
            e_error: tau * sqrt_error(m, m2.1),
            truncation,
        }
    }
}
