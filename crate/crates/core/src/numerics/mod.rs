//! Reusable numerical kernels. All routines are pure and deterministic.

mod quad;
mod root;
mod series;
mod sup;

pub use quad::{integrate, integrate_with, QuadOptions, QuadResult, QuadValue};
pub use root::{solve_monotone, RootResult, BRACKET_HI_MAX, BRACKET_LO_MIN};
pub use series::{sum_lattice, sum_lattice_complex, sum_lattice_with, SeriesOptions, SeriesResult};
pub use sup::{
    chart_grid, sup_search, sup_search_with, ArgLocation, Growth, SupOptions, SupResult,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval whose ends may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::invalid(format!("bad interval [{lo}, {hi}]")));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::invalid(format!(
                "degenerate infinite interval [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// The integer index sets a lattice measure can live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexSet {
    /// All integers.
    Integers,
    /// Non-negative integers.
    NonNegative,
}

impl IndexSet {
    pub fn contains(&self, n: i64) -> bool {
        match self {
            IndexSet::Integers => true,
            IndexSet::NonNegative => n >= 0,
        }
    }
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub(crate) fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "rel_tol must lie in (0, 1), got {rel_tol}"
        )))
    }
}
