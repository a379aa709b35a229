use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{IndexSet, Interval, NeumaierSum};

/// A point mass `w·δ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

impl Atom {
    pub fn new(t: f64, w: f64) -> Self {
        Atom { t, w }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeWeights {
    /// Finitely many weights; missing indices carry no mass.
    Table(BTreeMap<i64, f64>),
    /// The same weight at every index.
    Uniform(f64),
}

type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Density {
    /// Lebesgue measure.
    One,
    /// `decay = Some(d)` promises `density(t) ≤ C(1 + |t|)^(-d)`.
    Custom { f: DensityFn, decay: Option<f64> },
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::One => f.write_str("One"),
            Density::Custom { decay, .. } => {
                f.debug_struct("Custom").field("decay", decay).finish()
            }
        }
    }
}

/// The scalar spectral measure `μ_f(dt) = d(E(t)f, f)`.
#[derive(Debug, Clone)]
pub enum SpectralMeasure {
    Discrete(Vec<Atom>),
    Lattice {
        index_set: IndexSet,
        weights: LatticeWeights,
    },
    Density {
        support: Vec<Interval>,
        density: Density,
    },
}

fn check_weight(w: f64, at: impl fmt::Display) -> Result<()> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "weight {w} at {at} must be finite and ≥ 0"
        )))
    }
}

impl SpectralMeasure {
    /// Atoms are sorted by location; locations must be distinct.
    pub fn discrete(mut atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !a.t.is_finite() {
                return Err(Error::invalid(format!(
                    "atom location {} is not finite",
                    a.t
                )));
            }
            check_weight(a.w, a.t)?;
        }
        atoms.sort_by(|a, b| a.t.total_cmp(&b.t));
        if let Some(w) = atoms.windows(2).find(|w| w[0].t == w[1].t) {
            return Err(Error::invalid(format!("repeated atom location {}", w[0].t)));
        }
        Ok(SpectralMeasure::Discrete(atoms))
    }

    pub fn single_atom(t: f64, w: f64) -> Result<Self> {
        Self::discrete(vec![Atom::new(t, w)])
    }

    pub fn lattice_uniform(index_set: IndexSet, w: f64) -> Result<Self> {
        check_weight(w, "every lattice point")?;
        Ok(SpectralMeasure::Lattice {
            index_set,
            weights: LatticeWeights::Uniform(w),
        })
    }

    /// Unit weights on `ℤ`.
    pub fn unit_lattice() -> Self {
        SpectralMeasure::Lattice {
            index_set: IndexSet::Integers,
            weights: LatticeWeights::Uniform(1.0),
        }
    }

    pub fn lattice_table(index_set: IndexSet, weights: BTreeMap<i64, f64>) -> Result<Self> {
        for (&n, &w) in &weights {
            if !index_set.contains(n) {
                return Err(Error::invalid(format!(
                    "index {n} is outside {index_set:?}"
                )));
            }
            check_weight(w, n)?;
        }
        Ok(SpectralMeasure::Lattice {
            index_set,
            weights: LatticeWeights::Table(weights),
        })
    }

    /// Lebesgue measure on `ℝ`.
    pub fn lebesgue() -> Self {
        SpectralMeasure::Density {
            support: vec![Interval::real_line()],
            density: Density::One,
        }
    }

    /// Intervals are sorted and must not overlap.
    pub fn density(mut support: Vec<Interval>, density: Density) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("density measure needs a non-empty support"));
        }
        support.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        if support.windows(2).any(|w| w[0].hi > w[1].lo) {
            return Err(Error::invalid("support intervals overlap"));
        }
        Ok(SpectralMeasure::Density { support, density })
    }

    /// Points carrying positive mass, when there are finitely many.
    pub fn finite_atoms(&self) -> Option<Vec<Atom>> {
        match self {
            SpectralMeasure::Discrete(a) => Some(a.iter().copied().filter(|a| a.w > 0.0).collect()),
            SpectralMeasure::Lattice {
                weights: LatticeWeights::Table(m),
                ..
            } => Some(
                m.iter()
                    .filter(|(_, &w)| w > 0.0)
                    .map(|(&n, &w)| Atom::new(n as f64, w))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Whether the support reaches `|t| → ∞`.
    pub fn has_unbounded_support(&self) -> bool {
        match self {
            SpectralMeasure::Discrete(_) => false,
            SpectralMeasure::Lattice { weights, .. } => match weights {
                LatticeWeights::Table(_) => false,
                LatticeWeights::Uniform(w) => *w > 0.0,
            },
            SpectralMeasure::Density { support, .. } => support.iter().any(|i| !i.is_bounded()),
        }
    }

    /// `μ(ℝ) = ‖f‖²`, possibly infinite.
    pub fn total_mass(&self) -> f64 {
        match self {
            SpectralMeasure::Discrete(a) => a.iter().map(|a| a.w).collect::<NeumaierSum>().total(),
            SpectralMeasure::Lattice { weights, .. } => match weights {
                LatticeWeights::Table(m) => m.values().copied().collect::<NeumaierSum>().total(),
                LatticeWeights::Uniform(w) => {
                    if *w > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                }
            },
            SpectralMeasure::Density { support, density } => match density {
                Density::One => support.iter().map(|i| i.hi - i.lo).sum(),
                Density::Custom { .. } => f64::NAN,
            },
        }
    }

    /// Intervals that cover the support; used for supremum searches.
    pub fn hull(&self) -> Vec<Interval> {
        match self {
            SpectralMeasure::Discrete(a) => match (a.first(), a.last()) {
                (Some(lo), Some(hi)) => vec![Interval { lo: lo.t, hi: hi.t }],
                _ => vec![],
            },
            SpectralMeasure::Lattice { index_set, weights } => match weights {
                LatticeWeights::Table(m) => match (m.keys().next(), m.keys().next_back()) {
                    (Some(&lo), Some(&hi)) => vec![Interval {
                        lo: lo as f64,
                        hi: hi as f64,
                    }],
                    _ => vec![],
                },
                LatticeWeights::Uniform(_) => match index_set {
                    IndexSet::Integers => vec![Interval::real_line()],
                    IndexSet::NonNegative => vec![Interval {
                        lo: 0.0,
                        hi: f64::INFINITY,
                    }],
                },
            },
            SpectralMeasure::Density { support, .. } => support.clone(),
        }
    }

    /// Multiply every weight (or the density) by `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        check_weight(c, "scale factor")?;
        Ok(match self {
            SpectralMeasure::Discrete(a) => {
                SpectralMeasure::Discrete(a.iter().map(|a| Atom::new(a.t, c * a.w)).collect())
            }
            SpectralMeasure::Lattice { index_set, weights } => SpectralMeasure::Lattice {
                index_set: *index_set,
                weights: match weights {
                    LatticeWeights::Table(m) => {
                        LatticeWeights::Table(m.iter().map(|(&n, &w)| (n, c * w)).collect())
                    }
                    LatticeWeights::Uniform(w) => LatticeWeights::Uniform(c * w),
                },
            },
            SpectralMeasure::Density { support, density } => SpectralMeasure::Density {
                support: support.clone(),
                density: match density {
                    Density::One if c == 1.0 => Density::One,
                    Density::One => Density::Custom {
                        f: Arc::new(move |_| c),
                        decay: Some(0.0),
                    },
                    Density::Custom { f, decay } => {
                        let f = f.clone();
                        Density::Custom {
                            f: Arc::new(move |t| c * f(t)),
                            decay: *decay,
                        }
                    }
                },
            },
        })
    }
}
