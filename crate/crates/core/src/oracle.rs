//! Brute-force check of the parametric solution in finitely many dimensions.
//!
//! A discrete measure with atoms `(t_j, w_j)` is the diagonal model: the
//! target functional is `x ↦ Σ x_j conj(h_j)` with `h_j = conj(φ_j) f_j`,
//! `f_j = √w_j`, and a competitor `g` has deviation
//!
//! ```text
//! U(g) = sup { |Σ x_j conj(h_j − g_j)| : Σ |ψ_j x_j|² ≤ 1 }
//!      = (Σ |h_j − g_j|² / |ψ_j|²)^(1/2).
//! ```
//!
//! Minimising `U` over `‖g‖ ≤ N` is a norm-constrained least squares
//! problem solved here by bisection on the KKT multiplier, independently of
//! the spectral integrals.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{Atom, SpectralMeasure, Symbol};
use crate::stechkin::StechkinProblem;

#[derive(Debug, Clone)]
pub struct DiagonalInstance {
    atoms: Vec<Atom>,
    phi: Symbol,
    psi: Symbol,
    phi_j: Vec<Complex64>,
    psi_j: Vec<Complex64>,
    f_j: Vec<f64>,
}

/// A bounded functional `x ↦ Σ x_j conj(g_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalVector {
    pub g: Vec<Complex64>,
    pub norm: f64,
}

impl FunctionalVector {
    pub fn new(g: Vec<Complex64>) -> Self {
        let norm = norm(&g);
        FunctionalVector { g, norm }
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationAudit {
    pub samples: usize,
    /// Largest `U(g) − U(g')` over the feasible perturbations `g'`.
    pub max_improvement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub e: f64,
    pub g: FunctionalVector,
    pub lagrange_multiplier: f64,
    pub audit: PerturbationAudit,
}

/// Relative residuals of one instance at one `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremResiduals {
    pub tau: f64,
    /// Oracle optimum at budget `N(τ)` against `τM(τ)`.
    pub oracle_vs_tau_m: f64,
    /// `U(g_τ)` against `τM(τ)`.
    pub deviation_vs_tau_m: f64,
    /// `‖g_τ‖` against `N(τ)`.
    pub norm_g_vs_n: f64,
    /// Largest `|g_oracle − g_τ|` over the atoms.
    pub g_match: f64,
    /// Additive equality at the extremal element.
    pub extremal_equality: f64,
    /// Hörmander equality at the extremal element.
    pub hormander_equality: f64,
    pub audit: PerturbationAudit,
}

impl TheoremResiduals {
    pub fn max(&self) -> f64 {
        [
            self.oracle_vs_tau_m,
            self.deviation_vs_tau_m,
            self.norm_g_vs_n,
            self.g_match,
            self.extremal_equality,
            self.hormander_equality,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

const AUDIT_SAMPLES: usize = 200;
const NORM_TOL: f64 = 1e-13;

impl DiagonalInstance {
    pub fn new(atoms: Vec<Atom>, phi: Symbol, psi: Symbol) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("an instance needs at least one atom"));
        }
        if let Some(a) = atoms.iter().find(|a| a.w.is_nan() || a.w <= 0.0) {
            return Err(Error::invalid(format!(
                "atom weight {} at t = {} must be positive",
                a.w, a.t
            )));
        }
        let atoms = match SpectralMeasure::discrete(atoms)? {
            SpectralMeasure::Discrete(a) => a,
            _ => unreachable!(),
        };
        let phi_j = atoms.iter().map(|a| phi.eval(a.t)).collect();
        let psi_j = atoms.iter().map(|a| psi.eval(a.t)).collect();
        let f_j = atoms.iter().map(|a| a.w.sqrt()).collect();
        Ok(DiagonalInstance {
            atoms,
            phi,
            psi,
            phi_j,
            psi_j,
            f_j,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn phi(&self) -> &Symbol {
        &self.phi
    }

    pub fn psi(&self) -> &Symbol {
        &self.psi
    }

    pub fn measure(&self) -> SpectralMeasure {
        SpectralMeasure::Discrete(self.atoms.clone())
    }

    pub fn problem(&self) -> Result<StechkinProblem> {
        StechkinProblem::new(self.measure(), self.phi.clone(), self.psi.clone())
    }

    /// `h_j = conj(φ_j) f_j`, the functional being approximated.
    pub fn target(&self) -> Vec<Complex64> {
        self.phi_j
            .iter()
            .zip(&self.f_j)
            .map(|(p, f)| p.conj() * *f)
            .collect()
    }

    fn g_of(&self, lambda: f64) -> Vec<Complex64> {
        self.target()
            .into_iter()
            .zip(&self.psi_j)
            .map(|(h, s)| h / (1.0 + lambda * s.norm_sqr()))
            .collect()
    }

    /// `g_τ` with components `conj(φ_j) f_j / (1 + τ|ψ_j|²)`.
    pub fn extremal_functional(&self, tau: f64) -> FunctionalVector {
        FunctionalVector::new(self.g_of(tau))
    }

    /// `U(g)`; `+∞` when `g` misses `h` on an atom where `ψ` vanishes.
    pub fn deviation(&self, g: &FunctionalVector) -> f64 {
        let mut s = 0.0;
        for ((h, gj), psi) in self.target().iter().zip(&g.g).zip(&self.psi_j) {
            let r = (h - gj).norm_sqr();
            let q = psi.norm_sqr();
            if q == 0.0 {
                if r != 0.0 {
                    return f64::INFINITY;
                }
            } else {
                s += r / q;
            }
        }
        s.sqrt()
    }

    /// FNV-1a over the instance data and `salt`.
    pub fn fingerprint(&self, salt: f64) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for a in &self.atoms {
            eat(&a.t.to_bits().to_le_bytes());
            eat(&a.w.to_bits().to_le_bytes());
        }
        for z in self.phi_j.iter().chain(&self.psi_j) {
            eat(&z.re.to_bits().to_le_bytes());
            eat(&z.im.to_bits().to_le_bytes());
        }
        eat(&salt.to_bits().to_le_bytes());
        h
    }

    /// `min U(g)` subject to `‖g‖ ≤ n_budget`.
    ///
    /// Atoms with `ψ_j = 0` must be interpolated exactly; the rest follow
    /// the stationarity condition `g_j = h_j/(1 + λ|ψ_j|²)` with `λ ≥ 0`
    /// chosen by bisection so that `‖g‖ = n_budget`.
    pub fn brute_force_best_approx(&self, n_budget: f64) -> Result<OracleSolution> {
        if !(n_budget >= 0.0 && n_budget.is_finite()) {
            return Err(Error::invalid(format!(
                "N budget must be finite and ≥ 0, got {n_budget}"
            )));
        }
        let h = self.target();
        let free: Vec<bool> = self.psi_j.iter().map(|s| s.norm_sqr() > 0.0).collect();
        let pinned2: f64 = h
            .iter()
            .zip(&free)
            .filter(|(_, &f)| !f)
            .map(|(z, _)| z.norm_sqr())
            .sum();
        let budget2 = n_budget * n_budget - pinned2;
        if budget2 < 0.0 {
            return Err(Error::Infeasible(format!(
                "atoms with ψ = 0 need norm {:e} > N = {n_budget:e}; every admissible g has U = ∞",
                pinned2.sqrt()
            )));
        }
        let budget = budget2.sqrt();
        let free_norm = |lambda: f64| -> f64 {
            self.g_of(lambda)
                .iter()
                .zip(&free)
                .filter(|(_, &f)| f)
                .map(|(z, _)| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        };

        let lambda = if free_norm(0.0) <= budget {
            0.0
        } else {
            let mut hi = 1.0;
            while free_norm(hi) >= budget {
                hi *= 2.0;
                if hi > 1e300 {
                    return Err(Error::NonConvergence {
                        what: "multiplier bracket",
                        estimate: hi,
                        error: free_norm(hi) - budget,
                        work: 0,
                    });
                }
            }
            let mut lo = 0.0;
            let mut steps = 0;
            loop {
                let mid = 0.5 * (lo + hi);
                if !(mid > lo && mid < hi) {
                    break hi;
                }
                let v = free_norm(mid);
                steps += 1;
                if (v - budget).abs() <= NORM_TOL * budget {
                    break mid;
                }
                if v > budget {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if steps > 2_000 {
                    break hi;
                }
            }
        };
        let g = FunctionalVector::new(self.g_of(lambda));
        let e = self.deviation(&g);
        let audit = self.audit(&g, e, n_budget, &free);
        Ok(OracleSolution {
            e,
            g,
            lagrange_multiplier: lambda,
            audit,
        })
    }

    /// Deterministic random feasible perturbations of the optimum.
    fn audit(
        &self,
        g: &FunctionalVector,
        e: f64,
        n_budget: f64,
        free: &[bool],
    ) -> PerturbationAudit {
        let mut rng = ChaCha8Rng::seed_from_u64(self.fingerprint(n_budget));
        let scales = [1e-1, 1e-3, 1e-6];
        let size = g.norm.max(n_budget).max(1e-300);
        let mut max_improvement: f64 = 0.0;
        for k in 0..AUDIT_SAMPLES {
            let eps = scales[k % scales.len()] * size;
            let mut trial: Vec<Complex64> = g
                .g
                .iter()
                .zip(free)
                .map(|(z, &f)| {
                    if f {
                        z + Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * eps
                    } else {
                        *z
                    }
                })
                .collect();
            let n = norm(&trial);
            if n > n_budget {
                // Pull back into the ball along the free coordinates.
                let pinned2: f64 = trial
                    .iter()
                    .zip(free)
                    .filter(|(_, &f)| !f)
                    .map(|(z, _)| z.norm_sqr())
                    .sum();
                let free2 = n * n - pinned2;
                let room2 = (n_budget * n_budget - pinned2).max(0.0);
                let c = if free2 > 0.0 {
                    (room2 / free2).sqrt()
                } else {
                    0.0
                };
                for (z, &f) in trial.iter_mut().zip(free) {
                    if f {
                        *z *= c;
                    }
                }
            }
            let u = self.deviation(&FunctionalVector::new(trial));
            max_improvement = max_improvement.max(e - u);
        }
        PerturbationAudit {
            samples: AUDIT_SAMPLES,
            max_improvement,
        }
    }

    /// Compare the oracle and the closed forms at one `τ`.
    pub fn verify_theorems(&self, tau: f64) -> Result<TheoremResiduals> {
        let problem = self.problem()?;
        let c = problem.best_approx(tau)?;
        let g_tau = self.extremal_functional(tau);
        let oracle = self.brute_force_best_approx(c.n)?;
        let g_match = oracle
            .g
            .g
            .iter()
            .zip(&g_tau.g)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let x = problem.extremal_element(tau)?;
        let (extremal_equality, hormander_equality) = x.relative_residuals();
        Ok(TheoremResiduals {
            tau,
            oracle_vs_tau_m: rel_diff(oracle.e, c.e),
            deviation_vs_tau_m: rel_diff(self.deviation(&g_tau), c.e),
            norm_g_vs_n: rel_diff(g_tau.norm, c.n),
            g_match,
            extremal_equality,
            hormander_equality,
            audit: oracle.audit,
        })
    }
}

/// Where random atom locations are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocationLaw {
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// `±U[lo, hi]` with a random sign.
    SymmetricBand {
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSampler {
    pub max_atoms: usize,
    pub locations: LocationLaw,
    /// Weights are drawn from `(0, max_weight]`.
    pub max_weight: f64,
    /// `α_ψ ∈ (0, max_psi_exponent]`, `α_φ ∈ [0, α_ψ)`.
    pub max_psi_exponent: f64,
    pub tau_range: (f64, f64),
}

impl Default for InstanceSampler {
    fn default() -> Self {
        InstanceSampler {
            max_atoms: 12,
            locations: LocationLaw::Uniform { lo: -5.0, hi: 5.0 },
            max_weight: 2.0,
            max_psi_exponent: 4.0,
            tau_range: (0.05, 20.0),
        }
    }
}

impl InstanceSampler {
    /// Power symbols and random atoms.
    pub fn instance<R: Rng>(&self, rng: &mut R) -> Result<DiagonalInstance> {
        let count = rng.gen_range(1..=self.max_atoms.max(1));
        let mut atoms: Vec<Atom> = Vec::with_capacity(count);
        while atoms.len() < count {
            let t = match self.locations {
                LocationLaw::Uniform { lo, hi } => rng.gen_range(lo..=hi),
                LocationLaw::SymmetricBand { lo, hi } => {
                    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    s * rng.gen_range(lo..=hi)
                }
            };
            // (0, max] rather than [0, max).
            let w = self.max_weight * (1.0 - rng.gen::<f64>());
            if atoms.iter().all(|a| a.t != t) {
                atoms.push(Atom::new(t, w));
            }
        }
        let b = self.max_psi_exponent * (1.0 - rng.gen::<f64>());
        let a = b * rng.gen::<f64>();
        DiagonalInstance::new(atoms, Symbol::power(a)?, Symbol::power(b)?)
    }

    /// Log-uniform in `tau_range`.
    pub fn tau<R: Rng>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.tau_range;
        (lo.ln() + (hi.ln() - lo.ln()) * rng.gen::<f64>()).exp()
    }
}

/// Largest residuals over a batch of random instances.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BatchReport {
    pub instances: usize,
    pub max_oracle_vs_tau_m: f64,
    pub max_deviation_vs_tau_m: f64,
    pub max_norm_g_vs_n: f64,
    pub max_g_match: f64,
    pub max_extremal_equality: f64,
    pub max_hormander_equality: f64,
    pub max_audit_improvement: f64,
}

impl BatchReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.max_oracle_vs_tau_m,
            self.max_deviation_vs_tau_m,
            self.max_norm_g_vs_n,
            self.max_g_match,
            self.max_extremal_equality,
            self.max_hormander_equality,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Run [`DiagonalInstance::verify_theorems`] on `count` instances drawn
/// from a ChaCha stream seeded with `seed`.
pub fn verify_batch(sampler: &InstanceSampler, seed: u64, count: usize) -> Result<BatchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BatchReport {
        instances: count,
        ..Default::default()
    };
    for _ in 0..count {
        let inst = sampler.instance(&mut rng)?;
        let tau = sampler.tau(&mut rng);
        let r = inst.verify_theorems(tau)?;
        report.max_oracle_vs_tau_m = report.max_oracle_vs_tau_m.max(r.oracle_vs_tau_m);
        report.max_deviation_vs_tau_m = report.max_deviation_vs_tau_m.max(r.deviation_vs_tau_m);
        report.max_norm_g_vs_n = report.max_norm_g_vs_n.max(r.norm_g_vs_n);
        report.max_g_match = report.max_g_match.max(r.g_match);
        report.max_extremal_equality = report.max_extremal_equality.max(r.extremal_equality);
        report.max_hormander_equality = report.max_hormander_equality.max(r.hormander_equality);
        report.max_audit_improvement = report.max_audit_improvement.max(r.audit.max_improvement);
    }
    Ok(report)
}
