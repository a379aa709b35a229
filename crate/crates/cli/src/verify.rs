//! Seeded verification suites. Each returns a record and whether every
//! residual stayed within its threshold.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stechkin::applications::{opoly_constants, opoly_measure, FamilyKind, OrthogonalFamily};
use stechkin::oracle::{verify_batch, InstanceSampler, LocationLaw};
use stechkin::{StechkinProblem, Symbol};

use crate::report::Record;

pub struct SuiteResult {
    pub record: Record,
    pub pass: bool,
}

struct Checks {
    record: Record,
    pass: bool,
}

impl Checks {
    fn new(suite: &str, seed: u64, count: usize) -> Self {
        Checks {
            record: Record::new()
                .value("suite", suite)
                .value("seed", seed)
                .value("count", count as u64),
            pass: true,
        }
    }

    /// Record `value` with its threshold and fold it into the verdict.
    fn at_most(mut self, key: &str, value: f64, tolerance: f64) -> Self {
        self.pass &= value <= tolerance;
        self.record = self
            .record
            .float(key, value)
            .float(&format!("{key}_tolerance"), tolerance);
        self
    }

    /// Counters must stay at zero.
    fn none(mut self, key: &str, count: usize) -> Self {
        self.pass &= count == 0;
        self.record = self.record.value(key, count as u64);
        self
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            record: self.record.value("pass", self.pass),
            pass: self.pass,
        }
    }
}

pub fn oracle(seed: u64, count: usize) -> Result<SuiteResult> {
    let r = verify_batch(&InstanceSampler::default(), seed, count)?;
    Ok(Checks::new("oracle", seed, count)
        .at_most("max_oracle_vs_tau_m", r.max_oracle_vs_tau_m, 1e-8)
        .at_most("max_deviation_vs_tau_m", r.max_deviation_vs_tau_m, 1e-8)
        .at_most("max_norm_g_vs_n", r.max_norm_g_vs_n, 1e-8)
        .at_most("max_g_match", r.max_g_match, 1e-8)
        .at_most("max_audit_improvement", r.max_audit_improvement, 1e-9)
        .finish())
}

pub fn extremal(seed: u64, count: usize) -> Result<SuiteResult> {
    let sampler = InstanceSampler::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut additive, mut hormander, mut identity): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..count {
        let inst = sampler.instance(&mut rng)?;
        let tau = sampler.tau(&mut rng);
        let p = inst.problem()?;
        let (a, h) = p.extremal_element(tau)?.relative_residuals();
        additive = additive.max(a);
        hormander = hormander.max(h);
        let c = p.best_approx(tau)?;
        let hc = p.hormander_coefficient(tau)?;
        let lhs = c.n * c.n + tau * c.m * c.m;
        identity = identity.max((lhs - hc * hc).abs() / lhs.max(hc * hc).max(f64::MIN_POSITIVE));
    }
    Ok(Checks::new("extremal", seed, count)
        .at_most("max_additive_residual", additive, 1e-10)
        .at_most("max_hormander_residual", hormander, 1e-10)
        .at_most("max_identity_residual", identity, 1e-10)
        .finish())
}

pub fn lemmas(seed: u64, count: usize) -> Result<SuiteResult> {
    let grid: Vec<f64> = (0..50)
        .map(|i| 10f64.powf(-4.0 + 8.0 * i as f64 / 49.0))
        .collect();
    let sampler = InstanceSampler {
        locations: LocationLaw::SymmetricBand { lo: 0.8, hi: 1.0 },
        ..InstanceSampler::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mono, mut tau_m, mut cont) = (0usize, 0usize, 0usize);
    let (mut limit0, mut decay): (f64, f64) = (0.0, 0.0);
    for _ in 0..count {
        let r = sampler.instance(&mut rng)?.problem()?.lemma_suite(&grid)?;
        mono += r.monotonicity_violations;
        tau_m += r.tau_m_violations;
        cont += r.continuity_violations;
        limit0 = limit0.max((r.limit_tau0 - r.norm_phi_f).abs() / r.norm_phi_f);
        decay = decay.max(r.limit_tau_inf / r.limit_tau0);
    }
    Ok(Checks::new("lemmas", seed, count)
        .none("monotonicity_violations", mono)
        .none("tau_m_violations", tau_m)
        .none("continuity_violations", cont)
        .at_most("max_rel_gap_tau0", limit0, 1e-4)
        .at_most("max_decay_ratio", decay, 1e-3)
        .finish())
}

fn families() -> Result<Vec<OrthogonalFamily>> {
    Ok(vec![
        OrthogonalFamily::hermite(),
        OrthogonalFamily::laguerre(0.0)?,
        OrthogonalFamily::laguerre(0.5)?,
        OrthogonalFamily::jacobi(0.0, 0.0)?,
        OrthogonalFamily::jacobi(0.5, -0.3)?,
    ])
}

pub fn opoly(seed: u64, count: usize) -> Result<SuiteResult> {
    let fams = families()?;
    let (mut gram, mut ode): (f64, f64) = (0.0, 0.0);
    for fam in &fams {
        for (i, row) in fam.gram_matrix(20)?.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                gram = gram.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        let i = fam.interval();
        let (lo, hi) = (i.lo.max(-3.0), i.hi.min(12.0));
        for s in 1..=5 {
            let t = lo + (hi - lo) * s as f64 / 6.0;
            for n in 0..=10 {
                let (f, f1, f2) = fam.eval_derivatives(n, t)?;
                let (a, d, dd) = fam.ode_coefficients(t);
                let scale = (d * f2).abs() + ((a + dd) * f1).abs() + (fam.gamma(n) * f).abs();
                let r = fam.ode_residual(n, t)?;
                if r > 0.0 {
                    ode = ode.max(r / scale);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (phi, psi) = (Symbol::power(1.0)?, Symbol::power(4.0)?);
    let mut consistency: f64 = 0.0;
    for _ in 0..count {
        let fam = fams[rng.gen_range(0..fams.len())];
        let t = match fam.kind() {
            FamilyKind::Hermite => rng.gen_range(-2.0..2.0),
            FamilyKind::Laguerre { .. } => rng.gen_range(0.0..6.0),
            FamilyKind::Jacobi { .. } => rng.gen_range(-0.99..0.99),
        };
        let tau = (0.05f64.ln() + (20.0f64.ln() - 0.05f64.ln()) * rng.gen::<f64>()).exp();
        let c = opoly_constants(&fam, &phi, &psi, tau, t, 10_000, 1e-10)?;
        let terms = c.truncation.map_or(1, |tr| tr.terms);
        let d = StechkinProblem::new(opoly_measure(&fam, t, terms - 1)?, phi.clone(), psi.clone())?
            .best_approx(tau)?;
        let tol_n = c.n_error + d.n_error + 1e-14 * c.n;
        let tol_e = c.e_error + d.e_error() + 1e-14 * c.e;
        consistency = consistency.max((c.n - d.n).abs() / tol_n.max(f64::MIN_POSITIVE));
        consistency = consistency.max((c.e - d.e).abs() / tol_e.max(f64::MIN_POSITIVE));
    }
    Ok(Checks::new("opoly", seed, count)
        .at_most("max_gram_deviation", gram, 1e-8)
        .at_most("max_ode_residual", ode, 1e-6)
        .at_most("max_consistency_ratio", consistency, 1.0)
        .finish())
}
