//! `stechkin`: batch front end for sharp-constant computations.
//!
//! Exit status: 0 success, 2 bad configuration, 3 admissibility failure,
//! 4 numerical non-convergence, 5 verification residual exceeded.

mod report;
mod verify;

use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use stechkin::applications::{
    circle_constants, line_constants, opoly_constants, taikov_constants, taikov_exponent,
    OrthogonalFamily, PointConstants, TaikovParams,
};
use stechkin::numerics::{ArgLocation, Interval};
use stechkin::stechkin::hlp_constant;
use stechkin::{Error, Precision, SharpConstants, SpectralMeasure, StechkinProblem, Symbol};

use report::{write_csv, write_json, Record, Report};

#[derive(Parser, Debug)]
#[command(
    name = "stechkin",
    version,
    about = "Sharp constants for additive inequalities of self-adjoint operators"
)]
struct Cli {
    /// Relative tolerance for quadrature and series.
    #[arg(long, global = true, env = "STECHKIN_REL_TOL", default_value_t = 1e-10)]
    rel_tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Symbols {
    /// Symbol φ: `pow:<alpha>`, `zero` or `table:<path>`.
    #[arg(long)]
    phi: String,
    /// Symbol ψ, same syntax as `--phi`.
    #[arg(long)]
    psi: String,
}

impl Symbols {
    fn load(&self) -> Result<(Symbol, Symbol)> {
        Ok((Symbol::parse(&self.phi)?, Symbol::parse(&self.psi)?))
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct TauChoice {
    #[arg(long)]
    tau: Option<f64>,
    /// Geometric sweep `a:b:steps`, one output row per τ.
    #[arg(long)]
    tau_grid: Option<TauGrid>,
}

#[derive(Clone, Debug)]
struct TauGrid(Vec<f64>);

impl FromStr for TauGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected a:b:steps, got '{s}'"));
        };
        let a: f64 = a.parse().map_err(|_| format!("bad grid start '{a}'"))?;
        let b: f64 = b.parse().map_err(|_| format!("bad grid end '{b}'"))?;
        let n: usize = n.parse().map_err(|_| format!("bad step count '{n}'"))?;
        if !(a > 0.0 && b.is_finite() && a <= b) || n == 0 || (n == 1 && a != b) {
            return Err(format!(
                "need 0 < a ≤ b and steps ≥ 1 (steps = 1 only when a = b), got '{s}'"
            ));
        }
        if n == 1 {
            return Ok(TauGrid(vec![a]));
        }
        let ratio = b / a;
        let mut grid: Vec<f64> = (0..n)
            .map(|i| a * ratio.powf(i as f64 / (n - 1) as f64))
            .collect();
        grid[0] = a;
        grid[n - 1] = b;
        Ok(TauGrid(grid))
    }
}

impl TauChoice {
    fn values(&self) -> (Vec<f64>, bool) {
        match (&self.tau, &self.tau_grid) {
            (Some(t), _) => (vec![*t], false),
            (None, Some(g)) => (g.0.clone(), true),
            (None, None) => unreachable!("clap enforces one of --tau / --tau-grid"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Hermite,
    Laguerre,
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemmas,
    Oracle,
    Extremal,
    Opoly,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// N(τ), M(τ), E(τ) = τM(τ) for a measure file or builtin measure.
    Constants {
        /// Measure JSON file, or `lebesgue`, `unit-lattice`, `unit-lattice+`.
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        tau: TauChoice,
    },
    /// The τ at which N(τ) equals a target, with the constants there.
    SolveTau {
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        symbols: Symbols,
        #[arg(long)]
        n_target: f64,
    },
    /// Closed-form constants for intermediate derivatives on the line.
    Taikov {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
    },
    /// Constants on the line (Lebesgue measure).
    Line {
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        tau: TauChoice,
    },
    /// Constants for Fourier series (unit weights on the integers).
    Circle {
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        tau: TauChoice,
    },
    /// Pointwise constants for orthogonal-polynomial expansions at `t`.
    Opoly {
        #[arg(long, value_enum)]
        family: FamilyName,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        max_n: usize,
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        tau: TauChoice,
    },
    /// Extremal element with its equality residuals.
    Extremal {
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        symbols: Symbols,
        #[arg(long)]
        tau: f64,
    },
    /// sup (|φ|²/(1 + τ|ψ|²))^(1/2) over an interval.
    Hlp {
        #[command(flatten)]
        symbols: Symbols,
        #[arg(long)]
        tau: f64,
        /// Interval `lo:hi`; `inf` and `-inf` are accepted.
        #[arg(long, default_value = "-inf:inf", allow_hyphen_values = true)]
        domain: String,
    },
    /// Seeded verification suite; exit status 5 when a residual is exceeded.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

/// A verification ran to completion but a residual exceeded its threshold.
#[derive(Debug)]
struct ResidualExceeded;

impl std::fmt::Display for ResidualExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification residual exceeded its tolerance")
    }
}

impl std::error::Error for ResidualExceeded {}

fn load_measure(source: &str) -> Result<SpectralMeasure> {
    let path = Path::new(source);
    if path.exists() {
        return SpectralMeasure::load(path).with_context(|| format!("loading measure {source}"));
    }
    SpectralMeasure::builtin(source)
        .with_context(|| format!("'{source}' is neither a measure file nor a builtin measure"))
}

fn parse_bound(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        x => x
            .parse()
            .map_err(|_| anyhow!(Error::InvalidInput(format!("bad interval end '{x}'")))),
    }
}

fn sharp_record(c: &SharpConstants) -> Record {
    Record::new()
        .float("tau", c.tau)
        .float("N", c.n)
        .float("N_error", c.n_error)
        .float("M", c.m)
        .float("M_error", c.m_error)
        .float("E", c.e)
        .float("E_error", c.e_error())
}

fn point_record(c: &PointConstants) -> Record {
    let r = Record::new()
        .float("tau", c.tau)
        .float("N", c.n)
        .float("N_error", c.n_error)
        .float("M", c.m)
        .float("M_error", if c.tau > 0.0 { c.e_error / c.tau } else { 0.0 })
        .float("E", c.e)
        .float("E_error", c.e_error);
    match c.truncation {
        Some(t) => r
            .value("terms", t.terms as u64)
            .float("N2_tail", t.n2_tail)
            .float("M2_tail", t.m2_tail)
            .value("rigorous", t.rigorous),
        None => r,
    }
}

fn rows(
    meta: Record,
    taus: (Vec<f64>, bool),
    row: impl Fn(f64) -> Result<Record>,
) -> Result<Report> {
    let (taus, sweep) = taus;
    let mut out = taus.iter().map(|&t| row(t)).collect::<Result<Vec<_>>>()?;
    if sweep {
        Ok(Report::Rows { meta, rows: out })
    } else {
        Ok(Report::Object(meta.merge(out.pop().expect("one τ"))))
    }
}

fn problem(measure: &str, symbols: &Symbols, rel_tol: f64) -> Result<StechkinProblem> {
    let (phi, psi) = symbols.load()?;
    Ok(StechkinProblem::new(load_measure(measure)?, phi, psi)?
        .with_precision(Precision::uniform(rel_tol)))
}

fn base(command: &str, rel_tol: f64) -> Record {
    Record::new()
        .value("command", command)
        .float("rel_tol", rel_tol)
}

fn run(cli: &Cli) -> Result<(Report, bool)> {
    let tol = cli.rel_tol;
    if !(tol > 0.0 && tol < 1.0) {
        bail!(Error::InvalidInput(format!(
            "rel_tol must lie in (0, 1), got {tol}"
        )));
    }
    let ok = |r: Report| Ok((r, true));
    match &cli.command {
        Command::Constants {
            measure,
            symbols,
            tau,
        } => {
            let p = problem(measure, symbols, tol)?;
            let meta = base("constants", tol)
                .value("measure", measure.as_str())
                .value("phi", symbols.phi.as_str())
                .value("psi", symbols.psi.as_str());
            ok(rows(meta, tau.values(), |t| {
                Ok(sharp_record(&p.best_approx(t)?))
            })?)
        }
        Command::SolveTau {
            measure,
            symbols,
            n_target,
        } => {
            let p = problem(measure, symbols, tol)?;
            let c = p.solve_tau(*n_target)?;
            let r = base("solve-tau", tol)
                .value("measure", measure.as_str())
                .value("phi", symbols.phi.as_str())
                .value("psi", symbols.psi.as_str())
                .float("N_target", *n_target);
            ok(Report::Object(r.merge(sharp_record(&c)).float(
                "tau_error",
                c.tau * Precision::uniform(tol).root_rel_tol,
            )))
        }
        Command::Taikov { k, r, h } => {
            let params = TaikovParams::new(*k, *r, *h)?;
            let c = taikov_constants(&params);
            // Closed forms: a few roundings in sin, sqrt and powf.
            let eps = 8.0 * f64::EPSILON;
            ok(Report::Object(
                base("taikov", tol)
                    .value("k", *k)
                    .value("r", *r)
                    .float("h", *h)
                    .float("a", c.a)
                    .float("a_error", eps * c.a)
                    .float("b", c.b)
                    .float("b_error", eps * c.b)
                    .float("N", c.n)
                    .float("N_error", eps * c.n)
                    .float("E", c.e)
                    .float("E_error", eps * c.e)
                    .float("exponent", taikov_exponent(*k, *r)),
            ))
        }
        Command::Line { symbols, tau } => {
            let (phi, psi) = symbols.load()?;
            let meta = base("line", tol)
                .value("phi", symbols.phi.as_str())
                .value("psi", symbols.psi.as_str());
            ok(rows(meta, tau.values(), |t| {
                Ok(point_record(&line_constants(&phi, &psi, t, tol)?))
            })?)
        }
        Command::Circle { symbols, tau } => {
            let (phi, psi) = symbols.load()?;
            let meta = base("circle", tol)
                .value("phi", symbols.phi.as_str())
                .value("psi", symbols.psi.as_str());
            ok(rows(meta, tau.values(), |t| {
                Ok(point_record(&circle_constants(&phi, &psi, t, tol)?))
            })?)
        }
        Command::Opoly {
            family,
            alpha,
            beta,
            t,
            max_n,
            symbols,
            tau,
        } => {
            let (phi, psi) = symbols.load()?;
            let fam = match family {
                FamilyName::Hermite => OrthogonalFamily::hermite(),
                FamilyName::Laguerre => OrthogonalFamily::laguerre(*alpha)?,
                FamilyName::Jacobi => OrthogonalFamily::jacobi(*alpha, *beta)?,
            };
            let mut meta = base("opoly", tol).value("family", format!("{family:?}").to_lowercase());
            match family {
                FamilyName::Hermite => {}
                FamilyName::Laguerre => meta = meta.float("alpha", *alpha),
                FamilyName::Jacobi => meta = meta.float("alpha", *alpha).float("beta", *beta),
            }
            let meta = meta
                .float("t", *t)
                .value("phi", symbols.phi.as_str())
                .value("psi", symbols.psi.as_str());
            ok(rows(meta, tau.values(), |tau| {
                Ok(point_record(&opoly_constants(
                    &fam, &phi, &psi, tau, *t, *max_n, tol,
                )?))
            })?)
        }
        Command::Extremal {
            measure,
            symbols,
            tau,
        } => {
            let p = problem(measure, symbols, tol)?;
            let x = p.extremal_element(*tau)?;
            let (additive, hormander) = x.relative_residuals();
            let residual_tolerance = 10.0 * tol;
            let coeff: Vec<Value> = x
                .coeff
                .iter()
                .map(|(t, z)| {
                    Record::new()
                        .float("t", *t)
                        .float("re", z.re)
                        .float("im", z.im)
                        .into_json()
                })
                .collect();
            let c = &x.constants;
            let r = base("extremal", tol)
                .value("measure", measure.as_str())
                .value("phi", symbols.phi.as_str())
                .value("psi", symbols.psi.as_str())
                .float("tau", x.tau)
                .float("N", c.n)
                .float("N_error", c.n_error)
                .float("M", c.m)
                .float("M_error", c.m_error)
                .float("E", c.e)
                .float("E_error", c.e_error())
                .float("norm_x", x.norm_x)
                .float("norm_psi_x", x.norm_psi_x)
                .float("functional_value", x.functional_value)
                .float("hormander_coefficient", x.hormander_coefficient)
                .value(
                    "residuals",
                    Record::new()
                        .float("additive", additive)
                        .float("hormander", hormander)
                        .float("tolerance", residual_tolerance),
                )
                .value("coefficients", Value::Array(coeff));
            Ok((
                Report::Object(r),
                additive <= residual_tolerance && hormander <= residual_tolerance,
            ))
        }
        Command::Hlp {
            symbols,
            tau,
            domain,
        } => {
            let (phi, psi) = symbols.load()?;
            let (lo, hi) = domain.split_once(':').ok_or_else(|| {
                anyhow!(Error::InvalidInput(format!(
                    "domain must be lo:hi, got '{domain}'"
                )))
            })?;
            let interval = Interval::new(parse_bound(lo)?, parse_bound(hi)?)?;
            let c = hlp_constant(&phi, &psi, *tau, interval)?;
            let location = match c.location {
                ArgLocation::At(t) => report::num(t),
                ArgLocation::PlusInfinity => Value::String("inf".into()),
                ArgLocation::MinusInfinity => Value::String("-inf".into()),
            };
            ok(Report::Object(
                base("hlp", tol)
                    .value("phi", symbols.phi.as_str())
                    .value("psi", symbols.psi.as_str())
                    .float("tau", *tau)
                    .value("domain", domain.as_str())
                    .float("C", c.value)
                    .float("C_error", 8.0 * f64::EPSILON * c.value)
                    .value("argmax", location)
                    .value("closed_form", c.closed_form),
            ))
        }
        Command::Verify { suite, seed, count } => {
            let r = match suite {
                Suite::Oracle => verify::oracle(*seed, *count)?,
                Suite::Extremal => verify::extremal(*seed, *count)?,
                Suite::Lemmas => verify::lemmas(*seed, *count)?,
                Suite::Opoly => verify::opoly(*seed, *count)?,
            };
            Ok((Report::Object(r.record), r.pass))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ResidualExceeded>().is_some() {
        return 5;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Admissibility(_) | Error::Undecidable(_)) => 3,
        Some(Error::NonConvergence { .. } | Error::NonFinite { .. }) => 4,
        Some(Error::Residual { .. }) => 5,
        _ => 2,
    }
}

fn emit(report: Report, format: Format) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => write_json(report, &mut out)?,
        Format::Csv => write_csv(report, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(report, pass)| {
        emit(report, cli.format)?;
        if pass {
            Ok(())
        } else {
            Err(anyhow!(ResidualExceeded))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kinds() {
        assert_eq!(exit_code(&anyhow!(ResidualExceeded)), 5);
        assert_eq!(exit_code(&anyhow!(Error::Admissibility("x".into()))), 3);
        assert_eq!(exit_code(&anyhow!(Error::Undecidable("x".into()))), 3);
        let nc = Error::NonConvergence {
            what: "q",
            estimate: 1.0,
            error: 1.0,
            work: 1,
        };
        assert_eq!(exit_code(&anyhow!(nc).context("while integrating")), 4);
        let res = Error::Residual {
            what: "r",
            residual: 1.0,
            tolerance: 0.0,
        };
        assert_eq!(exit_code(&anyhow!(res)), 5);
        assert_eq!(exit_code(&anyhow!(Error::InvalidInput("x".into()))), 2);
        assert_eq!(exit_code(&anyhow!("plain")), 2);
    }

    #[test]
    fn tau_grid_is_geometric() {
        let g: TauGrid = "0.1:10:3".parse().unwrap();
        assert_eq!(g.0, vec![0.1, 1.0, 10.0]);
        assert_eq!("2:2:1".parse::<TauGrid>().unwrap().0, vec![2.0]);
        for bad in ["0:1:3", "1:0.5:3", "1:2", "1:2:0", "1:2:1", "a:2:3"] {
            assert!(bad.parse::<TauGrid>().is_err(), "{bad}");
        }
    }
}
