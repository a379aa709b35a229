use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};

type Evaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Zero,
    Power(f64),
    /// Sorted by location; zero off the listed points.
    Table(Arc<Vec<(f64, Complex64)>>),
    Custom(Evaluator),
}

/// Large-`|t|` behaviour of `|φ(t)|`, as far as it is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Asymptotic {
    /// Identically zero outside a bounded set.
    Vanishing,
    /// `|φ(t)| = |t|^a` exactly.
    Exact(f64),
    /// `|φ(t)| ≤ C(1 + |t|)^g`.
    Bounded(f64),
    Unknown,
}

/// A scalar function of the spectral variable.
#[derive(Clone)]
pub struct Symbol {
    kind: Kind,
    growth_order: Option<f64>,
    descriptor: String,
}

impl Symbol {
    pub fn zero() -> Self {
        Symbol {
            kind: Kind::Zero,
            growth_order: Some(0.0),
            descriptor: "zero".into(),
        }
    }

    /// `t ↦ t^α`. Integer exponents keep the sign of `t`; other exponents
    /// use `|t|^α`. `0^0 = 1`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!(
                "power exponent must be finite and ≥ 0, got {alpha}"
            )));
        }
        Ok(Symbol {
            kind: Kind::Power(alpha),
            growth_order: Some(alpha),
            descriptor: format!("pow:{alpha}"),
        })
    }

    /// A symbol defined on finitely many points and zero elsewhere.
    pub fn table(mut points: Vec<(f64, Complex64)>) -> Result<Self> {
        for &(t, v) in &points {
            if !t.is_finite() || !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::invalid(format!("non-finite table entry at t = {t}")));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("table symbol has repeated points"));
        }
        let descriptor = format!("table[{} points]", points.len());
        Ok(Symbol {
            kind: Kind::Table(Arc::new(points)),
            growth_order: Some(0.0),
            descriptor,
        })
    }

    /// Indicator of a single point.
    pub fn indicator(t0: f64) -> Result<Self> {
        Self::table(vec![(t0, Complex64::new(1.0, 0.0))])
    }

    /// An arbitrary callable. `growth_order = Some(g)` promises
    /// `|φ(t)| ≤ C(1 + |t|)^g`; without it nothing can be decided on
    /// unbounded supports.
    pub fn custom<F>(f: F, growth_order: Option<f64>) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Symbol {
            kind: Kind::Custom(Arc::new(f)),
            growth_order,
            descriptor: "custom".into(),
        }
    }

    pub fn custom_real<F>(f: F, growth_order: Option<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::custom(move |t| Complex64::new(f(t), 0.0), growth_order)
    }

    /// Parse `pow:<alpha>`, `zero` or `table:<path>`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let d = descriptor.trim();
        if d == "zero" {
            return Ok(Self::zero());
        }
        if let Some(rest) = d.strip_prefix("pow:") {
            let alpha: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad exponent in '{descriptor}'")))?;
            return Self::power(alpha);
        }
        if let Some(path) = d.strip_prefix("table:") {
            let mut s = Self::load_table(Path::new(path.trim()))?;
            s.descriptor = d.to_string();
            return Ok(s);
        }
        Err(Error::invalid(format!(
            "unknown symbol descriptor '{descriptor}' (expected pow:<alpha>, zero or table:<path>)"
        )))
    }

    /// Reads `{"points": [[t, re], [t, re, im], ...]}`.
    pub fn load_table(path: &Path) -> Result<Self> {
        #[derive(Deserialize)]
        struct TableFile {
            points: Vec<Vec<f64>>,
        }
        let text = std::fs::read_to_string(path)?;
        let file: TableFile = serde_json::from_str(&text)?;
        let points = file
            .points
            .into_iter()
            .map(|p| match p.as_slice() {
                [t, re] => Ok((*t, Complex64::new(*re, 0.0))),
                [t, re, im] => Ok((*t, Complex64::new(*re, *im))),
                _ => Err(Error::invalid(
                    "table points must be [t, re] or [t, re, im]",
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::table(points)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match &self.kind {
            Kind::Zero => Complex64::new(0.0, 0.0),
            Kind::Power(a) => Complex64::new(signed_power(t, *a), 0.0),
            Kind::Table(pts) => match pts.binary_search_by(|p| p.0.total_cmp(&t)) {
                Ok(i) => pts[i].1,
                Err(_) => Complex64::new(0.0, 0.0),
            },
            Kind::Custom(f) => f(t),
        }
    }

    /// `|φ(t)|`.
    pub fn abs(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(a) => power_abs(t, *a),
            _ => self.eval(t).norm(),
        }
    }

    /// `|φ(t)|²`.
    pub fn abs2(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(a) => power_abs(t, 2.0 * a),
            _ => self.eval(t).norm_sqr(),
        }
    }

    /// `ln |φ(t)|²`, finite for power symbols at every finite `t ≠ 0`.
    fn ln_abs2(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(a) if *a == 0.0 => 0.0,
            Kind::Power(a) => 2.0 * a * t.abs().ln(),
            _ => self.abs2(t).ln(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero)
    }

    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            Kind::Power(a) => Some(a),
            _ => None,
        }
    }

    pub fn growth_order(&self) -> Option<f64> {
        self.growth_order
    }

    pub fn asymptotic(&self) -> Asymptotic {
        match &self.kind {
            Kind::Zero | Kind::Table(_) => Asymptotic::Vanishing,
            Kind::Power(a) => Asymptotic::Exact(*a),
            Kind::Custom(_) => self
                .growth_order
                .map_or(Asymptotic::Unknown, Asymptotic::Bounded),
        }
    }

    /// The listed points of a table symbol.
    pub fn table_points(&self) -> Option<&[(f64, Complex64)]> {
        match &self.kind {
            Kind::Table(p) => Some(p),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }
}

/// `|φ(t)|² |ψ(t)|^(2m) / (1 + c|ψ(t)|²)^k` for `c > 0`. Falls back to the
/// log domain when a factor overflows, and takes `t = ±∞` as the limit along
/// the float range.
pub fn rational_kernel(phi: &Symbol, psi: &Symbol, c: f64, m: i32, k: i32, t: f64) -> f64 {
    let (p, q) = (phi.abs2(t), psi.abs2(t));
    let den = (1.0 + c * q).powi(k);
    let v = p * q.powi(m) / den;
    if v.is_finite() && den.is_finite() {
        return v;
    }
    let t = t.clamp(-f64::MAX, f64::MAX);
    let lq = psi.ln_abs2(t);
    let x = c.ln() + lq;
    let ln_den = if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    };
    let ln_num = phi.ln_abs2(t) + if m == 0 { 0.0 } else { f64::from(m) * lq };
    (ln_num - f64::from(k) * ln_den).exp()
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("descriptor", &self.descriptor)
            .field("growth_order", &self.growth_order)
            .finish()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor)
    }
}

fn is_integer(a: f64) -> bool {
    a.fract() == 0.0 && a.abs() < 1e15
}

fn power_abs(t: f64, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else if is_integer(a) && a <= i32::MAX as f64 {
        t.abs().powi(a as i32)
    } else {
        t.abs().powf(a)
    }
}

fn signed_power(t: f64, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else if is_integer(a) && a <= i32::MAX as f64 {
        t.powi(a as i32)
    } else {
        t.abs().powf(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_survive_overflow() {
        let (phi, psi) = (Symbol::power(2.0).unwrap(), Symbol::power(2.5).unwrap());
        for t in [1e100, -1e200, f64::INFINITY, f64::NEG_INFINITY] {
            let v = rational_kernel(&phi, &psi, 1.0, 0, 1, t);
            let expect = (-t.abs().min(f64::MAX).ln()).exp();
            assert!(
                (v - expect).abs() <= 1e-12 * expect,
                "t = {t}: {v} vs {expect}"
            );
        }
        let v = rational_kernel(&phi, &psi, 2.0, 1, 2, 1e150);
        assert!((v - 0.25 * 1e-150f64.powi(1)).abs() <= 1e-12 * v);
        assert_eq!(
            rational_kernel(&phi, &psi, 1.0, 0, 2, 3.0),
            81.0 / (1.0 + 3f64.powi(5)).powi(2)
        );
        // Growth stays growth.
        assert_eq!(
            rational_kernel(&psi, &phi, 1.0, 0, 1, f64::INFINITY),
            f64::INFINITY
        );
    }

    #[test]
    fn integer_powers_keep_sign() {
        let s = Symbol::power(3.0).unwrap();
        assert_eq!(s.eval(-2.0).re, -8.0);
        assert_eq!(s.abs(-2.0), 8.0);
        assert_eq!(s.abs2(-2.0), 64.0);
    }

    #[test]
    fn fractional_powers_use_modulus() {
        let s = Symbol::power(0.5).unwrap();
        assert_eq!(s.eval(-4.0).re, 2.0);
        assert_eq!(Symbol::power(0.0).unwrap().eval(0.0).re, 1.0);
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(Symbol::power(-1.0).is_err());
        assert!(Symbol::power(f64::NAN).is_err());
    }

    #[test]
    fn descriptors() {
        assert!(Symbol::parse("zero").unwrap().is_zero());
        assert_eq!(Symbol::parse("pow:2").unwrap().power_exponent(), Some(2.0));
        assert!(Symbol::parse("pow:x").is_err());
        assert!(Symbol::parse("sin").is_err());
    }

    #[test]
    fn table_is_zero_off_points() {
        let s = Symbol::table(vec![
            (1.0, Complex64::new(2.0, 1.0)),
            (0.0, Complex64::new(1.0, 0.0)),
        ])
        .unwrap();
        assert_eq!(s.eval(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(s.eval(1.0), Complex64::new(2.0, 1.0));
        assert_eq!(s.eval(0.5), Complex64::new(0.0, 0.0));
        assert_eq!(s.asymptotic(), Asymptotic::Vanishing);
        assert!(Symbol::table(vec![(1.0, Complex64::new(1.0, 0.0)); 2]).is_err());
    }

    #[test]
    fn custom_growth_metadata() {
        let s = Symbol::custom_real(|t| t.sin(), Some(0.0));
        assert_eq!(s.asymptotic(), Asymptotic::Bounded(0.0));
        let u = Symbol::custom_real(|t| t.exp(), None);
        assert_eq!(u.asymptotic(), Asymptotic::Unknown);
    }
}
