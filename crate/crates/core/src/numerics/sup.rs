//! Supremum of a continuous function over an interval, possibly unbounded.

use super::Interval;
use crate::error::{Error, Result};

/// Behaviour of `f(t)` as `|t| → ∞`, `f ~ |t|^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    Exponent(f64),
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgLocation {
    At(f64),
    PlusInfinity,
    MinusInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupResult {
    /// `+∞` when the growth hint says the function is unbounded.
    pub value: f64,
    pub location: ArgLocation,
    /// False when an unbounded domain was searched without a growth hint.
    pub certified: bool,
}

impl SupResult {
    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SupOptions {
    pub grid_points: usize,
    pub candidates: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions {
            grid_points: 2001,
            candidates: 5,
        }
    }
}

const FAR_POINTS: [f64; 4] = [1e3, 1e6, 1e9, 1e12];

/// Grid variable `u` ↦ `t`, bounded `u` range.
#[derive(Clone, Copy)]
enum Chart {
    Linear,
    Line,
    Upper(f64),
    Lower(f64),
}

impl Chart {
    fn of(domain: Interval) -> (Chart, f64, f64) {
        match (domain.lo.is_finite(), domain.hi.is_finite()) {
            (true, true) => (Chart::Linear, domain.lo, domain.hi),
            (false, false) => (Chart::Line, -1.0, 1.0),
            (true, false) => (Chart::Upper(domain.lo), 0.0, 1.0),
            (false, true) => (Chart::Lower(domain.hi), 0.0, 1.0),
        }
    }

    fn t(self, u: f64) -> f64 {
        match self {
            Chart::Linear => u,
            Chart::Line => u / (1.0 - u * u),
            Chart::Upper(a) => a + u / (1.0 - u * u),
            Chart::Lower(b) => b - u / (1.0 - u * u),
        }
    }
}

fn chart_points(domain: Interval, n: usize) -> (Chart, Vec<f64>) {
    let (chart, ua, ub) = Chart::of(domain);
    let n = n.max(3);
    let us = match chart {
        Chart::Linear => (0..n)
            .map(|i| ua + (ub - ua) * i as f64 / (n - 1) as f64)
            .collect(),
        Chart::Line => (0..n)
            .map(|i| -1.0 + (2 * i + 1) as f64 / n as f64)
            .collect(),
        Chart::Upper(_) | Chart::Lower(_) => (0..n).map(|i| i as f64 / n as f64).collect(),
    };
    (chart, us)
}

/// The `t` points of an `n`-point search grid over `domain`; open ends are
/// never sampled. Useful for independent verification scans.
pub fn chart_grid(domain: Interval, n: usize) -> Vec<f64> {
    let (chart, us) = chart_points(domain, n);
    us.into_iter().map(|u| chart.t(u)).collect()
}

fn golden_max<F: Fn(f64) -> f64>(g: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

pub fn sup_search<F: Fn(f64) -> f64>(f: F, domain: Interval, growth: Growth) -> Result<SupResult> {
    sup_search_with(f, domain, growth, &SupOptions::default())
}

/// Grid scan in a bounded chart variable, golden-section refinement of the
/// best local maxima, then probes far out on unbounded sides.
pub fn sup_search_with<F: Fn(f64) -> f64>(
    f: F,
    domain: Interval,
    growth: Growth,
    opts: &SupOptions,
) -> Result<SupResult> {
    let unbounded_hi = domain.hi == f64::INFINITY;
    let unbounded_lo = domain.lo == f64::NEG_INFINITY;
    if let Growth::Exponent(p) = growth {
        if p > 0.0 && (unbounded_hi || unbounded_lo) {
            let location = if unbounded_hi {
                ArgLocation::PlusInfinity
            } else {
                ArgLocation::MinusInfinity
            };
            return Ok(SupResult {
                value: f64::INFINITY,
                location,
                certified: true,
            });
        }
    }

    let (chart, us) = chart_points(domain, opts.grid_points);
    let n = us.len();
    let mut vals = Vec::with_capacity(n);
    for &u in &us {
        let t = chart.t(u);
        let v = f(t);
        if v.is_nan() {
            return Err(Error::NonFinite { t, value: v });
        }
        if v == f64::INFINITY {
            return Ok(SupResult {
                value: v,
                location: ArgLocation::At(t),
                certified: true,
            });
        }
        vals.push(v);
    }

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = i == 0 || vals[i] >= vals[i - 1];
            let right = i + 1 == n || vals[i] >= vals[i + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
    peaks.truncate(opts.candidates.max(1));

    let (mut best_t, mut best) = {
        let i = peaks[0];
        (chart.t(us[i]), vals[i])
    };
    let g = |u: f64| {
        let v = f(chart.t(u));
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    for &i in &peaks {
        let a = if i == 0 { us[0] } else { us[i - 1] };
        let b = if i + 1 == n { us[n - 1] } else { us[i + 1] };
        let (u, v) = golden_max(&g, a, b);
        if v > best {
            best = v;
            best_t = chart.t(u);
        }
    }

    let mut location = ArgLocation::At(best_t);
    for &far in &FAR_POINTS {
        for (open, t, loc) in [
            (unbounded_hi, far, ArgLocation::PlusInfinity),
            (unbounded_lo, -far, ArgLocation::MinusInfinity),
        ] {
            if !open {
                continue;
            }
            let v = f(t);
            if v.is_finite() && v > best {
                best = v;
                location = loc;
            }
        }
    }

    Ok(SupResult {
        value: best,
        location,
        certified: !matches!(growth, Growth::Unknown) || domain.is_bounded(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_check<F: Fn(f64) -> f64>(f: F, domain: Interval, sup: f64) {
        for t in chart_grid(domain, 20_010) {
            assert!(sup >= f(t) - 1e-12, "f({t}) = {} exceeds {sup}", f(t));
        }
    }

    #[test]
    fn rational_peak_at_one() {
        let f = |t: f64| t * t / (1.0 + t.powi(4));
        let r = sup_search(f, Interval::real_line(), Growth::Exponent(-2.0)).unwrap();
        assert!((r.value - 0.5).abs() < 1e-13);
        match r.location {
            ArgLocation::At(t) => assert!((t.abs() - 1.0).abs() < 1e-6),
            other => panic!("unexpected {other:?}"),
        }
        dense_check(f, Interval::real_line(), r.value);
    }

    #[test]
    fn constant_zero() {
        let r = sup_search(|_| 0.0, Interval::real_line(), Growth::Exponent(0.0)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn centred_bump() {
        let f = |t: f64| 1.0 / (1.0 + t * t);
        let r = sup_search(f, Interval::real_line(), Growth::Exponent(-2.0)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert_eq!(r.location, ArgLocation::At(0.0));
    }

    #[test]
    fn growth_hint_gives_infinite() {
        let r = sup_search(|t: f64| t * t, Interval::real_line(), Growth::Exponent(2.0)).unwrap();
        assert!(r.is_infinite());
    }

    #[test]
    fn supremum_approached_at_infinity() {
        let f = |t: f64| t * t / (1.0 + t * t);
        let r = sup_search(f, Interval::real_line(), Growth::Exponent(0.0)).unwrap();
        assert!(matches!(
            r.location,
            ArgLocation::PlusInfinity | ArgLocation::MinusInfinity
        ));
        assert!((r.value - 1.0).abs() < 1e-20 + 1e-15);
        dense_check(f, Interval::real_line(), r.value);
    }

    #[test]
    fn bounded_interval_endpoint_maximum() {
        let r = sup_search(
            |t: f64| t,
            Interval::new(-1.0, 2.0).unwrap(),
            Growth::Unknown,
        )
        .unwrap();
        assert_eq!(r.value, 2.0);
        assert!(r.certified);
    }
}
