//! Standard operator monotone functions and the Morozova–Chentsov kernel.
//!
//! A standard monotone function `f: (0,∞) → (0,∞)` is operator monotone,
//! satisfies `f(x) = x·f(1/x)` and `f(1) = 1`. It is *regular* when
//! `f(0) := lim_{x→0} f(x) > 0`. The built-in family covers the SLD (maximal),
//! RLD (minimal, not regular) and Wigner–Yanase–Dyson functions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifies a monotone function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MonotoneTag {
    Sld,
    Rld,
    Wyd { p: f64 },
    Custom { name: String },
}

impl fmt::Display for MonotoneTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotoneTag::Sld => write!(f, "sld"),
            MonotoneTag::Rld => write!(f, "rld"),
            MonotoneTag::Wyd { p } => write!(f, "wyd:p={p}"),
            MonotoneTag::Custom { name } => write!(f, "custom:{name}"),
        }
    }
}

type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Sld,
    Rld,
    Wyd(f64),
    Custom(CustomFn),
}

/// A (candidate) standard monotone function with its cached limit `f(0)`.
#[derive(Clone)]
pub struct MonotoneFunction {
    tag: MonotoneTag,
    kind: Kind,
    f0: f64,
}

impl fmt::Debug for MonotoneFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneFunction")
            .field("tag", &self.tag)
            .field("f0", &self.f0)
            .finish()
    }
}

/// Distance from 1 below which the WYD function switches to its Taylor series.
const WYD_SERIES_RADIUS: f64 = 1e-4;

impl MonotoneFunction {
    /// `f_SLD(x) = (x+1)/2`.
    pub fn sld() -> Self {
        Self {
            tag: MonotoneTag::Sld,
            kind: Kind::Sld,
            f0: 0.5,
        }
    }

    /// `f_RLD(x) = 2x/(x+1)`.
    pub fn rld() -> Self {
        Self {
            tag: MonotoneTag::Rld,
            kind: Kind::Rld,
            f0: 0.0,
        }
    }

    /// `f_WYD,p(x) = p(1−p)(x−1)² / ((x^p−1)(x^{1−p}−1))` for `p ∈ (0,1)`.
    pub fn wyd(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "WYD parameter p = {p} must lie in (0, 1)"
            )));
        }
        Ok(Self {
            tag: MonotoneTag::Wyd { p },
            kind: Kind::Wyd(p),
            // (x^p − 1)(x^{1−p} − 1) → 1 as x → 0
            f0: p * (1.0 - p),
        })
    }

    /// A user-supplied function; `f0` must be given explicitly.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f0: f64,
    ) -> Self {
        Self {
            tag: MonotoneTag::Custom { name: name.into() },
            kind: Kind::Custom(Arc::new(f)),
            f0,
        }
    }

    pub fn from_tag(tag: &MonotoneTag) -> Result<Self> {
        match tag {
            MonotoneTag::Sld => Ok(Self::sld()),
            MonotoneTag::Rld => Ok(Self::rld()),
            MonotoneTag::Wyd { p } => Self::wyd(*p),
            MonotoneTag::Custom { name } => Err(Error::InvalidParameter(format!(
                "custom function {name} cannot be rebuilt from its tag"
            ))),
        }
    }

    pub fn tag(&self) -> &MonotoneTag {
        &self.tag
    }

    /// `lim_{x→0} f(x)`.
    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn is_regular(&self) -> bool {
        self.f0 > 0.0
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, Kind::Custom(_))
    }

    /// Evaluates `f(x)` for `x ≥ 0` (`x = 0` returns the cached limit).
    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return self.f0;
        }
        match &self.kind {
            Kind::Sld => 0.5 * (x + 1.0),
            Kind::Rld => 2.0 * x / (x + 1.0),
            Kind::Wyd(p) => wyd_eval(*p, x),
            Kind::Custom(f) => f(x),
        }
    }

    /// `φ(x, y) = (x − y)² c_f(x, y)`, the pair weight in the eigenbasis
    /// expansion of the skew information. Symmetric; `φ(x, 0) = x / f(0)`.
    pub fn pair_weight(&self, x: f64, y: f64) -> f64 {
        let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
        if hi <= 0.0 || hi == lo {
            return 0.0;
        }
        let d = hi - lo;
        match &self.kind {
            Kind::Sld => 2.0 * d * d / (hi + lo),
            Kind::Wyd(p) => {
                let p = *p;
                if lo == 0.0 {
                    return hi / (p * (1.0 - p));
                }
                (hi.powf(p) - lo.powf(p)) * (hi.powf(1.0 - p) - lo.powf(1.0 - p)) / (p * (1.0 - p))
            }
            _ => d * d / (hi * self.eval(lo / hi)),
        }
    }

    /// `∂φ/∂y` at `(x, y)`, used by gradient-based smoothing.
    pub fn pair_weight_dy(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            Kind::Sld => {
                let s = x + y;
                if s <= 0.0 {
                    return 0.0;
                }
                -2.0 * (x - y) * (3.0 * x + y) / (s * s)
            }
            Kind::Wyd(p) if y > 0.0 => {
                let p = *p;
                let q = 1.0 - p;
                let a = x.powf(p) - y.powf(p);
                let b = x.powf(q) - y.powf(q);
                (-p * y.powf(p - 1.0) * b - q * y.powf(q - 1.0) * a) / (p * q)
            }
            _ => {
                let h = 1e-7 * x.max(y).max(1e-9);
                if y > h {
                    (self.pair_weight(x, y + h) - self.pair_weight(x, y - h)) / (2.0 * h)
                } else {
                    (self.pair_weight(x, y + h) - self.pair_weight(x, y)) / h
                }
            }
        }
    }
}

fn wyd_eval(p: f64, x: f64) -> f64 {
    let h = x - 1.0;
    if h.abs() < WYD_SERIES_RADIUS {
        // f(1+h) = 1 + h/2 − (1 − p(1−p)) h²/12 + O(h³)
        let ab = p * (1.0 - p);
        return 1.0 + 0.5 * h - (1.0 - ab) * h * h / 12.0;
    }
    let lx = x.ln();
    let num = p * (1.0 - p) * h * h;
    let den = (p * lx).exp_m1() * ((1.0 - p) * lx).exp_m1();
    num / den
}

impl FromStr for MonotoneFunction {
    type Err = Error;

    /// Parses `sld`, `rld` or `wyd:p=<value>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "sld" => Ok(Self::sld()),
            "rld" => Ok(Self::rld()),
            _ => {
                let rest = s
                    .strip_prefix("wyd:p=")
                    .or_else(|| s.strip_prefix("wyd:"))
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown monotone function '{s}' (expected sld | rld | wyd:p=<p>)"
                        ))
                    })?;
                let p: f64 = rest
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad WYD parameter '{rest}'")))?;
                Self::wyd(p)
            }
        }
    }
}

/// Morozova–Chentsov function `c_f(x, y) = 1 / (y f(x/y))`.
pub fn mc_function(f: &MonotoneFunction, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Morozova–Chentsov arguments must be positive, got ({x}, {y})"
        )));
    }
    Ok(1.0 / (y * f.eval(x / y)))
}

/// Outcome of a single grid condition.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub passed: bool,
    /// Worst violation found (0 when passed).
    pub worst_violation: f64,
    pub note: String,
}

/// Grid-based validation report for a candidate standard monotone function.
#[derive(Debug, Clone, Serialize)]
pub struct MonotoneValidation {
    pub tag: MonotoneTag,
    pub grid_size: usize,
    /// `f(x) = x·f(1/x)`.
    pub symmetry: ConditionCheck,
    /// `f(1) = 1`.
    pub normalization: ConditionCheck,
    /// Nondecreasing along the grid.
    pub grid_monotone: ConditionCheck,
    /// `f_RLD ≤ f ≤ f_SLD`.
    pub sandwich: ConditionCheck,
    /// Operator monotonicity cannot be decided from samples.
    pub operator_monotone: &'static str,
    pub regular: bool,
}

impl MonotoneValidation {
    pub fn all_passed(&self) -> bool {
        self.symmetry.passed
            && self.normalization.passed
            && self.grid_monotone.passed
            && self.sandwich.passed
    }
}

/// `n` log-spaced points in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn check(worst: f64, note: impl Into<String>) -> ConditionCheck {
    ConditionCheck {
        passed: worst <= 0.0,
        worst_violation: worst.max(0.0),
        note: note.into(),
    }
}

/// Checks the standard-monotone conditions on a log grid over `[1e-6, 1e6]`.
pub fn validate_standard_monotone(
    f: &MonotoneFunction,
    grid_size: usize,
) -> Result<MonotoneValidation> {
    if grid_size < 8 {
        return Err(Error::InvalidParameter("grid_size must be >= 8".into()));
    }
    let grid = log_grid(1e-6, 1e6, grid_size);
    let sld = MonotoneFunction::sld();
    let rld = MonotoneFunction::rld();

    let mut sym = 0.0f64;
    let mut mono = 0.0f64;
    let mut sand = 0.0f64;
    let mut prev = f64::NEG_INFINITY;
    for &x in &grid {
        let fx = f.eval(x);
        let scale = fx.abs().max(1.0);
        sym = sym.max((fx - x * f.eval(1.0 / x)).abs() - 1e-10 * scale);
        mono = mono.max(prev - fx - 1e-12 * scale);
        prev = fx;
        sand = sand
            .max(rld.eval(x) - fx - 1e-12 * scale)
            .max(fx - sld.eval(x) - 1e-12 * scale);
        if !fx.is_finite() {
            sym = f64::INFINITY;
        }
    }
    let norm = (f.eval(1.0) - 1.0).abs() - 1e-12;
    Ok(MonotoneValidation {
        tag: f.tag().clone(),
        grid_size,
        symmetry: check(sym, "f(x) = x f(1/x), tol 1e-10 relative"),
        normalization: check(norm, "f(1) = 1, tol 1e-12"),
        grid_monotone: check(mono, "nondecreasing on the grid"),
        sandwich: check(sand, "f_RLD <= f <= f_SLD, slack 1e-12 relative"),
        operator_monotone: "grid-consistent only",
        regular: f.is_regular(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        assert_eq!(MonotoneFunction::sld().eval(1.0), 1.0);
        assert_eq!(MonotoneFunction::sld().f0(), 0.5);
        assert_eq!(MonotoneFunction::rld().f0(), 0.0);
        assert!(!MonotoneFunction::rld().is_regular());
        let w = MonotoneFunction::wyd(0.5).unwrap();
        assert!((w.eval(4.0) - 2.25).abs() < 1e-13);
        assert!((w.f0() - 0.25).abs() < 1e-15);
        assert!(MonotoneFunction::wyd(0.0).is_err());
        assert!(MonotoneFunction::wyd(1.0).is_err());
        assert!(MonotoneFunction::wyd(f64::NAN).is_err());
    }

    #[test]
    fn wyd_series_matches_direct_near_one() {
        for &p in &[0.1, 0.3, 0.5, 0.9] {
            let w = MonotoneFunction::wyd(p).unwrap();
            assert!((w.eval(1.0) - 1.0).abs() < 1e-15);
            // Either side of the series switch point.
            for &x in &[1.0 + 0.99e-4, 1.0 + 1.01e-4, 1.0 - 0.99e-4, 1.0 - 1.01e-4] {
                let direct = {
                    let num = p * (1.0 - p) * (x - 1.0) * (x - 1.0);
                    num / ((p * x.ln()).exp_m1() * ((1.0 - p) * x.ln()).exp_m1())
                };
                assert!((w.eval(x) - direct).abs() < 1e-9, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn wyd_f0_two_ways() {
        // f(x) = f0 (1−x)² / ((1−x^p)(1−x^{1−p})): expand the denominator as a
        // double geometric series and compare with the direct formula at 1e-8.
        for &p in &[0.3, 0.5, 0.7] {
            let w = MonotoneFunction::wyd(p).unwrap();
            let x: f64 = 1e-8;
            let (a, b) = (x.powf(p), x.powf(1.0 - p));
            let mut series = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    series += a.powi(i) * b.powi(j);
                }
            }
            let series = w.f0() * (1.0 - x).powi(2) * series;
            assert!((w.eval(x) - series).abs() < 1e-6 * w.f0(), "p={p}");
        }
        // Far enough from 0 that x^p is negligible for every p used here.
        for &p in &[0.05, 0.3, 0.5, 0.95] {
            let w = MonotoneFunction::wyd(p).unwrap();
            assert!((w.eval(1e-300) - w.f0()).abs() < 1e-6 * w.f0(), "p={p}");
        }
    }

    #[test]
    fn mc_function_examples() {
        let sld = MonotoneFunction::sld();
        assert!((mc_function(&sld, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((mc_function(&sld, 2.0, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let w = MonotoneFunction::wyd(0.5).unwrap();
        assert!((mc_function(&w, 4.0, 1.0).unwrap() - 1.0 / 2.25).abs() < 1e-13);
        assert!(mc_function(&sld, 0.0, 1.0).is_err());
        assert!(mc_function(&sld, 1.0, -1.0).is_err());
        for &(x, y) in &[(0.3, 2.0), (5.0, 0.01), (1e-4, 7.0)] {
            for f in [sld.clone(), w.clone(), MonotoneFunction::wyd(0.2).unwrap()] {
                let a = mc_function(&f, x, y).unwrap();
                let b = mc_function(&f, y, x).unwrap();
                assert!((a - b).abs() < 1e-10 * a.abs());
            }
        }
    }

    #[test]
    fn validation_reports() {
        assert!(validate_standard_monotone(&MonotoneFunction::sld(), 200)
            .unwrap()
            .all_passed());
        assert!(validate_standard_monotone(&MonotoneFunction::wyd(0.3).unwrap(), 200)
            .unwrap()
            .all_passed());
        let sq = MonotoneFunction::custom("x^2", |x| x * x, 0.0);
        let rep = validate_standard_monotone(&sq, 64).unwrap();
        assert!(!rep.symmetry.passed);
        assert!(rep.normalization.passed);
        assert_eq!(rep.operator_monotone, "grid-consistent only");
        assert!(validate_standard_monotone(&sq, 4).is_err());
    }

    #[test]
    fn sandwich_on_dense_grid() {
        let sld = MonotoneFunction::sld();
        let rld = MonotoneFunction::rld();
        let fs = [
            MonotoneFunction::sld(),
            MonotoneFunction::rld(),
            MonotoneFunction::wyd(0.01).unwrap(),
            MonotoneFunction::wyd(0.3).unwrap(),
            MonotoneFunction::wyd(0.5).unwrap(),
            MonotoneFunction::wyd(0.99).unwrap(),
        ];
        for x in log_grid(1e-6, 1e6, 1000) {
            for f in &fs {
                let v = f.eval(x);
                let tol = 1e-12 * v.max(1.0);
                assert!(rld.eval(x) <= v + tol && v <= sld.eval(x) + tol, "{:?} {x}", f.tag());
            }
        }
    }

    #[test]
    fn pair_weight_matches_definition() {
        for f in [
            MonotoneFunction::sld(),
            MonotoneFunction::wyd(0.3).unwrap(),
            MonotoneFunction::custom("sld-copy", |x| 0.5 * (x + 1.0), 0.5),
        ] {
            for &(x, y) in &[(0.7, 0.2), (0.01, 0.5), (0.4, 0.4)] {
                let direct = if x == y {
                    0.0
                } else {
                    (x - y) * (x - y) * mc_function(&f, x, y).unwrap()
                };
                assert!((f.pair_weight(x, y) - direct).abs() < 1e-12);
            }
            assert!((f.pair_weight(0.6, 0.0) - 0.6 / f.f0()).abs() < 1e-12);
        }
    }

    #[test]
    fn pair_weight_derivative_matches_differences() {
        for f in [MonotoneFunction::sld(), MonotoneFunction::wyd(0.3).unwrap()] {
            for &(x, y) in &[(0.7, 0.2), (0.05, 0.5), (0.3, 0.3)] {
                let h = 1e-6;
                let fd = (f.pair_weight(x, y + h) - f.pair_weight(x, y - h)) / (2.0 * h);
                assert!((f.pair_weight_dy(x, y) - fd).abs() < 1e-6, "{:?}", f.tag());
            }
        }
    }

    #[test]
    fn parse_cli_syntax() {
        assert_eq!(*"sld".parse::<MonotoneFunction>().unwrap().tag(), MonotoneTag::Sld);
        assert_eq!(*"RLD".parse::<MonotoneFunction>().unwrap().tag(), MonotoneTag::Rld);
        assert_eq!(
            *"wyd:p=0.3".parse::<MonotoneFunction>().unwrap().tag(),
            MonotoneTag::Wyd { p: 0.3 }
        );
        assert!("wyd:p=1.5".parse::<MonotoneFunction>().is_err());
        assert!("bogus".parse::<MonotoneFunction>().is_err());
    }
}
