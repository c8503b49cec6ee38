//! Registry of test functions with exact first and second derivatives.
//!
//! Every certificate in this crate reads `f''` at interval endpoints and `f'`
//! at interior points, so derivatives are analytic and never approximated.
//! Functions are parsed from short spec strings such as `power:2.5`,
//! `reciprocal`, `neglog`, `exp` or `poly:1,0,-3` (coefficients highest
//! degree first).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of grid points for the `|f''|` convexity heuristic.
pub const DEFAULT_CONVEXITY_GRID: usize = 101;

const CONVEXITY_TOL: f64 = 1e-12;

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawInterval {
    a: f64,
    b: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;

    fn try_from(raw: RawInterval) -> Result<Self> {
        Interval::new(raw.a, raw.b)
    }
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval {
                a,
                b,
                reason: "endpoints must be finite",
            });
        }
        if a >= b {
            return Err(Error::InvalidInterval {
                a,
                b,
                reason: "requires a < b",
            });
        }
        let len = b - a;
        if !len.is_finite() || !(a + b).is_finite() {
            return Err(Error::InvalidInterval {
                a,
                b,
                reason: "length or midpoint overflows",
            });
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        (self.a + self.b) / 2.0
    }

    /// The point `a + b - x`. Exact at `x = b` and `x = (a + b) / 2`.
    #[inline]
    pub fn reflect(&self, x: f64) -> f64 {
        if x == self.b {
            self.a
        } else if x == self.a {
            self.b
        } else {
            (self.a + self.b) - x
        }
    }

    /// `n` equally spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let h = self.length() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.b
                } else {
                    self.a + i as f64 * h
                }
            })
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Domain of a registry function; each end may be open or closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_open: true,
        hi_open: true,
    };

    pub const POSITIVE: Domain = Domain {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_open: true,
        hi_open: true,
    };

    pub const NON_NEGATIVE: Domain = Domain {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_open: false,
        hi_open: true,
    };

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn contains_interval(&self, iv: &Interval) -> bool {
        self.contains(iv.a()) && self.contains(iv.b())
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_open { '(' } else { '[' };
        let close = if self.hi_open { ')' } else { ']' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// The closed set of built-in function families.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// `x^p`
    Power { exponent: f64 },
    /// `1/x`
    Reciprocal,
    /// `-ln x`
    NegLog,
    /// `e^x`
    Exp,
    /// Polynomial with coefficients from the highest degree down.
    Polynomial { coeffs: Vec<f64> },
}

/// A real function together with its exact first and second derivatives.
///
/// Immutable once built. Evaluating any member outside the domain is an
/// error, as is a non-finite result.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTriple {
    kind: Builtin,
    domain: Domain,
    abs_f2_convex_hint: bool,
}

/// Builds a registry function from its id and parameter list.
pub fn register_builtin(id: &str, params: &[f64]) -> Result<FunctionTriple> {
    let invalid = |reason: &str| Error::InvalidParams {
        id: id.to_string(),
        reason: reason.to_string(),
    };
    if params.iter().any(|p| !p.is_finite()) {
        return Err(invalid("parameters must be finite"));
    }
    let kind = match id {
        "power" => match params {
            [p] => Builtin::Power { exponent: *p },
            _ => return Err(invalid("expects exactly one exponent")),
        },
        "reciprocal" | "neglog" | "exp" if !params.is_empty() => {
            return Err(invalid("takes no parameters"))
        }
        "reciprocal" => Builtin::Reciprocal,
        "neglog" => Builtin::NegLog,
        "exp" => Builtin::Exp,
        "polynomial" | "poly" => {
            if params.is_empty() {
                return Err(invalid("needs at least one coefficient"));
            }
            // Leading zeros do not change the function but would confuse the degree.
            let first = params.iter().position(|c| *c != 0.0);
            let coeffs = match first {
                Some(i) => params[i..].to_vec(),
                None => vec![0.0],
            };
            Builtin::Polynomial { coeffs }
        }
        other => return Err(Error::UnknownFunction(other.to_string())),
    };
    Ok(FunctionTriple::from_builtin(kind))
}

fn is_integer(p: f64) -> bool {
    p.fract() == 0.0
}

impl FunctionTriple {
    pub fn from_builtin(kind: Builtin) -> Self {
        let (domain, hint) = match &kind {
            Builtin::Power { exponent: p } => {
                let p = *p;
                let domain = if is_integer(p) && p >= 0.0 {
                    Domain::REAL_LINE
                } else if !is_integer(p) && p >= 2.0 {
                    // f, f', f'' all stay finite at 0.
                    Domain::NON_NEGATIVE
                } else {
                    Domain::POSITIVE
                };
                // |f''| = |p(p-1)| x^(p-2) is convex unless 2 < p < 3.
                let hint = !(p > 2.0 && p < 3.0);
                (domain, hint)
            }
            Builtin::Reciprocal | Builtin::NegLog => (Domain::POSITIVE, true),
            Builtin::Exp => (Domain::REAL_LINE, true),
            // |f''| is |linear| at most for cubic and below.
            Builtin::Polynomial { coeffs } => (Domain::REAL_LINE, coeffs.len() <= 4),
        };
        Self {
            kind,
            domain,
            abs_f2_convex_hint: hint,
        }
    }

    pub fn kind(&self) -> &Builtin {
        &self.kind
    }

    pub fn id(&self) -> &'static str {
        match self.kind {
            Builtin::Power { .. } => "power",
            Builtin::Reciprocal => "reciprocal",
            Builtin::NegLog => "neglog",
            Builtin::Exp => "exp",
            Builtin::Polynomial { .. } => "polynomial",
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn abs_f2_convex_hint(&self) -> bool {
        self.abs_f2_convex_hint
    }

    pub fn check_point(&self, x: f64) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                what: "x",
                value: x,
                domain: self.domain.to_string(),
            })
        }
    }

    pub fn check_interval(&self, iv: &Interval) -> Result<()> {
        self.check_point(iv.a())?;
        self.check_point(iv.b())
    }

    pub fn f(&self, x: f64) -> Result<f64> {
        self.check_point(x)?;
        finite("f", x, self.raw_f(x))
    }

    pub fn f1(&self, x: f64) -> Result<f64> {
        self.check_point(x)?;
        finite("f'", x, self.raw_f1(x))
    }

    pub fn f2(&self, x: f64) -> Result<f64> {
        self.check_point(x)?;
        finite("f''", x, self.raw_f2(x))
    }

    fn raw_f(&self, x: f64) -> f64 {
        match &self.kind {
            Builtin::Power { exponent } => pow(x, *exponent),
            Builtin::Reciprocal => 1.0 / x,
            Builtin::NegLog => -x.ln(),
            Builtin::Exp => x.exp(),
            Builtin::Polynomial { coeffs } => horner(coeffs.iter().copied(), x),
        }
    }

    fn raw_f1(&self, x: f64) -> f64 {
        match &self.kind {
            Builtin::Power { exponent: p } => {
                if *p == 0.0 {
                    0.0
                } else {
                    p * pow(x, p - 1.0)
                }
            }
            Builtin::Reciprocal => -1.0 / (x * x),
            Builtin::NegLog => -1.0 / x,
            Builtin::Exp => x.exp(),
            Builtin::Polynomial { coeffs } => horner(derivative(coeffs, 1), x),
        }
    }

    fn raw_f2(&self, x: f64) -> f64 {
        match &self.kind {
            Builtin::Power { exponent: p } => {
                if *p == 0.0 || *p == 1.0 {
                    0.0
                } else {
                    p * (p - 1.0) * pow(x, p - 2.0)
                }
            }
            Builtin::Reciprocal => 2.0 / (x * x * x),
            Builtin::NegLog => 1.0 / (x * x),
            Builtin::Exp => x.exp(),
            Builtin::Polynomial { coeffs } => horner(derivative(coeffs, 2), x),
        }
    }
}

fn finite(what: &'static str, x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { what, x })
    }
}

fn pow(x: f64, p: f64) -> f64 {
    if is_integer(p) && p.abs() <= i32::MAX as f64 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

fn horner(coeffs: impl IntoIterator<Item = f64>, x: f64) -> f64 {
    coeffs.into_iter().fold(0.0, |acc, c| acc * x + c)
}

/// Coefficients of the `order`-th derivative, highest degree first.
fn derivative(coeffs: &[f64], order: usize) -> impl Iterator<Item = f64> + '_ {
    let degree = coeffs.len() - 1;
    let keep = coeffs.len().saturating_sub(order);
    coeffs[..keep].iter().enumerate().map(move |(i, c)| {
        let power = degree - i;
        let factor: f64 = (0..order).map(|k| (power - k) as f64).product();
        c * factor
    })
}

impl FromStr for FunctionTriple {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (id, rest) = match spec.split_once(':') {
            Some((id, rest)) => (id.trim(), Some(rest)),
            None => (spec, None),
        };
        let params = match rest {
            None => Vec::new(),
            Some(list) => list
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| Error::InvalidParams {
                        id: id.to_string(),
                        reason: format!("cannot parse `{}` as a number", s.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        register_builtin(id, &params)
    }
}

impl fmt::Display for FunctionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Builtin::Power { exponent } => write!(f, "power:{exponent}"),
            Builtin::Reciprocal => f.write_str("reciprocal"),
            Builtin::NegLog => f.write_str("neglog"),
            Builtin::Exp => f.write_str("exp"),
            Builtin::Polynomial { coeffs } => {
                f.write_str("poly:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

/// Grid test for midpoint convexity of `|f''|` on `iv`.
///
/// This is a sampling heuristic, not a proof.
pub fn check_abs_f2_convexity(ft: &FunctionTriple, iv: &Interval, grid_n: usize) -> Result<bool> {
    check_abs_f2_pow_convexity(ft, iv, grid_n, 1.0)
}

/// Grid test for midpoint convexity of `|f''|^q`, as needed by the Hölder
/// and power-mean certificates.
pub fn check_abs_f2_pow_convexity(
    ft: &FunctionTriple,
    iv: &Interval,
    grid_n: usize,
    q: f64,
) -> Result<bool> {
    if grid_n < 3 {
        return Err(Error::InvalidArgument(format!(
            "convexity grid needs at least 3 points, got {grid_n}"
        )));
    }
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent(format!("q = {q} must be >= 1")));
    }
    ft.check_interval(iv)?;
    let values = iv
        .grid(grid_n)
        .into_iter()
        .map(|x| ft.f2(x).map(|v| v.abs().powf(q)))
        .collect::<Result<Vec<_>>>()?;
    Ok(values.windows(3).all(|w| {
        let chord = (w[0] + w[2]) / 2.0;
        w[1] <= chord + CONVEXITY_TOL * chord.abs().max(1.0)
    }))
}
