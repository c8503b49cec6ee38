//! The piecewise-quadratic kernel behind the two-point rule's error identity.
//!
//! For `x` in `[(a+b)/2, b]` the kernel on `[0, 1]` is
//!
//! ```text
//!         t²          0  <= t < t1
//! k(t) =  (t - 1/2)²  t1 <= t < t2
//!         (t - 1)²    t2 <= t <= 1
//! ```
//!
//! with `t1 = (b-x)/(b-a)` and `t2 = (x-a)/(b-a)`, and the rule error equals
//! `(b-a)²/2 · ∫₀¹ k(t) f''(ta + (1-t)b) dt`.
//!
//! `k` jumps by `t1 - 1/4` at both breakpoints; it is continuous only for
//! `x` in `{(a+b)/2, (a+3b)/4, b}`. The jump is what produces the derivative
//! correction term of the rule.

use crate::error::{Error, Result};
use crate::functions::{FunctionTriple, Interval};
use crate::oracle::{integrate, DEFAULT_TOL};
use crate::rules::generalized_rule;

/// Interval plus evaluation point `x ∈ [(a+b)/2, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    iv: Interval,
    x: f64,
}

impl KernelSpec {
    pub fn new(iv: Interval, x: f64) -> Result<Self> {
        check_point(&iv, x)?;
        Ok(Self { iv, x })
    }

    pub fn interval(&self) -> Interval {
        self.iv
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// `(t1, t2)`, with `0 <= t1 <= 1/2 <= t2 <= 1`.
    pub fn breakpoints(&self) -> (f64, f64) {
        let len = self.iv.length();
        let t1 = ((self.iv.b() - self.x) / len).clamp(0.0, 0.5);
        let t2 = ((self.x - self.iv.a()) / len).clamp(0.5, 1.0);
        (t1, t2)
    }

    /// `(b - x)³ + (x - (a+b)/2)³`, the cubic that every bound constant is built from.
    pub fn cubic_spread(&self) -> f64 {
        self.spread(3.0)
    }

    /// `(b - x)^e + (x - (a+b)/2)^e`.
    pub(crate) fn spread(&self, e: f64) -> f64 {
        let right = self.iv.b() - self.x;
        let centre = (self.x - self.iv.midpoint()).max(0.0);
        right.powf(e) + centre.powf(e)
    }
}

/// Checks `(a+b)/2 <= x <= b`.
pub(crate) fn check_point(iv: &Interval, x: f64) -> Result<()> {
    let lo = iv.midpoint();
    if x >= lo && x <= iv.b() {
        Ok(())
    } else {
        Err(Error::PointOutOfRange { x, lo, hi: iv.b() })
    }
}

/// Evaluates `k(t)`. The breakpoint `t1` belongs to the middle piece and `t2`
/// to the last one.
pub fn kernel_eval(ks: &KernelSpec, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::KernelArgument(t));
    }
    let (t1, t2) = ks.breakpoints();
    Ok(if t < t1 {
        t * t
    } else if t < t2 {
        (t - 0.5) * (t - 0.5)
    } else {
        (t - 1.0) * (t - 1.0)
    })
}

/// `∫₀¹ |k(t)| dt = 2 / (3(b-a)³) · [(b-x)³ + (x-(a+b)/2)³]`.
pub fn kernel_abs_moment(ks: &KernelSpec) -> f64 {
    let len = ks.iv.length();
    2.0 * ks.cubic_spread() / (3.0 * len.powi(3))
}

/// `∫₀¹ |k(t)|^p dt = 2 / ((2p+1)(b-a)^(2p+1)) · [(b-x)^(2p+1) + (x-(a+b)/2)^(2p+1)]`.
pub fn kernel_lp_moment(ks: &KernelSpec, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!("kernel moment needs p >= 1, got {p}")));
    }
    let e = 2.0 * p + 1.0;
    // Normalise first so large intervals do not overflow.
    let len = ks.iv.length();
    let right = (ks.iv.b() - ks.x) / len;
    let centre = ((ks.x - ks.iv.midpoint()) / len).max(0.0);
    Ok(2.0 / e * (right.powf(e) + centre.powf(e)))
}

/// Left side minus right side of the error identity, both integrals computed
/// by the oracle at `tol`. Should be at round-off level for smooth `f`.
pub fn identity_residual(ft: &FunctionTriple, ks: &KernelSpec, tol: f64) -> Result<f64> {
    let iv = ks.iv;
    let (a, b) = (iv.a(), iv.b());
    let len = iv.length();
    ft.check_interval(&iv)?;

    let rule = generalized_rule(ft, &iv, ks.x)?;
    let integral = integrate(|u| ft.f(u).unwrap_or(f64::NAN), a, b, tol)?.value;
    let lhs = integral / len - rule.value_avg;

    let (t1, t2) = ks.breakpoints();
    let pieces: [(f64, f64, f64); 3] = [(0.0, t1, 0.0), (t1, t2, 0.5), (t2, 1.0, 1.0)];
    let mut kernel_integral = 0.0;
    for (lo, hi, centre) in pieces {
        if hi <= lo {
            continue;
        }
        let piece = integrate(
            |t| {
                let u = (t * a + (1.0 - t) * b).clamp(a, b);
                (t - centre) * (t - centre) * ft.f2(u).unwrap_or(f64::NAN)
            },
            lo,
            hi,
            tol,
        )?;
        kernel_integral += piece.value;
    }
    Ok(lhs - len * len / 2.0 * kernel_integral)
}

/// [`identity_residual`] at the default oracle tolerance.
pub fn identity_residual_default(ft: &FunctionTriple, ks: &KernelSpec) -> Result<f64> {
    identity_residual(ft, ks, DEFAULT_TOL)
}
