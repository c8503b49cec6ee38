//! Two-point quadrature rules with a free evaluation point.
//!
//! The generalized rule, for `x ∈ [(a+b)/2, b]`, approximates the average of
//! `f` over `[a, b]` by
//!
//! ```text
//! ½[f(x) + f(a+b-x)] - ½(x - (a+3b)/4)[f'(x) - f'(a+b-x)]
//! ```
//!
//! `x = (a+b)/2` gives the midpoint rule and `x = b` the perturbed trapezoid
//! rule.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functions::{FunctionTriple, Interval};
use crate::kernel::check_point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleKind {
    Generalized { x: f64 },
    Midpoint,
    Trapezoid,
    PerturbedTrapezoid,
    /// Single function value `f(x)`, the approximant of the Ostrowski bound.
    PointValue { x: f64 },
}

/// A rule value in both average and total form.
///
/// `value_avg` approximates `(1/(b-a)) ∫ f` and `value_total = value_avg · (b-a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleValue {
    pub value_avg: f64,
    pub value_total: f64,
    pub rule_kind: RuleKind,
}

impl RuleValue {
    pub(crate) fn from_avg(value_avg: f64, iv: &Interval, rule_kind: RuleKind) -> Self {
        Self {
            value_avg,
            value_total: value_avg * iv.length(),
            rule_kind,
        }
    }
}

fn two_point_avg(ft: &FunctionTriple, iv: &Interval, x: f64) -> Result<f64> {
    let mirror = iv.reflect(x);
    let (a, b) = (iv.a(), iv.b());
    let shift = x - (a + 3.0 * b) / 4.0;
    let sum = ft.f(x)? + ft.f(mirror)?;
    let slope = ft.f1(x)? - ft.f1(mirror)?;
    Ok(0.5 * sum - 0.5 * shift * slope)
}

/// The generalized two-point rule at `x ∈ [(a+b)/2, b]`.
pub fn generalized_rule(ft: &FunctionTriple, iv: &Interval, x: f64) -> Result<RuleValue> {
    check_point(iv, x)?;
    ft.check_interval(iv)?;
    let avg = if x == iv.midpoint() {
        ft.f(x)?
    } else {
        two_point_avg(ft, iv, x)?
    };
    Ok(RuleValue::from_avg(avg, iv, RuleKind::Generalized { x }))
}

pub fn midpoint_rule(ft: &FunctionTriple, iv: &Interval) -> Result<RuleValue> {
    let avg = ft.f(iv.midpoint())?;
    Ok(RuleValue::from_avg(avg, iv, RuleKind::Midpoint))
}

pub fn trapezoid_rule(ft: &FunctionTriple, iv: &Interval) -> Result<RuleValue> {
    let avg = (ft.f(iv.a())? + ft.f(iv.b())?) / 2.0;
    Ok(RuleValue::from_avg(avg, iv, RuleKind::Trapezoid))
}

/// Trapezoid rule corrected by `(b-a)²/8 · [f'(b) - f'(a)]` (total form).
pub fn perturbed_trapezoid_rule(ft: &FunctionTriple, iv: &Interval) -> Result<RuleValue> {
    let (a, b) = (iv.a(), iv.b());
    let avg = (ft.f(a)? + ft.f(b)?) / 2.0 - iv.length() / 8.0 * (ft.f1(b)? - ft.f1(a)?);
    Ok(RuleValue::from_avg(avg, iv, RuleKind::PerturbedTrapezoid))
}

/// `f(x)` for any `x ∈ [a, b]`.
pub fn point_value_rule(ft: &FunctionTriple, iv: &Interval, x: f64) -> Result<RuleValue> {
    if !(x >= iv.a() && x <= iv.b()) {
        return Err(crate::Error::PointOutOfRange {
            x,
            lo: iv.a(),
            hi: iv.b(),
        });
    }
    Ok(RuleValue::from_avg(ft.f(x)?, iv, RuleKind::PointValue { x }))
}
