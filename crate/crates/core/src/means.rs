//! Special means of two positive numbers and numeric checks of the
//! inequalities obtained by applying the quadrature bounds to `x^p`, `1/x`
//! and `-ln x`.
//!
//! Propositions 1, 3 and 5 come from trapezoid-form bounds, which need
//! `f'(a) = f'(b)`. None of the generating functions satisfy that, so these
//! three can fail; the checker reports this in
//! [`PropositionReport::hypothesis_note`] and also evaluates the perturbed
//! trapezoid inequality for the same function, which needs no such hypothesis.

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_holds, certify, ConvexityBound, HolderPair};
use crate::error::{Error, Result};
use crate::functions::{FunctionTriple, Interval};
use crate::rules::perturbed_trapezoid_rule;

const CHAIN_TOL: f64 = 1e-12;
const PROPOSITION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    Identric,
    PLogarithmic { p: f64 },
}

fn require_positive(a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "mean needs finite a, b > 0 (got a = {a}, b = {b})"
        )))
    }
}

/// `ln(b/a)` without cancellation when `b` is close to `a`.
fn log_ratio(a: f64, b: f64) -> f64 {
    ((b - a) / a).ln_1p()
}

/// Value of the mean `mk` of `a <= b`.
pub fn mean_value(mk: MeanKind, a: f64, b: f64) -> Result<f64> {
    if mk == MeanKind::Arithmetic {
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "arithmetic mean needs finite a, b >= 0 (got a = {a}, b = {b})"
            )));
        }
    } else {
        require_positive(a, b)?;
    }
    if a > b {
        return Err(Error::InvalidArgument(format!("means expect a <= b (got a = {a}, b = {b})")));
    }
    Ok(match mk {
        MeanKind::Arithmetic => a / 2.0 + b / 2.0,
        MeanKind::Geometric => a.sqrt() * b.sqrt(),
        MeanKind::Harmonic => 2.0 / (1.0 / a + 1.0 / b),
        MeanKind::Logarithmic => {
            if a == b {
                a
            } else {
                (b - a) / log_ratio(a, b)
            }
        }
        MeanKind::Identric => {
            if a == b {
                a
            } else {
                ln_identric(a, b).exp()
            }
        }
        MeanKind::PLogarithmic { p } => {
            if p == -1.0 || p == 0.0 || !p.is_finite() {
                return Err(Error::InvalidExponent(format!(
                    "p-logarithmic mean is undefined for p = {p}"
                )));
            }
            if a == b {
                a
            } else {
                (ln_lp_pow(a, b, p) / p).exp()
            }
        }
    })
}

/// `ln I(a, b) = (b ln b - a ln a)/(b - a) - 1`.
fn ln_identric(a: f64, b: f64) -> f64 {
    // Rewritten around ln a so that b -> a does not cancel catastrophically:
    // ln I = ln a + (b/(b-a)) ln(b/a) - 1.
    a.ln() + b / (b - a) * log_ratio(a, b) - 1.0
}

/// `ln L_p^p = ln[(b^{p+1} - a^{p+1}) / ((p+1)(b-a))]`, arranged so that
/// `p` near `-1` or `0` keeps full relative accuracy.
fn ln_lp_pow(a: f64, b: f64, p: f64) -> f64 {
    let s = p + 1.0;
    if p.abs() <= 0.5 {
        // L_p^p - 1 = [b(b^p - 1) - a(a^p - 1) - p(b - a)] / (s(b - a))
        let num = b * (p * b.ln()).exp_m1() - a * (p * a.ln()).exp_m1() - p * (b - a);
        return (num / (s * (b - a))).ln_1p();
    }
    let r = log_ratio(a, b);
    // (b^s - a^s) / s = a^s · expm1(s r) / s
    s * a.ln() + (((s * r).exp_m1()) / s).ln() - (b - a).ln()
}

/// `L_p^p(a, b)` directly, for the propositions that use the p-th power.
fn lp_pow(a: f64, b: f64, p: f64) -> f64 {
    ln_lp_pow(a, b, p).exp()
}

/// `H, G, L, I, A` at one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeansChain {
    pub harmonic: f64,
    pub geometric: f64,
    pub logarithmic: f64,
    pub identric: f64,
    pub arithmetic: f64,
}

impl MeansChain {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.harmonic,
            self.geometric,
            self.logarithmic,
            self.identric,
            self.arithmetic,
        ]
    }

    /// `H <= G <= L <= I <= A` up to a relative `1e-12`.
    pub fn is_ordered(&self) -> bool {
        self.as_array()
            .windows(2)
            .all(|w| w[0] <= w[1] + CHAIN_TOL * w[1].abs().max(1.0))
    }
}

pub fn means_chain(a: f64, b: f64) -> Result<MeansChain> {
    Ok(MeansChain {
        harmonic: mean_value(MeanKind::Harmonic, a, b)?,
        geometric: mean_value(MeanKind::Geometric, a, b)?,
        logarithmic: mean_value(MeanKind::Logarithmic, a, b)?,
        identric: mean_value(MeanKind::Identric, a, b)?,
        arithmetic: mean_value(MeanKind::Arithmetic, a, b)?,
    })
}

pub fn means_chain_check(a: f64, b: f64) -> Result<bool> {
    Ok(means_chain(a, b)?.is_ordered())
}

/// Inputs to a proposition check. Unused exponents are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PropositionParams {
    pub a: f64,
    pub b: f64,
    /// Power of `x^p` (props 1 and 4) or the Hölder exponent (prop 3).
    pub p: Option<f64>,
    /// Hölder conjugate (props 3, 4) or power-mean exponent (props 5, 6).
    pub q: Option<f64>,
    /// Hölder exponent for prop 4 when it should differ from the power.
    pub p_holder: Option<f64>,
}

impl PropositionParams {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            ..Self::default()
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_p_holder(mut self, p: f64) -> Self {
        self.p_holder = Some(p);
        self
    }
}

/// Perturbed trapezoid inequality for the same generating function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectedInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub prop_id: u8,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `rhs - lhs`
    pub slack: f64,
    /// Exponents actually used; `p`/`q` are `None` when the statement has none.
    pub params: PropositionParams,
    pub hypothesis_note: String,
    /// Present for props 1, 3 and 5.
    pub corrected: Option<CorrectedInequality>,
}

fn report(
    prop_id: u8,
    lhs: f64,
    rhs: f64,
    params: PropositionParams,
    hypothesis_note: String,
    corrected: Option<CorrectedInequality>,
) -> PropositionReport {
    PropositionReport {
        prop_id,
        lhs,
        rhs,
        holds: lhs <= rhs + PROPOSITION_TOL,
        slack: rhs - lhs,
        params,
        hypothesis_note,
        corrected,
    }
}

fn arith(u: f64, v: f64) -> f64 {
    u / 2.0 + v / 2.0
}

fn require_p_above_one(p: Option<f64>, prop_id: u8) -> Result<f64> {
    match p {
        Some(p) if p > 1.0 && p.is_finite() => Ok(p),
        Some(p) => Err(Error::InvalidExponent(format!(
            "proposition {prop_id} needs p > 1, got {p}"
        ))),
        None => Err(Error::InvalidArgument(format!("proposition {prop_id} needs p"))),
    }
}

fn power_mean_q(q: Option<f64>, prop_id: u8) -> Result<f64> {
    let q = q.unwrap_or(1.0);
    if q >= 1.0 && q.is_finite() {
        Ok(q)
    } else {
        Err(Error::InvalidExponent(format!(
            "proposition {prop_id} needs q >= 1, got {q}"
        )))
    }
}

/// Hölder pair from whichever of `p`, `q` is given; both must agree if both are.
fn holder_from(p: Option<f64>, q: Option<f64>, prop_id: u8) -> Result<HolderPair> {
    match (p, q) {
        (Some(p), Some(q)) => HolderPair::new(p, q),
        (Some(p), None) => HolderPair::from_p(p),
        (None, Some(q)) => HolderPair::from_q(q),
        (None, None) => Err(Error::InvalidArgument(format!(
            "proposition {prop_id} needs a Hölder exponent p or q"
        ))),
    }
}

fn slope_note(ft: &FunctionTriple, iv: &Interval, source: &str) -> Result<String> {
    let (da, db) = (ft.f1(iv.a())?, ft.f1(iv.b())?);
    Ok(format!(
        "derived from the {source} trapezoid bound, which requires f'(a) = f'(b); \
         {ft} has f'(a) = {da}, f'(b) = {db}"
    ))
}

/// Perturbed trapezoid check: `|avg - PT|` against the `x = b` bound of `family`.
fn corrected(ft: &FunctionTriple, iv: &Interval, avg: f64, family: ConvexityBound) -> Result<CorrectedInequality> {
    let rule = perturbed_trapezoid_rule(ft, iv)?;
    let cert = certify(ft, iv, iv.b(), family)?;
    let lhs = (avg - rule.value_avg).abs();
    let rhs = cert.bound_avg;
    Ok(CorrectedInequality {
        lhs,
        rhs,
        holds: bound_holds(lhs, rhs),
        slack: rhs - lhs,
    })
}

fn builtin(spec: &str) -> FunctionTriple {
    spec.parse().expect("built-in spec strings parse")
}

fn power(p: f64) -> Result<FunctionTriple> {
    crate::functions::register_builtin("power", &[p])
}

/// Checks proposition `prop_id` (1..=6) at the given parameters.
pub fn check_proposition(prop_id: u8, params: PropositionParams) -> Result<PropositionReport> {
    let PropositionParams { a, b, .. } = params;
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "propositions need 0 < a < b (got a = {a}, b = {b})"
        )));
    }
    let iv = Interval::new(a, b)?;
    let len2 = (b - a) * (b - a);
    let l = mean_value(MeanKind::Logarithmic, a, b)?;
    let ln_i = ln_identric(a, b);

    match prop_id {
        1 => {
            let p = require_p_above_one(params.p, 1)?;
            let lhs = (lp_pow(a, b, p) - arith(a.powf(p), b.powf(p))).abs();
            let rhs = p * (p - 1.0) * len2 / 24.0 * arith(a.powf(p - 2.0), b.powf(p - 2.0));
            let f = power(p)?;
            let note = slope_note(&f, &iv, "convex-|f''|")?;
            let fix = corrected(&f, &iv, lp_pow(a, b, p), ConvexityBound::Convex)?;
            let used = PropositionParams { p: Some(p), q: None, p_holder: None, ..params };
            Ok(report(1, lhs, rhs, used, note, Some(fix)))
        }
        2 => {
            let lhs = (1.0 / l - 1.0 / mean_value(MeanKind::Arithmetic, a, b)?).abs();
            let rhs = len2 / 12.0 * arith(a.powi(-3), b.powi(-3));
            let used = PropositionParams { p: None, q: None, p_holder: None, ..params };
            Ok(report(2, lhs, rhs, used, String::new(), None))
        }
        3 => {
            let pair = holder_from(params.p, params.q, 3)?;
            let (p, q) = (pair.p(), pair.q());
            let ln_g = (a.ln() + b.ln()) / 2.0;
            let lhs = (ln_i - ln_g).abs();
            let rhs = len2 / (8.0 * (2.0 * p + 1.0).powf(1.0 / p))
                * arith(a.powf(-2.0 * q), b.powf(-2.0 * q)).powf(1.0 / q);
            let f = builtin("neglog");
            let note = slope_note(&f, &iv, "Hölder")?;
            let fix = corrected(&f, &iv, -ln_i, ConvexityBound::Holder(pair))?;
            let used = PropositionParams { p: Some(p), q: Some(q), p_holder: None, ..params };
            Ok(report(3, lhs, rhs, used, note, Some(fix)))
        }
        4 => {
            let p = require_p_above_one(params.p, 4)?;
            let pair = match (params.p_holder, params.q) {
                (Some(ph), q) => holder_from(Some(ph), q, 4)?,
                (None, Some(q)) => HolderPair::from_q(q)?,
                (None, None) => HolderPair::from_p(p)?,
            };
            let (ph, q) = (pair.p(), pair.q());
            let am = mean_value(MeanKind::Arithmetic, a, b)?;
            let lhs = (lp_pow(a, b, p) - am.powf(p)).abs();
            let rhs = p * (p - 1.0) * len2 / (8.0 * (2.0 * ph + 1.0).powf(1.0 / ph))
                * arith(a.powf(q * (p - 2.0)), b.powf(q * (p - 2.0))).powf(1.0 / q);
            let used = PropositionParams { p: Some(p), q: Some(q), p_holder: Some(ph), ..params };
            Ok(report(4, lhs, rhs, used, String::new(), None))
        }
        5 => {
            let q = power_mean_q(params.q, 5)?;
            let h = mean_value(MeanKind::Harmonic, a, b)?;
            let lhs = (1.0 / l - 1.0 / h).abs();
            let rhs = len2 / 12.0 * arith(a.powf(-3.0 * q), b.powf(-3.0 * q)).powf(1.0 / q);
            let f = builtin("reciprocal");
            let note = slope_note(&f, &iv, "power-mean")?;
            let fix = corrected(&f, &iv, 1.0 / l, ConvexityBound::PowerMean { q })?;
            let used = PropositionParams { p: None, q: Some(q), p_holder: None, ..params };
            Ok(report(5, lhs, rhs, used, note, Some(fix)))
        }
        6 => {
            let q = power_mean_q(params.q, 6)?;
            let ln_a = mean_value(MeanKind::Arithmetic, a, b)?.ln();
            let lhs = (ln_i - ln_a).abs();
            let rhs = len2 / 24.0 * arith(a.powf(-2.0 * q), b.powf(-2.0 * q)).powf(1.0 / q);
            let used = PropositionParams { p: None, q: Some(q), p_holder: None, ..params };
            Ok(report(6, lhs, rhs, used, String::new(), None))
        }
        other => Err(Error::InvalidArgument(format!(
            "proposition id must be 1..=6, got {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{bound_convex, bound_holder, bound_power_mean};
    use crate::oracle::integrate;
    use std::f64::consts::LN_2;

    fn near(u: f64, v: f64, tol: f64) -> bool {
        (u - v).abs() <= tol
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_value(MeanKind::Arithmetic, 1.0, 2.0).unwrap(), 1.5);
        assert_eq!(mean_value(MeanKind::Geometric, 1.0, 4.0).unwrap(), 2.0);
        assert!(near(mean_value(MeanKind::Logarithmic, 1.0, 2.0).unwrap(), 1.0 / LN_2, 1e-15));
        let e = std::f64::consts::E;
        assert!(near(mean_value(MeanKind::Identric, 1.0, 2.0).unwrap(), 4.0 / e, 1e-15));
        assert!(near(
            mean_value(MeanKind::PLogarithmic { p: 2.0 }, 1.0, 2.0).unwrap(),
            (7.0f64 / 3.0).sqrt(),
            1e-15
        ));
    }

    #[test]
    fn means_against_oracle_averages() {
        // 1/L is the average of 1/x; ln I is the average of ln x.
        let inv_l = integrate(|x| 1.0 / x, 1.0, 2.0, 1e-13).unwrap().value;
        assert!(near(mean_value(MeanKind::Logarithmic, 1.0, 2.0).unwrap(), 1.0 / inv_l, 1e-12));
        let ln_i = integrate(f64::ln, 1.0, 2.0, 1e-13).unwrap().value;
        assert!(near(mean_value(MeanKind::Identric, 1.0, 2.0).unwrap().ln(), ln_i, 1e-12));
        assert!(near(ln_i, 2.0 * LN_2 - 1.0, 1e-12));
    }

    #[test]
    fn degenerate_pairs_collapse() {
        for mk in [
            MeanKind::Arithmetic,
            MeanKind::Geometric,
            MeanKind::Harmonic,
            MeanKind::Logarithmic,
            MeanKind::Identric,
            MeanKind::PLogarithmic { p: 3.0 },
        ] {
            assert!(near(mean_value(mk, 3.0, 3.0).unwrap(), 3.0, 1e-15), "{mk:?}");
        }
        assert!(means_chain_check(3.0, 3.0).unwrap());
    }

    #[test]
    fn mean_domain_errors() {
        assert!(mean_value(MeanKind::Geometric, 0.0, 1.0).is_err());
        assert!(mean_value(MeanKind::Arithmetic, 0.0, 1.0).is_ok());
        assert!(mean_value(MeanKind::Arithmetic, -1.0, 1.0).is_err());
        assert!(mean_value(MeanKind::Logarithmic, 2.0, 1.0).is_err());
        assert!(mean_value(MeanKind::PLogarithmic { p: -1.0 }, 1.0, 2.0).is_err());
        assert!(mean_value(MeanKind::PLogarithmic { p: 0.0 }, 1.0, 2.0).is_err());
    }

    #[test]
    fn chain_examples() {
        let c = means_chain(1.0, 2.0).unwrap();
        let expected = [4.0 / 3.0, 2f64.sqrt(), 1.0 / LN_2, 4.0 / std::f64::consts::E, 1.5];
        for (got, want) in c.as_array().iter().zip(expected) {
            assert!(near(*got, want, 1e-15));
        }
        assert!(c.is_ordered());
        assert!(means_chain_check(0.5, 8.0).unwrap());
    }

    #[test]
    fn close_pairs_are_stable() {
        let c = means_chain(1.0, 1.0 + 1e-9).unwrap();
        for v in c.as_array() {
            assert!(near(v, 1.0 + 5e-10, 1e-15), "{c:?}");
        }
        assert!(c.is_ordered());
    }

    #[test]
    fn lp_limits() {
        let (a, b) = (1.0, 2.0);
        let l = mean_value(MeanKind::Logarithmic, a, b).unwrap();
        let i = mean_value(MeanKind::Identric, a, b).unwrap();
        let lp = |p: f64| mean_value(MeanKind::PLogarithmic { p }, a, b).unwrap();
        // One-sided offsets of 1e-6 are first order in the offset (slope ~0.03
        // here); the symmetric average cancels that term.
        for d in [-1e-6, 1e-6] {
            assert!((lp(-1.0 + d) - l).abs() < 1e-7);
            assert!((lp(d) - i).abs() < 1e-7);
        }
        assert!(((lp(-1.0 - 1e-6) + lp(-1.0 + 1e-6)) / 2.0 - l).abs() < 1e-9);
        assert!(((lp(-1e-6) + lp(1e-6)) / 2.0 - i).abs() < 1e-9);
        assert!((lp(-1.0 + 1e-9) - l).abs() < 1e-9);
        assert!((lp(1e-9) - i).abs() < 1e-9);
    }

    #[test]
    fn lp_is_monotone_in_p() {
        let grid = [-3.0, -2.0, -0.5, 0.5, 1.0, 2.0, 3.0, 5.0];
        for (a, b) in [(1.0, 2.0), (0.5, 8.0), (3.0, 3.1), (0.01, 100.0)] {
            let v: Vec<f64> = grid
                .iter()
                .map(|&p| mean_value(MeanKind::PLogarithmic { p }, a, b).unwrap())
                .collect();
            assert!(v.windows(2).all(|w| w[0] <= w[1]), "{a} {b} {v:?}");
        }
        // L_1 = A
        assert!(near(mean_value(MeanKind::PLogarithmic { p: 1.0 }, 1.0, 2.0).unwrap(), 1.5, 1e-15));
    }

    #[test]
    fn chain_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let a: f64 = rng.gen_range(1e-3..100.0);
            let b: f64 = rng.gen_range(a..=100.0);
            assert!(means_chain_check(a, b).unwrap(), "{a} {b}");
        }
    }

    #[test]
    fn props_2_4_6_hold_on_sweep() {
        for a in [0.5, 1.0, 2.0] {
            for d in [0.1, 0.5, 1.0, 2.0] {
                let base = PropositionParams::new(a, a + d);
                for q in [1.0, 2.0] {
                    assert!(check_proposition(2, base).unwrap().holds);
                    assert!(check_proposition(6, base.with_q(q)).unwrap().holds);
                }
                assert!(check_proposition(4, base.with_p(2.0).with_q(2.0)).unwrap().holds);
            }
        }
    }

    #[test]
    fn corrected_companions_hold_on_sweep() {
        for a in [0.5, 1.0, 2.0] {
            for d in [0.1, 0.5, 1.0, 2.0] {
                let base = PropositionParams::new(a, a + d);
                for r in [
                    check_proposition(1, base.with_p(2.0)).unwrap(),
                    check_proposition(1, base.with_p(3.5)).unwrap(),
                    check_proposition(3, base.with_p(2.0)).unwrap(),
                    check_proposition(5, base.with_q(1.0)).unwrap(),
                    check_proposition(5, base.with_q(2.0)).unwrap(),
                ] {
                    assert!(r.corrected.unwrap().holds, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn prop2_example() {
        let r = check_proposition(2, PropositionParams::new(1.0, 2.0)).unwrap();
        assert!(near(r.lhs, (LN_2 - 2.0 / 3.0).abs(), 1e-15));
        assert!(near(r.lhs, 0.026_481, 1e-6));
        assert!(near(r.rhs, 0.046_875, 1e-16));
        assert!(r.holds);
        assert!(r.corrected.is_none());
    }

    #[test]
    fn prop1_counterexample() {
        let r = check_proposition(1, PropositionParams::new(1.0, 2.0).with_p(2.0)).unwrap();
        assert!(near(r.lhs, 1.0 / 6.0, 1e-15));
        assert!(near(r.rhs, 1.0 / 12.0, 1e-16));
        assert!(!r.holds);
        assert!(r.hypothesis_note.contains("f'(a) = f'(b)"));
        let fix = r.corrected.unwrap();
        assert!(fix.holds);
        // x^2 has constant f'', so the perturbed form is sharp.
        assert!(near(fix.lhs, fix.rhs, 1e-15));
    }

    #[test]
    fn prop5_counterexample() {
        let r = check_proposition(5, PropositionParams::new(1.0, 2.0).with_q(1.0)).unwrap();
        assert!(near(r.lhs, (LN_2 - 0.75).abs(), 1e-15));
        assert!(near(r.lhs, 0.056_853, 1e-6));
        assert!(near(r.rhs, 0.046_875, 1e-16));
        assert!(!r.holds);
        assert!(r.corrected.unwrap().holds);
    }

    #[test]
    fn prop6_example() {
        let r = check_proposition(6, PropositionParams::new(1.0, 2.0).with_q(1.0)).unwrap();
        assert!(near(r.lhs, (2.0 * LN_2 - 1.0 - 1.5f64.ln()).abs(), 1e-15));
        assert!(near(r.lhs, 0.019_171, 1e-6));
        assert!(near(r.rhs, 0.625 / 24.0, 1e-16));
        assert!(r.holds);
    }

    #[test]
    fn prop3_and_4_take_holder_pairs() {
        let r = check_proposition(3, PropositionParams::new(1.0, 2.0).with_q(2.0)).unwrap();
        assert_eq!(r.params.p, Some(2.0));
        assert!(r.corrected.is_some());
        assert!(check_proposition(3, PropositionParams::new(1.0, 2.0)).is_err());
        assert!(check_proposition(3, PropositionParams::new(1.0, 2.0).with_p(2.0).with_q(3.0)).is_err());

        let r = check_proposition(4, PropositionParams::new(1.0, 2.0).with_p(2.0)).unwrap();
        assert_eq!((r.params.p_holder, r.params.q), (Some(2.0), Some(2.0)));
        // L_2^2 - A^2 = (b - a)^2 / 12 exactly.
        assert!(near(r.lhs, 1.0 / 12.0, 1e-15));
        assert!(r.holds);
        let r = check_proposition(4, PropositionParams::new(1.0, 2.0).with_p(3.0).with_p_holder(1.5)).unwrap();
        assert!((r.params.q.unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn parameter_errors() {
        assert!(check_proposition(1, PropositionParams::new(0.0, 2.0).with_p(2.0)).is_err());
        assert!(check_proposition(1, PropositionParams::new(2.0, 1.0).with_p(2.0)).is_err());
        assert!(check_proposition(1, PropositionParams::new(1.0, 2.0).with_p(1.0)).is_err());
        assert!(check_proposition(1, PropositionParams::new(1.0, 2.0)).is_err());
        assert!(check_proposition(6, PropositionParams::new(1.0, 2.0).with_q(0.5)).is_err());
        assert!(check_proposition(7, PropositionParams::new(1.0, 2.0)).is_err());
    }

    #[test]
    fn rhs_matches_certificate_bounds() {
        let rel = |u: f64, v: f64| (u - v).abs() / v.abs();
        for (a, b) in [(0.5, 0.6), (1.0, 2.0), (2.0, 4.0), (0.5, 2.5)] {
            let iv = Interval::new(a, b).unwrap();
            let m = iv.midpoint();

            let r2 = check_proposition(2, PropositionParams::new(a, b)).unwrap();
            let c = bound_convex(&builtin("reciprocal"), &iv, m).unwrap();
            assert!(rel(r2.rhs, c.bound_avg) < 1e-13);

            let r4 = check_proposition(4, PropositionParams::new(a, b).with_p(2.0).with_q(2.0)).unwrap();
            let c = bound_holder(&power(2.0).unwrap(), &iv, m, HolderPair::new(2.0, 2.0).unwrap()).unwrap();
            assert!(rel(r4.rhs, c.bound_avg) < 1e-13);
            let r4 = check_proposition(4, PropositionParams::new(a, b).with_p(3.5).with_p_holder(3.0)).unwrap();
            let c = bound_holder(&power(3.5).unwrap(), &iv, m, HolderPair::from_p(3.0).unwrap()).unwrap();
            assert!(rel(r4.rhs, c.bound_avg) < 1e-13);

            for q in [1.0, 2.0] {
                let r6 = check_proposition(6, PropositionParams::new(a, b).with_q(q)).unwrap();
                let c = bound_power_mean(&builtin("neglog"), &iv, m, q).unwrap();
                assert!(rel(r6.rhs, c.bound_avg) < 1e-13);
            }
        }
    }
}
