//! A-priori error certificates.
//!
//! Three families bound the deviation of the generalized two-point rule from
//! the average of `f` using only `|f''(a)|` and `|f''(b)|`:
//!
//! * [`bound_convex`], valid when `|f''|` is convex,
//! * [`bound_holder`], valid when `|f''|^q` is convex for a Hölder pair `(p, q)`,
//! * [`bound_power_mean`], valid when `|f''|^q` is convex for some `q >= 1`.
//!
//! Two classical baselines are provided for comparison: the Ostrowski bound on
//! `|f(x) - avg|` and the three-case perturbed trapezoid bound driven by a norm
//! of `f''`.
//!
//! The convexity hypotheses are checked on a grid and recorded in
//! [`Certificate::hypothesis_flags`]; they are never enforced, since a grid
//! check is not a proof.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{check_abs_f2_pow_convexity, FunctionTriple, Interval, DEFAULT_CONVEXITY_GRID};
use crate::kernel::KernelSpec;
use crate::oracle::{estimate_norm, integrate, sampled_sup, NormEstimate, NormKind, DEFAULT_TOL};
use crate::rules::{generalized_rule, perturbed_trapezoid_rule, point_value_rule, trapezoid_rule, RuleValue};

/// Absolute slack allowed when checking that a bound holds.
pub const HOLDS_ABS_TOL: f64 = 1e-12;
/// Relative slack allowed when checking that a bound holds.
pub const HOLDS_REL_TOL: f64 = 1e-9;
/// Threshold for the `f1_endpoints_equal` hypothesis flag.
pub const ENDPOINT_SLOPE_TOL: f64 = 1e-12;

const HOLDER_TOL: f64 = 1e-12;
const OSTROWSKI_SAMPLES: usize = 257;

/// Conjugate exponents `p, q > 1` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderPair {
    p: f64,
    q: f64,
}

impl HolderPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidExponent(format!(
                "Hölder pair needs p, q > 1 (got p = {p}, q = {q})"
            )));
        }
        if (1.0 / p + 1.0 / q - 1.0).abs() > HOLDER_TOL {
            return Err(Error::InvalidExponent(format!(
                "p = {p} and q = {q} are not conjugate"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        Self::new(p, conjugate(p))
    }

    pub fn from_q(q: f64) -> Result<Self> {
        Self::new(conjugate(q), q)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// The three cases of the perturbed trapezoid baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CdCase {
    Inf,
    Lp { p: f64, q: f64 },
    L1,
}

impl CdCase {
    pub fn lp(pair: HolderPair) -> Self {
        CdCase::Lp {
            p: pair.p(),
            q: pair.q(),
        }
    }

    fn norm_kind(&self) -> NormKind {
        match *self {
            CdCase::Inf => NormKind::SupF2,
            CdCase::Lp { p, .. } => NormKind::LpF2 { p },
            CdCase::L1 => NormKind::L1F2,
        }
    }
}

/// Which inequality produced a certificate, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BoundFamily {
    Convex,
    Holder { p: f64, q: f64 },
    PowerMean { q: f64 },
    Ostrowski { f1_sup: f64 },
    CeroneDragomir { case: CdCase },
}

impl BoundFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BoundFamily::Convex => "convex",
            BoundFamily::Holder { .. } => "holder",
            BoundFamily::PowerMean { .. } => "power_mean",
            BoundFamily::Ostrowski { .. } => "ostrowski",
            BoundFamily::CeroneDragomir { case } => match case {
                CdCase::Inf => "cerone_dragomir_inf",
                CdCase::Lp { .. } => "cerone_dragomir_lp",
                CdCase::L1 => "cerone_dragomir_l1",
            },
        }
    }
}

/// Selects one of the three new certificate families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvexityBound {
    Convex,
    Holder(HolderPair),
    PowerMean { q: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisFlag {
    pub name: String,
    pub satisfied: bool,
}

impl HypothesisFlag {
    fn new(name: &str, satisfied: bool) -> Self {
        Self {
            name: name.to_string(),
            satisfied,
        }
    }
}

/// A rule value paired with an a-priori bound on its error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub interval: Interval,
    pub x: f64,
    pub rule: RuleValue,
    pub bound_avg: f64,
    pub bound_total: f64,
    pub family: BoundFamily,
    pub hypothesis_flags: Vec<HypothesisFlag>,
    /// Norm consumed by the baseline bounds, if any.
    pub norm: Option<NormEstimate>,
}

/// Outcome of checking a certificate against the reference integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub actual_error_avg: f64,
    pub actual_error_total: f64,
    pub holds: bool,
}

impl Certificate {
    fn new(
        iv: Interval,
        x: f64,
        rule: RuleValue,
        bound_avg: f64,
        family: BoundFamily,
        hypothesis_flags: Vec<HypothesisFlag>,
        norm: Option<NormEstimate>,
    ) -> Self {
        debug_assert!(bound_avg >= 0.0);
        Self {
            interval: iv,
            x,
            rule,
            bound_avg,
            bound_total: bound_avg * iv.length(),
            family,
            hypothesis_flags,
            norm,
        }
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.hypothesis_flags
            .iter()
            .find(|h| h.name == name)
            .map(|h| h.satisfied)
    }

    /// Whether `actual_avg` is within the bound, allowing for oracle noise.
    pub fn admits(&self, actual_avg: f64) -> bool {
        bound_holds(actual_avg, self.bound_avg)
    }

    /// Computes the true deviation with the oracle and checks the bound.
    pub fn verify(&self, ft: &FunctionTriple) -> Result<Verification> {
        self.verify_with_tol(ft, DEFAULT_TOL)
    }

    pub fn verify_with_tol(&self, ft: &FunctionTriple, tol: f64) -> Result<Verification> {
        let iv = self.interval;
        let integral = integrate(|u| ft.f(u).unwrap_or(f64::NAN), iv.a(), iv.b(), tol)?.value;
        let actual_error_avg = (integral / iv.length() - self.rule.value_avg).abs();
        Ok(Verification {
            actual_error_avg,
            actual_error_total: actual_error_avg * iv.length(),
            holds: self.admits(actual_error_avg),
        })
    }
}

/// `actual <= bound + 1e-12 + 1e-9 · bound`.
pub fn bound_holds(actual: f64, bound: f64) -> bool {
    actual <= bound + HOLDS_ABS_TOL + HOLDS_REL_TOL * bound.abs()
}

/// `((|u|^q + |v|^q) / 2)^(1/q)`, scaled to avoid overflow.
pub(crate) fn power_mean2(u: f64, v: f64, q: f64) -> f64 {
    let (u, v) = (u.abs(), v.abs());
    if q == 1.0 {
        return (u + v) / 2.0;
    }
    let m = u.max(v);
    if m == 0.0 {
        return 0.0;
    }
    m * (((u / m).powf(q) + (v / m).powf(q)) / 2.0).powf(1.0 / q)
}

fn endpoint_curvatures(ft: &FunctionTriple, iv: &Interval) -> Result<(f64, f64)> {
    Ok((ft.f2(iv.a())?.abs(), ft.f2(iv.b())?.abs()))
}

fn convexity_flags(ft: &FunctionTriple, iv: &Interval, x: f64, q: f64) -> Result<Vec<HypothesisFlag>> {
    let name = if q == 1.0 {
        "abs_f2_convex"
    } else {
        "abs_f2_pow_q_convex"
    };
    let mut flags = vec![HypothesisFlag::new(
        name,
        check_abs_f2_pow_convexity(ft, iv, DEFAULT_CONVEXITY_GRID, q)?,
    )];
    if x == iv.b() {
        flags.push(endpoint_slope_flag(ft, iv)?);
    }
    Ok(flags)
}

/// `f'(a) = f'(b)`, required before the perturbation term may be dropped.
fn endpoint_slope_flag(ft: &FunctionTriple, iv: &Interval) -> Result<HypothesisFlag> {
    let gap = (ft.f1(iv.a())? - ft.f1(iv.b())?).abs();
    Ok(HypothesisFlag::new("f1_endpoints_equal", gap <= ENDPOINT_SLOPE_TOL))
}

fn convex_bound_avg(ks: &KernelSpec, fa: f64, fb: f64) -> f64 {
    ks.cubic_spread() / ks.interval().length() * (fa + fb) / 6.0
}

fn holder_bound_avg(ks: &KernelSpec, pair: HolderPair, fa: f64, fb: f64) -> f64 {
    let p = pair.p();
    let len = ks.interval().length();
    let e = 2.0 * p + 1.0;
    let right = (ks.interval().b() - ks.x()) / len;
    let centre = ((ks.x() - ks.interval().midpoint()) / len).max(0.0);
    let spread = right.powf(e) + centre.powf(e);
    let constant = 2f64.powf(1.0 / p - 1.0) / e.powf(1.0 / p);
    constant * len * len * spread.powf(1.0 / p) * power_mean2(fa, fb, pair.q())
}

fn power_mean_bound_avg(ks: &KernelSpec, q: f64, fa: f64, fb: f64) -> f64 {
    ks.cubic_spread() / (3.0 * ks.interval().length()) * power_mean2(fa, fb, q)
}

/// Certificate for `|f''|` convex:
/// `(1/(b-a)) [(b-x)³ + (x-(a+b)/2)³] (|f''(a)| + |f''(b)|) / 6`.
pub fn bound_convex(ft: &FunctionTriple, iv: &Interval, x: f64) -> Result<Certificate> {
    let ks = KernelSpec::new(*iv, x)?;
    let rule = generalized_rule(ft, iv, x)?;
    let (fa, fb) = endpoint_curvatures(ft, iv)?;
    Ok(Certificate::new(
        *iv,
        x,
        rule,
        convex_bound_avg(&ks, fa, fb),
        BoundFamily::Convex,
        convexity_flags(ft, iv, x, 1.0)?,
        None,
    ))
}

/// Certificate for `|f''|^q` convex with Hölder conjugates `(p, q)`.
pub fn bound_holder(ft: &FunctionTriple, iv: &Interval, x: f64, pair: HolderPair) -> Result<Certificate> {
    let ks = KernelSpec::new(*iv, x)?;
    let rule = generalized_rule(ft, iv, x)?;
    let (fa, fb) = endpoint_curvatures(ft, iv)?;
    Ok(Certificate::new(
        *iv,
        x,
        rule,
        holder_bound_avg(&ks, pair, fa, fb),
        BoundFamily::Holder {
            p: pair.p(),
            q: pair.q(),
        },
        convexity_flags(ft, iv, x, pair.q())?,
        None,
    ))
}

/// Certificate for `|f''|^q` convex, `q >= 1`, via the power-mean inequality.
pub fn bound_power_mean(ft: &FunctionTriple, iv: &Interval, x: f64, q: f64) -> Result<Certificate> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("power-mean bound needs q >= 1, got {q}")));
    }
    let ks = KernelSpec::new(*iv, x)?;
    let rule = generalized_rule(ft, iv, x)?;
    let (fa, fb) = endpoint_curvatures(ft, iv)?;
    Ok(Certificate::new(
        *iv,
        x,
        rule,
        power_mean_bound_avg(&ks, q, fa, fb),
        BoundFamily::PowerMean { q },
        convexity_flags(ft, iv, x, q)?,
        None,
    ))
}

/// Dispatches to one of the three new families.
pub fn certify(ft: &FunctionTriple, iv: &Interval, x: f64, family: ConvexityBound) -> Result<Certificate> {
    match family {
        ConvexityBound::Convex => bound_convex(ft, iv, x),
        ConvexityBound::Holder(pair) => bound_holder(ft, iv, x, pair),
        ConvexityBound::PowerMean { q } => bound_power_mean(ft, iv, x, q),
    }
}

/// Plain trapezoid rule carrying the `x = b` bound of `family`.
///
/// The bound is only valid when `f'(a) = f'(b)`; that condition is reported
/// in the `f1_endpoints_equal` flag and is not enforced.
pub fn bound_trapezoid(ft: &FunctionTriple, iv: &Interval, family: ConvexityBound) -> Result<Certificate> {
    let mut cert = certify(ft, iv, iv.b(), family)?;
    cert.rule = trapezoid_rule(ft, iv)?;
    Ok(cert)
}

/// Ostrowski bound on `|f(x) - avg|` for any `x ∈ [a, b]`, given
/// `f1_sup >= sup |f'|`.
pub fn bound_ostrowski(ft: &FunctionTriple, iv: &Interval, x: f64, f1_sup: f64) -> Result<Certificate> {
    let rule = point_value_rule(ft, iv, x)?;
    if !(f1_sup >= 0.0 && f1_sup.is_finite()) {
        return Err(Error::InvalidCertificateInput(format!(
            "sup |f'| must be finite and non-negative, got {f1_sup}"
        )));
    }
    let observed = sampled_sup(|u| ft.f1(u), iv, OSTROWSKI_SAMPLES)?.max(ft.f1(x)?.abs());
    if f1_sup < observed * (1.0 - 1e-12) {
        return Err(Error::InvalidCertificateInput(format!(
            "supplied sup |f'| = {f1_sup} is below the sampled value {observed}"
        )));
    }
    Ok(ostrowski_certificate(iv, x, rule, f1_sup, None))
}

/// [`bound_ostrowski`] with `sup |f'|` estimated by the oracle.
pub fn bound_ostrowski_estimated(ft: &FunctionTriple, iv: &Interval, x: f64) -> Result<Certificate> {
    let rule = point_value_rule(ft, iv, x)?;
    let norm = estimate_norm(ft, iv, NormKind::SupF1)?;
    Ok(ostrowski_certificate(iv, x, rule, norm.value, Some(norm)))
}

fn ostrowski_certificate(
    iv: &Interval,
    x: f64,
    rule: RuleValue,
    f1_sup: f64,
    norm: Option<NormEstimate>,
) -> Certificate {
    let len = iv.length();
    let offset = (x - iv.midpoint()) / len;
    let bound_avg = (0.25 + offset * offset) * len * f1_sup;
    let norm = norm.or(Some(NormEstimate {
        kind: NormKind::SupF1,
        value: f1_sup,
        samples: None,
    }));
    Certificate::new(*iv, x, rule, bound_avg, BoundFamily::Ostrowski { f1_sup }, Vec::new(), norm)
}

/// Three-case perturbed trapezoid baseline, given the matching norm of `f''`.
pub fn bound_cerone_dragomir(ft: &FunctionTriple, iv: &Interval, case: CdCase, norm: f64) -> Result<Certificate> {
    let supplied = NormEstimate {
        kind: case.norm_kind(),
        value: norm,
        samples: None,
    };
    cerone_dragomir(ft, iv, case, supplied)
}

/// [`bound_cerone_dragomir`] with the norm estimated by the oracle.
pub fn bound_cerone_dragomir_estimated(ft: &FunctionTriple, iv: &Interval, case: CdCase) -> Result<Certificate> {
    if let CdCase::Lp { p, q } = case {
        HolderPair::new(p, q)?;
    }
    let norm = estimate_norm(ft, iv, case.norm_kind())?;
    cerone_dragomir(ft, iv, case, norm)
}

fn cerone_dragomir(ft: &FunctionTriple, iv: &Interval, case: CdCase, norm: NormEstimate) -> Result<Certificate> {
    let value = norm.value;
    if !(value >= 0.0 && value.is_finite()) {
        return Err(Error::InvalidCertificateInput(format!(
            "norm of f'' must be finite and non-negative, got {value}"
        )));
    }
    if value == 0.0 {
        let probe = sampled_sup(|u| ft.f2(u), iv, OSTROWSKI_SAMPLES)?;
        if probe > 0.0 {
            return Err(Error::InvalidCertificateInput(format!(
                "zero norm supplied but |f''| reaches {probe} on {iv}"
            )));
        }
    }
    let len = iv.length();
    let total = match case {
        CdCase::Inf => len.powi(3) / 24.0 * value,
        CdCase::Lp { p, q } => {
            HolderPair::new(p, q)?;
            len.powf(2.0 + 1.0 / q) / (8.0 * (2.0 * q + 1.0).powf(1.0 / q)) * value
        }
        CdCase::L1 => len * len / 8.0 * value,
    };
    let rule = perturbed_trapezoid_rule(ft, iv)?;
    Ok(Certificate::new(
        *iv,
        iv.b(),
        rule,
        total / len,
        BoundFamily::CeroneDragomir { case },
        Vec::new(),
        Some(norm),
    ))
}
