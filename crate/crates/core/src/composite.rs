//! Composite two-point quadrature over a partition, with a certified remainder.
//!
//! On each subinterval `[x_i, x_{i+1}]` the generalized rule is applied at an
//! intermediate point `ξ_i`, and the convex-`|f''|` bound of that subinterval is
//! added to the remainder estimate. `ξ_i` must lie in the right half
//! `[(x_i + x_{i+1})/2, x_{i+1}]`, which is where the per-interval bound is valid.
//!
//! Per-interval work runs on the rayon pool; the reduction is a compensated sum
//! in index order, so results are bit-identical regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::bound_convex;
use crate::error::{Error, Result};
use crate::functions::{FunctionTriple, Interval};
use crate::summation::compensated_sum;

/// How intermediate points are chosen on a generated partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum XiPolicy {
    /// `ξ_i = (x_i + x_{i+1}) / 2`
    Midpoint,
    /// `ξ_i = x_{i+1}`
    Right,
    /// Uniform in the right half-subinterval, from a seeded generator.
    Random { seed: u64 },
}

/// Division nodes `x_0 < ... < x_n` and intermediate points `ξ_0 .. ξ_{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    nodes: Vec<f64>,
    xi: Vec<f64>,
}

impl Partition {
    pub fn new(nodes: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        validate_nodes(&nodes)?;
        if xi.len() != nodes.len() - 1 {
            return Err(Error::InvalidPartition(format!(
                "{} nodes need {} intermediate points, got {}",
                nodes.len(),
                nodes.len() - 1,
                xi.len()
            )));
        }
        for (i, (w, &p)) in nodes.windows(2).zip(&xi).enumerate() {
            let mid = (w[0] + w[1]) / 2.0;
            if !(p >= mid && p <= w[1]) {
                return Err(Error::InvalidPartition(format!(
                    "ξ_{i} = {p} is outside the right half-subinterval [{mid}, {}]",
                    w[1]
                )));
            }
        }
        Ok(Self { nodes, xi })
    }

    /// Nodes with intermediate points chosen by `policy`.
    pub fn with_policy(nodes: Vec<f64>, policy: XiPolicy) -> Result<Self> {
        validate_nodes(&nodes)?;
        let xi = match policy {
            XiPolicy::Midpoint => nodes.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect(),
            XiPolicy::Right => nodes[1..].to_vec(),
            XiPolicy::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                nodes
                    .windows(2)
                    .map(|w| {
                        let mid = (w[0] + w[1]) / 2.0;
                        let u: f64 = rng.gen();
                        (mid + u * (w[1] - mid)).clamp(mid, w[1])
                    })
                    .collect()
            }
        };
        Self::new(nodes, xi)
    }

    /// `n` equal subintervals of `iv`.
    pub fn uniform(iv: &Interval, n: usize, policy: XiPolicy) -> Result<Self> {
        Self::with_policy(uniform_nodes(iv, n)?, policy)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// `h_i = x_{i+1} - x_i`.
    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.windows(2).map(|w| w[1] - w[0])
    }
}

/// `n + 1` equally spaced nodes over `iv`, endpoints exact.
pub fn uniform_nodes(iv: &Interval, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidPartition("need at least one subinterval".into()));
    }
    let h = iv.length() / n as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| iv.a() + i as f64 * h).collect();
    nodes.push(iv.b());
    Ok(nodes)
}

fn validate_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::InvalidPartition("need at least two nodes".into()));
    }
    if nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidPartition("nodes must be finite".into()));
    }
    if let Some(i) = nodes.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPartition(format!(
            "nodes must be strictly increasing (x_{i} = {} >= x_{} = {})",
            nodes[i],
            i + 1,
            nodes[i + 1]
        )));
    }
    Ok(())
}

/// Contribution of one subinterval, in total (not average) form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalContribution {
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeResult {
    pub approx: f64,
    pub remainder_bound: f64,
    pub per_interval: Vec<IntervalContribution>,
}

impl CompositeResult {
    fn from_parts(per_interval: Vec<IntervalContribution>) -> Self {
        Self {
            approx: compensated_sum(per_interval.iter().map(|c| c.value)),
            remainder_bound: compensated_sum(per_interval.iter().map(|c| c.bound)),
            per_interval,
        }
    }
}

fn check_nodes_in_domain(ft: &FunctionTriple, nodes: &[f64]) -> Result<()> {
    ft.check_point(nodes[0])?;
    ft.check_point(nodes[nodes.len() - 1])
}

fn reduce<F>(nodes: &[f64], per_interval: F) -> Result<CompositeResult>
where
    F: Fn(usize, f64, f64) -> Result<IntervalContribution> + Sync,
{
    let parts = (0..nodes.len() - 1)
        .into_par_iter()
        .map(|i| per_interval(i, nodes[i], nodes[i + 1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(CompositeResult::from_parts(parts))
}

/// Composite generalized rule `A(f, f', d, ξ)` with remainder bound
/// `Σ [(x_{i+1} - ξ_i)³ + (ξ_i - (x_i + x_{i+1})/2)³] (|f''(x_i)| + |f''(x_{i+1})|) / 6`.
pub fn composite_generalized(ft: &FunctionTriple, part: &Partition) -> Result<CompositeResult> {
    check_nodes_in_domain(ft, &part.nodes)?;
    reduce(&part.nodes, |i, lo, hi| {
        let iv = Interval::new(lo, hi)?;
        let cert = bound_convex(ft, &iv, part.xi[i])?;
        Ok(IntervalContribution {
            value: cert.rule.value_total,
            bound: cert.bound_total,
        })
    })
}

fn curvature_bound(ft: &FunctionTriple, lo: f64, hi: f64) -> Result<f64> {
    let h = hi - lo;
    Ok(h * h * h / 48.0 * (ft.f2(lo)?.abs() + ft.f2(hi)?.abs()))
}

/// Composite perturbed trapezoid rule, the `ξ_i = x_{i+1}` case:
/// `Σ h_i/2 [f(x_i) + f(x_{i+1})] - Σ h_i²/8 [f'(x_{i+1}) - f'(x_i)]`.
pub fn composite_perturbed_trapezoid(ft: &FunctionTriple, nodes: &[f64]) -> Result<CompositeResult> {
    validate_nodes(nodes)?;
    check_nodes_in_domain(ft, nodes)?;
    reduce(nodes, |_, lo, hi| {
        let h = hi - lo;
        let value = h / 2.0 * (ft.f(lo)? + ft.f(hi)?) - h * h / 8.0 * (ft.f1(hi)? - ft.f1(lo)?);
        Ok(IntervalContribution {
            value,
            bound: curvature_bound(ft, lo, hi)?,
        })
    })
}

/// Composite midpoint rule, the `ξ_i = (x_i + x_{i+1})/2` case.
pub fn composite_midpoint(ft: &FunctionTriple, nodes: &[f64]) -> Result<CompositeResult> {
    validate_nodes(nodes)?;
    check_nodes_in_domain(ft, nodes)?;
    reduce(nodes, |_, lo, hi| {
        let h = hi - lo;
        Ok(IntervalContribution {
            value: h * ft.f((lo + hi) / 2.0)?,
            bound: curvature_bound(ft, lo, hi)?,
        })
    })
}

/// Composite rule variants for convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositeRule {
    Generalized(XiPolicy),
    Midpoint,
    PerturbedTrapezoid,
}

impl CompositeRule {
    pub fn apply(&self, ft: &FunctionTriple, nodes: Vec<f64>) -> Result<CompositeResult> {
        match *self {
            CompositeRule::Generalized(policy) => {
                composite_generalized(ft, &Partition::with_policy(nodes, policy)?)
            }
            CompositeRule::Midpoint => composite_midpoint(ft, &nodes),
            CompositeRule::PerturbedTrapezoid => composite_perturbed_trapezoid(ft, &nodes),
        }
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub approx: f64,
    pub actual_error: f64,
    pub remainder_bound: f64,
    /// `actual_error / remainder_bound`; at most 1 when the bound holds.
    pub ratio: f64,
}

impl ConvergenceRow {
    pub fn bound_holds(&self) -> bool {
        crate::bounds::bound_holds(self.actual_error, self.remainder_bound)
    }
}

/// Runs `rule` on uniform meshes of `iv` for each `n`, measuring the error
/// against `exact`.
pub fn convergence_table(
    ft: &FunctionTriple,
    iv: &Interval,
    rule: CompositeRule,
    ns: &[usize],
    exact: f64,
) -> Result<Vec<ConvergenceRow>> {
    ns.iter()
        .map(|&n| {
            let res = rule.apply(ft, uniform_nodes(iv, n)?)?;
            let actual_error = (exact - res.approx).abs();
            let ratio = if res.remainder_bound > 0.0 {
                actual_error / res.remainder_bound
            } else if actual_error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            Ok(ConvergenceRow {
                n,
                h: iv.length() / n as f64,
                approx: res.approx,
                actual_error,
                remainder_bound: res.remainder_bound,
                ratio,
            })
        })
        .collect()
}

/// Least-squares slope of `log e` against `log h`: the empirical order.
pub fn estimate_order(hs: &[f64], errors: &[f64]) -> Result<f64> {
    if hs.len() != errors.len() || hs.len() < 2 {
        return Err(Error::InvalidArgument(
            "order fit needs at least two (h, error) pairs of equal length".into(),
        ));
    }
    if hs.iter().chain(errors).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(
            "order fit needs positive finite step sizes and errors".into(),
        ));
    }
    let n = hs.len() as f64;
    let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
