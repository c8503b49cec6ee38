//! Reference integration and derivative-norm estimation.
//!
//! Everything that reports an "actual error" measures it against
//! [`integrate`], a globally adaptive Gauss–Kronrod (7/15) scheme that
//! bisects the subinterval with the largest error estimate until the summed
//! estimate drops below the requested tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{FunctionTriple, Interval};
use crate::summation::compensated_sum;

/// Tolerance used for all reference integrals unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Smallest tolerance [`integrate`] accepts.
pub const MIN_TOL: f64 = 1e-14;
/// Hard cap on the number of subintervals.
pub const MAX_SUBINTERVALS: usize = 4096;
/// Uniform sample count used by the sup-norm estimators.
pub const DEFAULT_SUP_SAMPLES: usize = 4097;

// Gauss–Kronrod 7/15 nodes on [-1, 1]; odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of a reference integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Number of bisections performed; zero when the first 15-point pass
    /// already met the tolerance.
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on the error estimate; ties broken by position for determinism.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<G>(g: &G, a: f64, b: f64) -> Result<Segment>
where
    G: Fn(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let v = g(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { what: "integrand", x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Ok(Segment { a, b, value, error })
}

/// Integrates `g` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<G>(g: G, a: f64, b: f64, tol: f64) -> Result<QuadratureEstimate>
where
    G: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval {
            a,
            b,
            reason: "integration requires finite a < b",
        });
    }
    if tol.is_nan() || tol < MIN_TOL {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol:e} is below the supported minimum {MIN_TOL:e}"
        )));
    }

    let mut heap = BinaryHeap::new();
    heap.push(gauss_kronrod(&g, a, b)?);
    let mut subdivisions = 0;

    loop {
        let total_error = compensated_sum(heap.iter().map(|s| s.error));
        if total_error <= tol {
            // Sum in positional order so the value does not depend on heap layout.
            let mut segments = heap.into_vec();
            segments.sort_by(|l, r| l.a.total_cmp(&r.a));
            return Ok(QuadratureEstimate {
                value: compensated_sum(segments.iter().map(|s| s.value)),
                abs_error_estimate: total_error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > MAX_SUBINTERVALS || mid <= worst.a || mid >= worst.b {
            return Err(Error::NoConvergence {
                a,
                b,
                tol,
                cap: MAX_SUBINTERVALS,
                estimate: total_error,
            });
        }
        heap.push(gauss_kronrod(&g, worst.a, mid)?);
        heap.push(gauss_kronrod(&g, mid, worst.b)?);
        subdivisions += 1;
    }
}

/// Which derivative norm to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormKind {
    /// `sup |f'|`
    SupF1,
    /// `sup |f''|`
    SupF2,
    /// `(∫ |f''|^p)^(1/p)`
    LpF2 { p: f64 },
    /// `∫ |f''|`
    L1F2,
}

/// A derivative norm together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    #[serde(flatten)]
    pub kind: NormKind,
    pub value: f64,
    /// Uniform sample count behind a sup estimate; `None` for integral
    /// norms or caller-supplied values.
    pub samples: Option<usize>,
}

/// Estimates a derivative norm of `ft` on `iv`.
///
/// Sup norms come from dense sampling plus golden-section refinement and are
/// therefore lower estimates. Integral norms go through [`integrate`].
pub fn estimate_norm(ft: &FunctionTriple, iv: &Interval, kind: NormKind) -> Result<NormEstimate> {
    ft.check_interval(iv)?;
    match kind {
        NormKind::SupF1 => {
            let value = sampled_sup(|x| ft.f1(x), iv, DEFAULT_SUP_SAMPLES)?;
            Ok(NormEstimate {
                kind,
                value,
                samples: Some(DEFAULT_SUP_SAMPLES),
            })
        }
        NormKind::SupF2 => {
            let value = sampled_sup(|x| ft.f2(x), iv, DEFAULT_SUP_SAMPLES)?;
            Ok(NormEstimate {
                kind,
                value,
                samples: Some(DEFAULT_SUP_SAMPLES),
            })
        }
        NormKind::L1F2 => Ok(NormEstimate {
            kind,
            value: lp_f2(ft, iv, 1.0)?,
            samples: None,
        }),
        NormKind::LpF2 { p } => {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::InvalidExponent(format!("norm exponent p = {p} must be >= 1")));
            }
            Ok(NormEstimate {
                kind,
                value: lp_f2(ft, iv, p)?,
                samples: None,
            })
        }
    }
}

fn lp_f2(ft: &FunctionTriple, iv: &Interval, p: f64) -> Result<f64> {
    // Scale the absolute tolerance to the size of the integrand.
    let sup = sampled_sup(|x| ft.f2(x), iv, 257)?;
    let scale = (sup.powf(p) * iv.length()).max(1.0);
    let est = integrate(
        |x| ft.f2(x).map(|v| v.abs().powf(p)).unwrap_or(f64::NAN),
        iv.a(),
        iv.b(),
        DEFAULT_TOL * scale,
    )?;
    Ok(est.value.max(0.0).powf(1.0 / p))
}

/// Sampled maximum of `|g|` on `iv`, refined by golden-section search around
/// the best sample.
pub fn sampled_sup<G>(g: G, iv: &Interval, samples: usize) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let grid = iv.grid(samples.max(2));
    let mut best = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = g(x)?.abs();
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let refined = golden_section_max(|x| g(x).map(f64::abs).unwrap_or(f64::NEG_INFINITY), lo, hi);
    Ok(best_val.max(refined))
}

fn golden_section_max<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..80 {
        if gc > gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - inv_phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + inv_phi * (hi - lo);
            gd = g(d);
        }
        if hi - lo <= f64::EPSILON * (lo.abs() + hi.abs()) {
            break;
        }
    }
    gc.max(gd)
}
