//! Globally adaptive 7-15 point Gauss-Kronrod quadrature.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{IntegralEstimate, IntegrationMethod, QuadratureConfig};
use crate::error::{Error, Result};

// Abscissae and weights listed from the outermost node inwards; the Gauss
// nodes are the odd-indexed Kronrod nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

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

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard ceiling on the number of live subintervals.
const MAX_INTERVALS: usize = 100_000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// One application of the 15-point Kronrod rule with the QUADPACK error
/// heuristic.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |t: f64| -> Result<f64> {
        let v = f(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(t))
        }
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let width = half.abs();
    let value = res_k * half;
    res_abs *= width;
    res_asc *= width;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err))
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Subintervals are bisected in order of decreasing error until the summed
/// error estimate is at most `max(abs_tol, rel_tol·|value|)`. Bisecting an
/// interval that already sits at `max_depth` is reported as
/// [`Error::NonConvergence`]. The integrand is never evaluated at the
/// endpoints, so integrable endpoint singularities are allowed.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Precondition(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(IntegralEstimate {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            method: IntegrationMethod::Adaptive1d,
        });
    }
    if a > b {
        let mut est = integrate_1d(f, b, a, cfg)?;
        est.value = -est.value;
        return Ok(est);
    }

    let (value, error) = kronrod15(&f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        lo: a,
        hi: b,
        value,
        error,
        depth: 0,
    });
    let mut total = value;
    let mut total_err = error;

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        let worst = match heap.peek() {
            Some(s) => *s,
            None => break,
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if worst.depth >= cfg.max_depth || mid <= worst.lo || mid >= worst.hi {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                iterations: heap.len(),
            });
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                iterations: heap.len(),
            });
        }
        heap.pop();
        let (v1, e1) = kronrod15(&f, worst.lo, mid)?;
        let (v2, e2) = kronrod15(&f, mid, worst.hi)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        for (lo, hi, value, error) in [(worst.lo, mid, v1, e1), (mid, worst.hi, v2, e2)] {
            heap.push(Segment {
                lo,
                hi,
                value,
                error,
                depth: worst.depth + 1,
            });
        }
        // the running sums drift; resynchronise now and then
        if heap.len() % 256 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }

    // sum in position order so the result does not depend on heap layout
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    let value = segments.iter().map(|s| s.value).sum();
    let error_estimate = segments.iter().map(|s| s.error).sum();
    Ok(IntegralEstimate {
        value,
        error_estimate,
        evaluations,
        method: IntegrationMethod::Adaptive1d,
    })
}
