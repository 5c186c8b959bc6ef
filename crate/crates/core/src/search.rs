//! Bracketing search for the maximum of a function on an interval.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Best point seen by [`maximize`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Maximum {
    pub arg: f64,
    pub value: f64,
}

/// Grid scan over `scan` uniform points followed by golden-section
/// refinement of the best bracket, until it is narrower than `tol`.
/// Returns the best point evaluated, endpoints included.
pub(crate) fn maximize<F>(f: F, lo: f64, hi: f64, scan: usize, tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64>,
{
    let scan = scan.max(3);
    let step = (hi - lo) / (scan - 1) as f64;
    let mut best = Maximum {
        arg: lo,
        value: f(lo)?,
    };
    let mut best_i = 0;
    for i in 1..scan {
        let x = if i == scan - 1 {
            hi
        } else {
            lo + step * i as f64
        };
        let v = f(x)?;
        if v > best.value {
            best = Maximum { arg: x, value: v };
            best_i = i;
        }
    }

    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        for (x, v) in [(c, fc), (d, fd)] {
            if v > best.value {
                best = Maximum { arg: x, value: v };
            }
        }
    }
    Ok(best)
}
