//! Gamma, log-gamma, digamma and the Pochhammer symbol.
//!
//! Γ is evaluated from the Stirling series for x ≥ 10 and by upward
//! recurrence into that range for 0.5 ≤ x < 10, with reflection below
//! 0.5. The power x^{x-1/2} is split in two halves so that arguments up to
//! 171.6 do not overflow in the intermediate product. Measured relative
//! error on [0.5, 171] is a few ulps.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// sqrt(2π)
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// ln sqrt(2π)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest argument whose Γ is representable.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const FACTORIALS: [f64; 23] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0,
];

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    // reduce to [-1, 1]
    let r = x - 2.0 * (x / 2.0).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// x for which the Stirling series is used directly.
const STIRLING_MIN: f64 = 10.0;

/// Γ(x) for x ≥ 0.5, without range checks.
fn gamma_positive(x: f64) -> f64 {
    if x == x.floor() && x <= FACTORIALS.len() as f64 {
        return FACTORIALS[x as usize - 1];
    }
    if x >= STIRLING_MIN {
        return gamma_stirling(x);
    }
    let shift = (STIRLING_MIN - x).ceil();
    let mut prod = 1.0;
    let mut k = 0.0;
    while k < shift {
        prod *= x + k;
        k += 1.0;
    }
    gamma_stirling(x + shift) / prod
}

/// √(2π) x^{x-1/2} e^{-x} exp(series) for x ≥ 10.
fn gamma_stirling(x: f64) -> f64 {
    let half_power = x.powf(0.5 * (x - 0.5));
    let scaled = half_power * (-x).exp();
    SQRT_2PI * stirling_series(x).exp() * scaled * half_power
}

/// The gamma function Γ(x).
///
/// Nonpositive integers are poles and return [`Error::Pole`]; arguments
/// whose Γ leaves the f64 range return [`Error::Overflow`].
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            function: "gamma",
            value: x,
        });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(x));
    }
    if x >= 0.5 {
        return Ok(gamma_positive(x));
    }
    // Γ(x) Γ(1 - x) = π / sin(πx)
    let reflected = 1.0 - x;
    if reflected > GAMMA_MAX_ARG {
        // Γ(x) underflows towards zero rather than overflowing.
        let (ln_abs, sign) = ln_abs_gamma(x)?;
        return Ok(sign * ln_abs.exp());
    }
    let value = PI / (sin_pi(x) * gamma_positive(reflected));
    if value.is_infinite() {
        return Err(Error::Overflow(x));
    }
    Ok(value)
}

/// ln Γ(x) for x > 0.
///
/// Below x = 10 this is the logarithm of [`gamma_fn`], which is exact at
/// x = 1 and x = 2. Near those two roots the error is absolute (about
/// 1e-16) rather than relative.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain {
            function: "log_gamma",
            value: x,
        });
    }
    if x < 10.0 {
        return Ok(gamma_fn(x)?.ln());
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(stirling_ln_gamma(x))
}

/// Stirling series for ln Γ(x), accurate to rounding for x ≥ 10.
fn stirling_ln_gamma(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_series(x)
}

/// ln Γ(x) - (x - 1/2) ln x + x - ln √(2π), truncated after the B₁₄ term.
fn stirling_series(x: f64) -> f64 {
    // B_2k / (2k (2k - 1)) for k = 1..=7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    C.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv
}

/// ln |Γ(x)| together with the sign of Γ(x), for any non-pole x.
pub fn ln_abs_gamma(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return Err(Error::Domain {
            function: "ln_abs_gamma",
            value: x,
        });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > 0.0 {
        return Ok((log_gamma(x)?, 1.0));
    }
    let s = sin_pi(x);
    let ln_abs = PI.ln() - s.abs().ln() - log_gamma(1.0 - x)?;
    Ok((ln_abs, s.signum()))
}

/// 1/Γ(x), which is zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Ok(0.0);
    }
    let (ln_abs, sign) = ln_abs_gamma(x)?;
    Ok(sign * (-ln_abs).exp())
}

/// Γ(num₁)⋯Γ(numₖ) / (Γ(den₁)⋯Γ(denⱼ)) evaluated in log space.
///
/// A pole in the denominator yields zero; a pole in the numerator is an
/// error.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    if den.iter().any(|&d| is_nonpositive_integer(d)) {
        for &n in num {
            if is_nonpositive_integer(n) {
                return Err(Error::Pole(n));
            }
        }
        return Ok(0.0);
    }
    let mut log_sum = 0.0;
    let mut sign = 1.0;
    for &n in num {
        let (l, s) = ln_abs_gamma(n)?;
        log_sum += l;
        sign *= s;
    }
    for &d in den {
        let (l, s) = ln_abs_gamma(d)?;
        log_sum -= l;
        sign *= s;
    }
    Ok(sign * log_sum.exp())
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            function: "digamma",
            value: x,
        });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        // ψ(1 - x) - ψ(x) = π cot(πx)
        let cot = PI * cos_pi(x) / sin_pi(x);
        return Ok(digamma(1.0 - x)? - cot);
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    // B_2k / (2k) for k = 1..=7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (y * y);
    let series = C.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv2;
    Ok(shift + y.ln() - 0.5 / y - series)
}

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Rising factorial (d)ₖ = d(d+1)⋯(d+k-1), with (d)₀ = 1.
pub fn pochhammer(d: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (d + i as f64))
}
