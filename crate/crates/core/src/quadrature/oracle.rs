use super::{integrate_1d, sphere_mean, zonal_integral, IntegralEstimate, QuadratureConfig};
use crate::error::{Error, Result};
use crate::geometry::{axis_polar_dist2, poisson_kernel_raw, BallPoint};

type PointFn = Box<dyn Fn(&[f64]) -> f64 + Sync>;

/// Boundary data on S^{n-1}.
pub enum BoundaryData {
    /// f(ζ) = g(ζ₁), zonal about e₁.
    Zonal(Box<dyn Fn(f64) -> f64 + Sync>),
    General(PointFn),
}

impl BoundaryData {
    pub fn zonal<G: Fn(f64) -> f64 + Sync + 'static>(g: G) -> Self {
        BoundaryData::Zonal(Box::new(g))
    }

    pub fn general<G: Fn(&[f64]) -> f64 + Sync + 'static>(g: G) -> Self {
        BoundaryData::General(Box::new(g))
    }

    pub fn constant(c: f64) -> Self {
        BoundaryData::zonal(move |_| c)
    }

    pub fn eval(&self, zeta: &[f64]) -> f64 {
        match self {
            BoundaryData::Zonal(g) => g(zeta[0]),
            BoundaryData::General(g) => g(zeta),
        }
    }
}

impl std::fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryData::Zonal(_) => f.write_str("BoundaryData::Zonal(..)"),
            BoundaryData::General(_) => f.write_str("BoundaryData::General(..)"),
        }
    }
}

fn check_aq_args(n: usize, q: f64, r: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("dimension n = {n} < 2")));
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::Precondition(format!(
            "exponent q = {q} must be finite and ≥ 1"
        )));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Precondition(format!(
            "radius r = {r} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Quadrature of ∫₀^π sin^{n-2}θ (1 + r² - 2r cos θ)^{nq/2-n+1} dθ.
///
/// For r < 1 the base is evaluated as (1-r)² + 4r sin²(θ/2). At r = 1 the
/// integral is taken in φ = θ/2, where it becomes
/// 2^{nq-n+1} ∫₀^{π/2} sin^{nq-n}φ cos^{n-2}φ dφ with a nonnegative power.
pub fn a_q_oracle(n: usize, q: f64, r: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_aq_args(n, q, r)?;
    let nf = n as f64;
    let exponent = nf * q / 2.0 - nf + 1.0;
    let sin_power = (n - 2) as i32;
    if r < 1.0 {
        integrate_1d(
            |t: f64| {
                let h = (0.5 * t).sin();
                let base = (1.0 - r) * (1.0 - r) + 4.0 * r * h * h;
                t.sin().powi(sin_power) * base.powf(exponent)
            },
            0.0,
            std::f64::consts::PI,
            cfg,
        )
    } else {
        let s = nf * q - nf;
        let scale = 2f64.powf(s + 1.0);
        let mut est = integrate_1d(
            |phi: f64| phi.sin().powf(s) * phi.cos().powi(sin_power),
            0.0,
            std::f64::consts::FRAC_PI_2,
            cfg,
        )?;
        est.value *= scale;
        est.error_estimate *= scale;
        Ok(est)
    }
}

/// Monte Carlo estimate of a_q(r) for r < 1, through
/// a_q = (1-r²)^{(n-1)(q-1)} I_q / w_n with I_q = ∫_S P(r e₁, ζ)^q dσ and
/// w_n the [`zonal_weight`](super::zonal_weight).
pub fn a_q_oracle_mc(n: usize, q: f64, r: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_aq_args(n, q, r)?;
    if r >= 1.0 {
        return Err(Error::Precondition(
            "the Monte Carlo a_q oracle needs r < 1".into(),
        ));
    }
    let x = BallPoint::on_axis(r, n)?;
    let mut est = i_q_surface_mc(n, q, &x, cfg)?;
    let scale = (1.0 - r * r).powf((n as f64 - 1.0) * (q - 1.0)) / super::zonal_weight(n);
    est.value *= scale;
    est.error_estimate *= scale;
    Ok(est)
}

/// Monte Carlo estimate of I_q = ∫_S P(x, ζ)^q dσ(ζ) with σ-uniform ζ.
pub fn i_q_surface_mc(
    n: usize,
    q: f64,
    x: &BallPoint,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.dim(),
        });
    }
    let coords = x.coords().to_vec();
    sphere_mean(n, move |z| poisson_kernel_raw(&coords, z).powf(q), cfg)
}

/// Poisson extension u(x) = ∫_S P(x, ζ) f(ζ) dσ(ζ).
///
/// Zonal data at a point of the e₁ axis is reduced to a 1D quadrature;
/// everything else goes through [`poisson_integral_mc`].
pub fn poisson_integral(
    f: &BoundaryData,
    x: &BallPoint,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    match f {
        BoundaryData::Zonal(g) if x.is_on_axis() => {
            let n = x.dim();
            let s = x.coords()[0];
            let numer = 1.0 - s * s;
            let half_n = n as f64 / 2.0;
            zonal_integral(
                n,
                |t: f64| numer / axis_polar_dist2(s, t).powf(half_n) * g(t.cos()),
                cfg,
            )
        }
        _ => poisson_integral_mc(f, x, cfg),
    }
}

/// Monte Carlo Poisson extension, regardless of symmetry.
pub fn poisson_integral_mc(
    f: &BoundaryData,
    x: &BallPoint,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    let coords = x.coords();
    sphere_mean(x.dim(), |z| poisson_kernel_raw(coords, z) * f.eval(z), cfg)
}

fn check_norm_exponent(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Precondition(format!(
            "norm exponent p = {p} must lie in (1, ∞)"
        )));
    }
    Ok(())
}

fn root_of(est: IntegralEstimate, p: f64) -> IntegralEstimate {
    let value = est.value.powf(1.0 / p);
    let error_estimate = if est.value > 0.0 {
        value / (p * est.value) * est.error_estimate
    } else {
        est.error_estimate.powf(1.0 / p)
    };
    IntegralEstimate {
        value,
        error_estimate,
        ..est
    }
}

/// Boundary Lᵖ(σ) norm (∫_S |f|ᵖ dσ)^{1/p}, which is the hᵖ norm of the
/// Poisson extension of continuous data.
pub fn hp_norm(
    f: &BoundaryData,
    dim: usize,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    check_norm_exponent(p)?;
    match f {
        BoundaryData::Zonal(g) => {
            let est = zonal_integral(dim, |t: f64| g(t.cos()).abs().powf(p), cfg)?;
            Ok(root_of(est, p))
        }
        BoundaryData::General(_) => hp_norm_mc(f, dim, p, cfg),
    }
}

/// Monte Carlo boundary Lᵖ norm.
pub fn hp_norm_mc(
    f: &BoundaryData,
    dim: usize,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    check_norm_exponent(p)?;
    let est = sphere_mean(dim, |z| f.eval(z).abs().powf(p), cfg)?;
    Ok(root_of(est, p))
}
