//! Points of the ball and the sphere, the Poisson kernel, and the Möbius
//! map of the ball that sends r·e₁ to the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SpherePoint inputs further than this from unit norm are rejected.
pub const SPHERE_RENORMALIZE_TOL: f64 = 1e-9;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidPoint(format!("dimension {dim} < 2")));
    }
    Ok(())
}

/// A point of the open unit ball Bⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let r = norm(&coords);
        if r >= 1.0 {
            return Err(Error::InvalidPoint(format!(
                "|x| = {r} is not inside the open unit ball"
            )));
        }
        Ok(BallPoint { coords })
    }

    /// The point r·e₁.
    pub fn on_axis(radius: f64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut coords = vec![0.0; dim];
        coords[0] = radius;
        BallPoint::new(coords)
    }

    pub fn origin(dim: usize) -> Result<Self> {
        BallPoint::on_axis(0.0, dim)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn radius(&self) -> f64 {
        norm(&self.coords)
    }

    /// r_x = (|x|, 0, …, 0).
    pub fn axis_representative(&self) -> BallPoint {
        let mut coords = vec![0.0; self.dim()];
        coords[0] = self.radius();
        BallPoint { coords }
    }

    /// Whether every coordinate except the first is zero.
    pub fn is_on_axis(&self) -> bool {
        self.coords[1..].iter().all(|&c| c == 0.0)
    }
}

/// A point of the unit sphere S^{n-1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Accepts coordinates whose norm is within [`SPHERE_RENORMALIZE_TOL`]
    /// of one and renormalizes them.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        let r = norm(&coords);
        if !r.is_finite() || (r - 1.0).abs() > SPHERE_RENORMALIZE_TOL {
            return Err(Error::InvalidPoint(format!(
                "|ζ| = {r} is not on the unit sphere"
            )));
        }
        Ok(SpherePoint::normalized(coords, r))
    }

    /// Projects any nonzero vector onto the sphere.
    pub fn from_direction(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        let r = norm(&coords);
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidPoint("zero or non-finite direction".into()));
        }
        Ok(SpherePoint::normalized(coords, r))
    }

    fn normalized(mut coords: Vec<f64>, r: f64) -> Self {
        if r != 1.0 {
            coords.iter_mut().for_each(|c| *c /= r);
        }
        SpherePoint { coords }
    }

    /// The pole e₁.
    pub fn pole(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut coords = vec![0.0; dim];
        coords[0] = 1.0;
        Ok(SpherePoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

fn dist2(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// |r e₁ - η|² computed without cancellation near η = e₁.
fn axis_dist2(radius: f64, eta: &[f64]) -> f64 {
    let d0 = eta[0] - radius;
    d0 * d0 + eta[1..].iter().map(|c| c * c).sum::<f64>()
}

/// Poisson kernel P(x, ζ) = (1 - |x|²) / |x - ζ|ⁿ on raw slices.
pub(crate) fn poisson_kernel_raw(x: &[f64], zeta: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|c| c * c).sum();
    (1.0 - r2) / dist2(x, zeta).powf(x.len() as f64 / 2.0)
}

/// Poisson kernel P(x, ζ) = (1 - |x|²) / |x - ζ|ⁿ.
pub fn poisson_kernel(x: &BallPoint, zeta: &SpherePoint) -> Result<f64> {
    if x.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: zeta.dim(),
        });
    }
    Ok(poisson_kernel_raw(&x.coords, &zeta.coords))
}

/// P(r e₁, ζ) as a function of the polar angle θ between ζ and e₁.
///
/// |x - ζ|² is written as (1-r)² + 4r sin²(θ/2) to keep its precision when
/// r is close to one and θ close to zero.
pub fn poisson_kernel_axis(dim: usize, radius: f64, theta: f64) -> f64 {
    let d2 = axis_polar_dist2(radius, theta);
    (1.0 - radius * radius) / d2.powf(dim as f64 / 2.0)
}

/// |s e₁ - ζ|² for signed s ∈ (-1, 1) and polar angle θ of ζ.
pub(crate) fn axis_polar_dist2(s: f64, theta: f64) -> f64 {
    if s >= 0.0 {
        let h = (0.5 * theta).sin();
        (1.0 - s) * (1.0 - s) + 4.0 * s * h * h
    } else {
        let h = (0.5 * theta).cos();
        (1.0 + s) * (1.0 + s) - 4.0 * s * h * h
    }
}

/// sup over ζ of P(x, ζ), attained at ζ = x/|x|: (1+|x|)ⁿ / (1-|x|²)^{n-1}.
pub fn poisson_kernel_sup(x: &BallPoint) -> f64 {
    let r = x.radius();
    let n = x.dim() as i32;
    (1.0 + r).powi(n) / (1.0 - r * r).powi(n - 1)
}

fn check_axis_radius(radius: f64) {
    assert!(
        (0.0..1.0).contains(&radius),
        "axis radius must lie in [0, 1), got {radius}"
    );
}

/// T_{r_x}(y) = (1 - r²)(y - r e₁)/|y - r e₁|² - r e₁ restricted to the
/// sphere, where it is again a unit vector.
///
/// # Panics
/// If `radius` is outside [0, 1).
pub fn mobius_axis(radius: f64, y: &SpherePoint) -> SpherePoint {
    check_axis_radius(radius);
    let d2 = axis_dist2(radius, &y.coords);
    let scale = (1.0 - radius * radius) / d2;
    let mut out: Vec<f64> = y.coords.iter().map(|c| scale * c).collect();
    out[0] = scale * (y.coords[0] - radius) - radius;
    let r = norm(&out);
    SpherePoint::normalized(out, r)
}

/// η ↦ -T_{r_x}(η), the substitution ζ = -T(η) used to move r·e₁ to the
/// origin. Unlike T itself this map is an involution of the sphere; it
/// swaps r·e₁'s nearest boundary point e₁ with -e₁.
///
/// # Panics
/// If `radius` is outside [0, 1).
pub fn mobius_reflected(radius: f64, y: &SpherePoint) -> SpherePoint {
    let mut t = mobius_axis(radius, y);
    t.coords.iter_mut().for_each(|c| *c = -*c);
    t
}

/// Jacobian of T_{r_x} on the sphere: ((1 - r²)/|η - r e₁|²)^{n-1}.
///
/// # Panics
/// If `radius` is outside [0, 1).
pub fn mobius_sphere_jacobian(radius: f64, eta: &SpherePoint) -> f64 {
    check_axis_radius(radius);
    let d2 = axis_dist2(radius, &eta.coords);
    ((1.0 - radius * radius) / d2).powi(eta.dim() as i32 - 1)
}

/// Both sides of |r_x - ζ| = (1 - r²)/|η - r_x| for ζ = -T_{r_x}(η).
///
/// # Panics
/// If `radius` is outside [0, 1).
pub fn cov_distance_identity(radius: f64, eta: &SpherePoint) -> (f64, f64) {
    let zeta = mobius_axis(radius, eta);
    // ζ = -T(η), so |r e₁ - ζ| = |r e₁ + T(η)|
    let direct = {
        let t = &zeta.coords;
        let d0 = radius + t[0];
        (d0 * d0 + t[1..].iter().map(|c| c * c).sum::<f64>()).sqrt()
    };
    let via_eta = (1.0 - radius * radius) / axis_dist2(radius, &eta.coords).sqrt();
    (direct, via_eta)
}
