//! Numerical integration used as independent evidence for the closed forms:
//! adaptive 1D quadrature, σ-uniform Monte Carlo on the sphere, and the
//! Poisson-integral and boundary-norm evaluators built on them.

mod adaptive;
mod oracle;
mod sphere;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use adaptive::integrate_1d;
pub use oracle::{
    a_q_oracle, a_q_oracle_mc, hp_norm, hp_norm_mc, i_q_surface_mc, poisson_integral,
    poisson_integral_mc, BoundaryData,
};
pub use sphere::{sample_uniform, sphere_mean, zonal_integral, zonal_weight};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 60,
            mc_samples: 100_000,
            seed: 0,
        }
    }
}

impl QuadratureConfig {
    pub fn with_seed(seed: u64) -> Self {
        QuadratureConfig {
            seed,
            ..QuadratureConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Precondition(format!(
                "tolerances must be positive (abs_tol = {}, rel_tol = {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth < 1 || self.mc_samples < 1 {
            return Err(Error::Precondition(
                "max_depth and mc_samples must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    Adaptive1d,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Summed local error bound for [`IntegrationMethod::Adaptive1d`];
    /// standard error of the mean for [`IntegrationMethod::MonteCarlo`].
    pub error_estimate: f64,
    pub evaluations: usize,
    pub method: IntegrationMethod,
}
