//! Gamma-function machinery and the Gauss hypergeometric function.

mod gamma;
mod hyp2f1;

pub use gamma::{digamma, gamma_fn, gamma_ratio, ln_abs_gamma, log_gamma, pochhammer, recip_gamma};
pub use hyp2f1::{
    hyp2f1, hyp2f1_derivative, hyp2f1_euler_integral, Hyp2F1Params, NEAR_ONE, SERIES_MAX_TERMS,
    SERIES_TOL,
};
