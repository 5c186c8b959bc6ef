//! Sharp pointwise bounds |u(x)| ≤ C_p(x) (1-|x|²)^{-(n-1)/p} ‖u‖_{hᵖ(Bⁿ)}
//! for harmonic Hardy-space functions on the unit ball, together with
//! the numerical machinery that checks every closed form independently.

pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod sharp;
pub mod specialfn;
pub mod verification;

mod search;

pub use error::{Error, Result};
pub use geometry::{BallPoint, SpherePoint};
pub use quadrature::{IntegralEstimate, IntegrationMethod, QuadratureConfig};
pub use sharp::{BoundMethod, BoundResult, ExponentPair};
pub use specialfn::Hyp2F1Params;
pub use verification::CheckReport;
