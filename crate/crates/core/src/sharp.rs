//! The sharp constants.
//!
//! With q the conjugate exponent of p and
//!
//! ```text
//! a_q(r) = ∫₀^π sin^{n-2}t (1 + r² - 2r cos t)^{nq/2-n+1} dt
//!        = √π Γ((n-1)/2)/Γ(n/2) · F(n-1-nq/2, (n-nq)/2; n/2; r²),
//! ```
//!
//! the pointwise factor is C_p(x) = F(…; |x|²)^{1/q}, and the global
//! constant C_p is its supremum over the ball, attained at r = 0 when
//! q ≤ 2 - 2/n and at r = 1 otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BallPoint;
use crate::specialfn::{hyp2f1, log_gamma, Hyp2F1Params};

/// Below this radius the n = 3 closed form hands over to the series.
pub const N3_SMALL_RADIUS: f64 = 1e-4;

/// Hölder-conjugate exponents 1/p + 1/q = 1 with p ∈ (1, ∞].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    /// From p ∈ (1, ∞]; `f64::INFINITY` encodes p = ∞ (q = 1).
    pub fn from_p(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 1.0 {
            return Err(Error::Precondition(format!("p = {p} must lie in (1, ∞]")));
        }
        let q = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
        Ok(ExponentPair { p, q })
    }

    /// From q ∈ [1, ∞); q = 1 gives p = ∞.
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::Precondition(format!("q = {q} must lie in [1, ∞)")));
        }
        let p = if q == 1.0 {
            f64::INFINITY
        } else {
            q / (q - 1.0)
        };
        Ok(ExponentPair { p, q })
    }

    pub fn infinity() -> Self {
        ExponentPair {
            p: f64::INFINITY,
            q: 1.0,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// 1/p, zero for p = ∞.
    pub fn inv_p(&self) -> f64 {
        if self.p.is_infinite() {
            0.0
        } else {
            1.0 / self.p
        }
    }

    pub fn is_p_infinite(&self) -> bool {
        self.p.is_infinite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    Hypergeometric,
    ClosedFormN3,
    Endpoint,
    Quadrature,
}

impl BoundMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundMethod::Hypergeometric => "hypergeometric",
            BoundMethod::ClosedFormN3 => "closed_form_n3",
            BoundMethod::Endpoint => "endpoint",
            BoundMethod::Quadrature => "quadrature",
        }
    }
}

impl std::fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// C_p(x), the prefactor (1-|x|²)^{-(n-1)/p}, and their product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub c_p_x: f64,
    pub prefactor: f64,
    pub bound: f64,
    pub method: BoundMethod,
}

impl BoundResult {
    fn assemble(c_p_x: f64, n: usize, exps: &ExponentPair, r: f64, method: BoundMethod) -> Self {
        let prefactor = growth_prefactor(n, exps, r);
        BoundResult {
            c_p_x,
            prefactor,
            bound: c_p_x * prefactor,
            method,
        }
    }
}

/// Which endpoint of [0, 1] an a_q value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    Zero,
    One,
}

impl Endpoint {
    pub fn radius(&self) -> f64 {
        match self {
            Endpoint::Zero => 0.0,
            Endpoint::One => 1.0,
        }
    }
}

/// Branch of the global constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalBranch {
    /// q ≤ 2 - 2/n: C_p = 1, the supremum sits at the centre.
    Unit,
    /// q > 2 - 2/n: the Gamma expression, the supremum sits at the boundary.
    Gamma,
}

/// Exponent threshold 2 - 2/n separating the two regimes.
pub fn q_threshold(n: usize) -> f64 {
    2.0 - 2.0 / n as f64
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("dimension n = {n} < 2")));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::Precondition(format!(
            "q = {q} must be finite and ≥ 1"
        )));
    }
    Ok(())
}

fn check_open_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Precondition(format!(
            "radius r = {r} outside [0, 1)"
        )));
    }
    Ok(())
}

/// Parameters of F(n-1-nq/2, (n-nq)/2; n/2; r²).
pub fn c_p_params(n: usize, q: f64, r: f64) -> Hyp2F1Params {
    let nf = n as f64;
    Hyp2F1Params::new(
        nf - 1.0 - nf * q / 2.0,
        (nf - nf * q) / 2.0,
        nf / 2.0,
        r * r,
    )
}

/// √π Γ((n-1)/2)/Γ(n/2) = ∫₀^π sin^{n-2}t dt.
pub fn sine_power_integral(n: usize) -> f64 {
    let nf = n as f64;
    (0.5 * std::f64::consts::PI.ln() + log_gamma((nf - 1.0) / 2.0).expect("n ≥ 2")
        - log_gamma(nf / 2.0).expect("n ≥ 2"))
    .exp()
}

/// (1 - r²)^{-(n-1)/p}.
pub fn growth_prefactor(n: usize, exps: &ExponentPair, r: f64) -> f64 {
    let e = (n as f64 - 1.0) * exps.inv_p();
    if e == 0.0 {
        1.0
    } else {
        (1.0 - r * r).powf(-e)
    }
}

/// a_q(r) through its hypergeometric closed form; r = 1 uses Gauss
/// summation.
pub fn a_q(n: usize, q: f64, r: f64) -> Result<f64> {
    check_n(n)?;
    check_q(q)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Precondition(format!(
            "radius r = {r} outside [0, 1]"
        )));
    }
    let params = c_p_params(n, q, r);
    if r == 1.0 && params.c - params.a - params.b <= 0.0 {
        return Err(Error::Precondition(format!(
            "c - a - b = {} must be positive at r = 1",
            params.c - params.a - params.b
        )));
    }
    Ok(sine_power_integral(n) * hyp2f1(params)?)
}

/// a_q at r = 0 or r = 1 from the Gamma closed forms, evaluated in log
/// space:
/// a_q(0) = √π Γ((n-1)/2)/Γ(n/2),
/// a_q(1) = 2^{nq-n} Γ((n-1)/2) Γ((1-n+nq)/2) / Γ(nq/2).
pub fn a_q_endpoint(n: usize, q: f64, s: Endpoint) -> Result<f64> {
    check_n(n)?;
    check_q(q)?;
    let nf = n as f64;
    match s {
        Endpoint::Zero => Ok(sine_power_integral(n)),
        Endpoint::One => {
            let shifted = (1.0 - nf + nf * q) / 2.0;
            if shifted <= 0.0 {
                return Err(Error::Precondition(format!(
                    "(1-n+nq)/2 = {shifted} must be positive"
                )));
            }
            let ln = (nf * q - nf) * std::f64::consts::LN_2
                + log_gamma((nf - 1.0) / 2.0)?
                + log_gamma(shifted)?
                - log_gamma(nf * q / 2.0)?;
            let v = ln.exp();
            if !v.is_finite() {
                return Err(Error::Overflow(q));
            }
            Ok(v)
        }
    }
}

/// C_p(x) = F(n-1-nq/2, (n-nq)/2; n/2; r²)^{1/q} and the assembled bound
/// at |x| = r.
pub fn c_p_x(n: usize, exps: &ExponentPair, r: f64) -> Result<BoundResult> {
    check_n(n)?;
    check_open_radius(r)?;
    let q = exps.q();
    let f = hyp2f1(c_p_params(n, q, r))?;
    let c = if q == 1.0 { f } else { f.powf(1.0 / q) };
    Ok(BoundResult::assemble(
        c,
        n,
        exps,
        r,
        BoundMethod::Hypergeometric,
    ))
}

/// The n = 3 closed form
/// (((1+r)^{3q-2} - (1-r)^{3q-2}) / (2(3q-2) r))^{1/q}.
///
/// The expression is 0/0 at r = 0; below [`N3_SMALL_RADIUS`] the
/// hypergeometric value is returned instead.
pub fn c_p_x_n3(exps: &ExponentPair, r: f64) -> Result<f64> {
    check_open_radius(r)?;
    if r < N3_SMALL_RADIUS {
        return Ok(c_p_x(3, exps, r)?.c_p_x);
    }
    let q = exps.q();
    let s = 3.0 * q - 2.0;
    // (1+r)^s - (1-r)^s = (1-r)^s · expm1(s (ln(1+r) - ln(1-r)))
    let hi = s * r.ln_1p();
    let lo = s * (-r).ln_1p();
    let diff = lo.exp() * (hi - lo).exp_m1();
    Ok((diff / (2.0 * s * r)).powf(1.0 / q))
}

/// Which branch of the global constant applies to (n, q). The tie
/// q = 2 - 2/n goes to the unit branch, where both branches equal one.
pub fn global_branch(n: usize, q: f64) -> GlobalBranch {
    let t = q_threshold(n);
    if q <= t + 4.0 * f64::EPSILON * t {
        GlobalBranch::Unit
    } else {
        GlobalBranch::Gamma
    }
}

/// (2^{nq-n} Γ(n/2) Γ((1+nq-n)/2) / (√π Γ(nq/2)))^{1/q} for any q ≥ 1,
/// without the threshold switch.
pub fn c_p_global_gamma_expr(n: usize, q: f64) -> Result<f64> {
    check_n(n)?;
    check_q(q)?;
    let nf = n as f64;
    let ln = (nf * q - nf) * std::f64::consts::LN_2
        + log_gamma(nf / 2.0)?
        + log_gamma((1.0 + nf * q - nf) / 2.0)?
        - 0.5 * std::f64::consts::PI.ln()
        - log_gamma(nf * q / 2.0)?;
    Ok((ln / q).exp())
}

/// The global constant C_p = sup over the ball of C_p(x).
pub fn c_p_global(n: usize, exps: &ExponentPair) -> Result<f64> {
    check_n(n)?;
    match global_branch(n, exps.q()) {
        GlobalBranch::Unit => Ok(1.0),
        GlobalBranch::Gamma => c_p_global_gamma_expr(n, exps.q()),
    }
}

/// Pointwise bound at x, using the n = 3 closed form when it applies.
pub fn point_bound(n: usize, exps: &ExponentPair, x: &BallPoint) -> Result<BoundResult> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.dim(),
        });
    }
    let r = x.radius();
    if n == 3 && r >= N3_SMALL_RADIUS {
        let c = c_p_x_n3(exps, r)?;
        return Ok(BoundResult::assemble(
            c,
            n,
            exps,
            r,
            BoundMethod::ClosedFormN3,
        ));
    }
    c_p_x(n, exps, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{a_q_oracle, QuadratureConfig};
    use crate::specialfn::gamma_fn;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y.abs()
    }

    fn p(p: f64) -> ExponentPair {
        ExponentPair::from_p(p).unwrap()
    }

    #[test]
    fn exponent_pairs() {
        let e = p(3.0);
        assert!((e.q() - 1.5).abs() < 1e-15);
        assert!((1.0 / e.p() + 1.0 / e.q() - 1.0).abs() < 1e-14);
        let inf = p(f64::INFINITY);
        assert_eq!(inf.q(), 1.0);
        assert_eq!(inf.inv_p(), 0.0);
        assert!(ExponentPair::from_p(1.0).is_err());
        assert!(ExponentPair::from_p(0.5).is_err());
        assert!(ExponentPair::from_q(1.0).unwrap().is_p_infinite());
        assert!(ExponentPair::from_q(0.9).is_err());
    }

    #[test]
    fn a_q_at_zero_and_one() {
        assert!(rel(a_q(2, 2.0, 0.0).unwrap(), PI) < 1e-15);
        assert!(rel(a_q(2, 2.0, 1.0).unwrap(), 2.0 * PI) < 1e-15);
        assert!(rel(a_q(3, 2.0, 1.0).unwrap(), 4.0) < 1e-15);
        assert!(a_q(3, 2.0, 1.5).is_err());
        assert!(a_q(1, 2.0, 0.5).is_err());
    }

    #[test]
    fn a_q_matches_quadrature_of_its_integral() {
        // reference 4.8794642857142857142857142857 (n = 3, q = 3, r = 1/2)
        let v = a_q(3, 3.0, 0.5).unwrap();
        assert!(rel(v, 4.879_464_285_714_286) < 1e-14);
        let est = a_q_oracle(3, 3.0, 0.5, &QuadratureConfig::default()).unwrap();
        assert!(rel(v, est.value) < 1e-10);
    }

    #[test]
    fn endpoint_examples() {
        assert!(rel(a_q_endpoint(2, 1.0, Endpoint::Zero).unwrap(), PI) < 1e-15);
        assert!(rel(a_q_endpoint(2, 1.0, Endpoint::One).unwrap(), PI) < 1e-14);
        assert!(rel(a_q_endpoint(3, 2.0, Endpoint::One).unwrap(), 4.0) < 1e-14);
        // 4 Γ(1/2) Γ(3/2) / Γ(2) = 2π
        let expected = 4.0 * gamma_fn(0.5).unwrap() * gamma_fn(1.5).unwrap();
        assert!(rel(a_q_endpoint(2, 2.0, Endpoint::One).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn endpoint_large_q_stays_finite() {
        // a_q(1) itself leaves the f64 range here, its q-th root does not
        assert!(matches!(
            a_q_endpoint(6, 400.0, Endpoint::One),
            Err(Error::Overflow(_))
        ));
        let g = c_p_global(6, &ExponentPair::from_q(400.0).unwrap()).unwrap();
        assert!(g.is_finite() && g > 1.0);
        let g = c_p_global(3, &p(1.0001)).unwrap();
        assert!(g.is_finite() && g > 1.0);
    }

    #[test]
    fn p2_law() {
        for n in 2..=6 {
            for &r in &[0.0, 0.3, 0.6, 0.99] {
                let res = c_p_x(n, &p(2.0), r).unwrap();
                assert!(rel(res.c_p_x * res.c_p_x, 1.0 + r * r) < 1e-14);
            }
        }
        let res = c_p_x(3, &p(2.0), 0.6).unwrap();
        assert!(rel(res.c_p_x, 1.36f64.sqrt()) < 1e-15);
    }

    #[test]
    fn p_infinity_gives_one() {
        for &r in &[0.0, 0.5, 0.95] {
            let res = c_p_x(4, &ExponentPair::infinity(), r).unwrap();
            assert_eq!(res.c_p_x, 1.0);
            assert_eq!(res.prefactor, 1.0);
        }
    }

    #[test]
    fn bound_result_is_consistent() {
        let res = c_p_x(5, &p(1.7), 0.8).unwrap();
        assert!(rel(res.bound, res.c_p_x * res.prefactor) <= 1e-14);
        assert!(res.c_p_x >= 1.0);
        assert!(c_p_x(3, &p(2.0), 1.0).is_err());
    }

    #[test]
    fn n3_closed_form() {
        for &q in &[1.5, 2.0, 3.0, 5.0] {
            let e = ExponentPair::from_q(q).unwrap();
            for &r in &[1e-3, 0.1, 0.5, 0.9] {
                let closed = c_p_x_n3(&e, r).unwrap();
                let hyp = c_p_x(3, &e, r).unwrap().c_p_x;
                assert!(rel(closed, hyp) < 1e-12, "q = {q}, r = {r}");
            }
        }
        // q = 3, r = 1/2 by direct substitution
        let e = ExponentPair::from_q(3.0).unwrap();
        let direct = ((1.5f64.powi(7) - 0.5f64.powi(7)) / (2.0 * 7.0 * 0.5)).powf(1.0 / 3.0);
        assert!(rel(c_p_x_n3(&e, 0.5).unwrap(), direct) < 1e-14);
        assert!((c_p_x_n3(&e, 1e-6).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(c_p_x_n3(&e, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn global_constant_examples() {
        assert_eq!(c_p_global(4, &p(4.0)).unwrap(), 1.0);
        assert!(rel(c_p_global(2, &p(2.0)).unwrap(), 2f64.sqrt()) < 1e-14);
        // threshold n = 3, q = 4/3: the Gamma expression also gives one
        let at = c_p_global_gamma_expr(3, 4.0 / 3.0).unwrap();
        assert!((at - 1.0).abs() < 1e-14);
        assert_eq!(global_branch(3, 4.0 / 3.0), GlobalBranch::Unit);
        assert_eq!(global_branch(3, 1.4), GlobalBranch::Gamma);
    }

    #[test]
    fn point_bound_examples() {
        let origin = BallPoint::origin(4).unwrap();
        let res = point_bound(4, &p(1.5), &origin).unwrap();
        assert_eq!(res.bound, 1.0);
        let x = BallPoint::new(vec![0.0, 0.6]).unwrap();
        let res = point_bound(2, &p(2.0), &x).unwrap();
        assert!(rel(res.bound, 1.36f64.sqrt() / 0.64f64.sqrt()) < 1e-14);
        let x = BallPoint::new(vec![0.2, 0.3, 0.1]).unwrap();
        let res = point_bound(3, &p(3.0), &x).unwrap();
        assert_eq!(res.method, BoundMethod::ClosedFormN3);
        assert!(point_bound(4, &p(3.0), &x).is_err());
    }

    #[test]
    fn point_bound_is_invariant_under_coordinate_symmetries() {
        let base = vec![0.1, -0.2, 0.25, 0.05];
        let reference = point_bound(4, &p(1.25), &BallPoint::new(base.clone()).unwrap()).unwrap();
        let mut perm = base.clone();
        perm.rotate_left(1);
        let mut flipped = base.clone();
        flipped.iter_mut().for_each(|c| *c = -*c);
        for coords in [perm, flipped] {
            let res = point_bound(4, &p(1.25), &BallPoint::new(coords).unwrap()).unwrap();
            assert_eq!(res, reference);
        }
    }

    proptest! {
        #[test]
        fn assembly_identity(n in 2usize..7, q in 1.0f64..6.0, r in 0.0f64..0.97) {
            // C_p(x)^q = a_q(r) / ∫ sin^{n-2}
            let e = ExponentPair::from_q(q).unwrap();
            let c = c_p_x(n, &e, r).unwrap().c_p_x;
            let lhs = c.powf(q);
            let rhs = a_q(n, q, r).unwrap() / sine_power_integral(n);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }

        #[test]
        fn bound_dominates_constant_function(n in 2usize..7, p_val in 1.01f64..50.0, r in 0.0f64..0.99) {
            let e = ExponentPair::from_p(p_val).unwrap();
            let res = c_p_x(n, &e, r).unwrap();
            prop_assert!(res.bound >= 1.0 - 1e-14);
        }
    }
}
