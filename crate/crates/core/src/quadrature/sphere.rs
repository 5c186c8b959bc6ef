//! Integration against the normalized surface measure σ on S^{n-1}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{integrate_1d, IntegralEstimate, IntegrationMethod, QuadratureConfig};
use crate::error::{Error, Result};
use crate::specialfn::log_gamma;

/// Samples per RNG stream. Block `i` always draws from stream `i` of the
/// seeded generator, so the estimate does not depend on thread count.
const BLOCK: usize = 4096;

/// Γ(n/2) / (√π Γ((n-1)/2)), the reciprocal of ∫₀^π sin^{n-2}θ dθ.
pub fn zonal_weight(dim: usize) -> f64 {
    let n = dim as f64;
    let ln = log_gamma(n / 2.0).expect("n/2 > 0")
        - 0.5 * std::f64::consts::PI.ln()
        - log_gamma((n - 1.0) / 2.0).expect("(n-1)/2 > 0");
    ln.exp()
}

/// Writes a σ-uniform point of S^{dim-1} into `out` by normalizing a
/// vector of independent standard normals.
pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for v in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *v = g;
            norm2 += g * g;
        }
        if norm2 > 0.0 {
            let inv = 1.0 / norm2.sqrt();
            out.iter_mut().for_each(|v| *v *= inv);
            return;
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        count: 0.0,
        mean: 0.0,
        m2: 0.0,
    };

    fn push(&mut self, v: f64) {
        self.count += 1.0;
        let delta = v - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }
}

/// Monte Carlo estimate of ∫_S f dσ with `cfg.mc_samples` points.
///
/// The error estimate is the standard error of the mean. Equal
/// configurations produce bit-identical estimates.
pub fn sphere_mean<F>(dim: usize, f: F, cfg: &QuadratureConfig) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    if dim < 2 {
        return Err(Error::Precondition(format!(
            "sphere dimension n = {dim} < 2"
        )));
    }
    let total = cfg.mc_samples;
    let blocks = total.div_ceil(BLOCK);
    let per_block: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let count = BLOCK.min(total - i * BLOCK);
            let mut zeta = vec![0.0; dim];
            let mut m = Moments::EMPTY;
            for _ in 0..count {
                sample_uniform(&mut rng, &mut zeta);
                let v = f(&zeta);
                if !v.is_finite() {
                    return Err(Error::NonFinite(zeta[0]));
                }
                m.push(v);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let m = per_block.into_iter().fold(Moments::EMPTY, Moments::merge);
    let variance = if m.count > 1.0 {
        m.m2 / (m.count - 1.0)
    } else {
        0.0
    };
    Ok(IntegralEstimate {
        value: m.mean,
        error_estimate: (variance / m.count).sqrt(),
        evaluations: total,
        method: IntegrationMethod::MonteCarlo,
    })
}

/// ∫_S g(ζ₁) dσ(ζ) reduced to Γ(n/2)/(√π Γ((n-1)/2)) ∫₀^π g(cos θ) sin^{n-2}θ dθ.
///
/// The profile receives θ rather than cos θ so callers can keep
/// cancellation-free forms near the poles.
pub fn zonal_integral<G>(dim: usize, g: G, cfg: &QuadratureConfig) -> Result<IntegralEstimate>
where
    G: Fn(f64) -> f64,
{
    if dim < 2 {
        return Err(Error::Precondition(format!(
            "sphere dimension n = {dim} < 2"
        )));
    }
    let power = (dim - 2) as i32;
    let mut est = integrate_1d(
        |t: f64| g(t) * t.sin().powi(power),
        0.0,
        std::f64::consts::PI,
        cfg,
    )?;
    let w = zonal_weight(dim);
    est.value *= w;
    est.error_estimate *= w;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc_cfg(samples: usize, seed: u64) -> QuadratureConfig {
        QuadratureConfig {
            mc_samples: samples,
            seed,
            ..QuadratureConfig::default()
        }
    }

    #[test]
    fn zonal_weight_matches_known_values() {
        assert!((zonal_weight(2) - 1.0 / std::f64::consts::PI).abs() < 1e-16);
        assert!((zonal_weight(3) - 0.5).abs() < 1e-15);
        assert!((zonal_weight(4) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn samples_are_unit_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut v = vec![0.0; 5];
        for _ in 0..1000 {
            sample_uniform(&mut rng, &mut v);
            let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn monte_carlo_is_bit_reproducible() {
        let cfg = mc_cfg(20_000, 99);
        let f = |z: &[f64]| z[0] * z[0] + z[1];
        let a = sphere_mean(4, f, &cfg).unwrap();
        let b = sphere_mean(4, f, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
        let c = sphere_mean(4, f, &mc_cfg(20_000, 100)).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn thread_count_does_not_change_the_estimate() {
        let cfg = mc_cfg(50_000, 3);
        let f = |z: &[f64]| (z[0] + 0.3 * z[2]).exp();
        let parallel = sphere_mean(3, f, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| sphere_mean(3, f, &cfg).unwrap());
        assert_eq!(parallel.value.to_bits(), serial.value.to_bits());
    }

    #[test]
    fn coordinate_second_moment_is_one_over_n() {
        for dim in 2..=6 {
            let est = sphere_mean(dim, |z| z[0] * z[0], &mc_cfg(100_000, 1)).unwrap();
            let exact = 1.0 / dim as f64;
            assert!(
                (est.value - exact).abs() < 4.0 * est.error_estimate,
                "n = {dim}"
            );
        }
    }

    #[test]
    fn standard_errors_are_honest() {
        // ∫ ζ₁² dσ = 1/3 on S²; count 3σ exceedances across seeds
        let mut exceed = 0;
        for seed in 0..100 {
            let est = sphere_mean(3, |z| z[0] * z[0], &mc_cfg(4000, seed)).unwrap();
            if (est.value - 1.0 / 3.0).abs() > 3.0 * est.error_estimate {
                exceed += 1;
            }
        }
        assert!(exceed <= 1, "{exceed} exceedances of 3 standard errors");
    }

    #[test]
    fn zonal_reduction_agrees_with_monte_carlo() {
        let cfg = mc_cfg(100_000, 11);
        for dim in 2..=5 {
            let g = |c: f64| (1.0 + c).powi(3);
            let mc = sphere_mean(dim, |z| g(z[0]), &cfg).unwrap();
            let quad = zonal_integral(dim, |t: f64| g(t.cos()), &cfg).unwrap();
            assert!(
                (mc.value - quad.value).abs() < 3.0 * mc.error_estimate,
                "n = {dim}: mc {} quad {}",
                mc.value,
                quad.value
            );
        }
    }
}
