//! Closed forms against independent numerical evidence.

use std::f64::consts::PI;

use hsharp::geometry::{
    mobius_reflected, mobius_sphere_jacobian, poisson_kernel, poisson_kernel_sup,
};
use hsharp::quadrature::{a_q_oracle, i_q_surface_mc, sample_uniform, sphere_mean, zonal_weight};
use hsharp::sharp::{
    a_q, a_q_endpoint, c_p_global, c_p_x, point_bound, q_threshold, Endpoint, ExponentPair,
};
use hsharp::specialfn::{hyp2f1, Hyp2F1Params};
use hsharp::verification::{extremal_ratio, extremal_ratio_mc};
use hsharp::{BallPoint, QuadratureConfig, SpherePoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn a_q_agrees_with_its_integral_close_to_the_boundary() {
    for n in 2..=6 {
        for q in [1.05, 1.5, 2.5, 4.0] {
            for r in [0.95, 0.99, 0.995, 0.999] {
                let closed = a_q(n, q, r).unwrap();
                let oracle = a_q_oracle(n, q, r, &quad()).unwrap().value;
                assert!(rel(closed, oracle) < 1e-8, "n = {n}, q = {q}, r = {r}");
            }
        }
    }
}

#[test]
fn a_q_is_continuous_at_the_boundary() {
    for n in 2..=5 {
        for q in [1.2, 2.0, 3.0] {
            let at_one = a_q_endpoint(n, q, Endpoint::One).unwrap();
            let near = a_q(n, q, 1.0 - 1e-9).unwrap();
            assert!(rel(near, at_one) < 1e-6, "n = {n}, q = {q}");
        }
    }
}

#[test]
fn hypergeometric_references() {
    // 30-digit references
    let cases = [
        ((0.3, 0.7, 2.1, 0.5), 1.062_184_659_842_558_5),
        ((-0.5, -0.5, 1.0, 0.99), 1.270_076_000_553_982_7),
        ((-0.4, -1.4, 2.0, 0.999), 1.267_358_475_176_845_6),
    ];
    for ((a, b, c, z), expected) in cases {
        let v = hyp2f1(Hyp2F1Params::new(a, b, c, z)).unwrap();
        assert!(rel(v, expected) < 1e-13, "F({a}, {b}; {c}; {z}) = {v}");
    }
}

#[test]
fn surface_integral_is_rotation_invariant() {
    // I_q at rotated copies of x agrees with the axis value C_p(r)^q
    let n = 3;
    let exps = ExponentPair::from_p(2.5).unwrap();
    let q = exps.q();
    let r: f64 = 0.5;
    // ∫ P^q dσ = C_p(x)^q (1-r²)^{-(n-1)(q-1)}
    let target = c_p_x(n, &exps, r).unwrap().c_p_x.powf(q)
        * (1.0 - r * r).powf(-((n - 1) as f64) * (q - 1.0));
    let copies = [
        vec![r, 0.0, 0.0],
        vec![0.0, 0.0, -r],
        vec![r / 3f64.sqrt(); 3],
        vec![0.3, -0.4, 0.0],
    ];
    for (i, coords) in copies.into_iter().enumerate() {
        let x = BallPoint::new(coords).unwrap();
        let cfg = QuadratureConfig {
            mc_samples: 200_000,
            seed: i as u64,
            ..quad()
        };
        let est = i_q_surface_mc(n, q, &x, &cfg).unwrap();
        assert!(
            (est.value - target).abs() < 4.0 * est.error_estimate,
            "copy {i}: {} vs {target} ± {}",
            est.value,
            est.error_estimate
        );
    }
}

#[test]
fn kernel_sup_is_the_sampled_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut buf = vec![0.0; 2];
    let x = BallPoint::new(vec![0.5, 0.0]).unwrap();
    let mut best: f64 = 0.0;
    for _ in 0..10_000 {
        sample_uniform(&mut rng, &mut buf);
        let z = SpherePoint::from_direction(buf.clone()).unwrap();
        let v = poisson_kernel(&x, &z).unwrap();
        assert!(v <= poisson_kernel_sup(&x) * (1.0 + 1e-14));
        best = best.max(v);
    }
    assert!((poisson_kernel_sup(&x) - 3.0).abs() < 1e-15);
    assert!(best > 2.99);
}

#[test]
fn change_of_variables_preserves_integrals() {
    // ∫ g(ζ) dσ = ∫ g(S(η)) J(η) dσ(η) with S = -T
    let g = |z: &[f64]| (1.0 + z[0]).powi(2) + 0.5 * z[1];
    for n in [2, 3, 4] {
        for r in [0.3, 0.6] {
            let cfg = QuadratureConfig {
                mc_samples: 200_000,
                seed: 11,
                ..quad()
            };
            let direct = sphere_mean(n, g, &cfg).unwrap();
            let moved = sphere_mean(
                n,
                |eta| {
                    let e = SpherePoint::new(eta.to_vec()).unwrap();
                    g(mobius_reflected(r, &e).coords()) * mobius_sphere_jacobian(r, &e)
                },
                &cfg,
            )
            .unwrap();
            let se = (direct.error_estimate.powi(2) + moved.error_estimate.powi(2)).sqrt();
            assert!(
                (direct.value - moved.value).abs() < 3.0 * se,
                "n = {n}, r = {r}"
            );
            // exact value 1 + 1/n
            assert!((direct.value - (1.0 + 1.0 / n as f64)).abs() < 3.0 * direct.error_estimate);
        }
    }
}

#[test]
fn global_constant_dominates_every_point() {
    for n in 2..=6 {
        for q in [1.1, q_threshold(n), 1.7, 2.0, 5.0] {
            let exps = ExponentPair::from_q(q).unwrap();
            let global = c_p_global(n, &exps).unwrap();
            for i in 0..50 {
                let r = i as f64 / 50.0;
                let c = c_p_x(n, &exps, r).unwrap().c_p_x;
                assert!(c <= global * (1.0 + 1e-12), "n = {n}, q = {q}, r = {r}");
            }
        }
    }
}

#[test]
fn global_constant_two_dimensional_p2() {
    let g = c_p_global(2, &ExponentPair::from_p(2.0).unwrap()).unwrap();
    assert!(rel(g, 2f64.sqrt()) < 1e-14);
    let sup_grid = (0..1000)
        .map(|i| (1.0 + (i as f64 / 1000.0).powi(2)).sqrt())
        .fold(0.0, f64::max);
    assert!(g >= sup_grid);
}

#[test]
fn extremal_ratio_is_one_and_never_exceeds_it() {
    for n in [2, 3, 5] {
        for p in [1.25, 2.0, 4.0] {
            let exps = ExponentPair::from_p(p).unwrap();
            for r in [0.0, 0.45, 0.8, 0.95] {
                let x = BallPoint::on_axis(r, n).unwrap();
                let ratio = extremal_ratio(n, &exps, &x, &quad()).unwrap();
                assert!(
                    (ratio - 1.0).abs() < 1e-8,
                    "n = {n}, p = {p}, r = {r}: {ratio}"
                );
            }
        }
    }
}

#[test]
fn monte_carlo_ratio_is_one_and_beats_constant_data() {
    let n = 3;
    let exps = ExponentPair::from_p(3.0).unwrap();
    let x = BallPoint::on_axis(0.6, n).unwrap();
    let (ratio, se) = extremal_ratio_mc(n, &exps, &x, &QuadratureConfig::with_seed(5)).unwrap();
    assert!((ratio - 1.0).abs() < 3.0 * se);
    let bound = point_bound(n, &exps, &x).unwrap().bound;
    assert!(1.0 / bound < ratio);
}

#[test]
fn zonal_weight_normalizes_the_sine_power() {
    for n in 2..=8 {
        let integral = a_q(n, 1.0, 0.0).unwrap();
        assert!(rel(integral * zonal_weight(n), 1.0) < 1e-14);
    }
    assert!(rel(a_q(2, 1.0, 0.4).unwrap(), PI) < 1e-15);
}
