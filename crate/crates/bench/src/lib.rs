//! Input sets shared by the criterion benchmarks.

/// Radii spread over [0, 0.99] with extra density near the boundary.
pub fn bench_radii() -> Vec<f64> {
    vec![0.0, 0.1, 0.5, 0.9, 0.97, 0.99]
}
