//! Fixtures shared by the benchmarks.

use semijulia_core::semigroup::SemigroupSpec;
use semijulia_core::{Complex64, SpherePoint};

/// The annulus pair `<z^2, z^2/3>`.
pub fn annulus_pair() -> SemigroupSpec {
    SemigroupSpec::parse(&["z^2", "z^2/3"]).expect("valid generators")
}

/// `n` points on a golden-angle spiral through `1/2 <= |z| <= 2`.
pub fn spiral_points(n: usize) -> Vec<SpherePoint> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) / n as f64;
            SpherePoint::new(Complex64::from_polar(0.5 * 4f64.powf(t), golden * i as f64))
        })
        .collect()
}
