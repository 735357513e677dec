//! Power maps on circle arcs and monomial rigidity.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Relative slack on `j^n delta > 2 pi`, so that exact multiples of the
/// circle are not counted as covering it because of rounding.
const COVER_SLACK: f64 = 1e-12;
const RADIUS_REL_TOL: f64 = 1e-12;
const SPREAD_REL_TOL: f64 = 1e-10;
const OTHER_COEFF_TOL: f64 = 1e-12;
/// Below this many powers of `j` the arc is mapped with complex products.
const DIRECT_POWER_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct CircleReport {
    pub j: u32,
    pub n: u32,
    /// `j^n`.
    pub power: u64,
    pub expected_radius: f64,
    /// Largest relative error of `|z^(j^n)|` against `radius^(j^n)`; taken on
    /// log-moduli when the image radius underflows.
    pub max_radius_rel_error: f64,
    pub radius_ok: bool,
    /// Largest angular gap between consecutive image points, wrap included.
    pub max_angular_gap: f64,
    pub gap_bound: f64,
    pub covers_circle: bool,
}

/// Smallest `n >= 1` with `j^n delta > 2 pi`.
pub fn minimal_cover_exponent(j: u32, delta: f64) -> Result<u32> {
    if j < 2 {
        return Err(Error::InvalidParameter(format!("need j >= 2, got {j}")));
    }
    if !(delta > 0.0 && delta <= TAU * (1.0 + COVER_SLACK)) {
        return Err(Error::InvalidParameter(format!("need 0 < delta <= 2 pi, got {delta}")));
    }
    let target = TAU * (1.0 + COVER_SLACK);
    let mut n = 1;
    let mut span = delta * f64::from(j);
    while span <= target {
        n += 1;
        span *= f64::from(j);
    }
    Ok(n)
}

/// Maps `samples` points of the arc `{radius e^{i phi} : theta <= phi <= theta + delta}`
/// through `z -> z^(j^n)` by `n` successive `j`-th powers and checks that the
/// image lies on `C(0, radius^(j^n))` and covers it.
pub fn circle_lemma_check(j: u32, radius: f64, theta: f64, delta: f64, samples: usize) -> Result<CircleReport> {
    let n = minimal_cover_exponent(j, delta)?;
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < radius < 1, got {radius}")));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameter("theta must be finite".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let power = u64::from(j).checked_pow(n).ok_or_else(|| {
        Error::InvalidParameter(format!("j^n overflows for j = {j}, n = {n}"))
    })?;
    let log_expected = power as f64 * radius.ln();
    let expected_radius = log_expected.exp();
    let direct = power <= DIRECT_POWER_LIMIT && expected_radius > 1e-280;

    let mut max_err = 0.0f64;
    let mut angles = Vec::with_capacity(samples);
    let step = delta / (samples - 1) as f64;
    for i in 0..samples {
        let phi = theta + step * i as f64;
        if direct {
            let mut w = Complex64::from_polar(radius, phi);
            for _ in 0..n {
                w = w.powu(j);
            }
            max_err = max_err.max((w.norm() - expected_radius).abs() / expected_radius);
            angles.push(w.arg().rem_euclid(TAU));
        } else {
            // log-polar: each j-th power multiplies log|w| and arg w by j
            let mut log_modulus = radius.ln();
            let mut angle = phi.rem_euclid(TAU);
            for _ in 0..n {
                log_modulus *= f64::from(j);
                angle = (angle * f64::from(j)).rem_euclid(TAU);
            }
            max_err = max_err.max((log_modulus - log_expected).abs() / log_expected.abs());
            angles.push(angle);
        }
    }
    let max_gap = largest_circular_gap(&mut angles);
    let gap_bound = TAU * power as f64 * (delta / samples as f64);
    Ok(CircleReport {
        j,
        n,
        power,
        expected_radius,
        max_radius_rel_error: max_err,
        radius_ok: max_err <= RADIUS_REL_TOL,
        max_angular_gap: max_gap,
        gap_bound,
        covers_circle: max_gap <= gap_bound,
    })
}

fn largest_circular_gap(angles: &mut [f64]) -> f64 {
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + TAU - angles[angles.len() - 1];
    angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rigidity {
    Consistent { a: Complex64, j: usize },
    Violation { witness_radius: f64, modulus_spread: f64 },
}

/// Tests whether `l` maps each circle `|z| = r` into a circle about 0, as a
/// monomial `a z^j` does.
pub fn monomial_rigidity_check(l: &Polynomial, radii: &[f64], samples: usize) -> Result<Rigidity> {
    // lowest power first
    let coeffs: Vec<Complex64> = (0..=l.degree()).map(|i| l.coeff(i)).collect();
    if coeffs[0] != Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter("L(0) must be 0".into()));
    }
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::InvalidParameter("radii must be non-empty and lie in (0, 1)".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let (j, a) = coeffs
        .iter()
        .enumerate()
        .find(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| (i, *c))
        .ok_or(Error::ZeroPolynomial)?;

    let mut widest: Option<(f64, f64)> = None;
    for &r in radii {
        let (lo, hi) = (0..samples)
            .map(|i| l.eval_complex(Complex64::from_polar(r, TAU * i as f64 / samples as f64)).norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
        let spread = hi - lo;
        if spread > SPREAD_REL_TOL * hi.max(f64::MIN_POSITIVE) {
            return Ok(Rigidity::Violation {
                witness_radius: r,
                modulus_spread: spread,
            });
        }
        if widest.is_none_or(|(_, s)| spread > s) {
            widest = Some((r, spread));
        }
    }
    let clean = coeffs
        .iter()
        .enumerate()
        .all(|(i, c)| i == j || c.norm() <= OTHER_COEFF_TOL);
    if clean {
        Ok(Rigidity::Consistent { a, j })
    } else {
        // the circles look round but lower-order terms remain
        let (witness_radius, modulus_spread) = widest.expect("radii is non-empty");
        Ok(Rigidity::Violation {
            witness_radius,
            modulus_spread,
        })
    }
}

/// Radius `|a|^(-1/(l-1))` of the Julia circle of `z -> a z^l`.
pub fn monomial_pair_julia_radius(a: Complex64, l: u32) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("need l >= 2, got {l}")));
    }
    let m = a.norm();
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("need finite a != 0, got {a}")));
    }
    Ok(m.powf(-1.0 / f64::from(l - 1)))
}
