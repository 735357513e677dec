//! Dynamics of one polynomial: Green's function, Böttcher coordinate and
//! inverse-iteration Julia clouds.

use num_complex::Complex64;

use crate::cloud::{decimate, kind_tag, stream_rng, CloudKind, SetApprox};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::sphere::SpherePoint;

/// Value reported for the pole at infinity.
pub const GREEN_AT_INFINITY: f64 = 1e308;

pub const DEFAULT_GREEN_ITERATIONS: usize = 512;

const GREEN_TOLERANCE: f64 = 1e-12;
const ORBIT_CUTOFF: f64 = 1e50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenEstimate {
    pub value: f64,
    pub iterations: usize,
    pub escaped: bool,
}

/// Green's function of the basin of infinity, with pole at infinity.
pub fn green_value(p: &Polynomial, z: SpherePoint, max_iter: usize) -> GreenEstimate {
    let Some(mut w) = z.finite() else {
        return GreenEstimate {
            value: GREEN_AT_INFINITY,
            iterations: 0,
            escaped: true,
        };
    };
    let radius = p.escape_radius();
    let k = p.degree() as f64;
    let log_lead = p.leading().norm().ln() / (k - 1.0);
    let mut n = 0usize;
    while w.norm() <= radius {
        if n >= max_iter {
            return GreenEstimate {
                value: 0.0,
                iterations: n,
                escaped: false,
            };
        }
        w = p.eval_complex(w);
        n += 1;
    }
    let ln_k = k.ln();
    let estimate = |w: Complex64, n: usize| (w.norm().ln() + log_lead) * (-(n as f64) * ln_k).exp();
    let mut value = estimate(w, n);
    while w.norm() < ORBIT_CUTOFF && n < max_iter {
        let next = p.eval_complex(w);
        if !next.is_finite() {
            break;
        }
        w = next;
        n += 1;
        let refined = estimate(w, n);
        let delta = (refined - value).abs();
        value = refined;
        if delta <= GREEN_TOLERANCE * value.abs().max(1.0) {
            break;
        }
    }
    GreenEstimate {
        value: value.max(0.0),
        iterations: n,
        escaped: true,
    }
}

/// Iterations needed to leave the escape disc, if that happens within
/// `max_iter`.
pub fn escape_time(p: &Polynomial, z: SpherePoint, max_iter: usize) -> Option<usize> {
    let mut w = z.finite()?;
    let radius = p.escape_radius();
    for n in 0..max_iter {
        if w.norm() > radius {
            return Some(n);
        }
        w = p.eval_complex(w);
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BottcherValue {
    pub value: Complex64,
    /// `|phi(p(z)) - phi(z)^k|`
    pub functional_residual: f64,
    /// Principal `(k-1)`-th root of the leading coefficient; `phi(z) / z`
    /// tends to it at infinity.
    pub leading_root: Complex64,
}

/// Radius beyond which the Böttcher product converges on the branch used by
/// [`bottcher_value`].
///
/// It is the least `r` with `sum_{i<k} |a_i| r^(i-k) < |a_k|` and
/// `|a_k| r^k - sum_{i<k} |a_i| r^i >= r`, so the closed disc complement is
/// forward invariant and the normalized factor `p(z) / (a_k z^k)` stays in
/// the right half plane.
pub fn bottcher_radius(p: &Polynomial) -> f64 {
    let k = p.degree();
    let lead = p.leading().norm();
    let lower: Vec<(usize, f64)> = (0..k)
        .map(|i| (i, p.coeff(i).norm()))
        .filter(|&(_, a)| a > 0.0)
        .collect();
    let ok = |r: f64| {
        if r <= 0.0 {
            return false;
        }
        let s: f64 = lower.iter().map(|&(i, a)| a * r.powi(i as i32 - k as i32)).sum();
        let m = lead * r.powi(k as i32) - lower.iter().map(|&(i, a)| a * r.powi(i as i32)).sum::<f64>();
        s < lead && m >= r
    };
    let (mut lo, mut hi) = (0.0, p.escape_radius());
    debug_assert!(ok(hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

/// `p(z) / (a_k z^k)` evaluated in `1/z` to avoid overflow.
fn normalized_factor(p: &Polynomial, z: Complex64) -> Complex64 {
    let w = z.inv();
    let lead = p.leading();
    p.coeffs()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c / lead)
}

fn bottcher_log(p: &Polynomial, z: Complex64, leading_root: Complex64) -> Complex64 {
    let k = p.degree() as f64;
    let mut log = leading_root.ln() + z.ln();
    let mut w = z;
    let mut weight = 1.0 / k;
    for _ in 0..4096 {
        let term = normalized_factor(p, w).ln() * weight;
        log += term;
        if term.norm() <= 1e-17 * log.norm().max(1.0) || weight < 1e-300 {
            break;
        }
        w = p.eval_complex(w);
        if !w.is_finite() || w.norm() > 1e150 {
            break;
        }
        weight /= k;
    }
    log
}

/// Böttcher coordinate conjugating `p` to `w -> w^k` near infinity.
pub fn bottcher_value(p: &Polynomial, z: SpherePoint) -> Result<BottcherValue> {
    let k = p.degree();
    let leading_root = (p.leading().ln() / (k as f64 - 1.0)).exp();
    let radius = bottcher_radius(p);
    let Some(zc) = z.finite() else {
        return Ok(BottcherValue {
            value: Complex64::new(f64::INFINITY, 0.0),
            functional_residual: 0.0,
            leading_root,
        });
    };
    if zc.norm() <= radius {
        return Err(Error::OutsideBottcherDomain {
            modulus: zc.norm(),
            radius,
        });
    }
    let log = bottcher_log(p, zc, leading_root);
    let value = log.exp();
    let image = bottcher_log(p, p.eval_complex(zc), leading_root).exp();
    let functional_residual = (image - (log * k as f64).exp()).norm();
    Ok(BottcherValue {
        value,
        functional_residual,
        leading_root,
    })
}

const REPELLING_MARGIN: f64 = 1e-9;

/// The most repelling fixed point of `p`.
pub fn seed_repelling_point(p: &Polynomial) -> Result<SpherePoint> {
    let mut best: Option<(Complex64, f64)> = None;
    for z in p.fixed_points()? {
        let m = p.derivative_at(z).norm();
        let better = match best {
            None => true,
            Some((b, bm)) => {
                m > bm || (m == bm && (z.re, z.im).partial_cmp(&(b.re, b.im)) == Some(std::cmp::Ordering::Greater))
            }
        };
        if better {
            best = Some((z, m));
        }
    }
    match best {
        Some((z, m)) if m > 1.0 + REPELLING_MARGIN => Ok(SpherePoint::new(z)),
        Some((_, m)) => Err(Error::NoRepellingFixedPoint { best_multiplier: m }),
        None => Err(Error::NoRepellingFixedPoint { best_multiplier: 0.0 }),
    }
}

/// Backward preimages of every point, in order.
pub(crate) fn pull_back(p: &Polynomial, layer: &[SpherePoint]) -> Result<Vec<SpherePoint>> {
    let mut out = Vec::with_capacity(layer.len() * p.degree());
    for &w in layer {
        p.preimages_into(w, &mut out)?;
    }
    Ok(out)
}

/// Inverse-iteration approximation of the Julia set of `p`.
///
/// Starting from a repelling fixed point, each of `depth` rounds replaces the
/// cloud by all of its preimages and thins it uniformly to `budget` points.
pub fn julia_cloud_single(p: &Polynomial, depth: usize, budget: usize, seed: u64) -> Result<SetApprox> {
    p.require_generator()?;
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be positive".into()));
    }
    let mut layer = vec![seed_repelling_point(p)?];
    let tag = kind_tag(CloudKind::SingleJulia);
    for round in 0..depth {
        let next = pull_back(p, &layer)?;
        let mut rng = stream_rng(seed, &[tag, round as u64]);
        layer = decimate(next, budget, &mut rng);
    }
    Ok(SetApprox {
        points: layer,
        depth,
        budget,
        seed,
        kind: CloudKind::SingleJulia,
    })
}

/// Depth at which the untruncated preimage tree of `p` first reaches `count`
/// points.
pub fn depth_for_count(p: &Polynomial, count: usize) -> usize {
    let k = p.degree() as f64;
    ((count.max(1) as f64).ln() / k.ln()).ceil().max(1.0) as usize
}
