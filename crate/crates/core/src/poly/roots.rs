//! Full preimage sets `p^{-1}(w)`.
//!
//! Binomials `a z^k + b` and quadratics use closed forms. Everything else goes
//! through Aberth–Ehrlich simultaneous iteration. All roots are then polished
//! by Newton steps and clustered into points with multiplicity.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::sphere::{fast_norm, SpherePoint};

const MAX_ABERTH_ITERATIONS: usize = 600;
const RESIDUAL_TOLERANCE: f64 = 1e-10;
const CLUSTER_TOLERANCE: f64 = 1e-8;
const POLISH_STEPS: usize = 3;

/// Preimages of a point, with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct PreimageSet {
    pub points: Vec<(SpherePoint, usize)>,
    /// Largest `|p(root) - w|` over the reported points.
    pub residual: f64,
}

impl PreimageSet {
    /// Number of roots counted with multiplicity.
    pub fn cardinality(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> impl Iterator<Item = SpherePoint> + '_ {
        self.points.iter().map(|(p, _)| *p)
    }
}

#[derive(Default)]
struct Scratch {
    roots: Vec<Complex64>,
    groups: Vec<(Complex64, usize)>,
    sums: Vec<Complex64>,
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::default());
}

/// Fills `scratch.groups` with the clustered roots of `p(z) = w`.
fn solve(p: &Polynomial, w: Complex64, scratch: &mut Scratch) -> Result<f64> {
    raw_roots(p, w, &mut scratch.roots);
    let scale = tolerance_scale(p, w);
    let polished = polish(p, w, &mut scratch.roots, 4.0 * f64::EPSILON * scale);
    let root_scale = scratch.roots.iter().map(|&z| fast_norm(z)).fold(1.0, f64::max);
    cluster(
        &scratch.roots,
        CLUSTER_TOLERANCE * root_scale,
        &mut scratch.groups,
        &mut scratch.sums,
    );
    let residual = if scratch.groups.len() == scratch.roots.len() {
        polished
    } else {
        scratch
            .groups
            .iter()
            .map(|(z, _)| fast_norm(p.eval_complex(*z) - w))
            .fold(0.0, f64::max)
    };
    if residual.is_nan() || residual > RESIDUAL_TOLERANCE * scale {
        return Err(Error::NonConvergence {
            best_residual: residual,
        });
    }
    Ok(residual)
}

pub(super) fn preimages(p: &Polynomial, w: SpherePoint) -> Result<PreimageSet> {
    let w = match w {
        SpherePoint::Infinity => {
            return Ok(PreimageSet {
                points: vec![(SpherePoint::Infinity, p.degree())],
                residual: 0.0,
            })
        }
        SpherePoint::Finite(w) => w,
    };
    let mut scratch = Scratch::default();
    let residual = solve(p, w, &mut scratch)?;
    Ok(PreimageSet {
        points: scratch
            .groups
            .into_iter()
            .map(|(z, m)| (SpherePoint::new(z), m))
            .collect(),
        residual,
    })
}

pub(super) fn preimages_into(
    p: &Polynomial,
    w: SpherePoint,
    out: &mut Vec<SpherePoint>,
) -> Result<f64> {
    let w = match w {
        SpherePoint::Infinity => {
            out.push(SpherePoint::Infinity);
            return Ok(0.0);
        }
        SpherePoint::Finite(w) => w,
    };
    SCRATCH.with(|cell| {
        let mut scratch = cell.borrow_mut();
        let residual = solve(p, w, &mut scratch)?;
        out.extend(scratch.groups.iter().map(|&(z, _)| SpherePoint::new(z)));
        Ok(residual)
    })
}

/// `max(1, |w|, coefficient scale)`.
fn tolerance_scale(p: &Polynomial, w: Complex64) -> f64 {
    p.coefficient_scale().max(fast_norm(w)).max(1.0)
}

/// Roots of `p(z) - w` before polishing, `degree` of them.
fn raw_roots(p: &Polynomial, w: Complex64, out: &mut Vec<Complex64>) {
    out.clear();
    let k = p.degree();
    let a = p.leading();
    let b = p.coeff(0) - w;
    if k == 1 {
        out.push(-b / a);
    } else if p.is_binomial() {
        binomial_roots(a, b, k, out);
    } else if k == 2 {
        quadratic_roots(a, p.coeff(1), b, out);
    } else {
        out.extend(aberth(&p.shifted(w)));
    }
}

/// Roots of `a z^k + b`.
fn binomial_roots(a: Complex64, b: Complex64, k: usize, out: &mut Vec<Complex64>) {
    let target = -b / a;
    if target.re == 0.0 && target.im == 0.0 {
        out.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), k));
    } else if k == 2 {
        let s = target.sqrt();
        out.extend([s, -s]);
    } else if k == 4 {
        let s = target.sqrt().sqrt();
        let si = Complex64::new(-s.im, s.re);
        out.extend([s, si, -s, -si]);
    } else {
        let (r, theta) = target.to_polar();
        let root = Complex64::from_polar(r.powf(1.0 / k as f64), theta / k as f64);
        out.extend((0..k).map(|j| root * unit_root(j, k)));
    }
}

/// `exp(2 pi i j / k)`, exact at quarter turns.
fn unit_root(j: usize, k: usize) -> Complex64 {
    if (4 * j).is_multiple_of(k) {
        match (4 * j / k) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)
    }
}

/// Roots of `a z^2 + b z + c` avoiding cancellation.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64, out: &mut Vec<Complex64>) {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -0.5 * (b + s);
    if q.re == 0.0 && q.im == 0.0 {
        let z = -b / (2.0 * a);
        out.extend([z, z]);
    } else {
        out.extend([q / a, c / q]);
    }
}

/// Fujiwara bound on root moduli of a polynomial (highest degree first).
fn root_bound(coeffs: &[Complex64]) -> f64 {
    let k = coeffs.len() - 1;
    let lead = coeffs[0].norm();
    let mut bound: f64 = 0.0;
    for (i, c) in coeffs.iter().enumerate().skip(1) {
        let ratio = c.norm() / lead;
        let ratio = if i == k { ratio / 2.0 } else { ratio };
        bound = bound.max(ratio.powf(1.0 / i as f64));
    }
    2.0 * bound
}

fn aberth(q: &Polynomial) -> Vec<Complex64> {
    let k = q.degree();
    let coeffs = q.coeffs();
    let center = -coeffs[1] / (coeffs[0] * k as f64);
    // a circle around the centroid reaching the farthest root
    let radius = {
        let b = root_bound(coeffs);
        (b + center.norm()).max(f64::MIN_POSITIVE.sqrt()) * 0.5
    };
    let mut z: Vec<Complex64> = (0..k)
        .map(|j| {
            // fixed irrational offsets break symmetric stalls
            let angle = 2.0 * PI * j as f64 / k as f64 + 0.4 + 0.07 * (j as f64).sqrt();
            center + Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut done = vec![false; k];
    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut all_done = true;
        for i in 0..k {
            if done[i] {
                continue;
            }
            let (v, dv) = q.eval_with_derivative(z[i]);
            if v.re == 0.0 && v.im == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = v / dv;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.re != 0.0 || d.im != 0.0 {
                        repulsion += d.inv();
                    }
                }
            }
            let mut step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                step = if ratio.re.is_finite() && ratio.im.is_finite() {
                    ratio
                } else {
                    Complex64::new(radius * 1e-3, radius * 1e-3)
                };
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Newton steps on `p(z) - w`, kept only while they reduce the residual.
/// Roots already within `floor` are left alone. Returns the largest residual.
fn polish(p: &Polynomial, w: Complex64, roots: &mut [Complex64], floor: f64) -> f64 {
    let mut worst: f64 = 0.0;
    let mut finite = true;
    for z in roots.iter_mut() {
        let mut best = fast_norm(p.eval_complex(*z) - w);
        for _ in 0..POLISH_STEPS {
            if best <= floor {
                break;
            }
            let (v, dv) = p.eval_with_derivative(*z);
            let step = (v - w) / dv;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            let candidate = *z - step;
            let r = fast_norm(p.eval_complex(candidate) - w);
            if r < best {
                *z = candidate;
                best = r;
            } else {
                break;
            }
        }
        finite &= best.is_finite();
        worst = worst.max(best);
    }
    if finite {
        worst
    } else {
        f64::INFINITY
    }
}

/// Groups roots closer than `tol` into one point with multiplicity.
fn cluster(
    roots: &[Complex64],
    tol: f64,
    groups: &mut Vec<(Complex64, usize)>,
    sums: &mut Vec<Complex64>,
) {
    groups.clear();
    sums.clear();
    for &z in roots {
        match groups.iter().position(|&(c, _)| fast_norm(c - z) <= tol) {
            Some(g) => {
                sums[g] += z;
                groups[g].1 += 1;
                groups[g].0 = sums[g] / groups[g].1 as f64;
            }
            None => {
                groups.push((z, 1));
                sums.push(z);
            }
        }
    }
}
