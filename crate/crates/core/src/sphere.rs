//! Points of the Riemann sphere and the chordal metric.

use std::fmt;

use num_complex::Complex64;

/// Moduli above this are treated as the point at infinity.
pub const INFINITY_THRESHOLD: f64 = 1e150;

/// A point of the extended complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub const ZERO: SpherePoint = SpherePoint::Finite(Complex64::new(0.0, 0.0));

    /// Builds a point, sending non-finite values and moduli beyond
    /// [`INFINITY_THRESHOLD`] to [`SpherePoint::Infinity`].
    #[inline]
    pub fn new(z: Complex64) -> Self {
        if z.re.is_finite()
            && z.im.is_finite()
            && z.re.abs() <= INFINITY_THRESHOLD
            && z.im.abs() <= INFINITY_THRESHOLD
            && z.re * z.re + z.im * z.im <= INFINITY_THRESHOLD * INFINITY_THRESHOLD
        {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }

    #[inline]
    pub fn from_re_im(re: f64, im: f64) -> Self {
        Self::new(Complex64::new(re, im))
    }

    #[inline]
    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    #[inline]
    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Modulus, `+inf` for the point at infinity.
    #[inline]
    pub fn modulus(&self) -> f64 {
        match self {
            SpherePoint::Finite(z) => z.norm(),
            SpherePoint::Infinity => f64::INFINITY,
        }
    }

    /// The map `z -> 1/z` on the sphere.
    pub fn reciprocal(&self) -> Self {
        match *self {
            SpherePoint::Infinity => Self::ZERO,
            SpherePoint::Finite(z) if z.re == 0.0 && z.im == 0.0 => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::new(z.inv()),
        }
    }

    /// Inverse stereographic projection onto the unit sphere, with `0` at the
    /// south pole and infinity at the north pole.
    pub fn to_unit_vector(&self) -> [f64; 3] {
        match *self {
            SpherePoint::Infinity => [0.0, 0.0, 1.0],
            SpherePoint::Finite(z) => {
                let r2 = z.norm_sqr();
                let d = 1.0 + r2;
                [2.0 * z.re / d, 2.0 * z.im / d, (r2 - 1.0) / d]
            }
        }
    }

    /// Stereographic projection from the north pole; the inverse of
    /// [`SpherePoint::to_unit_vector`]. The input is assumed to be of unit length.
    pub fn from_unit_vector(v: [f64; 3]) -> Self {
        let denom = 1.0 - v[2];
        if denom <= 0.0 {
            return SpherePoint::Infinity;
        }
        SpherePoint::new(Complex64::new(v[0] / denom, v[1] / denom))
    }

    /// Colatitude measured from the north pole (infinity), in `[0, pi]`.
    #[inline]
    pub fn colatitude(&self) -> f64 {
        match self {
            SpherePoint::Infinity => 0.0,
            SpherePoint::Finite(z) => 2.0 * 1f64.atan2(z.norm()),
        }
    }

    /// Longitude `arg z` in `(-pi, pi]`; zero at the poles.
    #[inline]
    pub fn longitude(&self) -> f64 {
        match self {
            SpherePoint::Infinity => 0.0,
            SpherePoint::Finite(z) => z.im.atan2(z.re),
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::new(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{}", z),
            SpherePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Chordal distance on the Riemann sphere; values lie in `[0, 2]`.
pub fn chordal_dist(p: SpherePoint, q: SpherePoint) -> f64 {
    match (p, q) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
            let da = 1.0 + a.norm_sqr();
            let db = 1.0 + b.norm_sqr();
            let prod = da * db;
            let denom = if prod.is_finite() {
                prod.sqrt()
            } else {
                da.sqrt() * db.sqrt()
            };
            (2.0 * (a - b).norm() / denom).min(2.0)
        }
    }
}

/// `|z|` without the overflow guarding of `hypot` when it is not needed.
#[inline]
pub(crate) fn fast_norm(z: Complex64) -> f64 {
    let s = z.re * z.re + z.im * z.im;
    if s.is_finite() && s > 1e-290 {
        s.sqrt()
    } else {
        z.norm()
    }
}

/// Euclidean distance of two unit vectors, i.e. the chordal distance of the
/// corresponding sphere points.
#[inline]
pub(crate) fn vector_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}
