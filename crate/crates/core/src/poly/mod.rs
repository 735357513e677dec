//! Complex polynomials: evaluation, composition, preimages and parsing.

mod parse;
mod roots;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sphere::SpherePoint;

pub use parse::parse_poly;
pub use roots::PreimageSet;

/// A complex polynomial of degree at least one.
///
/// Coefficients are stored highest degree first, so `coeffs()[0]` is the
/// leading coefficient and `coeffs()[degree]` the constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
    scale: f64,
    binomial: bool,
}

impl Polynomial {
    /// Builds a polynomial from coefficients, highest degree first.
    /// Leading zeros are dropped.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFiniteCoefficient);
        }
        let first = coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0));
        let Some(first) = first else {
            return Err(Error::ZeroPolynomial);
        };
        let coeffs = coeffs[first..].to_vec();
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooLow {
                degree: 0,
                required: 1,
            });
        }
        Ok(Self::from_trimmed(coeffs))
    }

    fn from_trimmed(coeffs: Vec<Complex64>) -> Self {
        let d = coeffs.len() - 1;
        let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let binomial = coeffs[1..d].iter().all(|c| c.re == 0.0 && c.im == 0.0);
        Polynomial {
            coeffs,
            scale,
            binomial,
        }
    }

    /// Real coefficients, highest degree first.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `a * z^k`.
    pub fn monomial(a: Complex64, k: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[0] = a;
        Self::new(coeffs)
    }

    /// Fails unless the degree is at least two, as required of generators.
    pub fn require_generator(&self) -> Result<()> {
        if self.degree() < 2 {
            return Err(Error::DegreeTooLow {
                degree: self.degree(),
                required: 2,
            });
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Coefficient of `z^power`.
    pub fn coeff(&self, power: usize) -> Complex64 {
        let d = self.degree();
        if power > d {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[d - power]
        }
    }

    /// `max(1, largest |coefficient|)`, the scale used by root tolerances.
    #[inline]
    pub fn coefficient_scale(&self) -> f64 {
        self.scale
    }

    /// True when all coefficients except the leading and constant ones vanish.
    #[inline]
    pub fn is_binomial(&self) -> bool {
        self.binomial
    }

    /// True for `a * z^k`.
    pub fn is_monomial(&self) -> bool {
        let c = self.coeffs[self.degree()];
        self.is_binomial() && c.re == 0.0 && c.im == 0.0
    }

    #[inline]
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = self.coeffs[0];
        for c in &self.coeffs[1..] {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and derivative at `z` by Horner's scheme.
    #[inline]
    pub(crate) fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = self.coeffs[0];
        let mut dp = Complex64::new(0.0, 0.0);
        for c in &self.coeffs[1..] {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Evaluation on the sphere; infinity is fixed.
    #[inline]
    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::new(self.eval_complex(z)),
        }
    }

    pub fn derivative(&self) -> Option<Polynomial> {
        let d = self.degree();
        if d < 2 {
            // derivative is a nonzero constant, not representable here
            return None;
        }
        let coeffs = self.coeffs[..d]
            .iter()
            .enumerate()
            .map(|(i, c)| c * (d - i) as f64)
            .collect();
        Polynomial::new(coeffs).ok()
    }

    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).1
    }

    /// The composition `self ∘ inner`.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        let mut acc: Vec<Complex64> = vec![self.coeffs[0]];
        for c in &self.coeffs[1..] {
            acc = mul_coeffs(&acc, &inner.coeffs);
            let last = acc.len() - 1;
            acc[last] += c;
        }
        Polynomial::new(acc).expect("composition of nonconstant polynomials is nonconstant")
    }

    /// `p(z) - w` as a polynomial.
    pub(crate) fn shifted(&self, w: Complex64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        let d = self.degree();
        coeffs[d] -= w;
        Self::from_trimmed(coeffs)
    }

    /// Radius beyond which `|p(z)| >= 2|z|`, and so orbits escape.
    pub fn escape_radius(&self) -> f64 {
        let k = self.degree();
        let lower: f64 = self.coeffs[1..].iter().map(|c| c.norm()).sum();
        debug_assert!(k >= 1);
        ((2.0 + lower) / self.leading().norm()).max(1.0)
    }

    /// All preimages of `w`, with multiplicity.
    pub fn preimages(&self, w: SpherePoint) -> Result<PreimageSet> {
        roots::preimages(self, w)
    }

    /// Distinct preimages of `w` appended to `out`; returns the residual.
    pub fn preimages_into(&self, w: SpherePoint, out: &mut Vec<SpherePoint>) -> Result<f64> {
        roots::preimages_into(self, w, out)
    }

    /// Roots of `p(z) - z`.
    pub fn fixed_points(&self) -> Result<Vec<Complex64>> {
        let mut coeffs = self.coeffs.clone();
        let d = self.degree();
        coeffs[d - 1] -= Complex64::new(1.0, 0.0);
        let q = Polynomial::new(coeffs)?;
        let set = q.preimages(SpherePoint::ZERO)?;
        Ok(set
            .points
            .iter()
            .filter_map(|(p, _)| p.finite())
            .collect())
    }
}

fn mul_coeffs(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn fmt_real(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{}", v)
    } else {
        format!("{:?}", v)
    }
}

/// Coefficient text and whether it should be joined with a leading minus.
fn fmt_coeff(c: Complex64) -> (bool, String) {
    if c.im == 0.0 {
        (c.re < 0.0, fmt_real(c.re.abs()))
    } else if c.re == 0.0 {
        let body = if c.im.abs() == 1.0 {
            "i".to_string()
        } else {
            format!("{}*i", fmt_real(c.im.abs()))
        };
        (c.im < 0.0, body)
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        (
            false,
            format!("({} {} {}*i)", fmt_real(c.re), sign, fmt_real(c.im.abs())),
        )
    }
}

impl fmt::Display for Polynomial {
    /// Formats in the grammar accepted by [`parse_poly`]; re-parsing yields
    /// identical coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let power = d - i;
            let (negative, body) = fmt_coeff(c);
            let var = match power {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{power}"),
            };
            let term = match (power, body.as_str()) {
                (0, _) => body,
                (_, "1") => var,
                _ => format!("{body}*{var}"),
            };
            match (first, negative) {
                (true, false) => write!(f, "{term}")?,
                (true, true) => write!(f, "-{term}")?,
                (false, false) => write!(f, " + {term}")?,
                (false, true) => write!(f, " - {term}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}
