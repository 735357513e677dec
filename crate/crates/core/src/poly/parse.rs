//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('+' | '-') factor | atom ('^' uint)?
//! atom   := number | 'i' | 'z' | '(' expr ')'
//! ```
//!
//! Division is only allowed by constant expressions.

use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};

const MAX_POWER: u32 = 256;

/// Parses an expression in `z` into a [`Polynomial`].
pub fn parse_poly(text: &str) -> Result<Polynomial> {
    let mut parser = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        len: text.len(),
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if let Some(c) = parser.peek() {
        return Err(parser.error(format!("unexpected '{c}'")));
    }
    let coeffs: Vec<Complex64> = value.0.into_iter().rev().collect();
    Polynomial::new(coeffs)
}

/// Dense coefficients, lowest degree first.
#[derive(Clone, Debug)]
struct Dense(Vec<Complex64>);

impl Dense {
    fn constant(c: Complex64) -> Self {
        Dense(vec![c])
    }

    fn variable() -> Self {
        Dense(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    /// Constant value if every nonconstant coefficient is zero.
    fn as_constant(&self) -> Option<Complex64> {
        if self.0[1..].iter().all(|c| c.re == 0.0 && c.im == 0.0) {
            Some(self.0[0])
        } else {
            None
        }
    }

    fn add(mut self, other: &Dense, sign: f64) -> Self {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), Complex64::new(0.0, 0.0));
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if sign > 0.0 {
                *a += b;
            } else {
                *a -= b;
            }
        }
        self
    }

    fn mul(&self, other: &Dense) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Dense(out)
    }

    fn neg(mut self) -> Self {
        for c in &mut self.0 {
            *c = -*c;
        }
        self
    }

    fn div_constant(mut self, d: Complex64) -> Self {
        for c in &mut self.0 {
            *c /= d;
        }
        self
    }

    fn pow(&self, n: u32) -> Self {
        let mut out = Dense::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i) + 1
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            column: self.column(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, expected: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Dense> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                acc = acc.add(&rhs, 1.0);
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = acc.add(&rhs, -1.0);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Dense> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let rhs = self.factor()?;
                acc = acc.mul(&rhs);
            } else if self.eat('/') {
                self.skip_ws();
                let at = self.column();
                let rhs = self.factor()?;
                let Some(d) = rhs.as_constant() else {
                    return Err(Error::Parse {
                        column: at,
                        message: "division by a non-constant expression".into(),
                    });
                };
                if d.re == 0.0 && d.im == 0.0 {
                    return Err(Error::Parse {
                        column: at,
                        message: "division by zero".into(),
                    });
                }
                acc = acc.div_constant(d);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Dense> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let n = self.uint()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Dense> {
        self.skip_ws();
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                Ok(Dense::variable())
            }
            Some('i') => {
                self.pos += 1;
                Ok(Dense::constant(Complex64::new(0.0, 1.0)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let v = self.number()?;
                Ok(Dense::constant(Complex64::new(v, 0.0)))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Parser| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut mantissa = digits(self);
        if self.peek() == Some('.') {
            self.pos += 1;
            mantissa += digits(self);
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error("malformed exponent"));
            }
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let value: f64 = text.parse().map_err(|_| {
            let mut e = self.error(format!("malformed number '{text}'"));
            if let Error::Parse { column, .. } = &mut e {
                *column = self.chars[start].0 + 1;
            }
            e
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                column: self.chars[start].0 + 1,
                message: format!("number '{text}' overflows"),
            });
        }
        Ok(value)
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer exponent"));
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        match text.parse::<u32>() {
            Ok(n) if n <= MAX_POWER => Ok(n),
            _ => Err(Error::Parse {
                column: self.chars[start].0 + 1,
                message: format!("exponent {text} exceeds {MAX_POWER}"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn coeffs(s: &str) -> Vec<Complex64> {
        parse_poly(s).unwrap().coeffs().to_vec()
    }

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn basic_examples() {
        assert_eq!(coeffs("z^2"), real(&[1.0, 0.0, 0.0]));
        assert_eq!(coeffs("z^2 - 2"), real(&[1.0, 0.0, -2.0]));
        assert_eq!(
            coeffs("(0.5)*z^3 + i*z"),
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ]
        );
    }

    #[test]
    fn extended_forms() {
        assert_eq!(coeffs("z^2/4"), real(&[0.25, 0.0, 0.0]));
        assert_eq!(coeffs("(z+1)^2"), real(&[1.0, 2.0, 1.0]));
        assert_eq!(coeffs("-z^2 + -3"), real(&[-1.0, 0.0, -3.0]));
        assert_eq!(coeffs("2.5e-1*z*z"), real(&[0.25, 0.0, 0.0]));
        assert_eq!(coeffs("z * z - z*z + z"), real(&[1.0, 0.0]));
    }

    fn column_of(s: &str) -> usize {
        match parse_poly(s) {
            Err(Error::Parse { column, .. }) => column,
            other => panic!("expected a parse error for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(column_of("z^2 +"), 6);
        assert_eq!(column_of("z^2 $ 1"), 5);
        assert_eq!(column_of("(z + 1"), 7);
        assert_eq!(column_of("z^"), 3);
        assert_eq!(column_of("z / z"), 5);
        assert_eq!(column_of("1e"), 2);
        assert_eq!(column_of("2 z"), 3);
        assert_eq!(parse_poly("z - z"), Err(Error::ZeroPolynomial));
        assert!(matches!(parse_poly("7"), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn corpus_round_trips() {
        for s in [
            "z^2",
            "z^2 - 2",
            "z^2/3",
            "z^4",
            "(0.5)*z^3 + i*z",
            "(0.1 - 0.7*i)*z^5 + 3*z^2 - i",
            "-0.25*z^2 + 1e-12*z - 1e20",
            "z^2 - 0.221 - 0.713*i",
        ] {
            let p = parse_poly(s).unwrap();
            let q = parse_poly(&p.to_string()).unwrap();
            assert_eq!(p.coeffs(), q.coeffs(), "{s} -> {p}");
        }
    }

    proptest! {
        #[test]
        fn format_round_trip(
            raw in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3, 0u8..4), 2..9)
        ) {
            // mix of reals, imaginaries, zeros and general complex numbers
            let coeffs: Vec<Complex64> = raw
                .iter()
                .map(|&(re, im, kind)| match kind {
                    0 => Complex64::new(re, 0.0),
                    1 => Complex64::new(0.0, im),
                    2 => Complex64::new(0.0, 0.0),
                    _ => Complex64::new(re, im),
                })
                .collect();
            if let Ok(p) = Polynomial::new(coeffs) {
                let q = parse_poly(&p.to_string()).unwrap();
                prop_assert_eq!(p.coeffs(), q.coeffs());
            }
        }
    }
}
