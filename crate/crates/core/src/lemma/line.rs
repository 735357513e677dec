//! Affine dynamics on the log-radius line, in exact rational arithmetic.
//!
//! `t(r) = j r` and `s(r) = m r + c` with `c < 0`; `s` fixes
//! `r0 = -c / (m - 1) > 0`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDynParams {
    j: u32,
    m: u32,
    c: BigRational,
    r0: BigRational,
    rstar_log: BigRational,
}

impl LogDynParams {
    /// `rstar_log` is the right end of the working interval `[-inf, rstar_log)`.
    pub fn new(j: u32, m: u32, c: BigRational, rstar_log: BigRational) -> Result<Self> {
        if j < 2 || m < 2 {
            return Err(Error::InvalidParameter(format!("need j, m >= 2, got j = {j}, m = {m}")));
        }
        if !c.is_negative() {
            return Err(Error::InvalidParameter(format!("need c < 0, got {c}")));
        }
        if !rstar_log.is_negative() {
            return Err(Error::InvalidParameter(format!("need log r* < 0, got {rstar_log}")));
        }
        let r0 = -c.clone() / BigRational::from_integer(BigInt::from(m - 1));
        Ok(LogDynParams {
            j,
            m,
            c,
            r0,
            rstar_log,
        })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn r0(&self) -> &BigRational {
        &self.r0
    }

    pub fn rstar_log(&self) -> &BigRational {
        &self.rstar_log
    }

    fn j_pow(&self, n: u32) -> BigRational {
        int(self.j).pow(n)
    }

    fn m_pow(&self, n: u32) -> BigRational {
        int(self.m).pow(n)
    }
}

fn int(v: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineLetter {
    T,
    S,
    TInv,
    SInv,
}

impl LineLetter {
    fn name(&self) -> &'static str {
        match self {
            LineLetter::T => "t",
            LineLetter::S => "s",
            LineLetter::TInv => "t^-1",
            LineLetter::SInv => "s^-1",
        }
    }

    fn apply(&self, p: &LogDynParams, r: &BigRational) -> BigRational {
        match self {
            LineLetter::T => r * int(p.j),
            LineLetter::S => r * int(p.m) + &p.c,
            LineLetter::TInv => r / int(p.j),
            LineLetter::SInv => (r - &p.c) / int(p.m),
        }
    }

    /// The `n`-th iterate in closed form.
    fn apply_power(&self, p: &LogDynParams, n: u32, r: &BigRational) -> BigRational {
        match self {
            LineLetter::T => r * p.j_pow(n),
            LineLetter::TInv => r / p.j_pow(n),
            LineLetter::S => &p.r0 + (r - &p.r0) * p.m_pow(n),
            LineLetter::SInv => &p.r0 + (r - &p.r0) / p.m_pow(n),
        }
    }
}

/// Runs of letters, listed in the order they are applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LineWord(pub Vec<(LineLetter, u32)>);

impl LineWord {
    /// `t^-n ∘ s^-n ∘ t^n ∘ s^n`.
    pub fn commutator(n: u32) -> Self {
        LineWord(vec![
            (LineLetter::S, n),
            (LineLetter::T, n),
            (LineLetter::SInv, n),
            (LineLetter::TInv, n),
        ])
    }

    /// `s^-n ∘ t^-n ∘ s^n ∘ t^n`, the inverse of [`LineWord::commutator`].
    pub fn reversed_commutator(n: u32) -> Self {
        LineWord(vec![
            (LineLetter::T, n),
            (LineLetter::S, n),
            (LineLetter::TInv, n),
            (LineLetter::SInv, n),
        ])
    }

    pub fn letter_count(&self) -> u64 {
        self.0.iter().map(|&(_, n)| u64::from(n)).sum()
    }

    pub fn letters(&self) -> impl Iterator<Item = LineLetter> + '_ {
        self.0
            .iter()
            .flat_map(|&(l, n)| std::iter::repeat_n(l, n as usize))
    }
}

impl fmt::Display for LineWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // composition notation: the last applied letter is written first
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|&(l, n)| if n == 1 { l.name().to_string() } else { format!("({})^{n}", l.name()) })
            .collect();
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(" ∘ "))
        }
    }
}

/// Evaluates a word using the closed form of each run.
pub fn line_apply(params: &LogDynParams, word: &LineWord, r: &BigRational) -> BigRational {
    word.0
        .iter()
        .fold(r.clone(), |acc, &(l, n)| l.apply_power(params, n, &acc))
}

/// Evaluates a word one letter at a time.
pub fn line_apply_stepwise(params: &LogDynParams, word: &LineWord, r: &BigRational) -> BigRational {
    word.letters().fold(r.clone(), |acc, l| l.apply(params, &acc))
}

/// Letter-by-letter evaluation that fails as soon as a value leaves
/// `[-inf, rstar_log)`. Returns the value and the number of checked steps.
pub fn line_apply_guarded(params: &LogDynParams, word: &LineWord, r: &BigRational) -> Result<(BigRational, u64)> {
    let mut value = r.clone();
    let mut steps = 0u64;
    for (i, l) in word.letters().enumerate() {
        value = l.apply(params, &value);
        steps += 1;
        if value >= params.rstar_log {
            return Err(Error::GuardViolation {
                step: format!("letter {} ({}) of {word}", i + 1, l.name()),
                value: value.to_string(),
                bound: params.rstar_log.to_string(),
            });
        }
    }
    Ok((value, steps))
}

/// `d_n = r0 (m^n + j^n - 1) / (m^n j^n)`.
pub fn d_n_value(params: &LogDynParams, n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidParameter("d_n needs n >= 1".into()));
    }
    let mn = params.m_pow(n);
    let jn = params.j_pow(n);
    Ok(&params.r0 * (&mn + &jn - BigRational::one()) / (mn * jn))
}

/// `t^-n s^-n t^n s^n (r) = r - r0 + d_n`.
pub fn commutator_value(params: &LogDynParams, n: u32, r: &BigRational) -> Result<BigRational> {
    Ok(r - &params.r0 + d_n_value(params, n)?)
}

/// `s^-n t^-n s^n t^n (r) = r + r0 - d_n`.
pub fn reversed_commutator_value(params: &LogDynParams, n: u32, r: &BigRational) -> Result<BigRational> {
    Ok(r + &params.r0 - d_n_value(params, n)?)
}

/// Points produced by the two-stage commutator march towards a seed point.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMarch {
    pub seed: BigRational,
    /// `(n, r'_n)` with `r'_n = r' - r0 + d_n`.
    pub first_stage: Vec<(u32, BigRational)>,
    /// Limit of the first stage, `r' - r0`.
    pub first_limit: BigRational,
    /// `(n, k, r'_n + r0 - d_k)`.
    pub second_stage: Vec<(u32, u32, BigRational)>,
    /// All produced points, sorted and without repeats.
    pub points: Vec<BigRational>,
    /// Letters evaluated under the guard.
    pub guarded_steps: u64,
}

impl DensityMarch {
    /// Distance from the seed to the closest produced point strictly to its
    /// right, if any.
    pub fn right_gap(&self) -> Option<BigRational> {
        self.points.iter().find(|p| **p > self.seed).map(|p| p - &self.seed)
    }

    pub fn left_gap(&self) -> Option<BigRational> {
        self.points.iter().rev().find(|p| **p < self.seed).map(|p| &self.seed - p)
    }

    /// Smallest distance from the seed to a produced point other than itself.
    pub fn gap_around_seed(&self) -> Option<BigRational> {
        match (self.left_gap(), self.right_gap()) {
            (Some(a), Some(b)) => Some(if a < b { a } else { b }),
            (a, b) => a.or(b),
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.points.binary_search(x).is_ok()
    }
}

/// Builds the point sets of the density argument and checks that every
/// intermediate value of every word stays left of `rstar_log`.
///
/// Stage one applies the commutator of order `n <= n_max` to `r'`; stage two
/// applies the reversed commutator of every order `k <= n_max + 1` to each
/// stage-one point. The extra order puts a point of every second-stage run
/// strictly between `r'` and its accumulation point `r' + d_n`, so the seed
/// has a neighbour within `d_(n_max)`. Every word is evaluated letter by
/// letter under the guard and compared with its closed form.
pub fn density_march(params: &LogDynParams, r_prime: &BigRational, n_max: u32) -> Result<DensityMarch> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let limit = &params.rstar_log - &params.r0;
    if *r_prime >= limit {
        return Err(Error::InvalidParameter(format!(
            "seed {r_prime} must lie left of log r* - r0 = {limit}"
        )));
    }
    let mut steps = 0u64;
    let mut first_stage = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let word = LineWord::commutator(n);
        let (value, k) = line_apply_guarded(params, &word, r_prime)?;
        steps += k;
        debug_assert_eq!(value, commutator_value(params, n, r_prime)?);
        if let Some((_, prev)) = first_stage.last() {
            if value >= *prev {
                return Err(Error::GuardViolation {
                    step: format!("first stage n = {n} is not below n = {}", n - 1),
                    value: value.to_string(),
                    bound: prev.to_string(),
                });
            }
        }
        first_stage.push((n, value));
    }
    let mut second_stage = Vec::with_capacity((n_max * (n_max + 1)) as usize);
    for (n, r2) in &first_stage {
        if *r2 >= limit {
            return Err(Error::GuardViolation {
                step: format!("first stage n = {n} left the seed region"),
                value: r2.to_string(),
                bound: limit.to_string(),
            });
        }
        for k in 1..=n_max + 1 {
            let word = LineWord::reversed_commutator(k);
            let (value, c) = line_apply_guarded(params, &word, r2)?;
            steps += c;
            debug_assert_eq!(value, reversed_commutator_value(params, k, r2)?);
            second_stage.push((*n, k, value));
        }
    }
    let mut points: Vec<BigRational> = first_stage
        .iter()
        .map(|(_, v)| v.clone())
        .chain(second_stage.iter().map(|(_, _, v)| v.clone()))
        .collect();
    points.sort();
    points.dedup();
    Ok(DensityMarch {
        seed: r_prime.clone(),
        first_limit: r_prime - &params.r0,
        first_stage,
        second_stage,
        points,
        guarded_steps: steps,
    })
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.125` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let value = BigRational::new(n, BigInt::from(10u32).pow(frac.len() as u32));
        return Ok(if negative { -value } else { value });
    }
    Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?))
}
