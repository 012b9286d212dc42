//! Exact scalars: big rationals and the ring of finite sums `Σ rᵢ·π^(kᵢ/2)`.
//!
//! Every exact integral and every entropy argument produced by this crate is an
//! [`ExactScalar`]. The ring is closed under addition and multiplication;
//! division is only defined for monomial divisors, which covers every Gamma
//! ratio and normalization constant that shows up in practice.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Default working precision (bits) for float evaluation.
pub const DEFAULT_PRECISION: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("cannot parse exact scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Shorthand for building a rational from a numerator and denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A positive integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice_value: i64,
}

impl HalfInt {
    pub const fn from_twice(twice_value: i64) -> Self {
        HalfInt { twice_value }
    }

    pub const fn from_int(v: i64) -> Self {
        HalfInt { twice_value: 2 * v }
    }

    pub fn twice_value(self) -> i64 {
        self.twice_value
    }

    pub fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    /// Returns `Some` when `r` is an integer or half-integer.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let twice = r * int(2);
        if twice.is_integer() {
            twice.to_integer().to_i64().map(HalfInt::from_twice)
        } else {
            None
        }
    }

    pub fn to_rational(self) -> Rational {
        ratio(self.twice_value, 2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_value / 2)
        } else {
            write!(f, "{}/2", self.twice_value)
        }
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact Γ(x) for a positive integer or half-integer `x`.
///
/// Integers give `(x−1)!`; half-integers use `Γ(m+½) = (2m)!/(4^m m!)·√π`.
pub fn gamma_exact(x: HalfInt) -> Result<ExactScalar, ExactError> {
    let t = x.twice_value;
    if t < 1 {
        return Err(ExactError::Domain(format!(
            "Gamma is only evaluated at positive (half-)integers, got {x}"
        )));
    }
    if t % 2 == 0 {
        let n = (t / 2 - 1) as u64;
        Ok(ExactScalar::rational(Rational::from_integer(factorial(n))))
    } else {
        let m = ((t - 1) / 2) as u64;
        let num = factorial(2 * m);
        let den = BigInt::from(4u8).pow(m as u32) * factorial(m);
        Ok(ExactScalar::monomial(Rational::new(num, den), 1))
    }
}

/// Γ at a rational argument; the argument must be a positive (half-)integer.
pub fn gamma_of(x: &Rational) -> Result<ExactScalar, ExactError> {
    let h = HalfInt::from_rational(x).ok_or_else(|| {
        ExactError::Domain(format!("Gamma argument {x} is not an integer or half-integer"))
    })?;
    gamma_exact(h)
}

/// Rising factorial `(z)_k = z(z+1)⋯(z+k−1)`, with `(z)_0 = 1`.
pub fn pochhammer(z: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = z.clone();
    for _ in 0..k {
        if factor.is_zero() {
            return Rational::zero();
        }
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

/// An element of `ℚ[√π]` (with inverse powers of π allowed): a finite map from
/// π exponent `k` (meaning `π^(k/2)`) to a nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    terms: BTreeMap<i64, Rational>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar::rational(Rational::one())
    }

    pub fn rational(r: Rational) -> Self {
        ExactScalar::monomial(r, 0)
    }

    pub fn from_int(v: i64) -> Self {
        ExactScalar::rational(int(v))
    }

    /// `coeff · π^(half_exponent/2)`.
    pub fn monomial(coeff: Rational, half_exponent: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(half_exponent, coeff);
        }
        ExactScalar { terms }
    }

    pub fn pi_power(half_exponent: i64) -> Self {
        ExactScalar::monomial(Rational::one(), half_exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// `(coefficient, half_exponent)` when the scalar has exactly one term.
    pub fn as_monomial(&self) -> Option<(&Rational, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, r)| (r, *k))
        } else {
            None
        }
    }

    /// Rational value when the scalar carries no π factor (zero included).
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Terms in ascending π exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, r)| (*k, r))
    }

    pub fn is_positive_monomial(&self) -> bool {
        matches!(self.as_monomial(), Some((r, _)) if r.is_positive())
    }

    fn add_term(&mut self, k: i64, r: Rational) {
        if r.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(k).or_insert_with(Rational::zero);
            *slot += r;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return ExactScalar::zero();
        }
        ExactScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        match self.as_monomial() {
            Some((r, k)) => Ok(ExactScalar::monomial(r.recip(), -k)),
            None if self.is_zero() => Err(ExactError::Arithmetic("division by zero".into())),
            None => Err(ExactError::Arithmetic(format!(
                "cannot invert non-monomial scalar {self}"
            ))),
        }
    }

    pub fn checked_div(&self, divisor: &ExactScalar) -> Result<Self, ExactError> {
        Ok(self * &divisor.inverse()?)
    }

    /// Integer power; negative exponents are only defined for monomials.
    pub fn pow(&self, exponent: i64) -> Result<Self, ExactError> {
        if exponent < 0 {
            return self.inverse()?.pow(-exponent);
        }
        if let Some((r, k)) = self.as_monomial() {
            let e = exponent as i32;
            return Ok(ExactScalar::monomial(num_traits::pow(r.clone(), e as usize), k * exponent));
        }
        let mut result = ExactScalar::one();
        let mut base = self.clone();
        let mut e = exponent as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(result)
    }

    /// Evaluates the scalar with `precision` bits of working precision.
    pub fn to_bigfloat(&self, precision: usize) -> BigFloat {
        let p = precision.max(53);
        let mut cc = Consts::new().expect("astro-float constants cache");
        let sqrt_pi = cc.pi(p + 16, RM).sqrt(p + 16, RM);
        let mut acc = BigFloat::from_u8(0, p + 16);
        for (k, r) in &self.terms {
            let mut term = rational_to_bigfloat(r, p + 16);
            let pk = pow_signed(&sqrt_pi, *k, p + 16);
            term = term.mul(&pk, p + 16, RM);
            acc = acc.add(&term, p + 16, RM);
        }
        let mut out = acc;
        out.set_precision(p, RM).expect("precision change");
        out
    }

    /// Float value rounded to `f64` after evaluation at `precision` bits.
    pub fn to_float(&self, precision: usize) -> f64 {
        bigfloat_to_f64(&self.to_bigfloat(precision))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(DEFAULT_PRECISION)
    }

    /// Natural logarithm of a strictly positive scalar.
    ///
    /// Monomials are handled as `ln r + (k/2)·ln π` so that arguments far
    /// outside the `f64` range still produce accurate logarithms.
    pub fn ln(&self, precision: usize) -> Result<f64, ExactError> {
        let p = precision.max(53) + 16;
        let mut cc = Consts::new().expect("astro-float constants cache");
        if let Some((r, k)) = self.as_monomial() {
            if !r.is_positive() {
                return Err(ExactError::Domain(format!("logarithm of nonpositive {self}")));
            }
            let ln_num = bigint_to_bigfloat(r.numer(), p).ln(p, RM, &mut cc);
            let ln_den = bigint_to_bigfloat(r.denom(), p).ln(p, RM, &mut cc);
            let ln_pi = cc.pi(p, RM).ln(p, RM, &mut cc);
            let half_k = BigFloat::from_i64(k, p).div(&BigFloat::from_u8(2, p), p, RM);
            let v = ln_num.sub(&ln_den, p, RM).add(&half_k.mul(&ln_pi, p, RM), p, RM);
            return Ok(bigfloat_to_f64(&v));
        }
        let v = self.to_bigfloat(p);
        if !v.is_positive() || v.is_zero() {
            return Err(ExactError::Domain(format!("logarithm of nonpositive {self}")));
        }
        Ok(bigfloat_to_f64(&v.ln(p, RM, &mut cc)))
    }
}

fn pow_signed(base: &BigFloat, k: i64, p: usize) -> BigFloat {
    let pos = base.powi(k.unsigned_abs() as usize, p, RM);
    if k < 0 {
        pos.reciprocal(p, RM)
    } else {
        pos
    }
}

fn biguint_to_bigfloat(v: &BigUint, p: usize) -> BigFloat {
    let words = v.to_u64_digits();
    if words.is_empty() {
        return BigFloat::from_u8(0, p);
    }
    let bits = (words.len() * 64) as i32;
    let mut f = BigFloat::from_words(&words, Sign::Pos, bits);
    f.set_precision(p, RM).expect("precision change");
    f
}

fn bigint_to_bigfloat(v: &BigInt, p: usize) -> BigFloat {
    let mut f = biguint_to_bigfloat(v.magnitude(), p);
    if v.is_negative() {
        f.set_sign(Sign::Neg);
    }
    f
}

pub(crate) fn rational_to_bigfloat(r: &Rational, p: usize) -> BigFloat {
    let n = bigint_to_bigfloat(r.numer(), p + 8);
    let d = bigint_to_bigfloat(r.denom(), p + 8);
    n.div(&d, p, RM)
}

/// Rounds a big float to the nearest `f64` (ties on the dropped words ignored).
pub(crate) fn bigfloat_to_f64(v: &BigFloat) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    match v.as_raw_parts() {
        Some((words, _, sign, exponent, _)) => {
            let top = *words.last().expect("nonzero mantissa");
            let mag = (top as f64) * 2f64.powi(exponent - 64);
            if sign == Sign::Neg {
                -mag
            } else {
                mag
            }
        }
        None if v.is_inf_pos() => f64::INFINITY,
        None if v.is_inf_neg() => f64::NEG_INFINITY,
        None => f64::NAN,
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (k, r) in &rhs.terms {
            out.add_term(*k, r.clone());
        }
        out
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            terms: self.terms.into_iter().map(|(k, r)| (k, -r)).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self + &(-rhs.clone())
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = ExactScalar::zero();
        for (ka, ra) in &self.terms {
            for (kb, rb) in &rhs.terms {
                out.add_term(ka + kb, ra * rb);
            }
        }
        out
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        ExactScalar::rational(r)
    }
}

impl std::iter::Product for ExactScalar {
    fn product<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::one(), |acc, x| &acc * &x)
    }
}

fn fmt_pi(k: i64) -> String {
    if k % 2 == 0 {
        match k / 2 {
            1 => "pi".to_string(),
            e if e > 0 => format!("pi^{e}"),
            e => format!("pi^({e})"),
        }
    } else {
        format!("pi^({k}/2)")
    }
}

/// Canonical rendering `r*pi^(k/2)`, terms ordered by ascending π exponent,
/// e.g. `2048/5*pi`, `16/33*pi^2`, `1 - 2*pi^(1/2)`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, r)) in self.terms.iter().enumerate() {
            let mag = r.abs();
            if i == 0 {
                if r.is_negative() {
                    f.write_str("-")?;
                }
            } else if r.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if *k == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{}", fmt_pi(*k))?;
            }
        }
        Ok(())
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> ExactError {
    ExactError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Parses the π exponent suffix after `pi`, returning twice the exponent.
fn parse_pi_exponent(input: &str, rest: &str) -> Result<i64, ExactError> {
    if rest.is_empty() {
        return Ok(2);
    }
    let body = rest
        .strip_prefix('^')
        .ok_or_else(|| parse_err(input, "expected '^' after pi"))?;
    let body = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .unwrap_or(body);
    let e = parse_rational(body).ok_or_else(|| parse_err(input, "bad pi exponent"))?;
    HalfInt::from_rational(&e)
        .map(HalfInt::twice_value)
        .ok_or_else(|| parse_err(input, "pi exponent must be a multiple of 1/2"))
}

fn parse_term(input: &str, term: &str) -> Result<(i64, Rational), ExactError> {
    let term = term.trim();
    if term.is_empty() {
        return Err(parse_err(input, "empty term"));
    }
    let (coeff, pi_part) = match term.find("pi") {
        Some(idx) => {
            let head = term[..idx].trim();
            let coeff = match head.strip_suffix('*') {
                Some(c) => parse_rational(c).ok_or_else(|| parse_err(input, "bad coefficient"))?,
                None if head.is_empty() => Rational::one(),
                None if head == "-" => -Rational::one(),
                None => return Err(parse_err(input, "expected '*' before pi")),
            };
            (coeff, Some(&term[idx + 2..]))
        }
        None => (
            parse_rational(term).ok_or_else(|| parse_err(input, "bad rational"))?,
            None,
        ),
    };
    let k = match pi_part {
        Some(rest) => parse_pi_exponent(input, rest.trim())?,
        None => 0,
    };
    Ok((k, coeff))
}

impl FromStr for ExactScalar {
    type Err = ExactError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s = input.trim();
        if s.is_empty() {
            return Err(parse_err(input, "empty input"));
        }
        // Split on binary " + " / " - " separators; parentheses never contain spaces.
        let mut out = ExactScalar::zero();
        let mut sign = Rational::one();
        let mut rest = s;
        loop {
            let next = [" + ", " - "]
                .iter()
                .filter_map(|sep| rest.find(sep).map(|i| (i, *sep)))
                .min_by_key(|(i, _)| *i);
            let (chunk, tail) = match next {
                Some((i, sep)) => (&rest[..i], Some((&rest[i + 3..], sep))),
                None => (rest, None),
            };
            let (k, r) = parse_term(input, chunk)?;
            out.add_term(k, r * &sign);
            match tail {
                Some((t, sep)) => {
                    sign = if sep == " - " { -Rational::one() } else { Rational::one() };
                    rest = t;
                }
                None => break,
            }
        }
        Ok(out)
    }
}

pub fn is_nonpositive_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}
