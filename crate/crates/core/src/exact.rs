//! Exact scalars and the elementary combinatorial quantities built on them.
//!
//! Every value in the crate is a [`Rational`]: a normalized big-integer
//! fraction with a positive denominator. Integrality is checked where a
//! count leaves the engine, never assumed along the way.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

/// Rational from a machine integer.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(Int::from(v))
}

/// Rational `num/den`; panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

pub fn q_usize(v: usize) -> Rational {
    Rational::from_integer(Int::from(v))
}

/// Parses `"p/q"` or `"p"` into a normalized rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = Int::from_str(num).map_err(|_| bad())?;
    let den = Int::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Returns the integer value if `v` has denominator one.
pub fn to_int(v: &Rational) -> Result<Int> {
    if v.is_integer() {
        Ok(v.numer().clone())
    } else {
        Err(Error::NotIntegral(format_rational(v)))
    }
}

pub fn is_nonneg_integer(v: &Rational) -> bool {
    v.is_integer() && !v.is_negative()
}

pub fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, i| acc * i)
}

/// Binomial coefficient with the product convention
/// `C(n, k) = n (n-1) ... (n-k+1) / k!`, zero for negative `k`.
///
/// This covers negative upper indices too, so `binomial(-1, 0) == 1` and
/// `binomial(-1, k) == (-1)^k`.
pub fn binomial(n: i64, k: i64) -> Int {
    if k < 0 {
        return Int::zero();
    }
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// `n! / (parts[0]! parts[1]! ...)`; the parts must sum to `n`.
pub fn multinomial(n: usize, parts: &[usize]) -> Result<Int> {
    let total: usize = parts.iter().sum();
    if total != n {
        return Err(Error::InvalidArgument(format!(
            "multinomial parts sum to {total}, expected {n}"
        )));
    }
    let mut acc = Int::one();
    let mut seen = 0usize;
    // Product of binomials avoids building n! up front.
    for &p in parts {
        seen += p;
        acc *= binomial(seen as i64, p as i64);
    }
    Ok(acc)
}

/// Generalized falling factorial `(t|alpha)_n = t (t - alpha) ... (t - (n-1) alpha)`.
pub fn gen_falling(t: &Rational, alpha: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = t.clone();
    for _ in 0..n {
        acc *= &term;
        term -= alpha;
    }
    acc
}

/// Ordinary falling factorial `(c)_n`.
pub fn falling(c: &Rational, n: usize) -> Rational {
    gen_falling(c, &Rational::one(), n)
}

/// `a | b` for rationals; zero divides everything (the degenerate limit).
pub fn divides(a: &Rational, b: &Rational) -> bool {
    if a.is_zero() {
        return true;
    }
    (b / a).is_integer()
}

/// The free parameters `(alpha, beta, gamma, x, lambda, r)` of the
/// higher-order deranged Bell generating function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamSet {
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    #[serde(with = "serde_rational")]
    pub x: Rational,
    pub lambda: usize,
    pub r: usize,
}

impl ParamSet {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, x: Rational, lambda: usize, r: usize) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            x,
            lambda,
            r,
        }
    }

    /// Integer shorthand.
    pub fn ints(alpha: i64, beta: i64, gamma: i64, x: i64, lambda: usize, r: usize) -> Self {
        Self::new(q(alpha), q(beta), q(gamma), q(x), lambda, r)
    }

    /// `(alpha, beta, gamma, x, lambda, r) = (0, 1, 0, 1, 1, 0)`: classical deranged Bell.
    pub fn classical() -> Self {
        Self::ints(0, 1, 0, 1, 1, 0)
    }

    pub fn with_lambda(&self, lambda: usize) -> Self {
        Self { lambda, ..self.clone() }
    }

    pub fn with_r(&self, r: usize) -> Self {
        Self { r, ..self.clone() }
    }

    pub fn with_gamma(&self, gamma: Rational) -> Self {
        Self { gamma, ..self.clone() }
    }

    /// True when every parameter admits the counting interpretation:
    /// nonnegative integer `alpha | beta`, `alpha | gamma`, and positive integer `x`.
    pub fn combinatorial_regime(&self) -> bool {
        is_nonneg_integer(&self.alpha)
            && is_nonneg_integer(&self.beta)
            && is_nonneg_integer(&self.gamma)
            && divides(&self.alpha, &self.beta)
            && divides(&self.alpha, &self.gamma)
            && self.x.is_integer()
            && self.x.is_positive()
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} gamma={} x={} lambda={} r={}",
            format_rational(&self.alpha),
            format_rational(&self.beta),
            format_rational(&self.gamma),
            format_rational(&self.x),
            self.lambda,
            self.r
        )
    }
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

pub mod serde_rational_opt {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(D::Error::custom))
            .transpose()
    }
}

/// Greatest common divisor, exposed for tests of normalization.
pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}
