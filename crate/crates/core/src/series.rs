//! Truncated formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `t^0 ..= t^N`; everything above is dropped. Binary operations require
//! equal orders. `exp` and `log` use the quadratic differential recurrences,
//! which is plenty for the index ranges this crate works at.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, q_usize, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Builds a series from coefficients `c_0 ..= c_N`. The vector must be non-empty.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::SeriesPrecondition("a series needs at least one coefficient"));
        }
        Ok(Self { coeffs })
    }

    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn from_prefix(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// `c t^degree`, or the zero series if the degree is past the order.
    pub fn monomial(c: Rational, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Index of the first nonzero coefficient; `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_prefix(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Adds a constant to the `t^0` coefficient.
    pub fn add_constant(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::NonInvertible);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                acc += &self.coeffs[k] * &out[m - k];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// Formal derivative; the result has order `N - 1` (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c * q_usize(i + 1))
            .collect();
        Self { coeffs }
    }

    /// Formal exponential; requires a zero constant term.
    ///
    /// With `b = exp(a)`, `b' = a' b` gives `m b_m = sum_{k=1}^{m} k a_k b_{m-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::SeriesPrecondition("exp needs a zero constant term"));
        }
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(Rational::one());
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * q_usize(k) * &out[m - k];
                }
            }
            out.push(acc / q_usize(m));
        }
        Ok(Self { coeffs: out })
    }

    /// Formal logarithm; requires constant term one.
    ///
    /// With `b = log(a)`, `a b' = a'` gives
    /// `m b_m = m a_m - sum_{k=1}^{m-1} k b_k a_{m-k}`.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::SeriesPrecondition("log needs constant term 1"));
        }
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(Rational::zero());
        for m in 1..=n {
            let mut acc = &self.coeffs[m] * q_usize(m);
            for k in 1..m {
                if !out[k].is_zero() {
                    acc -= &out[k] * q_usize(k) * &self.coeffs[m - k];
                }
            }
            out.push(acc / q_usize(m));
        }
        Ok(Self { coeffs: out })
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let order = self.order();
        match self.valuation() {
            None => return if e == 0 { Self::one(order) } else { Self::zero(order) },
            Some(v) if v > 0 && (v as u128) * (e as u128) > order as u128 => return Self::zero(order),
            _ => {}
        }
        let mut base = self.clone();
        let mut acc = Self::one(order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `self^c` for rational `c`, defined through `exp(c log self)`; needs constant term one.
    pub fn pow_rational(&self, c: &Rational) -> Result<Self> {
        self.log()?.scale(c).exp()
    }

    /// `n! [t^n]`: the coefficient read as an exponential generating function.
    pub fn egf_coeff(&self, n: usize) -> Result<Rational> {
        let c = self.coeffs.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            max: self.order(),
        })?;
        Ok(c * Rational::from_integer(factorial(n)))
    }

    /// All EGF coefficients `n! [t^n]` for `n = 0 ..= N`.
    pub fn egf_coeffs(&self) -> Vec<Rational> {
        let mut fact = Rational::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact *= q_usize(n);
                }
                c * &fact
            })
            .collect()
    }
}

/// Series of `(1 + alpha t)^(c / alpha)` to the given order.
///
/// For `alpha = 0` this is the exponential limit `e^(c t)`.
pub fn binpow(alpha: &Rational, c: &Rational, order: usize) -> TruncatedSeries {
    if alpha.is_zero() {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Rational::one();
        coeffs.push(term.clone());
        for n in 1..=order {
            term = term * c / q_usize(n);
            coeffs.push(term.clone());
        }
        return TruncatedSeries { coeffs };
    }
    // log(1 + alpha t) = sum_{n>=1} (-1)^(n+1) alpha^n t^n / n
    let mut log_coeffs = vec![Rational::zero(); order + 1];
    let mut power = Rational::one();
    for (n, slot) in log_coeffs.iter_mut().enumerate().skip(1) {
        power *= alpha;
        let term = &power / q_usize(n);
        *slot = if n % 2 == 1 { term } else { -term };
    }
    TruncatedSeries { coeffs: log_coeffs }
        .scale(&(c / alpha))
        .exp()
        .expect("log(1 + alpha t) has zero constant term")
}

/// `u = (1 + alpha t)^(beta / alpha) - 1`, the block series shared by every
/// generating function in the crate.
pub fn block_series(alpha: &Rational, beta: &Rational, order: usize) -> TruncatedSeries {
    binpow(alpha, beta, order).add_constant(&-Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, gen_falling, q};
    use proptest::prelude::*;

    fn s(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(v.iter().map(|&x| q(x)).collect()).unwrap()
    }

    #[test]
    fn ring_examples() {
        let a = s(&[1, 1, 0, 0]);
        let b = s(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b).unwrap(), s(&[1, 0, -1, 0]));
        let r = s(&[3, 1, 4, 1]);
        assert_eq!(r.mul(&TruncatedSeries::one(3)).unwrap(), r);
        assert!(r.scale(&q(0)).is_zero());
        assert_eq!(a.add(&s(&[1, 2])), Err(Error::OrderMismatch { left: 3, right: 1 }));
    }

    #[test]
    fn inverse_examples() {
        let geo = s(&[1, -1, 0, 0, 0, 0]).inverse().unwrap();
        assert_eq!(geo, s(&[1, 1, 1, 1, 1, 1]));
        assert_eq!(TruncatedSeries::one(4).inverse().unwrap(), TruncatedSeries::one(4));
        assert_eq!(s(&[0, 1, 2]).inverse(), Err(Error::NonInvertible));
    }

    #[test]
    fn exp_log_examples() {
        assert_eq!(TruncatedSeries::zero(5).exp().unwrap(), TruncatedSeries::one(5));
        let geo = s(&[1, -1, 0, 0, 0, 0]).inverse().unwrap();
        let log = geo.log().unwrap();
        let expected: Vec<Rational> = (0..=5).map(|n| if n == 0 { q(0) } else { frac(1, n as i64) }).collect();
        assert_eq!(log.coeffs(), expected.as_slice());
        assert!(s(&[1, 1]).exp().is_err());
        assert!(s(&[2, 1]).log().is_err());
    }

    #[test]
    fn binpow_examples() {
        assert_eq!(binpow(&q(2), &q(2), 6), s(&[1, 2, 0, 0, 0, 0, 0]));
        assert_eq!(binpow(&q(1), &q(2), 4), s(&[1, 2, 1, 0, 0]));
        let e = binpow(&q(0), &q(1), 7);
        for n in 0..=7 {
            assert_eq!(e.egf_coeff(n).unwrap(), q(1));
        }
    }

    #[test]
    fn egf_coeff_examples() {
        let geo = s(&[1, -1, 0, 0, 0, 0, 0]).inverse().unwrap();
        for n in 0..=6 {
            assert_eq!(geo.egf_coeff(n).unwrap(), Rational::from_integer(factorial(n)));
        }
        assert_eq!(s(&[1, 2]).egf_coeff(1).unwrap(), q(2));
        assert_eq!(
            s(&[1, 2]).egf_coeff(2),
            Err(Error::IndexOutOfRange { index: 2, max: 1 })
        );
        assert_eq!(geo.egf_coeffs()[4], q(24));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let a = s(&[2, -1, 3, 0, 5, 1]);
        let mut acc = TruncatedSeries::one(5);
        for e in 0..6u64 {
            assert_eq!(a.pow(e), acc);
            acc = acc.mul(&a).unwrap();
        }
        // valuation shortcut
        assert!(s(&[0, 0, 1, 0, 0]).pow(3).is_zero());
        assert_eq!(TruncatedSeries::zero(3).pow(0), TruncatedSeries::one(3));
    }

    #[test]
    fn binpow_closed_form() {
        // (1 + a t)^(c/a) = sum (c|a)_n t^n / n!
        for (a, c) in [(frac(1, 2), q(3)), (q(-2), frac(5, 3)), (q(3), q(-1))] {
            let series = binpow(&a, &c, 8);
            for n in 0..=8 {
                assert_eq!(series.egf_coeff(n).unwrap(), gen_falling(&c, &a, n));
            }
        }
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-9i64..10, 1i64..5).prop_map(|(n, d)| frac(n, d))
    }

    fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(rational(), order + 1).prop_map(|c| TruncatedSeries::from_coeffs(c).unwrap())
    }

    fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        series(order).prop_map(|s| {
            let mut c = s.into_coeffs();
            c[0] = Rational::one();
            TruncatedSeries::from_coeffs(c).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn binpow_is_additive_in_exponent(alpha in prop_oneof![Just(q(0)), rational()],
                                          c1 in rational(), c2 in rational()) {
            let lhs = binpow(&alpha, &c1, 7).mul(&binpow(&alpha, &c2, 7)).unwrap();
            prop_assert_eq!(lhs, binpow(&alpha, &(&c1 + &c2), 7));
        }

        #[test]
        fn binpow_solves_its_ode(alpha in prop_oneof![Just(q(0)), rational()], c in rational()) {
            let order = 7;
            let f = binpow(&alpha, &c, order);
            let df = f.derivative();
            let lin = TruncatedSeries::from_prefix(vec![q(1), alpha.clone()], order - 1);
            let lhs = lin.mul(&df).unwrap();
            prop_assert_eq!(lhs, f.scale(&c).truncate(order - 1));
        }

        #[test]
        fn mul_commutes_and_associates(a in series(6), b in series(6), c in series(6)) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_round_trip(a in unit_series(6)) {
            let inv = a.inverse().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), TruncatedSeries::one(6));
            prop_assert_eq!(inv.inverse().unwrap(), a);
        }

        #[test]
        fn exp_inverts_log(a in unit_series(6)) {
            prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
        }
    }
}
