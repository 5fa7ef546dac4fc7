//! Derangement numbers `d_n` and r-derangement numbers `d_{k,r}`.
//!
//! `d_{k,r}` counts derangements of `[k + r]` whose first `r` elements lie in
//! pairwise distinct cycles. Three routes are available: the alternating-sum
//! closed form (`r = 0`), coefficient extraction from
//! `t^r e^(-t) / (1 - t)^(r+1)`, and the pivoted recurrence
//! `d_{k,r} = sum_{j=s}^{k} C(j-1, s-1) k!/(k-j)! d_{k-j, r-s}`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, q, to_int, Int, Rational};
use crate::series::{binpow, TruncatedSeries};

/// Classical derangement number `d_n = n! sum_{i=0}^{n} (-1)^i / i!`.
pub fn derangement(n: usize) -> Int {
    // n!/i! = (i+1)(i+2)...n, accumulated from the top down.
    let mut total = Int::zero();
    let mut tail = Int::one();
    for i in (0..=n).rev() {
        if i % 2 == 0 {
            total += &tail;
        } else {
            total -= &tail;
        }
        tail *= i.max(1);
    }
    total
}

/// Series `t^r e^(-t) / (1 - t)^(r+1)` to the given order.
pub fn r_derangement_series(r: usize, order: usize) -> Result<TruncatedSeries> {
    let shift = TruncatedSeries::monomial(q(1), r, order);
    let decay = binpow(&Rational::zero(), &q(-1), order);
    let pole = TruncatedSeries::from_prefix(vec![q(1), q(-1)], order)
        .inverse()?
        .pow(r as u64 + 1);
    shift.mul(&decay)?.mul(&pole)
}

/// `d_{k,r}` as `k! [t^k]` of its generating function.
pub fn r_derangement_egf(k: usize, r: usize, order: usize) -> Result<Int> {
    if order < k {
        return Err(Error::IndexOutOfRange { index: k, max: order });
    }
    to_int(&r_derangement_series(r, order)?.egf_coeff(k)?)
}

/// Row `d_{0,r} ..= d_{k_max,r}` from one series expansion.
pub fn r_derangement_row(k_max: usize, r: usize) -> Result<Vec<Int>> {
    r_derangement_series(r, k_max)?
        .egf_coeffs()
        .iter()
        .map(to_int)
        .collect()
}

/// `d_{k,r}` from the recurrence pivoted at `s` (`1 <= s <= r`).
///
/// The base row `r = 0` is the classical `d_k`. Inner levels pivot at
/// `min(s, remaining r)`.
pub fn r_derangement_rec(k: usize, r: usize, s: usize) -> Result<Int> {
    if r == 0 {
        return if s == 0 {
            Ok(derangement(k))
        } else {
            Err(Error::InvalidArgument(format!("pivot s={s} needs 1 <= s <= r = 0")))
        };
    }
    if s == 0 || s > r {
        return Err(Error::InvalidArgument(format!("pivot s={s} needs 1 <= s <= r = {r}")));
    }
    let mut memo = HashMap::new();
    Ok(rec_inner(k, r, s, &mut memo))
}

fn rec_inner(k: usize, r: usize, s: usize, memo: &mut HashMap<(usize, usize, usize), Int>) -> Int {
    if r == 0 {
        return derangement(k);
    }
    if let Some(v) = memo.get(&(k, r, s)) {
        return v.clone();
    }
    let rest = r - s;
    let inner_pivot = s.min(rest);
    let kfact = factorial(k);
    let mut total = Int::zero();
    for j in s..=k {
        let weight = binomial(j as i64 - 1, s as i64 - 1) * (&kfact / factorial(k - j));
        total += weight * rec_inner(k - j, rest, inner_pivot, memo);
    }
    memo.insert((k, r, s), total.clone());
    total
}

/// Which way to compute a derangement query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerangementRoute {
    ClosedForm,
    Egf,
    Recurrence,
}

/// A request for `d_{k,r}`, optionally with the recurrence pivot `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerangementQuery {
    pub k: usize,
    pub r: usize,
    pub s: Option<usize>,
}

impl DerangementQuery {
    pub fn new(k: usize, r: usize, s: Option<usize>) -> Result<Self> {
        if let Some(s) = s {
            if s > r {
                return Err(Error::InvalidArgument(format!("pivot s={s} exceeds r={r}")));
            }
        }
        Ok(Self { k, r, s })
    }

    pub fn evaluate(&self, route: DerangementRoute) -> Result<Int> {
        match route {
            DerangementRoute::ClosedForm if self.r == 0 => Ok(derangement(self.k)),
            DerangementRoute::ClosedForm => Err(Error::InvalidArgument("the closed form covers r = 0 only".into())),
            DerangementRoute::Egf => r_derangement_egf(self.k, self.r, self.k),
            DerangementRoute::Recurrence => {
                let s = self.s.unwrap_or(self.r);
                r_derangement_rec(self.k, self.r, s)
            }
        }
    }
}
