//! Higher-order r-deranged Bell numbers `B^{r,x}_{n,lambda}(alpha, beta, gamma)`,
//! the omega polynomials, and every alternative route to them.
//!
//! The defining generating function is
//!
//! ```text
//! (1 + alpha t)^(gamma/alpha) (x u)^(r lambda) exp(-lambda x u) / (1 - x u)^((r+1) lambda),
//! u = (1 + alpha t)^(beta/alpha) - 1,
//! ```
//!
//! and [`bell_egf`] is the reference for `B`. The other routes either
//! provably reduce to it ([`bell_lambda1`], [`bell_convolution`]) or are
//! printed formulas whose agreement is checked by the `verify` module
//! ([`bell_general_closed`] for `lambda >= 2`, the literal product form,
//! the omega identity for `r >= 1`).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::derangements::r_derangement_row;
use crate::error::{Error, Result};
use crate::exact::{
    binomial, factorial, falling, gen_falling, multinomial, q, q_usize, to_int, Int, ParamSet, Rational,
};
use crate::series::{binpow, block_series, TruncatedSeries};
use crate::stirling::StirlingTable;

/// The route a [`BellValue`] was computed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellRoute {
    Egf,
    Lambda1Closed,
    GeneralClosed,
    Convolution,
    ClassicSpecialization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellValue {
    pub n: usize,
    pub params: ParamSet,
    pub value: Rational,
    pub route: BellRoute,
}

/// Building blocks shared by the Bell routes.
struct Pieces {
    gamma_factor: TruncatedSeries,
    xu: TruncatedSeries,
}

impl Pieces {
    fn new(params: &ParamSet, order: usize) -> Self {
        Self {
            gamma_factor: binpow(&params.alpha, &params.gamma, order),
            xu: block_series(&params.alpha, &params.beta, order).scale(&params.x),
        }
    }

    /// `(x u)^(r e) exp(-e x u) / (1 - x u)^((r+1) e)`.
    fn deranged_factor(&self, r: usize, e: usize) -> Result<TruncatedSeries> {
        let order = self.xu.order();
        let head = self.xu.pow((r * e) as u64);
        let decay = self.xu.scale(&-q_usize(e)).exp()?;
        let pole = self
            .xu
            .neg()
            .add_constant(&Rational::one())
            .inverse()?
            .pow(((r + 1) * e) as u64);
        debug_assert_eq!(head.order(), order);
        head.mul(&decay)?.mul(&pole)
    }
}

/// The defining generating function of `B^{r,x}_{n,lambda}` to the given order.
pub fn bell_egf_series(params: &ParamSet, order: usize) -> Result<TruncatedSeries> {
    let pieces = Pieces::new(params, order);
    pieces
        .gamma_factor
        .mul(&pieces.deranged_factor(params.r, params.lambda)?)
}

/// `B_0 ..= B_{n_max}` by coefficient extraction from the defining generating function.
///
/// The series is carried one order past `n_max`.
pub fn bell_egf(n_max: usize, params: &ParamSet) -> Result<Vec<Rational>> {
    let mut coeffs = bell_egf_series(params, n_max + 1)?.egf_coeffs();
    coeffs.truncate(n_max + 1);
    Ok(coeffs)
}

/// Shared tables for the closed-sum routes at one parameter point.
pub struct BellSums {
    params: ParamSet,
    stirling: StirlingTable,
    derangements: Vec<Int>,
}

impl BellSums {
    pub fn new(params: &ParamSet, n_max: usize) -> Result<Self> {
        Ok(Self {
            params: params.clone(),
            stirling: StirlingTable::for_params(params, n_max),
            derangements: r_derangement_row(n_max, params.r)?,
        })
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.stirling.n_max() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.stirling.n_max(),
            });
        }
        Ok(())
    }

    /// `sum_k weight(k) d_{k,r} x^k beta^k S(n, k)`.
    fn weighted(&self, n: usize, weight: impl Fn(usize) -> Int) -> Result<Rational> {
        self.check(n)?;
        let xb = &self.params.x * &self.params.beta;
        let mut power = Rational::one();
        let mut total = Rational::zero();
        for k in 0..=n {
            if k > 0 {
                power *= &xb;
            }
            let w = weight(k);
            if w.is_zero() || self.derangements[k].is_zero() {
                continue;
            }
            let coeff = Rational::from_integer(w * &self.derangements[k]);
            total += coeff * &power * self.stirling.get(n, k);
        }
        Ok(total)
    }

    /// The `lambda = 1` closed sum `sum_k d_{k,r} x^k beta^k S(n, k)`.
    pub fn lambda1(&self, n: usize) -> Result<Rational> {
        self.weighted(n, |_| Int::one())
    }

    /// The bar-insertion sum `sum_k C(k+r+lambda-1, k+r) d_{k,r} x^k beta^k S(n, k)`.
    pub fn general_closed(&self, n: usize) -> Result<Rational> {
        let (r, lambda) = (self.params.r as i64, self.params.lambda as i64);
        self.weighted(n, |k| {
            let k = k as i64;
            binomial(k + r + lambda - 1, k + r)
        })
    }
}

/// `B^{r,x}_{n,1}` from the closed sum over `k`.
pub fn bell_lambda1(n: usize, params: &ParamSet) -> Result<Rational> {
    if params.lambda != 1 {
        return Err(Error::InvalidArgument(format!(
            "lambda-one closed form called with lambda = {}",
            params.lambda
        )));
    }
    BellSums::new(params, n)?.lambda1(n)
}

/// The bar-insertion closed sum at arbitrary `lambda`.
pub fn bell_general_closed(n: usize, params: &ParamSet) -> Result<Rational> {
    BellSums::new(params, n)?.general_closed(n)
}

/// Calls `visit` with every composition of `total` into `parts` nonnegative parts.
pub fn for_each_composition(total: usize, parts: usize, mut visit: impl FnMut(&[usize])) {
    fn go(rest: usize, slots: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if slots == 1 {
            buf.push(rest);
            visit(buf);
            buf.pop();
            return;
        }
        for first in 0..=rest {
            buf.push(first);
            go(rest - first, slots - 1, buf, visit);
            buf.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    let mut buf = Vec::with_capacity(parts);
    go(total, parts, &mut buf, &mut visit);
}

/// Convolution over compositions `i_1 + ... + i_{lambda+1} = total`:
/// `sum multinomial(total; i) (gamma|alpha)_{i_{lambda+1}} prod_s B^{r,x}_{i_s,1}(alpha, beta, 0)`.
///
/// The section counts come from the `lambda = 1` closed sum.
pub fn bell_convolution_over(total: usize, params: &ParamSet) -> Result<Rational> {
    if params.lambda == 0 {
        return Err(Error::InvalidArgument("convolution needs lambda >= 1".into()));
    }
    let sections = BellSums::new(&params.with_gamma(Rational::zero()), total)?;
    let section: Vec<Rational> = (0..=total).map(|i| sections.lambda1(i)).collect::<Result<_>>()?;
    let tail: Vec<Rational> = (0..=total)
        .map(|i| gen_falling(&params.gamma, &params.alpha, i))
        .collect();

    let mut sum = Rational::zero();
    let mut failure = None;
    for_each_composition(total, params.lambda + 1, |parts| {
        if failure.is_some() {
            return;
        }
        let (last, head) = parts.split_last().expect("lambda + 1 >= 2 parts");
        let mut term = tail[*last].clone();
        for &i in head {
            if term.is_zero() {
                break;
            }
            term *= &section[i];
        }
        if term.is_zero() {
            return;
        }
        match multinomial(total, parts) {
            Ok(m) => sum += term * Rational::from_integer(m),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(sum),
    }
}

/// `B^{r,x}_{n,lambda}` by section convolution over compositions of `n`.
pub fn bell_convolution(n: usize, params: &ParamSet) -> Result<Rational> {
    bell_convolution_over(n, params)
}

/// Classical r-deranged Bell number `sum_i d_{i,r} S_r(n+r, i+r)` with the
/// r-Stirling numbers `S_r(n+r, i+r) = S(n, i; 0, 1, r)`.
pub fn deranged_bell_classic(n: usize, r: usize) -> Result<Int> {
    let table = StirlingTable::new(&Rational::zero(), &q(1), &q_usize(r), n);
    let d = r_derangement_row(n, r)?;
    let total: Rational = (0..=n)
        .map(|i| Rational::from_integer(d[i].clone()) * table.get(n, i))
        .sum();
    to_int(&total)
}

/// The same sum with ordinary Stirling numbers `S(n+r, i+r)` in place of the
/// r-Stirling ones. Agrees with [`deranged_bell_classic`] only for `r <= 1`.
pub fn deranged_bell_ordinary_stirling(n: usize, r: usize) -> Result<Int> {
    let table = StirlingTable::new(&Rational::zero(), &q(1), &Rational::zero(), n + r);
    let d = r_derangement_row(n, r)?;
    let total: Rational = (0..=n)
        .map(|i| Rational::from_integer(d[i].clone()) * table.get(n + r, i + r))
        .sum();
    to_int(&total)
}

/// Computes `B^{r,x}_{n,lambda}` by the requested route.
pub fn bell_value(n: usize, params: &ParamSet, route: BellRoute) -> Result<BellValue> {
    let value = match route {
        BellRoute::Egf => bell_egf(n, params)?.swap_remove(n),
        BellRoute::Lambda1Closed => bell_lambda1(n, params)?,
        BellRoute::GeneralClosed => bell_general_closed(n, params)?,
        BellRoute::Convolution => bell_convolution(n, params)?,
        BellRoute::ClassicSpecialization => {
            let expected = ParamSet::new(Rational::zero(), q(1), q_usize(params.r), q(1), 1, params.r);
            if *params != expected {
                return Err(Error::InvalidArgument(format!(
                    "classic specialization needs alpha=0 beta=1 gamma=r x=1 lambda=1, got {params}"
                )));
            }
            Rational::from_integer(deranged_bell_classic(n, params.r)?)
        }
    };
    Ok(BellValue {
        n,
        params: params.clone(),
        value,
        route,
    })
}

/// Omega polynomial value from the weighted Stirling sum
/// `sum_k C(k+lambda-1, k) x^k k! beta^k S(n, k)`.
pub fn omega(n: usize, params: &ParamSet) -> Rational {
    let table = StirlingTable::for_params(params, n);
    omega_from_table(n, params, &table)
}

fn omega_from_table(n: usize, params: &ParamSet, table: &StirlingTable) -> Rational {
    let xb = &params.x * &params.beta;
    let lambda = params.lambda as i64;
    let mut power = Rational::one();
    let mut total = Rational::zero();
    for k in 0..=n {
        if k > 0 {
            power *= &xb;
        }
        let w = binomial(k as i64 + lambda - 1, k as i64) * factorial(k);
        if w.is_zero() {
            continue;
        }
        total += Rational::from_integer(w) * &power * table.get(n, k);
    }
    total
}

/// Omega values `0 ..= n_max` from `(1 + alpha t)^(gamma/alpha) / (1 - x u)^lambda`.
pub fn omega_egf(n_max: usize, params: &ParamSet) -> Result<Vec<Rational>> {
    let order = n_max + 1;
    let pieces = Pieces::new(params, order);
    let pole = pieces
        .xu
        .neg()
        .add_constant(&Rational::one())
        .inverse()?
        .pow(params.lambda as u64);
    let mut coeffs = pieces.gamma_factor.mul(&pole)?.egf_coeffs();
    coeffs.truncate(n_max + 1);
    Ok(coeffs)
}

/// Both sides of the fixed-block decomposition
/// `omega_{n+r} = sum_i C(n+r, i) B^{r,x}_{i,lambda} sum_l beta^l S(n+r-i, l; alpha, beta, 0) x^l lambda^l`.
///
/// Equality is not asserted here.
pub fn omega_identity_check(n: usize, params: &ParamSet) -> Result<(Rational, Rational)> {
    let m = n + params.r;
    let lhs = omega(m, params);
    let bell = bell_egf(m, params)?;
    let fixed = StirlingTable::new(&params.alpha, &params.beta, &Rational::zero(), m);
    let step = &params.beta * &params.x * q_usize(params.lambda);
    let fixed_weight: Vec<Rational> = (0..=m)
        .map(|len| {
            let mut power = Rational::one();
            let mut acc = Rational::zero();
            for l in 0..=len {
                if l > 0 {
                    power *= &step;
                }
                acc += &power * fixed.get(len, l);
            }
            acc
        })
        .collect();
    let rhs = (0..=m)
        .map(|i| Rational::from_integer(binomial(m as i64, i as i64)) * &bell[i] * &fixed_weight[m - i])
        .sum();
    Ok((lhs, rhs))
}

/// One coefficient of the product-form comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFormRow {
    pub n: usize,
    /// From the defining generating function.
    pub egf: Rational,
    /// From the product `prod_{i=1}^{lambda}` with per-factor exponents `r i`, `-i`, `(r+1) i`.
    pub literal: Rational,
    /// From the `lambda`-th power of the `lambda = 1` factor.
    pub power: Rational,
}

/// Compares the two readings of the `lambda + 1`-fold product form against [`bell_egf`].
pub fn product_form_check(n_max: usize, params: &ParamSet) -> Result<Vec<ProductFormRow>> {
    if params.lambda == 0 {
        return Err(Error::InvalidArgument("product form needs lambda >= 1".into()));
    }
    let order = n_max + 1;
    let pieces = Pieces::new(params, order);
    let mut literal = pieces.gamma_factor.clone();
    for i in 1..=params.lambda {
        literal = literal.mul(&pieces.deranged_factor(params.r, i)?)?;
    }
    let power = pieces
        .gamma_factor
        .mul(&pieces.deranged_factor(params.r, 1)?.pow(params.lambda as u64))?;
    let egf = bell_egf(n_max, params)?;
    let literal = literal.egf_coeffs();
    let power = power.egf_coeffs();
    Ok((0..=n_max)
        .map(|n| ProductFormRow {
            n,
            egf: egf[n].clone(),
            literal: literal[n].clone(),
            power: power[n].clone(),
        })
        .collect())
}

/// The three worked polynomial values quoted for `B^{r,x}_{n,lambda}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WorkedExample {
    /// `B^{1,x}_{2,lambda} = lambda^2 x^2 beta^2 + lambda x^2 beta^2`
    B1x2,
    /// `B^{2,x}_{4,lambda} = (lambda^4/2 - lambda^3/2 + 2 lambda^3 + lambda^2/2 - 3 lambda) x^4 beta^4`
    B2x4,
    /// `B^{2,x}_{6,lambda} = C(lambda+5, 6) (6)_3 x^6 beta^6`
    B2x6,
}

impl WorkedExample {
    pub const ALL: [WorkedExample; 3] = [Self::B1x2, Self::B2x4, Self::B2x6];

    pub fn n(self) -> usize {
        match self {
            Self::B1x2 => 2,
            Self::B2x4 => 4,
            Self::B2x6 => 6,
        }
    }

    pub fn r(self) -> usize {
        match self {
            Self::B1x2 => 1,
            Self::B2x4 | Self::B2x6 => 2,
        }
    }

    /// The quoted polynomial evaluated at `params` (`alpha`, `gamma`, `r` do not enter).
    pub fn quoted_value(self, params: &ParamSet) -> Rational {
        let l = q_usize(params.lambda);
        let xb = &params.x * &params.beta;
        let pow = |v: &Rational, e: usize| num_traits::pow(v.clone(), e);
        match self {
            Self::B1x2 => (pow(&l, 2) + &l) * pow(&xb, 2),
            Self::B2x4 => {
                let half = Rational::new(1.into(), 2.into());
                let poly = &half * pow(&l, 4) - &half * pow(&l, 3) + q(2) * pow(&l, 3) + &half * pow(&l, 2) - q(3) * &l;
                poly * pow(&xb, 4)
            }
            Self::B2x6 => {
                let c = Rational::from_integer(binomial(params.lambda as i64 + 5, 6));
                c * falling(&q(6), 3) * pow(&xb, 6)
            }
        }
    }
}
