//! Generalized Stirling numbers `S(n, k; alpha, beta, gamma)`.
//!
//! These are the connection coefficients
//! `(t|alpha)_n = sum_k S(n, k) (t - gamma|beta)_k`. Two independent routes
//! are provided:
//!
//! * [`StirlingTable`] / [`stirling_rec`]: the triangular recurrence
//!   `S(n+1, k) = S(n, k-1) + (k beta - n alpha + gamma) S(n, k)`, obtained by
//!   multiplying the connection relation by `t - n alpha`;
//! * [`stirling_egf`]: coefficient extraction from
//!   `((1 + alpha t)^(beta/alpha) - 1)^k (1 + alpha t)^(gamma/alpha) / beta^k
//!   = k! sum_n S(n, k) t^n / n!`.
//!
//! The generating-function route is the reference; the recurrence is what
//! the rest of the crate uses because it also covers `beta = 0`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, q_usize, ParamSet, Rational};
use crate::series::{binpow, block_series};

/// Memoized triangle of `S(n, k)` for one `(alpha, beta, gamma)`, rows `0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
    rows: Vec<Vec<Rational>>,
}

impl StirlingTable {
    pub fn new(alpha: &Rational, beta: &Rational, gamma: &Rational, n_max: usize) -> Self {
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![Rational::one()]);
        for n in 0..n_max {
            let prev = &rows[n];
            let shift = gamma - alpha * q_usize(n);
            let mut next = Vec::with_capacity(n + 2);
            for k in 0..=n + 1 {
                let mut v = if k > 0 { prev[k - 1].clone() } else { Rational::zero() };
                if k <= n && !prev[k].is_zero() {
                    v += (beta * q_usize(k) + &shift) * &prev[k];
                }
                next.push(v);
            }
            rows.push(next);
        }
        Self {
            alpha: alpha.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
            rows,
        }
    }

    pub fn for_params(params: &ParamSet, n_max: usize) -> Self {
        Self::new(&params.alpha, &params.beta, &params.gamma, n_max)
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn params(&self) -> (&Rational, &Rational, &Rational) {
        (&self.alpha, &self.beta, &self.gamma)
    }

    /// `S(n, k)`; zero outside the triangle. Panics if `n` is beyond the table.
    pub fn get(&self, n: usize, k: usize) -> Rational {
        assert!(
            n <= self.n_max(),
            "row {n} requested from a table built to {}",
            self.n_max()
        );
        self.rows[n].get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }
}

/// `S(n, k; alpha, beta, gamma)` from the triangular recurrence.
pub fn stirling_rec(n: usize, k: usize, alpha: &Rational, beta: &Rational, gamma: &Rational) -> Rational {
    if k > n {
        return Rational::zero();
    }
    StirlingTable::new(alpha, beta, gamma, n).get(n, k)
}

/// `S(n, k; alpha, beta, gamma)` extracted from its generating function.
///
/// Unavailable for `beta = 0` (the series is divided by `beta^k`).
pub fn stirling_egf(
    n: usize,
    k: usize,
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    order: usize,
) -> Result<Rational> {
    if beta.is_zero() {
        return Err(Error::InvalidArgument(
            "the generating-function route needs beta != 0".into(),
        ));
    }
    if order < n {
        return Err(Error::IndexOutOfRange { index: n, max: order });
    }
    let u = block_series(alpha, beta, order);
    let series = u.pow(k as u64).mul(&binpow(alpha, gamma, order))?;
    let kfact = Rational::from_integer(factorial(k));
    let beta_k = num_traits::pow(beta.clone(), k);
    Ok(series.egf_coeff(n)? / (kfact * beta_k))
}

/// EGF coefficients (`n = 0 ..= order`) of the colored-block generating function
/// `[x u]^(k+r) (1 + alpha t)^(gamma/alpha) / (k+r)!`, which equal
/// `x^(k+r) beta^(k+r) S(n, k+r; alpha, beta, gamma)`.
pub fn colored_block_egf(k: usize, r: usize, params: &ParamSet, order: usize) -> Result<Vec<Rational>> {
    if params.beta.is_zero() {
        return Err(Error::InvalidArgument(
            "colored block generating function needs beta != 0".into(),
        ));
    }
    let m = k + r;
    let xu = block_series(&params.alpha, &params.beta, order).scale(&params.x);
    let series = xu
        .pow(m as u64)
        .mul(&binpow(&params.alpha, &params.gamma, order))?
        .scale(&Rational::from_integer(factorial(m)).recip());
    Ok(series.egf_coeffs())
}
