//! Hsu's power-series expansion for coefficients of large powers of a
//! series, the partition-indexed coefficients `W(n, f)`, and the large-`lambda`
//! estimate of `B^{r,x}_{n,lambda}` built from them.
//!
//! For `Omega(t) = 1 + b_1 t + b_2 t^2 + ...` the expansion reads
//! `[t^n] Omega^delta / (delta)_n ~ sum_{f<=m} W(n, f) / (delta - n + f)_f`
//! with `W(n, f) = sum over partitions of n into n - f parts of prod b_i^{k_i} / k_i!`.
//! Everything here is exact; nothing is evaluated in floating point.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bell::bell_egf;
use crate::error::{Error, Result};
use crate::exact::{factorial, falling, q_usize, ParamSet, Rational};
use crate::series::TruncatedSeries;

/// A partition of `n` stored by multiplicities: `mult[i - 1]` copies of part `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPartition {
    mult: Vec<usize>,
}

impl IntPartition {
    /// Builds from multiplicities `k_1, k_2, ...`.
    pub fn from_multiplicities(mult: Vec<usize>) -> Self {
        Self { mult }
    }

    fn from_parts(n: usize, parts: &[usize]) -> Self {
        let mut mult = vec![0; n];
        for &p in parts {
            mult[p - 1] += 1;
        }
        Self { mult }
    }

    /// `sum_i i k_i`.
    pub fn n(&self) -> usize {
        self.mult.iter().enumerate().map(|(i, k)| (i + 1) * k).sum()
    }

    /// `sum_i k_i`.
    pub fn parts(&self) -> usize {
        self.mult.iter().sum()
    }

    /// `k_i`, zero past the stored range.
    pub fn multiplicity(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.mult.get(i - 1).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mult
    }
}

impl fmt::Display for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (1..=self.mult.len()).rev() {
            for _ in 0..self.mult[i - 1] {
                if !first {
                    f.write_str("+")?;
                }
                first = false;
                write!(f, "{i}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// All partitions of `n` into exactly `k` parts, parts non-increasing,
/// in reverse lexicographic order.
pub fn partitions_with_parts(n: usize, k: usize) -> Vec<IntPartition> {
    fn go(rest: usize, slots: usize, max: usize, buf: &mut Vec<usize>, n: usize, out: &mut Vec<IntPartition>) {
        if slots == 0 {
            if rest == 0 {
                out.push(IntPartition::from_parts(n, buf));
            }
            return;
        }
        // each remaining slot needs at least 1, and at most `max`
        if rest < slots || rest > slots * max {
            return;
        }
        for p in (1..=max.min(rest - (slots - 1))).rev() {
            buf.push(p);
            go(rest - p, slots - 1, p, buf, n, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    if k > n || (k == 0 && n > 0) {
        return out;
    }
    go(n, k, n.max(1), &mut Vec::with_capacity(k), n, &mut out);
    out
}

/// Coefficients of `Omega(t)`; `b_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSequence {
    b: Vec<Rational>,
}

impl BaseSequence {
    pub fn new(b: Vec<Rational>) -> Result<Self> {
        if b.first() != Some(&Rational::one()) {
            return Err(Error::InvalidArgument("base sequence needs b_0 = 1".into()));
        }
        Ok(Self { b })
    }

    /// `Omega = 1/(1 - t)`, all `b_i = 1`.
    pub fn geometric(len: usize) -> Self {
        Self {
            b: vec![Rational::one(); len.max(1)],
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.b
    }

    /// `[t^n] Omega^delta`, by series exponentiation.
    pub fn power_coeff(&self, delta: &Rational, n: usize) -> Result<Rational> {
        if n >= self.b.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.b.len() - 1,
            });
        }
        let omega = TruncatedSeries::from_prefix(self.b[..=n].to_vec(), n);
        Ok(omega.pow_rational(delta)?.coeffs()[n].clone())
    }
}

fn check_f(n: usize, f: usize) -> Result<()> {
    if f >= n {
        return Err(Error::InvalidArgument(format!(
            "W(n, f) needs 0 <= f <= n - 1, got n={n} f={f}"
        )));
    }
    Ok(())
}

/// `W(n, f)` from coefficients `b[1..=n]` (`b[0]` is not read).
pub fn w_from_base(b: &[Rational], n: usize, f: usize) -> Result<Rational> {
    check_f(n, f)?;
    if b.len() <= n {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: b.len().saturating_sub(1),
        });
    }
    let mut total = Rational::zero();
    for part in partitions_with_parts(n, n - f) {
        let mut term = Rational::one();
        for (idx, &k) in part.multiplicities().iter().enumerate() {
            if k == 0 {
                continue;
            }
            term *= num_traits::pow(b[idx + 1].clone(), k);
            term /= Rational::from_integer(factorial(k));
            if term.is_zero() {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// `b_i = B^{r,x}_{i,1}(alpha, beta, gamma) / i!` for `i = 0 ..= n`.
pub fn bell_base(n: usize, params: &ParamSet) -> Result<Vec<Rational>> {
    let bell = bell_egf(n, &params.with_lambda(1))?;
    Ok(bell
        .into_iter()
        .enumerate()
        .map(|(i, v)| v / Rational::from_integer(factorial(i)))
        .collect())
}

/// `W(n, f)` over partitions of `n` with `n - f` parts, with `b_i` taken from
/// the `lambda = 1` Bell numbers at `params` (`params.lambda` is ignored).
pub fn w_coefficient(n: usize, f: usize, params: &ParamSet) -> Result<Rational> {
    check_f(n, f)?;
    w_from_base(&bell_base(n, params)?, n, f)
}

/// One printed term: `1/(extra! (n - shift)!) b_1^(n - shift) prod value^power`.
/// Zero when `n < shift`.
fn printed_term(n: usize, extra: usize, shift: usize, b1: &Rational, factors: &[(&Rational, usize)]) -> Rational {
    if n < shift {
        return Rational::zero();
    }
    let e = n - shift;
    let mut v = num_traits::pow(b1.clone(), e) / Rational::from_integer(factorial(extra) * factorial(e));
    for (value, power) in factors {
        v *= num_traits::pow((*value).clone(), *power);
    }
    v
}

/// The explicit displays for `W(n, f)`, `f <= 5`, evaluated term by term as
/// printed. The `f = 4` and `f = 5` displays differ from the partition sum
/// (see the notes on each term).
pub fn w_explicit(n: usize, f: usize, params: &ParamSet) -> Result<Rational> {
    w_explicit_from_base(&bell_base(n.max(6), params)?, n, f)
}

/// [`w_explicit`] from precomputed `b_i`; `b` must reach index `max(n, 6)`.
pub fn w_explicit_from_base(b: &[Rational], n: usize, f: usize) -> Result<Rational> {
    if f > 5 {
        return Err(Error::InvalidArgument(format!(
            "explicit displays stop at f = 5, got {f}"
        )));
    }
    check_f(n, f)?;
    if b.len() <= n.max(6) {
        return Err(Error::IndexOutOfRange {
            index: n.max(6),
            max: b.len().saturating_sub(1),
        });
    }
    let t = |extra, shift, factors: &[(&Rational, usize)]| printed_term(n, extra, shift, &b[1], factors);
    // b_1 again, but over 3! instead of 1!
    let b1_over_6 = &b[1] / Rational::from_integer(factorial(3));
    let v = match f {
        0 => t(0, 0, &[]),
        1 => t(0, 2, &[(&b[2], 1)]),
        2 => t(0, 3, &[(&b[3], 1)]) + t(2, 4, &[(&b[2], 2)]),
        3 => t(0, 4, &[(&b[4], 1)]) + t(0, 5, &[(&b[2], 1), (&b[3], 1)]) + t(3, 6, &[(&b[2], 3)]),
        4 => {
            t(0, 5, &[(&b[5], 1)])
                + t(2, 6, &[(&b[3], 2)])
                // printed with B_{1,1}/3! where the partition sum has b_3
                + t(2, 7, &[(&b[2], 2), (&b1_over_6, 1)])
                + t(4, 8, &[(&b[2], 4)])
                // printed with an extra 1/2!
                + t(2, 6, &[(&b[2], 1), (&b[4], 1)])
        }
        _ => {
            t(0, 6, &[(&b[6], 1)])
                + t(0, 7, &[(&b[2], 1), (&b[5], 1)])
                + t(0, 7, &[(&b[4], 1), (&b[3], 1)])
                // printed without the b_4 factor
                + t(2, 8, &[(&b[2], 2)])
                + t(2, 8, &[(&b[2], 1), (&b[3], 2)])
                + t(3, 9, &[(&b[2], 3), (&b[3], 1)])
                + t(5, 10, &[(&b[2], 5)])
        }
    };
    Ok(v)
}

/// `sum_{f=0}^{m} W(n, f) / (delta - n + f)_f`.
pub fn hsu_expansion(base: &BaseSequence, delta: &Rational, n: usize, m: usize) -> Result<Rational> {
    if n == 0 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "expansion needs m <= n - 1, got n={n} m={m}"
        )));
    }
    let mut total = Rational::zero();
    for f in 0..=m {
        let den = falling(&(delta - q_usize(n) + q_usize(f)), f);
        if den.is_zero() {
            return Err(Error::ZeroDenominator(format!(
                "(delta - n + f)_f vanishes at delta={delta} n={n} f={f}"
            )));
        }
        total += w_from_base(base.coeffs(), n, f)? / den;
    }
    Ok(total)
}

/// `[t^n] Omega^delta / (delta)_n`, the quantity the expansion approximates.
pub fn hsu_target(base: &BaseSequence, delta: &Rational, n: usize) -> Result<Rational> {
    let den = falling(delta, n);
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!(
            "(delta)_n vanishes at delta={delta} n={n}"
        )));
    }
    Ok(base.power_coeff(delta, n)? / den)
}

/// Whether a relative error could be formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EstimateStatus {
    Ok,
    ExactZero,
}

/// One row of the large-`lambda` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticEstimate {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    #[serde(with = "crate::exact::serde_rational")]
    pub estimate: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub exact: Rational,
    #[serde(with = "crate::exact::serde_rational_opt")]
    pub rel_error: Option<Rational>,
    pub status: EstimateStatus,
}

/// Compares `sum_{f<=m} (delta)_{n-f} W(n, f)` with
/// `B^{r,x}_{n,delta}(alpha, beta, gamma delta) / n!`.
///
/// `delta` plays the role of `lambda` and must be at least `n`. Only `r = 0`
/// satisfies `b_0 = 1`; other `r` give diagnostic numbers.
pub fn bell_asymptotic_estimate(n: usize, m: usize, delta: usize, params: &ParamSet) -> Result<AsymptoticEstimate> {
    if n == 0 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "estimate needs m <= n - 1, got n={n} m={m}"
        )));
    }
    let scan = AsymptoticScan::new(n, delta, params)?;
    scan.row(n, m)
}

/// Every `(n, m)` with `1 <= n <= n_max`, `m < n` at one `delta`.
pub fn bell_asymptotic_table(n_max: usize, delta: usize, params: &ParamSet) -> Result<Vec<AsymptoticEstimate>> {
    let scan = AsymptoticScan::new(n_max, delta, params)?;
    let mut out = Vec::new();
    for n in 1..=n_max {
        for m in 0..n {
            out.push(scan.row(n, m)?);
        }
    }
    Ok(out)
}

/// Base coefficients and exact values shared by all rows at one `delta`.
struct AsymptoticScan {
    delta: usize,
    base: Vec<Rational>,
    exact: Vec<Rational>,
}

impl AsymptoticScan {
    fn new(n_max: usize, delta: usize, params: &ParamSet) -> Result<Self> {
        if delta < n_max.max(1) {
            return Err(Error::InvalidArgument(format!(
                "estimate needs delta >= n >= 1, got delta={delta} n={n_max}"
            )));
        }
        let d = q_usize(delta);
        let scaled = params.with_lambda(delta).with_gamma(&params.gamma * &d);
        let exact = bell_egf(n_max, &scaled)?
            .into_iter()
            .enumerate()
            .map(|(n, v)| v / Rational::from_integer(factorial(n)))
            .collect();
        Ok(Self {
            delta,
            base: bell_base(n_max, params)?,
            exact,
        })
    }

    fn row(&self, n: usize, m: usize) -> Result<AsymptoticEstimate> {
        if n == 0 || m >= n {
            return Err(Error::InvalidArgument(format!(
                "estimate needs m <= n - 1, got n={n} m={m}"
            )));
        }
        let d = q_usize(self.delta);
        let mut estimate = Rational::zero();
        for f in 0..=m {
            estimate += falling(&d, n - f) * w_from_base(&self.base, n, f)?;
        }
        let exact = self.exact[n].clone();
        let (rel_error, status) = if exact.is_zero() {
            (None, EstimateStatus::ExactZero)
        } else {
            (Some((&estimate / &exact - Rational::one()).abs()), EstimateStatus::Ok)
        };
        Ok(AsymptoticEstimate {
            n,
            m,
            delta: self.delta,
            estimate,
            exact,
            rel_error,
            status,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{binomial, frac, q};
    use proptest::prelude::*;

    fn p_count(n: usize, k: usize) -> u64 {
        let mut t = vec![vec![0u64; k + 1]; n + 1];
        t[0][0] = 1;
        for i in 1..=n {
            for j in 1..=k.min(i) {
                t[i][j] = t[i - 1][j - 1] + if i >= j { t[i - j][j] } else { 0 };
            }
        }
        t[n][k]
    }

    #[test]
    fn partition_examples() {
        let p: Vec<String> = partitions_with_parts(4, 2).iter().map(|p| p.to_string()).collect();
        assert_eq!(p, vec!["3+1", "2+2"]);
        assert_eq!(partitions_with_parts(5, 5)[0].multiplicity(1), 5);
        assert_eq!(partitions_with_parts(5, 1)[0].multiplicity(5), 1);
        assert_eq!(partitions_with_parts(3, 4).len(), 0);
        assert_eq!(partitions_with_parts(0, 0).len(), 1);
    }

    #[test]
    fn partition_counts_match_recurrence() {
        for n in 0..=16 {
            let mut seen = std::collections::HashSet::new();
            for k in 0..=n {
                let ps = partitions_with_parts(n, k);
                assert_eq!(ps.len() as u64, p_count(n, k), "n={n} k={k}");
                for p in ps {
                    assert_eq!(p.n(), n);
                    assert_eq!(p.parts(), k);
                    assert!(seen.insert(p));
                }
            }
        }
    }

    #[test]
    fn base_sequence_needs_unit_constant() {
        assert!(BaseSequence::new(vec![q(0), q(1)]).is_err());
        assert!(BaseSequence::new(vec![]).is_err());
        assert!(BaseSequence::new(vec![q(1), q(3)]).is_ok());
    }

    #[test]
    fn w_leading_terms() {
        let p = ParamSet::ints(1, 2, 2, 1, 1, 0);
        let b = bell_base(8, &p).unwrap();
        for n in 1..=8 {
            let expected = num_traits::pow(b[1].clone(), n) / Rational::from_integer(factorial(n));
            assert_eq!(w_coefficient(n, 0, &p).unwrap(), expected);
        }
        assert_eq!(w_coefficient(1, 0, &ParamSet::classical()).unwrap(), q(0));
        assert!(w_coefficient(3, 3, &p).is_err());
    }

    #[test]
    fn w_explicit_low_orders_match() {
        for p in [
            ParamSet::ints(0, 1, 1, 1, 1, 0),
            ParamSet::ints(2, 4, 2, 2, 1, 0),
            ParamSet::ints(1, 2, 4, 1, 1, 1),
        ] {
            for n in 1..=10 {
                for f in 0..=3.min(n - 1) {
                    assert_eq!(
                        w_explicit(n, f, &p).unwrap(),
                        w_coefficient(n, f, &p).unwrap(),
                        "{p} n={n} f={f}"
                    );
                }
            }
        }
        assert!(w_explicit(8, 6, &ParamSet::classical()).is_err());
    }

    #[test]
    fn w_explicit_high_orders_deviate() {
        let p = ParamSet::ints(0, 1, 1, 1, 1, 0);
        assert_ne!(w_explicit(8, 4, &p).unwrap(), w_coefficient(8, 4, &p).unwrap());
        assert_ne!(w_explicit(9, 5, &p).unwrap(), w_coefficient(9, 5, &p).unwrap());
        // the deviating terms vanish below their shift
        assert_eq!(w_explicit(5, 4, &p).unwrap(), w_coefficient(5, 4, &p).unwrap());
    }

    #[test]
    fn geometric_base_full_expansion_is_exact() {
        let base = BaseSequence::geometric(8);
        for delta in [q(7), q(100), frac(23, 2), frac(-9, 4)] {
            for n in 1..=6 {
                // C(delta + n - 1, n) / (delta)_n, computed without series
                let closed = falling(&(&delta + q_usize(n) - q(1)), n)
                    / Rational::from_integer(factorial(n))
                    / falling(&delta, n);
                assert_eq!(hsu_target(&base, &delta, n).unwrap(), closed);
                assert_eq!(hsu_expansion(&base, &delta, n, n - 1).unwrap(), closed);
            }
        }
    }

    #[test]
    fn first_order_is_exact() {
        let base = BaseSequence::new(vec![q(1), frac(3, 2), q(5)]).unwrap();
        let delta = q(40);
        assert_eq!(hsu_expansion(&base, &delta, 1, 0).unwrap(), frac(3, 2));
        assert_eq!(hsu_target(&base, &delta, 1).unwrap(), frac(3, 2));
    }

    #[test]
    fn table_matches_single_rows() {
        let p = ParamSet::ints(1, 2, 2, 2, 1, 0);
        for row in bell_asymptotic_table(4, 10, &p).unwrap() {
            assert_eq!(row, bell_asymptotic_estimate(row.n, row.m, 10, &p).unwrap());
        }
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let base = BaseSequence::geometric(5);
        assert!(matches!(
            hsu_expansion(&base, &q(2), 3, 2),
            Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn estimate_at_first_order() {
        for gamma in [1, 2, 4] {
            let p = ParamSet::ints(0, 1, gamma, 1, 1, 0);
            for delta in [1usize, 10, 100] {
                let e = bell_asymptotic_estimate(1, 0, delta, &p).unwrap();
                assert_eq!(e.estimate, q_usize(delta) * q(gamma));
                assert_eq!(e.exact, e.estimate);
                assert_eq!(e.rel_error, Some(q(0)));
            }
        }
    }

    #[test]
    fn estimate_exact_zero_status() {
        let e = bell_asymptotic_estimate(1, 0, 5, &ParamSet::classical()).unwrap();
        assert_eq!(e.status, EstimateStatus::ExactZero);
        assert_eq!(e.rel_error, None);
        assert!(bell_asymptotic_estimate(4, 1, 3, &ParamSet::classical()).is_err());
        assert!(bell_asymptotic_estimate(4, 4, 30, &ParamSet::classical()).is_err());
    }

    #[test]
    fn truncated_estimate_improves_with_delta() {
        let p = ParamSet::ints(0, 1, 1, 1, 1, 0);
        for m in 0..3 {
            let errs: Vec<Rational> = [100usize, 1000, 10000]
                .iter()
                .map(|&d| bell_asymptotic_estimate(4, m, d, &p).unwrap().rel_error.unwrap())
                .collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2], "m={m} {errs:?}");
        }
        // the full sum is the exact finite identity
        for d in [100usize, 1000, 10000] {
            assert_eq!(bell_asymptotic_estimate(4, 3, d, &p).unwrap().rel_error, Some(q(0)));
        }
    }

    proptest! {
        #[test]
        fn falling_ratio_bridge(num in -400i64..400, den in 1i64..9, n in 1usize..9, f_raw in 0usize..9) {
            let f = f_raw % n;
            let delta = frac(num, den);
            let lower = falling(&(&delta - q_usize(n) + q_usize(f)), f);
            prop_assume!(!lower.is_zero());
            prop_assert_eq!(falling(&delta, n) / lower, falling(&delta, n - f));
        }

        #[test]
        fn w_from_base_counts_compositions(n in 1usize..9, f_raw in 0usize..9) {
            // all b_i = 1: W(n, f) = C(n-1, n-f-1) / (n-f)!
            let f = f_raw % n;
            let b = vec![q(1); n + 1];
            let k = n - f;
            let expected = Rational::from_integer(binomial(n as i64 - 1, k as i64 - 1))
                / Rational::from_integer(factorial(k));
            prop_assert_eq!(w_from_base(&b, n, f).unwrap(), expected);
        }
    }
}
