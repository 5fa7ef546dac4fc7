//! Evaluators behind each registered claim.

use crate::asymptotics::{bell_asymptotic_table, bell_base, w_explicit_from_base, w_from_base, EstimateStatus};
use crate::bell::{
    bell_convolution, bell_convolution_over, bell_egf, deranged_bell_ordinary_stirling, omega, omega_egf,
    omega_identity_check, product_form_check, BellSums, WorkedExample,
};
use crate::error::Result;
use crate::exact::{format_rational, ParamSet, Rational};

use super::report::{Point, Row};

/// Row ranges shared by every claim in one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub n_max: usize,
    pub w_n_max: usize,
    pub asymp_n_max: usize,
    pub deltas: Vec<usize>,
}

pub(super) fn point(p: &ParamSet, n: usize) -> Point {
    Point {
        alpha: p.alpha.clone(),
        beta: p.beta.clone(),
        gamma: p.gamma.clone(),
        x: p.x.clone(),
        lambda: p.lambda,
        r: p.r,
        n,
        ..Default::default()
    }
}

type Pair = (Rational, Rational, String);

/// Evaluates `eval` at every point; a failed precomputation or evaluation
/// becomes a SKIPPED row carrying the error.
fn rows<T>(
    id: &str,
    points: Vec<Point>,
    strict: impl Fn(&Point) -> bool,
    pre: Result<T>,
    eval: impl Fn(&T, &Point) -> Result<Pair>,
) -> Vec<Row> {
    points
        .into_iter()
        .map(|pt| {
            let s = strict(&pt);
            let outcome = pre.as_ref().map_err(Clone::clone).and_then(|t| eval(t, &pt));
            match outcome {
                Ok((lhs, rhs, note)) => Row::compared(id, pt, lhs, rhs, s, note),
                Err(e) => Row::skipped(id, pt, s, e.to_string()),
            }
        })
        .collect()
}

fn range(p: &ParamSet, ns: impl Iterator<Item = usize>) -> Vec<Point> {
    ns.map(|n| point(p, n)).collect()
}

pub(super) fn t5(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    let pre = BellSums::new(p, l.n_max).and_then(|s| Ok((s, bell_egf(l.n_max, p)?)));
    rows(
        id,
        range(p, 0..=l.n_max),
        |_| true,
        pre,
        |(s, egf), pt| Ok((s.lambda1(pt.n)?, egf[pt.n].clone(), String::new())),
    )
}

pub(super) fn t33(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    let pre = BellSums::new(p, l.n_max).and_then(|s| Ok((s, bell_egf(l.n_max, p)?)));
    rows(
        id,
        range(p, 0..=l.n_max),
        |pt| pt.lambda == 1,
        pre,
        |(s, egf), pt| Ok((s.general_closed(pt.n)?, egf[pt.n].clone(), String::new())),
    )
}

pub(super) fn t3_n(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    rows(
        id,
        range(p, 0..=l.n_max),
        |_| true,
        bell_egf(l.n_max, p),
        |egf, pt| Ok((bell_convolution(pt.n, p)?, egf[pt.n].clone(), String::new())),
    )
}

pub(super) fn t3_nr(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    rows(
        id,
        range(p, 0..=l.n_max),
        |pt| pt.r == 0,
        bell_egf(l.n_max, p),
        |egf, pt| {
            let note = format!("compositions of {}", pt.n + p.r);
            Ok((bell_convolution_over(pt.n + p.r, p)?, egf[pt.n].clone(), note))
        },
    )
}

pub(super) fn omega_eq6(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    rows(
        id,
        range(p, 0..=l.n_max),
        |_| true,
        omega_egf(l.n_max, p),
        |egf, pt| Ok((omega(pt.n, p), egf[pt.n].clone(), String::new())),
    )
}

pub(super) fn omega_id(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    rows(
        id,
        range(p, 0..=l.n_max),
        |pt| pt.r == 0,
        Ok(()),
        |_, pt| {
            let (lhs, rhs) = omega_identity_check(pt.n, p)?;
            Ok((lhs, rhs, format!("index {}", pt.n + p.r)))
        },
    )
}

pub(super) fn eq40_literal(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    rows(
        id,
        range(p, 0..=l.n_max),
        |pt| pt.lambda == 1,
        product_form_check(l.n_max, p),
        |t, pt| {
            let row = &t[pt.n];
            Ok((row.literal.clone(), row.egf.clone(), String::new()))
        },
    )
}

pub(super) fn eq40_power(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    rows(
        id,
        range(p, 0..=l.n_max),
        |_| true,
        product_form_check(l.n_max, p),
        |t, pt| {
            let row = &t[pt.n];
            Ok((row.power.clone(), row.egf.clone(), String::new()))
        },
    )
}

pub(super) fn eq11(id: &str, p: &ParamSet, l: &Limits) -> Vec<Row> {
    rows(
        id,
        range(p, 0..=l.n_max),
        |pt| pt.r <= 1,
        bell_egf(l.n_max, p),
        |egf, pt| {
            let lhs = Rational::from_integer(deranged_bell_ordinary_stirling(pt.n, p.r)?);
            Ok((lhs, egf[pt.n].clone(), String::new()))
        },
    )
}

pub(super) fn example(id: &str, ex: WorkedExample, p: &ParamSet) -> Vec<Row> {
    let n = ex.n();
    rows(
        id,
        vec![point(p, n)],
        |_| false,
        bell_egf(n, p),
        |egf, _| Ok((ex.quoted_value(p), egf[n].clone(), String::new())),
    )
}

pub(super) fn w_explicit(id: &str, f: usize, strict: bool, p: &ParamSet, l: &Limits) -> Vec<Row> {
    let points = (f + 1..=l.w_n_max)
        .map(|n| Point {
            f: Some(f),
            ..point(p, n)
        })
        .collect();
    rows(
        id,
        points,
        |_| strict,
        bell_base(l.w_n_max.max(6), p),
        |b, pt| {
            Ok((
                w_explicit_from_base(b, pt.n, f)?,
                w_from_base(b, pt.n, f)?,
                String::new(),
            ))
        },
    )
}

pub(super) fn asymptotic(id: &str, strict_full: bool, p: &ParamSet, l: &Limits) -> Vec<Row> {
    let mut out = Vec::new();
    for &delta in &l.deltas {
        let mut points = Vec::new();
        for n in 1..=l.asymp_n_max {
            for m in 0..n {
                points.push(Point {
                    m: Some(m),
                    delta: Some(delta),
                    ..point(p, n)
                });
            }
        }
        let strict = |pt: &Point| strict_full && pt.m == Some(pt.n - 1);
        out.extend(rows(
            id,
            points,
            strict,
            bell_asymptotic_table(l.asymp_n_max, delta, p),
            |t, pt| {
                let m = pt.m.expect("set above");
                let row = t
                    .iter()
                    .find(|e| e.n == pt.n && e.m == m)
                    .expect("table covers every (n, m)");
                let note = match (&row.status, &row.rel_error) {
                    (EstimateStatus::Ok, Some(err)) => format!("rel_error={}", format_rational(err)),
                    _ => "exact value is zero".to_string(),
                };
                Ok((row.estimate.clone(), row.exact.clone(), note))
            },
        ));
    }
    out
}
