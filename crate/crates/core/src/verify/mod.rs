//! Claim registry and grid runner.
//!
//! Every printed identity, worked value and explicit display is a named
//! claim. Running a claim evaluates both sides exactly at every grid point
//! and records EQUAL, UNEQUAL or SKIPPED; a row is *strict* where equality
//! is required. Claims with expected discrepancies are recorded like any
//! other, with their non-strict rows captured in a fixture.

mod claims;
mod report;

use crate::bell::WorkedExample;
use crate::error::{Error, Result};
use crate::exact::{divides, q, q_usize, ParamSet, Rational};
use crate::exec::{self, Execution};

pub use claims::Limits;
pub use report::{
    emit_report, parse_report_json, summarize, ClaimSummary, Format, Point, Row, Status, VerificationReport,
};

/// Which parameter points a claim runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GridKind {
    Default,
    Examples(WorkedExample),
    /// `(alpha, beta, gamma, x, lambda) = (0, 1, r, 1, 1)` for each `r`.
    Specialization,
}

#[derive(Clone, Copy, Debug)]
enum Eval {
    T5,
    T33,
    T3N,
    T3Nr,
    OmegaEq6,
    OmegaId,
    Eq40Literal,
    Eq40Power,
    Eq11,
    Example(WorkedExample),
    WExplicit(usize),
    Asymp { strict: bool },
}

/// A registered claim.
#[derive(Clone, Copy, Debug)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    /// Some rows are allowed to differ; their outcomes are pinned by fixture.
    pub expected_discrepancy: bool,
    grid: GridKind,
    keep: fn(&ParamSet) -> bool,
    eval: Eval,
}

impl Claim {
    fn evaluate(&self, p: &ParamSet, l: &Limits) -> Vec<Row> {
        let id = self.id;
        match self.eval {
            Eval::T5 => claims::t5(id, p, l),
            Eval::T33 => claims::t33(id, p, l),
            Eval::T3N => claims::t3_n(id, p, l),
            Eval::T3Nr => claims::t3_nr(id, p, l),
            Eval::OmegaEq6 => claims::omega_eq6(id, p, l),
            Eval::OmegaId => claims::omega_id(id, p, l),
            Eval::Eq40Literal => claims::eq40_literal(id, p, l),
            Eval::Eq40Power => claims::eq40_power(id, p, l),
            Eval::Eq11 => claims::eq11(id, p, l),
            Eval::Example(ex) => claims::example(id, ex, p),
            Eval::WExplicit(f) => claims::w_explicit(id, f, f <= 3, p, l),
            Eval::Asymp { strict } => claims::asymptotic(id, strict, p, l),
        }
    }
}

fn any(_: &ParamSet) -> bool {
    true
}
fn lambda_one(p: &ParamSet) -> bool {
    p.lambda == 1
}
fn lambda_pos(p: &ParamSet) -> bool {
    p.lambda >= 1
}
fn r_zero(p: &ParamSet) -> bool {
    p.r == 0
}
fn lambda_one_r_zero(p: &ParamSet) -> bool {
    p.lambda == 1 && p.r == 0
}
fn lambda_one_r_one(p: &ParamSet) -> bool {
    p.lambda == 1 && p.r == 1
}

const fn claim(
    id: &'static str,
    statement: &'static str,
    expected_discrepancy: bool,
    grid: GridKind,
    keep: fn(&ParamSet) -> bool,
    eval: Eval,
) -> Claim {
    Claim {
        id,
        statement,
        expected_discrepancy,
        grid,
        keep,
        eval,
    }
}

use GridKind::{Default as D, Examples as X, Specialization as S};

/// Every claim, in id order.
pub const REGISTRY: [Claim; 20] = [
    claim(
        "ASYMP-r0",
        "large-lambda estimate vs exact value, r = 0; strict at m = n - 1",
        true,
        D,
        lambda_one_r_zero,
        Eval::Asymp { strict: true },
    ),
    claim(
        "ASYMP-r1",
        "large-lambda estimate vs exact value, r = 1 (diagnostic)",
        true,
        D,
        lambda_one_r_one,
        Eval::Asymp { strict: false },
    ),
    claim(
        "EQ11",
        "classical r-deranged Bell sum with ordinary Stirling numbers vs generating function",
        true,
        S,
        any,
        Eval::Eq11,
    ),
    claim(
        "EQ40-literal",
        "product form with per-factor exponents r i, -i, (r+1) i vs generating function",
        true,
        D,
        lambda_pos,
        Eval::Eq40Literal,
    ),
    claim(
        "EQ40-power",
        "product form as the lambda-th power of the lambda = 1 factor vs generating function",
        false,
        D,
        lambda_pos,
        Eval::Eq40Power,
    ),
    claim(
        "EX-B1x2",
        "quoted value of B^{1,x}_{2,lambda} vs generating function",
        true,
        X(WorkedExample::B1x2),
        any,
        Eval::Example(WorkedExample::B1x2),
    ),
    claim(
        "EX-B2x4",
        "quoted value of B^{2,x}_{4,lambda} vs generating function",
        true,
        X(WorkedExample::B2x4),
        any,
        Eval::Example(WorkedExample::B2x4),
    ),
    claim(
        "EX-B2x6",
        "quoted value of B^{2,x}_{6,lambda} vs generating function",
        true,
        X(WorkedExample::B2x6),
        any,
        Eval::Example(WorkedExample::B2x6),
    ),
    claim(
        "OMEGA-EQ6",
        "weighted Stirling sum for omega vs its generating function",
        false,
        D,
        r_zero,
        Eval::OmegaEq6,
    ),
    claim(
        "OMEGA-ID",
        "fixed-block decomposition of omega_{n+r}; strict at r = 0",
        true,
        D,
        any,
        Eval::OmegaId,
    ),
    claim(
        "T3-n",
        "section convolution over compositions of n vs generating function",
        false,
        D,
        lambda_pos,
        Eval::T3N,
    ),
    claim(
        "T3-nr",
        "section convolution over compositions of n + r vs generating function",
        true,
        D,
        lambda_pos,
        Eval::T3Nr,
    ),
    claim(
        "T33",
        "closed sum with bar weight C(k+r+lambda-1, k+r) vs generating function; strict at lambda = 1",
        true,
        D,
        any,
        Eval::T33,
    ),
    claim(
        "T5",
        "lambda = 1 closed sum vs generating function",
        false,
        D,
        lambda_one,
        Eval::T5,
    ),
    claim(
        "W0-explicit",
        "explicit W(n, 0) vs partition sum",
        false,
        D,
        lambda_one,
        Eval::WExplicit(0),
    ),
    claim(
        "W1-explicit",
        "explicit W(n, 1) vs partition sum",
        false,
        D,
        lambda_one,
        Eval::WExplicit(1),
    ),
    claim(
        "W2-explicit",
        "explicit W(n, 2) vs partition sum",
        false,
        D,
        lambda_one,
        Eval::WExplicit(2),
    ),
    claim(
        "W3-explicit",
        "explicit W(n, 3) vs partition sum",
        false,
        D,
        lambda_one,
        Eval::WExplicit(3),
    ),
    claim(
        "W4-explicit",
        "explicit W(n, 4) vs partition sum",
        true,
        D,
        lambda_one,
        Eval::WExplicit(4),
    ),
    claim(
        "W5-explicit",
        "explicit W(n, 5) vs partition sum",
        true,
        D,
        lambda_one,
        Eval::WExplicit(5),
    ),
];

/// All registered ids.
pub fn claim_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

pub fn find_claim(id: &str) -> Result<&'static Claim> {
    REGISTRY
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

/// Parameter axes; points are their product, filtered to `alpha | beta`, `alpha | gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axes {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub gamma: Vec<Rational>,
    pub x: Vec<Rational>,
    pub lambda: Vec<usize>,
    pub r: Vec<usize>,
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&i| q(i)).collect()
}

impl Axes {
    pub fn default_grid() -> Self {
        Self {
            alpha: ints(&[0, 1, 2]),
            beta: ints(&[1, 2, 4]),
            gamma: ints(&[0, 2, 4]),
            x: ints(&[1, 2]),
            lambda: vec![0, 1, 2, 3],
            r: vec![0, 1, 2],
        }
    }

    /// Grid for the quoted polynomial values.
    pub fn example_grid(r: usize) -> Self {
        Self {
            alpha: ints(&[0, 1, 2]),
            beta: ints(&[1, 2]),
            gamma: ints(&[0, 2, 4]),
            x: ints(&[1, 2]),
            lambda: (0..=8).collect(),
            r: vec![r],
        }
    }

    pub fn points(&self) -> Vec<ParamSet> {
        let mut out = Vec::new();
        for a in &self.alpha {
            for b in &self.beta {
                for g in &self.gamma {
                    if !divides(a, b) || !divides(a, g) {
                        continue;
                    }
                    for x in &self.x {
                        for &lambda in &self.lambda {
                            for &r in &self.r {
                                out.push(ParamSet::new(a.clone(), b.clone(), g.clone(), x.clone(), lambda, r));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Optional replacements for grid axes and row ranges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridOverrides {
    pub alpha: Option<Vec<Rational>>,
    pub beta: Option<Vec<Rational>>,
    pub gamma: Option<Vec<Rational>>,
    pub x: Option<Vec<Rational>>,
    pub lambda: Option<Vec<usize>>,
    pub r: Option<Vec<usize>>,
    pub n_max: Option<usize>,
    pub w_n_max: Option<usize>,
    pub asymp_n_max: Option<usize>,
    pub deltas: Option<Vec<usize>>,
}

impl GridOverrides {
    fn limits(&self) -> Limits {
        Limits {
            n_max: self.n_max.unwrap_or(8),
            w_n_max: self.w_n_max.unwrap_or(12),
            asymp_n_max: self.asymp_n_max.unwrap_or(6),
            deltas: self.deltas.clone().unwrap_or_else(|| vec![10, 100, 1000]),
        }
    }

    fn apply(&self, mut axes: Axes, fixed_r: bool) -> Axes {
        let pick = |o: &Option<Vec<Rational>>, d: Vec<Rational>| o.clone().unwrap_or(d);
        axes.alpha = pick(&self.alpha, axes.alpha);
        axes.beta = pick(&self.beta, axes.beta);
        axes.gamma = pick(&self.gamma, axes.gamma);
        axes.x = pick(&self.x, axes.x);
        if let Some(l) = &self.lambda {
            axes.lambda = l.clone();
        }
        if !fixed_r {
            if let Some(r) = &self.r {
                axes.r = r.clone();
            }
        }
        axes
    }

    /// The parameter points `claim` runs over.
    pub fn points_for(&self, claim: &Claim) -> Vec<ParamSet> {
        let points = match claim.grid {
            GridKind::Default => self.apply(Axes::default_grid(), false).points(),
            GridKind::Examples(ex) => self.apply(Axes::example_grid(ex.r()), true).points(),
            GridKind::Specialization => {
                let rs = self.r.clone().unwrap_or_else(|| vec![0, 1, 2]);
                rs.into_iter()
                    .map(|r| ParamSet::new(q(0), q(1), q_usize(r), q(1), 1, r))
                    .collect()
            }
        };
        points.into_iter().filter(|p| (claim.keep)(p)).collect()
    }
}

/// Evaluates the named claims over their grids. Unknown ids are rejected
/// before anything runs; evaluation errors become SKIPPED rows.
pub fn run_claims(ids: &[&str], overrides: &GridOverrides, mode: Execution) -> Result<VerificationReport> {
    let claims: Vec<&Claim> = ids.iter().map(|id| find_claim(id)).collect::<Result<_>>()?;
    let limits = overrides.limits();
    let mut units: Vec<(&Claim, ParamSet)> = Vec::new();
    for c in claims {
        units.extend(overrides.points_for(c).into_iter().map(|p| (c, p)));
    }
    let rows = exec::map(mode, &units, |(c, p)| c.evaluate(p, &limits));
    Ok(VerificationReport::new(rows.into_iter().flatten().collect()))
}

/// [`run_claims`] over the whole registry.
pub fn run_all(overrides: &GridOverrides, mode: Execution) -> Result<VerificationReport> {
    run_claims(&claim_ids(), overrides, mode)
}
