//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
//!
//! Every comparison is exact. The only numeric constants are the pinned
//! values below.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use debell::asymptotics::{
    bell_asymptotic_estimate, bell_base, hsu_expansion, hsu_target, w_explicit_from_base, w_from_base, BaseSequence,
};
use debell::bell::{bell_convolution, bell_egf, bell_lambda1, deranged_bell_classic, omega, omega_egf};
use debell::derangements::{derangement, r_derangement_egf, r_derangement_rec};
use debell::enumerate::Enumerator;
use debell::exact::{factorial, falling, is_nonneg_integer, q, q_usize, ParamSet, Rational};
use debell::stirling::{stirling_egf, StirlingTable};
use debell::verify::{self, emit_report, summarize, Axes, ClaimSummary, Format, GridOverrides, Status};
use debell::Execution;

/// Ordered Bell numbers for n = 0..=4.
const FUBINI: [i64; 5] = [1, 1, 3, 13, 75];
/// Deltas for the asymptotic monotonicity check.
const ASYMP_DELTAS: [usize; 3] = [100, 1000, 10000];
/// Relative error at n=4, m=3, delta=10^4, (alpha, beta, gamma, x) = (0, 1, 1, 1), from the first run.
const ASYMP_PINNED_ERROR: i64 = 0;
const BLESS_ENV: &str = "DEBELL_BLESS";

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn default_triples() -> Vec<(Rational, Rational, Rational)> {
    let mut out: Vec<_> = Axes::default_grid()
        .points()
        .into_iter()
        .map(|p| (p.alpha, p.beta, p.gamma))
        .collect();
    out.dedup();
    out
}

fn grid_points(filter: impl Fn(&ParamSet) -> bool) -> Vec<ParamSet> {
    Axes::default_grid()
        .points()
        .into_iter()
        .filter(|p| filter(p))
        .collect()
}

fn c1_stirling_routes() -> Outcome {
    let mut checked = 0;
    for (a, b, g) in default_triples() {
        let table = StirlingTable::new(&a, &b, &g, 12);
        for n in 0..=12 {
            for k in 0..=n {
                let egf = stirling_egf(n, k, &a, &b, &g, n).map_err(|e| e.to_string())?;
                ensure!(
                    table.get(n, k) == egf,
                    "S({n},{k}) differs at alpha={a} beta={b} gamma={g}"
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} values"))
}

fn c2_stirling_oracles() -> Outcome {
    let e = Enumerator::default();
    let classical = StirlingTable::new(&q(0), &q(1), &q(0), 8);
    let mut checked = 0;
    for n in 0..=8 {
        for k in 0..=n {
            let count = e.set_partitions_count(n, k).map_err(|e| e.to_string())?;
            ensure!(classical.get(n, k) == Rational::from_integer(count), "S({n},{k})");
            checked += 1;
        }
    }
    for r in 0..=3usize {
        let table = StirlingTable::new(&q(0), &q(1), &q_usize(r), 9 - r);
        for n in 0..=9 - r {
            for k in 0..=n {
                let count = e.r_stirling_count(n, k, r).map_err(|e| e.to_string())?;
                ensure!(table.get(n, k) == Rational::from_integer(count), "S({n},{k},0,1,{r})");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} counts"))
}

fn c3_derangements() -> Outcome {
    let e = Enumerator::default();
    let mut checked = 0;
    for r in 0..=8usize {
        for k in 0..=8 - r {
            let egf = r_derangement_egf(k, r, k).map_err(|e| e.to_string())?;
            let enumerated = e.r_derangements_enum(k, r).map_err(|e| e.to_string())?;
            ensure!(egf == enumerated, "d_({k},{r}): egf {egf} vs enumeration {enumerated}");
            if r == 0 {
                ensure!(derangement(k) == egf, "d_{k} closed form");
                ensure!(
                    r_derangement_rec(k, 0, 0).map_err(|e| e.to_string())? == egf,
                    "d_{k} base row"
                );
            }
            for s in 1..=r {
                let rec = r_derangement_rec(k, r, s).map_err(|e| e.to_string())?;
                ensure!(rec == egf, "d_({k},{r}) recurrence at s={s}");
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (k, r) pairs"))
}

fn c4_bell_lambda1_chain() -> Outcome {
    let e = Enumerator::default();
    let mut checked = 0;
    for r in 0..=2usize {
        let p = ParamSet::new(q(0), q(1), q_usize(r), q(1), 1, r);
        let n_max = 8 - r;
        let egf = bell_egf(n_max, &p).map_err(|e| e.to_string())?;
        for n in 0..=n_max {
            let closed = bell_lambda1(n, &p).map_err(|e| e.to_string())?;
            let classic = Rational::from_integer(deranged_bell_classic(n, r).map_err(|e| e.to_string())?);
            let oracle = Rational::from_integer(e.r_deranged_partitions_enum(n, r).map_err(|e| e.to_string())?);
            ensure!(
                egf[n] == closed && closed == classic && classic == oracle,
                "n={n} r={r}: egf {} closed {closed} classic {classic} enumeration {oracle}",
                egf[n]
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} values"))
}

fn c5_convolution() -> Outcome {
    let mut checked = 0;
    for p in grid_points(|p| p.lambda >= 1) {
        let egf = bell_egf(8, &p).map_err(|e| e.to_string())?;
        for (n, expected) in egf.iter().enumerate() {
            let conv = bell_convolution(n, &p).map_err(|e| e.to_string())?;
            ensure!(&conv == expected, "n={n} at {p}");
            checked += 1;
        }
    }
    Ok(format!("{checked} values"))
}

fn c6_omega() -> Outcome {
    let mut checked = 0;
    for p in grid_points(|p| p.r == 0) {
        let egf = omega_egf(8, &p).map_err(|e| e.to_string())?;
        for (n, expected) in egf.iter().enumerate() {
            ensure!(&omega(n, &p) == expected, "omega_{n} at {p}");
            checked += 1;
        }
    }
    let e = Enumerator::default();
    let p = ParamSet::classical();
    for n in 0..=7 {
        let count = Rational::from_integer(e.ordered_partitions_count(n).map_err(|e| e.to_string())?);
        ensure!(omega(n, &p) == count, "omega_{n}(1;0,1,0,1) vs ordered partitions");
        if n < FUBINI.len() {
            ensure!(count == q(FUBINI[n]), "ordered Bell number {n}");
        }
    }
    Ok(format!("{checked} grid values, 8 oracle values"))
}

fn c7_integrality() -> Outcome {
    let points = grid_points(|p| p.combinatorial_regime());
    let mut checked = 0;
    for p in &points {
        let b = bell_egf(8, p).map_err(|e| e.to_string())?;
        let w = omega_egf(8, p).map_err(|e| e.to_string())?;
        for (n, v) in b.iter().chain(w.iter()).enumerate() {
            ensure!(is_nonneg_integer(v), "value {v} (index {n}) at {p}");
            checked += 1;
        }
    }
    Ok(format!("{checked} values at {} points", points.len()))
}

fn c8_w_coefficients() -> Outcome {
    let mut checked = 0;
    let mut recorded: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for p in grid_points(|p| p.lambda == 1) {
        let b = bell_base(12, &p).map_err(|e| e.to_string())?;
        for n in 1..=12 {
            for f in 0..=5.min(n - 1) {
                let generic = w_from_base(&b, n, f).map_err(|e| e.to_string())?;
                let explicit = w_explicit_from_base(&b, n, f).map_err(|e| e.to_string())?;
                if f <= 3 {
                    ensure!(generic == explicit, "W({n},{f}) at {p}");
                    checked += 1;
                } else {
                    let slot = recorded.entry(f).or_default();
                    if generic == explicit {
                        slot.0 += 1;
                    } else {
                        slot.1 += 1;
                    }
                }
            }
        }
    }
    let notes: Vec<String> = recorded
        .iter()
        .map(|(f, (eq, ne))| format!("f={f}: {eq} equal, {ne} unequal"))
        .collect();
    Ok(format!(
        "{checked} exact matches for f<=3; recorded {}",
        notes.join("; ")
    ))
}

fn c9_asymptotics() -> Outcome {
    for gamma in [1i64, 2, 4] {
        for (a, b) in [(0i64, 1i64), (1, 2), (2, 4)] {
            let p = ParamSet::ints(a, b, gamma, 1, 1, 0);
            for delta in [1usize, 10, 1000] {
                let est = bell_asymptotic_estimate(1, 0, delta, &p).map_err(|e| e.to_string())?;
                ensure!(est.rel_error == Some(q(0)), "n=1 m=0 not exact at {p} delta={delta}");
            }
        }
    }
    let p = ParamSet::ints(0, 1, 1, 1, 1, 0);
    let errors: Vec<Rational> = ASYMP_DELTAS
        .iter()
        .map(|&d| {
            bell_asymptotic_estimate(4, 3, d, &p)
                .map_err(|e| e.to_string())?
                .rel_error
                .ok_or_else(|| "exact value is zero".to_string())
        })
        .collect::<Result<_, _>>()?;
    let shown: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
    ensure!(
        errors[ASYMP_DELTAS.len() - 1] == q(ASYMP_PINNED_ERROR),
        "final error {} drifted from the pinned value {ASYMP_PINNED_ERROR}",
        shown[ASYMP_DELTAS.len() - 1]
    );
    ensure!(
        errors.windows(2).all(|w| w[0] > w[1]),
        "n=4 m=3 rel_error across deltas {ASYMP_DELTAS:?} is [{}], not strictly decreasing",
        shown.join(", ")
    );
    Ok(format!("n=4 m=3 errors [{}]", shown.join(", ")))
}

fn c10_geometric_base() -> Outcome {
    let base = BaseSequence::geometric(7);
    let mut checked = 0;
    for delta in [q(7), q(12), q(100), q(1000), Rational::new(37.into(), 3.into())] {
        for n in 1..=6 {
            // C(delta + n - 1, n) / (delta)_n
            let closed =
                falling(&(&delta + q_usize(n) - q(1)), n) / Rational::from_integer(factorial(n)) / falling(&delta, n);
            let expansion = hsu_expansion(&base, &delta, n, n - 1).map_err(|e| e.to_string())?;
            ensure!(expansion == closed, "n={n} delta={delta}");
            ensure!(
                hsu_target(&base, &delta, n).map_err(|e| e.to_string())? == closed,
                "series route n={n}"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} (delta, n) pairs"))
}

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/claim_outcomes.json")
}

struct HarnessRun {
    report: verify::VerificationReport,
    json: Vec<u8>,
}

fn c11_completeness(run: &HarnessRun) -> Outcome {
    let again = verify::run_all(&GridOverrides::default(), Execution::default()).map_err(|e| e.to_string())?;
    let json = emit_report(&again, Format::Json).map_err(|e| e.to_string())?;
    ensure!(json == run.json, "two runs differ");
    let ids = verify::claim_ids();
    ensure!(
        run.report.claim_ids() == ids,
        "reported ids {:?}",
        run.report.claim_ids()
    );
    Ok(format!(
        "{} claims, {} rows, {} bytes identical",
        ids.len(),
        run.report.rows.len(),
        json.len()
    ))
}

fn c12_adjudication(run: &HarnessRun) -> Outcome {
    for id in ["T5", "T3-n", "EQ40-power"] {
        let rows: Vec<_> = run.report.rows_for(id).collect();
        ensure!(!rows.is_empty(), "{id} has no rows");
        ensure!(
            rows.iter().all(|r| r.status == Status::Equal),
            "{id} has a non-EQUAL row"
        );
    }
    let omega_r0: Vec<_> = run.report.rows_for("OMEGA-ID").filter(|r| r.point.r == 0).collect();
    ensure!(!omega_r0.is_empty(), "OMEGA-ID has no r=0 rows");
    ensure!(
        omega_r0.iter().all(|r| r.status == Status::Equal),
        "OMEGA-ID r=0 has a non-EQUAL row"
    );
    ensure!(
        run.report.passed(),
        "strict failure in {:?}",
        run.report.failures().next().map(|r| &r.claim)
    );

    let summary = summarize(&run.report).map_err(|e| e.to_string())?;
    let path = fixture_path();
    if std::env::var(BLESS_ENV).is_ok_and(|v| v == "1") {
        let mut text = serde_json::to_string_pretty(&summary).map_err(|e| e.to_string())?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        return Ok(format!("fixture written to {}", path.display()));
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let pinned: BTreeMap<String, ClaimSummary> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let drifted: Vec<&String> = summary
        .keys()
        .chain(pinned.keys())
        .filter(|id| summary.get(*id) != pinned.get(*id))
        .collect();
    ensure!(drifted.is_empty(), "outcomes drifted from fixture for {drifted:?}");
    Ok(format!("{} claim outcomes match the fixture", summary.len()))
}

fn report(label: &str, outcome: std::thread::Result<Outcome>) -> bool {
    let (ok, detail) = match outcome {
        Ok(Ok(detail)) => (true, detail),
        Ok(Err(detail)) => (false, detail),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (false, format!("panicked: {msg}"))
        }
    };
    println!("{} {label}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() -> ExitCode {
    let simple: [(&str, fn() -> Outcome); 10] = [
        ("[1] stirling recurrence = generating function", c1_stirling_routes),
        ("[2] stirling vs partition enumeration", c2_stirling_oracles),
        ("[3] derangement routes vs enumeration", c3_derangements),
        ("[4] bell lambda=1 chain", c4_bell_lambda1_chain),
        ("[5] convolution route", c5_convolution),
        ("[6] omega consistency", c6_omega),
        ("[7] integrality", c7_integrality),
        ("[8] W coefficients", c8_w_coefficients),
        ("[9] asymptotic sanity", c9_asymptotics),
        ("[10] geometric base", c10_geometric_base),
    ];
    let mut all = true;
    for (label, f) in simple {
        all &= report(label, catch_unwind(f));
    }

    let run = catch_unwind(|| {
        let report = verify::run_all(&GridOverrides::default(), Execution::default()).map_err(|e| e.to_string())?;
        let json = emit_report(&report, Format::Json).map_err(|e| e.to_string())?;
        Ok::<_, String>(HarnessRun { report, json })
    });
    match run {
        Ok(Ok(run)) => {
            all &= report(
                "[11] harness completeness",
                catch_unwind(AssertUnwindSafe(|| c11_completeness(&run))),
            );
            all &= report(
                "[12] claim adjudication",
                catch_unwind(AssertUnwindSafe(|| c12_adjudication(&run))),
            );
        }
        Ok(Err(e)) => {
            all &= report("[11] harness completeness", Ok(Err(e.clone())));
            all &= report("[12] claim adjudication", Ok(Err(e)));
        }
        Err(panic) => {
            all &= report("[11] harness completeness", Err(panic));
            all &= report("[12] claim adjudication", Ok(Err("harness run panicked".into())));
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
