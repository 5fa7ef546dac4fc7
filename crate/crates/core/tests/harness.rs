//! Report round trips and determinism on real claim runs.

use debell::exact::q;
use debell::verify::{emit_report, parse_report_json, run_claims, Format, GridOverrides, Status};
use debell::Execution;

fn overrides() -> GridOverrides {
    GridOverrides {
        alpha: Some(vec![q(0), q(2)]),
        beta: Some(vec![q(2)]),
        n_max: Some(6),
        w_n_max: Some(9),
        asymp_n_max: Some(4),
        deltas: Some(vec![10, 50]),
        ..Default::default()
    }
}

#[test]
fn real_report_round_trips() {
    let report = run_claims(&["T33", "W4-explicit", "ASYMP-r1"], &overrides(), Execution::default()).unwrap();
    let json = emit_report(&report, Format::Json).unwrap();
    assert_eq!(parse_report_json(&json).unwrap(), report);
    let csv_bytes = emit_report(&report, Format::Csv).unwrap();
    let mut reader = csv::Reader::from_reader(csv_bytes.as_slice());
    assert_eq!(reader.records().count(), report.rows.len());
}

#[test]
fn reruns_are_byte_identical() {
    let ids = ["EX-B2x6", "OMEGA-ID", "T3-nr"];
    let a = emit_report(
        &run_claims(&ids, &overrides(), Execution::Parallel).unwrap(),
        Format::Markdown,
    )
    .unwrap();
    let b = emit_report(
        &run_claims(&ids, &overrides(), Execution::Sequential).unwrap(),
        Format::Markdown,
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn rows_are_ordered_by_claim_then_point() {
    let report = run_claims(&["T5", "EQ11"], &overrides(), Execution::default()).unwrap();
    assert!(report
        .rows
        .windows(2)
        .all(|w| (&w[0].claim, &w[0].point) <= (&w[1].claim, &w[1].point)));
    assert_eq!(report.claim_ids(), vec!["EQ11", "T5"]);
}

#[test]
fn asymptotic_rows_at_r0_are_exact_at_full_order() {
    let report = run_claims(&["ASYMP-r0"], &overrides(), Execution::default()).unwrap();
    for row in &report.rows {
        if row.point.m == Some(row.point.n - 1) {
            assert!(row.strict);
            assert_eq!(row.status, Status::Equal, "{}", row.point);
        } else {
            assert!(!row.strict);
        }
    }
}
