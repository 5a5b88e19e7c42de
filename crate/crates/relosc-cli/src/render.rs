//! CSV and JSON rendering.
//!
//! Numeric output must round-trip: floats are printed with Rust's shortest
//! round-trip formatting in CSV and serialized as numbers in JSON, so the
//! two renderings of the same run parse to identical values. Rationals are
//! emitted as exact `p/q` strings in both formats.

use relosc::fps::FormalSeries;
use relosc::method::PairwiseDifference;
use relosc::{OutputRecord, ResultFlag};
use serde::Serialize;

/// Fixed sweep/record header; scripts may rely on it verbatim.
pub const CSV_HEADER: &str = "epsilon,method,J,omega,tau,eta,order,error_estimate,flags";

pub fn flags_string(flags: &[ResultFlag]) -> String {
    flags
        .iter()
        .map(|f| f.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

fn float(x: f64) -> String {
    // {:?} prints the shortest string that parses back to the same f64
    format!("{x:?}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn records_csv(records: &[OutputRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            float(r.epsilon),
            r.method,
            opt_float(r.j),
            opt_float(r.omega),
            opt_float(r.tau),
            opt_float(r.eta),
            r.order,
            opt_float(r.error_estimate),
            flags_string(&r.flags),
        ));
    }
    out
}

pub fn records_json(records: &[OutputRecord]) -> String {
    let mut out = serde_json::to_string_pretty(records).expect("records serialize");
    out.push('\n');
    out
}

pub fn records(format: &str, records: &[OutputRecord]) -> String {
    match format {
        "csv" => records_csv(records),
        _ => records_json(records),
    }
}

pub fn coeffs_json(series: &FormalSeries) -> String {
    let strings: Vec<String> = series.coefficients().iter().map(|c| c.to_string()).collect();
    let mut out = serde_json::to_string(&strings).expect("strings serialize");
    out.push('\n');
    out
}

pub fn coeffs_csv(series: &FormalSeries) -> String {
    let mut out = String::from("index,coefficient\n");
    for (i, c) in series.coefficients().iter().enumerate() {
        out.push_str(&format!("{i},{c}\n"));
    }
    out
}

#[derive(Serialize)]
struct CompareReport<'a> {
    records: &'a [OutputRecord],
    pairwise: &'a [PairwiseDifference],
    max_gated_relative_difference: f64,
    tolerance: f64,
    pass: bool,
}

pub fn compare(
    format: &str,
    records: &[OutputRecord],
    diffs: &[PairwiseDifference],
    max_gated: f64,
    tolerance: f64,
    pass: bool,
) -> String {
    match format {
        "csv" => {
            // records table first; the gate summary rides along as
            // gnuplot-style comment lines
            let mut out = records_csv(records);
            for d in diffs {
                out.push_str(&format!(
                    "# pairwise {} {} {}: {}\n",
                    d.quantity,
                    d.method_a,
                    d.method_b,
                    float(d.relative_difference)
                ));
            }
            out.push_str(&format!(
                "# max gated relative difference {} (tolerance {}): {}\n",
                float(max_gated),
                float(tolerance),
                if pass { "PASS" } else { "FAIL" }
            ));
            out
        }
        _ => {
            let report = CompareReport {
                records,
                pairwise: diffs,
                max_gated_relative_difference: max_gated,
                tolerance,
                pass,
            };
            let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
            out.push('\n');
            out
        }
    }
}
