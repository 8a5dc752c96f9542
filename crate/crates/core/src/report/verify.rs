//! Named verification suites bundling the oracles of the other modules.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::is_connected_mask;
use crate::ree_hoover::{enumerate_rh_diagrams, rh_expansion_mismatches, rh_reference_count};
use crate::report::tables::{build_tables, mismatches, TableOptions};
use crate::series::{
    a_to_virial, ab_recurrence_residual, b_from_a, b_to_virial, beta_mu, measure_ops, op_bound, CoeffSeq, OpCounter,
    Route, MAYER_SUM_OP_ENVELOPE,
};
use crate::trees::{class_consistency_failures, frame_coverage};

pub const SUITES: [&str; 6] = ["tables", "partition", "rh-expansion", "recurrence", "routes", "bounds"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn run_suite(name: &str) -> Result<VerifyReport> {
    let checks = match name {
        "tables" => tables()?,
        "partition" => partition()?,
        "rh-expansion" => rh_expansion()?,
        "recurrence" => recurrence(),
        "routes" => routes(),
        "bounds" => bounds(),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(VerifyReport {
        suite: name.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn tables() -> Result<Vec<Check>> {
    let tables = build_tables(&[1, 2, 3, 4, 5, 6], &TableOptions::default())?;
    let bad = mismatches(&tables);
    let mut detail = format!("{} tables, {} mismatches", tables.len(), bad.len());
    for (t, row, n, got, want) in bad.iter().take(10) {
        detail.push_str(&format!("; table {t} {row} n={n}: {got:?} vs {want:?}"));
    }
    Ok(vec![check("published tables", bad.is_empty(), detail)])
}

fn partition() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 2..=5 {
        let hits = frame_coverage(n)?;
        let (mut missed, mut doubled, mut stray) = (0, 0, 0);
        for (mask, &h) in hits.iter().enumerate() {
            match (is_connected_mask(n, mask as u64), h) {
                (true, 0) => missed += 1,
                (true, 1) | (false, 0) => {}
                (true, _) => doubled += 1,
                (false, _) => stray += 1,
            }
        }
        checks.push(check(
            format!("frame coverage n={n}"),
            missed + doubled + stray == 0,
            format!("{} masks: {missed} missed, {doubled} covered twice or more, {stray} disconnected hit", hits.len()),
        ));
        let bad = class_consistency_failures(n)?;
        checks.push(check(format!("class consistency n={n}"), bad == 0, format!("{bad} inconsistent classes")));
    }
    Ok(checks)
}

fn rh_expansion() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 2..=5 {
        let bad = rh_expansion_mismatches(n)?;
        checks.push(check(format!("block expansion n={n}"), bad == 0, format!("{bad} mismatched masks")));
    }
    for n in 2..=6 {
        let got = enumerate_rh_diagrams(n)?.len() as u64;
        let want = rh_reference_count(n)?;
        checks.push(check(format!("diagram count n={n}"), got == want, format!("{got} vs {want}")));
    }
    Ok(checks)
}

/// Deterministic exact test inputs `a_2..a_n`.
pub fn sample_rationals(n: usize) -> CoeffSeq<BigRational> {
    CoeffSeq::new(
        (2..=n as i64)
            .map(|k| BigRational::new(((-1i64).pow(k as u32) * (3 * k - 2)).into(), (k * k + 1).into()))
            .collect(),
    )
}

fn recurrence() -> Vec<Check> {
    (2..=6)
        .map(|n| {
            let a = sample_rationals(n);
            let b = b_from_a(&a, n);
            let r = ab_recurrence_residual(&a, &b, n);
            check(format!("exact residual n={n}"), r.is_zero(), format!("residual {r}"))
        })
        .collect()
}

fn routes() -> Vec<Check> {
    (2..=5)
        .map(|n| {
            let a = sample_rationals(n);
            let b = b_from_a(&a, n);
            let mut ops = OpCounter::new();
            let via_a = a_to_virial(&a, n, &mut ops);
            let via_b = b_to_virial(&b, n, &mut ops);
            let via_beta = -BigRational::new((n as i64 - 1).into(), (n as i64).into()) * beta_mu(&b, n - 1);
            check(
                format!("routes n={n}"),
                via_a == via_b && via_b == via_beta,
                format!("a-route {via_a}, b-route {via_b}, beta {via_beta}"),
            )
        })
        .collect()
}

fn bounds() -> Vec<Check> {
    let mut checks = Vec::new();
    for n in 2..=10 {
        let m = measure_ops(n);
        let (ba, bb) = (op_bound(Route::A, n), op_bound(Route::B, n));
        checks.push(check(
            format!("op counts n={n}"),
            m.a_route_total <= ba && m.b_route_total <= bb && m.b_route_sum <= MAYER_SUM_OP_ENVELOPE,
            format!(
                "a-route {} <= {ba}; b-route {} <= {bb}; Mayer sum {} <= {MAYER_SUM_OP_ENVELOPE}",
                m.a_route_total, m.b_route_total, m.b_route_sum
            ),
        ));
    }
    checks
}
