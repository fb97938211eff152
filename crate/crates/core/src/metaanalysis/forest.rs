use serde::Serialize;

use super::{MetaAnalysisResult, SingleMeta};
use crate::special::std_normal_quantile;

/// One line of a forest plot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForestRow {
    pub label: String,
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
    /// `study`, `prior`, `posterior` or `frequentist`.
    pub kind: String,
}

/// Study rows (95% Wald intervals), the τ prior and posterior, the μ
/// posterior and the frequentist comparators, in display order.
pub fn forest_rows(sm: &SingleMeta, r: &MetaAnalysisResult) -> Vec<ForestRow> {
    let z = std_normal_quantile(0.975);
    let row = |label: String, estimate, lo, hi, kind: &str| ForestRow {
        label,
        estimate,
        lo,
        hi,
        kind: kind.into(),
    };
    let mut rows: Vec<ForestRow> = sm
        .labels()
        .iter()
        .zip(sm.y().iter().zip(sm.sigma()))
        .map(|(l, (&y, &s))| row(l.clone(), y, y - z * s, y + z * s, "study"))
        .collect();
    let p = &r.prior;
    rows.push(row(
        format!("tau prior {p}"),
        p.median(),
        p.quantile(0.025).unwrap_or(f64::NAN),
        p.quantile(0.975).unwrap_or(f64::NAN),
        "prior",
    ));
    rows.push(row(
        "tau posterior".into(),
        r.tau.median,
        r.tau.lo,
        r.tau.hi,
        "posterior",
    ));
    rows.push(row(
        "mu posterior".into(),
        r.mu.median,
        r.mu.lo,
        r.mu.hi,
        "posterior",
    ));
    rows.extend(
        r.comparators
            .iter()
            .map(|c| row(c.label.clone(), c.estimate, c.lo, c.hi, "frequentist")),
    );
    rows
}

pub fn forest_to_csv(rows: &[ForestRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}
