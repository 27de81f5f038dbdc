use std::collections::BTreeMap;

use anyhow::{Context, Result};
use serde_json::{json, Value};
use unidisc_core::report::{gallery_row, Report, Table};
use unidisc_core::{CaseName, ConstructionCase, PredictionKind};

use crate::UsageError;

/// Builds every case (or just `filter`) with `params` overriding the
/// defaults, and collects one row of checks per case.
pub fn cmd_gallery(filter: Option<CaseName>, params: &[(String, f64)], tolerance: f64) -> Result<Report> {
    let cases: Vec<CaseName> = match filter {
        Some(name) => vec![name],
        None => CaseName::ALL.to_vec(),
    };
    let overrides: BTreeMap<String, f64> = params.iter().cloned().collect();
    for key in overrides.keys() {
        if !cases.iter().any(|c| c.parameters().contains(&key.as_str())) {
            let scope = filter.map_or("any case".to_string(), |c| format!("`{c}`"));
            return Err(UsageError(format!("parameter `{key}` is not used by {scope}")).into());
        }
    }

    let mut report = Report::new("gallery");
    report
        .inputs
        .insert("case".into(), json!(filter.map_or("all", CaseName::as_str)));
    report.inputs.insert("params".into(), json!(overrides));
    report.inputs.insert("tolerance".into(), json!(tolerance));

    let mut rows = Vec::new();
    for name in cases {
        let case = ConstructionCase::build(name, &overrides).with_context(|| format!("building `{name}`"))?;
        let row = gallery_row(&case, tolerance).with_context(|| format!("checking `{name}`"))?;
        let passed = row.checks.iter().filter(|c| c.pass).count();
        rows.push(vec![
            json!(name.as_str()),
            json!(row.claim),
            row.results["diamond_distance"].clone(),
            json!(case.predicted_half_diamond.value),
            json!(match case.predicted_half_diamond.kind {
                PredictionKind::Exact => "exact",
                PredictionKind::UpperBound => "upper_bound",
            }),
            row.results["query_lower_bound"].clone(),
            json!(format!("{passed}/{}", row.checks.len())),
            json!(passed == row.checks.len()),
        ]);

        let mut results = row.results;
        results.insert("params".into(), json!(row.params));
        results.insert("claim".into(), json!(row.claim));
        report.results.insert(name.to_string(), Value::Object(results.into_iter().collect()));
        report
            .predictions
            .insert(name.to_string(), Value::Object(row.predictions.into_iter().collect()));
        report.checks.extend(row.checks);
    }
    report.table = Some(Table {
        columns: [
            "case",
            "claim",
            "diamond_distance",
            "prediction",
            "prediction_kind",
            "query_lower_bound",
            "checks",
            "pass",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    });
    Ok(report)
}
