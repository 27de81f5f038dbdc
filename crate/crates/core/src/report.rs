//! Machine-readable reports: named checks, measured and predicted values,
//! and a canonical JSON rendering (sorted keys, 17 significant digits) so
//! identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{CaseName, ConstructionCase, PredictionKind};
use crate::discrimination::{query_lower_bound, SpectralReport};
use crate::error::Result;
use crate::linalg::{op_norm, partial_trace, DensityMatrix, Keep};
use crate::simulator::{hamsim_discriminator, one_bit_qpe, Statevector};

/// Reported in place of a query lower bound when the pair is identical.
pub const NO_LOWER_BOUND: &str = "none";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|measured − expected| ≤ tolerance`.
    Equality,
    /// `measured ≤ expected + tolerance`.
    UpperBound,
    /// `measured ≥ expected − tolerance`.
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub kind: CheckKind,
}

impl Check {
    pub fn new(name: impl Into<String>, kind: CheckKind, measured: f64, expected: f64, tolerance: f64) -> Self {
        let pass = match kind {
            CheckKind::Equality => (measured - expected).abs() <= tolerance,
            CheckKind::UpperBound => measured <= expected + tolerance,
            CheckKind::LowerBound => measured >= expected - tolerance,
        };
        Self {
            name: name.into(),
            pass,
            measured,
            expected,
            tolerance,
            kind,
        }
    }

    pub fn equality(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(name, CheckKind::Equality, measured, expected, tolerance)
    }

    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self::new(name, CheckKind::UpperBound, measured, bound, tolerance)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self::new(name, CheckKind::LowerBound, measured, bound, tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub predictions: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub seed: Option<u64>,
    pub wall_time_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            predictions: BTreeMap::new(),
            checks: Vec::new(),
            seed: None,
            wall_time_ms: 0,
            table: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        write_value(&mut out, &value, 0);
        out.push('\n');
        out
    }

    /// The table if there is one, otherwise the checks.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.table {
            Some(table) => {
                out.push_str(&table.columns.join(","));
                out.push('\n');
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("name,pass,measured,expected,tolerance,kind\n");
                for c in &self.checks {
                    let kind = serde_json::to_value(c.kind).expect("kind serializes");
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        c.name,
                        c.pass,
                        c.measured,
                        c.expected,
                        c.tolerance,
                        kind.as_str().unwrap_or_default()
                    );
                }
            }
        }
        out
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn format_number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        format!("{:.16e}", n.as_f64().expect("f64 number"))
    } else {
        n.to_string()
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[k.as_str()], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Query lower bound as JSON, with a sentinel for indistinguishable pairs.
pub fn lower_bound_value(half_diamond: f64) -> Value {
    if half_diamond <= 0.0 {
        Value::String(NO_LOWER_BOUND.into())
    } else {
        query_lower_bound(half_diamond.min(1.0)).map_or(Value::String(NO_LOWER_BOUND.into()), |t| json!(t))
    }
}

/// Everything the spectral analysis says about a pair, as report results.
pub fn spectral_results(u1: &crate::UnitaryMatrix, u2: &crate::UnitaryMatrix) -> Result<BTreeMap<String, Value>> {
    let s = SpectralReport::analyze(u1, u2)?;
    let mut r = BTreeMap::new();
    r.insert("relative_eigenphases".into(), json!(s.phases.phases()));
    r.insert("arc_length".into(), json!(s.arc_length));
    r.insert("origin_in_hull".into(), json!(s.origin_in_hull));
    r.insert("hull_distance".into(), s.hull_distance.map_or(Value::Null, |d| json!(d)));
    r.insert("diamond_distance".into(), json!(s.diamond_distance));
    r.insert("min_phase_opnorm".into(), json!(s.min_phase_opnorm));
    r.insert("min_phase_argmin".into(), json!(s.min_phase_argmin));
    r.insert("aligning_phase".into(), json!(s.aligning_phase));
    r.insert("query_lower_bound".into(), lower_bound_value(s.diamond_distance));
    r.insert(
        "one_shot_success".into(),
        json!(crate::discrimination::one_shot_success(s.diamond_distance)),
    );
    Ok(r)
}

/// Measured values, predictions and checks for one gallery case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GalleryRow {
    pub case: CaseName,
    pub claim: &'static str,
    pub params: BTreeMap<String, f64>,
    pub results: BTreeMap<String, Value>,
    pub predictions: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

pub fn gallery_row(case: &ConstructionCase, tolerance: f64) -> Result<GalleryRow> {
    let claim = case.name.claim_id();
    let name = |what: &str| format!("{claim}:{what}");
    let spectral = SpectralReport::analyze(&case.u1, &case.u2)?;
    let half = spectral.diamond_distance;
    let opnorm = op_norm(&(case.u1.matrix() - case.u2.matrix()));
    let meta = |k: &str| case.metadata[k];
    let p = |k: &str| case.params[k];

    let mut results = BTreeMap::new();
    results.insert("diamond_distance".to_string(), json!(half));
    results.insert("opnorm_difference".to_string(), json!(opnorm));
    results.insert("min_phase_opnorm".to_string(), json!(spectral.min_phase_opnorm));
    results.insert("origin_in_hull".to_string(), json!(spectral.origin_in_hull));
    results.insert("query_lower_bound".to_string(), lower_bound_value(half));

    let mut predictions = BTreeMap::new();
    let prediction_key = match case.predicted_half_diamond.kind {
        PredictionKind::Exact => "diamond_distance",
        PredictionKind::UpperBound => "diamond_distance_upper_bound",
    };
    predictions.insert(prediction_key.to_string(), json!(case.predicted_half_diamond.value));
    predictions.insert("query_lower_bound".to_string(), json!(case.predicted_lower_bound));
    if let Some(b) = case.opnorm_bound {
        predictions.insert("opnorm_upper_bound".to_string(), json!(b));
    }
    for (k, v) in &case.metadata {
        predictions.insert(k.clone(), json!(v));
    }

    let mut checks = Vec::new();
    let eq = |what: &str, m: f64, e: f64| Check::equality(name(what), m, e, tolerance);
    let le = |what: &str, m: f64, e: f64| Check::at_most(name(what), m, e, tolerance);
    let ge = |what: &str, m: f64, e: f64| Check::at_least(name(what), m, e, tolerance);
    match case.name {
        CaseName::Qpe => {
            checks.push(eq("diamond == sin(pi*eps)", half, (PI * p("epsilon")).sin()));
        }
        CaseName::Entanglement => {
            let delta = p("delta");
            checks.push(eq("diamond == sqrt(delta)", half, delta.sqrt()));
            let (_, psi2) = crate::constructions::entanglement_states(delta);
            let rho = partial_trace(&DensityMatrix::from_pure(&psi2)?, (2, 2), Keep::A)?;
            results.insert("reduced_purity_2".into(), json!(rho.purity()));
            checks.push(eq("reduced_purity_2 == (1+delta)/2", rho.purity(), (1.0 + delta) / 2.0));
            checks.push(ge("entropy_gap >= delta/2", meta("entropy_gap"), delta / 2.0));
        }
        CaseName::Ssv | CaseName::Qae => {
            let alpha = meta("alpha");
            checks.push(eq("diamond == 2*sqrt(alpha-alpha^2)", half, 2.0 * (alpha - alpha * alpha).sqrt()));
            checks.push(le("diamond <= 2/sqrt(|S|)", half, meta("half_diamond_bound")));
            if case.name == CaseName::Qae {
                let a1 = case.u1.get(0, 0).norm();
                let a2 = case.u2.get(0, 0).norm();
                results.insert("amplitude_1".into(), json!(a1));
                results.insert("amplitude_2".into(), json!(a2));
                checks.push(eq("amplitude_1 == 1/sqrt(|S|)", a1, meta("realized_epsilon")));
                checks.push(eq("amplitude_2 == 0", a2, 0.0));
            }
        }
        CaseName::Gibbs => {
            checks.push(eq("opnorm == closed_form", opnorm, meta("opnorm_closed_form")));
            checks.push(le("opnorm <= 3/beta", opnorm, 3.0 / p("beta")));
            let td = meta("thermal_trace_distance");
            results.insert("thermal_trace_distance".into(), json!(td));
            checks.push(eq("thermal_trace_distance == 1-2/(1+e^2)", td, meta("thermal_trace_distance_closed_form")));
            checks.push(ge("thermal_trace_distance >= 3/4", td, 0.75));
        }
        CaseName::Hamsim => {
            checks.push(eq("opnorm == closed_form", opnorm, meta("opnorm_closed_form")));
            checks.push(le("opnorm <= 1/t_prime", opnorm, 1.0 / p("t_prime")));
            let adv = hamsim_discriminator(case)?;
            results.insert("hadamard_basis_advantage".into(), json!(adv));
            checks.push(eq("hadamard_basis_advantage == 1", adv, 1.0));
        }
        CaseName::Learning => {
            checks.push(eq("diamond == |sin(t*eps)|", half, (p("t") * p("epsilon")).sin().abs()));
        }
        CaseName::Gsp => {
            let delta = p("delta");
            checks.push(le("opnorm <= 2*delta", opnorm, 2.0 * delta));
            checks.push(eq("opnorm == 2*sin(asin(delta)/2)", opnorm, meta("opnorm_exact")));
            checks.push(eq("spectral_gap_1 == delta", meta("spectral_gap_1"), delta));
            checks.push(eq("spectral_gap_2 == delta", meta("spectral_gap_2"), delta));
        }
        CaseName::SbqpOracle => {
            let theta = p("theta");
            let accept = one_bit_qpe(&case.u2, &Statevector::zero(&[2])?)?;
            results.insert("qpe_acceptance".into(), json!(accept));
            checks.push(eq("qpe_acceptance == sin^2(pi*theta)", accept, (PI * theta).sin().powi(2)));
            checks.push(ge("qpe_acceptance >= 2^(-2p)", accept, meta("qpe_acceptance_floor")));
            checks.push(eq("diamond == sin(pi*theta)", half, (PI * theta).sin()));
        }
    }
    if case.predicted_half_diamond.kind == PredictionKind::UpperBound {
        checks.push(le("diamond <= predicted_bound", half, case.predicted_half_diamond.value));
    }

    Ok(GalleryRow {
        case: case.name,
        claim,
        params: case.params.clone(),
        results,
        predictions,
        checks,
    })
}
