use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::json;
use unidisc_core::discrimination::SpectralReport;
use unidisc_core::linalg::MatrixFile;
use unidisc_core::report::{spectral_results, Check, Report};
use unidisc_core::UnitaryMatrix;

/// Reads a matrix file and checks that it holds a unitary.
pub fn load_unitary(path: &Path) -> Result<UnitaryMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let matrix = MatrixFile::from_json(&text)
        .and_then(|f| f.to_matrix())
        .with_context(|| format!("parsing {}", path.display()))?;
    UnitaryMatrix::new(matrix).with_context(|| format!("checking {}", path.display()))
}

pub fn cmd_analyze(u1_path: &Path, u2_path: &Path, tolerance: f64) -> Result<Report> {
    let u1 = load_unitary(u1_path)?;
    let u2 = load_unitary(u2_path)?;
    let spectral = SpectralReport::analyze(&u1, &u2)?;

    let mut report = Report::new("analyze");
    report.inputs.insert("u1".into(), json!(u1_path.display().to_string()));
    report.inputs.insert("u2".into(), json!(u2_path.display().to_string()));
    report.inputs.insert("dim".into(), json!(u1.dim()));
    report.inputs.insert("tolerance".into(), json!(tolerance));
    report.results = spectral_results(&u1, &u2)?;

    let half = spectral.diamond_distance;
    let m = spectral.min_phase_opnorm;
    if spectral.origin_in_hull {
        report.predictions.insert("diamond_distance".into(), json!(1.0));
        report.checks.push(Check::equality("diamond_distance == 1 (origin in hull)", half, 1.0, tolerance));
    } else {
        let from_arc = 2.0 * (spectral.arc_length / 4.0).sin();
        report.predictions.insert("diamond_distance".into(), json!((spectral.arc_length / 2.0).sin()));
        report.predictions.insert("min_phase_opnorm".into(), json!(from_arc));
        report.checks.push(Check::equality(
            "diamond_distance == sin(arc/2)",
            half,
            (spectral.arc_length / 2.0).sin(),
            tolerance,
        ));
        report.checks.push(Check::equality("min_phase_opnorm == 2*sin(arc/4)", m, from_arc, tolerance));
        report.checks.push(Check::at_most("diamond_distance <= min_phase_opnorm", half, m, tolerance));
        report.checks.push(Check::at_most("min_phase_opnorm <= 2*diamond_distance", m, 2.0 * half, tolerance));
    }
    report.predictions.insert("one_shot_success".into(), json!(0.5 + 0.5 * half));
    Ok(report)
}
