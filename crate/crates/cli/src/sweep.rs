use anyhow::Result;
use serde_json::json;
use unidisc_core::report::{Check, Report, Table};
use unidisc_core::simulator::{heisenberg_sweep, MAX_SCALING_RATIO};

use crate::UsageError;

/// Success advantage the phase-estimation scan must reach.
pub const DEFAULT_TARGET: f64 = 1.0 / 3.0;

pub fn cmd_sweep(epsilons: &[f64], target: f64, tolerance: f64) -> Result<Report> {
    if epsilons.is_empty() {
        return Err(UsageError("sweep needs at least one epsilon".into()).into());
    }
    let rows = heisenberg_sweep(epsilons, target)?;

    let mut report = Report::new("sweep");
    report.inputs.insert("epsilons".into(), json!(epsilons));
    report.inputs.insert("target".into(), json!(target));
    report.inputs.insert("tolerance".into(), json!(tolerance));
    report.results.insert("rows".into(), json!(rows));

    for row in &rows {
        let eps = row.epsilon;
        report.checks.push(Check::at_least(
            format!("eps={eps}: T_min >= T_lb"),
            row.t_min as f64,
            row.t_lower_bound as f64,
            0.0,
        ));
        report.checks.push(Check::at_most(
            format!("eps={eps}: T_min/T_lb <= {MAX_SCALING_RATIO}"),
            row.ratio,
            MAX_SCALING_RATIO,
            tolerance,
        ));
        report.checks.push(Check::at_most(
            format!("eps={eps}: advantage(T_lb) <= hybrid bound"),
            row.advantage_at_lower_bound,
            row.upper_bound_at_lower_bound,
            tolerance,
        ));
    }

    let mut by_eps: Vec<_> = rows.iter().collect();
    by_eps.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    for pair in by_eps.windows(2) {
        let (small, large) = (pair[0], pair[1]);
        report.checks.push(Check::at_most(
            format!("T_min(eps={}) <= T_min(eps={})", large.epsilon, small.epsilon),
            large.t_min as f64,
            small.t_min as f64,
            0.0,
        ));
    }

    report.table = Some(Table {
        columns: ["epsilon", "T_min", "T_lb", "ratio"].map(String::from).to_vec(),
        rows: rows
            .iter()
            .map(|r| vec![json!(r.epsilon), json!(r.t_min), json!(r.t_lower_bound), json!(r.ratio)])
            .collect(),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let r = cmd_sweep(&[0.01], DEFAULT_TARGET, 1e-9).unwrap();
        let table = r.table.unwrap();
        assert_eq!(table.rows[0][1], json!(20));
        assert!(r.checks.iter().all(|c| c.pass));
    }

    #[test]
    fn inverse_linear_steps() {
        let r = cmd_sweep(&[0.05, 0.01, 0.002], DEFAULT_TARGET, 1e-9).unwrap();
        assert!(r.all_pass());
        let t: Vec<f64> = r.table.unwrap().rows.iter().map(|row| row[1].as_f64().unwrap()).collect();
        assert!((t[1] / t[0] - 5.0).abs() < 0.5 && (t[2] / t[1] - 5.0).abs() < 0.5, "{t:?}");
    }

    #[test]
    fn empty_and_out_of_range() {
        assert_eq!(crate::exit_code(&cmd_sweep(&[], DEFAULT_TARGET, 1e-9).unwrap_err()), crate::exit::USAGE);
        assert_eq!(
            crate::exit_code(&cmd_sweep(&[0.5], DEFAULT_TARGET, 1e-9).unwrap_err()),
            crate::exit::PARAM_RANGE
        );
    }
}
