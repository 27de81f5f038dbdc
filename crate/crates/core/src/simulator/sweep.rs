use serde::Serialize;

use super::protocols::qpe_advantage_curve;
use super::state::Statevector;
use crate::constructions::qpe_pair;
use crate::discrimination::{advantage_upper_bound, query_lower_bound};
use crate::error::{Error, Result};

/// Largest ratio `T_min / T_lb` counted as consistent with `Θ(1/ε)` scaling.
pub const MAX_SCALING_RATIO: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub t_min: u64,
    pub t_lower_bound: u64,
    pub ratio: f64,
    pub advantage_at_t_min: f64,
    pub advantage_at_lower_bound: f64,
    pub upper_bound_at_lower_bound: f64,
    /// `T_lb ≤ T_min ≤ 4·T_lb`.
    pub consistent: bool,
}

/// For each `ε`, the fewest controlled queries of the `qpe` pair whose
/// phase-estimation advantage reaches `target`, next to the query lower bound.
pub fn heisenberg_sweep(epsilons: &[f64], target: f64) -> Result<Vec<SweepRow>> {
    if epsilons.is_empty() {
        return Err(Error::param("epsilons", "empty list"));
    }
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::param("target", format!("{target} not in (0, 1]")));
    }
    epsilons.iter().map(|&eps| sweep_point(eps, target)).collect()
}

fn sweep_point(epsilon: f64, target: f64) -> Result<SweepRow> {
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(Error::param("epsilon", format!("{epsilon} not in (0, 0.1]")));
    }
    let case = qpe_pair(epsilon)?;
    let half = case.predicted_half_diamond.value;
    let t_lb = query_lower_bound(half)?;
    // Advantage sin²(πTε) peaks at Tε = ½.
    let t_max = (0.5 / epsilon).ceil() as u64 + 1;
    let curve = qpe_advantage_curve(&case.u1, &case.u2, &Statevector::zero(&[2])?, t_max.max(t_lb))?;
    let t_min = curve
        .iter()
        .position(|&a| a >= target - 1e-12)
        .map(|k| k as u64 + 1)
        .ok_or_else(|| Error::SelfCheckFailed(format!("target {target} unreachable at ε = {epsilon}")))?;
    let ratio = t_min as f64 / t_lb as f64;
    Ok(SweepRow {
        epsilon,
        t_min,
        t_lower_bound: t_lb,
        ratio,
        advantage_at_t_min: curve[t_min as usize - 1],
        advantage_at_lower_bound: curve[t_lb as usize - 1],
        upper_bound_at_lower_bound: advantage_upper_bound(t_lb, half),
        consistent: t_min >= t_lb && ratio <= MAX_SCALING_RATIO,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_examples() {
        let rows = heisenberg_sweep(&[0.05, 0.01, 0.002], 1.0 / 3.0).unwrap();
        let t_min: Vec<u64> = rows.iter().map(|r| r.t_min).collect();
        let t_lb: Vec<u64> = rows.iter().map(|r| r.t_lower_bound).collect();
        assert_eq!(t_min, [4, 20, 98]);
        assert_eq!(t_lb, [3, 11, 54]);
        for r in &rows {
            assert!(r.consistent);
            assert!(r.advantage_at_lower_bound <= r.upper_bound_at_lower_bound);
        }
    }

    #[test]
    fn ratio_stable_across_a_decade() {
        let rows = heisenberg_sweep(&[0.01, 0.001], 1.0 / 3.0).unwrap();
        assert!((rows[0].ratio - rows[1].ratio).abs() < 0.2);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(heisenberg_sweep(&[], 0.3).is_err());
        assert!(heisenberg_sweep(&[0.2], 0.3).is_err());
        assert!(heisenberg_sweep(&[0.01], 0.0).is_err());
    }
}
