use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, UnitaryMatrix, C64};
use crate::random;

/// Objective evaluations spent on each random restart.
const EVALS_PER_RESTART: u64 = 500;

struct Objective {
    w: ComplexMatrix,
}

impl Objective {
    /// `½‖aa† − bb†‖₁ = √(1 − |⟨a|b⟩|²)` for `a = (U1⊗I)ψ`, `b = (U2⊗I)ψ`.
    fn eval(&self, psi: &[C64]) -> f64 {
        let wpsi = self.w.apply(psi);
        let overlap: C64 = psi.iter().zip(&wpsi).map(|(a, b)| a.conj() * b).sum();
        (1.0 - overlap.norm_sqr()).max(0.0).sqrt()
    }
}

fn normalized(mut v: Vec<C64>) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= n;
    }
    v
}

/// Best one-shot distinguishability of `U1` and `U2` found by searching pure
/// inputs on the system plus an equal-sized reference.
///
/// Random restarts, each refined by coordinate moves with a shrinking step.
/// The value is attained by an explicit input, so it never exceeds the
/// true half diamond distance.
pub fn brute_force_distinguishability(u1: &UnitaryMatrix, u2: &UnitaryMatrix, budget: u64, seed: u64) -> Result<f64> {
    if u1.dim() != u2.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", u1.dim(), u2.dim())));
    }
    if budget < 100 {
        return Err(Error::param("budget", format!("{budget} below 100")));
    }
    let d = u1.dim();
    let relative = u1.adjoint().compose(u2)?;
    let objective = Objective {
        w: tensor(&relative, &ComplexMatrix::identity(d)),
    };
    let mut rng = random::rng(seed);
    let restarts = (budget / EVALS_PER_RESTART).max(1);
    let per_restart = budget / restarts;
    let mut best = 0.0f64;
    for _ in 0..restarts {
        best = best.max(refine(&objective, random::state(d * d, &mut rng), per_restart, &mut rng));
    }
    Ok(best)
}

fn refine<R: Rng + ?Sized>(objective: &Objective, start: Vec<C64>, evals: u64, rng: &mut R) -> f64 {
    let mut psi = start;
    let mut value = objective.eval(&psi);
    let mut used = 1;
    let mut step = 0.5;
    let dirs = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
    while used < evals && step > 1e-10 {
        let mut improved = false;
        let n = psi.len();
        let offset = rng.random_range(0..n);
        for k in (0..n).map(|k| (k + offset) % n) {
            for dir in dirs {
                if used >= evals {
                    return value;
                }
                let mut candidate = psi.clone();
                candidate[k] += dir * step;
                let candidate = normalized(candidate);
                let v = objective.eval(&candidate);
                used += 1;
                if v > value {
                    psi = candidate;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::qpe_pair;
    use crate::discrimination::diamond_distance;

    #[test]
    fn identical_pair_scores_zero() {
        let u = random::haar_unitary(2, &mut random::rng(1));
        assert!(brute_force_distinguishability(&u, &u, 1000, 0).unwrap() < 1e-7);
    }

    #[test]
    fn recovers_closed_form_on_qubits() {
        let z = UnitaryMatrix::from_phases(&[0.0, std::f64::consts::PI]);
        let got = brute_force_distinguishability(&UnitaryMatrix::identity(2), &z, 10_000, 3).unwrap();
        assert!((got - 1.0).abs() < 5e-3);

        let case = qpe_pair(0.25).unwrap();
        let got = brute_force_distinguishability(&case.u1, &case.u2, 10_000, 3).unwrap();
        assert!((got - std::f64::consts::FRAC_1_SQRT_2).abs() < 5e-3);
    }

    #[test]
    fn never_exceeds_diamond_distance() {
        let mut rng = random::rng(10);
        for seed in 0..5 {
            let u1 = random::haar_unitary(3, &mut rng);
            let u2 = random::haar_unitary(3, &mut rng);
            let exact = diamond_distance(&u1, &u2).unwrap();
            assert!(brute_force_distinguishability(&u1, &u2, 2000, seed).unwrap() <= exact + 1e-9);
        }
    }

    #[test]
    fn validates_input() {
        let u = UnitaryMatrix::identity(2);
        assert!(brute_force_distinguishability(&u, &u, 50, 0).is_err());
        assert!(brute_force_distinguishability(&u, &UnitaryMatrix::identity(3), 500, 0).is_err());
    }
}
