use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use super::state::Statevector;
use crate::constructions::{CaseName, ConstructionCase};
use crate::error::{Error, Result};
use crate::linalg::{eig_unitary, expm_hermitian, ComplexMatrix, Sign, UnitaryMatrix, C64};
use crate::random;

pub fn hadamard() -> UnitaryMatrix {
    let h = FRAC_1_SQRT_2;
    UnitaryMatrix::new_unchecked(ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).expect("2x2"))
}

/// Exchanges two `d`-dimensional registers.
pub fn swap_gate(d: usize) -> UnitaryMatrix {
    let mut entries = vec![C64::new(0.0, 0.0); d.pow(4)];
    for a in 0..d {
        for b in 0..d {
            entries[(b * d + a) * d * d + a * d + b] = C64::new(1.0, 0.0);
        }
    }
    UnitaryMatrix::new_unchecked(ComplexMatrix::from_row_major(d * d, d * d, entries).expect("square"))
}

/// Ancilla in `|+⟩` followed by `t` controlled applications of `u` on `state`.
fn controlled_powers_prefix(u: &UnitaryMatrix, state: &Statevector) -> Result<(Statevector, std::ops::Range<usize>)> {
    if u.dim() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dim unitary on {}-dim state",
            u.dim(),
            state.dim()
        )));
    }
    let s = Statevector::zero(&[2])?.tensor(state).apply(&hadamard(), 0..1)?;
    let targets = 1..1 + state.dims().len();
    Ok((s, targets))
}

/// Probability of ancilla outcome 1 after `H`, `t` controlled-`u`, `H`, for
/// each `t` in `1..=t_max`.
pub fn qpe_outcome_curve(u: &UnitaryMatrix, state: &Statevector, t_max: u64) -> Result<Vec<f64>> {
    let (mut s, targets) = controlled_powers_prefix(u, state)?;
    let mut out = Vec::with_capacity(t_max as usize);
    for _ in 0..t_max {
        s = s.apply_controlled(0, u, targets.clone())?;
        out.push(s.apply(&hadamard(), 0..1)?.measure_prob(0, 1)?);
    }
    Ok(out)
}

/// Outcome-1 probability of phase estimation with `t` controlled queries.
pub fn controlled_power_qpe(u: &UnitaryMatrix, state: &Statevector, t: u64) -> Result<f64> {
    if t == 0 {
        return Ok(0.0);
    }
    Ok(*qpe_outcome_curve(u, state, t)?.last().expect("t ≥ 1"))
}

/// `‖Uψ − ⟨ψ|U|ψ⟩ψ‖`.
pub fn eigen_residual(u: &UnitaryMatrix, psi: &Statevector) -> Result<f64> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", u.dim(), psi.dim())));
    }
    let v = psi.amplitudes();
    let uv = u.apply(v);
    let lambda: C64 = v.iter().zip(&uv).map(|(a, b)| a.conj() * b).sum();
    Ok(uv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Hadamard test with a single controlled query on an eigenstate of `u`;
/// returns the probability of reading 1.
pub fn one_bit_qpe(u: &UnitaryMatrix, eigenstate: &Statevector) -> Result<f64> {
    let residual = eigen_residual(u, eigenstate)?;
    if residual > crate::tol::DECOMPOSITION {
        return Err(Error::NotAnEigenstate { residual });
    }
    controlled_power_qpe(u, eigenstate, 1)
}

/// Largest gap between outcome-1 probabilities for `u1` and `u2` over `t`
/// controlled queries, per `t` in `1..=t_max`.
pub fn qpe_advantage_curve(
    u1: &UnitaryMatrix,
    u2: &UnitaryMatrix,
    state: &Statevector,
    t_max: u64,
) -> Result<Vec<f64>> {
    let a = qpe_outcome_curve(u1, state, t_max)?;
    let b = qpe_outcome_curve(u2, state, t_max)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect())
}

/// SWAP test between two copies of `psi` on `C^{d_A} ⊗ C^{d_B}`; returns the
/// probability of reading 0.
pub fn swap_test(psi: &Statevector, dims: (usize, usize)) -> Result<f64> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dim state cannot split as {da}x{db}",
            psi.dim()
        )));
    }
    // Two copies laid out as A1 A2 B1 B2 so the swapped registers are adjacent.
    let v = psi.amplitudes();
    let mut amps = vec![C64::new(0.0, 0.0); psi.dim() * psi.dim()];
    for a1 in 0..da {
        for a2 in 0..da {
            for b1 in 0..db {
                for b2 in 0..db {
                    let idx = ((a1 * da + a2) * db + b1) * db + b2;
                    amps[idx] = v[a1 * db + b1] * v[a2 * db + b2];
                }
            }
        }
    }
    let copies = Statevector::new(&[da, da, db, db], amps)?;
    let s = Statevector::zero(&[2])?
        .tensor(&copies)
        .apply(&hadamard(), 0..1)?
        .apply_controlled(0, &swap_gate(da), 1..3)?
        .apply(&hadamard(), 0..1)?;
    s.measure_prob(0, 0)
}

fn reflection_deviation(u: &UnitaryMatrix) -> f64 {
    u.power(2).max_abs_diff(&ComplexMatrix::identity(u.dim()))
}

/// The state `ψ` of a reflection `I − 2|ψ⟩⟨ψ|`.
pub fn reflection_state(u: &UnitaryMatrix) -> Result<Vec<C64>> {
    let deviation = reflection_deviation(u);
    if deviation > crate::tol::DECOMPOSITION {
        return Err(Error::NotAReflection { deviation });
    }
    let pairs = eig_unitary(u)?;
    let minus: Vec<_> = pairs
        .iter()
        .filter(|p| (p.phase - std::f64::consts::PI).abs() < 1e-6)
        .collect();
    match minus.as_slice() {
        [p] => Ok(p.vector.clone()),
        _ => Err(Error::NotAReflection {
            deviation: minus.len() as f64,
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CopyOutcome {
    pub state: Statevector,
    pub succeeded: bool,
    pub success_prob: f64,
    pub queries: u64,
    pub seed: u64,
}

/// One controlled query of a reflection on `|+⟩|0…0⟩`, then a Hadamard-basis
/// measurement of the control; outcome `−` leaves the target in `ψ`.
pub fn copy_from_reflection(u: &UnitaryMatrix, seed: u64) -> Result<CopyOutcome> {
    copy_from_reflection_with(u, seed, &mut random::rng(seed))
}

fn copy_from_reflection_with<R: Rng + ?Sized>(u: &UnitaryMatrix, seed: u64, rng: &mut R) -> Result<CopyOutcome> {
    let deviation = reflection_deviation(u);
    if deviation > crate::tol::DECOMPOSITION {
        return Err(Error::NotAReflection { deviation });
    }
    let target = Statevector::zero(&[u.dim()])?;
    let s = Statevector::zero(&[2])?
        .tensor(&target)
        .apply(&hadamard(), 0..1)?
        .apply_controlled(0, u, 1..2)?
        .apply(&hadamard(), 0..1)?;
    let success_prob = s.measure_prob(0, 1)?;
    let succeeded = rng.random::<f64>() < success_prob;
    let outcome = usize::from(succeeded);
    let state = match s.postselect(0, outcome)? {
        Some(state) => state,
        None => s.postselect(0, 1 - outcome)?.expect("one branch has weight"),
    };
    Ok(CopyOutcome {
        state,
        succeeded,
        success_prob,
        queries: 1,
        seed,
    })
}

/// Failure probability allowed to the purity estimate.
pub const ENTROPY_CONFIDENCE_DELTA: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub estimate: f64,
    pub exact: f64,
    pub purity_mean: f64,
    pub purity_estimate: f64,
    pub epsilon: f64,
    pub shots: u64,
    pub copies: u64,
    pub queries: u64,
    pub seed: u64,
}

/// Rényi-2 entanglement entropy of the state reflected by `u`, from SWAP
/// tests on prepared copies.
///
/// The purity is estimated to additive `ε/2` with `ε = Δe^{−S_upper}/4`,
/// shifted up by `ε/2` and inverted. Each copy is charged `⌈√d_A⌉` queries.
pub fn entropy_estimate(
    u: &UnitaryMatrix,
    dims: (usize, usize),
    s_upper: f64,
    delta: f64,
    seed: u64,
) -> Result<EntropyEstimate> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::param("delta", format!("{delta} not in (0, 1]")));
    }
    if !(s_upper >= 0.0 && s_upper.is_finite()) {
        return Err(Error::param("s_upper", format!("{s_upper} must be finite and ≥ 0")));
    }
    let psi = Statevector::new(&[dims.0 * dims.1], reflection_state(u)?)
        .map_err(|_| Error::DimensionMismatch(format!("{}-dim reflection for {dims:?}", u.dim())))?;
    let p0 = swap_test(&psi, dims)?;
    let purity = (2.0 * p0 - 1.0).clamp(0.0, 1.0);
    let exact = -purity.ln();
    if exact > s_upper + 1e-9 {
        return Err(Error::param("s_upper", format!("entropy {exact} exceeds bound {s_upper}")));
    }

    let epsilon = delta * (-s_upper).exp() / 4.0;
    let tolerance = epsilon / 4.0;
    let shots = ((2.0 / ENTROPY_CONFIDENCE_DELTA).ln() / (2.0 * tolerance * tolerance)).ceil() as u64;
    let zeros = Binomial::new(shots, p0.clamp(0.0, 1.0))
        .map_err(|e| Error::SelfCheckFailed(e.to_string()))?
        .sample(&mut random::rng(seed));
    let purity_mean = 2.0 * zeros as f64 / shots as f64 - 1.0;
    let purity_estimate = (purity_mean + epsilon / 2.0).clamp((-s_upper).exp(), 1.0);
    let copies = 2 * shots;
    let per_copy = (dims.0 as f64).sqrt().ceil() as u64;
    Ok(EntropyEstimate {
        estimate: -purity_estimate.ln(),
        exact,
        purity_mean,
        purity_estimate,
        epsilon,
        shots,
        copies,
        queries: per_copy * copies,
        seed,
    })
}

/// `|Pr[− | u2] − Pr[− | u1]|` for input `|+⟩` and a Hadamard-basis measurement.
pub fn hadamard_basis_advantage(u1: &UnitaryMatrix, u2: &UnitaryMatrix) -> Result<f64> {
    if u1.dim() != 2 || u2.dim() != 2 {
        return Err(Error::DimensionMismatch("Hadamard-basis test acts on one qubit".into()));
    }
    let plus = Statevector::zero(&[2])?.apply(&hadamard(), 0..1)?;
    let minus_prob = |u: &UnitaryMatrix| -> Result<f64> {
        plus.apply(u, 0..1)?.apply(&hadamard(), 0..1)?.measure_prob(0, 1)
    };
    Ok((minus_prob(u2)? - minus_prob(u1)?).abs())
}

/// Evolves `|+⟩` under both Hamiltonians of a `hamsim` case for `t = 2πt′`
/// and returns the Hadamard-basis advantage.
pub fn hamsim_discriminator(case: &ConstructionCase) -> Result<f64> {
    if case.name != CaseName::Hamsim {
        return Err(Error::WrongCase {
            expected: "hamsim",
            found: case.name.to_string(),
        });
    }
    let (h1, h2) = case.hamiltonians.as_ref().ok_or_else(|| Error::WrongCase {
        expected: "hamsim",
        found: "case without Hamiltonians".into(),
    })?;
    let t = case.params["t"];
    let u1 = expm_hermitian(h1.matrix(), t, Sign::Minus)?;
    let u2 = expm_hermitian(h2.matrix(), t, Sign::Minus)?;
    hadamard_basis_advantage(&u1, &u2)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use super::*;
    use crate::constructions::{entanglement_pair, entanglement_states, hamsim_pair, qpe_pair, reflection_about};
    use crate::linalg::{partial_trace, DensityMatrix, Keep};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn one_bit_qpe_examples() {
        let e0 = Statevector::zero(&[2]).unwrap();
        for (theta, want) in [(0.0, 0.0), (0.5, 1.0), (0.0625, (PI / 16.0).sin().powi(2))] {
            let u = UnitaryMatrix::from_phases(&[TAU * theta, 0.0]);
            assert!((one_bit_qpe(&u, &e0).unwrap() - want).abs() < 1e-12);
        }
        let plus = Statevector::from_amplitudes(vec![c(FRAC_1_SQRT_2); 2]).unwrap();
        let u = UnitaryMatrix::from_phases(&[1.0, 0.0]);
        assert!(matches!(one_bit_qpe(&u, &plus), Err(Error::NotAnEigenstate { .. })));
    }

    #[test]
    fn powers_follow_phase_multiples() {
        let eps = 0.01;
        let case = qpe_pair(eps).unwrap();
        let e0 = Statevector::zero(&[2]).unwrap();
        let curve = qpe_advantage_curve(&case.u1, &case.u2, &e0, 30).unwrap();
        for (k, adv) in curve.iter().enumerate() {
            let t = (k + 1) as f64;
            assert!((adv - (PI * t * eps).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_test_examples() {
        let product = Statevector::zero(&[4]).unwrap();
        assert!((swap_test(&product, (2, 2)).unwrap() - 1.0).abs() < 1e-12);
        let (bell, psi2) = entanglement_states(0.25);
        let bell = Statevector::from_amplitudes(bell).unwrap();
        assert!((swap_test(&bell, (2, 2)).unwrap() - 0.75).abs() < 1e-12);
        let psi2 = Statevector::from_amplitudes(psi2).unwrap();
        assert!((swap_test(&psi2, (2, 2)).unwrap() - 0.8125).abs() < 1e-12);
        assert!(swap_test(&bell, (2, 3)).is_err());
    }

    #[test]
    fn swap_test_matches_purity() {
        let mut rng = random::rng(33);
        for (da, db) in [(2, 2), (2, 3), (3, 2)] {
            let v = random::state(da * db, &mut rng);
            let rho = partial_trace(&DensityMatrix::from_pure(&v).unwrap(), (da, db), Keep::A).unwrap();
            let psi = Statevector::from_amplitudes(v).unwrap();
            assert!((swap_test(&psi, (da, db)).unwrap() - 0.5 - 0.5 * rho.purity()).abs() < 1e-9);
        }
    }

    #[test]
    fn copy_examples() {
        let case = entanglement_pair(0.25).unwrap();
        let (_, psi2) = entanglement_states(0.25);
        let mut saw_success = false;
        for seed in 0..20 {
            let out = copy_from_reflection(&case.u2, seed).unwrap();
            assert!((out.success_prob - 0.75).abs() < 1e-12);
            assert_eq!(out.queries, 1);
            if out.succeeded {
                saw_success = true;
                let want = Statevector::from_amplitudes(psi2.clone()).unwrap();
                assert!((out.state.inner(&want).unwrap().norm() - 1.0).abs() < 1e-9);
            }
        }
        assert!(saw_success);
        let out = copy_from_reflection(&case.u1, 1).unwrap();
        assert!((out.success_prob - 0.5).abs() < 1e-12);

        let not_reflection = UnitaryMatrix::from_phases(&[0.5, 0.0]);
        assert!(matches!(
            copy_from_reflection(&not_reflection, 0),
            Err(Error::NotAReflection { .. })
        ));
    }

    #[test]
    fn entropy_estimate_examples() {
        let (bell, _) = entanglement_states(0.0);
        let u = reflection_about(&bell).unwrap();
        let r = entropy_estimate(&u, (2, 2), std::f64::consts::LN_2, 0.2, 4).unwrap();
        assert!((r.estimate - std::f64::consts::LN_2).abs() <= 0.05);
        assert_eq!(r.queries, 2 * r.copies);

        let product = reflection_about(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let r = entropy_estimate(&product, (2, 2), 0.5, 0.2, 4).unwrap();
        assert!(r.estimate.abs() <= 0.05);

        assert!(entropy_estimate(&u, (2, 2), 0.1, 0.2, 0).is_err());
        assert!(entropy_estimate(&u, (2, 2), 1.0, 0.0, 0).is_err());
    }

    #[test]
    fn entropy_error_chain() {
        // |ln(x/(x+ε))| ≤ ε e^{S_upper} for x ≥ e^{−S_upper}.
        for s_upper in [0.1, 0.5, 1.0, 2.0] {
            let eps = 0.2 * f64::exp(-s_upper) / 4.0;
            let mut x = f64::exp(-s_upper);
            while x <= 1.0 {
                assert!((x / (x + eps)).ln().abs() <= eps * s_upper.exp() + 1e-15);
                x += 0.01;
            }
        }
    }

    #[test]
    fn hamsim_examples() {
        for t_prime in [1.0, 2.0, 8.0] {
            let adv = hamsim_discriminator(&hamsim_pair(t_prime).unwrap()).unwrap();
            assert!((adv - 1.0).abs() < 1e-9);
        }
        assert!(matches!(
            hamsim_discriminator(&qpe_pair(0.1).unwrap()),
            Err(Error::WrongCase { .. })
        ));
        let u = UnitaryMatrix::from_phases(&[0.3, 1.1]);
        assert!(hadamard_basis_advantage(&u, &u).unwrap() < 1e-15);
    }

    #[test]
    fn hamsim_survives_small_perturbation() {
        let case = hamsim_pair(1.0).unwrap();
        let (h1, h2) = case.hamiltonians.as_ref().unwrap();
        let t = case.params["t"];
        let u1 = expm_hermitian(h1.matrix(), t, Sign::Minus).unwrap();
        let u2 = expm_hermitian(h2.matrix(), t, Sign::Minus).unwrap();
        // Rotations whose channel distance from the exact evolution is sin(0.3) < 1/3.
        let kick = UnitaryMatrix::from_phases(&[0.6, 0.0]);
        let p1 = u1.compose(&kick).unwrap();
        let p2 = kick.compose(&u2).unwrap();
        assert!(crate::discrimination::diamond_distance(&u1, &p1).unwrap() <= 1.0 / 3.0);
        assert!(hadamard_basis_advantage(&p1, &p2).unwrap() >= 1.0 / 3.0);
    }
}
