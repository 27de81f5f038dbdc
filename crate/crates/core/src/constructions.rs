//! The concrete unitary pairs behind each lower bound.
//!
//! Every constructor returns a [`ConstructionCase`]: the two unitaries, the
//! parameters that produced them, and what theory predicts about them (the
//! half diamond distance or an operator-norm bound on `U1 − U2`) together
//! with the implied query lower bound.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::discrimination::query_lower_bound;
use crate::error::{Error, Result};
use crate::linalg::{
    eigh, expm_hermitian, singular_values, svd, ComplexMatrix, DensityMatrix, Sign, UnitaryMatrix,
    C64,
};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseName {
    Qpe,
    Entanglement,
    Ssv,
    Qae,
    Gibbs,
    Hamsim,
    Learning,
    Gsp,
    SbqpOracle,
}

impl CaseName {
    pub const ALL: [CaseName; 9] = [
        CaseName::Qpe,
        CaseName::Entanglement,
        CaseName::Ssv,
        CaseName::Qae,
        CaseName::Gibbs,
        CaseName::Hamsim,
        CaseName::Learning,
        CaseName::Gsp,
        CaseName::SbqpOracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseName::Qpe => "qpe",
            CaseName::Entanglement => "entanglement",
            CaseName::Ssv => "ssv",
            CaseName::Qae => "qae",
            CaseName::Gibbs => "gibbs",
            CaseName::Hamsim => "hamsim",
            CaseName::Learning => "learning",
            CaseName::Gsp => "gsp",
            CaseName::SbqpOracle => "sbqp_oracle",
        }
    }

    /// Identifier of the lower-bound claim this case instantiates.
    pub fn claim_id(self) -> &'static str {
        match self {
            CaseName::Qpe => "claim_qpe",
            CaseName::Entanglement => "claim_qep",
            CaseName::Ssv => "claim_ssv",
            CaseName::Qae => "cor_qae",
            CaseName::Gibbs => "claim_qgs",
            CaseName::Hamsim => "claim_hs",
            CaseName::Learning => "claim_learning",
            CaseName::Gsp => "claim_gsp",
            CaseName::SbqpOracle => "thm_orsep_gadget",
        }
    }

    /// Override keys understood by [`ConstructionCase::build`].
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            CaseName::Qpe | CaseName::Qae => &["epsilon"],
            CaseName::Entanglement | CaseName::Gsp => &["delta"],
            CaseName::Ssv => &["s"],
            CaseName::Gibbs => &["beta"],
            CaseName::Hamsim => &["t_prime"],
            CaseName::Learning => &["epsilon", "t"],
            CaseName::SbqpOracle => &["p"],
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::param("case", format!("unknown construction `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    /// The half diamond distance equals the value.
    Exact,
    /// The half diamond distance is at most the value.
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub kind: PredictionKind,
    pub value: f64,
}

/// Hermitian matrix, optionally with `‖H‖ ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
    normalized: bool,
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix, normalized: bool) -> Result<Self> {
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol::HERMITICITY {
            return Err(Error::NotHermitian { deviation });
        }
        if normalized {
            let norm = crate::linalg::op_norm(&matrix);
            if norm > 1.0 + tol::HERMITICITY {
                return Err(Error::param("hamiltonian", format!("operator norm {norm} exceeds 1")));
            }
        }
        Ok(Self { matrix, normalized })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::real_diagonal(values), true)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Difference between the two lowest eigenvalues.
    pub fn spectral_gap(&self) -> Result<f64> {
        let values = eigh(&self.matrix)?.values;
        Ok(match values.as_slice() {
            [a, b, ..] => b - a,
            _ => 0.0,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionCase {
    pub name: CaseName,
    pub params: BTreeMap<String, f64>,
    pub u1: UnitaryMatrix,
    pub u2: UnitaryMatrix,
    pub predicted_half_diamond: Prediction,
    /// Bound on `‖U1 − U2‖` for block-encoding cases.
    pub opnorm_bound: Option<f64>,
    pub predicted_lower_bound: u64,
    /// Derived quantities specific to the case (closed forms, overlaps, entropies).
    pub metadata: BTreeMap<String, f64>,
    pub hamiltonians: Option<(Hamiltonian, Hamiltonian)>,
    /// Basis indices of the subset for `ssv`/`qae`.
    pub subset: Option<Vec<usize>>,
}

impl ConstructionCase {
    fn new(
        name: CaseName,
        params: &[(&str, f64)],
        u1: UnitaryMatrix,
        u2: UnitaryMatrix,
        predicted_half_diamond: Prediction,
    ) -> Result<Self> {
        let predicted_lower_bound = query_lower_bound(predicted_half_diamond.value)?;
        Ok(Self {
            name,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            u1,
            u2,
            predicted_half_diamond,
            opnorm_bound: None,
            predicted_lower_bound,
            metadata: BTreeMap::new(),
            hamiltonians: None,
            subset: None,
        })
    }

    fn with_meta(mut self, key: &str, value: f64) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    /// Builds a case from a name and a parameter map, falling back to the
    /// gallery defaults for anything missing.
    pub fn build(name: CaseName, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |key: &str, default: f64| overrides.get(key).copied().unwrap_or(default);
        match name {
            CaseName::Qpe => qpe_pair(get("epsilon", 0.01)),
            CaseName::Entanglement => entanglement_pair(get("delta", 0.25)),
            CaseName::Ssv => {
                let size = get("s", 16.0);
                if size.fract() != 0.0 || size < 2.0 {
                    return Err(Error::param("s", format!("subset size {size} must be an integer ≥ 2")));
                }
                let size = size as usize;
                let n = qubits_for(size)?;
                ssv_pair(n, &(0..size).collect::<Vec<_>>())
            }
            CaseName::Qae => qae_pair(get("epsilon", 0.25)),
            CaseName::Gibbs => gibbs_pair(get("beta", 3.0)),
            CaseName::Hamsim => hamsim_pair(get("t_prime", 2.0)),
            CaseName::Learning => learning_pair(get("epsilon", 0.01), get("t", 1.0)),
            CaseName::Gsp => gsp_pair(get("delta", 0.5)),
            CaseName::SbqpOracle => {
                let p = get("p", 4.0);
                if p.fract() != 0.0 || p < 1.0 {
                    return Err(Error::param("p", format!("exponent {p} must be a positive integer")));
                }
                sbqp_oracle(p as u32)
            }
        }
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn qubits_for(size: usize) -> Result<usize> {
    let n = (usize::BITS - (size - 1).leading_zeros()).max(1) as usize;
    if n > 6 {
        return Err(Error::param("s", format!("subset of size {size} needs more than 64 dimensions")));
    }
    Ok(n)
}

/// `U1 = I`, `U2 = diag(e^{2πiε}, 1)`: eigenphase 0 versus ε on `|0⟩`.
pub fn qpe_pair(epsilon: f64) -> Result<ConstructionCase> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::param("epsilon", format!("{epsilon} not in (0, 1/2)")));
    }
    let half = (PI * epsilon).sin().abs();
    ConstructionCase::new(
        CaseName::Qpe,
        &[("epsilon", epsilon)],
        UnitaryMatrix::identity(2),
        UnitaryMatrix::from_phases(&[TAU * epsilon, 0.0]),
        Prediction { kind: PredictionKind::Exact, value: half },
    )
}

/// `I − 2|ψ⟩⟨ψ|`.
pub fn reflection_about(psi: &[C64]) -> Result<UnitaryMatrix> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol::STATE_NORM {
        return Err(Error::NotNormalized { norm });
    }
    let proj = ComplexMatrix::outer(psi, psi).scale(c(2.0));
    Ok(UnitaryMatrix::new_unchecked(&ComplexMatrix::identity(psi.len()) - &proj))
}

/// The two bipartite states: a Bell state and a less entangled partner.
pub fn entanglement_states(delta: f64) -> (Vec<C64>, Vec<C64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = ((1.0 + delta.sqrt()) / 2.0).sqrt();
    let b = ((1.0 - delta.sqrt()) / 2.0).sqrt();
    (
        vec![c(s), c(0.0), c(0.0), c(s)],
        vec![c(a), c(0.0), c(0.0), c(b)],
    )
}

/// Reflections about `(|00⟩+|11⟩)/√2` and `√((1+√Δ)/2)|00⟩ + √((1−√Δ)/2)|11⟩`,
/// whose reduced states differ in Rényi-2 entropy by at least Δ/2.
pub fn entanglement_pair(delta: f64) -> Result<ConstructionCase> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("{delta} not in (0, 1)")));
    }
    let (psi1, psi2) = entanglement_states(delta);
    let s1 = std::f64::consts::LN_2;
    let s2 = -((1.0 + delta) / 2.0).ln();
    Ok(ConstructionCase::new(
        CaseName::Entanglement,
        &[("delta", delta)],
        reflection_about(&psi1)?,
        reflection_about(&psi2)?,
        Prediction { kind: PredictionKind::Exact, value: delta.sqrt() },
    )?
    .with_meta("renyi2_entropy_1", s1)
    .with_meta("renyi2_entropy_2", s2)
    .with_meta("entropy_gap", s1 - s2))
}

fn subset_state(dim: usize, subset: &[usize]) -> Vec<C64> {
    let amp = 1.0 / (subset.len() as f64).sqrt();
    let mut v = vec![c(0.0); dim];
    for &i in subset {
        v[i] = c(amp);
    }
    v
}

/// `2|v⟩⟨v| − I` with `|v⟩ ∝ |0ⁿ⟩ + |S⟩`, so that `U|0ⁿ⟩ = |S⟩`.
fn subset_reflection(dim: usize, subset: &[usize]) -> UnitaryMatrix {
    let s = subset_state(dim, subset);
    let overlap = s[0].re;
    let scale = 1.0 / (2.0 * (1.0 + overlap)).sqrt();
    let mut v: Vec<C64> = s.iter().map(|z| z * scale).collect();
    v[0] += c(scale);
    let proj = ComplexMatrix::outer(&v, &v).scale(c(2.0));
    UnitaryMatrix::new_unchecked(&proj - &ComplexMatrix::identity(dim))
}

/// Subset-state preparers for `S` and `S ∖ {0ⁿ}` on `n` qubits; `S` holds
/// basis indices (lexicographic bit-string order) and must contain 0.
pub fn ssv_pair(n: usize, subset: &[usize]) -> Result<ConstructionCase> {
    if !(1..=6).contains(&n) {
        return Err(Error::param("n", format!("{n} qubits not in 1..=6")));
    }
    let dim = 1usize << n;
    let mut s1: Vec<usize> = subset.to_vec();
    s1.sort_unstable();
    s1.dedup();
    if s1.len() < 2 || s1[0] != 0 {
        return Err(Error::param("subset", "must contain 0ⁿ and at least two strings"));
    }
    if let Some(&bad) = s1.iter().find(|&&i| i >= dim) {
        return Err(Error::param("subset", format!("index {bad} exceeds 2^{n}")));
    }
    let s2: Vec<usize> = s1[1..].to_vec();
    let size = s1.len() as f64;
    let sqrt_alpha = (0.5 - 0.5 * ((size - 1.0) / size).sqrt()).sqrt();
    let alpha = sqrt_alpha * sqrt_alpha;
    let half = 2.0 * (alpha - alpha * alpha).sqrt();

    let mut case = ConstructionCase::new(
        CaseName::Ssv,
        &[("n", n as f64), ("s", size)],
        subset_reflection(dim, &s1),
        subset_reflection(dim, &s2),
        Prediction { kind: PredictionKind::Exact, value: half },
    )?
    .with_meta("alpha", alpha)
    .with_meta("sqrt_alpha", sqrt_alpha)
    .with_meta("half_diamond_bound", 2.0 / size.sqrt());
    case.subset = Some(s1);
    Ok(case)
}

/// Amplitude-estimation instance with `|S| = round(1/ε²)`: the amplitude on
/// `|0ⁿ⟩` is `1/√|S|` for `U1` and 0 for `U2`.
pub fn qae_pair(epsilon: f64) -> Result<ConstructionCase> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::param("epsilon", format!("{epsilon} must be positive")));
    }
    let size = (1.0 / (epsilon * epsilon)).round();
    if !(2.0..=64.0).contains(&size) {
        return Err(Error::param(
            "epsilon",
            format!("1/ε² rounds to {size}, need 2 ≤ |S| ≤ 64"),
        ));
    }
    let size = size as usize;
    let n = qubits_for(size)?;
    let mut case = ssv_pair(n, &(0..size).collect::<Vec<_>>())?;
    let realized = 1.0 / (size as f64).sqrt();
    case.name = CaseName::Qae;
    case.params.insert("epsilon".into(), epsilon);
    case.metadata.insert("realized_epsilon".into(), realized);
    case.metadata.insert("amplitude_1".into(), realized);
    case.metadata.insert("amplitude_2".into(), 0.0);
    Ok(case)
}

/// `[[M, R√(I−Σ²)V†], [R√(I−Σ²)V†, −M]]` for `M = RΣV†` with `‖M‖ ≤ 1`.
///
/// For Hermitian positive semidefinite `M` the eigendecomposition is used as
/// the SVD, so the off-diagonal blocks are exactly `√(I − M²)`.
pub fn block_encode(m: &ComplexMatrix) -> Result<UnitaryMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("block encoding needs a square matrix".into()));
    }
    let d = m.rows();
    let top = singular_values(m).first().copied().unwrap_or(0.0);
    if top > 1.0 + 1e-12 {
        return Err(Error::SingularValueTooLarge { value: top });
    }

    let psd = m.hermiticity_deviation() <= tol::HERMITICITY
        && eigh(m)?.values.first().is_some_and(|&v| v >= -1e-12);
    let off = if psd {
        eigh(m)?.map_spectrum(|x| c((1.0 - x.clamp(0.0, 1.0).powi(2)).sqrt()))
    } else {
        let dec = svd(m)?;
        let root: Vec<f64> = dec.sigma.iter().map(|s| (1.0 - s.min(1.0).powi(2)).sqrt()).collect();
        &(dec.r.matrix() * &ComplexMatrix::real_diagonal(&root)) * dec.v.adjoint().matrix()
    };

    let mut entries = vec![c(0.0); 4 * d * d];
    for i in 0..d {
        for j in 0..d {
            entries[i * 2 * d + j] = m.get(i, j);
            entries[i * 2 * d + d + j] = off.get(i, j);
            entries[(d + i) * 2 * d + j] = off.get(i, j);
            entries[(d + i) * 2 * d + d + j] = -m.get(i, j);
        }
    }
    let u = ComplexMatrix::from_row_major(2 * d, 2 * d, entries)?;
    let deviation = u.unitarity_deviation();
    if deviation > tol::UNITARITY {
        return Err(Error::NotUnitaryAfterConstruction { deviation });
    }
    Ok(UnitaryMatrix::new_unchecked(u))
}

/// `(⟨0| ⊗ I) U (|0⟩ ⊗ I)`: the top-left block of a block encoding.
pub fn top_left_block(u: &UnitaryMatrix) -> ComplexMatrix {
    let d = u.dim() / 2;
    let entries = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| u.get(i, j))
        .collect();
    ComplexMatrix::from_row_major(d, d, entries).expect("block is square")
}

/// `e^{−βH} / tr[e^{−βH}]`.
pub fn thermal_state(h: &Hamiltonian, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::param("beta", format!("{beta} must be finite and ≥ 0")));
    }
    let eig = eigh(h.matrix())?;
    let ground = eig.values[0];
    let weight = |x: f64| (-beta * (x - ground)).exp();
    let z: f64 = eig.values.iter().map(|&x| weight(x)).sum();
    DensityMatrix::new(eig.map_spectrum(|x| c(weight(x) / z)))
}

fn block_pair(
    name: CaseName,
    params: &[(&str, f64)],
    h1: Hamiltonian,
    h2: Hamiltonian,
    opnorm_bound: f64,
) -> Result<ConstructionCase> {
    let u1 = block_encode(h1.matrix())?;
    let u2 = block_encode(h2.matrix())?;
    let mut case = ConstructionCase::new(
        name,
        params,
        u1,
        u2,
        Prediction {
            kind: PredictionKind::UpperBound,
            value: opnorm_bound.min(1.0),
        },
    )?;
    case.opnorm_bound = Some(opnorm_bound);
    case.hamiltonians = Some((h1, h2));
    Ok(case)
}

/// Smallest inverse temperature covered by the Gibbs-sampling bound.
pub fn gibbs_beta_min() -> f64 {
    (14.0f64 / 3.0).sqrt()
}

/// Block encodings of `diag(½ ± 1/β, ½ ∓ 1/β)`, whose thermal states stay
/// far apart while the encodings approach each other as `β` grows.
pub fn gibbs_pair(beta: f64) -> Result<ConstructionCase> {
    if !(beta >= gibbs_beta_min() - 1e-12 && beta.is_finite()) {
        return Err(Error::param("beta", format!("{beta} below √(14/3)")));
    }
    let hi = 0.5 + 1.0 / beta;
    let lo = 0.5 - 1.0 / beta;
    let h1 = Hamiltonian::diagonal(&[hi, lo])?;
    let h2 = Hamiltonian::diagonal(&[lo, hi])?;
    let b2 = beta * beta;
    let closed = (3.0 * b2 - (9.0 * b2 * b2 - 40.0 * b2 + 16.0).sqrt() + 4.0).sqrt()
        / (2.0f64.sqrt() * beta);
    let rho1 = thermal_state(&h1, beta)?;
    let rho2 = thermal_state(&h2, beta)?;
    let trace_distance = 0.5 * crate::linalg::trace_norm(&(rho1.matrix() - rho2.matrix()));
    Ok(block_pair(CaseName::Gibbs, &[("beta", beta)], h1, h2, 3.0 / beta)?
        .with_meta("opnorm_closed_form", closed)
        .with_meta("thermal_trace_distance", trace_distance)
        .with_meta("thermal_trace_distance_closed_form", 1.0 - 2.0 / (1.0 + E * E)))
}

/// Block encodings of `I/2` and `I/2 + |1⟩⟨1|/(2t′)`; evolving `|+⟩` for
/// time `t = 2πt′` yields `|+⟩` and `|−⟩` up to a global phase.
pub fn hamsim_pair(t_prime: f64) -> Result<ConstructionCase> {
    if !(t_prime >= 1.0 && t_prime.is_finite()) {
        return Err(Error::param("t_prime", format!("{t_prime} must be ≥ 1")));
    }
    let h1 = Hamiltonian::diagonal(&[0.5, 0.5])?;
    let h2 = Hamiltonian::diagonal(&[0.5, 0.5 + 1.0 / (2.0 * t_prime)])?;
    let inv = 1.0 / t_prime;
    let closed = (3.0 - (-3.0 * inv * inv - 6.0 * inv + 9.0).max(0.0).sqrt() - inv)
        .max(0.0)
        .sqrt()
        / 2.0f64.sqrt();
    Ok(
        block_pair(CaseName::Hamsim, &[("t_prime", t_prime), ("t", TAU * t_prime)], h1, h2, inv)?
            .with_meta("opnorm_closed_form", closed),
    )
}

/// Time evolutions `e^{−itH}` of `H1 = I` and `H2 = I − 2ε|0⟩⟨0|`.
pub fn learning_pair(epsilon: f64, t: f64) -> Result<ConstructionCase> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::param("epsilon", format!("{epsilon} not in (0, 1/2]")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("{t} must be positive")));
    }
    let h1 = Hamiltonian::diagonal(&[1.0, 1.0])?;
    let h2 = Hamiltonian::diagonal(&[1.0 - 2.0 * epsilon, 1.0])?;
    let u1 = expm_hermitian(h1.matrix(), t, Sign::Minus)?;
    let u2 = expm_hermitian(h2.matrix(), t, Sign::Minus)?;
    let mut case = ConstructionCase::new(
        CaseName::Learning,
        &[("epsilon", epsilon), ("t", t)],
        u1,
        u2,
        Prediction {
            kind: PredictionKind::Exact,
            value: (t * epsilon).sin().abs(),
        },
    )?
    .with_meta("evolution_time_per_query", t)
    .with_meta("min_total_evolution_time", 1.0 / (3.0 * epsilon));
    case.hamiltonians = Some((h1, h2));
    Ok(case)
}

/// Minimum total evolution time `Σ t_j` for a schedule of per-query times.
///
/// Each query at time `t_j` contributes half diamond distance
/// `|sin(t_j ε)| ≤ t_j ε`, and the contributions must sum to at least 1/3.
pub fn learning_schedule_budget(epsilon: f64, times: &[f64]) -> Result<(f64, f64)> {
    let mut total_time = 0.0;
    let mut total_distance = 0.0;
    for &t in times {
        let case = learning_pair(epsilon, t)?;
        total_time += t;
        total_distance += case.predicted_half_diamond.value;
    }
    Ok((total_time, total_distance))
}

/// Block encodings of `Δ|1⟩⟨1| + |2⟩⟨2|` and `Δ|0⟩⟨0| + |2⟩⟨2|`: both have
/// spectral gap Δ, with ground states `|0⟩` and `|1⟩`.
pub fn gsp_pair(delta: f64) -> Result<ConstructionCase> {
    if !(delta > 0.0 && delta <= 0.7) {
        return Err(Error::param("delta", format!("{delta} not in (0, 0.7]")));
    }
    let h1 = Hamiltonian::diagonal(&[0.0, delta, 1.0])?;
    let h2 = Hamiltonian::diagonal(&[delta, 0.0, 1.0])?;
    let gap1 = h1.spectral_gap()?;
    let gap2 = h2.spectral_gap()?;
    let reference = 0.5 * (delta + (8.0 - 3.0 * delta * delta - 8.0 * (1.0 - delta * delta).sqrt()).sqrt());
    Ok(block_pair(CaseName::Gsp, &[("delta", delta)], h1, h2, 2.0 * delta)?
        .with_meta("spectral_gap_1", gap1)
        .with_meta("spectral_gap_2", gap2)
        // The two encodings differ by reflections at angles π/2 and arccos Δ.
        .with_meta("opnorm_exact", 2.0 * (delta.asin() / 2.0).sin())
        .with_meta("opnorm_reference_closed_form", reference))
}

/// Diagonal oracle with eigenphase `2^{−p}` on `|0⟩` versus the identity.
pub fn sbqp_oracle(p: u32) -> Result<ConstructionCase> {
    if !(1..=52).contains(&p) {
        return Err(Error::param("p", format!("{p} not in 1..=52")));
    }
    let theta = 0.5f64.powi(p as i32);
    let acceptance = (PI * theta).sin().powi(2);
    Ok(ConstructionCase::new(
        CaseName::SbqpOracle,
        &[("p", p as f64), ("theta", theta)],
        UnitaryMatrix::identity(2),
        UnitaryMatrix::from_phases(&[TAU * theta, 0.0]),
        Prediction {
            kind: PredictionKind::Exact,
            value: (PI * theta).sin(),
        },
    )?
    .with_meta("qpe_acceptance", acceptance)
    .with_meta("qpe_acceptance_floor", 0.25f64.powi(p as i32)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    use super::*;
    use crate::discrimination::{diamond_distance, origin_in_hull, relative_eigenphases};
    use crate::linalg::{op_norm, partial_trace, renyi2_entropy, Keep};
    use crate::random;

    fn opnorm_diff(case: &ConstructionCase) -> f64 {
        op_norm(&(case.u1.matrix() - case.u2.matrix()))
    }

    #[test]
    fn case_names_round_trip() {
        for name in CaseName::ALL {
            assert_eq!(name.as_str().parse::<CaseName>().unwrap(), name);
        }
        assert!("nope".parse::<CaseName>().is_err());
    }

    #[test]
    fn qpe_examples() {
        let case = qpe_pair(0.25).unwrap();
        let d = diamond_distance(&case.u1, &case.u2).unwrap();
        assert!((d - SQRT_2 / 2.0).abs() < 1e-12);
        let tiny = qpe_pair(1e-9).unwrap();
        assert!(diamond_distance(&tiny.u1, &tiny.u2).unwrap() < 1e-8);
        let p = relative_eigenphases(&qpe_pair(0.1).unwrap().u1, &qpe_pair(0.1).unwrap().u2).unwrap();
        assert!(p.phases()[0].abs() < 1e-12 && (p.phases()[1] - 0.2 * PI).abs() < 1e-12);
        assert!(qpe_pair(0.5).is_err() && qpe_pair(0.0).is_err());
    }

    #[test]
    fn reflection_examples() {
        let u = reflection_about(&[c(1.0), c(0.0)]).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::real_diagonal(&[-1.0, 1.0])) < 1e-15);
        let plus = [c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)];
        let minus = [c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)];
        let out = reflection_about(&plus).unwrap().apply(&minus);
        assert!(out.iter().zip(&minus).all(|(a, b)| (a - b).norm() < 1e-15));

        let mut rng = random::rng(21);
        for _ in 0..5 {
            let psi = random::state(4, &mut rng);
            let u = reflection_about(&psi).unwrap();
            assert!(u.power(2).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-9);
        }
        assert!(matches!(
            reflection_about(&[c(1.0), c(1.0)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn entanglement_examples() {
        let case = entanglement_pair(0.25).unwrap();
        assert!((diamond_distance(&case.u1, &case.u2).unwrap() - 0.5).abs() < 1e-12);
        let (_, psi2) = entanglement_states(0.25);
        let rho = partial_trace(&DensityMatrix::from_pure(&psi2).unwrap(), (2, 2), Keep::A).unwrap();
        assert!((renyi2_entropy(&rho) + 0.625f64.ln()).abs() < 1e-12);
        for delta in [0.1, 0.25, 0.5] {
            let case = entanglement_pair(delta).unwrap();
            assert!(case.metadata["entropy_gap"] >= delta / 2.0);
        }
        let (b1, b2) = entanglement_states(0.0);
        assert_eq!(b1, b2);
    }

    #[test]
    fn ssv_examples() {
        let case = ssv_pair(1, &[0, 1]).unwrap();
        let sqrt_alpha = (0.5 - 0.5 * 0.5f64.sqrt()).sqrt();
        let alpha = sqrt_alpha * sqrt_alpha;
        let d = diamond_distance(&case.u1, &case.u2).unwrap();
        assert!((d - 2.0 * (alpha - alpha * alpha).sqrt()).abs() < 1e-9);

        // U|0ⁿ⟩ = |S⟩ for both preparers.
        let e0: Vec<C64> = (0..8).map(|i| c(if i == 0 { 1.0 } else { 0.0 })).collect();
        let case = ssv_pair(3, &[0, 3, 5]).unwrap();
        let s1 = case.u1.apply(&e0);
        let amp = 1.0 / 3f64.sqrt();
        for (i, z) in s1.iter().enumerate() {
            let want = if [0, 3, 5].contains(&i) { amp } else { 0.0 };
            assert!((z - c(want)).norm() < 1e-12);
        }
        let s2 = case.u2.apply(&e0);
        assert!((s2[3] - c(FRAC_1_SQRT_2)).norm() < 1e-12 && s2[0].norm() < 1e-12);
    }

    #[test]
    fn ssv_relative_eigenvalues() {
        let case = ssv_pair(2, &[0, 1, 2, 3]).unwrap();
        let alpha = case.metadata["alpha"];
        let root = C64::new(alpha * alpha - alpha, 0.0).sqrt();
        let want = [c(1.0), c(1.0 - 2.0 * alpha) - 2.0 * root, c(1.0 - 2.0 * alpha) + 2.0 * root];
        let got = relative_eigenphases(&case.u1, &case.u2).unwrap().eigenvalues();
        for w in want {
            assert!(got.iter().any(|g| (g - w).norm() < 1e-9), "{w} missing from {got:?}");
        }
    }

    #[test]
    fn ssv_rejects_bad_subsets() {
        assert!(ssv_pair(2, &[1, 2]).is_err());
        assert!(ssv_pair(2, &[0]).is_err());
        assert!(ssv_pair(2, &[0, 4]).is_err());
    }

    #[test]
    fn qae_examples() {
        let case = qae_pair(0.5).unwrap();
        assert_eq!(case.subset.as_ref().unwrap().len(), 4);
        let case = qae_pair(0.25).unwrap();
        let size = 16.0f64;
        assert!((case.u1.get(0, 0).re - 1.0 / size.sqrt()).abs() < 1e-12);
        assert!(case.u2.get(0, 0).norm() < 1e-12);
        let bounds: Vec<u64> = [0.5, 0.25, 0.125]
            .iter()
            .map(|&e| qae_pair(e).unwrap().predicted_lower_bound)
            .collect();
        assert!(bounds.windows(2).all(|w| w[0] <= w[1]));
        assert!(qae_pair(0.01).is_err());
        assert!(qae_pair(1.0).is_err());
    }

    #[test]
    fn block_encode_examples() {
        let half = ComplexMatrix::real_diagonal(&[0.5, 0.5]);
        let u = block_encode(&half).unwrap();
        let r = 3f64.sqrt() / 2.0;
        #[rustfmt::skip]
        let reference = ComplexMatrix::from_real(4, 4, &[
            0.5, 0.0, r, 0.0,
            0.0, 0.5, 0.0, r,
            r, 0.0, -0.5, 0.0,
            0.0, r, 0.0, -0.5,
        ]).unwrap();
        assert!(u.max_abs_diff(&reference) < 1e-12);

        let zero = block_encode(&ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(zero.unitarity_deviation() < 1e-12);
        assert!(top_left_block(&zero).max_abs_diff(&ComplexMatrix::zeros(2, 2)) < 1e-15);

        let big = ComplexMatrix::real_diagonal(&[1.5, 0.0]);
        assert!(matches!(block_encode(&big), Err(Error::SingularValueTooLarge { .. })));
    }

    #[test]
    fn block_encode_general_contractions() {
        let mut rng = random::rng(12);
        for _ in 0..10 {
            let g = random::gaussian_matrix(3, &mut rng);
            let m = g.scale(c(0.9 / op_norm(&g)));
            let u = block_encode(&m).unwrap();
            assert!(top_left_block(&u).max_abs_diff(&m) < 1e-10);
        }
    }

    #[test]
    fn thermal_examples() {
        let h = Hamiltonian::diagonal(&[0.1, 0.4, 0.9]).unwrap();
        let rho = thermal_state(&h, 0.0).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(3)) < 1e-12);

        let case = gibbs_pair(3.0).unwrap();
        let (h1, h2) = case.hamiltonians.as_ref().unwrap();
        let z = 1.0 + E * E;
        let want1 = ComplexMatrix::real_diagonal(&[1.0 / z, E * E / z]);
        let want2 = ComplexMatrix::real_diagonal(&[E * E / z, 1.0 / z]);
        assert!(thermal_state(h1, 3.0).unwrap().max_abs_diff(&want1) < 1e-12);
        assert!(thermal_state(h2, 3.0).unwrap().max_abs_diff(&want2) < 1e-12);
        assert!(case.metadata["thermal_trace_distance"] >= 0.75);
    }

    #[test]
    fn gibbs_examples() {
        let case = gibbs_pair(3.0).unwrap();
        let n = opnorm_diff(&case);
        assert!((n - 0.795_074_529_338_512).abs() < 1e-9);
        assert!(n <= 1.0);
        let far = gibbs_pair(1e6).unwrap();
        assert!(opnorm_diff(&far) < 1e-5);
        assert!(gibbs_pair(2.0).is_err());
        assert!(!origin_in_hull(&relative_eigenphases(&case.u1, &case.u2).unwrap()));
    }

    #[test]
    fn gibbs_matches_reference_encoding() {
        let beta: f64 = 3.0;
        let (a, b) = (0.5 + 1.0 / beta, 0.5 - 1.0 / beta);
        let (ra, rb) = ((1.0 - a * a).sqrt(), (1.0 - b * b).sqrt());
        #[rustfmt::skip]
        let reference = ComplexMatrix::from_real(4, 4, &[
            a, 0.0, ra, 0.0,
            0.0, b, 0.0, rb,
            ra, 0.0, -1.0 / beta - 0.5, 0.0,
            0.0, rb, 0.0, 1.0 / beta - 0.5,
        ]).unwrap();
        assert!(gibbs_pair(beta).unwrap().u1.max_abs_diff(&reference) < 1e-12);
    }

    #[test]
    fn hamsim_examples() {
        let case = hamsim_pair(2.0).unwrap();
        let want = (3.0f64 - (-0.75f64 - 3.0 + 9.0).sqrt() - 0.5).sqrt() / SQRT_2;
        assert!((opnorm_diff(&case) - want).abs() < 1e-12);
        assert!(opnorm_diff(&case) <= 0.5);
        let (_, h2) = case.hamiltonians.as_ref().unwrap();
        let u = expm_hermitian(h2.matrix(), TAU * 2.0, Sign::Minus).unwrap();
        let out = u.apply(&[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
        let overlap_minus = (out[0] - out[1]).norm() * FRAC_1_SQRT_2;
        assert!((overlap_minus - 1.0).abs() < 1e-9);
        assert!(hamsim_pair(0.5).is_err());
    }

    #[test]
    fn learning_examples() {
        let case = learning_pair(0.25, 1.0).unwrap();
        let rel = case.u1.adjoint().compose(&case.u2).unwrap();
        let want = UnitaryMatrix::from_phases(&[2.0 * 1.0 * 0.25, 0.0]);
        assert!(rel.max_abs_diff(&want) < 1e-12);
        let d = diamond_distance(&case.u1, &case.u2).unwrap();
        assert!((d - 0.25f64.sin()).abs() < 1e-12);

        // A schedule only reaches total distance 1/3 once Σt ≥ 1/(3ε).
        let eps = 0.01;
        let times = vec![2.0; 17];
        let (total_t, total_d) = learning_schedule_budget(eps, &times).unwrap();
        assert!(total_d >= 1.0 / 3.0 && total_t >= 1.0 / (3.0 * eps));
        let (_, short_d) = learning_schedule_budget(eps, &[2.0; 16]).unwrap();
        assert!(short_d < 1.0 / 3.0);
    }

    #[test]
    fn gsp_examples() {
        let case = gsp_pair(0.5).unwrap();
        let n = opnorm_diff(&case);
        assert!(n <= 1.0);
        assert!((n - 2.0 * (0.5f64.asin() / 2.0).sin()).abs() < 1e-12);
        assert!((case.metadata["spectral_gap_1"] - 0.5).abs() < 1e-12);
        assert!((case.metadata["spectral_gap_2"] - 0.5).abs() < 1e-12);
        assert!(gsp_pair(0.8).is_err());
    }

    #[test]
    fn sbqp_examples() {
        let case = sbqp_oracle(1).unwrap();
        assert!((case.metadata["qpe_acceptance"] - 1.0).abs() < 1e-15);
        let case = sbqp_oracle(4).unwrap();
        assert!((case.metadata["qpe_acceptance"] - 0.038_060_233_744_356_62).abs() < 1e-12);
        assert!(case.metadata["qpe_acceptance"] >= 2f64.powi(-8));
        let case = sbqp_oracle(10).unwrap();
        let d = diamond_distance(&case.u1, &case.u2).unwrap();
        assert!((d - (PI / 1024.0).sin()).abs() < 1e-12);
        assert_eq!(case.predicted_lower_bound, query_lower_bound((PI / 1024.0).sin()).unwrap());
    }

    #[test]
    fn build_uses_defaults_and_overrides() {
        for name in CaseName::ALL {
            let case = ConstructionCase::build(name, &BTreeMap::new()).unwrap();
            assert_eq!(case.name, name);
            assert!(case.u1.max_abs_diff(&case.u2) > 1e-12);
        }
        let mut over = BTreeMap::new();
        over.insert("epsilon".to_string(), 0.25);
        let case = ConstructionCase::build(CaseName::Qpe, &over).unwrap();
        assert_eq!(case.params["epsilon"], 0.25);
        over.insert("epsilon".to_string(), 0.75);
        assert!(ConstructionCase::build(CaseName::Qpe, &over).is_err());
    }
}
