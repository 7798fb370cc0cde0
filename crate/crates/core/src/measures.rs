//! Decoherence quantifiers: purity, entropy, mutual information, pointer
//! criteria and the predictability sieve.

use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::lindblad::{evolve_to, LindbladGenerator};
use crate::linalg::{DensityMatrix, Operator, StateVector, Subsystem};

/// Eigenvalues below this are dropped from entropy sums.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// `−Σ λ log₂ λ` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues().into_iter().filter(|&l| l > ENTROPY_FLOOR).map(|l| -l * l.log2()).sum::<f64>().max(0.0)
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` in bits.
pub fn quantum_mutual_information(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let a = rho.partial_trace(dims, Subsystem::A)?;
    let b = rho.partial_trace(dims, Subsystem::B)?;
    Ok(von_neumann_entropy(&a) + von_neumann_entropy(&b) - von_neumann_entropy(rho))
}

/// Frobenius norm of `[O, S]`.
pub fn pointer_commutator_residual(observable: &Operator, coupling: &Operator) -> Result<f64> {
    observable.require_hermitian()?;
    coupling.require_hermitian()?;
    crate::linalg::check_dim(observable.dim(), coupling.dim())?;
    Ok(observable.commutator(coupling).frobenius_norm())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SieveScore {
    /// Purity at the horizon; higher ranks first.
    #[default]
    Purity,
    /// Entropy at the horizon in bits; lower ranks first.
    Entropy,
}

#[derive(Clone, Debug)]
pub struct SieveReport {
    pub candidate_states: Vec<StateVector>,
    pub score: SieveScore,
    pub scores: Vec<f64>,
    /// Candidate indices, most predictable first; ties keep input order.
    pub ranking: Vec<usize>,
}

/// Default number of integration steps used to reach the horizon.
pub const SIEVE_STEPS: usize = 200;

/// Ranks candidate pure states by their purity after evolving for `horizon`.
pub fn predictability_sieve(gen: &LindbladGenerator, candidates: &[StateVector], horizon: f64) -> Result<SieveReport> {
    predictability_sieve_with(gen, candidates, horizon, SieveScore::Purity, SIEVE_STEPS)
}

pub fn predictability_sieve_with(
    gen: &LindbladGenerator,
    candidates: &[StateVector],
    horizon: f64,
    score: SieveScore,
    steps: usize,
) -> Result<SieveReport> {
    if !(horizon >= 0.0) {
        return Err(Error::param("horizon", "must be nonnegative"));
    }
    if steps == 0 {
        return Err(Error::param("steps", "must be positive"));
    }
    let mut scores = Vec::with_capacity(candidates.len());
    for c in candidates {
        crate::linalg::check_dim(gen.dim(), c.dim())?;
        let rho0 = c.projector();
        let rho = if horizon > 0.0 { evolve_to(gen, &rho0, horizon, horizon / steps as f64)? } else { rho0 };
        scores.push(match score {
            SieveScore::Purity => purity(&rho),
            SieveScore::Entropy => von_neumann_entropy(&rho),
        });
    }
    Ok(sieve_report(candidates.to_vec(), scores, score))
}

/// Assembles a report from precomputed scores.
pub fn sieve_report(candidate_states: Vec<StateVector>, scores: Vec<f64>, score: SieveScore) -> SieveReport {
    let mut ranking: Vec<usize> = (0..scores.len()).collect();
    ranking.sort_by(|&a, &b| {
        let ord = scores[a].partial_cmp(&scores[b]).unwrap_or(core::cmp::Ordering::Equal);
        match score {
            SieveScore::Purity => ord.reverse(),
            SieveScore::Entropy => ord,
        }
    });
    SieveReport { candidate_states, score, scores, ranking }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, C64};

    fn plus() -> StateVector {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap()
    }

    #[test]
    fn purity_and_entropy_values() {
        let rho = DensityMatrix::from_probabilities(&[0.75, 0.25]).unwrap();
        assert!((purity(&rho) - 0.625).abs() < 1e-15);
        assert!((von_neumann_entropy(&rho) - 0.811_278_124_459_132_8).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(8);
        assert!((purity(&mixed) - 0.125).abs() < 1e-15);
        assert!((von_neumann_entropy(&mixed) - 3.0).abs() < 1e-12);
        assert!(von_neumann_entropy(&plus().projector()).abs() < 1e-12);
    }

    #[test]
    fn bell_state_has_two_bits() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let bell = StateVector::from_amplitudes(&[C64::new(s, 0.0), z, z, C64::new(s, 0.0)]).unwrap();
        let i = quantum_mutual_information(&bell.projector(), (2, 2)).unwrap();
        assert!((i - 2.0).abs() < 1e-10);
        let product = plus().tensor(&StateVector::basis(2, 1)).projector();
        assert!(quantum_mutual_information(&product, (2, 2)).unwrap().abs() < 1e-10);
    }

    #[test]
    fn commutator_residuals() {
        assert_eq!(pointer_commutator_residual(&pauli::z(), &pauli::z()).unwrap(), 0.0);
        let r = pointer_commutator_residual(&pauli::x(), &pauli::z()).unwrap();
        assert!((r - 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sieve_prefers_pointer_states() {
        let gen = LindbladGenerator::pure_dephasing_qubit(0.3).unwrap();
        let cands = [plus(), StateVector::basis(2, 0), StateVector::basis(2, 1)];
        let r = predictability_sieve(&gen, &cands, 1.0).unwrap();
        assert!((r.scores[1] - 1.0).abs() < 1e-12 && (r.scores[2] - 1.0).abs() < 1e-12);
        assert!(r.scores[0] < 1.0);
        assert_eq!(r.ranking, [1, 2, 0]);
        let r = predictability_sieve(&LindbladGenerator::zero(2), &cands, 1.0).unwrap();
        assert_eq!(r.ranking, [0, 1, 2]);
        let r = predictability_sieve_with(&gen, &cands, 1.0, SieveScore::Entropy, 50).unwrap();
        assert_eq!(r.ranking, [1, 2, 0]);
    }
}
