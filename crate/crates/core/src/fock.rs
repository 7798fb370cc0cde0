//! Truncated harmonic-oscillator (Fock) spaces and coherent states.

use alloc::vec::Vec;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector, C64};

/// Default bound on the norm discarded by truncating a coherent state.
pub const TRUNCATION_TOLERANCE: f64 = 1e-8;

/// Span of the number states `|0⟩ … |n_max − 1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    n_max: usize,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::param("n_max", "must be at least 1"));
        }
        Ok(FockSpace { n_max })
    }

    /// Default truncation `⌈|α|² + 6|α| + 10⌉` for a coherent amplitude.
    pub fn for_amplitude(abs_alpha: f64) -> Self {
        let a = abs_alpha.abs();
        FockSpace { n_max: (a * a + 6.0 * a + 10.0).ceil() as usize }
    }

    pub fn dim(&self) -> usize {
        self.n_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn annihilation(&self) -> Operator {
        Operator::from_fn(self.n_max, |i, j| {
            if j == i + 1 {
                C64::new((j as f64).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn creation(&self) -> Operator {
        self.annihilation().adjoint()
    }

    pub fn number(&self) -> Operator {
        let n: Vec<f64> = (0..self.n_max).map(|k| k as f64).collect();
        Operator::from_real_diagonal(&n)
    }

    pub fn fock_state(&self, n: usize) -> Result<StateVector> {
        if n >= self.n_max {
            return Err(Error::param("n", "number state outside the truncated space"));
        }
        Ok(StateVector::basis(self.n_max, n))
    }
}

/// Truncated coherent state `|α⟩`, renormalized, with the default
/// truncation tolerance.
pub fn coherent_state(alpha: C64, space: &FockSpace) -> Result<StateVector> {
    coherent_state_with_tolerance(alpha, space, TRUNCATION_TOLERANCE)
}

/// Amplitudes `e^{−|α|²/2} αⁿ/√(n!)`, evaluated in log space.
pub fn coherent_state_with_tolerance(alpha: C64, space: &FockSpace, tol: f64) -> Result<StateVector> {
    let r = alpha.norm();
    let theta = alpha.arg();
    let mut log_fact = 0.0;
    let amps: Vec<C64> = (0..space.dim())
        .map(|n| {
            if n > 0 {
                log_fact += (n as f64).ln();
            }
            if r == 0.0 {
                return if n == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            }
            let log_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * log_fact;
            C64::from_polar(log_mag.exp(), n as f64 * theta)
        })
        .collect();
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let loss = 1.0 - kept;
    if loss > tol {
        return Err(Error::TruncationLoss { loss });
    }
    StateVector::normalized(DVector::from_vec(amps))
}

/// Closed-form `⟨α|β⟩ = exp(−|α|²/2 − |β|²/2 + α*β)`.
pub fn coherent_overlap(alpha: C64, beta: C64) -> C64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + alpha.conj() * beta).exp()
}

/// Normalized `|α₁⟩ + sign·|α₂⟩`.
pub fn coherent_superposition(alpha1: C64, alpha2: C64, sign: f64, space: &FockSpace) -> Result<StateVector> {
    let a = coherent_state(alpha1, space)?;
    let b = coherent_state(alpha2, space)?;
    StateVector::normalized(a.amplitudes() + b.amplitudes().scale(sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DensityMatrix;

    #[test]
    fn vacuum() {
        let space = FockSpace::new(12).unwrap();
        let v = coherent_state(C64::new(0.0, 0.0), &space).unwrap();
        assert_eq!(v, StateVector::basis(12, 0));
    }

    #[test]
    fn mean_photon_number() {
        let alpha = C64::new(1.2, -0.9);
        let space = FockSpace::for_amplitude(alpha.norm());
        let psi = coherent_state(alpha, &space).unwrap();
        let n = DensityMatrix::pure(&psi).expectation(&space.number()).unwrap();
        assert!((n - alpha.norm_sqr()).abs() < 1e-7);
    }

    #[test]
    fn overlap_of_opposite_amplitudes() {
        let space = FockSpace::for_amplitude(1.0);
        let a = coherent_state(C64::new(1.0, 0.0), &space).unwrap();
        let b = coherent_state(C64::new(-1.0, 0.0), &space).unwrap();
        assert!((a.inner(&b).norm_sqr() - (-4.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn truncation_loss_is_reported() {
        let space = FockSpace::new(5).unwrap();
        assert!(matches!(
            coherent_state(C64::new(3.0, 0.0), &space),
            Err(Error::TruncationLoss { .. })
        ));
    }

    #[test]
    fn ladder_operators() {
        let space = FockSpace::new(6).unwrap();
        let a = space.annihilation();
        let n = &space.creation() * &a;
        assert!(n.max_abs_diff(&space.number()) < 1e-14);
        assert!(FockSpace::new(0).is_err());
    }
}
