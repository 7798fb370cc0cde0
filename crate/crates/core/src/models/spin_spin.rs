//! A qubit coupled to `N` environment spins through
//! `H = ½ σ_z ⊗ Σ_i g_i σ_z^(i)`.

use alloc::vec::Vec;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{pauli, qubit_operator, tensor, unitary_propagator, DensityMatrix, Operator, StateVector, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct SpinSpinParams {
    pub couplings: Vec<f64>,
    /// Per-spin amplitudes `(α_i, β_i)` of `α_i|0⟩ + β_i|1⟩`.
    pub environment: Vec<(C64, C64)>,
    /// Optional tunneling `½Δ₀σ_x` of the central spin.
    pub delta0: f64,
}

impl SpinSpinParams {
    pub fn new(couplings: Vec<f64>, environment: Vec<(C64, C64)>, delta0: f64) -> Result<Self> {
        let p = SpinSpinParams { couplings, environment, delta0 };
        p.validate()?;
        Ok(p)
    }

    /// Every environment spin in `|+⟩`.
    pub fn all_plus(couplings: Vec<f64>) -> Result<Self> {
        let s = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let env = alloc::vec![(s, s); couplings.len()];
        Self::new(couplings, env, 0.0)
    }

    pub fn n_spins(&self) -> usize {
        self.couplings.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.couplings.is_empty() {
            return Err(Error::param("couplings", "need at least one environment spin"));
        }
        if self.environment.len() != self.couplings.len() {
            return Err(Error::DimensionMismatch { expected: self.couplings.len(), found: self.environment.len() });
        }
        if self.couplings.iter().any(|g| !g.is_finite()) || !self.delta0.is_finite() {
            return Err(Error::param("couplings", "must be finite"));
        }
        for (a, b) in &self.environment {
            let norm = a.norm_sqr() + b.norm_sqr();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::NotNormalized { norm: norm.sqrt() });
            }
        }
        Ok(())
    }

    /// Full Hamiltonian on `2^{N+1}` levels, central spin most significant.
    pub fn hamiltonian(&self) -> Operator {
        let n = self.n_spins() + 1;
        let mut env = Operator::zeros(1 << self.n_spins());
        for (i, &g) in self.couplings.iter().enumerate() {
            env = &env + &qubit_operator(&pauli::z(), i, self.n_spins()).scale_real(g);
        }
        let mut h = tensor(&pauli::z(), &env).scale_real(0.5);
        if self.delta0 != 0.0 {
            h = &h + &qubit_operator(&pauli::x(), 0, n).scale_real(0.5 * self.delta0);
        }
        h
    }

    /// `(a|0⟩ + b|1⟩) ⊗ ⨂_i (α_i|0⟩ + β_i|1⟩)`.
    pub fn initial_state(&self, a: C64, b: C64) -> Result<StateVector> {
        let mut psi = StateVector::from_amplitudes(&[a, b])?;
        for &(al, be) in &self.environment {
            psi = psi.tensor(&StateVector::from_amplitudes(&[al, be])?);
        }
        Ok(psi)
    }

    /// Joint system–environment state at time `t`. The diagonal Hamiltonian
    /// is exponentiated elementwise when `Δ₀ = 0`.
    pub fn evolve(&self, a: C64, b: C64, t: f64) -> Result<StateVector> {
        let psi0 = self.initial_state(a, b)?;
        if self.delta0 == 0.0 {
            let n = self.n_spins();
            let dim = psi0.dim();
            let v = DVector::from_fn(dim, |k, _| {
                let s = if k >> n & 1 == 0 { 1.0 } else { -1.0 };
                let e: f64 = self
                    .couplings
                    .iter()
                    .enumerate()
                    .map(|(i, g)| if k >> (n - 1 - i) & 1 == 0 { *g } else { -*g })
                    .sum();
                psi0.amplitudes()[k] * C64::from_polar(1.0, -0.5 * s * e * t)
            });
            StateVector::new(v)
        } else {
            psi0.evolve(&unitary_propagator(&self.hamiltonian(), t)?)
        }
    }

    /// Joint density matrix at time `t`.
    pub fn full_state(&self, a: C64, b: C64, t: f64) -> Result<DensityMatrix> {
        Ok(self.evolve(a, b, t)?.projector())
    }
}

/// `z(t) = ρ₀₁(t)/ρ₀₁(0) = Π_i [cos(g_i t) − i(|α_i|² − |β_i|²) sin(g_i t)]`
/// for `Δ₀ = 0`.
pub fn spin_spin_coherence_factor(p: &SpinSpinParams, t: f64) -> Result<C64> {
    p.validate()?;
    if p.delta0 != 0.0 {
        return Err(Error::param("delta0", "the product formula needs delta0 = 0"));
    }
    Ok(p.couplings.iter().zip(&p.environment).fold(C64::new(1.0, 0.0), |z, (&g, (a, b))| {
        let (s, c) = (g * t).sin_cos();
        z * C64::new(c, -(a.norm_sqr() - b.norm_sqr()) * s)
    }))
}
