//! Quantum Brownian motion: a harmonic oscillator bilinearly coupled in
//! position to an ohmic oscillator bath.

use alloc::vec;

use nalgebra::DMatrix;

use crate::bath::{born_markov_coefficients, noise_dissipation_kernels, BornMarkovCoefficients, Ohmic};
use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::grid::Grid1D;
use crate::lindblad::{Bracket, ExtraTerm, LindbladGenerator, LindbladTerm};
use crate::linalg::{Operator, C64, I};

/// Ratio `k_BT/ħΩ` and `k_BT/ħΛ` above which the high-temperature regime is
/// considered reached.
pub const HIGH_TEMPERATURE_RATIO: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QbmParams {
    pub mass: f64,
    pub omega: f64,
    pub gamma0: f64,
    pub temperature: f64,
    pub cutoff: f64,
}

impl QbmParams {
    pub fn new(mass: f64, omega: f64, gamma0: f64, temperature: f64, cutoff: f64) -> Result<Self> {
        let p = QbmParams { mass, omega, gamma0, temperature, cutoff };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass", self.mass),
            ("omega", self.omega),
            ("gamma0", self.gamma0),
            ("temperature", self.temperature),
            ("cutoff", self.cutoff),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, "must be positive and finite"));
            }
        }
        Ok(())
    }

    /// `k_BT ≥ 10 ħΩ` and `k_BT ≥ 10 ħΛ`.
    pub fn high_temperature(&self) -> bool {
        self.temperature >= HIGH_TEMPERATURE_RATIO * self.omega && self.temperature >= HIGH_TEMPERATURE_RATIO * self.cutoff
    }

    pub fn spectral_density(&self) -> Result<Ohmic> {
        Ohmic::new(self.mass, self.gamma0, self.cutoff)
    }

    /// Born–Markov coefficients from the ohmic noise and dissipation kernels.
    pub fn coefficients(&self) -> Result<BornMarkovCoefficients> {
        self.validate()?;
        let spec = noise_dissipation_kernels(&self.spectral_density()?, self.temperature)?;
        born_markov_coefficients(&spec, self.omega, self.mass)
    }

    /// High-temperature value `2Mγ₀k_BT` of the position-decoherence
    /// coefficient.
    pub fn caldeira_leggett_d(&self) -> f64 {
        2.0 * self.mass * self.gamma0 * self.temperature
    }
}

/// Representation used for `x` and `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QbmBasis {
    /// Position grid with spectral momentum.
    Grid(Grid1D),
    /// Truncated number basis of the oscillator with frequency `Ω`.
    Oscillator(FockSpace),
}

impl QbmBasis {
    /// `(x, p)` for mass `M` and frequency `Ω`.
    pub fn position_momentum(&self, mass: f64, omega: f64) -> (Operator, Operator) {
        match self {
            QbmBasis::Grid(g) => (g.position_operator(), g.momentum_operator()),
            QbmBasis::Oscillator(f) => {
                let a = f.annihilation();
                let ad = f.creation();
                let x = (&a + &ad).scale_real((2.0 * mass * omega).sqrt().recip());
                let p = (&ad - &a).scale(I * (0.5 * mass * omega).sqrt());
                (x, p)
            }
        }
    }

    /// `p²/2M + ½MΩ²x²`: spectral kinetic energy on a grid, `Ω(n + ½)` in
    /// the number basis.
    pub fn oscillator_hamiltonian(&self, mass: f64, omega: f64) -> Result<Operator> {
        match self {
            QbmBasis::Grid(g) => Ok(&g.kinetic_operator(mass)? + &g.potential_operator(|x| 0.5 * mass * omega * omega * x * x)),
            QbmBasis::Oscillator(f) => {
                let d: alloc::vec::Vec<f64> = (0..f.dim()).map(|n| omega * (n as f64 + 0.5)).collect();
                Ok(Operator::from_real_diagonal(&d))
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            QbmBasis::Grid(g) => g.n_points(),
            QbmBasis::Oscillator(f) => f.dim(),
        }
    }
}

/// Which Born–Markov contributions enter the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QbmOptions {
    /// Add `½MΩ̃²x²` to the Hamiltonian. Off by default: the shift is
    /// treated as cancelled by a counterterm.
    pub frequency_shift: bool,
    /// Momentum damping `−iγ[x, {p, ρ}]`.
    pub dissipation: bool,
    /// Anomalous diffusion `−f[x, [p, ρ]]`.
    pub anomalous: bool,
}

impl Default for QbmOptions {
    fn default() -> Self {
        QbmOptions { frequency_shift: false, dissipation: true, anomalous: true }
    }
}

#[derive(Clone, Debug)]
pub struct QbmModel {
    pub generator: LindbladGenerator,
    pub coefficients: BornMarkovCoefficients,
}

/// `−i[H + ½MΩ̃²x², ρ] − iγ[x, {p, ρ}] − D[x, [x, ρ]] − f[x, [p, ρ]]`, with
/// `H = p²/2M + ½MΩ²x²` and the damping coefficient `γ` taken as
/// [`BornMarkovCoefficients::damping`]. The `D` term is stored as the
/// Lindblad operator `x` at rate `2D`.
pub fn qbm_generator(p: &QbmParams, basis: &QbmBasis, opts: QbmOptions) -> Result<QbmModel> {
    let c = p.coefficients()?;
    let generator = qbm_generator_with(p, basis, opts, &c)?;
    Ok(QbmModel { generator, coefficients: c })
}

/// [`qbm_generator`] with precomputed coefficients.
pub fn qbm_generator_with(
    p: &QbmParams,
    basis: &QbmBasis,
    opts: QbmOptions,
    c: &BornMarkovCoefficients,
) -> Result<LindbladGenerator> {
    p.validate()?;
    let (x, mom) = basis.position_momentum(p.mass, p.omega);
    let mut h = basis.oscillator_hamiltonian(p.mass, p.omega)?;
    if opts.frequency_shift {
        let x2 = &x * &x;
        h = &h + &Operator(crate::linalg::hermitian_part(x2.matrix())).scale_real(0.5 * p.mass * c.omega_shift_sq);
    }
    let mut terms = vec![];
    let mut extra = vec![];
    if c.d >= 0.0 {
        terms.push(LindbladTerm::new(2.0 * c.d, x.clone()));
    } else {
        extra.push(ExtraTerm::Nested {
            coefficient: C64::new(-c.d, 0.0),
            outer: x.clone(),
            inner: x.clone(),
            bracket: Bracket::Commutator,
        });
    }
    if opts.dissipation {
        extra.push(ExtraTerm::Nested {
            coefficient: -I * c.damping(),
            outer: x.clone(),
            inner: mom.clone(),
            bracket: Bracket::Anticommutator,
        });
    }
    if opts.anomalous {
        extra.push(ExtraTerm::Nested {
            coefficient: C64::new(-c.f, 0.0),
            outer: x,
            inner: mom,
            bracket: Bracket::Commutator,
        });
    }
    LindbladGenerator::new(h, terms)?.with_extra_terms(extra)
}

/// Caldeira–Leggett generator `−i[H, ρ] − iγ₀[x, {p, ρ}] − 2Mγ₀T[x, [x, ρ]]`.
pub fn caldeira_leggett_generator(
    hamiltonian: Operator,
    mass: f64,
    gamma0: f64,
    temperature: f64,
    basis: &QbmBasis,
) -> Result<LindbladGenerator> {
    positive(mass, gamma0, temperature)?;
    let (x, mom) = basis.position_momentum(mass, 1.0);
    let d = 2.0 * mass * gamma0 * temperature;
    LindbladGenerator::new(hamiltonian, vec![LindbladTerm::new(2.0 * d, x.clone())])?.with_extra_terms(vec![
        ExtraTerm::Nested { coefficient: -I * gamma0, outer: x, inner: mom, bracket: Bracket::Anticommutator },
    ])
}

fn positive(mass: f64, gamma0: f64, temperature: f64) -> Result<()> {
    for (name, v) in [("mass", mass), ("gamma0", gamma0), ("temperature", temperature)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::param(name, "must be positive and finite"));
        }
    }
    Ok(())
}

/// Completely positive completion of the Caldeira–Leggett equation: one
/// Lindblad operator `L = √(4MT) x + i p/√(4MT)` at rate `γ₀` and the
/// Hamiltonian `H + (γ₀/2){x, p}`. It differs from the Caldeira–Leggett
/// generator by `−(γ₀/8MT)[p, [p, ρ]]`. For the oscillator basis `x` and `p`
/// refer to unit frequency.
pub fn lindblad_repair_caldeira_leggett(
    hamiltonian: Operator,
    mass: f64,
    gamma0: f64,
    temperature: f64,
    basis: &QbmBasis,
) -> Result<LindbladGenerator> {
    positive(mass, gamma0, temperature)?;
    let (x, mom) = basis.position_momentum(mass, 1.0);
    let a = (4.0 * mass * temperature).sqrt();
    let b = a.recip();
    let h = &hamiltonian + &x.anticommutator(&mom).scale_real(0.5 * gamma0);
    let h = Operator(crate::linalg::hermitian_part(h.matrix()));
    let gamma = DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(gamma0 * a * a, 0.0), -I * (gamma0 * a * b), I * (gamma0 * a * b), C64::new(gamma0 * b * b, 0.0)],
    );
    LindbladGenerator::first_standard(h, gamma, vec![x, mom])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{born_markov_generator, coherence_decay_rate};

    #[test]
    fn high_temperature_flag() {
        let p = QbmParams::new(1.0, 1e-3, 0.1, 1e3, 1.0).unwrap();
        assert!(p.high_temperature());
        assert!(!QbmParams::new(1.0, 1.0, 0.1, 1.0, 1.0).unwrap().high_temperature());
        assert!(QbmParams::new(1.0, 1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn localization_rate_from_d() {
        let p = QbmParams::new(1.0, 1e-3, 0.1, 1e3, 1.0).unwrap();
        let g = Grid1D::centered(16, 0.01).unwrap();
        let c = p.coefficients().unwrap();
        let opts = QbmOptions { frequency_shift: false, dissipation: false, anomalous: false };
        let gen = qbm_generator_with(&p, &QbmBasis::Grid(g), opts, &c).unwrap();
        let dx = g.x(12) - g.x(3);
        let lambda_th2 = 1.0 / (2.0 * p.mass * p.temperature);
        let expected = p.gamma0 * dx * dx / lambda_th2;
        let rate = coherence_decay_rate(&gen, 12, 3).unwrap();
        assert!((rate / expected - 1.0).abs() < 0.02, "{rate} vs {expected}");
    }

    #[test]
    fn matches_generic_born_markov_builder() {
        let p = QbmParams::new(1.0, 1.0, 0.05, 2.0, 5.0).unwrap();
        let f = FockSpace::new(8).unwrap();
        let basis = QbmBasis::Oscillator(f);
        let opts = QbmOptions { frequency_shift: true, ..QbmOptions::default() };
        let model = qbm_generator(&p, &basis, opts).unwrap();
        let (x, _) = basis.position_momentum(p.mass, p.omega);
        let h = basis.oscillator_hamiltonian(p.mass, p.omega).unwrap();
        let spec = noise_dissipation_kernels(&p.spectral_density().unwrap(), p.temperature).unwrap();
        let generic = born_markov_generator(&h, &[(x, &spec)]).unwrap();
        let a = model.generator.to_superoperator();
        let b = generic.to_superoperator();
        let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let diff = (a - b).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(diff < 1e-6 * scale, "{diff} vs {scale}");
    }

    #[test]
    fn repair_differs_by_momentum_diffusion() {
        let f = FockSpace::new(10).unwrap();
        let basis = QbmBasis::Oscillator(f);
        let (m, g0, t) = (1.0, 0.1, 3.0);
        let (_, mom) = basis.position_momentum(m, 1.0);
        let h = basis.oscillator_hamiltonian(m, 1.0).unwrap();
        let cl = caldeira_leggett_generator(h.clone(), m, g0, t, &basis).unwrap();
        let rep = lindblad_repair_caldeira_leggett(h, m, g0, t, &basis).unwrap();
        assert!(rep.is_lindblad_form());
        assert_eq!(rep.lindblad_terms().len(), 1);
        let extra = LindbladGenerator::double_commutator(Operator::zeros(f.dim()), &[(g0 / (8.0 * m * t), mom)]).unwrap();
        let diff = rep.to_superoperator() - cl.to_superoperator() - extra.to_superoperator();
        assert!(diff.iter().all(|z| z.norm() < 1e-10));
    }
}
