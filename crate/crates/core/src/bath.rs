//! Harmonic baths: spectral densities, noise and dissipation kernels, and
//! Born–Markov coefficients.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, FilonTable};

/// Frequency-resolved coupling strength `J(ω)` for `ω ≥ 0`.
pub trait SpectralDensity: Send + Sync {
    fn eval(&self, omega: f64) -> f64;

    /// Frequency above which `J` is suppressed.
    fn cutoff(&self) -> f64;
}

/// `J(ω) = (2Mγ₀/π) ω Λ²/(Λ² + ω²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ohmic {
    pub mass: f64,
    pub gamma0: f64,
    pub cutoff: f64,
}

impl Ohmic {
    pub fn new(mass: f64, gamma0: f64, cutoff: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::param("mass", "must be positive"));
        }
        if !(gamma0 >= 0.0) {
            return Err(Error::param("gamma0", "must be nonnegative"));
        }
        if !(cutoff > 0.0) {
            return Err(Error::param("cutoff", "must be positive"));
        }
        Ok(Ohmic { mass, gamma0, cutoff })
    }

    /// Low-frequency slope `2Mγ₀/π`.
    pub fn strength(&self) -> f64 {
        2.0 * self.mass * self.gamma0 / PI
    }
}

impl SpectralDensity for Ohmic {
    fn eval(&self, omega: f64) -> f64 {
        let l2 = self.cutoff * self.cutoff;
        self.strength() * omega * l2 / (l2 + omega * omega)
    }

    fn cutoff(&self) -> f64 {
        self.cutoff
    }
}

pub fn ohmic_spectral_density(omega: f64, mass: f64, gamma0: f64, cutoff: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::param("omega", "spectral densities are defined for omega >= 0"));
    }
    Ok(Ohmic::new(mass, gamma0, cutoff)?.eval(omega))
}

/// `coth(ω/2T)`, equal to 1 at `T = 0`.
pub fn thermal_coth(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 1.0;
    }
    let x = omega / (2.0 * temperature);
    if x.abs() < 1e-4 {
        1.0 / x + x / 3.0
    } else if x > 20.0 {
        1.0
    } else {
        1.0 / x.tanh()
    }
}

/// `J(ω) coth(ω/2T)`, continued to its finite limit at `ω = 0`.
fn noise_weight<J: SpectralDensity + ?Sized>(j: &J, omega: f64, temperature: f64) -> f64 {
    if omega == 0.0 {
        if temperature <= 0.0 {
            return j.eval(0.0);
        }
        let eps = 1e-9 * j.cutoff().min(temperature);
        return j.eval(eps) * 2.0 * temperature / eps;
    }
    j.eval(omega) * thermal_coth(omega, temperature)
}

/// `J(ω) tanh(ω/2T)`: the oscillator bath equivalent to a spin bath at
/// temperature `T`.
#[derive(Clone, Debug)]
pub struct SpinBathEquivalent<J> {
    inner: J,
    temperature: f64,
}

impl<J: SpectralDensity> SpectralDensity for SpinBathEquivalent<J> {
    fn eval(&self, omega: f64) -> f64 {
        self.inner.eval(omega) / thermal_coth(omega, self.temperature)
    }

    fn cutoff(&self) -> f64 {
        self.inner.cutoff()
    }
}

pub fn effective_spin_env_spectral_density<J: SpectralDensity>(j: J, temperature: f64) -> Result<SpinBathEquivalent<J>> {
    if !(temperature >= 0.0) {
        return Err(Error::param("temperature", "must be nonnegative"));
    }
    Ok(SpinBathEquivalent { inner: j, temperature })
}

/// Breakpoints for frequency quadrature: a first panel resolving the
/// smallest of the cutoff and thermal scales, then doubling panels up to
/// `1000·max(Λ, 2T)`.
pub(crate) fn frequency_breakpoints(cutoff: f64, temperature: f64) -> Vec<f64> {
    let low = if temperature > 0.0 { cutoff.min(2.0 * temperature) } else { cutoff };
    let high = 1000.0 * cutoff.max(2.0 * temperature);
    let mut b = alloc::vec![0.0, 0.25 * low];
    while *b.last().unwrap() < high {
        let next = 2.0 * b.last().unwrap();
        b.push(next);
    }
    b
}

type Kernel = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Noise kernel `ν(τ)` and dissipation kernel `η(τ)` with the time after
/// which they are treated as negligible.
pub struct CorrelationKernelSpec {
    nu: Kernel,
    eta: Kernel,
    cutoff_time: f64,
}

impl core::fmt::Debug for CorrelationKernelSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CorrelationKernelSpec").field("cutoff_time", &self.cutoff_time).finish_non_exhaustive()
    }
}

impl CorrelationKernelSpec {
    pub fn new(
        nu: impl Fn(f64) -> f64 + Send + Sync + 'static,
        eta: impl Fn(f64) -> f64 + Send + Sync + 'static,
        cutoff_time: f64,
    ) -> Result<Self> {
        if !(cutoff_time > 0.0) || !cutoff_time.is_finite() {
            return Err(Error::param("cutoff_time", "must be positive and finite"));
        }
        Ok(CorrelationKernelSpec { nu: Box::new(nu), eta: Box::new(eta), cutoff_time })
    }

    pub fn nu(&self, tau: f64) -> f64 {
        (self.nu)(tau)
    }

    pub fn eta(&self, tau: f64) -> f64 {
        (self.eta)(tau)
    }

    pub fn cutoff_time(&self) -> f64 {
        self.cutoff_time
    }

    pub fn with_cutoff_time(mut self, cutoff_time: f64) -> Result<Self> {
        if !(cutoff_time > 0.0) || !cutoff_time.is_finite() {
            return Err(Error::param("cutoff_time", "must be positive and finite"));
        }
        self.cutoff_time = cutoff_time;
        Ok(self)
    }
}

/// `ν(τ) = ∫ J coth(ω/2T) cos(ωτ) dω` and `η(τ) = ∫ J sin(ωτ) dω` by Filon
/// quadrature, with `cutoff_time = 50/Λ`.
pub fn noise_dissipation_kernels<J: SpectralDensity + ?Sized>(j: &J, temperature: f64) -> Result<CorrelationKernelSpec> {
    if !(temperature >= 0.0) {
        return Err(Error::param("temperature", "must be nonnegative"));
    }
    let cutoff = j.cutoff();
    if !(cutoff > 0.0) {
        return Err(Error::param("cutoff", "spectral density needs a positive cutoff"));
    }
    let breaks = frequency_breakpoints(cutoff, temperature);
    let noise = FilonTable::new(|w| noise_weight(j, w, temperature), &breaks, 64)?.with_asymptotic_tail();
    let dissipation = FilonTable::new(|w| j.eval(w), &breaks, 64)?.with_asymptotic_tail();
    CorrelationKernelSpec::new(
        move |tau| noise.cos_sin(tau.abs()).0,
        move |tau| dissipation.cos_sin(tau.abs()).1 * tau.signum(),
        50.0 / cutoff,
    )
}

/// Cosine and sine transforms of both kernels at one frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelTransforms {
    /// `∫ ν(τ) cos(Ωτ) dτ`
    pub nu_cos: f64,
    /// `∫ ν(τ) sin(Ωτ) dτ`
    pub nu_sin: f64,
    /// `∫ η(τ) cos(Ωτ) dτ`
    pub eta_cos: f64,
    /// `∫ η(τ) sin(Ωτ) dτ`
    pub eta_sin: f64,
    pub error: f64,
}

const REL_TOL: f64 = 1e-8;

/// Integrates the kernels against `cos(Ωτ)` and `sin(Ωτ)` on
/// `[0, cutoff_time]`. Fails when the kernels have not decayed by the
/// cutoff time.
pub fn kernel_transforms(spec: &CorrelationKernelSpec, frequency: f64) -> Result<KernelTransforms> {
    let tc = spec.cutoff_time();
    let samples = 257;
    let mut peak: f64 = 0.0;
    for k in 0..samples {
        let t = tc * k as f64 / (samples - 1) as f64;
        peak = peak.max(spec.nu(t).abs()).max(spec.eta(t).abs());
    }
    let tail = spec.nu(tc).abs().max(spec.eta(tc).abs());
    if tail > 1e-3 * peak {
        return Err(Error::QuadratureNotConverged { reason: "kernels have not decayed by the cutoff time" });
    }
    let abs_tol = 1e-12 * peak.max(f64::MIN_POSITIVE) * tc;
    let mut error = 0.0;
    let mut integrate = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        let q = adaptive_simpson(f, 0.0, tc, REL_TOL, abs_tol)?;
        error += q.error;
        Ok(q.value)
    };
    let nu_cos = integrate(&|t| spec.nu(t) * (frequency * t).cos())?;
    let nu_sin = if frequency == 0.0 { 0.0 } else { integrate(&|t| spec.nu(t) * (frequency * t).sin())? };
    let eta_cos = integrate(&|t| spec.eta(t) * (frequency * t).cos())?;
    let eta_sin = if frequency == 0.0 { 0.0 } else { integrate(&|t| spec.eta(t) * (frequency * t).sin())? };
    Ok(KernelTransforms { nu_cos, nu_sin, eta_cos, eta_sin, error })
}

/// Coefficients of the Born–Markov master equation for a harmonic
/// oscillator of mass `M` and frequency `Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BornMarkovCoefficients {
    /// `Ω̃² = −(2/M) ∫ η cos(Ωτ) dτ`
    pub omega_shift_sq: f64,
    /// `γ = (2/MΩ) ∫ η sin(Ωτ) dτ`
    pub gamma: f64,
    /// `D = ∫ ν cos(Ωτ) dτ`
    pub d: f64,
    /// `f = −(1/MΩ) ∫ ν sin(Ωτ) dτ`
    pub f: f64,
    /// Accumulated quadrature error estimate of the four integrals.
    pub error_estimate: f64,
}

impl BornMarkovCoefficients {
    /// Coefficient of `−i[x, {p, ρ}]` obtained directly from the kernel
    /// integral, `(1/MΩ) ∫ η sin(Ωτ) dτ = γ/2`.
    pub fn damping(&self) -> f64 {
        0.5 * self.gamma
    }
}

pub fn born_markov_coefficients(spec: &CorrelationKernelSpec, omega: f64, mass: f64) -> Result<BornMarkovCoefficients> {
    if !(omega > 0.0) {
        return Err(Error::param("omega", "must be positive"));
    }
    if !(mass > 0.0) {
        return Err(Error::param("mass", "must be positive"));
    }
    let k = kernel_transforms(spec, omega)?;
    Ok(BornMarkovCoefficients {
        omega_shift_sq: -2.0 / mass * k.eta_cos,
        gamma: 2.0 / (mass * omega) * k.eta_sin,
        d: k.nu_cos,
        f: -k.nu_sin / (mass * omega),
        error_estimate: k.error,
    })
}
