//! Spin–boson model: a two-level system coupled through `σ_z` to an
//! oscillator bath.

use alloc::vec;
use alloc::vec::Vec;

use crate::bath::{frequency_breakpoints, kernel_transforms, noise_dissipation_kernels, thermal_coth, SpectralDensity};
use crate::error::{Error, Result};
use crate::lindblad::{ExtraTerm, LindbladGenerator, LindbladTerm};
use crate::linalg::{pauli, Operator, C64};
use crate::quad::{adaptive_simpson, FilonTable};

#[derive(Clone, Debug, PartialEq)]
pub struct SpinBosonParams<J> {
    /// Level splitting `ω₀`.
    pub omega0: f64,
    /// Tunneling frequency `Δ₀`.
    pub delta0: f64,
    pub bath: J,
    pub temperature: f64,
}

impl<J: SpectralDensity> SpinBosonParams<J> {
    pub fn new(omega0: f64, delta0: f64, bath: J, temperature: f64) -> Result<Self> {
        let p = SpinBosonParams { omega0, delta0, bath, temperature };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega0", self.omega0), ("delta0", self.delta0), ("temperature", self.temperature)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(name, "must be nonnegative and finite"));
            }
        }
        if !(self.bath.cutoff() > 0.0) {
            return Err(Error::param("cutoff", "spectral density needs a positive cutoff"));
        }
        Ok(())
    }
}

/// Thermal correlation time `τ_B = 2ħ/k_BT`.
pub fn thermal_correlation_time(temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::param("temperature", "must be positive"));
    }
    Ok(2.0 / temperature)
}

const REL_TOL: f64 = 1e-9;

/// Exact coherence decay of the unbiased-tunneling-free spin–boson model,
/// `ρ₀₁(t) = ρ₀₁(0) e^{−iω₀t} e^{−Γ(t)}` with
/// `Γ(t) = 4 ∫ J(ω) coth(ω/2T) (1 − cos ωt)/ω² dω`.
pub struct PureDephasing<'a, J> {
    bath: &'a J,
    temperature: f64,
    omega0: f64,
    split: f64,
    upper_integral: f64,
    cosine: FilonTable,
}

/// `J(ω) coth(ω/2T)/ω²`.
fn weight<J: SpectralDensity + ?Sized>(j: &J, w: f64, temperature: f64) -> f64 {
    j.eval(w) * thermal_coth(w, temperature) / (w * w)
}

/// Builds the pure-dephasing solution. Requires `Δ₀ = 0`; fails when the
/// integrand is infrared divergent, i.e. `J(ω) coth(ω/2T) ω` does not
/// vanish as `ω → 0`.
pub fn spin_boson_pure_dephasing<J: SpectralDensity>(p: &SpinBosonParams<J>) -> Result<PureDephasing<'_, J>> {
    p.validate()?;
    if p.delta0 != 0.0 {
        return Err(Error::param("delta0", "the exact dephasing solution needs delta0 = 0"));
    }
    let scale = p.bath.cutoff();
    let probe = |w: f64| p.bath.eval(w) * thermal_coth(w, p.temperature) * w;
    let (a, b) = (probe(1e-6 * scale), probe(1e-8 * scale));
    if !(b.abs() < a.abs() || b == 0.0) || !b.is_finite() {
        return Err(Error::Undefined("spectral density is infrared divergent at this temperature"));
    }
    let breaks = frequency_breakpoints(scale, p.temperature);
    let split = breaks[1];
    let upper = &breaks[1..];
    let mut upper_integral = 0.0;
    for w in upper.windows(2) {
        upper_integral += adaptive_simpson(|x| weight(&p.bath, x, p.temperature), w[0], w[1], REL_TOL, 0.0)?.value;
    }
    let top = *upper.last().unwrap();
    upper_integral += 0.5 * top * weight(&p.bath, top, p.temperature);
    let cosine = FilonTable::new(|x| weight(&p.bath, x, p.temperature), upper, 64)?.with_asymptotic_tail();
    Ok(PureDephasing { bath: &p.bath, temperature: p.temperature, omega0: p.omega0, split, upper_integral, cosine })
}

impl<J: SpectralDensity> PureDephasing<'_, J> {
    /// `Γ(t)`.
    pub fn decay_exponent(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let (j, temp) = (self.bath, self.temperature);
        let floor = 1e-9 * self.split;
        let low = adaptive_simpson(
            |w| {
                let w = w.max(floor);
                let s = (0.5 * w * t).sin();
                2.0 * s * s * weight(j, w, temp)
            },
            0.0,
            self.split,
            REL_TOL,
            1e-14,
        )?;
        let high = self.upper_integral - self.cosine.cos_sin(t).0;
        Ok(4.0 * (low.value + high))
    }

    /// `|ρ₀₁(t)/ρ₀₁(0)| = e^{−Γ(t)}`.
    pub fn coherence(&self, t: f64) -> Result<f64> {
        Ok((-self.decay_exponent(t)?).exp())
    }

    /// `ρ₀₁(t)/ρ₀₁(0)` including the free phase `e^{−iω₀t}`.
    pub fn coherence_factor(&self, t: f64) -> Result<C64> {
        Ok(C64::from_polar(self.coherence(t)?, -self.omega0 * t))
    }
}

#[derive(Clone, Debug)]
pub struct SpinBosonBornMarkov {
    pub generator: LindbladGenerator,
    pub d: f64,
    /// `ζ* = ∫ (ν − iη) sin(Δ₀τ) dτ`.
    pub zeta_star: C64,
    /// Set when `D` exceeds `Δ₀`, outside the weak-coupling regime.
    pub strong_coupling: bool,
}

/// Born–Markov generator for the unbiased model,
/// `−i(H′ρ − ρH′†) − D[σ_z, [σ_z, ρ]] − ζσ_zρσ_y − ζ*σ_yρσ_z` with
/// `H′ = (Δ₀/2 + ζ*)σ_x`. The anti-Hermitian part of `H′` becomes the
/// sandwich terms `Im ζ* (σ_x ρ + ρ σ_x)`.
pub fn spin_boson_born_markov<J: SpectralDensity>(p: &SpinBosonParams<J>) -> Result<SpinBosonBornMarkov> {
    p.validate()?;
    if p.omega0 != 0.0 {
        return Err(Error::param("omega0", "the Born-Markov generator covers the unbiased case omega0 = 0"));
    }
    let spec = noise_dissipation_kernels(&p.bath, p.temperature)?;
    let k = kernel_transforms(&spec, p.delta0)?;
    let d = k.nu_cos;
    let zeta_star = C64::new(k.nu_sin, -k.eta_sin);
    let zeta = zeta_star.conj();
    let h = pauli::x().scale_real(0.5 * p.delta0 + zeta_star.re);
    let (sx, sy, sz) = (pauli::x(), pauli::y(), pauli::z());
    let id = Operator::identity(2);
    let mut extra: Vec<ExtraTerm> = Vec::new();
    if zeta_star != C64::new(0.0, 0.0) {
        let b = C64::new(zeta_star.im, 0.0);
        extra.push(ExtraTerm::Sandwich { coefficient: b, left: sx.clone(), right: id.clone() });
        extra.push(ExtraTerm::Sandwich { coefficient: b, left: id, right: sx });
        extra.push(ExtraTerm::Sandwich { coefficient: -zeta, left: sz.clone(), right: sy.clone() });
        extra.push(ExtraTerm::Sandwich { coefficient: -zeta_star, left: sy, right: sz.clone() });
    }
    let generator = if d >= 0.0 {
        LindbladGenerator::new(h, vec![LindbladTerm::new(2.0 * d, sz)])?
    } else {
        extra.push(ExtraTerm::Nested {
            coefficient: C64::new(-d, 0.0),
            outer: sz.clone(),
            inner: sz,
            bracket: crate::lindblad::Bracket::Commutator,
        });
        LindbladGenerator::new(h, Vec::new())?
    };
    let generator = generator.with_extra_terms(extra)?;
    Ok(SpinBosonBornMarkov { generator, d, zeta_star, strong_coupling: d > p.delta0 })
}
