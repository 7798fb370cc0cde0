//! Spatial decoherence from scattering of environmental particles, without
//! recoil.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::lindblad::{LindbladGenerator, LindbladTerm};
use crate::linalg::Operator;
use crate::quad::adaptive_simpson;
use crate::units::thermal_de_broglie_wavelength;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollisionalRegime {
    /// Environmental wavelengths much shorter than the separation: every
    /// scattering event resolves it, giving the flat rate `Γ_tot`.
    ShortWavelength,
    /// Wavelengths much longer than the separation: rate `Λ (x − x′)²`.
    LongWavelength,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionalParams {
    /// Scattering constant `Λ` (time⁻¹ length⁻²).
    pub lambda: f64,
    /// Total scattering rate `Γ_tot`.
    pub gamma_tot: f64,
    pub regime: CollisionalRegime,
    pub mass: f64,
    /// Include `H = p²/2M`.
    pub free_dynamics: bool,
}

impl CollisionalParams {
    pub fn long_wavelength(lambda: f64, mass: f64) -> Result<Self> {
        let p = CollisionalParams {
            lambda,
            gamma_tot: 0.0,
            regime: CollisionalRegime::LongWavelength,
            mass,
            free_dynamics: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn short_wavelength(gamma_tot: f64, mass: f64) -> Result<Self> {
        let p = CollisionalParams {
            lambda: 0.0,
            gamma_tot,
            regime: CollisionalRegime::ShortWavelength,
            mass,
            free_dynamics: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_free_dynamics(mut self, on: bool) -> Self {
        self.free_dynamics = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::param("lambda", "must be nonnegative and finite"));
        }
        if !(self.gamma_tot >= 0.0) || !self.gamma_tot.is_finite() {
            return Err(Error::param("gamma_tot", "must be nonnegative and finite"));
        }
        if self.free_dynamics && !(self.mass > 0.0) {
            return Err(Error::param("mass", "must be positive"));
        }
        Ok(())
    }
}

/// Master equation on a position grid. The long-wavelength regime uses the
/// Lindblad operator `x` at rate `2Λ`, so `ρ(x, x′)` decays at `Λ(x − x′)²`;
/// the short-wavelength regime uses the position projectors at rate
/// `Γ_tot`, so every off-diagonal element decays at `Γ_tot`.
pub fn collisional_generator(p: &CollisionalParams, grid: &Grid1D) -> Result<LindbladGenerator> {
    p.validate()?;
    let h = if p.free_dynamics { grid.kinetic_operator(p.mass)? } else { Operator::zeros(grid.n_points()) };
    let terms = match p.regime {
        CollisionalRegime::LongWavelength => alloc::vec![LindbladTerm::new(2.0 * p.lambda, grid.position_operator())],
        CollisionalRegime::ShortWavelength => (0..grid.n_points())
            .map(|i| {
                let mut d = alloc::vec![0.0; grid.n_points()];
                d[i] = 1.0;
                LindbladTerm::new(p.gamma_tot, Operator::from_real_diagonal(&d))
            })
            .collect(),
    };
    LindbladGenerator::new(h, terms)
}

/// [`collisional_generator`] after checking that the grid resolves a wave
/// packet of standard deviation `sigma`.
pub fn collisional_generator_for_packet(p: &CollisionalParams, grid: &Grid1D, sigma: f64) -> Result<LindbladGenerator> {
    grid.check_resolves(sigma)?;
    collisional_generator(p, grid)
}

/// `τ = 1/(Λ Δx²)`.
pub fn collisional_decoherence_time(lambda: f64, dx: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", "must be positive"));
    }
    if !(dx > 0.0) {
        return Err(Error::param("dx", "must be positive"));
    }
    Ok(1.0 / (lambda * dx * dx))
}

/// `(Δx/λ_th)²` with `λ_th = ħ/√(2 m k_B T)`, in SI units (kg, K, m).
pub fn decoherence_dissipation_ratio(mass: f64, temperature: f64, dx: f64) -> Result<f64> {
    if !(dx > 0.0) {
        return Err(Error::param("dx", "must be positive"));
    }
    let l = thermal_de_broglie_wavelength(mass, temperature)?;
    Ok((dx / l) * (dx / l))
}

const REL_TOL: f64 = 1e-10;

/// `σ_eff(q) = (2π/3) ∫ d cosΘ (1 − cosΘ) |f(q, cosΘ)|²`, for a
/// differential cross-section given as a function of `cosΘ`.
pub fn effective_cross_section(dcs: impl Fn(f64) -> f64) -> Result<f64> {
    let q = adaptive_simpson(|c| (1.0 - c) * dcs(c), -1.0, 1.0, REL_TOL, 0.0)?;
    Ok(2.0 * PI / 3.0 * q.value)
}

/// Classical hard-sphere differential cross-section `a²/4`.
pub fn hard_sphere_cross_section(radius: f64) -> impl Fn(f64) -> f64 {
    move |_| 0.25 * radius * radius
}

/// `Λ = ∫ dq ϱ(q) v(q) q² σ_eff(q)` over `[q_min, q_max]`, with `ħ = 1`.
pub fn scattering_constant(
    density: impl Fn(f64) -> f64,
    speed: impl Fn(f64) -> f64,
    sigma_eff: impl Fn(f64) -> f64,
    (q_min, q_max): (f64, f64),
) -> Result<f64> {
    if !(q_max > q_min) || !(q_min >= 0.0) {
        return Err(Error::param("q_range", "need 0 <= q_min < q_max"));
    }
    let q = adaptive_simpson(|q| density(q) * speed(q) * q * q * sigma_eff(q), q_min, q_max, REL_TOL, 0.0)?;
    Ok(q.value)
}

/// Off-diagonal decay factors `ρ(x_i, x_j, t)/ρ(x_i, x_j, 0)` predicted for
/// `H = 0`.
pub fn analytic_decay(p: &CollisionalParams, grid: &Grid1D, t: f64) -> Vec<Vec<f64>> {
    let n = grid.n_points();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match p.regime {
                    CollisionalRegime::LongWavelength => {
                        let d = grid.x(i) - grid.x(j);
                        (-p.lambda * d * d * t).exp()
                    }
                    CollisionalRegime::ShortWavelength if i == j => 1.0,
                    CollisionalRegime::ShortWavelength => (-p.gamma_tot * t).exp(),
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::coherence_decay_rate;

    #[test]
    fn times_and_ratios() {
        assert_eq!(collisional_decoherence_time(1.0, 1.0).unwrap(), 1.0);
        let t1 = collisional_decoherence_time(2.0, 0.5).unwrap();
        let t2 = collisional_decoherence_time(2.0, 1.0).unwrap();
        assert!((t1 / t2 - 4.0).abs() < 1e-12);
        assert!((collisional_decoherence_time(1e19, 1e-8).unwrap() - 1e-3).abs() < 1e-15);
        let r = decoherence_dissipation_ratio(1e-3, 300.0, 1e-2).unwrap();
        assert!(r > 1e39 && r < 1e41, "{r}");
        let l = thermal_de_broglie_wavelength(1e-3, 300.0).unwrap();
        assert!((decoherence_dissipation_ratio(1e-3, 300.0, l).unwrap() - 1.0).abs() < 1e-12);
        let r2 = decoherence_dissipation_ratio(2e-3, 300.0, 1e-2).unwrap();
        assert!((r2 / r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rates_match_regimes() {
        let g = Grid1D::centered(16, 4.0).unwrap();
        let lw = CollisionalParams::long_wavelength(0.7, 1.0).unwrap().with_free_dynamics(false);
        let gen = collisional_generator(&lw, &g).unwrap();
        let d = g.x(3) - g.x(11);
        assert!((coherence_decay_rate(&gen, 3, 11).unwrap() - 0.7 * d * d).abs() < 1e-12);
        assert_eq!(coherence_decay_rate(&gen, 5, 5).unwrap(), 0.0);
        let sw = CollisionalParams::short_wavelength(0.4, 1.0).unwrap().with_free_dynamics(false);
        let gen = collisional_generator(&sw, &g).unwrap();
        assert!((coherence_decay_rate(&gen, 0, 15).unwrap() - 0.4).abs() < 1e-12);
        assert!((coherence_decay_rate(&gen, 2, 3).unwrap() - 0.4).abs() < 1e-12);
        assert!(coherence_decay_rate(&gen, 2, 2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn coarse_grid_rejected() {
        let g = Grid1D::centered(32, 20.0).unwrap();
        let p = CollisionalParams::long_wavelength(1.0, 1.0).unwrap();
        assert!(matches!(collisional_generator_for_packet(&p, &g, 1.0), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn hard_sphere_quadratures() {
        let s = effective_cross_section(hard_sphere_cross_section(2.0)).unwrap();
        assert!((s - PI * 4.0 / 3.0).abs() < 1e-12);
        let l = scattering_constant(|_| 1.0, |_| 1.0, |_| 1.0, (0.0, 3.0)).unwrap();
        assert!((l - 9.0).abs() < 1e-10);
    }
}
