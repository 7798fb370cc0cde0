//! Cavity "Schrödinger cat" arithmetic and which-path interference.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::linalg::{StateVector, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityCatParams {
    /// Mean photon number `n̄ = |α|²`.
    pub nbar: f64,
    /// Dispersive phase shift `χ` in radians.
    pub chi: f64,
    /// Cavity damping time `T_r`.
    pub damping_time: f64,
}

impl CavityCatParams {
    pub fn new(nbar: f64, chi: f64, damping_time: f64) -> Result<Self> {
        let p = CavityCatParams { nbar, chi, damping_time };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nbar >= 0.0) || !self.nbar.is_finite() {
            return Err(Error::param("nbar", "must be nonnegative and finite"));
        }
        if !self.chi.is_finite() {
            return Err(Error::param("chi", "must be finite"));
        }
        if !(self.damping_time > 0.0) {
            return Err(Error::param("damping_time", "must be positive"));
        }
        Ok(())
    }

    /// Catness `D² = 4 n̄ sin²χ`.
    pub fn catness(&self) -> f64 {
        let s = self.chi.sin();
        4.0 * self.nbar * s * s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatOverlap {
    /// `|⟨αe^{iχ}|αe^{−iχ}⟩| = e^{−2n̄ sin²χ}`.
    pub amplitude: f64,
    /// `|⟨αe^{iχ}|αe^{−iχ}⟩|² = e^{−D²}`.
    pub squared: f64,
    pub catness: f64,
}

pub fn cat_overlap(p: &CavityCatParams) -> Result<CatOverlap> {
    p.validate()?;
    let d2 = p.catness();
    Ok(CatOverlap { amplitude: (-0.5 * d2).exp(), squared: (-d2).exp(), catness: d2 })
}

/// `T_d = 2T_r/D²`; undefined without a superposition (`D² = 0`).
pub fn cat_decoherence_time(p: &CavityCatParams) -> Result<f64> {
    p.validate()?;
    let d2 = p.catness();
    if !(d2 > 1e-12) {
        return Err(Error::Undefined("no superposition: catness is zero"));
    }
    Ok(2.0 * p.damping_time / d2)
}

/// `η = f/2`, interpolating linearly between full coherence (`η = 1/2`) and
/// full decoherence (`η = 0`).
pub fn two_atom_correlation_limits(coherence_fraction: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&coherence_fraction) {
        return Err(Error::param("coherence_fraction", "must lie in [0, 1]"));
    }
    Ok(0.5 * coherence_fraction)
}

/// `P(x) = |α|²|ψ₁|² + |β|²|ψ₂|² + 2 Re(αβ* ψ₁ψ₂* ⟨E₂|E₁⟩)` on the grid.
pub fn interference_pattern(
    alpha: C64,
    beta: C64,
    psi1: &StateVector,
    psi2: &StateVector,
    env_overlap: C64,
    grid: &Grid1D,
) -> Result<Vec<f64>> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm: norm.sqrt() });
    }
    if env_overlap.norm() > 1.0 + 1e-12 {
        return Err(Error::param("env_overlap", "magnitude must not exceed 1"));
    }
    crate::linalg::check_dim(grid.n_points(), psi1.dim())?;
    crate::linalg::check_dim(grid.n_points(), psi2.dim())?;
    let dx = grid.dx();
    let p: Vec<f64> = psi1
        .amplitudes()
        .iter()
        .zip(psi2.amplitudes().iter())
        .map(|(a, b)| {
            let cross = alpha * beta.conj() * a * b.conj() * env_overlap;
            (alpha.norm_sqr() * a.norm_sqr() + beta.norm_sqr() * b.norm_sqr() + 2.0 * cross.re) / dx
        })
        .collect();
    let total: f64 = p.iter().sum::<f64>() * dx;
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { norm: total });
    }
    Ok(p)
}

/// `(max − min)/(max + min)` over the grid points within `[x_lo, x_hi]`.
pub fn fringe_visibility(pattern: &[f64], grid: &Grid1D, (x_lo, x_hi): (f64, f64)) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &p) in pattern.iter().enumerate() {
        let x = grid.x(i);
        if x >= x_lo && x <= x_hi {
            lo = lo.min(p);
            hi = hi.max(p);
        }
    }
    (hi - lo) / (hi + lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, FockSpace};
    use core::f64::consts::PI;

    #[test]
    fn cat_numbers() {
        let o = cat_overlap(&CavityCatParams::new(10.0, 0.31 * PI, 1.0).unwrap()).unwrap();
        assert!(o.amplitude < 3e-5);
        let z = cat_overlap(&CavityCatParams::new(10.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!((z.squared, z.catness), (1.0, 0.0));
        let p = CavityCatParams::new(3.5, 0.37 * PI, 0.13).unwrap();
        let td = cat_decoherence_time(&p).unwrap();
        assert!((p.catness() - 11.8).abs() < 0.1 && td > 0.020 && td < 0.024, "{td}");
        let p2 = CavityCatParams::new(7.0, 0.37 * PI, 0.13).unwrap();
        assert!((cat_decoherence_time(&p2).unwrap() / td - 0.5).abs() < 1e-12);
        assert!(cat_decoherence_time(&CavityCatParams::new(3.5, 0.0, 0.13).unwrap()).is_err());
        let best = (1..100)
            .map(|k| k as f64 * PI / 100.0)
            .min_by(|a, b| {
                let f = |c: f64| cat_overlap(&CavityCatParams::new(2.0, c, 1.0).unwrap()).unwrap().squared;
                f(*a).partial_cmp(&f(*b)).unwrap()
            })
            .unwrap();
        assert!((best - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_matches_fock_states() {
        let (nbar, chi) = (4.0f64, 0.4f64);
        let amp = nbar.sqrt();
        let space = FockSpace::for_amplitude(amp);
        let a = coherent_state(C64::from_polar(amp, chi), &space).unwrap();
        let b = coherent_state(C64::from_polar(amp, -chi), &space).unwrap();
        let num = a.inner(&b).norm_sqr();
        let closed = cat_overlap(&CavityCatParams::new(nbar, chi, 1.0).unwrap()).unwrap().squared;
        assert!((num - closed).abs() < 1e-6);
    }

    #[test]
    fn correlation_limits() {
        assert_eq!(two_atom_correlation_limits(1.0).unwrap(), 0.5);
        assert_eq!(two_atom_correlation_limits(0.0).unwrap(), 0.0);
        assert_eq!(two_atom_correlation_limits(0.5).unwrap(), 0.25);
        assert!(two_atom_correlation_limits(1.5).is_err());
    }

    #[test]
    fn visibility_tracks_overlap() {
        let g = Grid1D::centered(1024, 40.0).unwrap();
        let p1 = g.gaussian_packet(0.0, 8.0, 2.0).unwrap();
        let p2 = g.gaussian_packet(0.0, 8.0, -2.0).unwrap();
        let s = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let v = |o: f64| {
            let p = interference_pattern(s, s, &p1, &p2, C64::new(o, 0.0), &g).unwrap();
            assert!(p.iter().all(|&v| v >= -1e-12));
            fringe_visibility(&p, &g, (-1.0, 1.0))
        };
        assert!(v(0.0) < 0.01, "{}", v(0.0));
        assert!((v(0.5) / v(1.0) - 0.5).abs() < 0.02, "{} {}", v(0.5), v(1.0));
    }
}
