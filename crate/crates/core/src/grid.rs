//! Uniform position grids for continuous-variable states.
//!
//! Wavefunctions on a grid carry amplitudes `ψ(x_i)·√dx`, so a normalized
//! [`StateVector`] approximates a normalized wavefunction and a density
//! matrix entry `ρ_ij` approximates `ρ(x_i, x_j)·dx`. Momentum-space
//! operators are spectral (circulant), i.e. the grid is periodic.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, Operator, StateVector, C64};

pub const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    x_min: f64,
    x_max: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::param("n_points", "a grid needs at least 8 points"));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::param("x_max", "must be finite and exceed x_min"));
        }
        Ok(Grid1D { n_points, x_min, x_max })
    }

    /// Grid on `[−half_width, half_width]`.
    pub fn centered(n_points: usize, half_width: f64) -> Result<Self> {
        Self::new(n_points, -half_width, half_width)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Index of the grid point closest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let k = ((x - self.x_min) / self.dx()).round();
        k.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Discrete momenta in FFT order, `p_m = 2π m / (n dx)`. For even `n`
    /// the Nyquist momentum is reported as `−π/dx`.
    pub fn momenta(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let dp = 2.0 * PI / (self.n_points as f64 * self.dx());
        (0..n).map(|m| if 2 * m < n { m as f64 * dp } else { (m - n) as f64 * dp }).collect()
    }

    /// Circulant operator `F† diag(f(p)) F`. `odd` zeroes the unpaired
    /// Nyquist mode so that odd functions of `p` stay Hermitian.
    fn spectral(&self, f: impl Fn(f64) -> f64, odd: bool) -> Operator {
        let n = self.n_points;
        let roots: Vec<C64> = (0..n).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect();
        let fp: Vec<f64> = self
            .momenta()
            .iter()
            .enumerate()
            .map(|(m, &p)| if odd && n % 2 == 0 && 2 * m == n { 0.0 } else { f(p) })
            .collect();
        let kernel: Vec<C64> = (0..n)
            .map(|d| {
                let mut acc = C64::new(0.0, 0.0);
                for (m, &w) in fp.iter().enumerate() {
                    acc += roots[(m * d) % n] * w;
                }
                acc / n as f64
            })
            .collect();
        Operator(DMatrix::from_fn(n, n, |a, b| kernel[(a + n - b) % n]))
    }

    /// Diagonal position operator.
    pub fn position_operator(&self) -> Operator {
        Operator::from_real_diagonal(&self.points())
    }

    /// Spectral momentum operator `−i d/dx`.
    pub fn momentum_operator(&self) -> Operator {
        self.spectral(|p| p, true)
    }

    /// Spectral kinetic energy `p²/2M`.
    pub fn kinetic_operator(&self, mass: f64) -> Result<Operator> {
        if !(mass > 0.0) {
            return Err(Error::param("mass", "must be positive"));
        }
        Ok(self.spectral(|p| p * p / (2.0 * mass), false))
    }

    pub fn potential_operator(&self, v: impl Fn(f64) -> f64) -> Operator {
        let d: Vec<f64> = self.points().into_iter().map(v).collect();
        Operator::from_real_diagonal(&d)
    }

    /// Gaussian packet with position spread `sigma`, centre `x0` and mean
    /// momentum `k0`.
    pub fn gaussian_packet(&self, x0: f64, sigma: f64, k0: f64) -> Result<StateVector> {
        if !(sigma > 0.0) {
            return Err(Error::param("sigma", "must be positive"));
        }
        StateVector::normalized(self.gaussian_amplitudes(x0, sigma, k0))
    }

    fn gaussian_amplitudes(&self, x0: f64, sigma: f64, k0: f64) -> DVector<C64> {
        DVector::from_fn(self.n_points, |i, _| {
            let x = self.x(i);
            C64::from_polar((-(x - x0).powi(2) / (4.0 * sigma * sigma)).exp(), k0 * x)
        })
    }

    /// Equal-weight superposition of packets centred at `±x0`.
    pub fn two_packet_superposition(&self, x0: f64, sigma: f64) -> Result<StateVector> {
        if !(sigma > 0.0) {
            return Err(Error::param("sigma", "must be positive"));
        }
        let a = self.gaussian_amplitudes(x0, sigma, 0.0);
        let b = self.gaussian_amplitudes(-x0, sigma, 0.0);
        StateVector::normalized(a + b)
    }

    /// Equal-weight incoherent mixture of packets centred at `±x0`.
    pub fn two_packet_mixture(&self, x0: f64, sigma: f64) -> Result<DensityMatrix> {
        let a = self.gaussian_packet(x0, sigma, 0.0)?;
        let b = self.gaussian_packet(-x0, sigma, 0.0)?;
        DensityMatrix::mix(&a.projector(), &b.projector(), 0.5)
    }

    /// Fails when fewer than 8 grid points cover the packet width `2σ`.
    pub fn check_resolves(&self, sigma: f64) -> Result<()> {
        let points_per_width = 2.0 * sigma / self.dx();
        if points_per_width < 8.0 {
            return Err(Error::GridTooCoarse { points_per_width });
        }
        Ok(())
    }

    /// Position probability density `ρ(x_i, x_i)`.
    pub fn position_density(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        crate::linalg::check_dim(self.n_points, rho.dim())?;
        let dx = self.dx();
        Ok((0..self.n_points).map(|i| rho.get(i, i).re / dx).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_or_empty_grids() {
        assert!(Grid1D::new(7, 0.0, 1.0).is_err());
        assert!(Grid1D::new(8, 1.0, 1.0).is_err());
        let g = Grid1D::new(11, 0.0, 1.0).unwrap();
        assert!((g.dx() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn spectral_operators_are_hermitian_and_consistent() {
        let g = Grid1D::centered(32, 8.0).unwrap();
        let p = g.momentum_operator();
        let t = g.kinetic_operator(1.0).unwrap();
        assert!(p.hermiticity_deviation() < 1e-13);
        assert!(t.hermiticity_deviation() < 1e-13);
        let psi = g.gaussian_packet(0.3, 1.0, 0.8).unwrap();
        let mean_p = psi.expectation(&p).unwrap().re;
        assert!((mean_p - 0.8).abs() < 1e-8);
        let kin = psi.expectation(&t).unwrap().re;
        assert!((kin - 0.5 * (0.64 + 0.25)).abs() < 1e-8);
    }

    #[test]
    fn canonical_commutator_on_smooth_states() {
        let g = Grid1D::centered(64, 10.0).unwrap();
        let x = g.position_operator();
        let p = g.momentum_operator();
        let psi = g.gaussian_packet(0.0, 1.0, 0.0).unwrap();
        let c = x.commutator(&p);
        assert!((psi.expectation(&c).unwrap() - C64::new(0.0, 1.0)).norm() < 1e-6);
    }

    #[test]
    fn resolution_check() {
        let g = Grid1D::centered(256, 16.0).unwrap();
        assert!(g.check_resolves(1.0).is_ok());
        assert!(g.check_resolves(0.2).is_err());
    }
}
