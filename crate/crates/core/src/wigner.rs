//! Wigner function of a density matrix on a position grid.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::linalg::{check_dim, DensityMatrix, C64};

/// Default tolerance on the marginal mismatch used to detect aliasing.
pub const MARGINAL_TOLERANCE: f64 = 1e-4;

/// `W(x_i, p_m)` on the position grid and the reciprocal momentum grid
/// `p_m = m π / (n dx)`, `m = −n/2 … n/2 − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerField {
    pub grid_x: Grid1D,
    pub grid_p: Vec<f64>,
    /// Rows index position, columns momentum.
    pub values: DMatrix<f64>,
}

impl WignerField {
    pub fn dp(&self) -> f64 {
        PI / (self.grid_x.n_points() as f64 * self.grid_x.dx())
    }

    /// `∫∫ W dx dp`.
    pub fn normalization(&self) -> f64 {
        self.values.sum() * self.grid_x.dx() * self.dp()
    }

    /// `∫ W dp` at each grid position.
    pub fn position_marginal(&self) -> Vec<f64> {
        let dp = self.dp();
        self.values.row_iter().map(|r| r.sum() * dp).collect()
    }

    /// `∫ W dx` at each momentum.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let dx = self.grid_x.dx();
        self.values.column_iter().map(|c| c.sum() * dx).collect()
    }

    /// `W(x, ·)` at the grid point nearest `x`.
    pub fn slice_at(&self, x: f64) -> Vec<f64> {
        let i = self.grid_x.nearest_index(x);
        self.values.row(i).iter().copied().collect()
    }

    /// `(x, p, W)` triples, position-major.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.grid_x.n_points();
        (0..n).flat_map(move |i| {
            let x = self.grid_x.x(i);
            self.grid_p.iter().enumerate().map(move |(m, &p)| (x, p, self.values[(i, m)]))
        })
    }

    /// Oscillation wavelength in `p` of `W(x, ·)`, from the spacing of
    /// sign changes where the envelope exceeds `1e-3` of the slice maximum.
    pub fn ridge_wavelength(&self, x: f64) -> Result<f64> {
        let w = self.slice_at(x);
        let peak = w.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let floor = 1e-3 * peak;
        let mut crossings = Vec::new();
        for m in 0..w.len() - 1 {
            let (a, b) = (w[m], w[m + 1]);
            if a.signum() != b.signum() && a != 0.0 && (a.abs() > floor || b.abs() > floor) {
                let s = a / (a - b);
                crossings.push(self.grid_p[m] + s * (self.grid_p[m + 1] - self.grid_p[m]));
            }
        }
        if crossings.len() < 3 {
            return Err(Error::Undefined("no oscillation found in the Wigner slice"));
        }
        let span = crossings[crossings.len() - 1] - crossings[0];
        Ok(2.0 * span / (crossings.len() - 1) as f64)
    }
}

/// Momentum grid matching [`wigner`], ascending.
pub fn wigner_momenta(grid: &Grid1D) -> Vec<f64> {
    let n = grid.n_points() as i64;
    let dp = PI / (n as f64 * grid.dx());
    (-(n / 2)..n - n / 2).map(|m| m as f64 * dp).collect()
}

/// `P(p) = |φ(p)|²` at the momenta of [`wigner_momenta`].
pub fn momentum_distribution(rho: &DensityMatrix, grid: &Grid1D) -> Result<Vec<f64>> {
    check_dim(grid.n_points(), rho.dim())?;
    let ps = wigner_momenta(grid);
    let xs = grid.points();
    let f = DMatrix::<C64>::from_fn(ps.len(), xs.len(), |m, a| C64::from_polar(1.0, -ps[m] * xs[a]));
    let fr = &f * rho.matrix();
    Ok((0..ps.len())
        .map(|m| {
            let v: C64 = (0..xs.len()).map(|a| fr[(m, a)] * f[(m, a)].conj()).sum();
            v.re * grid.dx() / (2.0 * PI)
        })
        .collect())
}

/// Discrete Wigner transform without the aliasing check.
pub fn wigner_unchecked(rho: &DensityMatrix, grid: &Grid1D) -> Result<WignerField> {
    let n = grid.n_points();
    check_dim(n, rho.dim())?;
    let ps = wigner_momenta(grid);
    let roots: Vec<C64> = (0..n).map(|j| C64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64)).collect();
    let shift = (n / 2) as i64;
    let m = rho.matrix();
    let mut values = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let kmax = i.min(n - 1 - i);
        for (col, _) in ps.iter().enumerate() {
            let mm = col as i64 - shift;
            let mut acc = m[(i, i)].re;
            for k in 1..=kmax {
                let idx = (mm * k as i64).rem_euclid(n as i64) as usize;
                acc += 2.0 * (m[(i + k, i - k)] * roots[idx]).re;
            }
            values[(i, col)] = acc / PI;
        }
    }
    Ok(WignerField { grid_x: *grid, grid_p: ps, values })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarginalCheck {
    pub normalization_error: f64,
    pub position_error: f64,
    pub momentum_error: f64,
}

impl MarginalCheck {
    pub fn max(&self) -> f64 {
        self.normalization_error.max(self.position_error).max(self.momentum_error)
    }
}

/// Largest deviations of the normalization and both marginals from the
/// directly computed distributions.
pub fn check_marginals(field: &WignerField, rho: &DensityMatrix) -> Result<MarginalCheck> {
    let px = field.grid_x.position_density(rho)?;
    let pp = momentum_distribution(rho, &field.grid_x)?;
    let dev = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
    Ok(MarginalCheck {
        normalization_error: (field.normalization() - rho.trace().re).abs(),
        position_error: dev(&field.position_marginal(), &px),
        momentum_error: dev(&field.momentum_marginal(), &pp),
    })
}

/// Wigner function of a position-represented state, rejecting grids whose
/// marginals disagree with the direct distributions by more than
/// [`MARGINAL_TOLERANCE`].
pub fn wigner(rho: &DensityMatrix, grid: &Grid1D) -> Result<WignerField> {
    wigner_with_tolerance(rho, grid, MARGINAL_TOLERANCE)
}

pub fn wigner_with_tolerance(rho: &DensityMatrix, grid: &Grid1D, tol: f64) -> Result<WignerField> {
    let field = wigner_unchecked(rho, grid)?;
    let mismatch = check_marginals(&field, rho)?.max();
    if mismatch > tol {
        return Err(Error::Aliasing { mismatch });
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_nonnegative() {
        let g = Grid1D::centered(128, 10.0).unwrap();
        let rho = g.gaussian_packet(0.5, 1.0, 0.7).unwrap().projector();
        let w = wigner(&rho, &g).unwrap();
        let min = w.values.iter().fold(f64::INFINITY, |a, &v| a.min(v));
        assert!(min > -1e-10, "{min}");
        assert!((w.normalization() - 1.0).abs() < 1e-10);
        let peak = w.values.iter().fold(0.0f64, |a, &v| a.max(v));
        assert!(peak <= 1.0 / PI + 1e-9 && peak > 0.95 / PI, "{peak}");
    }

    #[test]
    fn cat_ridge_wavelength() {
        let g = Grid1D::centered(256, 16.0).unwrap();
        let rho = g.two_packet_superposition(4.0, 1.0).unwrap().projector();
        let w = wigner(&rho, &g).unwrap();
        let lambda = w.ridge_wavelength(0.0).unwrap();
        assert!((lambda / (2.0 * PI / 8.0) - 1.0).abs() < 0.05, "{lambda}");
    }

    #[test]
    fn undersampled_momentum_is_aliasing() {
        let g = Grid1D::centered(64, 10.0).unwrap();
        let rho = g.gaussian_packet(0.0, 1.0, 8.0).unwrap().projector();
        assert!(matches!(wigner(&rho, &g), Err(Error::Aliasing { .. })));
    }
}
