//! Decay-law fits by linear regression on the logarithm of a coherence
//! magnitude.

use alloc::vec::Vec;


use crate::error::{Error, Result};

/// Coherence values outside this window are excluded from fits.
pub const FIT_WINDOW: (f64, f64) = (0.05, 0.9);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayLaw {
    /// `|c(t)| = A e^{−Γ t}`.
    Exponential,
    /// `|c(t)| = A e^{−Γ² t²}`.
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub law: DecayLaw,
    /// `Γ` in the law's parametrization.
    pub rate: f64,
    /// Fitted `−ln A`.
    pub intercept: f64,
    pub r_squared: f64,
    /// Root-mean-square residual of `−ln |c|`.
    pub residual: f64,
    pub points: usize,
}

/// Fits `−ln c` against `t` (exponential) or `t²` (Gaussian) using the
/// samples with `c` inside `window`.
pub fn fit_decay_in_window(times: &[f64], coherence: &[f64], law: DecayLaw, window: (f64, f64)) -> Result<DecayFit> {
    if times.len() != coherence.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), found: coherence.len() });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(coherence)
        .filter(|(_, &c)| c >= window.0 && c <= window.1)
        .map(|(&t, &c)| {
            let x = match law {
                DecayLaw::Exponential => t,
                DecayLaw::Gaussian => t * t,
            };
            (x, -c.ln())
        })
        .unzip();
    let n = xs.len();
    if n < 3 {
        return Err(Error::param("coherence", "fewer than 3 samples inside the fit window"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::param("times", "fit window holds a single abscissa"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let rate = match law {
        DecayLaw::Exponential => slope,
        DecayLaw::Gaussian => slope.max(0.0).sqrt(),
    };
    Ok(DecayFit { law, rate, intercept, r_squared, residual: (ss_res / nf).sqrt(), points: n })
}

pub fn fit_decay(times: &[f64], coherence: &[f64], law: DecayLaw) -> Result<DecayFit> {
    fit_decay_in_window(times, coherence, law, FIT_WINDOW)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_laws() {
        let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.02).collect();
        let c: Vec<f64> = t.iter().map(|t| (-0.7 * t).exp()).collect();
        let f = fit_decay(&t, &c, DecayLaw::Exponential).unwrap();
        assert!((f.rate - 0.7).abs() < 1e-12 && f.r_squared > 1.0 - 1e-12);
        let c: Vec<f64> = t.iter().map(|t| 0.95 * (-(1.3 * t).powi(2)).exp()).collect();
        let f = fit_decay(&t, &c, DecayLaw::Gaussian).unwrap();
        assert!((f.rate - 1.3).abs() < 1e-10);
        assert!((f.intercept + 0.95f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn needs_points_in_window() {
        assert!(fit_decay(&[0.0, 1.0], &[1.0, 1.0], DecayLaw::Exponential).is_err());
    }
}
