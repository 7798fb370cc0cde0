//! One-dimensional quadrature: adaptive Simpson and Filon's rule for
//! Fourier-type integrals.

use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::linalg::C64;

const MAX_DEPTH: u32 = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to
/// `max(rel_tol·|I|, abs_tol)`. The interval is first split into 16 panels
/// so narrow features are not skipped.
pub fn adaptive_simpson(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    const PANELS: usize = 16;
    let h = (b - a) / (2 * PANELS) as f64;
    let xs: Vec<f64> = (0..=2 * PANELS).map(|k| a + k as f64 * h).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut evaluations = ys.len();
    let coarse: f64 = (0..PANELS).map(|k| h / 3.0 * (ys[2 * k] + 4.0 * ys[2 * k + 1] + ys[2 * k + 2])).sum();
    if !coarse.is_finite() {
        return Err(Error::QuadratureNotConverged { reason: "integrand is not finite" });
    }
    let eps = (rel_tol * coarse.abs()).max(abs_tol) / PANELS as f64;

    struct Segment {
        a: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        b: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    }

    let mut value = 0.0;
    let mut error = 0.0;
    let mut stack: Vec<Segment> = (0..PANELS)
        .map(|k| Segment {
            a: xs[2 * k],
            fa: ys[2 * k],
            fm: ys[2 * k + 1],
            fb: ys[2 * k + 2],
            b: xs[2 * k + 2],
            whole: h / 3.0 * (ys[2 * k] + 4.0 * ys[2 * k + 1] + ys[2 * k + 2]),
            eps,
            depth: 0,
        })
        .collect();
    while let Some(s) = stack.pop() {
        let m = 0.5 * (s.a + s.b);
        let lm = 0.5 * (s.a + m);
        let rm = 0.5 * (m + s.b);
        let flm = f(lm);
        let frm = f(rm);
        evaluations += 2;
        let q = (s.b - s.a) / 12.0;
        let left = q * (s.fa + 4.0 * flm + s.fm);
        let right = q * (s.fm + 4.0 * frm + s.fb);
        let delta = left + right - s.whole;
        if !delta.is_finite() {
            return Err(Error::QuadratureNotConverged { reason: "integrand is not finite" });
        }
        let roundoff = 1e-15 * (left.abs() + right.abs());
        if delta.abs() <= 15.0 * s.eps || delta.abs() <= roundoff {
            value += left + right + delta / 15.0;
            error += delta.abs() / 15.0;
        } else if s.depth >= MAX_DEPTH {
            return Err(Error::QuadratureNotConverged { reason: "maximum subdivision depth reached" });
        } else {
            let eps = 0.5 * s.eps;
            let depth = s.depth + 1;
            stack.push(Segment { a: s.a, fa: s.fa, fm: flm, fb: s.fm, b: m, whole: left, eps, depth });
            stack.push(Segment { a: m, fa: s.fm, fm: frm, fb: s.fb, b: s.b, whole: right, eps, depth });
        }
    }
    Ok(Quadrature { value, error, evaluations })
}

/// Filon weights `(α, β, γ)` for `θ = t·h`, with a series for small `θ`.
fn filon_weights(theta: f64) -> (f64, f64, f64) {
    if theta.abs() < 1.0 / 6.0 {
        let t2 = theta * theta;
        let t3 = t2 * theta;
        let alpha = t3 * (2.0 / 45.0 - t2 * (2.0 / 315.0 - t2 * (2.0 / 4725.0)));
        let beta = 2.0 / 3.0 + t2 * (2.0 / 15.0 - t2 * (4.0 / 105.0 - t2 * (2.0 / 567.0)));
        let gamma = 4.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * (1.0 / 210.0 - t2 * (1.0 / 11340.0)));
        (alpha, beta, gamma)
    } else {
        let (s, c) = theta.sin_cos();
        let t3 = theta * theta * theta;
        let alpha = (theta * theta + theta * s * c - 2.0 * s * s) / t3;
        let beta = 2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3;
        let gamma = 4.0 * (s - theta * c) / t3;
        (alpha, beta, gamma)
    }
}

#[derive(Clone, Debug)]
struct Panel {
    a: f64,
    h: f64,
    samples: Vec<f64>,
}

/// Tabulated `g(ω)` on consecutive panels, ready for repeated evaluation
/// of `∫ g(ω) cos(ωt) dω` and `∫ g(ω) sin(ωt) dω` for many `t`.
#[derive(Clone, Debug)]
pub struct FilonTable {
    panels: Vec<Panel>,
    tail: Option<(f64, f64, f64)>,
}

impl FilonTable {
    /// Samples `g` on each `[breakpoints[k], breakpoints[k+1]]` with
    /// `intervals` (rounded up to even) equal subintervals.
    pub fn new(g: impl Fn(f64) -> f64, breakpoints: &[f64], intervals: usize) -> Result<Self> {
        let m = intervals.max(2).div_ceil(2) * 2;
        let mut panels = Vec::with_capacity(breakpoints.len().saturating_sub(1));
        for w in breakpoints.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                return Err(Error::param("breakpoints", "must be strictly increasing"));
            }
            let h = (b - a) / m as f64;
            let samples: Vec<f64> = (0..=m).map(|k| g(a + k as f64 * h)).collect();
            if samples.iter().any(|v| !v.is_finite()) {
                return Err(Error::QuadratureNotConverged { reason: "integrand is not finite" });
            }
            panels.push(Panel { a, h, samples });
        }
        Ok(FilonTable { panels, tail: None })
    }

    /// Adds the leading asymptotic terms of the integral beyond the last
    /// breakpoint `W`, `∫_W^∞ g e^{iωt} dω ≈ i g(W) e^{iWt}/t − g'(W) e^{iWt}/t²`,
    /// switched on smoothly for `Wt` between 10 and 30. Suited to integrands decaying like a power
    /// law.
    pub fn with_asymptotic_tail(mut self) -> Self {
        if let Some(p) = self.panels.last() {
            let n = p.samples.len() - 1;
            let g = p.samples[n];
            let dg = (3.0 * p.samples[n] - 4.0 * p.samples[n - 1] + p.samples[n - 2]) / (2.0 * p.h);
            self.tail = Some((self.upper_limit(), g, dg));
        }
        self
    }

    /// `(∫ g cos(ωt) dω, ∫ g sin(ωt) dω)` over all panels.
    pub fn cos_sin(&self, t: f64) -> (f64, f64) {
        let mut total_c = 0.0;
        let mut total_s = 0.0;
        for p in &self.panels {
            let (alpha, beta, gamma) = filon_weights(t * p.h);
            let n = p.samples.len() - 1;
            let step = C64::from_polar(1.0, t * p.h);
            let mut phase = C64::from_polar(1.0, t * p.a);
            let first = phase;
            let (mut ce, mut se, mut co, mut so) = (0.0, 0.0, 0.0, 0.0);
            for (k, &g) in p.samples.iter().enumerate() {
                let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                if k % 2 == 0 {
                    ce += w * g * phase.re;
                    se += w * g * phase.im;
                } else {
                    co += g * phase.re;
                    so += g * phase.im;
                }
                if k < n {
                    phase *= step;
                }
            }
            let last = phase;
            let g0 = p.samples[0];
            let gn = p.samples[n];
            total_c += p.h * (alpha * (gn * last.im - g0 * first.im) + beta * ce + gamma * co);
            total_s += p.h * (alpha * (g0 * first.re - gn * last.re) + beta * se + gamma * so);
        }
        if let Some((w, g, dg)) = self.tail {
            let u = ((w * t.abs() - 10.0) / 20.0).clamp(0.0, 1.0);
            if u > 0.0 {
                let blend = u * u * (3.0 - 2.0 * u);
                let (s, c) = (w * t).sin_cos();
                total_c += blend * (-g * s / t - dg * c / (t * t));
                total_s += blend * (g * c / t - dg * s / (t * t));
            }
        }
        (total_c, total_s)
    }

    pub fn upper_limit(&self) -> f64 {
        self.panels.last().map_or(0.0, |p| p.a + p.h * (p.samples.len() - 1) as f64)
    }
}
