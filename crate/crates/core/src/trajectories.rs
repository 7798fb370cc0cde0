//! Diffusive unraveling of Lindblad dynamics into conditioned trajectories,
//! `dρ = L[ρ] dt + Σ √κ_μ W[L_μ]ρ dW_μ` with
//! `W[L]ρ = Lρ + ρL† − ρ Tr(Lρ + ρL†)`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::lindblad::LindbladGenerator;
use crate::linalg::{check_dim, hermitian_part, DensityMatrix, Operator, C64};
use crate::random::{normal_pair, stream_rng};

/// Largest tolerated `|Tr ρ − 1|` after a step.
pub const TRACE_TOLERANCE: f64 = 1e-4;

/// `Tr ρ² − 1` beyond which a step has left the state space.
pub const PURITY_EXCESS: f64 = 0.1;

/// Time-stepping rule for the conditioned state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StochasticScheme {
    /// `ρ → MρM†/Tr(MρM†)` with
    /// `M = I − (iH + ½ Σκ L†L)dt + Σ √κ L dY + ½ Σ √(κ_μκ_ν) L_μL_ν (dY_μdY_ν − δ_μν dt)`
    /// driven by the record `dY = dW + √κ Tr(Lρ + ρL†) dt`.
    /// Positive, trace one, and keeps pure states pure.
    #[default]
    KrausNormalized,
    /// Euler–Maruyama on the Itô equation as written.
    EulerMaruyama,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryConfig {
    pub n_trajectories: usize,
    pub dt: f64,
    pub t_final: f64,
    pub seed: u64,
    pub record_stride: usize,
    pub scheme: StochasticScheme,
}

impl TrajectoryConfig {
    pub fn new(n_trajectories: usize, dt: f64, t_final: f64, seed: u64) -> Result<Self> {
        let cfg = TrajectoryConfig { n_trajectories, dt, t_final, seed, record_stride: 1, scheme: StochasticScheme::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_record_stride(mut self, stride: usize) -> Result<Self> {
        self.record_stride = stride;
        self.validate()?;
        Ok(self)
    }

    pub fn with_scheme(mut self, scheme: StochasticScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trajectories == 0 {
            return Err(Error::param("n_trajectories", "must be positive"));
        }
        self.integrator().validate()
    }

    /// Deterministic integrator settings recording at the same times.
    pub fn integrator(&self) -> crate::lindblad::IntegratorConfig {
        crate::lindblad::IntegratorConfig { dt: self.dt, t_final: self.t_final, record_stride: self.record_stride, check_positivity: false }
    }

    pub fn n_steps(&self) -> usize {
        self.integrator().n_steps()
    }

    pub fn effective_dt(&self) -> f64 {
        self.integrator().effective_dt()
    }

    pub fn record_times(&self) -> Vec<f64> {
        let steps = self.n_steps();
        let dt = self.effective_dt();
        let mut t = vec![0.0];
        t.extend((1..=steps).filter(|k| k % self.record_stride == 0 || *k == steps).map(|k| k as f64 * dt));
        t
    }
}

/// One conditioned trajectory at the recorded times.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<DensityMatrix>,
    /// Largest `|Tr ρ − 1|` seen after any step.
    pub max_trace_drift: f64,
}

#[derive(Clone, Debug)]
pub struct TrajectoryEnsemble {
    pub times: Vec<f64>,
    pub conditioned_states: Vec<Vec<DensityMatrix>>,
    pub ensemble_mean: Vec<DensityMatrix>,
    pub max_trace_drift: f64,
}

impl TrajectoryEnsemble {
    /// Averages trajectories in the order given.
    pub fn from_trajectories(times: Vec<f64>, trajectories: Vec<Trajectory>) -> Result<Self> {
        let Some(first) = trajectories.first() else {
            return Err(Error::param("trajectories", "ensemble is empty"));
        };
        let d = first.states[0].dim();
        let n = trajectories.len() as f64;
        let mut max_trace_drift = 0.0f64;
        let mut sums = vec![DMatrix::<C64>::zeros(d, d); times.len()];
        for tr in &trajectories {
            check_dim(times.len(), tr.states.len())?;
            max_trace_drift = max_trace_drift.max(tr.max_trace_drift);
            for (s, rho) in sums.iter_mut().zip(&tr.states) {
                *s += rho.matrix();
            }
        }
        let ensemble_mean = sums.into_iter().map(|s| DensityMatrix::new_unchecked(s.unscale(n))).collect();
        let conditioned_states = trajectories.into_iter().map(|t| t.states).collect();
        Ok(TrajectoryEnsemble { times, conditioned_states, ensemble_mean, max_trace_drift })
    }

    pub fn len(&self) -> usize {
        self.conditioned_states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditioned_states.is_empty()
    }
}

struct Stepper {
    scheme: StochasticScheme,
    dt: f64,
    /// `√κ_μ L_μ`
    b: Vec<DMatrix<C64>>,
    /// `I − (iH + ½ Σκ L†L) dt`
    drift: DMatrix<C64>,
    /// `√(κ_μκ_ν) L_μ L_ν`, row-major in `(μ, ν)`.
    bb: Vec<DMatrix<C64>>,
}

impl Stepper {
    fn new(gen: &LindbladGenerator, scheme: StochasticScheme, dt: f64) -> Result<Self> {
        if !gen.is_lindblad_form() {
            return Err(Error::NotLindbladForm);
        }
        for (index, t) in gen.lindblad_terms().iter().enumerate() {
            if !t.operator.is_hermitian(crate::linalg::DEFAULT_TOLERANCE) {
                return Err(Error::NonHermitianLindblad { index });
            }
        }
        let d = gen.dim();
        let b: Vec<DMatrix<C64>> = gen.lindblad_terms().iter().map(|t| t.operator.matrix() * C64::new(t.rate.sqrt(), 0.0)).collect();
        let mut k = gen.hamiltonian().matrix() * C64::new(0.0, 1.0);
        for bm in &b {
            k += bm.adjoint() * bm * C64::new(0.5, 0.0);
        }
        let drift = DMatrix::identity(d, d) - k * C64::new(dt, 0.0);
        let bb = b.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Ok(Stepper { scheme, dt, b, drift, bb })
    }

    fn step(&self, gen: &LindbladGenerator, rho: &DMatrix<C64>, dw: &[f64]) -> DMatrix<C64> {
        match self.scheme {
            StochasticScheme::KrausNormalized => {
                let m_count = self.b.len();
                let dy: Vec<f64> = self.b.iter().zip(dw).map(|(bm, &w)| w + 2.0 * (bm * rho).trace().re * self.dt).collect();
                let mut m = self.drift.clone();
                for (mu, bm) in self.b.iter().enumerate() {
                    m += bm * C64::new(dy[mu], 0.0);
                    for nu in 0..m_count {
                        let ito = dy[mu] * dy[nu] - if mu == nu { self.dt } else { 0.0 };
                        m += &self.bb[mu * m_count + nu] * C64::new(0.5 * ito, 0.0);
                    }
                }
                let next = &m * rho * m.adjoint();
                let tr = next.trace().re;
                hermitian_part(&next.unscale(tr))
            }
            StochasticScheme::EulerMaruyama => {
                let mut next = rho + gen.apply_matrix(rho).expect("dimensions checked") * C64::new(self.dt, 0.0);
                for (bm, &w) in self.b.iter().zip(dw) {
                    let left = bm * rho;
                    let sym = &left + left.adjoint();
                    let mean = sym.trace();
                    next += (sym - rho * mean) * C64::new(w, 0.0);
                }
                next
            }
        }
    }
}

/// Trajectory number `index`, driven by stream `index` of `cfg.seed`.
pub fn unravel_trajectory(gen: &LindbladGenerator, rho0: &DensityMatrix, cfg: &TrajectoryConfig, index: usize) -> Result<Trajectory> {
    cfg.validate()?;
    check_dim(gen.dim(), rho0.dim())?;
    let dt = cfg.effective_dt();
    let steps = cfg.n_steps();
    let stepper = Stepper::new(gen, cfg.scheme, dt)?;
    let mut rng = stream_rng(cfg.seed, index as u64);
    let sqrt_dt = dt.sqrt();
    let mut dw = vec![0.0; stepper.b.len()];
    let mut rho = rho0.matrix().clone();
    let mut states = vec![rho0.clone()];
    let mut max_trace_drift = 0.0f64;
    for k in 1..=steps {
        fill_increments(&mut rng, &mut dw, sqrt_dt);
        let before = rho.trace();
        rho = stepper.step(gen, &rho, &dw);
        let t = k as f64 * dt;
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Unstable { time: t });
        }
        max_trace_drift = max_trace_drift.max((rho.trace() - before).norm());
        let drift = (rho.trace().re - 1.0).abs();
        if drift > TRACE_TOLERANCE {
            return Err(Error::TraceDrift { time: t, drift });
        }
        let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
        if purity > 1.0 + PURITY_EXCESS {
            return Err(Error::Unstable { time: t });
        }
        if k % cfg.record_stride == 0 || k == steps {
            states.push(DensityMatrix::new_unchecked(rho.clone()));
        }
    }
    Ok(Trajectory { states, max_trace_drift })
}

fn fill_increments(rng: &mut impl RngCore, dw: &mut [f64], scale: f64) {
    let mut k = 0;
    while k < dw.len() {
        let (a, b) = normal_pair(rng);
        dw[k] = a * scale;
        if k + 1 < dw.len() {
            dw[k + 1] = b * scale;
        }
        k += 2;
    }
}

/// All `cfg.n_trajectories` trajectories, sequentially.
pub fn unravel(gen: &LindbladGenerator, rho0: &DensityMatrix, cfg: &TrajectoryConfig) -> Result<TrajectoryEnsemble> {
    let trajectories = (0..cfg.n_trajectories).map(|i| unravel_trajectory(gen, rho0, cfg, i)).collect::<Result<Vec<_>>>()?;
    TrajectoryEnsemble::from_trajectories(cfg.record_times(), trajectories)
}

/// Per-time mean and standard error of an observable across trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStatistics {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

pub fn ensemble_statistics(ens: &TrajectoryEnsemble, obs: &Operator) -> Result<EnsembleStatistics> {
    if ens.is_empty() {
        return Err(Error::param("ensemble", "ensemble is empty"));
    }
    if ens.len() < 2 {
        return Err(Error::Undefined("standard error needs at least two trajectories"));
    }
    obs.require_hermitian()?;
    let n = ens.len() as f64;
    let mut mean = Vec::with_capacity(ens.times.len());
    let mut stderr = Vec::with_capacity(ens.times.len());
    for k in 0..ens.times.len() {
        let values = ens.conditioned_states.iter().map(|tr| tr[k].expectation(obs)).collect::<Result<Vec<f64>>>()?;
        let m = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
        mean.push(m);
        stderr.push((var / n).sqrt());
    }
    Ok(EnsembleStatistics { times: ens.times.clone(), mean, stderr })
}
