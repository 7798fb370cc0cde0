//! Turns a validated [`ScenarioConfig`] into a model ready to run.

use std::collections::BTreeMap;

use decoh_core::bath::Ohmic;
use decoh_core::fock::{coherent_state, coherent_superposition, FockSpace};
use decoh_core::grid::Grid1D;
use decoh_core::lindblad::{coherence_decay_rate, LindbladGenerator, LindbladTerm};
use decoh_core::linalg::pauli;
use decoh_core::models::{
    caldeira_leggett_generator, cat_decoherence_time, cat_overlap, collisional_generator_for_packet,
    lindblad_repair_caldeira_leggett, qbm_generator, spin_boson_born_markov, CavityCatParams, CollisionalParams, QbmBasis,
    QbmOptions, QbmParams, SpinBosonParams, SpinSpinParams,
};
use decoh_core::random::{stream_rng, uniform};
use decoh_core::{DensityMatrix, Operator, StateVector, C64};

use crate::config::{
    BasisKind, FitLaw, InitialState, MatrixSpec, ModelParams, Regime, ScenarioConfig, SpinBosonMethod,
};
use crate::error::RunError;

/// Stream of the scenario seed reserved for drawing model parameters;
/// trajectories use streams `0..n`.
pub const PARAMETER_STREAM: u64 = u64::MAX;

/// How the state moves in time.
#[derive(Clone, Debug)]
pub enum Dynamics {
    Generator(LindbladGenerator),
    /// Closed-form pure dephasing of the spin–boson model.
    SpinBosonExact(SpinBosonParams<Ohmic>),
    /// Product-form qubit coherence; the joint state is built only for the
    /// mutual information.
    SpinSpin { params: SpinSpinParams, a: C64, b: C64 },
}

/// Scalar coherence tracked over time, normalized to one at `t = 0`.
#[derive(Clone, Debug)]
pub enum CoherenceProbe {
    /// `|ρ_ij(t)| / |ρ_ij(0)|`.
    Element { i: usize, j: usize, initial: f64 },
    /// Interference weight `|c₁₂|/√(c₁₁c₂₂)` of `ρ = Σ c_kl |β_k⟩⟨β_l|` in the
    /// span of the damped amplitudes `β_k = α_k e^{−κt/2}`.
    CatSpan { alpha1: C64, alpha2: C64, kappa: f64, space: FockSpace },
}

impl CoherenceProbe {
    pub fn eval(&self, rho: &DensityMatrix, t: f64) -> Result<f64, RunError> {
        match *self {
            CoherenceProbe::Element { i, j, initial } => Ok(rho.get(i, j).norm() / initial),
            CoherenceProbe::CatSpan { alpha1, alpha2, kappa, space } => {
                let shrink = (-0.5 * kappa * t).exp();
                let b1 = coherent_state(alpha1 * shrink, &space).map_err(RunError::from_run)?;
                let b2 = coherent_state(alpha2 * shrink, &space).map_err(RunError::from_run)?;
                let basis = [b1.amplitudes(), b2.amplitudes()];
                let m = rho.matrix();
                let a = nalgebra::Matrix2::from_fn(|k, l| basis[k].dotc(&(m * basis[l])));
                let g = nalgebra::Matrix2::from_fn(|k, l| basis[k].dotc(basis[l]));
                let gi = g.try_inverse().ok_or(RunError::Numerical(decoh_core::Error::Undefined(
                    "cat components are no longer distinguishable",
                )))?;
                let c = gi * a * gi;
                let norm = (c[(0, 0)].re * c[(1, 1)].re).sqrt();
                Ok(c[(0, 1)].norm() / norm)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub name: String,
    pub dynamics: Dynamics,
    pub rho0: DensityMatrix,
    pub grid: Option<Grid1D>,
    pub coherence: Option<CoherenceProbe>,
    /// `(d_A, d_B)` of the state used for the mutual information.
    pub bipartition: Option<(usize, usize)>,
    /// Closed-form reference quantities reported in the summary.
    pub analytic: BTreeMap<String, f64>,
    /// Reference value for the requested fit's rate.
    pub reference_rate: Option<f64>,
}

impl Scenario {
    pub fn generator(&self) -> Option<&LindbladGenerator> {
        match &self.dynamics {
            Dynamics::Generator(g) => Some(g),
            _ => None,
        }
    }
}

fn setup<T>(r: decoh_core::Result<T>) -> Result<T, RunError> {
    r.map_err(RunError::from_setup)
}

fn bloch(theta: f64, phi: f64) -> (C64, C64) {
    (C64::new((0.5 * theta).cos(), 0.0), C64::from_polar((0.5 * theta).sin(), phi))
}

/// Hermitian or general operator of dimension `dim` from a config entry.
pub fn operator_from_spec(spec: &MatrixSpec, dim: usize) -> Result<Operator, RunError> {
    let rows = |m: &Vec<Vec<f64>>, what: &str| -> Result<Vec<f64>, RunError> {
        if m.len() != dim || m.iter().any(|r| r.len() != dim) {
            return Err(RunError::Config(format!("{what} must be a {dim}x{dim} matrix")));
        }
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(RunError::Config(format!("{what} has non-finite entries")));
        }
        Ok(m.iter().flatten().copied().collect())
    };
    match spec {
        MatrixSpec::Named(name) => named_operator(name, dim),
        MatrixSpec::Real(m) => setup(Operator::from_real_rows(dim, &rows(m, "matrix")?)),
        MatrixSpec::Complex { re, im } => {
            let (re, im) = (rows(re, "re")?, rows(im, "im")?);
            let entries: Vec<C64> = re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
            setup(Operator::from_row_slice(dim, &entries))
        }
    }
}

pub const NAMED_OPERATORS: [&str; 9] =
    ["sigma_x", "sigma_y", "sigma_z", "sigma_plus", "sigma_minus", "identity", "annihilation", "creation", "number"];

fn named_operator(name: &str, dim: usize) -> Result<Operator, RunError> {
    let qubit = |op: Operator| {
        if dim == 2 {
            Ok(op)
        } else {
            Err(RunError::Config(format!("operator \"{name}\" needs dim = 2")))
        }
    };
    let fock = || setup(FockSpace::new(dim));
    match name {
        "sigma_x" => qubit(pauli::x()),
        "sigma_y" => qubit(pauli::y()),
        "sigma_z" => qubit(pauli::z()),
        "sigma_plus" => qubit(pauli::raising()),
        "sigma_minus" => qubit(pauli::lowering()),
        "identity" => Ok(Operator::identity(dim)),
        "annihilation" => Ok(fock()?.annihilation()),
        "creation" => Ok(fock()?.creation()),
        "number" => Ok(fock()?.number()),
        _ => Err(RunError::Config(format!(
            "unknown operator \"{name}\" (expected one of {})",
            NAMED_OPERATORS.join(", ")
        ))),
    }
}

fn grid_state(grid: &Grid1D, s: &InitialState) -> Result<(DensityMatrix, f64, (f64, f64)), RunError> {
    match *s {
        InitialState::GaussianPacket { x0, sigma, k0 } => {
            Ok((setup(grid.gaussian_packet(x0, sigma, k0))?.projector(), sigma, (x0 - sigma, x0 + sigma)))
        }
        InitialState::TwoPacketCat { x0, sigma } => {
            Ok((setup(grid.two_packet_superposition(x0, sigma))?.projector(), sigma, (x0, -x0)))
        }
        _ => Err(RunError::Config(format!("initial_state \"{}\" needs a non-grid model", s.kind()))),
    }
}

fn field_state(space: &FockSpace, s: &InitialState) -> Result<DensityMatrix, RunError> {
    match *s {
        InitialState::Coherent { alpha, phase } => Ok(setup(coherent_state(C64::from_polar(alpha, phase), space))?.projector()),
        InitialState::Cat { alpha, chi } => {
            let (a1, a2) = (C64::from_polar(alpha, chi), C64::from_polar(alpha, -chi));
            Ok(setup(coherent_superposition(a1, a2, 1.0, space))?.projector())
        }
        InitialState::Basis { index } if index < space.dim() => Ok(StateVector::basis(space.dim(), index).projector()),
        _ => Err(RunError::Config(format!("initial_state \"{}\" does not fit a Fock space of {} levels", s.kind(), space.dim()))),
    }
}

fn qubit_amplitudes(s: &InitialState) -> Result<(C64, C64), RunError> {
    match *s {
        InitialState::QubitBloch { theta, phi } => Ok(bloch(theta, phi)),
        InitialState::Basis { index: 0 } => Ok((C64::new(1.0, 0.0), C64::new(0.0, 0.0))),
        InitialState::Basis { index: 1 } => Ok((C64::new(0.0, 0.0), C64::new(1.0, 0.0))),
        _ => Err(RunError::Config(format!("initial_state \"{}\" is not a qubit state", s.kind()))),
    }
}

fn qubit_state(a: C64, b: C64) -> Result<DensityMatrix, RunError> {
    Ok(setup(StateVector::from_amplitudes(&[a, b]))?.projector())
}

fn element_probe(rho: &DensityMatrix, i: usize, j: usize) -> Option<CoherenceProbe> {
    let initial = rho.get(i, j).norm();
    (initial > 1e-12).then_some(CoherenceProbe::Element { i, j, initial })
}

/// Builds the model, initial state and probes. Output files are prefixed
/// with `default_name` unless the config names the scenario.
pub fn build(config: &ScenarioConfig, default_name: &str) -> Result<Scenario, RunError> {
    config.validate()?;
    let name = config.name.clone().unwrap_or_else(|| default_name.to_string());
    let mut analytic = BTreeMap::new();
    let mut reference_rate = None;
    let mut grid = None;
    let mut bipartition = None;
    let (dynamics, rho0, coherence) = match &config.model {
        ModelParams::Collisional(c) => {
            let g = setup(Grid1D::centered(c.grid.n_points, c.grid.half_width))?;
            let (rho0, sigma, (xa, xb)) = grid_state(&g, &config.initial_state)?;
            let p = match c.regime {
                Regime::LongWavelength => setup(CollisionalParams::long_wavelength(c.lambda.unwrap_or(0.0), c.mass))?,
                Regime::ShortWavelength => setup(CollisionalParams::short_wavelength(c.gamma_tot.unwrap_or(0.0), c.mass))?,
            }
            .with_free_dynamics(c.free_dynamics);
            let gen = setup(collisional_generator_for_packet(&p, &g, sigma))?;
            let (i, j) = (g.nearest_index(xa), g.nearest_index(xb));
            let dx = g.x(i) - g.x(j);
            let rate = match c.regime {
                Regime::LongWavelength => {
                    analytic.insert("lambda".into(), p.lambda);
                    analytic.insert("decoherence_time".into(), 1.0 / (p.lambda * dx * dx));
                    p.lambda * dx * dx
                }
                Regime::ShortWavelength => p.gamma_tot,
            };
            analytic.insert("probe_separation".into(), dx.abs());
            analytic.insert("coherence_rate".into(), rate);
            if config.fit == Some(FitLaw::Exponential) {
                reference_rate = Some(rate);
            }
            let probe = element_probe(&rho0, i, j);
            grid = Some(g);
            (Dynamics::Generator(gen), rho0, probe)
        }
        ModelParams::Qbm(c) => {
            let p = setup(QbmParams::new(c.mass, c.omega, c.gamma0, c.temperature, c.cutoff))?;
            let opts = QbmOptions { frequency_shift: c.frequency_shift, dissipation: c.dissipation, anomalous: c.anomalous };
            let (basis, rho0, probe) = match c.basis {
                BasisKind::Grid => {
                    let gs = c.grid.ok_or_else(|| RunError::Config("missing parameter grid".into()))?;
                    let g = setup(Grid1D::centered(gs.n_points, gs.half_width))?;
                    let (rho0, sigma, (xa, xb)) = grid_state(&g, &config.initial_state)?;
                    setup(g.check_resolves(sigma))?;
                    let (i, j) = (g.nearest_index(xa), g.nearest_index(xb));
                    let probe = element_probe(&rho0, i, j);
                    analytic.insert("probe_separation".into(), (g.x(i) - g.x(j)).abs());
                    grid = Some(g);
                    (QbmBasis::Grid(g), rho0, probe)
                }
                BasisKind::Oscillator => {
                    let space = setup(FockSpace::new(c.n_max.unwrap_or(2)))?;
                    let rho0 = field_state(&space, &config.initial_state)?;
                    (QbmBasis::Oscillator(space), rho0, None)
                }
            };
            let model = setup(qbm_generator(&p, &basis, opts))?;
            let k = model.coefficients;
            analytic.insert("d".into(), k.d);
            analytic.insert("f".into(), k.f);
            analytic.insert("damping".into(), k.damping());
            analytic.insert("omega_shift_sq".into(), k.omega_shift_sq);
            analytic.insert("caldeira_leggett_d".into(), p.caldeira_leggett_d());
            if let Some(dx) = analytic.get("probe_separation").copied() {
                analytic.insert("coherence_rate".into(), k.d * dx * dx);
            }
            (Dynamics::Generator(model.generator), rho0, probe)
        }
        ModelParams::CaldeiraLeggett(c) => {
            let g = setup(Grid1D::centered(c.grid.n_points, c.grid.half_width))?;
            let (rho0, sigma, (xa, xb)) = grid_state(&g, &config.initial_state)?;
            setup(g.check_resolves(sigma))?;
            let h = &setup(g.kinetic_operator(c.mass))? + &g.potential_operator(|x| 0.5 * c.mass * c.omega * c.omega * x * x);
            let basis = QbmBasis::Grid(g);
            let gen = if c.lindblad_repair {
                setup(lindblad_repair_caldeira_leggett(h, c.mass, c.gamma0, c.temperature, &basis))?
            } else {
                setup(caldeira_leggett_generator(h, c.mass, c.gamma0, c.temperature, &basis))?
            };
            let d = 2.0 * c.mass * c.gamma0 * c.temperature;
            let (i, j) = (g.nearest_index(xa), g.nearest_index(xb));
            let dx = g.x(i) - g.x(j);
            analytic.insert("d".into(), d);
            analytic.insert("probe_separation".into(), dx.abs());
            analytic.insert("coherence_rate".into(), d * dx * dx);
            analytic.insert("relaxation_rate".into(), c.gamma0);
            let probe = element_probe(&rho0, i, j);
            grid = Some(g);
            (Dynamics::Generator(gen), rho0, probe)
        }
        ModelParams::SpinBoson(c) => {
            let (a, b) = qubit_amplitudes(&config.initial_state)?;
            let rho0 = qubit_state(a, b)?;
            let bath = setup(Ohmic::new(c.mass, c.gamma0, c.cutoff))?;
            let p = setup(SpinBosonParams::new(c.omega0, c.delta0, bath, c.temperature))?;
            let probe = element_probe(&rho0, 0, 1);
            let dynamics = match c.method {
                SpinBosonMethod::Exact => {
                    let long_time = 4.0 * 2.0 * c.mass * c.gamma0 * c.temperature;
                    analytic.insert("long_time_rate".into(), long_time);
                    if config.fit == Some(FitLaw::Exponential) {
                        reference_rate = Some(long_time);
                    }
                    Dynamics::SpinBosonExact(p)
                }
                SpinBosonMethod::BornMarkov => {
                    let bm = setup(spin_boson_born_markov(&p))?;
                    analytic.insert("d".into(), bm.d);
                    analytic.insert("zeta_re".into(), bm.zeta_star.re);
                    analytic.insert("zeta_im".into(), bm.zeta_star.im);
                    analytic.insert("strong_coupling".into(), if bm.strong_coupling { 1.0 } else { 0.0 });
                    Dynamics::Generator(bm.generator)
                }
            };
            (dynamics, rho0, probe)
        }
        ModelParams::SpinSpin(c) => {
            let couplings = match (&c.couplings, c.n_env) {
                (Some(g), _) => g.clone(),
                (None, Some(n)) => {
                    let mut rng = stream_rng(config.seed, PARAMETER_STREAM);
                    (0..n).map(|_| c.coupling_max * uniform(&mut rng)).collect()
                }
                (None, None) => return Err(RunError::Config("missing parameter couplings or n_env".into())),
            };
            let env = bloch(c.env_theta, c.env_phi);
            let params = setup(SpinSpinParams::new(couplings.clone(), vec![env; couplings.len()], 0.0))?;
            let (a, b) = qubit_amplitudes(&config.initial_state)?;
            let rho0 = qubit_state(a, b)?;
            let polarization = env.0.norm_sqr() - env.1.norm_sqr();
            let g2: f64 = couplings.iter().map(|g| g * g).sum();
            let rate = (0.5 * (1.0 - polarization * polarization) * g2).sqrt();
            analytic.insert("gaussian_rate".into(), rate);
            if config.fit == Some(FitLaw::Gaussian) {
                reference_rate = Some(rate);
            }
            bipartition = 1usize.checked_shl(couplings.len() as u32).map(|de| (2, de));
            let probe = element_probe(&rho0, 0, 1);
            (Dynamics::SpinSpin { params, a, b }, rho0, probe)
        }
        ModelParams::CavityCat(c) => {
            let (alpha, chi) = match config.initial_state {
                InitialState::Cat { alpha, chi } => (alpha, chi),
                InitialState::Coherent { alpha, .. } => (alpha, 0.0),
                _ => return Err(RunError::Config("cavity_cat needs a cat or coherent initial state".into())),
            };
            let space = match c.n_max {
                Some(n) => setup(FockSpace::new(n))?,
                None => FockSpace::for_amplitude(alpha),
            };
            let rho0 = field_state(&space, &config.initial_state)?;
            let kappa = 1.0 / c.damping_time;
            let gen = setup(LindbladGenerator::new(Operator::zeros(space.dim()), vec![LindbladTerm::new(kappa, space.annihilation())]))?;
            let cat = setup(CavityCatParams::new(alpha * alpha, chi, c.damping_time))?;
            let overlap = setup(cat_overlap(&cat))?;
            analytic.insert("catness".into(), overlap.catness);
            analytic.insert("overlap_amplitude".into(), overlap.amplitude);
            let probe = if let InitialState::Cat { .. } = config.initial_state {
                let td = setup(cat_decoherence_time(&cat))?;
                analytic.insert("decoherence_time".into(), td);
                if config.fit == Some(FitLaw::Exponential) {
                    reference_rate = Some(1.0 / td);
                }
                Some(CoherenceProbe::CatSpan {
                    alpha1: C64::from_polar(alpha, chi),
                    alpha2: C64::from_polar(alpha, -chi),
                    kappa,
                    space,
                })
            } else {
                None
            };
            (Dynamics::Generator(gen), rho0, probe)
        }
        ModelParams::CustomLindblad(c) => {
            let h = match &c.hamiltonian {
                Some(spec) => operator_from_spec(spec, c.dim)?,
                None => Operator::zeros(c.dim),
            };
            let terms = c
                .lindblad
                .iter()
                .map(|l| Ok(LindbladTerm::new(l.rate, operator_from_spec(&l.operator, c.dim)?)))
                .collect::<Result<Vec<_>, RunError>>()?;
            let gen = setup(LindbladGenerator::new(h, terms))?;
            let rho0 = match config.initial_state {
                InitialState::Basis { index } => StateVector::basis(c.dim, index).projector(),
                InitialState::QubitBloch { .. } => {
                    let (a, b) = qubit_amplitudes(&config.initial_state)?;
                    qubit_state(a, b)?
                }
                _ => field_state(&setup(FockSpace::new(c.dim))?, &config.initial_state)?,
            };
            let [i, j] = c.coherence.unwrap_or([0, 1]);
            let rate = setup(coherence_decay_rate(&gen, i, j))?;
            analytic.insert("generator_rate".into(), rate);
            if config.fit == Some(FitLaw::Exponential) {
                reference_rate = Some(rate);
            }
            bipartition = c.subsystems.map(|[a, b]| (a, b));
            let probe = element_probe(&rho0, i, j);
            (Dynamics::Generator(gen), rho0, probe)
        }
    };
    let needs_coherence = config.wants("coherence_magnitude") || config.fit.is_some();
    if needs_coherence && coherence.is_none() {
        return Err(RunError::Config(format!(
            "coherence_magnitude and fits are not defined for model \"{}\" with initial_state \"{}\"",
            config.kind().name(),
            config.initial_state.kind()
        )));
    }
    Ok(Scenario { config: config.clone(), name, dynamics, rho0, grid, coherence, bipartition, analytic, reference_rate })
}
