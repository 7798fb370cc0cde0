//! Scenario configuration: TOML parsing, validation and serialization.

use std::f64::consts::FRAC_PI_2;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Collisional,
    Qbm,
    CaldeiraLeggett,
    SpinBoson,
    SpinSpin,
    CavityCat,
    CustomLindblad,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Collisional,
        ModelKind::Qbm,
        ModelKind::CaldeiraLeggett,
        ModelKind::SpinBoson,
        ModelKind::SpinSpin,
        ModelKind::CavityCat,
        ModelKind::CustomLindblad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Collisional => "collisional",
            ModelKind::Qbm => "qbm",
            ModelKind::CaldeiraLeggett => "caldeira_leggett",
            ModelKind::SpinBoson => "spin_boson",
            ModelKind::SpinSpin => "spin_spin",
            ModelKind::CavityCat => "cavity_cat",
            ModelKind::CustomLindblad => "custom_lindblad",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_points: usize,
    pub half_width: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    #[default]
    LongWavelength,
    ShortWavelength,
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn right_angle() -> f64 {
    FRAC_PI_2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionalConfig {
    #[serde(default)]
    pub regime: Regime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_tot: Option<f64>,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "yes")]
    pub free_dynamics: bool,
    pub grid: GridSpec,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    #[default]
    Grid,
    Oscillator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QbmConfig {
    #[serde(default = "one")]
    pub mass: f64,
    pub omega: f64,
    pub gamma0: f64,
    pub temperature: f64,
    pub cutoff: f64,
    #[serde(default)]
    pub basis: BasisKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub frequency_shift: bool,
    #[serde(default = "yes")]
    pub dissipation: bool,
    #[serde(default = "yes")]
    pub anomalous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaldeiraLeggettConfig {
    #[serde(default = "one")]
    pub mass: f64,
    pub gamma0: f64,
    pub temperature: f64,
    /// Oscillator frequency; zero gives a free particle.
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub lindblad_repair: bool,
    pub grid: GridSpec,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinBosonMethod {
    #[default]
    Exact,
    BornMarkov,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinBosonConfig {
    #[serde(default)]
    pub omega0: f64,
    #[serde(default)]
    pub delta0: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub gamma0: f64,
    pub cutoff: f64,
    pub temperature: f64,
    #[serde(default)]
    pub method: SpinBosonMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSpinConfig {
    /// Explicit couplings `g_i`; otherwise `n_env` values are drawn
    /// uniformly from `[0, coupling_max)` with the scenario seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_env: Option<usize>,
    #[serde(default = "one")]
    pub coupling_max: f64,
    /// Bloch angles shared by every environment spin.
    #[serde(default = "right_angle")]
    pub env_theta: f64,
    #[serde(default)]
    pub env_phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityCatConfig {
    pub damping_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

/// A matrix given by name, as real rows, or as real and imaginary rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Named(String),
    Real(Vec<Vec<f64>>),
    Complex { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindbladSpec {
    pub rate: f64,
    pub operator: MatrixSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomLindbladConfig {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<MatrixSpec>,
    #[serde(default)]
    pub lindblad: Vec<LindbladSpec>,
    /// Element `(i, j)` tracked as the coherence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence: Option<[usize; 2]>,
    /// `[d_A, d_B]` for the mutual information.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystems: Option<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    Collisional(CollisionalConfig),
    Qbm(QbmConfig),
    CaldeiraLeggett(CaldeiraLeggettConfig),
    SpinBoson(SpinBosonConfig),
    SpinSpin(SpinSpinConfig),
    CavityCat(CavityCatConfig),
    CustomLindblad(CustomLindbladConfig),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Collisional(_) => ModelKind::Collisional,
            ModelParams::Qbm(_) => ModelKind::Qbm,
            ModelParams::CaldeiraLeggett(_) => ModelKind::CaldeiraLeggett,
            ModelParams::SpinBoson(_) => ModelKind::SpinBoson,
            ModelParams::SpinSpin(_) => ModelKind::SpinSpin,
            ModelParams::CavityCat(_) => ModelKind::CavityCat,
            ModelParams::CustomLindblad(_) => ModelKind::CustomLindblad,
        }
    }

    /// Position grid, for models that live on one.
    pub fn grid(&self) -> Option<GridSpec> {
        match self {
            ModelParams::Collisional(c) => Some(c.grid),
            ModelParams::CaldeiraLeggett(c) => Some(c.grid),
            ModelParams::Qbm(c) if c.basis == BasisKind::Grid => c.grid,
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    GaussianPacket {
        x0: f64,
        sigma: f64,
        #[serde(default)]
        k0: f64,
    },
    /// Equal superposition of packets at `±x0`.
    TwoPacketCat { x0: f64, sigma: f64 },
    QubitBloch {
        theta: f64,
        #[serde(default)]
        phi: f64,
    },
    /// `|α e^{iφ}⟩`.
    Coherent {
        alpha: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Normalized `|α e^{iχ}⟩ + |α e^{−iχ}⟩`.
    Cat { alpha: f64, chi: f64 },
    Basis { index: usize },
}

impl InitialState {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialState::GaussianPacket { .. } => "gaussian_packet",
            InitialState::TwoPacketCat { .. } => "two_packet_cat",
            InitialState::QubitBloch { .. } => "qubit_bloch",
            InitialState::Coherent { .. } => "coherent",
            InitialState::Cat { .. } => "cat",
            InitialState::Basis { .. } => "basis",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "one_usize")]
    pub record_stride: usize,
    #[serde(default = "yes")]
    pub check_positivity: bool,
}

fn one_usize() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputSpec {
    Purity,
    Entropy,
    CoherenceMagnitude,
    PositionDensity,
    MutualInformation,
    WignerSnapshots(Vec<f64>),
}

impl OutputSpec {
    pub fn name(&self) -> &'static str {
        match self {
            OutputSpec::Purity => "purity",
            OutputSpec::Entropy => "entropy",
            OutputSpec::CoherenceMagnitude => "coherence_magnitude",
            OutputSpec::PositionDensity => "position_density",
            OutputSpec::MutualInformation => "mutual_information",
            OutputSpec::WignerSnapshots(_) => "wigner_snapshots",
        }
    }

    /// Scalar per recorded time, written to the time-series file.
    pub fn is_scalar(&self) -> bool {
        matches!(
            self,
            OutputSpec::Purity | OutputSpec::Entropy | OutputSpec::CoherenceMagnitude | OutputSpec::MutualInformation
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitLaw {
    Exponential,
    Gaussian,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    #[default]
    KrausNormalized,
    EulerMaruyama,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySection {
    pub n_trajectories: usize,
    /// Defaults to the integrator step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<usize>,
    #[serde(default)]
    pub scheme: SchemeKind,
    /// Hermitian observables recorded per trajectory; qubits default to the
    /// three Pauli matrices.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<MatrixSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    model: ModelKind,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    outputs: Vec<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fit: Option<FitLaw>,
    #[serde(default)]
    params: toml::Table,
    initial_state: InitialState,
    integrator: IntegratorSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trajectories: Option<TrajectorySection>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    /// Prefix of every output file; defaults to the config file stem.
    pub name: Option<String>,
    pub seed: u64,
    pub model: ModelParams,
    pub initial_state: InitialState,
    pub integrator: IntegratorSection,
    pub outputs: Vec<OutputSpec>,
    pub fit: Option<FitLaw>,
    pub trajectories: Option<TrajectorySection>,
}

fn typed<T: DeserializeOwned>(params: toml::Table) -> Result<T, RunError> {
    toml::Value::Table(params).try_into().map_err(|e: toml::de::Error| RunError::Config(format!("params: {}", e.message())))
}

fn table<T: Serialize>(value: &T) -> Result<toml::Table, RunError> {
    toml::Table::try_from(value).map_err(|e| RunError::Config(e.to_string()))
}

impl ScenarioConfig {
    /// Parses and validates TOML text.
    pub fn parse(text: &str) -> Result<Self, RunError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        let model = match raw.model {
            ModelKind::Collisional => ModelParams::Collisional(typed(raw.params)?),
            ModelKind::Qbm => ModelParams::Qbm(typed(raw.params)?),
            ModelKind::CaldeiraLeggett => ModelParams::CaldeiraLeggett(typed(raw.params)?),
            ModelKind::SpinBoson => ModelParams::SpinBoson(typed(raw.params)?),
            ModelKind::SpinSpin => ModelParams::SpinSpin(typed(raw.params)?),
            ModelKind::CavityCat => ModelParams::CavityCat(typed(raw.params)?),
            ModelKind::CustomLindblad => ModelParams::CustomLindblad(typed(raw.params)?),
        };
        let cfg = ScenarioConfig {
            name: raw.name,
            seed: raw.seed,
            model,
            initial_state: raw.initial_state,
            integrator: raw.integrator,
            outputs: raw.outputs,
            fit: raw.fit,
            trajectories: raw.trajectories,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, RunError> {
        let params = match &self.model {
            ModelParams::Collisional(c) => table(c)?,
            ModelParams::Qbm(c) => table(c)?,
            ModelParams::CaldeiraLeggett(c) => table(c)?,
            ModelParams::SpinBoson(c) => table(c)?,
            ModelParams::SpinSpin(c) => table(c)?,
            ModelParams::CavityCat(c) => table(c)?,
            ModelParams::CustomLindblad(c) => table(c)?,
        };
        let raw = RawScenario {
            name: self.name.clone(),
            model: self.model.kind(),
            seed: self.seed,
            outputs: self.outputs.clone(),
            fit: self.fit,
            params,
            initial_state: self.initial_state.clone(),
            integrator: self.integrator,
            trajectories: self.trajectories.clone(),
        };
        toml::to_string(&raw).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn kind(&self) -> ModelKind {
        self.model.kind()
    }

    pub fn wants(&self, name: &str) -> bool {
        self.outputs.iter().any(|o| o.name() == name)
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        self.outputs
            .iter()
            .filter_map(|o| match o {
                OutputSpec::WignerSnapshots(t) => Some(t.clone()),
                _ => None,
            })
            .flatten()
            .collect()
    }

    /// Schema-level checks that need no numerics.
    pub fn validate(&self) -> Result<(), RunError> {
        if let Some(name) = &self.name {
            let ok = !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
            if !ok {
                return invalid("name", "use letters, digits, '_', '-' or '.'");
            }
        }
        let ig = &self.integrator;
        positive("integrator.dt", ig.dt)?;
        positive("integrator.t_final", ig.t_final)?;
        if ig.t_final < ig.dt {
            return invalid("integrator.t_final", "must be at least dt");
        }
        if ig.record_stride == 0 {
            return invalid("integrator.record_stride", "must be at least 1");
        }
        self.validate_model()?;
        self.validate_state()?;
        self.validate_outputs()?;
        if let Some(tr) = &self.trajectories {
            self.validate_trajectories(tr)?;
        }
        Ok(())
    }

    fn validate_model(&self) -> Result<(), RunError> {
        match &self.model {
            ModelParams::Collisional(c) => {
                match c.regime {
                    Regime::LongWavelength => {
                        positive("lambda", c.lambda.ok_or_else(|| missing("lambda"))?)?;
                        if c.gamma_tot.is_some() {
                            return invalid("gamma_tot", "only used in the short_wavelength regime");
                        }
                    }
                    Regime::ShortWavelength => {
                        positive("gamma_tot", c.gamma_tot.ok_or_else(|| missing("gamma_tot"))?)?;
                        if c.lambda.is_some() {
                            return invalid("lambda", "only used in the long_wavelength regime");
                        }
                    }
                }
                positive("mass", c.mass)?;
                grid_ok(&c.grid)
            }
            ModelParams::Qbm(c) => {
                for (n, v) in [("mass", c.mass), ("omega", c.omega), ("gamma0", c.gamma0), ("temperature", c.temperature), ("cutoff", c.cutoff)] {
                    positive(n, v)?;
                }
                match c.basis {
                    BasisKind::Grid => {
                        if c.n_max.is_some() {
                            return invalid("n_max", "only used with basis = \"oscillator\"");
                        }
                        grid_ok(&c.grid.ok_or_else(|| missing("grid"))?)
                    }
                    BasisKind::Oscillator => {
                        if c.grid.is_some() {
                            return invalid("grid", "only used with basis = \"grid\"");
                        }
                        match c.n_max {
                            Some(n) if n >= 2 => Ok(()),
                            Some(_) => invalid("n_max", "must be at least 2"),
                            None => Err(missing("n_max")),
                        }
                    }
                }
            }
            ModelParams::CaldeiraLeggett(c) => {
                for (n, v) in [("mass", c.mass), ("gamma0", c.gamma0), ("temperature", c.temperature)] {
                    positive(n, v)?;
                }
                nonnegative("omega", c.omega)?;
                grid_ok(&c.grid)
            }
            ModelParams::SpinBoson(c) => {
                for (n, v) in [("mass", c.mass), ("gamma0", c.gamma0), ("cutoff", c.cutoff), ("temperature", c.temperature)] {
                    positive(n, v)?;
                }
                nonnegative("omega0", c.omega0)?;
                nonnegative("delta0", c.delta0)?;
                match c.method {
                    SpinBosonMethod::Exact if c.delta0 != 0.0 => invalid("delta0", "the exact method needs delta0 = 0"),
                    SpinBosonMethod::BornMarkov if c.omega0 != 0.0 => invalid("omega0", "the born_markov method needs omega0 = 0"),
                    SpinBosonMethod::BornMarkov if c.delta0 == 0.0 => invalid("delta0", "the born_markov method needs delta0 > 0"),
                    _ => Ok(()),
                }
            }
            ModelParams::SpinSpin(c) => {
                match (&c.couplings, c.n_env) {
                    (Some(_), Some(_)) => return invalid("n_env", "give either couplings or n_env"),
                    (None, None) => return Err(missing("couplings or n_env")),
                    (Some(g), None) => {
                        if g.is_empty() || g.iter().any(|v| !v.is_finite()) {
                            return invalid("couplings", "need at least one finite coupling");
                        }
                    }
                    (None, Some(n)) => {
                        if n == 0 {
                            return invalid("n_env", "must be at least 1");
                        }
                    }
                }
                positive("coupling_max", c.coupling_max)?;
                finite("env_theta", c.env_theta)?;
                finite("env_phi", c.env_phi)
            }
            ModelParams::CavityCat(c) => {
                positive("damping_time", c.damping_time)?;
                match c.n_max {
                    Some(n) if n < 2 => invalid("n_max", "must be at least 2"),
                    _ => Ok(()),
                }
            }
            ModelParams::CustomLindblad(c) => {
                if c.dim < 2 {
                    return invalid("dim", "must be at least 2");
                }
                for (k, l) in c.lindblad.iter().enumerate() {
                    if !(l.rate >= 0.0) || !l.rate.is_finite() {
                        return Err(RunError::Config(format!("lindblad[{k}].rate must be nonnegative and finite")));
                    }
                }
                if let Some([i, j]) = c.coherence {
                    if i >= c.dim || j >= c.dim || i == j {
                        return invalid("coherence", "needs two distinct indices below dim");
                    }
                }
                if let Some([a, b]) = c.subsystems {
                    if a < 1 || b < 1 || a * b != c.dim {
                        return invalid("subsystems", "dimensions must multiply to dim");
                    }
                }
                Ok(())
            }
        }
    }

    fn validate_state(&self) -> Result<(), RunError> {
        let s = &self.initial_state;
        match s {
            InitialState::GaussianPacket { x0, sigma, k0 } => {
                finite("x0", *x0)?;
                finite("k0", *k0)?;
                positive("sigma", *sigma)?;
            }
            InitialState::TwoPacketCat { x0, sigma } => {
                positive("x0", *x0)?;
                positive("sigma", *sigma)?;
            }
            InitialState::QubitBloch { theta, phi } => {
                finite("theta", *theta)?;
                finite("phi", *phi)?;
            }
            InitialState::Coherent { alpha, phase } => {
                nonnegative("alpha", *alpha)?;
                finite("phase", *phase)?;
            }
            InitialState::Cat { alpha, chi } => {
                positive("alpha", *alpha)?;
                finite("chi", *chi)?;
            }
            InitialState::Basis { .. } => {}
        }
        let packet = matches!(s, InitialState::GaussianPacket { .. } | InitialState::TwoPacketCat { .. });
        let field = matches!(s, InitialState::Coherent { .. } | InitialState::Cat { .. });
        let ok = match &self.model {
            ModelParams::Collisional(_) | ModelParams::CaldeiraLeggett(_) => packet,
            ModelParams::Qbm(c) => match c.basis {
                BasisKind::Grid => packet,
                BasisKind::Oscillator => field || matches!(s, InitialState::Basis { .. }),
            },
            ModelParams::SpinBoson(_) | ModelParams::SpinSpin(_) => {
                matches!(s, InitialState::QubitBloch { .. } | InitialState::Basis { index: 0 | 1 })
            }
            ModelParams::CavityCat(_) => field,
            ModelParams::CustomLindblad(c) => match s {
                InitialState::Basis { index } => *index < c.dim,
                InitialState::QubitBloch { .. } => c.dim == 2,
                _ => field,
            },
        };
        if ok {
            Ok(())
        } else {
            Err(RunError::Config(format!(
                "initial_state kind \"{}\" does not fit model \"{}\"",
                s.kind(),
                self.kind().name()
            )))
        }
    }

    fn validate_outputs(&self) -> Result<(), RunError> {
        let mut seen = Vec::new();
        for o in &self.outputs {
            if seen.contains(&o.name()) {
                return Err(RunError::Config(format!("output \"{}\" listed twice", o.name())));
            }
            seen.push(o.name());
            match o {
                OutputSpec::PositionDensity | OutputSpec::WignerSnapshots(_) if self.model.grid().is_none() => {
                    return Err(RunError::Config(format!("output \"{}\" needs a position grid", o.name())));
                }
                OutputSpec::WignerSnapshots(times) => {
                    if times.is_empty() {
                        return invalid("wigner_snapshots", "list at least one time");
                    }
                    if times.iter().any(|t| !(*t >= 0.0) || *t > self.integrator.t_final) {
                        return invalid("wigner_snapshots", "times must lie in [0, t_final]");
                    }
                }
                OutputSpec::MutualInformation => match &self.model {
                    ModelParams::SpinSpin(c) => {
                        let n = c.couplings.as_ref().map(Vec::len).or(c.n_env).unwrap_or(0);
                        if n > 10 {
                            return invalid("mutual_information", "needs the joint state; use at most 10 environment spins");
                        }
                    }
                    ModelParams::CustomLindblad(c) if c.subsystems.is_some() => {}
                    _ => {
                        return Err(RunError::Config(format!(
                            "output \"mutual_information\" is not available for model \"{}\"",
                            self.kind().name()
                        )))
                    }
                },
                _ => {}
            }
        }
        Ok(())
    }

    fn validate_trajectories(&self, tr: &TrajectorySection) -> Result<(), RunError> {
        let allowed = match &self.model {
            ModelParams::SpinSpin(_) => false,
            ModelParams::SpinBoson(c) => c.method == SpinBosonMethod::BornMarkov,
            _ => true,
        };
        if !allowed {
            return Err(RunError::Config(format!(
                "trajectories need a generator-based model; \"{}\" is not",
                self.kind().name()
            )));
        }
        if tr.n_trajectories < 2 {
            return invalid("trajectories.n_trajectories", "must be at least 2");
        }
        if let Some(dt) = tr.dt {
            positive("trajectories.dt", dt)?;
            if dt > self.integrator.t_final {
                return invalid("trajectories.dt", "must not exceed t_final");
            }
        }
        if tr.record_stride == Some(0) {
            return invalid("trajectories.record_stride", "must be at least 1");
        }
        Ok(())
    }
}

fn invalid(name: &str, reason: &str) -> Result<(), RunError> {
    Err(RunError::Config(format!("{name}: {reason}")))
}

fn missing(name: &str) -> RunError {
    RunError::Config(format!("missing parameter {name}"))
}

fn finite(name: &str, v: f64) -> Result<(), RunError> {
    if v.is_finite() {
        Ok(())
    } else {
        invalid(name, "must be finite")
    }
}

fn positive(name: &str, v: f64) -> Result<(), RunError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        invalid(name, "must be positive and finite")
    }
}

fn nonnegative(name: &str, v: f64) -> Result<(), RunError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        invalid(name, "must be nonnegative and finite")
    }
}

fn grid_ok(g: &GridSpec) -> Result<(), RunError> {
    if g.n_points < decoh_core::grid::MIN_POINTS {
        return invalid("grid.n_points", "must be at least 8");
    }
    positive("grid.half_width", g.half_width)
}
