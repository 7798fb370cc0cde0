//! Static description of the available models and their parameters.

use serde::Serialize;

use crate::config::ModelKind;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    /// `float`, `int`, `bool`, `enum(a|b)`, `grid`, `matrix`, `list(float)`
    /// or `list(lindblad)`.
    #[serde(rename = "type")]
    pub ty: &'static str,
    /// Default value, or `required`, or the condition under which the
    /// parameter is needed.
    pub default: &'static str,
    pub description: &'static str,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModelInfo {
    pub name: &'static str,
    pub topic: &'static str,
    pub params: &'static [ParamInfo],
    pub initial_states: &'static [&'static str],
    pub outputs: &'static [&'static str],
    /// Complete scenarios that together use every parameter.
    #[serde(skip)]
    pub examples: &'static [&'static str],
}

const fn p(name: &'static str, ty: &'static str, default: &'static str, description: &'static str) -> ParamInfo {
    ParamInfo { name, ty, default, description }
}

const PACKETS: &[&str] = &["gaussian_packet", "two_packet_cat"];
const QUBIT: &[&str] = &["qubit_bloch", "basis"];
const GRID_OUTPUTS: &[&str] =
    &["purity", "entropy", "coherence_magnitude", "position_density", "wigner_snapshots"];
const QUBIT_OUTPUTS: &[&str] = &["purity", "entropy", "coherence_magnitude"];

const COLLISIONAL: ModelInfo = ModelInfo {
    name: "collisional",
    topic: "spatial decoherence from scattering of environmental particles",
    params: &[
        p("regime", "enum(long_wavelength|short_wavelength)", "long_wavelength", "scattering regime"),
        p("lambda", "float>0", "long_wavelength", "scattering constant; coherence decays at lambda (x - x')^2"),
        p("gamma_tot", "float>0", "short_wavelength", "total scattering rate"),
        p("mass", "float>0", "1", "particle mass"),
        p("free_dynamics", "bool", "true", "include the kinetic energy p^2/2M"),
        p("grid", "grid", "required", "{ n_points, half_width } position grid"),
    ],
    initial_states: PACKETS,
    outputs: GRID_OUTPUTS,
    examples: &[
        r#"model = "collisional"
outputs = ["coherence_magnitude", { wigner_snapshots = [0.0, 0.5] }]
fit = "exponential"
[params]
regime = "long_wavelength"
lambda = 1.0
mass = 1.0
free_dynamics = false
grid = { n_points = 80, half_width = 4.0 }
[initial_state]
kind = "two_packet_cat"
x0 = 1.5
sigma = 0.5
[integrator]
dt = 0.01
t_final = 1.0
"#,
        r#"model = "collisional"
outputs = ["purity", "position_density"]
[params]
regime = "short_wavelength"
gamma_tot = 2.0
grid = { n_points = 64, half_width = 4.0 }
[initial_state]
kind = "gaussian_packet"
x0 = 0.0
sigma = 0.6
k0 = 1.0
[integrator]
dt = 0.01
t_final = 0.5
"#,
    ],
};

const QBM: ModelInfo = ModelInfo {
    name: "qbm",
    topic: "quantum Brownian motion of an oscillator in an ohmic bath (Born-Markov)",
    params: &[
        p("mass", "float>0", "1", "oscillator mass"),
        p("omega", "float>0", "required", "oscillator frequency"),
        p("gamma0", "float>0", "required", "relaxation rate of the ohmic bath"),
        p("temperature", "float>0", "required", "bath temperature"),
        p("cutoff", "float>0", "required", "bath cutoff frequency"),
        p("basis", "enum(grid|oscillator)", "grid", "representation of x and p"),
        p("grid", "grid", "basis = grid", "{ n_points, half_width } position grid"),
        p("n_max", "int>=2", "basis = oscillator", "number of Fock levels"),
        p("frequency_shift", "bool", "false", "add the bath-induced frequency shift"),
        p("dissipation", "bool", "true", "include the momentum damping term"),
        p("anomalous", "bool", "true", "include the anomalous diffusion term"),
    ],
    initial_states: &["gaussian_packet", "two_packet_cat", "coherent", "cat", "basis"],
    outputs: GRID_OUTPUTS,
    examples: &[
        r#"model = "qbm"
outputs = ["purity", "coherence_magnitude"]
[params]
mass = 1.0
omega = 0.1
gamma0 = 0.05
temperature = 20.0
cutoff = 1.0
basis = "grid"
grid = { n_points = 64, half_width = 5.0 }
[initial_state]
kind = "two_packet_cat"
x0 = 1.5
sigma = 0.7
[integrator]
dt = 0.005
t_final = 0.2
check_positivity = false
"#,
        r#"model = "qbm"
outputs = ["purity", "entropy"]
[params]
omega = 1.0
gamma0 = 0.02
temperature = 2.0
cutoff = 20.0
basis = "oscillator"
n_max = 24
frequency_shift = true
dissipation = true
anomalous = false
[initial_state]
kind = "coherent"
alpha = 1.5
phase = 0.3
[integrator]
dt = 0.01
t_final = 1.0
check_positivity = false
"#,
    ],
};

const CALDEIRA_LEGGETT: ModelInfo = ModelInfo {
    name: "caldeira_leggett",
    topic: "high-temperature limit of quantum Brownian motion",
    params: &[
        p("mass", "float>0", "1", "particle mass"),
        p("gamma0", "float>0", "required", "relaxation rate"),
        p("temperature", "float>0", "required", "bath temperature"),
        p("omega", "float>=0", "0", "harmonic frequency; 0 for a free particle"),
        p("lindblad_repair", "bool", "false", "add the minimal term making the generator completely positive"),
        p("grid", "grid", "required", "{ n_points, half_width } position grid"),
    ],
    initial_states: PACKETS,
    outputs: GRID_OUTPUTS,
    examples: &[r#"model = "caldeira_leggett"
outputs = ["purity", "coherence_magnitude", "position_density"]
[params]
mass = 1.0
gamma0 = 0.05
temperature = 10.0
omega = 0.2
lindblad_repair = true
grid = { n_points = 64, half_width = 5.0 }
[initial_state]
kind = "two_packet_cat"
x0 = 1.5
sigma = 0.7
[integrator]
dt = 0.005
t_final = 0.2
"#],
};

const SPIN_BOSON: ModelInfo = ModelInfo {
    name: "spin_boson",
    topic: "two-level system coupled to an ohmic oscillator bath",
    params: &[
        p("omega0", "float>=0", "0", "level splitting"),
        p("delta0", "float>=0", "0", "tunneling frequency; must be 0 for method = exact"),
        p("mass", "float>0", "1", "mass scale of the ohmic spectral density"),
        p("gamma0", "float>0", "required", "coupling strength of the ohmic spectral density"),
        p("cutoff", "float>0", "required", "bath cutoff frequency"),
        p("temperature", "float>0", "required", "bath temperature"),
        p("method", "enum(exact|born_markov)", "exact", "closed-form pure dephasing or Born-Markov generator"),
    ],
    initial_states: QUBIT,
    outputs: QUBIT_OUTPUTS,
    examples: &[
        r#"model = "spin_boson"
outputs = ["coherence_magnitude"]
fit = "exponential"
[params]
omega0 = 1.0
mass = 1.0
gamma0 = 0.001
cutoff = 10.0
temperature = 1.0
method = "exact"
[initial_state]
kind = "qubit_bloch"
theta = 1.5707963267948966
[integrator]
dt = 1.0
t_final = 400.0
"#,
        r#"model = "spin_boson"
outputs = ["purity"]
[params]
delta0 = 1.0
gamma0 = 0.01
cutoff = 10.0
temperature = 1.0
method = "born_markov"
[initial_state]
kind = "basis"
index = 0
[integrator]
dt = 0.01
t_final = 2.0
"#,
    ],
};

const SPIN_SPIN: ModelInfo = ModelInfo {
    name: "spin_spin",
    topic: "qubit dephased by a bath of environment spins",
    params: &[
        p("couplings", "list(float)", "or n_env", "explicit couplings g_i"),
        p("n_env", "int>=1", "or couplings", "number of environment spins with random couplings"),
        p("coupling_max", "float>0", "1", "random couplings are uniform in [0, coupling_max)"),
        p("env_theta", "float", "pi/2", "Bloch polar angle of every environment spin"),
        p("env_phi", "float", "0", "Bloch azimuth of every environment spin"),
    ],
    initial_states: QUBIT,
    outputs: &["purity", "entropy", "coherence_magnitude", "mutual_information"],
    examples: &[
        r#"model = "spin_spin"
seed = 7
outputs = ["coherence_magnitude"]
fit = "gaussian"
[params]
n_env = 64
coupling_max = 1.0
[initial_state]
kind = "qubit_bloch"
theta = 1.5707963267948966
[integrator]
dt = 0.005
t_final = 1.0
"#,
        r#"model = "spin_spin"
outputs = ["purity", "mutual_information"]
[params]
couplings = [0.3, 0.7, 1.1]
env_theta = 1.2
env_phi = 0.4
[initial_state]
kind = "qubit_bloch"
theta = 1.5707963267948966
phi = 0.0
[integrator]
dt = 0.1
t_final = 3.0
"#,
    ],
};

const CAVITY_CAT: ModelInfo = ModelInfo {
    name: "cavity_cat",
    topic: "damped cavity field in a superposition of coherent states",
    params: &[
        p("damping_time", "float>0", "required", "cavity energy damping time T_r"),
        p("n_max", "int>=2", "from amplitude", "number of Fock levels"),
    ],
    initial_states: &["cat", "coherent"],
    outputs: QUBIT_OUTPUTS,
    examples: &[r#"model = "cavity_cat"
outputs = ["coherence_magnitude", "purity"]
fit = "exponential"
[params]
damping_time = 1.0
n_max = 30
[initial_state]
kind = "cat"
alpha = 1.8708286933869707
chi = 1.1623892818282235
[integrator]
dt = 0.002
t_final = 0.3
"#],
};

const CUSTOM_LINDBLAD: ModelInfo = ModelInfo {
    name: "custom_lindblad",
    topic: "user-supplied Hamiltonian and Lindblad operators",
    params: &[
        p("dim", "int>=2", "required", "Hilbert space dimension"),
        p("hamiltonian", "matrix", "zero", "named operator, real rows, or { re, im } rows"),
        p("lindblad", "list(lindblad)", "empty", "[{ rate, operator }] with operator as for hamiltonian"),
        p("coherence", "list(int)", "[0, 1]", "matrix element tracked as the coherence"),
        p("subsystems", "list(int)", "none", "[d_A, d_B] bipartition for the mutual information"),
    ],
    initial_states: &["basis", "qubit_bloch", "coherent", "cat"],
    outputs: &["purity", "entropy", "coherence_magnitude", "mutual_information"],
    examples: &[
        r#"model = "custom_lindblad"
outputs = ["purity", "entropy"]
fit = "exponential"
[params]
dim = 2
hamiltonian = [[0.5, 0.0], [0.0, -0.5]]
lindblad = [{ rate = 0.25, operator = "sigma_z" }]
coherence = [0, 1]
[initial_state]
kind = "qubit_bloch"
theta = 1.5707963267948966
[integrator]
dt = 0.01
t_final = 10.0
"#,
        r#"model = "custom_lindblad"
outputs = ["mutual_information"]
[params]
dim = 4
hamiltonian = { re = [[0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]], im = [[0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]] }
lindblad = [{ rate = 0.1, operator = "number" }]
subsystems = [2, 2]
[initial_state]
kind = "basis"
index = 0
[integrator]
dt = 0.01
t_final = 1.0
"#,
    ],
};

pub const MODELS: [ModelInfo; 7] = [COLLISIONAL, QBM, CALDEIRA_LEGGETT, SPIN_BOSON, SPIN_SPIN, CAVITY_CAT, CUSTOM_LINDBLAD];

pub fn list_models() -> &'static [ModelInfo] {
    &MODELS
}

pub fn model_info(kind: ModelKind) -> &'static ModelInfo {
    MODELS.iter().find(|m| m.name == kind.name()).expect("every model kind is catalogued")
}

/// Tab-separated listing: one `model` line per model followed by one
/// `param` line per parameter.
pub fn models_text() -> String {
    let mut out = String::new();
    for m in list_models() {
        out.push_str(&format!(
            "model\t{}\t{}\tstates={}\toutputs={}\n",
            m.name,
            m.topic,
            m.initial_states.join("|"),
            m.outputs.join("|")
        ));
        for q in m.params {
            out.push_str(&format!("param\t{}\t{}\t{}\t{}\t{}\n", m.name, q.name, q.ty, q.default, q.description));
        }
    }
    out
}

pub fn models_json() -> String {
    serde_json::to_string_pretty(list_models()).expect("catalog serializes")
}
