//! Decoherence model families: collisional decoherence, quantum Brownian
//! motion, spin–boson and spin–spin models, plus cavity-cat arithmetic.

pub mod cavity;
pub mod collisional;
pub mod qbm;
pub mod spin_boson;
pub mod spin_spin;

pub use crate::bath::effective_spin_env_spectral_density;
pub use cavity::{
    cat_decoherence_time, cat_overlap, fringe_visibility, interference_pattern, two_atom_correlation_limits, CatOverlap,
    CavityCatParams,
};
pub use collisional::{
    analytic_decay, collisional_decoherence_time, collisional_generator, collisional_generator_for_packet,
    decoherence_dissipation_ratio, effective_cross_section, hard_sphere_cross_section, scattering_constant, CollisionalParams,
    CollisionalRegime,
};
pub use qbm::{caldeira_leggett_generator, lindblad_repair_caldeira_leggett, qbm_generator, qbm_generator_with, QbmBasis, QbmModel, QbmOptions, QbmParams};
pub use spin_boson::{spin_boson_born_markov, thermal_correlation_time, spin_boson_pure_dephasing, PureDephasing, SpinBosonBornMarkov, SpinBosonParams};
pub use spin_spin::{spin_spin_coherence_factor, SpinSpinParams};
