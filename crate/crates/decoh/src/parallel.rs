//! Trajectory fan-out across threads.

use rayon::prelude::*;

use decoh_core::lindblad::LindbladGenerator;
use decoh_core::trajectories::{unravel_trajectory, TrajectoryConfig, TrajectoryEnsemble};
use decoh_core::DensityMatrix;

use crate::error::RunError;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "DECOH_THREADS";

/// Thread count requested through [`THREADS_ENV`], if any.
pub fn threads_from_env() -> Result<Option<usize>, RunError> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(RunError::Config(format!("{THREADS_ENV} must be a positive integer, got \"{v}\""))),
        },
        Err(e) => Err(RunError::Config(format!("{THREADS_ENV}: {e}"))),
    }
}

/// Runs every trajectory of `cfg` on `threads` workers (the global pool
/// when `None`). Trajectory `i` always uses random stream `i` and the mean
/// is summed in index order, so the result does not depend on scheduling.
pub fn unravel_parallel(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    cfg: &TrajectoryConfig,
    threads: Option<usize>,
) -> Result<TrajectoryEnsemble, RunError> {
    let work = || {
        (0..cfg.n_trajectories)
            .into_par_iter()
            .map(|i| unravel_trajectory(gen, rho0, cfg, i))
            .collect::<decoh_core::Result<Vec<_>>>()
    };
    let trajectories = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Other(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
    .map_err(RunError::from_run)?;
    TrajectoryEnsemble::from_trajectories(cfg.record_times(), trajectories).map_err(RunError::from_run)
}
