//! Verification harness: convergence sweeps and Monte Carlo checks that emit
//! one [`ResultRow`] per checked inequality.

mod config;
mod convergence;
mod montecarlo;
mod report;

use std::time::Instant;

use crate::capacity::Capacity;
use crate::choquet::integrate;
use crate::error::{Error, Result};
use crate::randomfn::{Grid, RandomFunction};

pub use config::{parse_config, DegreeSpec, ExperimentConfig, ExperimentKind, OneOrMany, ResolvedConfig};
pub use convergence::{run_capacity_convergence, run_mean_convergence, run_possibility_convergence};
pub use montecarlo::run_stochastic_experiment;
pub use report::{tolerance_for, ExperimentResult, ResultRow, CSV_HEADER};

/// `t / (1 + t)`, the bounded transform behind the semi-metric.
pub(crate) fn bounded(t: f64) -> f64 {
    t / (1.0 + t)
}

/// `d(F, G) = sup_x (C) ∫ |F - G| / (1 + |F - G|) dmu` over `grid`.
pub fn semi_metric(f: &RandomFunction, g: &RandomFunction, cap: &Capacity, grid: &Grid) -> Result<f64> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    if f.atom_count() != g.atom_count() || f.atom_count() != cap.atom_count() {
        return Err(Error::DimensionMismatch {
            expected: cap.atom_count(),
            got: f.atom_count().max(g.atom_count()),
        });
    }
    let (tf, tg) = (f.tabulate(grid)?, g.tabulate(grid)?);
    let m = cap.atom_count();
    let mut diffs = vec![0.0; m];
    let mut best = 0.0f64;
    for i in 0..grid.len() {
        for (w, d) in diffs.iter_mut().enumerate() {
            *d = bounded((tf.value(i, w) - tg.value(i, w)).abs());
        }
        best = best.max(integrate(&diffs, cap, cap.full()));
    }
    Ok(best)
}

/// Runs the experiment selected by `cfg`.
pub fn run_experiment(cfg: &ResolvedConfig) -> Result<ExperimentResult> {
    let start = Instant::now();
    let rows = match cfg.experiment {
        ExperimentKind::MeanConvergence => run_mean_convergence(cfg)?,
        ExperimentKind::CapacityConvergence => run_capacity_convergence(cfg)?,
        ExperimentKind::PossibilityConvergence => run_possibility_convergence(cfg)?,
        ExperimentKind::Stochastic => run_stochastic_experiment(cfg)?,
    };
    Ok(ExperimentResult {
        experiment: cfg.experiment.name().to_string(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        grid: cfg.grid,
        samples: cfg.samples,
        rows,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Parses, resolves (with an optional seed override) and runs a JSON config.
pub fn run_config_text(text: &str, seed: Option<u64>) -> Result<ExperimentResult> {
    let mut parsed = parse_config(text)?;
    if seed.is_some() {
        parsed.seed = seed;
    }
    run_experiment(&parsed.resolve()?)
}
