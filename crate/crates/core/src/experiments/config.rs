//! JSON experiment configuration and its resolved form.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bernstein::MultiDegree;
use crate::capacity::{Capacity, CapacitySpec, DistortionKind, ReprSpec};
use crate::choquet::validate_exponent;
use crate::error::{Error, Result};
use crate::randomfn::{FamilySpec, RandomFunction, DEFAULT_GRID_1D, DEFAULT_GRID_2D};
use crate::stochastic::TauSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MeanConvergence,
    CapacityConvergence,
    PossibilityConvergence,
    Stochastic,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MeanConvergence => "mean_convergence",
            ExperimentKind::CapacityConvergence => "capacity_convergence",
            ExperimentKind::PossibilityConvergence => "possibility_convergence",
            ExperimentKind::Stochastic => "stochastic",
        }
    }
}

/// A degree `n` (applied to every axis) or an explicit `[n_1, ..., n_N]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreeSpec {
    Uniform(usize),
    PerAxis(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Experiment configuration as written by the user; every field except
/// `experiment` is optional and defaulted per experiment kind.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentKind>,
    pub capacity: Option<CapacitySpec>,
    pub family: Option<FamilySpec>,
    pub dim: Option<usize>,
    pub schedule: Option<Vec<DegreeSpec>>,
    pub p: Option<OneOrMany<f64>>,
    pub grid: Option<usize>,
    pub eval_grid: Option<usize>,
    pub epsilon: Option<OneOrMany<f64>>,
    pub eta: Option<OneOrMany<f64>>,
    pub r: Option<OneOrMany<f64>>,
    pub deltas: Option<Vec<f64>>,
    pub n_multipliers: Option<Vec<usize>>,
    pub tau: Option<TauSchedule>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub degenerate_nodes: Option<bool>,
}

/// A validated configuration with every default filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub experiment: ExperimentKind,
    pub capacity: CapacitySpec,
    pub family: FamilySpec,
    pub dim: usize,
    pub schedule: Vec<Vec<usize>>,
    pub p: Vec<f64>,
    pub grid: usize,
    pub eval_grid: usize,
    pub epsilon: Vec<f64>,
    pub eta: Vec<f64>,
    pub r: Vec<f64>,
    pub deltas: Vec<f64>,
    pub n_multipliers: Vec<usize>,
    pub tau: Option<TauSchedule>,
    pub seed: u64,
    pub samples: usize,
    pub degenerate_nodes: bool,
}

/// Parses a JSON configuration, naming the offending key on failure.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut de = serde_json::Deserializer::from_str(text);
    let parsed: ExperimentConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let key = if path == "." { "<root>".to_string() } else { path };
        Error::config(key, e.inner().to_string())
    })?;
    de.end().map_err(|e| Error::config("<root>", e.to_string()))?;
    Ok(parsed)
}

fn uniform_atoms(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("w{i}")).collect()
}

fn distorted_uniform(kind: DistortionKind, m: usize) -> CapacitySpec {
    CapacitySpec {
        atoms: uniform_atoms(m),
        repr: ReprSpec::Distorted {
            distortion: kind,
            probabilities: vec![1.0 / m as f64; m],
        },
    }
}

fn default_capacity(kind: ExperimentKind) -> CapacitySpec {
    match kind {
        ExperimentKind::MeanConvergence | ExperimentKind::CapacityConvergence => {
            distorted_uniform(DistortionKind::Power { alpha: 0.5 }, 4)
        }
        ExperimentKind::PossibilityConvergence => CapacitySpec {
            atoms: uniform_atoms(4),
            repr: ReprSpec::Possibility {
                lambda: vec![1.0, 0.7, 0.4, 0.1],
            },
        },
        ExperimentKind::Stochastic => distorted_uniform(DistortionKind::Rational2t, 4),
    }
}

fn default_schedule(kind: ExperimentKind, dim: usize) -> Vec<DegreeSpec> {
    match kind {
        ExperimentKind::MeanConvergence if dim == 2 => vec![
            DegreeSpec::Uniform(4),
            DegreeSpec::Uniform(16),
            DegreeSpec::Uniform(64),
            DegreeSpec::PerAxis(vec![16, 4]),
            DegreeSpec::PerAxis(vec![64, 16]),
        ],
        ExperimentKind::MeanConvergence => [4, 16, 64].map(DegreeSpec::Uniform).to_vec(),
        ExperimentKind::Stochastic => [50, 200, 800].map(DegreeSpec::Uniform).to_vec(),
        _ if dim == 2 => [4, 16, 64].map(DegreeSpec::Uniform).to_vec(),
        _ => [4, 16, 64, 256].map(DegreeSpec::Uniform).to_vec(),
    }
}

fn check_all(key: &str, values: &[f64], ok: impl Fn(f64) -> bool, what: &str) -> Result<()> {
    match values.iter().find(|v| !ok(**v)) {
        Some(v) => Err(Error::config(key, format!("{what}, got {v}"))),
        None => Ok(()),
    }
}

impl ExperimentConfig {
    /// Fills defaults and validates every field.
    pub fn resolve(self) -> Result<ResolvedConfig> {
        let kind = self
            .experiment
            .ok_or_else(|| Error::config("experiment", "missing experiment id"))?;
        let default_dim = if kind == ExperimentKind::MeanConvergence { 2 } else { 1 };
        let dim = self.dim.unwrap_or(default_dim);
        if !(1..=2).contains(&dim) {
            return Err(Error::config("dim", format!("dimension must be 1 or 2, got {dim}")));
        }
        if kind == ExperimentKind::Stochastic && dim != 1 {
            return Err(Error::config("dim", "the stochastic experiment is one-dimensional"));
        }

        let capacity = self.capacity.unwrap_or_else(|| default_capacity(kind));
        let cap = capacity.build().map_err(|e| Error::config("capacity", e.to_string()))?;
        let family = self.family.unwrap_or(FamilySpec::AffineNoise { z: None });
        family.build(cap.space(), dim).map_err(|e| match e {
            Error::Config { .. } => e,
            other => Error::config("family", other.to_string()),
        })?;

        let schedule_spec = self.schedule.unwrap_or_else(|| default_schedule(kind, dim));
        if schedule_spec.is_empty() {
            return Err(Error::config("schedule", "schedule must be nonempty"));
        }
        let mut schedule = Vec::with_capacity(schedule_spec.len());
        for (i, entry) in schedule_spec.iter().enumerate() {
            let degrees = match entry {
                DegreeSpec::Uniform(n) => vec![*n; dim],
                DegreeSpec::PerAxis(v) => v.clone(),
            };
            if degrees.len() != dim {
                return Err(Error::config(
                    format!("schedule[{i}]"),
                    format!("expected {dim} degrees, got {}", degrees.len()),
                ));
            }
            MultiDegree::new(degrees.clone()).map_err(|e| Error::config(format!("schedule[{i}]"), e.to_string()))?;
            schedule.push(degrees);
        }

        let p = self.p.map(OneOrMany::into_vec).unwrap_or_else(|| vec![1.0]);
        if p.is_empty() {
            return Err(Error::config("p", "at least one exponent is required"));
        }
        for v in &p {
            validate_exponent(*v).map_err(|e| Error::config("p", e.to_string()))?;
        }

        let default_grid = if kind == ExperimentKind::MeanConvergence || dim == 2 {
            DEFAULT_GRID_2D
        } else {
            DEFAULT_GRID_1D
        };
        let grid = self.grid.unwrap_or(default_grid);
        if grid < 2 {
            return Err(Error::config("grid", "a grid needs at least two points per axis"));
        }
        let default_eval = if kind == ExperimentKind::MeanConvergence {
            33.min(grid)
        } else {
            grid
        };
        let eval_grid = self.eval_grid.unwrap_or(default_eval);
        if eval_grid < 2 || !(grid - 1).is_multiple_of(eval_grid - 1) {
            return Err(Error::config(
                "eval_grid",
                format!("eval_grid - 1 must divide grid - 1 = {}, got {eval_grid}", grid - 1),
            ));
        }

        let epsilon = self.epsilon.map(OneOrMany::into_vec).unwrap_or_else(|| match kind {
            ExperimentKind::Stochastic => vec![0.1, 0.2, 0.3],
            ExperimentKind::PossibilityConvergence => vec![0.25, 0.5],
            _ => vec![0.1],
        });
        check_all(
            "epsilon",
            &epsilon,
            |v| v > 0.0 && v.is_finite(),
            "epsilon must be positive",
        )?;
        let eta = self.eta.map(OneOrMany::into_vec).unwrap_or_else(|| vec![0.05]);
        check_all("eta", &eta, |v| v > 0.0 && v <= 1.0, "eta must lie in (0, 1]")?;
        let r = self
            .r
            .map(OneOrMany::into_vec)
            .unwrap_or_else(|| (1..=9).map(|i| i as f64 / 10.0).collect());
        check_all("r", &r, |v| v > 0.0 && v < 1.0, "r must lie in (0, 1)")?;
        let deltas = self.deltas.unwrap_or_else(|| vec![0.1, 0.2]);
        check_all("deltas", &deltas, |v| v > 0.0 && v <= 1.0, "deltas must lie in (0, 1]")?;
        let n_multipliers = self.n_multipliers.unwrap_or_else(|| vec![1, 4, 16]);
        if n_multipliers.contains(&0) {
            return Err(Error::config("n_multipliers", "multipliers must be at least 1"));
        }

        if let Some(t) = &self.tau {
            t.validate()?;
        }
        let tau = self.tau;
        let samples = self.samples.unwrap_or(10_000);
        if samples == 0 || samples > u32::MAX as usize {
            return Err(Error::config("samples", "sample count must lie in [1, 2^32 - 1]"));
        }

        Ok(ResolvedConfig {
            experiment: kind,
            capacity,
            family,
            dim,
            schedule,
            p,
            grid,
            eval_grid,
            epsilon,
            eta,
            r,
            deltas,
            n_multipliers,
            tau,
            seed: self.seed.unwrap_or(0),
            samples,
            degenerate_nodes: self.degenerate_nodes.unwrap_or(false),
        })
    }
}

impl ResolvedConfig {
    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn build_capacity(&self) -> Result<Capacity> {
        self.capacity.build()
    }

    pub fn build_family(&self, cap: &Capacity) -> Result<RandomFunction> {
        self.family.build(cap.space(), self.dim)
    }

    pub fn degrees(&self) -> Result<Vec<MultiDegree>> {
        self.schedule.iter().map(|d| MultiDegree::new(d.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(r#"{"experiment":"mean_convergence","family":{"name":"affine_noise"}}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(cfg.dim, 2);
        assert_eq!(cfg.grid, 65);
        assert_eq!(cfg.eval_grid, 33);
        assert_eq!(cfg.schedule[3], vec![16, 4]);
        assert_eq!(cfg.hash().len(), 64);
        let again = parse_config(r#"{"family":{"name":"affine_noise"},"experiment":"mean_convergence"}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(cfg.hash(), again.hash());
    }

    #[test]
    fn invalid_values_name_their_key() {
        let err = parse_config(r#"{"experiment":"stochastic","p":0.5}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "p"), "{err}");
        let err = parse_config(r#"{"experiment":"stochastic","r":[0.5,1.0]}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "r"), "{err}");
        let err = parse_config(r#"{"experiment":"stochastic","tau":{"kind":"const","c":0.5}}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(err.to_string().contains("τ(n) ≥ 1"));
        let err = parse_config(r#"{"experiment":"stochastic","bogus":1}"#).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = parse_config(r#"{"experiment":"stochastic","family":{"name":"nope"}}"#).unwrap_err();
        assert!(
            matches!(err, Error::Config { ref key, .. } if key.starts_with("family")),
            "{err}"
        );
        let err = parse_config(r#"{"experiment":"teleport"}"#).unwrap_err();
        assert!(
            matches!(err, Error::Config { ref key, .. } if key == "experiment"),
            "{err}"
        );
        let err = parse_config(r#"{"experiment":"mean_convergence","schedule":[[4]]}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(
            matches!(err, Error::Config { ref key, .. } if key == "schedule[0]"),
            "{err}"
        );
    }

    #[test]
    fn scalar_and_list_parameters() {
        let cfg = parse_config(r#"{"experiment":"capacity_convergence","p":[1,2],"epsilon":0.2}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(cfg.p, vec![1.0, 2.0]);
        assert_eq!(cfg.epsilon, vec![0.2]);
        assert_eq!(cfg.schedule, vec![vec![4], vec![16], vec![64], vec![256]]);
    }
}
