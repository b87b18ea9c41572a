//! Result rows, CSV emission and the JSON summary.

use serde::Serialize;
use serde_json::{json, Value};

use crate::format::{fmt_f64, fmt_opt};

pub const CSV_HEADER: &str = "experiment,n1,n2,p,epsilon,eta,r,measured,bound,pass";

/// Slack allowed by each check; `pass` is `measured <= bound + tolerance`.
pub fn tolerance_for(check: &str) -> f64 {
    match check.rsplit(':').next().unwrap_or(check) {
        "trend" | "exceedance_trend" | "capacity_transfer" => 1e-12,
        "node_sum" | "bound" | "markov" | "uniform_error" => 1e-9,
        _ => 0.0,
    }
}

/// One checked inequality `measured <= bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub p: Option<f64>,
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub r: Option<f64>,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl ResultRow {
    pub fn new(experiment: impl Into<String>, degrees: &[usize], measured: f64, bound: f64) -> Self {
        let experiment = experiment.into();
        let pass = measured <= bound + tolerance_for(&experiment);
        ResultRow {
            experiment,
            n1: degrees.first().copied(),
            n2: degrees.get(1).copied(),
            p: None,
            epsilon: None,
            eta: None,
            r: None,
            measured,
            bound,
            pass,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    /// Recomputes the pass flag from the stored fields.
    pub fn recompute_pass(&self) -> bool {
        self.measured <= self.bound + tolerance_for(&self.experiment)
    }

    pub fn to_csv_line(&self) -> String {
        let int = |v: Option<usize>| v.map(|n| n.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            int(self.n1),
            int(self.n2),
            fmt_opt(self.p),
            fmt_opt(self.epsilon),
            fmt_opt(self.eta),
            fmt_opt(self.r),
            fmt_f64(self.measured),
            fmt_f64(self.bound),
            self.pass
        )
    }
}

/// Rows of one run plus metadata.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub grid: usize,
    pub samples: usize,
    pub rows: Vec<ResultRow>,
    pub wall_time_seconds: f64,
}

impl ExperimentResult {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn rows_named<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a ResultRow> + 'a {
        self.rows.iter().filter(move |r| r.experiment == check)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv_line());
            out.push('\n');
        }
        out
    }

    /// `{config_hash, totals, violations, metadata}`.
    pub fn summary(&self) -> Value {
        let failed: Vec<&ResultRow> = self.failures().collect();
        json!({
            "config_hash": self.config_hash,
            "totals": {
                "rows": self.rows.len(),
                "passed": self.rows.len() - failed.len(),
                "failed": failed.len(),
            },
            "violations": failed,
            "metadata": {
                "experiment": self.experiment,
                "seed": self.seed,
                "grid": self.grid,
                "samples": self.samples,
                "wall_time_seconds": self.wall_time_seconds,
            },
        })
    }
}
