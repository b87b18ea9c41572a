//! Monte Carlo checks for Bernstein polynomials on random order-statistic nodes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::config::ResolvedConfig;
use super::report::ResultRow;
use crate::bernstein::{sikkema_constant, BasisMatrix};
use crate::capacity::{CapacityRepr, DiscreteProbability, DistortionFunction};
use crate::error::{Error, Result};
use crate::randomfn::{Grid, GridTable, RandomFunction};
use crate::stochastic::{
    deviation_tail_bound, draw_atom, max_deviation, monte_carlo_margin, order_statistics_from, rate_tail_bound,
    KModulus, SeededStream, TriangularArrayRow,
};

/// Slack of the per-sample error chain.
const CHAIN_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
struct SampleRecord {
    deviation: f64,
    /// `sup_x |B_n(f, Y)(x, w) - f(x, w)|`, or NaN when not requested.
    error: f64,
}

struct Simulation<'a> {
    f: &'a RandomFunction,
    table: &'a GridTable,
    xs: Vec<f64>,
    probability: &'a DiscreteProbability,
    seed: u64,
    samples: usize,
    degenerate: bool,
}

impl Simulation<'_> {
    fn run(&self, n: usize, with_error: bool) -> Result<Vec<SampleRecord>> {
        let basis = if with_error {
            Some(BasisMatrix::new(n, &self.xs)?)
        } else {
            None
        };
        Ok((0..self.samples)
            .into_par_iter()
            .map_init(
                || vec![0.0; n + 1],
                |values, s| {
                    let mut rng = SeededStream::for_sample(self.seed, n, s).rng();
                    let row = if self.degenerate {
                        TriangularArrayRow::equispaced(n).expect("degree >= 1")
                    } else {
                        order_statistics_from(n, &mut rng)
                    };
                    let atom = draw_atom(self.probability, &mut rng);
                    let error = match &basis {
                        None => f64::NAN,
                        Some(b) => {
                            for (v, y) in values.iter_mut().zip(row.nodes()) {
                                *v = self.f.eval_unchecked(&[*y], atom);
                            }
                            (0..b.len()).fold(0.0f64, |acc, i| {
                                let approx: f64 = b.row(i).iter().zip(values.iter()).map(|(p, v)| p * v).sum();
                                acc.max((approx - self.table.value(i, atom)).abs())
                            })
                        }
                    };
                    SampleRecord {
                        deviation: max_deviation(&row),
                        error,
                    }
                },
            )
            .collect())
    }
}

fn fraction(records: &[SampleRecord], pred: impl Fn(&SampleRecord) -> bool) -> f64 {
    records.iter().filter(|r| pred(r)).count() as f64 / records.len() as f64
}

/// Degree `ceil(1/delta^2) * multiplier`.
pub(crate) fn degree_for(delta: f64, multiplier: usize) -> usize {
    ((1.0 / (delta * delta) - 1e-9).ceil() as usize).max(1) * multiplier
}

/// Monte Carlo verification of the random-node estimates.
///
/// Each sample draws `n + 1` uniforms (their order statistics are the nodes)
/// and then an atom `w` from the probability underlying the distorted capacity
/// `mu = u(P)`; empirical capacities are `u` of sample frequencies. Rows:
/// - `implication`: number of samples with error `> (1 + c) K(f; delta)` and
///   `M_n <= delta`, for `n = ceil(1/delta^2) * m` (must be 0; the epsilon column holds `delta`);
/// - `error_chain`: number of samples whose error exceeds
///   `c K(f; 1/sqrt(n)) + K(f; M_n)`, the latter rounded up to the grid;
/// - `capacity_transfer`: empirical capacity of the error event against that of `{M_n > delta}`;
/// - `deviation_tail` / `deviation_tail_vacuous`: empirical `mu({M_n > epsilon})` against the closed-form
///   bound plus a three-sigma margin; vacuous when the bound is at least 1;
/// - `rate_tail` / `rate_tail_vacuous`: empirical capacity of error `> (1 + c) K(f; sqrt(tau(n)/n))`
///   against the rate bound plus margin;
/// - `exceedance_trend`: empirical `mu({M_n > epsilon})` is nonincreasing along the schedule.
pub fn run_stochastic_experiment(cfg: &ResolvedConfig) -> Result<Vec<ResultRow>> {
    let cap = cfg.build_capacity()?;
    let (u, probability): (&DistortionFunction, &DiscreteProbability) = match cap.repr() {
        CapacityRepr::Distorted {
            distortion,
            probability,
        } => (distortion, probability),
        _ => {
            return Err(Error::Hypothesis(
                "the stochastic experiment needs a distorted probability capacity".into(),
            ))
        }
    };
    let slope = u.finite_slope_at_zero()?;
    let f = cfg.build_family(&cap)?;
    let grid = Grid::new(1, cfg.grid)?;
    let table = f.tabulate(&grid)?;
    let k = KModulus::build(&f, &grid)?;
    let c = sikkema_constant();
    let sim = Simulation {
        f: &f,
        table: &table,
        xs: grid.coordinates(),
        probability,
        seed: cfg.seed,
        samples: cfg.samples,
        degenerate: cfg.degenerate_nodes,
    };

    let fixed_degree: Vec<(f64, usize)> = cfg
        .deltas
        .iter()
        .flat_map(|&d| cfg.n_multipliers.iter().map(move |&m| (d, degree_for(d, m))))
        .collect();
    let schedule: Vec<usize> = cfg.schedule.iter().map(|d| d[0]).collect();
    let mut wanted: BTreeMap<usize, bool> = BTreeMap::new();
    for &(_, n) in &fixed_degree {
        wanted.insert(n, true);
    }
    for &n in &schedule {
        *wanted.entry(n).or_insert(false) |= cfg.tau.is_some();
    }
    let mut records: BTreeMap<usize, Vec<SampleRecord>> = BTreeMap::new();
    for (&n, &with_error) in &wanted {
        records.insert(n, sim.run(n, with_error)?);
    }
    let empirical = |p_hat: f64| u.eval(p_hat);
    let margin = |p_hat: f64| monte_carlo_margin(u, p_hat, cfg.samples);

    let mut rows = Vec::new();
    for &(delta, n) in &fixed_degree {
        let recs = &records[&n];
        let threshold = (1.0 + c) * k.value(delta);
        let classical = c * k.value(1.0 / (n as f64).sqrt());
        let implication = recs
            .iter()
            .filter(|r| r.error > threshold && r.deviation <= delta)
            .count();
        let chain = recs
            .iter()
            .filter(|r| r.error > classical + k.value_rounded_up(r.deviation) + CHAIN_SLACK)
            .count();
        rows.push(ResultRow::new("stochastic:implication", &[n], implication as f64, 0.0).with_epsilon(delta));
        rows.push(ResultRow::new("stochastic:error_chain", &[n], chain as f64, 0.0).with_epsilon(delta));
        let error_cap = empirical(fraction(recs, |r| r.error > threshold));
        let deviation_cap = empirical(fraction(recs, |r| r.deviation > delta));
        rows.push(ResultRow::new("stochastic:capacity_transfer", &[n], error_cap, deviation_cap).with_epsilon(delta));
    }

    for &n in &schedule {
        let recs = &records[&n];
        for &eps in &cfg.epsilon {
            let p_hat = fraction(recs, |r| r.deviation > eps);
            for &r in &cfg.r {
                let bound = deviation_tail_bound(n, eps, r, slope)?;
                let name = if bound >= 1.0 {
                    "stochastic:deviation_tail_vacuous"
                } else {
                    "stochastic:deviation_tail"
                };
                rows.push(
                    ResultRow::new(name, &[n], empirical(p_hat), bound + margin(p_hat))
                        .with_epsilon(eps)
                        .with_r(r),
                );
            }
        }
        if let Some(tau) = &cfg.tau {
            let t = tau.value(n);
            let delta = (t / n as f64).sqrt();
            let threshold = (1.0 + c) * k.value(delta);
            let p_hat = fraction(recs, |rec| rec.error > threshold);
            for &r in &cfg.r {
                let bound = rate_tail_bound(n, t, r, slope)?;
                let name = if bound >= 1.0 {
                    "stochastic:rate_tail_vacuous"
                } else {
                    "stochastic:rate_tail"
                };
                rows.push(
                    ResultRow::new(name, &[n], empirical(p_hat), bound + margin(p_hat))
                        .with_epsilon(delta)
                        .with_r(r),
                );
            }
        }
    }

    for &eps in &cfg.epsilon {
        let series: Vec<f64> = schedule
            .iter()
            .map(|n| empirical(fraction(&records[n], |r| r.deviation > eps)))
            .collect();
        for i in 1..schedule.len() {
            rows.push(
                ResultRow::new("stochastic:exceedance_trend", &[schedule[i]], series[i], series[i - 1])
                    .with_epsilon(eps),
            );
        }
    }
    Ok(rows)
}
