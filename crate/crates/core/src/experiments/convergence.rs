//! Deterministic convergence sweeps of the tensor Bernstein operator.

use rayon::prelude::*;

use super::bounded;
use super::config::ResolvedConfig;
use super::report::ResultRow;
use crate::bernstein::{sikkema_constant, BasisMatrix, BernsteinImage, MultiDegree};
use crate::capacity::{Capacity, Subset};
use crate::choquet::{abs_pow, integrate};
use crate::error::{Error, Result};
use crate::randomfn::{euclidean_modulus, ChoquetModulus, Grid, GridTable};

/// Constant of the two-dimensional uniform error estimate.
pub const TENSOR_ERROR_CONSTANT: f64 = 3.0;

fn inv_sqrt(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

fn require_submodular(cap: &Capacity) -> Result<()> {
    if !cap.is_submodular()? {
        return Err(Error::Hypothesis("the capacity must be submodular".into()));
    }
    Ok(())
}

fn is_diagonal(d: &MultiDegree) -> bool {
    d.degrees().windows(2).all(|w| w[0] == w[1])
}

/// Indices of diagonal schedule entries, in schedule order.
fn diagonal_indices(degrees: &[MultiDegree]) -> Vec<usize> {
    (0..degrees.len()).filter(|&i| is_diagonal(&degrees[i])).collect()
}

fn trend_rows(
    check: &str,
    degrees: &[MultiDegree],
    values: &[f64],
    decorate: impl Fn(ResultRow) -> ResultRow,
) -> Vec<ResultRow> {
    diagonal_indices(degrees)
        .windows(2)
        .map(|w| {
            decorate(ResultRow::new(
                check,
                degrees[w[1]].degrees(),
                values[w[1]],
                values[w[0]],
            ))
        })
        .collect()
}

/// Basis rows for every axis of `grid`, one matrix per axis degree.
struct GridBases {
    grid: Grid,
    per_axis: Vec<BasisMatrix>,
}

impl GridBases {
    fn new(grid: &Grid, degrees: &MultiDegree) -> Result<Self> {
        let coords = grid.coordinates();
        let per_axis = degrees
            .degrees()
            .iter()
            .map(|&n| BasisMatrix::new(n, &coords))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridBases { grid: *grid, per_axis })
    }

    fn rows(&self, flat: usize) -> Vec<&[f64]> {
        self.grid
            .multi_index(flat)
            .into_iter()
            .zip(&self.per_axis)
            .map(|(i, b)| b.row(i))
            .collect()
    }
}

/// Per-point quantities of the mean-convergence check at one degree.
struct MeanPoint {
    lhs: f64,
    node_sum: f64,
    cp_sum: f64,
}

/// `lhs / rhs`, infinite when only the right side vanishes.
fn node_ratio(pt: &MeanPoint) -> f64 {
    match (pt.lhs > 0.0, pt.node_sum > 0.0) {
        (false, _) => 0.0,
        (true, false) => f64::INFINITY,
        (true, true) => pt.lhs / pt.node_sum,
    }
}

fn mean_points(table: &GridTable, image: &BernsteinImage, bases: &GridBases, cap: &Capacity, p: f64) -> Vec<MeanPoint> {
    let grid = table.grid();
    let degrees = image.degrees().degrees().to_vec();
    let m = table.atoms();
    let full = cap.full();
    let node_count = image.degrees().node_count();
    (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let fx = table.at(flat);
            let rows = bases.rows(flat);
            let x = grid.point(flat);
            let mut approx = vec![0.0; m];
            image.eval_with_bases(&rows, &mut approx);
            let mut diffs = vec![0.0; m];
            for w in 0..m {
                diffs[w] = abs_pow(fx[w] - approx[w], p);
            }
            let lhs = integrate(&diffs, cap, full);

            let mut node_sum = 0.0;
            let mut cp_sum = 0.0;
            let mut ks = vec![0usize; degrees.len()];
            for node in 0..node_count {
                let mut rest = node;
                for a in (0..degrees.len()).rev() {
                    ks[a] = rest % (degrees[a] + 1);
                    rest /= degrees[a] + 1;
                }
                let weight: f64 = ks.iter().zip(&rows).map(|(&k, r)| r[k]).product();
                if weight == 0.0 {
                    continue;
                }
                let nv = image.node_values(node);
                for w in 0..m {
                    diffs[w] = abs_pow(fx[w] - nv[w], p);
                }
                node_sum += weight * integrate(&diffs, cap, full);
                let spread: f64 = ks
                    .iter()
                    .zip(&degrees)
                    .zip(&x)
                    .map(|((&k, &n), &xa)| (n as f64).sqrt() * (xa - k as f64 / n as f64).abs())
                    .sum();
                cp_sum += weight * (1.0 + spread).powf(p);
            }
            MeanPoint { lhs, node_sum, cp_sum }
        })
        .collect()
}

/// Quantitative Choquet-mean convergence of `B_{n_1,...,n_N}(F)` to `F`.
///
/// Per schedule entry and exponent `p` it emits
/// - `node_sum`: at the grid point with the largest ratio, `(C) ∫ |F - B(F)|^p` against the weighted
///   sum of node integrals `sum_k p_k (C) ∫ |F(x) - F(k/n)|^p`;
/// - `bound`: the grid-sup of `((C) ∫ |F - B(F)|^p)^(1/p)` against
///   `C_p^(1/p) * Gamma(F; 1/sqrt(n_1), ..., 1/sqrt(n_N))_p`, where `C_p` is the grid-sup of
///   `sum_k p_k (1 + sum_j sqrt(n_j) |x_j - k_j/n_j|)^p`;
/// - `trend`: the grid-sup error is nonincreasing along the diagonal entries.
pub fn run_mean_convergence(cfg: &ResolvedConfig) -> Result<Vec<ResultRow>> {
    let cap = cfg.build_capacity()?;
    require_submodular(&cap)?;
    let f = cfg.build_family(&cap)?;
    let degrees = cfg.degrees()?;
    let grid = Grid::new(cfg.dim, cfg.grid)?;
    let eval = Grid::new(cfg.dim, cfg.eval_grid)?;
    let table = f.tabulate(&eval)?;
    let max_deltas: Vec<f64> = (0..cfg.dim)
        .map(|a| degrees.iter().map(|d| inv_sqrt(d.degrees()[a])).fold(0.0, f64::max))
        .collect();
    let images = degrees
        .iter()
        .map(|d| Ok((BernsteinImage::new(&f, d)?, GridBases::new(&eval, d)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for &p in &cfg.p {
        let modulus = ChoquetModulus::build(&f, &cap, p, &grid, &max_deltas)?;
        let mut sup_errors = Vec::with_capacity(degrees.len());
        for (d, (image, bases)) in degrees.iter().zip(&images) {
            let deltas: Vec<f64> = d.degrees().iter().map(|&n| inv_sqrt(n)).collect();
            let gamma = modulus.value(&deltas)?;
            let points = mean_points(&table, image, bases, &cap, p);
            let worst = points
                .iter()
                .max_by(|a, b| node_ratio(a).total_cmp(&node_ratio(b)))
                .expect("nonempty grid");
            rows.push(ResultRow::new("mean_convergence:node_sum", d.degrees(), worst.lhs, worst.node_sum).with_p(p));
            let sup_lhs = points.iter().map(|pt| pt.lhs).fold(0.0, f64::max).powf(1.0 / p);
            let cp = points.iter().map(|pt| pt.cp_sum).fold(0.0, f64::max);
            rows.push(
                ResultRow::new("mean_convergence:bound", d.degrees(), sup_lhs, cp.powf(1.0 / p) * gamma).with_p(p),
            );
            sup_errors.push(sup_lhs);
        }
        rows.extend(trend_rows("mean_convergence:trend", &degrees, &sup_errors, |r| {
            r.with_p(p)
        }));
    }
    Ok(rows)
}

/// Uniform convergence in capacity of `B_n(F)` to `F`.
///
/// Per schedule entry it measures `d = d(F, B_n(F))` and, for every `epsilon`, the
/// grid-sup of `mu({|B_n(F) - F| >= epsilon})`, emitting
/// - `markov`: that capacity against `(1 + epsilon)/epsilon * d`;
/// - `eta`: that capacity against `eta`, from the first entry with
///   `d < epsilon * eta / (1 + epsilon)` onward;
/// - `final`: the capacity at the last entry against `eta`;
/// - `trend`: `d` is nonincreasing along the diagonal entries.
pub fn run_capacity_convergence(cfg: &ResolvedConfig) -> Result<Vec<ResultRow>> {
    let cap = cfg.build_capacity()?;
    require_submodular(&cap)?;
    let f = cfg.build_family(&cap)?;
    if f.bound().is_none() {
        return Err(Error::Hypothesis("the random function must be bounded".into()));
    }
    let degrees = cfg.degrees()?;
    let grid = Grid::new(cfg.dim, cfg.grid)?;
    let table = f.tabulate(&grid)?;
    let m = cap.atom_count();
    let full = cap.full();

    let mut ds = Vec::with_capacity(degrees.len());
    let mut caps: Vec<Vec<f64>> = Vec::with_capacity(degrees.len());
    for d in &degrees {
        let image = BernsteinImage::new(&f, d)?;
        let bases = GridBases::new(&grid, d)?;
        let per_point: Vec<(f64, Vec<f64>)> = (0..grid.len())
            .into_par_iter()
            .map(|flat| {
                let mut approx = vec![0.0; m];
                image.eval_with_bases(&bases.rows(flat), &mut approx);
                let fx = table.at(flat);
                let gaps: Vec<f64> = (0..m).map(|w| (approx[w] - fx[w]).abs()).collect();
                let transformed: Vec<f64> = gaps.iter().map(|&g| bounded(g)).collect();
                let dist = integrate(&transformed, &cap, full);
                let levels = cfg
                    .epsilon
                    .iter()
                    .map(|&eps| cap.value(Subset::from_indices((0..m).filter(|&w| gaps[w] >= eps))))
                    .collect();
                (dist, levels)
            })
            .collect();
        ds.push(per_point.iter().map(|(dist, _)| *dist).fold(0.0, f64::max));
        caps.push(
            (0..cfg.epsilon.len())
                .map(|e| per_point.iter().map(|(_, l)| l[e]).fold(0.0, f64::max))
                .collect(),
        );
    }

    let mut rows = Vec::new();
    for (i, d) in degrees.iter().enumerate() {
        for (e, &eps) in cfg.epsilon.iter().enumerate() {
            rows.push(
                ResultRow::new(
                    "capacity_convergence:markov",
                    d.degrees(),
                    caps[i][e],
                    (1.0 + eps) / eps * ds[i],
                )
                .with_epsilon(eps),
            );
        }
    }
    for (e, &eps) in cfg.epsilon.iter().enumerate() {
        for &eta in &cfg.eta {
            let threshold = eps * eta / (1.0 + eps);
            if let Some(start) = ds.iter().position(|&d| d < threshold) {
                for i in start..degrees.len() {
                    rows.push(
                        ResultRow::new("capacity_convergence:eta", degrees[i].degrees(), caps[i][e], eta)
                            .with_epsilon(eps)
                            .with_eta(eta),
                    );
                }
            }
            let last = degrees.len() - 1;
            rows.push(
                ResultRow::new(
                    "capacity_convergence:final",
                    degrees[last].degrees(),
                    caps[last][e],
                    eta,
                )
                .with_epsilon(eps)
                .with_eta(eta),
            );
        }
    }
    rows.extend(trend_rows("capacity_convergence:trend", &degrees, &ds, |r| r));
    Ok(rows)
}

/// Convergence under a possibility capacity, sample function by sample function.
///
/// Per schedule entry it emits
/// - `uniform_error`: for the worst atom, `sup_x |B(F) - F|` against `C * O(F; 1/sqrt(n_min), w)`,
///   with `C` the Sikkema constant in one dimension and 3 in two;
/// - `exceedance`: `mu({O(F; 1/sqrt(n_min), .) > epsilon})` (bounded by 1);
/// - `trend`: that capacity is nonincreasing along the diagonal entries.
pub fn run_possibility_convergence(cfg: &ResolvedConfig) -> Result<Vec<ResultRow>> {
    let cap = cfg.build_capacity()?;
    if !cap.is_possibility() {
        return Err(Error::Hypothesis("a possibility capacity is required".into()));
    }
    let f = cfg.build_family(&cap)?;
    let degrees = cfg.degrees()?;
    let grid = Grid::new(cfg.dim, cfg.grid)?;
    let table = f.tabulate(&grid)?;
    let m = cap.atom_count();
    let constant = if cfg.dim == 1 {
        sikkema_constant()
    } else {
        TENSOR_ERROR_CONSTANT
    };

    let mut rows = Vec::new();
    let mut exceed: Vec<Vec<f64>> = Vec::with_capacity(degrees.len());
    for d in &degrees {
        let image = BernsteinImage::new(&f, d)?;
        let bases = GridBases::new(&grid, d)?;
        let errors = (0..grid.len())
            .into_par_iter()
            .map(|flat| {
                let mut approx = vec![0.0; m];
                image.eval_with_bases(&bases.rows(flat), &mut approx);
                let fx = table.at(flat);
                (0..m).map(|w| (approx[w] - fx[w]).abs()).collect::<Vec<_>>()
            })
            .reduce(
                || vec![0.0; m],
                |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
            );
        let delta = inv_sqrt(d.min());
        let moduli: Vec<f64> = (0..m).map(|w| euclidean_modulus(&table, delta, w)).collect();
        let worst = (0..m)
            .max_by(|&a, &b| (errors[a] - constant * moduli[a]).total_cmp(&(errors[b] - constant * moduli[b])))
            .expect("nonempty space");
        rows.push(ResultRow::new(
            "possibility_convergence:uniform_error",
            d.degrees(),
            errors[worst],
            constant * moduli[worst],
        ));
        let levels: Vec<f64> = cfg
            .epsilon
            .iter()
            .map(|&eps| cap.value(Subset::from_indices((0..m).filter(|&w| moduli[w] > eps))))
            .collect();
        for (&eps, &level) in cfg.epsilon.iter().zip(&levels) {
            rows.push(ResultRow::new("possibility_convergence:exceedance", d.degrees(), level, 1.0).with_epsilon(eps));
        }
        exceed.push(levels);
    }
    for (e, &eps) in cfg.epsilon.iter().enumerate() {
        let series: Vec<f64> = exceed.iter().map(|l| l[e]).collect();
        rows.extend(trend_rows("possibility_convergence:trend", &degrees, &series, |r| {
            r.with_epsilon(eps)
        }));
    }
    Ok(rows)
}
