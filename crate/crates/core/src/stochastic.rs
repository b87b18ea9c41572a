//! Bernstein polynomials with random order-statistic nodes, the uniform
//! modulus `K`, and closed-form exceedance bounds for the node deviation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bernstein::bernstein_basis;
use crate::capacity::{DiscreteProbability, DistortionFunction};
use crate::error::{Error, Result};
use crate::randomfn::{Grid, RandomFunction};

/// Default number of points of the `delta` grid used for the inverse of `K`.
pub const DEFAULT_DELTA_GRID: usize = 1025;

/// A reproducible random stream: `(master_seed, stream_index)` fixes every draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeededStream {
            master_seed,
            stream_index,
        }
    }

    /// Stream for sample `sample` of degree `n`.
    pub fn for_sample(master_seed: u64, n: usize, sample: usize) -> Self {
        Self::new(master_seed, ((n as u64) << 32) | sample as u64)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Sorted random nodes `Y_0 <= ... <= Y_n` in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularArrayRow {
    nodes: Vec<f64>,
}

impl TriangularArrayRow {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::input("a row needs at least two nodes (degree >= 1)"));
        }
        if nodes.iter().any(|y| !(0.0..=1.0).contains(y)) {
            return Err(Error::input("row nodes must lie in [0, 1]"));
        }
        if nodes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::input("row nodes must be nondecreasing"));
        }
        Ok(TriangularArrayRow { nodes })
    }

    /// The deterministic row `Y_k = k/n`.
    pub fn equispaced(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("degree must be at least 1"));
        }
        Ok(TriangularArrayRow {
            nodes: (0..=n).map(|k| k as f64 / n as f64).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Order statistics of `n + 1` independent uniforms drawn from `stream`.
pub fn sample_order_statistics(n: usize, stream: &SeededStream) -> Result<TriangularArrayRow> {
    if n == 0 {
        return Err(Error::input("degree must be at least 1"));
    }
    Ok(order_statistics_from(n, &mut stream.rng()))
}

pub(crate) fn order_statistics_from(n: usize, rng: &mut impl Rng) -> TriangularArrayRow {
    let mut nodes: Vec<f64> = (0..=n).map(|_| rng.random::<f64>()).collect();
    nodes.sort_by(f64::total_cmp);
    TriangularArrayRow { nodes }
}

/// Draws an atom index with the given probabilities.
pub(crate) fn draw_atom(probability: &DiscreteProbability, rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let weights = probability.weights();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

/// `M_n = max_k |Y_k - k/n|`.
pub fn max_deviation(row: &TriangularArrayRow) -> f64 {
    let n = row.degree() as f64;
    row.nodes
        .iter()
        .enumerate()
        .fold(0.0f64, |acc, (k, y)| acc.max((y - k as f64 / n).abs()))
}

/// `B_n(f, Y)(x, w) = sum_k f(Y_k, w) p_{k,n}(x)`.
pub fn stochastic_bernstein(f: &RandomFunction, row: &TriangularArrayRow, x: f64, atom: usize) -> Result<f64> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.dim(),
        });
    }
    f.space().check_atom(atom)?;
    let basis = bernstein_basis(row.degree(), x)?;
    Ok(basis
        .values()
        .iter()
        .zip(row.nodes())
        .map(|(p, y)| p * f.eval_unchecked(&[*y], atom))
        .sum())
}

/// The uniform modulus `K(f; delta) = max_w omega(f(., w); delta)` of a
/// one-dimensional random function, tabulated per grid window.
#[derive(Clone, Debug)]
pub struct KModulus {
    grid: Grid,
    by_window: Vec<f64>,
}

impl KModulus {
    pub fn build(f: &RandomFunction, grid: &Grid) -> Result<Self> {
        if f.dim() != 1 || grid.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: f.dim().max(grid.dim()),
            });
        }
        let table = f.tabulate(grid)?;
        let g = grid.points_per_axis();
        let m = f.atom_count();
        let mut by_window = vec![0.0f64; g];
        for d in 1..g {
            let mut best = by_window[d - 1];
            for i in 0..g - d {
                let (a, b) = (table.at(i), table.at(i + d));
                for w in 0..m {
                    best = best.max((a[w] - b[w]).abs());
                }
            }
            by_window[d] = best;
        }
        Ok(KModulus { grid: *grid, by_window })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `K(f; delta)` over grid pairs at distance at most `delta`.
    pub fn value(&self, delta: f64) -> f64 {
        self.by_window[self.grid.window(delta)]
    }

    /// `K` at `delta` rounded up to the next grid spacing.
    pub fn value_rounded_up(&self, delta: f64) -> f64 {
        let h = self.grid.spacing();
        let w = ((delta - 1e-12) / h).ceil().max(0.0) as usize;
        self.by_window[w.min(self.by_window.len() - 1)]
    }

    /// Largest `delta` in `delta_grid` with `K(f; delta) <= epsilon`, or 0.
    pub fn inverse(&self, epsilon: f64, delta_grid: &[f64]) -> f64 {
        delta_grid
            .iter()
            .copied()
            .filter(|&d| self.value(d) <= epsilon)
            .fold(0.0, f64::max)
    }
}

/// `K(f; delta)` on `grid`.
pub fn k_modulus(f: &RandomFunction, delta: f64, grid: &Grid) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::input("modulus delta must be nonnegative"));
    }
    Ok(KModulus::build(f, grid)?.value(delta))
}

/// Right-continuous inverse of `K` restricted to `delta_grid`.
pub fn k_inverse(f: &RandomFunction, epsilon: f64, grid: &Grid, delta_grid: &[f64]) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return Err(Error::input("epsilon must be nonnegative"));
    }
    if delta_grid.windows(2).any(|w| w[0] > w[1]) || delta_grid.iter().any(|d| !(0.0..=1.0).contains(d)) {
        return Err(Error::input("delta grid must be sorted within [0, 1]"));
    }
    Ok(KModulus::build(f, grid)?.inverse(epsilon, delta_grid))
}

/// `points` equispaced values `0, ..., 1`.
pub fn delta_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

fn check_bound_inputs(r: f64, u_prime_0: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Hypothesis(format!("r must lie in (0, 1), got {r}")));
    }
    if !(u_prime_0 > 0.0 && u_prime_0.is_finite()) {
        return Err(Error::Hypothesis(format!(
            "the distortion slope at 0 must be finite and positive, got {u_prime_0}"
        )));
    }
    Ok(())
}

/// `u'(0) (n + 1) / sqrt(1 - r) * exp(-(3r/2) n epsilon^2)`.
pub fn deviation_tail_bound(n: usize, epsilon: f64, r: f64, u_prime_0: f64) -> Result<f64> {
    check_bound_inputs(r, u_prime_0)?;
    if !(epsilon >= 0.0) {
        return Err(Error::input("epsilon must be nonnegative"));
    }
    Ok(exceedance_bound(n, n as f64 * epsilon * epsilon, r, u_prime_0))
}

/// `u'(0) (n + 1) / sqrt(1 - r) * exp(-(3r/2) tau)`, for `tau >= 1`.
pub fn rate_tail_bound(n: usize, tau: f64, r: f64, u_prime_0: f64) -> Result<f64> {
    check_bound_inputs(r, u_prime_0)?;
    if !(tau >= 1.0) {
        return Err(Error::Hypothesis(format!("τ(n) ≥ 1 is required, got τ = {tau}")));
    }
    Ok(exceedance_bound(n, tau, r, u_prime_0))
}

fn exceedance_bound(n: usize, rate: f64, r: f64, u_prime_0: f64) -> f64 {
    u_prime_0 * (n + 1) as f64 / (1.0 - r).sqrt() * (-1.5 * r * rate).exp()
}

/// Named rate sequences `tau(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TauSchedule {
    /// `a ln(n + 1)`
    Log { a: f64 },
    /// `a sqrt(n)`
    Sqrt { a: f64 },
    /// `c`
    Const { c: f64 },
}

impl TauSchedule {
    pub fn value(&self, n: usize) -> f64 {
        match *self {
            TauSchedule::Log { a } => a * ((n + 1) as f64).ln(),
            TauSchedule::Sqrt { a } => a * (n as f64).sqrt(),
            TauSchedule::Const { c } => c,
        }
    }

    /// Checks `tau(n) >= 1` for every `n >= 1`; each entry is nondecreasing, so
    /// checking `n = 1` suffices.
    pub fn validate(&self) -> Result<()> {
        let (param, finite) = match *self {
            TauSchedule::Log { a } | TauSchedule::Sqrt { a } => (a, a.is_finite()),
            TauSchedule::Const { c } => (c, c.is_finite()),
        };
        if !finite || !(self.value(1) >= 1.0) {
            return Err(Error::config(
                "tau",
                format!(
                    "τ(n) ≥ 1 is required for every n ≥ 1; parameter {param} gives τ(1) = {}",
                    self.value(1)
                ),
            ));
        }
        Ok(())
    }

    pub fn diverges(&self) -> bool {
        !matches!(self, TauSchedule::Const { .. })
    }
}

/// Capacity-scale Monte Carlo margin: `u(min(1, p + 3 sigma)) - u(p)` with
/// `sigma = sqrt(p (1 - p) / samples)`.
pub fn monte_carlo_margin(u: &DistortionFunction, p_hat: f64, samples: usize) -> f64 {
    let sigma = (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
    u.eval((p_hat + 3.0 * sigma).min(1.0)) - u.eval(p_hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{DistortionKind, GroundSpace};
    use crate::randomfn::FamilySpec;

    fn identity() -> RandomFunction {
        RandomFunction::new("identity", GroundSpace::with_atoms(1).unwrap(), 1, |x, _| x[0]).unwrap()
    }

    #[test]
    fn streams_are_reproducible() {
        let s = SeededStream::new(42, 7);
        let a = sample_order_statistics(20, &s).unwrap();
        let b = sample_order_statistics(20, &s).unwrap();
        assert_eq!(a, b);
        let c = sample_order_statistics(20, &SeededStream::new(42, 8)).unwrap();
        assert_ne!(a, c);
        assert_eq!(SeededStream::for_sample(1, 3, 5).stream_index, (3 << 32) | 5);
    }

    #[test]
    fn rows_are_sorted() {
        for i in 0..200 {
            let row = sample_order_statistics(15, &SeededStream::new(9, i)).unwrap();
            assert!(row.nodes().windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(row.degree(), 15);
            let m = max_deviation(&row);
            assert!((0.0..=1.0).contains(&m));
        }
    }

    #[test]
    fn deviation_examples() {
        assert_eq!(max_deviation(&TriangularArrayRow::equispaced(9).unwrap()), 0.0);
        let row = TriangularArrayRow::new(vec![0.1, 0.4, 0.9]).unwrap();
        assert!((max_deviation(&row) - 0.1).abs() < 1e-15);
        assert!(TriangularArrayRow::new(vec![0.5, 0.2]).is_err());
        assert!(TriangularArrayRow::new(vec![0.5]).is_err());
    }

    #[test]
    fn stochastic_bernstein_examples() {
        let f = identity();
        let row = TriangularArrayRow::new(vec![0.1, 0.4, 0.9]).unwrap();
        let v = stochastic_bernstein(&f, &row, 0.5, 0).unwrap();
        assert!((v - (0.25 * 0.1 + 0.5 * 0.4 + 0.25 * 0.9)).abs() < 1e-15);

        let space = GroundSpace::with_atoms(3).unwrap();
        let g = FamilySpec::AffineNoise { z: None }.build(&space, 1).unwrap();
        let eq = TriangularArrayRow::equispaced(12).unwrap();
        let samples: Vec<f64> = (0..=12).map(|k| g.eval(&[k as f64 / 12.0], 2).unwrap()).collect();
        let classical = crate::bernstein::bernstein_univariate(&samples, 0.3).unwrap();
        assert_eq!(stochastic_bernstein(&g, &eq, 0.3, 2).unwrap(), classical);

        let c = RandomFunction::constant(space, 1, 0.7).unwrap();
        assert!((stochastic_bernstein(&c, &row, 0.8, 1).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn k_modulus_examples() {
        let grid = Grid::new(1, 257).unwrap();
        let f = identity();
        // 0.2 is not a multiple of 1/256; the closest pair inside the window is 51/256 apart.
        assert_eq!(k_modulus(&f, 0.2, &grid).unwrap(), 51.0 / 256.0);
        assert_eq!(k_modulus(&f, 0.25, &grid).unwrap(), 0.25);
        let c = RandomFunction::constant(GroundSpace::with_atoms(2).unwrap(), 1, 3.0).unwrap();
        assert_eq!(k_modulus(&c, 0.5, &grid).unwrap(), 0.0);
        let table = KModulus::build(&f, &grid).unwrap();
        let ks: Vec<f64> = delta_grid(101).iter().map(|d| table.value(*d)).collect();
        assert!(ks.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(table.value_rounded_up(0.2), 52.0 / 256.0);
        assert_eq!(table.value_rounded_up(0.25), 0.25);
    }

    #[test]
    fn k_inverse_examples() {
        let grid = Grid::new(1, 257).unwrap();
        let f = identity();
        let deltas = delta_grid(DEFAULT_DELTA_GRID);
        let v = k_inverse(&f, 0.3, &grid, &deltas).unwrap();
        assert_eq!(v, 307.0 / 1024.0);
        assert!(v <= 0.3 && 0.3 - v < 1.0 / 256.0);
        assert_eq!(k_inverse(&f, 1.0, &grid, &deltas).unwrap(), 1.0);
        let table = KModulus::build(&f, &grid).unwrap();
        for &d in deltas.iter().step_by(17) {
            assert!(d <= table.inverse(table.value(d), &deltas));
        }
    }

    #[test]
    fn bound_examples() {
        let v = deviation_tail_bound(200, 0.3, 0.9, 2.0).unwrap();
        let expected = 2.0 * 201.0 / 0.1f64.sqrt() * (-24.3f64).exp();
        assert!((v - expected).abs() < 1e-22);
        assert!((v - 3.55e-8).abs() < 0.01e-8);
        let flat = deviation_tail_bound(50, 0.0, 0.5, 2.0).unwrap();
        assert!((flat - 2.0 * 51.0 / 0.5f64.sqrt()).abs() < 1e-12);
        assert!(deviation_tail_bound(10, 0.3, 1.0, 2.0).is_err());
        assert!(deviation_tail_bound(10, 0.3, 0.5, f64::INFINITY).is_err());

        assert_eq!(rate_tail_bound(200, 200.0 * 0.09, 0.9, 2.0).unwrap(), v);
        let tau = 4.0 * 101f64.ln();
        let t6 = rate_tail_bound(100, tau, 0.9, 2.0).unwrap();
        let expected = 2.0 * 101.0 / 0.1f64.sqrt() * (-1.35 * tau).exp();
        assert!((t6 - expected).abs() < 1e-15 * expected.max(1.0));
        assert!((rate_tail_bound(7, 1.0, 0.5, 1.0).unwrap() - 8.0 / 0.5f64.sqrt() * (-0.75f64).exp()).abs() < 1e-12);
        assert!(rate_tail_bound(7, 0.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn tail_bound_eventually_decreases() {
        let b: Vec<f64> = (10..=10_000)
            .map(|n| deviation_tail_bound(n, 0.3, 0.9, 2.0).unwrap())
            .collect();
        let turn = b.windows(2).position(|w| w[1] < w[0]).unwrap();
        let bad = b[turn..].windows(2).position(|w| !(w[1] < w[0] || w[0] < 1e-290));
        assert!(
            bad.is_none(),
            "{:?}",
            bad.map(|i| (i + turn + 10, b[i + turn], b[i + turn + 1]))
        );
    }

    #[test]
    fn tau_catalog_validation() {
        assert!(TauSchedule::Log { a: 4.0 }.validate().is_ok());
        assert!(TauSchedule::Log { a: 1.0 }.validate().is_err());
        assert!(TauSchedule::Sqrt { a: 0.5 }.validate().is_err());
        assert!(TauSchedule::Const { c: 1.0 }.validate().is_ok());
        let err = TauSchedule::Const { c: 0.5 }.validate().unwrap_err().to_string();
        assert!(err.contains("τ(n) ≥ 1"));
        let parsed: TauSchedule = serde_json::from_str(r#"{"kind":"sqrt","a":2}"#).unwrap();
        assert_eq!(parsed.value(16), 8.0);
    }

    #[test]
    fn margin_is_zero_without_exceedances() {
        let u = DistortionFunction::new(DistortionKind::Rational2t).unwrap();
        assert_eq!(monte_carlo_margin(&u, 0.0, 1000), 0.0);
        assert!(monte_carlo_margin(&u, 0.1, 1000) > 0.0);
    }

    #[test]
    fn atom_draws_follow_the_weights() {
        let p = DiscreteProbability::new(vec![0.0, 0.25, 0.75]).unwrap();
        let mut rng = SeededStream::new(3, 0).rng();
        let mut counts = [0usize; 3];
        for _ in 0..20_000 {
            counts[draw_atom(&p, &mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        assert!((counts[1] as f64 / 20_000.0 - 0.25).abs() < 0.02);
    }
}
