//! Bernstein basis polynomials and operators, with the classical error
//! constants and moment estimates.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::randomfn::{Grid, RandomFunction};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 100_000;
/// Largest supported moment order.
pub const MAX_MOMENT_ORDER: u32 = 16;

/// Values `p_{k,n}(x)` for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinBasisEval {
    n: usize,
    x: f64,
    values: Vec<f64>,
}

impl BernsteinBasisEval {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `sum_k samples[k] p_{k,n}(x)`.
    pub fn dot(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: samples.len(),
            });
        }
        Ok(dot(&self.values, samples))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::input(format!("degree must lie in [1, {MAX_DEGREE}], got {n}")));
    }
    Ok(())
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(vec![x]));
    }
    Ok(())
}

/// Fills `out` (length `n + 1`) with the basis at `x`.
///
/// The weights are built by the ratio recurrence outward from the mode, which
/// stays within `[0, 1]` and underflows gracefully in the tails, then
/// normalized. Endpoints give exact unit vectors.
pub(crate) fn fill_basis(n: usize, x: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), n + 1);
    out.iter_mut().for_each(|v| *v = 0.0);
    if x <= 0.0 {
        out[0] = 1.0;
        return;
    }
    if x >= 1.0 {
        out[n] = 1.0;
        return;
    }
    let odds = x / (1.0 - x);
    let mode = (((n + 1) as f64 * x).floor() as usize).min(n);
    out[mode] = 1.0;
    for k in mode..n {
        let next = out[k] * ((n - k) as f64 / (k + 1) as f64) * odds;
        if next == 0.0 {
            break;
        }
        out[k + 1] = next;
    }
    for k in (1..=mode).rev() {
        let prev = out[k] * (k as f64 / (n - k + 1) as f64) / odds;
        if prev == 0.0 {
            break;
        }
        out[k - 1] = prev;
    }
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
}

/// Bernstein basis of degree `n` at `x`.
pub fn bernstein_basis(n: usize, x: f64) -> Result<BernsteinBasisEval> {
    check_degree(n)?;
    check_unit(x)?;
    let mut values = vec![0.0; n + 1];
    fill_basis(n, x, &mut values);
    Ok(BernsteinBasisEval { n, x, values })
}

/// `B_n(f)(x)` from the samples `f(k/n)`, `k = 0..=n`.
pub fn bernstein_univariate(samples: &[f64], x: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::input("need at least two samples (degree >= 1)"));
    }
    bernstein_basis(samples.len() - 1, x)?.dot(samples)
}

/// Samples `f(k/n)` for `k = 0..=n`.
pub fn node_samples(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..=n).map(|k| f(k as f64 / n as f64)).collect()
}

/// Basis values of a fixed degree at a list of points, row per point.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    n: usize,
    rows: Vec<f64>,
}

impl BasisMatrix {
    pub fn new(n: usize, xs: &[f64]) -> Result<Self> {
        check_degree(n)?;
        let mut rows = vec![0.0; xs.len() * (n + 1)];
        for (x, row) in xs.iter().zip(rows.chunks_mut(n + 1)) {
            check_unit(*x)?;
            fill_basis(n, *x, row);
        }
        Ok(BasisMatrix { n, rows })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len() / (self.n + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * (self.n + 1)..(i + 1) * (self.n + 1)]
    }

    /// `B_n` applied to `samples` at every point.
    pub fn apply(&self, samples: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|i| dot(self.row(i), samples)).collect()
    }
}

/// Per-axis degrees `(n_1, ..., n_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiDegree(Vec<usize>);

impl MultiDegree {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::input("a multi-degree needs at least one axis"));
        }
        for &n in &degrees {
            check_degree(n)?;
        }
        Ok(MultiDegree(degrees))
    }

    pub fn uniform(dim: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; dim])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn min(&self) -> usize {
        *self.0.iter().min().expect("nonempty")
    }

    /// Number of tensor nodes `prod (n_j + 1)`.
    pub fn node_count(&self) -> usize {
        self.0.iter().map(|n| n + 1).product()
    }

    /// Node coordinates `(k_1/n_1, ..., k_N/n_N)` of a flat node index; the last axis varies fastest.
    pub fn node(&self, mut flat: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.0.len()];
        for (slot, &n) in x.iter_mut().zip(&self.0).rev() {
            *slot = (flat % (n + 1)) as f64 / n as f64;
            flat /= n + 1;
        }
        x
    }
}

/// The tensor Bernstein image of a random function: node values
/// `F(k_1/n_1, ..., k_N/n_N, w)` for every atom, evaluated on demand.
#[derive(Clone, Debug)]
pub struct BernsteinImage {
    degrees: MultiDegree,
    atoms: usize,
    nodes: Vec<f64>,
}

impl BernsteinImage {
    pub fn new(f: &RandomFunction, degrees: &MultiDegree) -> Result<Self> {
        if degrees.dim() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: degrees.dim(),
            });
        }
        let atoms = f.atom_count();
        let mut nodes = Vec::with_capacity(degrees.node_count() * atoms);
        for flat in 0..degrees.node_count() {
            let x = degrees.node(flat);
            nodes.extend((0..atoms).map(|w| f.eval_unchecked(&x, w)));
        }
        Ok(BernsteinImage {
            degrees: degrees.clone(),
            atoms,
            nodes,
        })
    }

    pub fn degrees(&self) -> &MultiDegree {
        &self.degrees
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// Node values of all atoms at a flat node index.
    pub fn node_values(&self, flat: usize) -> &[f64] {
        &self.nodes[flat * self.atoms..(flat + 1) * self.atoms]
    }

    /// Values at `x` for every atom.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.degrees.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.degrees.dim(),
                got: x.len(),
            });
        }
        let mut bases = Vec::with_capacity(x.len());
        for (&xi, &n) in x.iter().zip(self.degrees.degrees()) {
            check_unit(xi)?;
            let mut b = vec![0.0; n + 1];
            fill_basis(n, xi, &mut b);
            bases.push(b);
        }
        let refs: Vec<&[f64]> = bases.iter().map(|b| b.as_slice()).collect();
        let mut out = vec![0.0; self.atoms];
        self.eval_with_bases(&refs, &mut out);
        Ok(out)
    }

    /// Contracts the node tensor against per-axis basis rows, last axis first.
    pub fn eval_with_bases(&self, bases: &[&[f64]], out: &mut [f64]) {
        let m = self.atoms;
        let dims = self.degrees.degrees();
        let mut current = self.nodes.clone();
        let mut groups = self.degrees.node_count();
        for axis in (0..dims.len()).rev() {
            let len = dims[axis] + 1;
            let b = bases[axis];
            groups /= len;
            let mut next = vec![0.0; groups * m];
            for g in 0..groups {
                let block = &current[g * len * m..(g + 1) * len * m];
                let dst = &mut next[g * m..(g + 1) * m];
                for (k, &w) in b.iter().enumerate() {
                    if w == 0.0 {
                        continue;
                    }
                    for (d, s) in dst.iter_mut().zip(&block[k * m..(k + 1) * m]) {
                        *d += w * s;
                    }
                }
            }
            current = next;
        }
        out.copy_from_slice(&current[..m]);
    }
}

/// Tensor Bernstein polynomial `B_{n_1,...,n_N}(F)(x, w)`.
pub fn bernstein_multivariate(f: &RandomFunction, degrees: &MultiDegree, x: &[f64], atom: usize) -> Result<f64> {
    if degrees.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: degrees.dim(),
        });
    }
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        });
    }
    f.space().check_atom(atom)?;
    let mut bases = Vec::with_capacity(x.len());
    for (&xi, &n) in x.iter().zip(degrees.degrees()) {
        bases.push(bernstein_basis(n, xi)?);
    }
    let mut total = 0.0;
    let mut node = vec![0.0; x.len()];
    for flat in 0..degrees.node_count() {
        let mut rest = flat;
        let mut weight = 1.0;
        for axis in (0..x.len()).rev() {
            let len = degrees.degrees()[axis] + 1;
            let k = rest % len;
            rest /= len;
            weight *= bases[axis].values()[k];
            node[axis] = k as f64 / degrees.degrees()[axis] as f64;
        }
        if weight != 0.0 {
            total += weight * f.eval_unchecked(&node, atom);
        }
    }
    Ok(total)
}

/// The operator `F -> B_{n_1,...,n_N}(F)` as a new random function.
pub fn bernstein_operator(f: &RandomFunction, degrees: &MultiDegree) -> Result<RandomFunction> {
    let image = BernsteinImage::new(f, degrees)?;
    let name = format!("bernstein{:?}({})", degrees.degrees(), f.name());
    let out = RandomFunction::new(name, f.space().clone(), f.dim(), move |x, w| {
        image.eval(x).map(|v| v[w]).unwrap_or(f64::NAN)
    })?;
    Ok(match f.bound() {
        Some(b) => out.with_bound(b),
        None => out,
    })
}

/// `sum_k p_{k,n}(x) (sqrt(n) |x - k/n|)^j`.
pub fn moment_sum(n: usize, x: f64, j: u32) -> Result<f64> {
    if j > MAX_MOMENT_ORDER {
        return Err(Error::input(format!("moment order must be at most {MAX_MOMENT_ORDER}")));
    }
    let basis = bernstein_basis(n, x)?;
    let scale = (n as f64).sqrt();
    Ok(basis
        .values()
        .iter()
        .enumerate()
        .map(|(k, p)| p * (scale * (x - k as f64 / n as f64).abs()).powi(j as i32))
        .sum())
}

/// Ceiling `2 Gamma(1 + j/2)` of the normalized moments.
pub fn moment_bound(j: u32) -> f64 {
    2.0 * gamma(1.0 + j as f64 / 2.0)
}

/// `sum_{|k/n - x| >= delta} p_{k,n}(x)`.
pub fn tail_sum(n: usize, x: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::input("tail width must be positive"));
    }
    let basis = bernstein_basis(n, x)?;
    Ok(basis
        .values()
        .iter()
        .enumerate()
        .filter(|(k, _)| (*k as f64 / n as f64 - x).abs() >= delta)
        .map(|(_, p)| p)
        .sum())
}

/// Chebyshev-type tail ceiling `1 / (4 n delta^2)`.
pub fn lorentz_bound(n: usize, delta: f64) -> f64 {
    1.0 / (4.0 * n as f64 * delta * delta)
}

/// Optimal constant `(4306 + 837 sqrt(6)) / 5832` of the uniform error bound
/// `|B_n f - f| <= c * omega(f; 1/sqrt(n))`.
pub fn sikkema_constant() -> f64 {
    (4306.0 + 837.0 * 6f64.sqrt()) / 5832.0
}

/// Grid modulus of continuity of tabulated values: the largest
/// `|v_i - v_j|` with `|i - j| <= window`.
pub fn grid_modulus(values: &[f64], window: usize) -> f64 {
    let mut best = 0.0f64;
    for d in 1..=window.min(values.len().saturating_sub(1)) {
        for i in 0..values.len() - d {
            best = best.max((values[i] - values[i + d]).abs());
        }
    }
    best
}

/// Sup-norm error of `B_n f` on `grid` together with `c * omega(f; 1/sqrt(n))`,
/// the modulus taken on the same grid.
pub fn sikkema_check(f: impl Fn(f64) -> f64, n: usize, grid: &Grid) -> Result<(f64, f64)> {
    if grid.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: grid.dim(),
        });
    }
    let xs = grid.coordinates();
    let samples = node_samples(n, &f);
    let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let approx = BasisMatrix::new(n, &xs)?.apply(&samples);
    let error = approx
        .iter()
        .zip(&values)
        .fold(0.0f64, |acc, (a, v)| acc.max((a - v).abs()));
    let omega = grid_modulus(&values, grid.window(1.0 / (n as f64).sqrt()));
    Ok((error, sikkema_constant() * omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::GroundSpace;
    use std::f64::consts::PI;

    #[test]
    fn basis_examples() {
        let b = bernstein_basis(2, 0.5).unwrap();
        assert_eq!(b.values(), &[0.25, 0.5, 0.25]);
        for n in [1, 7, 1000] {
            let b0 = bernstein_basis(n, 0.0).unwrap();
            assert_eq!(b0.values()[0], 1.0);
            assert!(b0.values()[1..].iter().all(|v| *v == 0.0));
            let b1 = bernstein_basis(n, 1.0).unwrap();
            assert_eq!(b1.values()[n], 1.0);
        }
        let b = bernstein_basis(1000, 0.3).unwrap();
        assert!((b.sum() - 1.0).abs() < 1e-12);
        assert!(bernstein_basis(3, 1.5).is_err());
        assert!(bernstein_basis(0, 0.5).is_err());
        assert!(bernstein_basis(MAX_DEGREE + 1, 0.5).is_err());
    }

    #[test]
    fn basis_matches_direct_binomials() {
        let n = 12;
        let x: f64 = 0.37;
        let b = bernstein_basis(n, x).unwrap();
        let mut binom = 1.0;
        for k in 0..=n {
            let direct = binom * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32);
            assert!((b.values()[k] - direct).abs() < 1e-15, "k = {k}");
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
    }

    #[test]
    fn large_degrees_stay_finite() {
        let b = bernstein_basis(MAX_DEGREE, 0.999_99).unwrap();
        assert!(b.values().iter().all(|v| v.is_finite() && *v >= 0.0));
        assert!((b.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn univariate_examples() {
        for n in [1, 5, 40] {
            let id = node_samples(n, |t| t);
            for x in [0.0, 0.2, 0.77, 1.0] {
                assert!((bernstein_univariate(&id, x).unwrap() - x).abs() < 1e-12);
            }
            let c = node_samples(n, |_| -2.5);
            assert!((bernstein_univariate(&c, 0.3).unwrap() + 2.5).abs() < 1e-12);
        }
        let sq = node_samples(10, |t| t * t);
        assert!((bernstein_univariate(&sq, 0.5).unwrap() - 0.275).abs() < 1e-12);
    }

    #[test]
    fn multivariate_examples() {
        let space = GroundSpace::with_atoms(2).unwrap();
        let sum = RandomFunction::new("sum", space.clone(), 2, |x, _| x[0] + x[1]).unwrap();
        let prod = RandomFunction::new("prod", space.clone(), 2, |x, _| x[0] * x[1]).unwrap();
        let c = RandomFunction::constant(space.clone(), 2, 1.75).unwrap();
        let d = MultiDegree::new(vec![10, 10]).unwrap();
        assert!((bernstein_multivariate(&c, &d, &[0.3, 0.8], 1).unwrap() - 1.75).abs() < 1e-12);
        assert!((bernstein_multivariate(&sum, &d, &[0.3, 0.8], 0).unwrap() - 1.1).abs() < 1e-12);
        assert!((bernstein_multivariate(&prod, &d, &[0.5, 0.5], 0).unwrap() - 0.25).abs() < 1e-12);
        let skew = MultiDegree::new(vec![3]).unwrap();
        assert!(bernstein_multivariate(&sum, &skew, &[0.5, 0.5], 0).is_err());
    }

    #[test]
    fn image_matches_the_direct_tensor_sum() {
        let space = GroundSpace::with_atoms(3).unwrap();
        let f = RandomFunction::new("wave", space, 2, |x, w| {
            (PI * x[0] * (w + 1) as f64).sin() + x[1].powi(3) * w as f64
        })
        .unwrap();
        let d = MultiDegree::new(vec![7, 4]).unwrap();
        let image = BernsteinImage::new(&f, &d).unwrap();
        for x in [[0.0, 0.0], [0.3, 0.9], [1.0, 0.45]] {
            let all = image.eval(&x).unwrap();
            for (w, v) in all.iter().enumerate() {
                let direct = bernstein_multivariate(&f, &d, &x, w).unwrap();
                assert!((v - direct).abs() < 1e-13);
            }
        }
        let op = bernstein_operator(&f, &d).unwrap();
        assert_eq!(op.eval(&[1.0, 0.0], 2).unwrap(), f.eval(&[1.0, 0.0], 2).unwrap());

        let one = RandomFunction::new("cubic", GroundSpace::with_atoms(2).unwrap(), 1, |x, w| {
            x[0].powi(3) - w as f64
        })
        .unwrap();
        let image = BernsteinImage::new(&one, &MultiDegree::new(vec![9]).unwrap()).unwrap();
        let v = image.eval(&[0.6]).unwrap();
        let samples = node_samples(9, |t| t.powi(3) - 1.0);
        assert!((v[1] - bernstein_univariate(&samples, 0.6).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn endpoint_interpolation_is_exact() {
        let samples = node_samples(17, |t| (3.0 * t).exp() - 0.1);
        assert_eq!(bernstein_univariate(&samples, 0.0).unwrap(), samples[0]);
        assert_eq!(bernstein_univariate(&samples, 1.0).unwrap(), samples[17]);
    }

    #[test]
    fn moment_examples() {
        assert!((moment_sum(9, 0.4, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((moment_sum(4, 0.5, 2).unwrap() - 0.25).abs() < 1e-15);
        assert!((moment_bound(0) - 2.0).abs() < 1e-14);
        assert!((moment_bound(1) - PI.sqrt()).abs() < 1e-12);
        assert!((moment_bound(2) - 2.0).abs() < 1e-14);
        assert!((moment_bound(3) - 1.5 * PI.sqrt()).abs() < 1e-12);
        assert!(moment_sum(4, 0.5, 17).is_err());
    }

    #[test]
    fn tail_examples() {
        let t = tail_sum(100, 0.5, 0.5).unwrap();
        let expected = 2.0 * 0.5f64.powi(100);
        assert!((t - expected).abs() < 1e-10 * expected);
        assert_eq!(lorentz_bound(100, 0.1), 0.25);
        assert_eq!(tail_sum(30, 0.2, 1.5).unwrap(), 0.0);
        assert!(tail_sum(30, 0.2, 0.0).is_err());
    }

    #[test]
    fn sikkema_value() {
        let c = sikkema_constant();
        assert!(c > 1.089 && c < 1.090);
        assert_eq!(c, (4306.0 + 837.0 * 6f64.sqrt()) / 5832.0);
    }

    #[test]
    fn grid_modulus_of_identity() {
        let grid = Grid::new(1, 257).unwrap();
        let values = grid.coordinates();
        let w = grid.window(0.25);
        assert!((grid_modulus(&values, w) - 0.25).abs() < 1e-15);
        let (err, bound) = sikkema_check(|t| (t - 0.5).abs(), 16, &grid).unwrap();
        assert!(err <= bound);
    }
}
