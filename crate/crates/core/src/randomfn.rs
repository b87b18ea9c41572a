//! Random functions on `[0, 1]^N` and their moduli of continuity.
//!
//! A [`RandomFunction`] maps `(x, atom)` to a real number. Suprema over the cube
//! are taken over an equispaced [`Grid`]; pair constraints are applied to grid
//! index offsets, with a `1e-12` slack on the coordinate distance.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, GroundSpace};
use crate::choquet::{abs_pow, integrate, validate_exponent};
use crate::error::{Error, Result};

/// Slack added to distance constraints when selecting grid pairs.
pub const PAIR_SLACK: f64 = 1e-12;
/// Largest dimension accepted by the pair-enumerating moduli.
pub const MAX_MODULUS_DIM: usize = 2;
/// Default points per axis for one-dimensional suprema.
pub const DEFAULT_GRID_1D: usize = 257;
/// Default points per axis for two-dimensional suprema.
pub const DEFAULT_GRID_2D: usize = 65;

/// Equispaced grid `0, 1/(g-1), ..., 1` on each of `dim` axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("grid dimension must be at least 1"));
        }
        if points_per_axis < 2 {
            return Err(Error::input("a grid needs at least two points per axis"));
        }
        if points_per_axis.checked_pow(dim as u32).is_none() {
            return Err(Error::input("grid is too large"));
        }
        Ok(Grid { dim, points_per_axis })
    }

    /// Default resolution for the given dimension.
    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(dim, if dim == 1 { DEFAULT_GRID_1D } else { DEFAULT_GRID_2D })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.points_per_axis - 1) as f64
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 / (self.points_per_axis - 1) as f64
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|i| self.coordinate(i)).collect()
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis indices of a flat point index; the last axis varies fastest.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.points_per_axis;
            flat /= self.points_per_axis;
        }
        idx
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat).into_iter().map(|i| self.coordinate(i)).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Largest index offset `w` with `w * spacing <= delta + 1e-12`, capped at `g - 1`.
    pub fn window(&self, delta: f64) -> usize {
        if delta <= 0.0 {
            return 0;
        }
        let w = ((delta + PAIR_SLACK) / self.spacing()).floor();
        (w as usize).min(self.points_per_axis - 1)
    }
}

type Evaluator = dyn Fn(&[f64], usize) -> f64 + Send + Sync;

/// A stochastic process `F : [0, 1]^N x atoms -> R`.
#[derive(Clone)]
pub struct RandomFunction {
    name: String,
    space: GroundSpace,
    dim: usize,
    bound: Option<f64>,
    evaluator: Arc<Evaluator>,
}

impl fmt::Debug for RandomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RandomFunction")
            .field("name", &self.name)
            .field("atoms", &self.space.atom_count())
            .field("dim", &self.dim)
            .field("bound", &self.bound)
            .finish()
    }
}

impl RandomFunction {
    /// Wraps an evaluator. It must be a pure, finite-valued function of `(x, atom)`.
    pub fn new<F>(name: impl Into<String>, space: GroundSpace, dim: usize, evaluator: F) -> Result<Self>
    where
        F: Fn(&[f64], usize) -> f64 + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::input("random function dimension must be at least 1"));
        }
        Ok(RandomFunction {
            name: name.into(),
            space,
            dim,
            bound: None,
            evaluator: Arc::new(evaluator),
        })
    }

    /// Records `M = sup |F(x, w)|`.
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn constant(space: GroundSpace, dim: usize, value: f64) -> Result<Self> {
        Ok(Self::new("constant", space, dim, move |_, _| value)?.with_bound(value.abs()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &GroundSpace {
        &self.space
    }

    pub fn atom_count(&self) -> usize {
        self.space.atom_count()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    pub fn eval(&self, x: &[f64], atom: usize) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if x.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::OutOfDomain(x.to_vec()));
        }
        self.space.check_atom(atom)?;
        Ok((self.evaluator)(x, atom))
    }

    /// Evaluation without domain checks.
    pub fn eval_unchecked(&self, x: &[f64], atom: usize) -> f64 {
        (self.evaluator)(x, atom)
    }

    pub fn sample(&self, atom: usize) -> Result<SampleFunction<'_>> {
        self.space.check_atom(atom)?;
        Ok(SampleFunction { parent: self, atom })
    }

    /// Values on `grid`, laid out as `[point][atom]`.
    pub fn tabulate(&self, grid: &Grid) -> Result<GridTable> {
        self.check_grid(grid)?;
        let m = self.atom_count();
        let values = (0..grid.len())
            .into_par_iter()
            .flat_map_iter(|flat| {
                let x = grid.point(flat);
                (0..m).map(move |atom| (self.evaluator)(&x, atom)).collect::<Vec<_>>()
            })
            .collect();
        Ok(GridTable {
            grid: *grid,
            atoms: m,
            values,
        })
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if grid.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: grid.dim(),
            });
        }
        Ok(())
    }
}

/// `x -> F(x, w)` for a fixed atom `w`.
#[derive(Clone, Copy, Debug)]
pub struct SampleFunction<'a> {
    parent: &'a RandomFunction,
    atom: usize,
}

impl SampleFunction<'_> {
    pub fn atom(&self) -> usize {
        self.atom
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.parent.eval(x, self.atom)
    }
}

/// A random function tabulated on a grid.
#[derive(Clone, Debug)]
pub struct GridTable {
    grid: Grid,
    atoms: usize,
    values: Vec<f64>,
}

impl GridTable {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// All atom values at a flat grid index.
    pub fn at(&self, flat: usize) -> &[f64] {
        &self.values[flat * self.atoms..(flat + 1) * self.atoms]
    }

    pub fn value(&self, flat: usize, atom: usize) -> f64 {
        self.values[flat * self.atoms + atom]
    }
}

/// Built-in random-function families, selectable by name in configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
pub enum FamilySpec {
    /// `F(x, w) = sum_j |x_j - 1/2|`, the same for every atom.
    #[serde(rename = "deterministic:absdev")]
    AbsDev,
    /// `F(x, w) = g(x) + h(x) z_w` with `g(x) = sum_j x_j^2` and
    /// `h(x) = 1 + (1/2) sum_j sin(pi x_j)`.
    #[serde(rename = "affine_noise")]
    AffineNoise {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<Vec<f64>>,
    },
    /// `F(x, w) = sum_j |x_j - 1/2| + z_w * [x_1 >= s_w]`.
    #[serde(rename = "step_noise")]
    StepNoise {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        jumps: Option<Vec<f64>>,
    },
    /// `F(x, w) = value`.
    #[serde(rename = "constant")]
    Constant { value: f64 },
}

/// Names and formulas of the built-in families.
pub const FAMILY_CATALOG: &[(&str, &str)] = &[
    ("deterministic:absdev", "F(x,w) = sum_j |x_j - 1/2|"),
    (
        "affine_noise",
        "F(x,w) = sum_j x_j^2 + (1 + 0.5 sum_j sin(pi x_j)) * z_w; z defaults to an even spread on [-1,1]",
    ),
    (
        "step_noise",
        "F(x,w) = sum_j |x_j - 1/2| + z_w * [x_1 >= s_w]; z defaults to an even spread on [-1,1], s to [0.2,0.8]",
    ),
    ("constant", "F(x,w) = value"),
];

fn even_spread(m: usize, lo: f64, hi: f64) -> Vec<f64> {
    if m == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

fn atom_table(name: &str, values: &Option<Vec<f64>>, m: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    match values {
        None => Ok(even_spread(m, lo, hi)),
        Some(v) if v.len() != m => Err(Error::config(
            format!("family.{name}"),
            format!("expected {m} values (one per atom), got {}", v.len()),
        )),
        Some(v) if v.iter().any(|x| !x.is_finite()) => {
            Err(Error::config(format!("family.{name}"), "values must be finite"))
        }
        Some(v) => Ok(v.clone()),
    }
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::AbsDev => "deterministic:absdev",
            FamilySpec::AffineNoise { .. } => "affine_noise",
            FamilySpec::StepNoise { .. } => "step_noise",
            FamilySpec::Constant { .. } => "constant",
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, FamilySpec::Constant { .. })
    }

    pub fn build(&self, space: &GroundSpace, dim: usize) -> Result<RandomFunction> {
        let m = space.atom_count();
        let n = dim as f64;
        let space = space.clone();
        let f = match self {
            FamilySpec::AbsDev => {
                RandomFunction::new(self.name(), space, dim, |x, _| x.iter().map(|c| (c - 0.5).abs()).sum())?
                    .with_bound(0.5 * n)
            }
            FamilySpec::AffineNoise { z } => {
                let z = atom_table("z", z, m, -1.0, 1.0)?;
                let zmax = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                RandomFunction::new(self.name(), space, dim, move |x, w| {
                    let g: f64 = x.iter().map(|c| c * c).sum();
                    let h = 1.0 + 0.5 * x.iter().map(|c| (PI * c).sin()).sum::<f64>();
                    g + h * z[w]
                })?
                .with_bound(n + (1.0 + 0.5 * n) * zmax)
            }
            FamilySpec::StepNoise { z, jumps } => {
                let z = atom_table("z", z, m, -1.0, 1.0)?;
                let s = atom_table("jumps", jumps, m, 0.2, 0.8)?;
                let zmax = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                RandomFunction::new(self.name(), space, dim, move |x, w| {
                    let base: f64 = x.iter().map(|c| (c - 0.5).abs()).sum();
                    if x[0] >= s[w] {
                        base + z[w]
                    } else {
                        base
                    }
                })?
                .with_bound(0.5 * n + zmax)
            }
            FamilySpec::Constant { value } => RandomFunction::constant(space, dim, *value)?,
        };
        Ok(f)
    }
}

/// Index offsets of pairs within the per-axis windows, canonicalized so that
/// `(d, -d)` pairs are visited once.
fn box_offsets(dim: usize, windows: &[usize]) -> Vec<[isize; 2]> {
    let mut out = Vec::new();
    if dim == 1 {
        for d in 0..=windows[0] as isize {
            out.push([d, 0]);
        }
    } else {
        let (w1, w2) = (windows[0] as isize, windows[1] as isize);
        for d1 in 0..=w1 {
            for d2 in -w2..=w2 {
                if d1 == 0 && d2 < 0 {
                    continue;
                }
                out.push([d1, d2]);
            }
        }
    }
    out
}

/// Visits every grid pair `(t, t + offset)` with both ends in range.
fn for_each_pair(grid: &Grid, offset: [isize; 2], mut visit: impl FnMut(usize, usize)) {
    let g = grid.points_per_axis() as isize;
    match grid.dim() {
        1 => {
            for i in 0..g - offset[0] {
                visit(i as usize, (i + offset[0]) as usize);
            }
        }
        _ => {
            let (d1, d2) = (offset[0], offset[1]);
            for i in 0..g - d1 {
                for j in 0.max(-d2)..g.min(g - d2) {
                    visit((i * g + j) as usize, ((i + d1) * g + j + d2) as usize);
                }
            }
        }
    }
}

fn check_modulus_dim(dim: usize) -> Result<()> {
    if dim > MAX_MODULUS_DIM {
        return Err(Error::input(format!(
            "moduli are computed for dimensions up to {MAX_MODULUS_DIM}, got {dim}"
        )));
    }
    Ok(())
}

/// Precomputed Choquet `L^p` modulus of continuity on a grid.
///
/// For every index offset inside the build windows it stores the largest
/// `(C) ∫ |F(t) - F(s)|^p dmu` over grid pairs with that offset; a query for
/// `(delta_1, ..., delta_N)` is then a maximum over a box of offsets.
#[derive(Clone, Debug)]
pub struct ChoquetModulus {
    grid: Grid,
    p: f64,
    windows: Vec<usize>,
    offsets: Vec<[isize; 2]>,
    integrals: Vec<f64>,
}

impl ChoquetModulus {
    pub fn build(f: &RandomFunction, cap: &Capacity, p: f64, grid: &Grid, max_deltas: &[f64]) -> Result<Self> {
        validate_exponent(p)?;
        check_modulus_dim(f.dim())?;
        if cap.atom_count() != f.atom_count() {
            return Err(Error::DimensionMismatch {
                expected: f.atom_count(),
                got: cap.atom_count(),
            });
        }
        if max_deltas.len() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: max_deltas.len(),
            });
        }
        if max_deltas.iter().any(|d| !(*d >= 0.0)) {
            return Err(Error::input("modulus deltas must be nonnegative"));
        }
        let table = f.tabulate(grid)?;
        let windows: Vec<usize> = max_deltas.iter().map(|&d| grid.window(d)).collect();
        let offsets = box_offsets(grid.dim(), &windows);
        let m = f.atom_count();
        let integrals = offsets
            .par_iter()
            .map(|&offset| {
                let mut best = 0.0f64;
                let mut diffs = [0.0f64; 64];
                for_each_pair(grid, offset, |a, b| {
                    let (va, vb) = (table.at(a), table.at(b));
                    for w in 0..m {
                        diffs[w] = abs_pow(va[w] - vb[w], p);
                    }
                    best = best.max(integrate(&diffs[..m], cap, cap.full()));
                });
                best
            })
            .collect();
        Ok(ChoquetModulus {
            grid: *grid,
            p,
            windows,
            offsets,
            integrals,
        })
    }

    /// `Gamma(F; deltas)_p`; every delta must lie within the build windows.
    pub fn value(&self, deltas: &[f64]) -> Result<f64> {
        if deltas.len() != self.windows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.windows.len(),
                got: deltas.len(),
            });
        }
        if deltas.iter().any(|d| !(*d >= 0.0)) {
            return Err(Error::input("modulus deltas must be nonnegative"));
        }
        let query: Vec<usize> = deltas.iter().map(|&d| self.grid.window(d)).collect();
        if query.iter().zip(&self.windows).any(|(q, w)| q > w) {
            return Err(Error::input(format!(
                "deltas {deltas:?} exceed the precomputed windows"
            )));
        }
        let best = self
            .offsets
            .iter()
            .zip(&self.integrals)
            .filter(|(o, _)| o[0].unsigned_abs() <= query[0] && (query.len() < 2 || o[1].unsigned_abs() <= query[1]))
            .fold(0.0f64, |acc, (_, &v)| acc.max(v));
        Ok(best.powf(1.0 / self.p))
    }
}

/// Choquet `L^p` modulus of continuity of `F` on `grid`:
/// the largest `((C) ∫ |F(t) - F(s)|^p dmu)^(1/p)` over grid pairs with
/// `|t_i - s_i| <= delta_i` on every axis.
pub fn choquet_modulus(f: &RandomFunction, cap: &Capacity, deltas: &[f64], p: f64, grid: &Grid) -> Result<f64> {
    ChoquetModulus::build(f, cap, p, grid, deltas)?.value(deltas)
}

/// Stochastic modulus `O(F; delta, w)`: the largest `|F(x, w) - F(y, w)|` over
/// grid pairs at Euclidean distance at most `delta`.
pub fn stochastic_modulus(f: &RandomFunction, delta: f64, atom: usize, grid: &Grid) -> Result<f64> {
    check_modulus_dim(f.dim())?;
    f.space().check_atom(atom)?;
    if !(delta >= 0.0) {
        return Err(Error::input("modulus delta must be nonnegative"));
    }
    let table = f.tabulate(grid)?;
    Ok(euclidean_modulus(&table, delta, atom))
}

pub fn euclidean_modulus(table: &GridTable, delta: f64, atom: usize) -> f64 {
    let grid = table.grid();
    let h = grid.spacing();
    let reach = (delta + PAIR_SLACK) * (delta + PAIR_SLACK);
    let windows = vec![grid.window(delta); grid.dim()];
    let mut best = 0.0f64;
    for offset in box_offsets(grid.dim(), &windows) {
        let dist2 = h * h * (offset[0] * offset[0] + offset[1] * offset[1]) as f64;
        if dist2 > reach {
            continue;
        }
        for_each_pair(grid, offset, |a, b| {
            best = best.max((table.value(a, atom) - table.value(b, atom)).abs());
        });
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{make_distorted, DiscreteProbability, DistortionFunction, DistortionKind};

    fn identity_1d(m: usize) -> RandomFunction {
        RandomFunction::new("identity", GroundSpace::with_atoms(m).unwrap(), 1, |x, _| x[0]).unwrap()
    }

    fn sqrt_uniform(m: usize) -> Capacity {
        make_distorted(
            DistortionFunction::new(DistortionKind::Power { alpha: 0.5 }).unwrap(),
            DiscreteProbability::uniform(m).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let f = identity_1d(3);
        assert_eq!(f.eval(&[0.25], 2).unwrap(), 0.25);
        assert!(matches!(f.eval(&[1.5], 0), Err(Error::OutOfDomain(_))));
        assert!(f.eval(&[0.5], 3).is_err());
        assert!(f.eval(&[0.5, 0.5], 0).is_err());

        let space = GroundSpace::with_atoms(2).unwrap();
        let c = RandomFunction::constant(space.clone(), 2, 4.5).unwrap();
        assert_eq!(c.eval(&[0.1, 0.9], 1).unwrap(), 4.5);

        let z = vec![-0.5, 2.0];
        let noisy = FamilySpec::AffineNoise { z: Some(z.clone()) }.build(&space, 2).unwrap();
        let x = [0.25, 0.5];
        let g = 0.25f64.powi(2) + 0.25;
        let h = 1.0 + 0.5 * ((PI * 0.25).sin() + 1.0);
        for (w, zw) in z.iter().enumerate() {
            assert!((noisy.eval(&x, w).unwrap() - (g + h * zw)).abs() < 1e-15);
        }
        assert_eq!(noisy.sample(1).unwrap().eval(&x).unwrap(), noisy.eval(&x, 1).unwrap());
    }

    #[test]
    fn family_tables_must_match_the_space() {
        let space = GroundSpace::with_atoms(3).unwrap();
        let bad = FamilySpec::AffineNoise { z: Some(vec![1.0]) };
        assert!(matches!(bad.build(&space, 1), Err(Error::Config { .. })));
        let spec: FamilySpec = serde_json::from_str(r#"{"name":"step_noise"}"#).unwrap();
        let f = spec.build(&space, 1).unwrap();
        assert_eq!(f.bound(), Some(1.5));
        assert!(serde_json::from_str::<FamilySpec>(r#"{"name":"nope"}"#).is_err());
    }

    #[test]
    fn grid_windows_respect_the_slack() {
        let g = Grid::new(1, 101).unwrap();
        assert_eq!(g.window(0.1), 10);
        assert_eq!(g.window(0.0), 0);
        assert_eq!(g.window(7.0), 100);
        let g = Grid::new(2, 21).unwrap();
        assert_eq!(g.window(0.05 + 0.1), 3);
        assert_eq!(g.multi_index(22), vec![1, 1]);
        assert_eq!(g.point(20), vec![0.0, 1.0]);
    }

    #[test]
    fn choquet_modulus_examples() {
        let cap = sqrt_uniform(3);
        let grid = Grid::new(1, 101).unwrap();
        let constant = RandomFunction::constant(cap.space().clone(), 1, 2.0).unwrap();
        assert_eq!(choquet_modulus(&constant, &cap, &[0.3], 1.0, &grid).unwrap(), 0.0);
        let f = identity_1d(3);
        for p in [1.0, 2.0, 3.0] {
            let v = choquet_modulus(&f, &cap, &[0.25], p, &grid).unwrap();
            assert!((v - 0.25).abs() < 1e-12, "p = {p}: {v}");
            assert_eq!(choquet_modulus(&f, &cap, &[0.0], p, &grid).unwrap(), 0.0);
        }
        assert!(choquet_modulus(&f, &cap, &[0.25], 0.9, &grid).is_err());
    }

    #[test]
    fn table_matches_direct_pair_enumeration() {
        let space = GroundSpace::with_atoms(4).unwrap();
        let cap = sqrt_uniform(4);
        let f = FamilySpec::StepNoise { z: None, jumps: None }.build(&space, 2).unwrap();
        let grid = Grid::new(2, 9).unwrap();
        let table = ChoquetModulus::build(&f, &cap, 2.0, &grid, &[0.5, 0.5]).unwrap();
        let coords = grid.coordinates();
        for deltas in [[0.125, 0.25], [0.5, 0.0], [0.375, 0.5]] {
            let mut best = 0.0f64;
            for a in grid.points() {
                for b in grid.points() {
                    if (a[0] - b[0]).abs() <= deltas[0] + 1e-12 && (a[1] - b[1]).abs() <= deltas[1] + 1e-12 {
                        let diffs: Vec<f64> = (0..4)
                            .map(|w| (f.eval(&a, w).unwrap() - f.eval(&b, w).unwrap()).powi(2))
                            .collect();
                        best = best.max(integrate(&diffs, &cap, cap.full()));
                    }
                }
            }
            assert_eq!(coords.len(), 9);
            let direct = best.sqrt();
            assert!((table.value(&deltas).unwrap() - direct).abs() < 1e-15);
        }
        assert!(table.value(&[0.75, 0.1]).is_err());
    }

    #[test]
    fn stochastic_modulus_examples() {
        let f = identity_1d(1);
        let grid = Grid::new(1, 101).unwrap();
        assert!((stochastic_modulus(&f, 0.1, 0, &grid).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(stochastic_modulus(&f, 0.0, 0, &grid).unwrap(), 0.0);
        let c = RandomFunction::constant(GroundSpace::with_atoms(1).unwrap(), 1, -1.0).unwrap();
        assert_eq!(stochastic_modulus(&c, 0.4, 0, &grid).unwrap(), 0.0);

        // Euclidean reach on a 2-D grid: x1 + x2 over a diagonal step of length sqrt(2)/10
        let sum = RandomFunction::new("sum", GroundSpace::with_atoms(1).unwrap(), 2, |x, _| x[0] + x[1]).unwrap();
        let grid = Grid::new(2, 11).unwrap();
        let v = stochastic_modulus(&sum, 0.1 * 2f64.sqrt(), 0, &grid).unwrap();
        assert!((v - 0.2).abs() < 1e-12);
        let v = stochastic_modulus(&sum, 0.1, 0, &grid).unwrap();
        assert!((v - 0.1).abs() < 1e-12);
    }

    #[test]
    fn moduli_are_monotone_in_delta() {
        let space = GroundSpace::with_atoms(3).unwrap();
        let cap = sqrt_uniform(3);
        let f = FamilySpec::AffineNoise { z: None }.build(&space, 1).unwrap();
        let grid = Grid::new(1, 65).unwrap();
        let table = ChoquetModulus::build(&f, &cap, 1.0, &grid, &[1.0]).unwrap();
        let deltas: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
        let gammas: Vec<f64> = deltas.iter().map(|d| table.value(&[*d]).unwrap()).collect();
        assert!(gammas.windows(2).all(|w| w[0] <= w[1]));
        let os: Vec<f64> = deltas
            .iter()
            .map(|d| stochastic_modulus(&f, *d, 1, &grid).unwrap())
            .collect();
        assert!(os.windows(2).all(|w| w[0] <= w[1]));
    }
}
