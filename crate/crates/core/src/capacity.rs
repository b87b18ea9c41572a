//! Finite capacity spaces.
//!
//! The ground space is a finite set of `M` atoms and every subset is measurable.
//! Subsets are bitmasks over atom indices, so a space holds at most 64 atoms and
//! exhaustive property checks are limited to 20.
//!
//! Three representations are supported:
//!
//! * an explicit table of `2^M` values,
//! * a distorted probability `u(P(A))` for a nondecreasing concave `u`,
//! * a possibility measure `sup { lambda(s) : s in A }`.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of atoms a [`GroundSpace`] can hold.
pub const MAX_ATOMS: usize = 64;
/// Largest space accepted by exhaustive property checks and explicit tables.
pub const EXHAUSTIVE_LIMIT: usize = 20;
/// Up to this size the exhaustive check enumerates every pair `(A, B)`.
const PAIRWISE_LIMIT: usize = 12;
/// Number of points of the dyadic probe grid used to validate distortions.
pub const PROBE_POINTS: usize = 1025;
/// Absolute slack used by every capacity-level comparison.
pub const TOLERANCE: f64 = 1e-12;
/// Step of the forward difference estimating `u'(0)` for tabulated distortions.
const SLOPE_STEP: f64 = 1.0 / (1u64 << 20) as f64;

/// A set of atoms, stored as a bitmask over atom indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    /// The set of all `m` atoms.
    pub fn full(m: usize) -> Self {
        if m >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << m) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        Subset(1u64 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0u64, |acc, i| acc | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1u64 << index) != 0
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1u64 << index;
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Atom indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// A finite sample space whose measurable sets are all subsets of its atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundSpace {
    labels: Vec<String>,
}

impl GroundSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::construction("a ground space needs at least one atom"));
        }
        if labels.len() > MAX_ATOMS {
            return Err(Error::construction(format!(
                "{} atoms exceed the limit of {MAX_ATOMS}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::construction(format!("duplicate atom label `{label}`")));
            }
        }
        Ok(GroundSpace { labels })
    }

    /// A space with atoms labelled `w0, w1, ...`.
    pub fn with_atoms(m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| format!("w{i}")).collect())
    }

    pub fn atom_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.atom_count())
    }

    pub fn check_atom(&self, index: usize) -> Result<()> {
        if index < self.atom_count() {
            Ok(())
        } else {
            Err(Error::AtomOutOfRange {
                index,
                atoms: self.atom_count(),
            })
        }
    }

    pub fn check_subset(&self, subset: Subset) -> Result<()> {
        match subset.difference(self.full()).iter().next() {
            None => Ok(()),
            Some(index) => Err(Error::AtomOutOfRange {
                index,
                atoms: self.atom_count(),
            }),
        }
    }

    pub fn subset_from_indices(&self, indices: &[usize]) -> Result<Subset> {
        for &i in indices {
            self.check_atom(i)?;
        }
        Ok(Subset::from_indices(indices.iter().copied()))
    }
}

/// A probability on the atoms of a finite space.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteProbability {
    weights: Vec<f64>,
}

impl DiscreteProbability {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() > MAX_ATOMS {
            return Err(Error::construction(format!(
                "probability needs between 1 and {MAX_ATOMS} weights, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::construction(format!("weight {w} is outside [0, 1]")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::construction(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteProbability { weights })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::construction("uniform probability on zero atoms"));
        }
        Self::new(vec![1.0 / m as f64; m])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    /// `P(A)`, summed in increasing atom order.
    pub fn measure(&self, subset: Subset) -> f64 {
        subset
            .iter()
            .take_while(|&i| i < self.weights.len())
            .map(|i| self.weights[i])
            .sum()
    }
}

/// The built-in distortion catalog plus a tabulated custom distortion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistortionKind {
    /// `t^alpha`; concave for `0 < alpha <= 1`.
    Power { alpha: f64 },
    /// `2t / (t + 1)`.
    #[serde(rename = "rational_2t")]
    Rational2t,
    /// `(1 - e^{-t}) / (1 - e^{-1})`.
    ExpDecay,
    /// `ln(1 + t) / ln 2`.
    Log2,
    /// `sin(pi t / 2)`.
    Sine,
    /// `(4 / pi) arctan t`.
    Arctan,
    /// Piecewise-linear interpolation of values at equispaced knots of `[0, 1]`.
    CustomTable { values: Vec<f64> },
}

/// The right derivative of a distortion at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slope {
    /// Known in closed form.
    Exact(f64),
    /// Forward-difference estimate `u(h) / h` with `h = 2^-20`.
    Estimated(f64),
    Infinite,
}

impl Slope {
    pub fn value(self) -> f64 {
        match self {
            Slope::Exact(v) | Slope::Estimated(v) => v,
            Slope::Infinite => f64::INFINITY,
        }
    }

    pub fn is_estimated(self) -> bool {
        matches!(self, Slope::Estimated(_))
    }
}

/// A validated distortion `u : [0, 1] -> [0, 1]`.
///
/// Construction checks `u(0) = 0`, `u(1) = 1`, monotonicity and midpoint
/// concavity on the 1025-point dyadic probe grid, all within `1e-12`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionFunction {
    kind: DistortionKind,
}

impl DistortionFunction {
    pub fn new(kind: DistortionKind) -> Result<Self> {
        match &kind {
            DistortionKind::Power { alpha } if !(alpha.is_finite() && *alpha > 0.0) => {
                return Err(Error::construction(format!(
                    "power distortion needs a positive exponent, got {alpha}"
                )));
            }
            DistortionKind::CustomTable { values } => {
                if values.len() < 2 {
                    return Err(Error::construction("custom distortion table needs at least two knots"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::construction("custom distortion table has non-finite values"));
                }
            }
            _ => {}
        }
        let u = DistortionFunction { kind };
        u.validate()?;
        Ok(u)
    }

    pub fn identity() -> Self {
        DistortionFunction {
            kind: DistortionKind::Power { alpha: 1.0 },
        }
    }

    pub fn kind(&self) -> &DistortionKind {
        &self.kind
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            DistortionKind::Power { alpha } => {
                if t <= 0.0 {
                    0.0
                } else {
                    t.powf(*alpha)
                }
            }
            DistortionKind::Rational2t => 2.0 * t / (t + 1.0),
            DistortionKind::ExpDecay => (-t).exp_m1() / (-1.0f64).exp_m1(),
            DistortionKind::Log2 => t.ln_1p() / LN_2,
            DistortionKind::Sine => (FRAC_PI_2 * t).sin(),
            DistortionKind::Arctan => 4.0 / PI * t.atan(),
            DistortionKind::CustomTable { values } => {
                let segments = (values.len() - 1) as f64;
                let pos = t.clamp(0.0, 1.0) * segments;
                let i = (pos.floor() as usize).min(values.len() - 2);
                let frac = pos - i as f64;
                values[i] + frac * (values[i + 1] - values[i])
            }
        }
    }

    pub fn derivative_at_zero(&self) -> Slope {
        match &self.kind {
            DistortionKind::Power { alpha } => {
                if *alpha < 1.0 {
                    Slope::Infinite
                } else if *alpha == 1.0 {
                    Slope::Exact(1.0)
                } else {
                    Slope::Exact(0.0)
                }
            }
            DistortionKind::Rational2t => Slope::Exact(2.0),
            DistortionKind::ExpDecay => Slope::Exact(1.0 / (1.0 - (-1.0f64).exp())),
            DistortionKind::Log2 => Slope::Exact(1.0 / LN_2),
            DistortionKind::Sine => Slope::Exact(FRAC_PI_2),
            DistortionKind::Arctan => Slope::Exact(4.0 / PI),
            DistortionKind::CustomTable { .. } => Slope::Estimated(self.eval(SLOPE_STEP) / SLOPE_STEP),
        }
    }

    /// `u'(0)` when it is finite and positive, as the concentration bounds require.
    pub fn finite_slope_at_zero(&self) -> Result<f64> {
        let slope = self.derivative_at_zero().value();
        if slope.is_finite() && slope > 0.0 {
            Ok(slope)
        } else {
            Err(Error::Hypothesis(format!(
                "distortion needs 0 < u'(0) < infinity, got {slope}"
            )))
        }
    }

    /// Strict increase on the probe grid.
    pub fn is_strictly_increasing(&self) -> bool {
        let probe = self.probe();
        probe.windows(2).all(|w| w[1] > w[0])
    }

    fn probe(&self) -> Vec<f64> {
        let last = (PROBE_POINTS - 1) as f64;
        (0..PROBE_POINTS).map(|i| self.eval(i as f64 / last)).collect()
    }

    fn validate(&self) -> Result<()> {
        let probe = self.probe();
        if probe[0].abs() > TOLERANCE {
            return Err(Error::construction(format!("u(0) = {} is not 0", probe[0])));
        }
        let top = probe[PROBE_POINTS - 1];
        if (top - 1.0).abs() > TOLERANCE {
            return Err(Error::construction(format!("u(1) = {top} is not 1")));
        }
        if let Some(i) = (1..PROBE_POINTS).find(|&i| probe[i] < probe[i - 1] - TOLERANCE) {
            return Err(Error::construction(format!(
                "distortion decreases near t = {}",
                i as f64 / (PROBE_POINTS - 1) as f64
            )));
        }
        // Midpoint concavity over every probe pair whose midpoint is on the grid.
        for a in 0..PROBE_POINTS {
            for b in ((a + 2)..PROBE_POINTS).step_by(2) {
                let mid = probe[(a + b) / 2];
                if mid < 0.5 * (probe[a] + probe[b]) - TOLERANCE {
                    return Err(Error::construction(format!(
                        "distortion is not concave on [{}, {}]",
                        a as f64 / (PROBE_POINTS - 1) as f64,
                        b as f64 / (PROBE_POINTS - 1) as f64
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A possibility distribution `lambda` with `max lambda = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PossibilityDistribution {
    lambda: Vec<f64>,
}

impl PossibilityDistribution {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.len() > MAX_ATOMS {
            return Err(Error::construction(format!(
                "possibility distribution needs between 1 and {MAX_ATOMS} values"
            )));
        }
        if let Some(v) = lambda.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::construction(format!("possibility value {v} is outside [0, 1]")));
        }
        let top = lambda.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if (top - 1.0).abs() > TOLERANCE {
            return Err(Error::construction(format!(
                "possibility distribution must reach 1, max is {top}"
            )));
        }
        Ok(PossibilityDistribution { lambda })
    }

    pub fn values(&self) -> &[f64] {
        &self.lambda
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CapacityRepr {
    /// Values indexed by subset bitmask.
    Table(Vec<f64>),
    Distorted {
        distortion: DistortionFunction,
        probability: DiscreteProbability,
    },
    Possibility(PossibilityDistribution),
}

/// A normalized monotone set function on a finite space.
#[derive(Clone, Debug, PartialEq)]
pub struct Capacity {
    space: GroundSpace,
    repr: CapacityRepr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Enumerate subsets; limited to [`EXHAUSTIVE_LIMIT`] atoms.
    Exhaustive,
    /// Closed-form verdicts for distorted and possibility capacities, exhaustive for tables.
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub monotone: bool,
    pub subadditive: bool,
    pub submodular: bool,
}

impl Capacity {
    /// An explicit table indexed by subset bitmask; it must hold all `2^M` values.
    pub fn table(space: GroundSpace, values: Vec<f64>) -> Result<Self> {
        let m = space.atom_count();
        if m > EXHAUSTIVE_LIMIT {
            return Err(Error::CapacityTooLarge {
                atoms: m,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        if values.len() != 1usize << m {
            return Err(Error::construction(format!(
                "table has {} entries, a space of {m} atoms needs {}",
                values.len(),
                1usize << m
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::construction("table has non-finite values"));
        }
        if values[0] != 0.0 {
            return Err(Error::construction(format!("mu(empty) = {} is not 0", values[0])));
        }
        let top = values[values.len() - 1];
        if (top - 1.0).abs() > TOLERANCE {
            return Err(Error::construction(format!("mu(full) = {top} is not 1")));
        }
        if !single_step_monotone(&values, m) {
            return Err(Error::construction("table is not monotone"));
        }
        Ok(Capacity {
            space,
            repr: CapacityRepr::Table(values),
        })
    }

    /// Builds a table from `(subset, value)` entries covering every subset exactly once.
    pub fn table_from_entries<I>(space: GroundSpace, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let m = space.atom_count();
        if m > EXHAUSTIVE_LIMIT {
            return Err(Error::CapacityTooLarge {
                atoms: m,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        let mut values = vec![None; 1usize << m];
        for (subset, value) in entries {
            space.check_subset(subset)?;
            let slot = &mut values[subset.bits() as usize];
            if slot.is_some() {
                return Err(Error::construction(format!(
                    "subset {:?} listed twice",
                    subset.iter().collect::<Vec<_>>()
                )));
            }
            *slot = Some(value);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(bits, v)| {
                v.ok_or_else(|| {
                    Error::construction(format!(
                        "table is missing subset {:?}",
                        Subset::from_bits(bits as u64).iter().collect::<Vec<_>>()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::table(space, values)
    }

    pub fn distorted(
        space: GroundSpace,
        distortion: DistortionFunction,
        probability: DiscreteProbability,
    ) -> Result<Self> {
        if probability.atom_count() != space.atom_count() {
            return Err(Error::DimensionMismatch {
                expected: space.atom_count(),
                got: probability.atom_count(),
            });
        }
        Ok(Capacity {
            space,
            repr: CapacityRepr::Distorted {
                distortion,
                probability,
            },
        })
    }

    pub fn possibility(space: GroundSpace, lambda: PossibilityDistribution) -> Result<Self> {
        if lambda.values().len() != space.atom_count() {
            return Err(Error::DimensionMismatch {
                expected: space.atom_count(),
                got: lambda.values().len(),
            });
        }
        Ok(Capacity {
            space,
            repr: CapacityRepr::Possibility(lambda),
        })
    }

    pub fn space(&self) -> &GroundSpace {
        &self.space
    }

    pub fn repr(&self) -> &CapacityRepr {
        &self.repr
    }

    pub fn atom_count(&self) -> usize {
        self.space.atom_count()
    }

    pub fn full(&self) -> Subset {
        self.space.full()
    }

    pub fn is_possibility(&self) -> bool {
        matches!(self.repr, CapacityRepr::Possibility(_))
    }

    /// `mu(A)`, rejecting atoms outside the space.
    pub fn eval(&self, subset: Subset) -> Result<f64> {
        self.space.check_subset(subset)?;
        Ok(self.value(subset))
    }

    /// `mu(A)` for `A` restricted to the space; atoms beyond `M` are ignored.
    pub fn value(&self, subset: Subset) -> f64 {
        let full = self.full();
        let subset = subset.intersection(full);
        if subset.is_empty() {
            return 0.0;
        }
        match &self.repr {
            CapacityRepr::Table(values) => values[subset.bits() as usize],
            CapacityRepr::Distorted {
                distortion,
                probability,
            } => {
                if subset == full {
                    1.0
                } else {
                    distortion.eval(probability.measure(subset))
                }
            }
            CapacityRepr::Possibility(lambda) => subset.iter().map(|i| lambda.values()[i]).fold(0.0, f64::max),
        }
    }

    /// Values of every subset, indexed by bitmask.
    pub fn all_values(&self) -> Result<Vec<f64>> {
        let m = self.atom_count();
        if m > EXHAUSTIVE_LIMIT {
            return Err(Error::CapacityTooLarge {
                atoms: m,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        Ok((0..1u64 << m).map(|bits| self.value(Subset(bits))).collect())
    }

    pub fn check_properties(&self, mode: CheckMode) -> Result<PropertyReport> {
        match (mode, &self.repr) {
            (CheckMode::Analytic, CapacityRepr::Distorted { .. })
            | (CheckMode::Analytic, CapacityRepr::Possibility(_)) => Ok(PropertyReport {
                monotone: true,
                subadditive: true,
                submodular: true,
            }),
            _ => {
                let m = self.atom_count();
                let values = self.all_values()?;
                Ok(exhaustive_report(&values, m))
            }
        }
    }

    /// Whether submodularity is certified, analytically or by enumeration.
    pub fn is_submodular(&self) -> Result<bool> {
        Ok(self.check_properties(CheckMode::Analytic)?.submodular)
    }

    pub fn to_spec(&self) -> CapacitySpec {
        let repr = match &self.repr {
            CapacityRepr::Table(values) => ReprSpec::Table {
                values: values
                    .iter()
                    .enumerate()
                    .map(|(bits, &value)| TableEntry {
                        subset: Subset::from_bits(bits as u64).iter().collect(),
                        value,
                    })
                    .collect(),
            },
            CapacityRepr::Distorted {
                distortion,
                probability,
            } => ReprSpec::Distorted {
                distortion: distortion.kind().clone(),
                probabilities: probability.weights().to_vec(),
            },
            CapacityRepr::Possibility(lambda) => ReprSpec::Possibility {
                lambda: lambda.values().to_vec(),
            },
        };
        CapacitySpec {
            atoms: self.space.labels().to_vec(),
            repr,
        }
    }
}

fn single_step_monotone(values: &[f64], m: usize) -> bool {
    (0..values.len()).all(|bits| {
        (0..m)
            .filter(|i| bits & (1 << i) == 0)
            .all(|i| values[bits] <= values[bits | (1 << i)] + TOLERANCE)
    })
}

fn exhaustive_report(values: &[f64], m: usize) -> PropertyReport {
    if m <= PAIRWISE_LIMIT {
        let n = values.len();
        let mut report = PropertyReport {
            monotone: true,
            subadditive: true,
            submodular: true,
        };
        for a in 0..n {
            for b in a..n {
                let (va, vb) = (values[a], values[b]);
                let (vu, vi) = (values[a | b], values[a & b]);
                if a & b == a && va > vb + TOLERANCE {
                    report.monotone = false;
                }
                if vu > va + vb + TOLERANCE {
                    report.subadditive = false;
                }
                if vu + vi > va + vb + TOLERANCE {
                    report.submodular = false;
                }
            }
        }
        return report;
    }
    // Larger spaces: single-atom increments decide monotonicity and the
    // diminishing-returns form decides submodularity.
    let monotone = single_step_monotone(values, m);
    let submodular = (0..values.len()).all(|bits| {
        let free: Vec<usize> = (0..m).filter(|i| bits & (1 << i) == 0).collect();
        free.iter().enumerate().all(|(idx, &i)| {
            free[idx + 1..].iter().all(|&j| {
                values[bits | (1 << i) | (1 << j)] + values[bits]
                    <= values[bits | (1 << i)] + values[bits | (1 << j)] + TOLERANCE
            })
        })
    });
    let subadditive = if monotone && submodular {
        true
    } else {
        // Disjoint pairs suffice for a monotone set function.
        (0..values.len()).all(|union| {
            let mut a = union;
            loop {
                let b = union & !a;
                if values[union] > values[a] + values[b] + TOLERANCE {
                    return false;
                }
                if a == 0 {
                    return true;
                }
                a = (a - 1) & union;
            }
        })
    };
    PropertyReport {
        monotone,
        subadditive,
        submodular,
    }
}

/// Distorted capacity `u(P)` on a space with default atom labels.
pub fn make_distorted(distortion: DistortionFunction, probability: DiscreteProbability) -> Result<Capacity> {
    let space = GroundSpace::with_atoms(probability.atom_count())?;
    Capacity::distorted(space, distortion, probability)
}

/// Possibility capacity induced by `lambda` on a space with default atom labels.
pub fn make_possibility(lambda: PossibilityDistribution) -> Result<Capacity> {
    let space = GroundSpace::with_atoms(lambda.values().len())?;
    Capacity::possibility(space, lambda)
}

/// JSON form of a capacity: `{"atoms": [...], "repr": {"type": ..., ...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacitySpec {
    pub atoms: Vec<String>,
    pub repr: ReprSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReprSpec {
    Distorted {
        distortion: DistortionKind,
        probabilities: Vec<f64>,
    },
    Possibility {
        lambda: Vec<f64>,
    },
    Table {
        values: Vec<TableEntry>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub subset: Vec<usize>,
    pub value: f64,
}

impl CapacitySpec {
    pub fn build(&self) -> Result<Capacity> {
        let space = GroundSpace::new(self.atoms.clone())?;
        match &self.repr {
            ReprSpec::Distorted {
                distortion,
                probabilities,
            } => Capacity::distorted(
                space,
                DistortionFunction::new(distortion.clone())?,
                DiscreteProbability::new(probabilities.clone())?,
            ),
            ReprSpec::Possibility { lambda } => {
                Capacity::possibility(space, PossibilityDistribution::new(lambda.clone())?)
            }
            ReprSpec::Table { values } => {
                let entries = values
                    .iter()
                    .map(|e| Ok((space.subset_from_indices(&e.subset)?, e.value)))
                    .collect::<Result<Vec<_>>>()?;
                Capacity::table_from_entries(space, entries)
            }
        }
    }
}
