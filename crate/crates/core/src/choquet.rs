//! The asymmetric Choquet integral on finite capacity spaces.
//!
//! [`choquet_integral`] evaluates the level-set telescoping form
//!
//! ```text
//! v1 * mu(A) + sum_{i >= 2} (v_i - v_{i-1}) * mu(A ∩ {f >= v_i})
//! ```
//!
//! over the distinct values `v1 < ... < vm` of `f` on `A`.
//! [`choquet_integral_oracle`] integrates the survival function
//! `t -> mu({f > t} ∩ A)` directly with the midpoint rule and is kept as an
//! independent cross-check.

use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, Subset};
use crate::error::{Error, Result};

/// Smallest step count accepted by the quadrature oracle.
pub const MIN_ORACLE_STEPS: usize = 1000;
/// Admissible range of the exponent in the `L^p` functionals.
pub const P_RANGE: (f64, f64) = (1.0, 16.0);

/// A random variable on a finite space: one value per atom.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomFunction {
    values: Vec<f64>,
}

impl AtomFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("atom function has no values"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("value at atom {i} is not finite")));
        }
        Ok(AtomFunction { values })
    }

    pub fn constant(value: f64, atoms: usize) -> Result<Self> {
        Self::new(vec![value; atoms])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &AtomFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Self::new(self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }

    /// `{atoms : f <= x}`.
    pub fn sublevel_set(&self, x: f64) -> Subset {
        Subset::from_indices(self.values.iter().enumerate().filter(|(_, &v)| v <= x).map(|(i, _)| i))
    }

    /// Pairwise criterion `(f(w) - f(w'))(g(w) - g(w')) >= 0` on `domain`.
    pub fn is_comonotone_with(&self, other: &AtomFunction, domain: Subset) -> bool {
        let atoms: Vec<usize> = domain.iter().filter(|&i| i < self.len()).collect();
        atoms.iter().all(|&a| {
            atoms
                .iter()
                .all(|&b| (self.values[a] - self.values[b]) * (other.values[a] - other.values[b]) >= 0.0)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    SortedSum,
    RiemannOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub method: IntegrationMethod,
    /// Quadrature steps per half-line; present for the oracle only.
    pub steps_used: Option<usize>,
}

fn check_inputs(f: &AtomFunction, cap: &Capacity, domain: Subset) -> Result<()> {
    if f.len() != cap.atom_count() {
        return Err(Error::DimensionMismatch {
            expected: cap.atom_count(),
            got: f.len(),
        });
    }
    cap.space().check_subset(domain)
}

/// Choquet integral of `f` over `domain` by the sorted level-set sum.
pub fn choquet_integral(f: &AtomFunction, cap: &Capacity, domain: Subset) -> Result<IntegralResult> {
    check_inputs(f, cap, domain)?;
    Ok(IntegralResult {
        value: integrate(f.values(), cap, domain),
        method: IntegrationMethod::SortedSum,
        steps_used: None,
    })
}

/// Unchecked sorted-sum integral; `values` holds one entry per atom.
///
/// The result depends only on the level sets of `values`, so permuting tied
/// atoms leaves it bit-for-bit unchanged.
pub fn integrate(values: &[f64], cap: &Capacity, domain: Subset) -> f64 {
    let mut buf = [(0.0f64, 0usize); 64];
    let mut len = 0;
    for i in domain.iter().take_while(|&i| i < values.len()) {
        buf[len] = (values[i], i);
        len += 1;
    }
    if len == 0 {
        return 0.0;
    }
    let sorted = &mut buf[..len];
    sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let mut level = Subset::from_indices(sorted.iter().map(|&(_, i)| i));
    let mut previous = sorted[0].0;
    let mut total = previous * cap.value(level);
    let mut k = 0;
    while k < len {
        let v = sorted[k].0;
        if v != previous {
            total += (v - previous) * cap.value(level);
            previous = v;
        }
        // drop every atom at this value; what remains is {f > v}
        let mut next = level;
        while k < len && sorted[k].0 == v {
            next = next.difference(Subset::singleton(sorted[k].1));
            k += 1;
        }
        if k < len {
            level = next;
        }
    }
    total
}

/// Midpoint-rule quadrature of both half-line integrals defining the Choquet integral.
///
/// The integrand is a step function with jumps at the values of `f`, so each
/// half-line contributes an error of at most half a step.
pub fn choquet_integral_oracle(
    f: &AtomFunction,
    cap: &Capacity,
    domain: Subset,
    steps: usize,
) -> Result<IntegralResult> {
    check_inputs(f, cap, domain)?;
    if steps < MIN_ORACLE_STEPS {
        return Err(Error::input(format!(
            "oracle needs at least {MIN_ORACLE_STEPS} steps, got {steps}"
        )));
    }
    let result = |value| IntegralResult {
        value,
        method: IntegrationMethod::RiemannOracle,
        steps_used: Some(steps),
    };
    let mut sorted: Vec<(f64, usize)> = domain.iter().map(|i| (f.values()[i], i)).collect();
    if sorted.is_empty() {
        return Ok(result(0.0));
    }
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let lo = sorted[0].0 - 1.0;
    let hi = sorted[sorted.len() - 1].0 + 1.0;
    let mu_domain = cap.value(domain);

    let mut survival = SurvivalSweep::new(&sorted, cap);
    let mut negative = 0.0;
    if lo < 0.0 {
        let h = -lo / steps as f64;
        let mut acc = 0.0;
        for k in 0..steps {
            let t = lo + (k as f64 + 0.5) * h;
            acc += survival.at(t) - mu_domain;
        }
        negative = acc * h;
    }
    let mut positive = 0.0;
    if hi > 0.0 {
        let h = hi / steps as f64;
        let mut acc = 0.0;
        for k in 0..steps {
            let t = (k as f64 + 0.5) * h;
            acc += survival.at(t);
        }
        positive = acc * h;
    }
    Ok(result(positive + negative))
}

/// Evaluates `t -> mu({f > t} ∩ A)` for nondecreasing `t`, caching the capacity value.
struct SurvivalSweep<'a> {
    sorted: &'a [(f64, usize)],
    cap: &'a Capacity,
    next: usize,
    set: Subset,
    value: f64,
    last_t: f64,
}

impl<'a> SurvivalSweep<'a> {
    fn new(sorted: &'a [(f64, usize)], cap: &'a Capacity) -> Self {
        let set = Subset::from_indices(sorted.iter().map(|&(_, i)| i));
        SurvivalSweep {
            sorted,
            cap,
            next: 0,
            set,
            value: cap.value(set),
            last_t: f64::NEG_INFINITY,
        }
    }

    fn at(&mut self, t: f64) -> f64 {
        if t < self.last_t {
            *self = SurvivalSweep::new(self.sorted, self.cap);
        }
        self.last_t = t;
        let mut changed = false;
        while self.next < self.sorted.len() && self.sorted[self.next].0 <= t {
            self.set = self.set.difference(Subset::singleton(self.sorted[self.next].1));
            self.next += 1;
            changed = true;
        }
        if changed {
            self.value = self.cap.value(self.set);
        }
        self.value
    }
}

pub(crate) fn validate_exponent(p: f64) -> Result<()> {
    if !(P_RANGE.0..=P_RANGE.1).contains(&p) {
        return Err(Error::input(format!(
            "exponent p = {p} is outside [{}, {}]",
            P_RANGE.0, P_RANGE.1
        )));
    }
    Ok(())
}

/// `((C) ∫_Ω |f|^p dmu)^(1/p)`.
pub fn choquet_lp_norm(f: &AtomFunction, cap: &Capacity, p: f64) -> Result<f64> {
    validate_exponent(p)?;
    let powered = f.map(|v| abs_pow(v, p))?;
    let integral = choquet_integral(&powered, cap, cap.full())?.value;
    Ok(integral.powf(1.0 / p))
}

/// `|d|^p`, with the common exponents evaluated exactly.
pub(crate) fn abs_pow(d: f64, p: f64) -> f64 {
    let a = d.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

/// Capacity distribution function `x -> mu({F <= x})`.
pub fn capacity_distribution_function(f: &AtomFunction, cap: &Capacity, x: f64) -> Result<f64> {
    check_inputs(f, cap, cap.full())?;
    Ok(cap.value(f.sublevel_set(x)))
}
