#![allow(dead_code)]

use capbern::capacity::{
    make_distorted, make_possibility, Capacity, DiscreteProbability, DistortionFunction, DistortionKind, GroundSpace,
    PossibilityDistribution, Subset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_probability(rng: &mut ChaCha8Rng, m: usize) -> DiscreteProbability {
    let mut w: Vec<f64> = (0..m)
        .map(|_| {
            if rng.random_bool(0.1) {
                0.0
            } else {
                rng.random_range(0.01..1.0)
            }
        })
        .collect();
    if w.iter().all(|v| *v == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    DiscreteProbability::new(w.iter().map(|v| v / total).collect()).unwrap()
}

pub fn random_distortion(rng: &mut ChaCha8Rng) -> DistortionFunction {
    let kind = match rng.random_range(0..6) {
        0 => DistortionKind::Power {
            alpha: rng.random_range(0.1..=1.0),
        },
        1 => DistortionKind::Rational2t,
        2 => DistortionKind::ExpDecay,
        3 => DistortionKind::Log2,
        4 => DistortionKind::Sine,
        _ => DistortionKind::Arctan,
    };
    DistortionFunction::new(kind).unwrap()
}

pub fn random_distorted(rng: &mut ChaCha8Rng, m: usize) -> Capacity {
    let u = random_distortion(rng);
    make_distorted(u, random_probability(rng, m)).unwrap()
}

pub fn random_possibility(rng: &mut ChaCha8Rng, m: usize) -> Capacity {
    let mut lambda: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
    lambda[rng.random_range(0..m)] = 1.0;
    make_possibility(PossibilityDistribution::new(lambda).unwrap()).unwrap()
}

/// A monotone table `P(A)^gamma`; submodular only when `gamma <= 1`.
pub fn random_table(rng: &mut ChaCha8Rng, m: usize) -> Capacity {
    let p = random_probability(rng, m);
    let gamma = rng.random_range(0.3..3.0);
    let full = (1u64 << m) - 1;
    let values = (0..=full)
        .map(|bits| {
            if bits == full {
                1.0
            } else {
                p.measure(Subset::from_bits(bits)).powf(gamma).min(1.0)
            }
        })
        .collect();
    Capacity::table(GroundSpace::with_atoms(m).unwrap(), values).unwrap()
}

pub fn random_any(rng: &mut ChaCha8Rng, m: usize, which: usize) -> Capacity {
    match which % 3 {
        0 => random_distorted(rng, m),
        1 => random_possibility(rng, m),
        _ => random_table(rng, m),
    }
}

pub fn random_submodular(rng: &mut ChaCha8Rng, m: usize) -> Capacity {
    if rng.random_bool(0.5) {
        random_distorted(rng, m)
    } else {
        random_possibility(rng, m)
    }
}

pub fn random_values(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..m).map(|_| rng.random_range(lo..hi)).collect()
}
