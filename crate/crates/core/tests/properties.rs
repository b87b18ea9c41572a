mod common;

use capbern::bernstein::{bernstein_basis, bernstein_univariate, node_samples};
use capbern::capacity::{CheckMode, Subset};
use capbern::choquet::{choquet_lp_norm, integrate, AtomFunction};
use capbern::experiments::semi_metric;
use capbern::randomfn::{stochastic_modulus, ChoquetModulus, Grid, RandomFunction};
use capbern::stochastic::{sample_order_statistics, SeededStream};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn random_field(seed: u64, m: usize, dim: usize) -> RandomFunction {
    let mut r = rng(seed);
    let coeffs: Vec<[f64; 4]> = (0..m)
        .map(|_| {
            [
                r.random_range(-2.0..2.0),
                r.random_range(-2.0..2.0),
                r.random_range(0.0..1.0),
                r.random_range(-1.0..1.0),
            ]
        })
        .collect();
    let space = capbern::capacity::GroundSpace::with_atoms(m).unwrap();
    RandomFunction::new("field", space, dim, move |x, w| {
        let [a, b, s, j] = coeffs[w];
        let y = x.get(1).copied().unwrap_or(0.0);
        a * (3.0 * x[0]).sin() + b * x[0] * y + if x[0] >= s { j } else { 0.0 }
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn capacities_are_monotone(seed in any::<u64>(), m in 1usize..=8, which in 0usize..3) {
        let cap = random_any(&mut rng(seed), m, which);
        let full = (1u64 << m) - 1;
        for b in 0..=full {
            let vb = cap.value(Subset::from_bits(b));
            let mut a = b;
            loop {
                prop_assert!(cap.value(Subset::from_bits(a)) <= vb + 1e-12);
                if a == 0 { break; }
                a = (a - 1) & b;
            }
        }
        prop_assert_eq!(cap.value(Subset::from_bits(0)), 0.0);
        prop_assert!((cap.value(cap.full()) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn possibility_unions_are_maxima(seed in any::<u64>(), m in 1usize..=10, a in any::<u64>(), b in any::<u64>()) {
        let cap = random_possibility(&mut rng(seed), m);
        let mask = (1u64 << m) - 1;
        let (a, b) = (Subset::from_bits(a & mask), Subset::from_bits(b & mask));
        prop_assert_eq!(cap.value(a.union(b)).to_bits(), cap.value(a).max(cap.value(b)).to_bits());
    }

    #[test]
    fn analytic_and_exhaustive_checks_agree(seed in any::<u64>(), m in 1usize..=10, distorted in any::<bool>()) {
        let mut r = rng(seed);
        let cap = if distorted { random_distorted(&mut r, m) } else { random_possibility(&mut r, m) };
        prop_assert_eq!(
            cap.check_properties(CheckMode::Analytic).unwrap(),
            cap.check_properties(CheckMode::Exhaustive).unwrap()
        );
    }

    #[test]
    fn integral_is_monotone(seed in any::<u64>(), m in 1usize..=10, which in 0usize..3) {
        let mut r = rng(seed);
        let cap = random_any(&mut r, m, which);
        let f = random_values(&mut r, m, -5.0, 5.0);
        let g: Vec<f64> = f.iter().map(|v| v + r.random_range(0.0..2.0)).collect();
        prop_assert!(integrate(&f, &cap, cap.full()) <= integrate(&g, &cap, cap.full()) + 1e-12);
    }

    #[test]
    fn ties_do_not_depend_on_order(seed in any::<u64>(), m in 2usize..=10, which in 0usize..3) {
        let mut r = rng(seed);
        let cap = random_any(&mut r, m, which);
        let levels = [r.random_range(-3.0..3.0), r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)];
        let f: Vec<f64> = (0..m).map(|_| levels[r.random_range(0..3)]).collect();
        let reference = integrate(&f, &cap, cap.full()).to_bits();
        let mut g = f.clone();
        for _ in 0..10 {
            for i in (1..m).rev() {
                let j = r.random_range(0..=i);
                if g[i] == g[j] {
                    g.swap(i, j);
                }
            }
            prop_assert_eq!(integrate(&g, &cap, cap.full()).to_bits(), reference);
        }
    }

    #[test]
    fn markov_inequality(seed in any::<u64>(), m in 1usize..=10, which in 0usize..3, a in 0.01f64..4.0) {
        let mut r = rng(seed);
        let cap = random_any(&mut r, m, which);
        let h = random_values(&mut r, m, 0.0, 5.0);
        let phi = |t: f64| t / (1.0 + t);
        let level = Subset::from_indices((0..m).filter(|&i| h[i] >= a));
        let transformed: Vec<f64> = h.iter().map(|&t| phi(t)).collect();
        let rhs = integrate(&transformed, &cap, cap.full()) / phi(a);
        prop_assert!(cap.value(level) <= rhs + 1e-12);
    }

    #[test]
    fn lp_triangle_inequality(seed in any::<u64>(), m in 1usize..=10, p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0])) {
        let mut r = rng(seed);
        let cap = random_submodular(&mut r, m);
        let f = AtomFunction::new(random_values(&mut r, m, -5.0, 5.0)).unwrap();
        let g = AtomFunction::new(random_values(&mut r, m, -5.0, 5.0)).unwrap();
        let sum = f.zip_with(&g, |a, b| a + b).unwrap();
        let lhs = choquet_lp_norm(&sum, &cap, p).unwrap();
        let rhs = choquet_lp_norm(&f, &cap, p).unwrap() + choquet_lp_norm(&g, &cap, p).unwrap();
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn basis_is_a_nonnegative_partition_of_unity(n in 1usize..=400, x in 0.0f64..=1.0) {
        let basis = bernstein_basis(n, x).unwrap();
        prop_assert!(basis.values().iter().all(|v| *v >= 0.0));
        prop_assert!((basis.sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bernstein_interpolates_endpoints(n in 1usize..=300, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let samples = node_samples(n, |x| a * (5.0 * x).sin() + b * x.sqrt());
        prop_assert_eq!(bernstein_univariate(&samples, 0.0).unwrap(), samples[0]);
        prop_assert_eq!(bernstein_univariate(&samples, 1.0).unwrap(), samples[n]);
    }

    #[test]
    fn order_statistics_are_sorted_uniforms(seed in any::<u64>(), n in 1usize..=200) {
        let row = sample_order_statistics(n, &SeededStream::new(seed, n as u64)).unwrap();
        let nodes = row.nodes();
        prop_assert_eq!(nodes.len(), n + 1);
        prop_assert!(nodes.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(nodes.iter().all(|y| (0.0..=1.0).contains(y)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn semi_metric_triangle_inequality(seed in any::<u64>(), m in 1usize..=6) {
        let mut r = rng(seed);
        let cap = random_submodular(&mut r, m);
        let grid = Grid::new(1, 17).unwrap();
        let (f, g, h) = (random_field(seed, m, 1), random_field(seed ^ 1, m, 1), random_field(seed ^ 2, m, 1));
        let fg = semi_metric(&f, &g, &cap, &grid).unwrap();
        let gh = semi_metric(&g, &h, &cap, &grid).unwrap();
        let fh = semi_metric(&f, &h, &cap, &grid).unwrap();
        prop_assert!(fh <= fg + gh + 1e-10);
    }

    #[test]
    fn choquet_modulus_grows_with_deltas(seed in any::<u64>(), m in 1usize..=5, p in prop::sample::select(vec![1.0, 2.0])) {
        let mut r = rng(seed);
        let cap = random_any(&mut r, m, seed as usize);
        let f = random_field(seed, m, 2);
        let grid = Grid::new(2, 11).unwrap();
        let modulus = ChoquetModulus::build(&f, &cap, p, &grid, &[0.5, 0.5]).unwrap();
        let steps = [0.0, 0.1, 0.2, 0.3, 0.5];
        for i in 0..steps.len() {
            for j in 0..steps.len() {
                let here = modulus.value(&[steps[i], steps[j]]).unwrap();
                if i + 1 < steps.len() {
                    prop_assert!(here <= modulus.value(&[steps[i + 1], steps[j]]).unwrap());
                }
                if j + 1 < steps.len() {
                    prop_assert!(here <= modulus.value(&[steps[i], steps[j + 1]]).unwrap());
                }
            }
        }
    }

    #[test]
    fn stochastic_modulus_grows_with_delta(seed in any::<u64>(), m in 1usize..=4) {
        let f = random_field(seed, m, 2);
        let grid = Grid::new(2, 11).unwrap();
        for w in 0..m {
            let mut last = 0.0;
            for delta in [0.0, 0.1, 0.15, 0.3, 0.6, 1.5] {
                let value = stochastic_modulus(&f, delta, w, &grid).unwrap();
                prop_assert!(value >= last);
                last = value;
            }
        }
    }
}
