use capbern::stochastic::{sample_order_statistics, SeededStream, TriangularArrayRow};
use rayon::prelude::*;

const ROWS: usize = 100_000;

fn mean_rows(n: usize, seed: u64) -> Vec<f64> {
    let sums = (0..ROWS)
        .into_par_iter()
        .map(|s| {
            let row: TriangularArrayRow = sample_order_statistics(n, &SeededStream::for_sample(seed, n, s)).unwrap();
            row.nodes().to_vec()
        })
        .reduce(
            || vec![0.0; n + 1],
            |mut acc, row| {
                for (a, y) in acc.iter_mut().zip(row) {
                    *a += y;
                }
                acc
            },
        );
    sums.into_iter().map(|s| s / ROWS as f64).collect()
}

fn check_means(n: usize, seed: u64, sigmas: f64) {
    let means = mean_rows(n, seed);
    let total = (n + 2) as f64;
    for (k, mean) in means.iter().enumerate() {
        let (a, b) = ((k + 1) as f64, (n + 1 - k) as f64);
        let expected = a / total;
        let sigma = (a * b / (total * total * (total + 1.0)) / ROWS as f64).sqrt();
        assert!(
            (mean - expected).abs() <= sigmas * sigma,
            "n={n}, k={k}: mean {mean} vs {expected} (sigma {sigma})"
        );
    }
}

#[test]
fn order_statistic_means_within_three_sigma() {
    check_means(10, 42, 3.0);
}

/// 65 simultaneous comparisons, so the per-comparison width is Bonferroni-adjusted.
#[test]
fn order_statistic_means_across_degrees() {
    for n in [1, 10, 50] {
        check_means(n, 42, 4.0);
    }
}

#[test]
fn substreams_are_reproducible_and_distinct() {
    let a = sample_order_statistics(20, &SeededStream::for_sample(9, 20, 3)).unwrap();
    let b = sample_order_statistics(20, &SeededStream::for_sample(9, 20, 3)).unwrap();
    let c = sample_order_statistics(20, &SeededStream::for_sample(9, 20, 4)).unwrap();
    assert_eq!(a.nodes(), b.nodes());
    assert_ne!(a.nodes(), c.nodes());
}
