//! Fixtures shared by the benchmarks.

use mtreg_core::Design;

/// Deterministic design and response with `n` rows and `m` explanatory columns.
pub fn fixture(n: usize, m: usize) -> (Design, Vec<f64>) {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..m).map(|j| ((i * (j + 3) + 7 * j) % 17) as f64 + 0.01 * i as f64).collect())
        .collect();
    let x = rows
        .iter()
        .enumerate()
        .map(|(i, r)| 1.0 + r.iter().sum::<f64>() + ((i * 31) % 11) as f64 * 0.1)
        .collect();
    (Design::new(&rows).expect("fixture design is full rank"), x)
}
