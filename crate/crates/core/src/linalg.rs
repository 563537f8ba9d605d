//! Householder QR for tall, full-column-rank least-squares problems.

use crate::error::{Error, Result};

/// Relative rank tolerance: column `k` is rejected when `R_kk²` falls below
/// this fraction of the largest diagonal entry of `AᵀA`.
pub const RANK_TOL: f64 = 1e-12;

/// `A = QR` with `Q` stored as Householder reflectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Qr {
    rows: usize,
    cols: usize,
    // reflector k lives in rows k.. of column k; unit-norm
    reflectors: Vec<Vec<f64>>,
    // upper triangle, column-major: r[j][i] for i <= j
    r: Vec<Vec<f64>>,
}

impl Qr {
    /// Factorizes the matrix given by its columns.
    pub fn new(columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if cols == 0 || rows < cols {
            return Err(Error::InsufficientData { needed: cols.max(1), got: rows });
        }
        let scale = columns.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>()).fold(0.0, f64::max);
        let mut work: Vec<Vec<f64>> = columns.to_vec();
        let mut reflectors = Vec::with_capacity(cols);
        for k in 0..cols {
            let norm = work[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm * norm < RANK_TOL * scale || norm == 0.0 {
                return Err(Error::SingularDesign { column: k });
            }
            let alpha = if work[k][k] > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = work[k][k..].to_vec();
            v[0] -= alpha;
            let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= vnorm;
            }
            for col in work.iter_mut().skip(k) {
                reflect(&v, &mut col[k..]);
            }
            reflectors.push(v);
        }
        let r = (0..cols).map(|j| work[j][..=j].to_vec()).collect();
        Ok(Self { rows, cols, reflectors, r })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `argmin_β ‖Aβ − b‖`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let mut y = b.to_vec();
        for (k, v) in self.reflectors.iter().enumerate() {
            reflect(v, &mut y[k..]);
        }
        let mut beta = vec![0.0; self.cols];
        for i in (0..self.cols).rev() {
            let mut s = y[i];
            for j in i + 1..self.cols {
                s -= self.r[j][i] * beta[j];
            }
            beta[i] = s / self.r[i][i];
        }
        Ok(beta)
    }

    /// Diagonal of `(AᵀA)⁻¹ = R⁻¹R⁻ᵀ`.
    pub fn inverse_gram_diagonal(&self) -> Vec<f64> {
        let p = self.cols;
        // columns of R⁻¹ by back substitution against unit vectors
        let mut rinv = vec![vec![0.0; p]; p];
        for e in 0..p {
            for i in (0..=e).rev() {
                let mut s = if i == e { 1.0 } else { 0.0 };
                for j in i + 1..=e {
                    s -= self.r[j][i] * rinv[e][j];
                }
                rinv[e][i] = s / self.r[i][i];
            }
        }
        (0..p).map(|k| (k..p).map(|e| rinv[e][k] * rinv[e][k]).sum()).collect()
    }
}

fn reflect(v: &[f64], x: &mut [f64]) {
    let d: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= 2.0 * d * vi;
    }
}
