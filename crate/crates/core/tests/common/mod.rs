//! Reference computations that share no code with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Adaptive Simpson quadrature on a finite interval.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

pub fn gauss_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

/// `P(lo ≤ X ≤ hi)` for `X ~ N(mu, sigma²)` by quadrature; infinite ends are
/// cut at 40 standard deviations.
pub fn gauss_prob(mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    let lo = lo.max(mu - 40.0 * sigma);
    let hi = hi.min(mu + 40.0 * sigma);
    if lo >= hi {
        return 0.0;
    }
    // split at the mode so the peak is a node
    let f = |x: f64| gauss_pdf(x, mu, sigma);
    if lo < mu && mu < hi {
        simpson(&f, lo, mu, 1e-15) + simpson(&f, mu, hi, 1e-15)
    } else {
        simpson(&f, lo, hi, 1e-15)
    }
}

/// Normalizing constant of the Student-t density for integer `df`, from the
/// recursion Γ((v+3)/2)/Γ((v+2)/2) = Γ((v+1)/2)/Γ(v/2) · (v+1)/v.
pub fn t_norm_const(df: u32) -> f64 {
    let pi = std::f64::consts::PI;
    let mut ratio = if df % 2 == 1 { 1.0 / pi.sqrt() } else { pi.sqrt() / 2.0 };
    let mut v = if df % 2 == 1 { 1 } else { 2 };
    while v < df {
        ratio *= (v as f64 + 1.0) / v as f64;
        v += 2;
    }
    ratio / (df as f64 * pi).sqrt()
}

pub fn t_pdf(t: f64, df: u32) -> f64 {
    let v = df as f64;
    t_norm_const(df) * (1.0 + t * t / v).powf(-(v + 1.0) / 2.0)
}

/// Student-t CDF by quadrature of the density from 0.
pub fn t_cdf(t: f64, df: u32) -> f64 {
    let half = simpson(&|u| t_pdf(u, df), 0.0, t.abs(), 1e-14);
    if t >= 0.0 {
        0.5 + half
    } else {
        0.5 - half
    }
}

/// Solves `M y = r` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut m: Vec<Vec<f64>>, mut r: Vec<f64>) -> Vec<f64> {
    let p = r.len();
    for c in 0..p {
        let piv = (c..p).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, piv);
        r.swap(c, piv);
        for i in c + 1..p {
            let f = m[i][c] / m[c][c];
            for j in c..p {
                m[i][j] -= f * m[c][j];
            }
            r[i] -= f * r[c];
        }
    }
    let mut y = vec![0.0; p];
    for c in (0..p).rev() {
        let s: f64 = (c + 1..p).map(|j| m[c][j] * y[j]).sum();
        y[c] = (r[c] - s) / m[c][c];
    }
    y
}

/// Least squares through the normal equations `AᵀA β = Aᵀx`; `rows` excludes
/// the intercept column. Returns `(β̂, mean squared residual)`.
pub fn normal_equations(rows: &[Vec<f64>], x: &[f64]) -> (Vec<f64>, f64) {
    let aug: Vec<Vec<f64>> = rows.iter().map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect()).collect();
    let p = aug[0].len();
    let gram: Vec<Vec<f64>> =
        (0..p).map(|i| (0..p).map(|j| aug.iter().map(|r| r[i] * r[j]).sum()).collect()).collect();
    let rhs: Vec<f64> = (0..p).map(|i| aug.iter().zip(x).map(|(r, v)| r[i] * v).sum()).collect();
    let beta = gauss_solve(gram, rhs);
    let mse = aug
        .iter()
        .zip(x)
        .map(|(r, v)| {
            let e = v - r.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>();
            e * e
        })
        .sum::<f64>()
        / x.len() as f64;
    (beta, mse)
}

/// Random simple-regression instance `(a, x)` with Gaussian noise.
pub fn simple_instance<R: Rng>(rng: &mut R, n: usize) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let (b0, b1, s) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(0.1..2.0));
    let x = a.iter().map(|ai| b0 + b1 * ai + s * standard_normal(rng)).collect();
    (a, x)
}

/// Box–Muller draw, independent of the library's samplers.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
