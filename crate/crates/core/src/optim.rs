//! Box-constrained Nelder–Mead simplex descent and start-point generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexCoefficients {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
}

impl Default for SimplexCoefficients {
    fn default() -> Self {
        Self { reflection: 1.0, expansion: 2.0, contraction: 0.5, shrink: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` inside the box `[lower, upper]`, starting from a simplex
/// around `start` with per-axis edge `step`. Trial points are projected onto
/// the box. Stops when the simplex diameter (largest vertex distance from
/// the best vertex) drops below `tol` or after `budget` evaluations.
#[allow(clippy::too_many_arguments)]
pub fn nelder_mead<F>(
    f: &F,
    start: &[f64],
    step: &[f64],
    lower: &[f64],
    upper: &[f64],
    tol: f64,
    budget: usize,
    coef: SimplexCoefficients,
) -> SimplexOutcome
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let k = start.len();
    let clamp = |p: &mut Vec<f64>| {
        for i in 0..k {
            p[i] = p[i].clamp(lower[i], upper[i]);
        }
    };
    let evals = std::cell::Cell::new(0usize);
    let eval = |p: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    let mut x0 = start.to_vec();
    clamp(&mut x0);
    simplex.push(x0.clone());
    for i in 0..k {
        let mut v = x0.clone();
        // step toward the interior when the forward vertex would leave the box
        v[i] = if x0[i] + step[i] <= upper[i] { x0[i] + step[i] } else { x0[i] - step[i] };
        clamp(&mut v);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();

    loop {
        let mut order: Vec<usize> = (0..=k).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if diameter < tol {
            return SimplexOutcome { point: simplex[0].clone(), value: values[0], evaluations: evals.get(), converged: true };
        }
        if evals.get() >= budget {
            return SimplexOutcome { point: simplex[0].clone(), value: values[0], evaluations: evals.get(), converged: false };
        }

        let centroid: Vec<f64> =
            (0..k).map(|i| simplex[..k].iter().map(|v| v[i]).sum::<f64>() / k as f64).collect();
        let toward = |t: f64| {
            let mut p: Vec<f64> = (0..k).map(|i| centroid[i] + t * (simplex[k][i] - centroid[i])).collect();
            clamp(&mut p);
            p
        };

        let xr = toward(-coef.reflection);
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = toward(-coef.reflection * coef.expansion);
            let fe = eval(&xe);
            if fe < fr {
                simplex[k] = xe;
                values[k] = fe;
            } else {
                simplex[k] = xr;
                values[k] = fr;
            }
            continue;
        }
        if fr < values[k - 1] {
            simplex[k] = xr;
            values[k] = fr;
            continue;
        }
        // contraction: outside if the reflected point improved on the worst
        let (xc, fc) = if fr < values[k] {
            let xc = toward(-coef.reflection * coef.contraction);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(coef.contraction);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[k].min(fr) {
            simplex[k] = xc;
            values[k] = fc;
            continue;
        }
        for j in 1..=k {
            let mut p: Vec<f64> = (0..k).map(|i| simplex[0][i] + coef.shrink * (simplex[j][i] - simplex[0][i])).collect();
            clamp(&mut p);
            values[j] = eval(&p);
            simplex[j] = p;
        }
    }
}

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

/// `count` points of a randomly shifted Halton sequence in `[0,1)^dims`.
/// The shift is drawn from a generator seeded with `seed`.
pub fn shifted_halton(count: usize, dims: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dims).map(|_| rng.random::<f64>()).collect();
    (1..=count as u64)
        .map(|i| {
            (0..dims)
                .map(|d| {
                    let base = PRIMES.get(d).copied().unwrap_or_else(|| nth_prime(d));
                    (radical_inverse(i, base) + shift[d]).fract()
                })
                .collect()
        })
        .collect()
}

fn nth_prime(n: usize) -> u32 {
    let mut found = 0;
    let mut c = 1u32;
    loop {
        c += 1;
        if (2..c).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            if found == n {
                return c;
            }
            found += 1;
        }
    }
}
