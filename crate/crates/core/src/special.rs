//! Gaussian helpers shared by the observable and simulation code.

use libm::erfc;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal CDF.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal upper tail `1 - Φ(z)`, accurate for large `z`.
pub fn std_normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// `Φ(b) - Φ(a)` for `a <= b`, computed on the side of zero that avoids
/// cancellation.
pub fn std_normal_interval(a: f64, b: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let p = if a >= 0.0 {
        std_normal_sf(a) - std_normal_sf(b)
    } else if b <= 0.0 {
        std_normal_cdf(b) - std_normal_cdf(a)
    } else {
        1.0 - std_normal_cdf(a) - std_normal_sf(b)
    };
    p.clamp(0.0, 1.0)
}

/// log of the N(mean, sd²) density at `x`.
pub fn normal_ln_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - LN_SQRT_2PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_points() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        let q = std_normal_cdf(1.959_963_984_540_054);
        assert!((q - 0.975).abs() < 1e-15, "{:e}", q - 0.975);
        assert!((std_normal_sf(8.0) - 6.220_960_574_271_785e-16).abs() < 1e-28);
    }

    #[test]
    fn interval_sides_agree() {
        for &(a, b) in &[(-1.0, 1.0), (0.5, 2.0), (-3.0, -0.25), (-0.1, 40.0)] {
            let direct = std_normal_cdf(b) - std_normal_cdf(a);
            assert!((std_normal_interval(a, b) - direct).abs() < 1e-15);
        }
        assert_eq!(std_normal_interval(2.0, 1.0), 0.0);
        assert_eq!(std_normal_interval(f64::NEG_INFINITY, f64::INFINITY), 1.0);
    }
}
