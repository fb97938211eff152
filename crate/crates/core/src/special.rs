//! Special functions used by the distribution code.
//!
//! Error functions come from `libm` (the `statrs` erfc is only good to about
//! 1e-10); gamma and beta functions from `statrs`.

use statrs::function::{beta, erf as statrs_erf, gamma};

pub use statrs::function::gamma::ln_gamma;

pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x + 1/2) − ln Γ(x)`.
pub fn ln_gamma_half_ratio(x: f64) -> f64 {
    ln_gamma(x + 0.5) - ln_gamma(x)
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

pub fn std_normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let mut z = -std::f64::consts::SQRT_2 * statrs_erf::erfc_inv(2.0 * p);
    for _ in 0..2 {
        let pdf = (-0.5 * z * z - LN_SQRT_2PI).exp();
        if pdf > 0.0 {
            // Newton on the smaller tail keeps relative precision
            let resid = if z < 0.0 {
                std_normal_cdf(z) - p
            } else {
                (1.0 - p) - std_normal_cdf(-z)
            };
            z -= if z < 0.0 { resid / pdf } else { -resid / pdf };
        }
    }
    z
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Inverse error function on `[0, 1)`, refined by Newton steps.
pub fn erf_inv(p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let mut y = statrs_erf::erf_inv(p);
    for _ in 0..2 {
        let d = FRAC_2_SQRT_PI * (-y * y).exp();
        if d > 0.0 {
            let resid = if p > 0.5 {
                (1.0 - p) - libm::erfc(y)
            } else {
                libm::erf(y) - p
            };
            y -= if p > 0.5 { -resid / d } else { resid / d };
        }
    }
    y
}

/// `P(|T| ≤ z)` for a standard Student-t variate with `df` degrees of freedom.
pub fn student_t_abs_cdf(z: f64, df: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if z.is_infinite() {
        return 1.0;
    }
    let z2 = z * z;
    let x = z2 / (df + z2);
    if x < 0.5 {
        beta::beta_reg(0.5, 0.5 * df, x)
    } else {
        1.0 - beta::beta_reg(0.5 * df, 0.5, df / (df + z2))
    }
}

/// Upper regularized incomplete gamma `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    gamma::gamma_ur(a, x)
}

/// Lower regularized incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    gamma::gamma_lr(a, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_quantile_round_trips() {
        for &p in &[1e-10, 0.001, 0.025, 0.5, 0.9, 0.975, 0.999_999] {
            let z = std_normal_quantile(p);
            assert!((std_normal_cdf(z) - p).abs() < 1e-14 * p.max(1e-3) * 10.0);
        }
        let z = std_normal_quantile(0.975);
        assert!((z - 1.959_963_984_540_054).abs() < 1e-12, "{z:.17}");
    }

    #[test]
    fn t_abs_cdf_matches_cauchy_for_one_df() {
        for &z in &[0.1f64, 1.0, 12.706_204_736_174_7] {
            let expected = 2.0 / std::f64::consts::PI * z.atan();
            assert!((student_t_abs_cdf(z, 1.0) - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn half_ratio_small_and_large() {
        // Γ(1)/Γ(1/2) = 1/√π
        assert!((ln_gamma_half_ratio(0.5) + 0.5 * std::f64::consts::PI.ln()).abs() < 1e-13);
        // asymptotically ½ ln x
        let x = 1e6;
        assert!((ln_gamma_half_ratio(x) - 0.5 * x.ln() + 1.0 / (8.0 * x)).abs() < 1e-8);
    }
}
