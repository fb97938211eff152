use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

const MAX_STEP_OUTS: usize = 50;
const MAX_SHRINKS: usize = 10_000;

/// Default bracket width for a parameter whose typical magnitude is `x`.
pub(crate) fn width_for(x: f64) -> f64 {
    x.abs() + 0.1
}

/// One univariate slice-sampling update (stepping out with bracket width
/// `w`, then shrinkage) of `x0` under log density `logf` restricted to
/// `[lo, hi]`. The update leaves the target invariant only if `w` does not
/// depend on `x0`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn slice_sample<R, F>(
    rng: &mut R,
    x0: f64,
    logf_x0: f64,
    mut logf: F,
    lo: f64,
    hi: f64,
    w: f64,
) -> Result<f64>
where
    R: Rng + ?Sized,
    F: FnMut(f64) -> f64,
{
    if !logf_x0.is_finite() {
        return Err(Error::Numerical {
            op: "slice_sample",
            context: format!("log density {logf_x0} at x = {x0}"),
        });
    }
    let e: f64 = rng.sample(Exp1);
    let level = logf_x0 - e;

    let u: f64 = rng.random();
    let mut left = x0 - w * u;
    let mut right = left + w;
    let v: f64 = rng.random();
    let mut j = (MAX_STEP_OUTS as f64 * v) as usize;
    let mut k = MAX_STEP_OUTS - 1 - j;
    while j > 0 && left > lo && logf(left) > level {
        left -= w;
        j -= 1;
    }
    while k > 0 && right < hi && logf(right) > level {
        right += w;
        k -= 1;
    }
    left = left.max(lo);
    right = right.min(hi);

    for _ in 0..MAX_SHRINKS {
        let u: f64 = rng.random();
        let x1 = left + u * (right - left);
        if logf(x1) > level {
            return Ok(x1);
        }
        if x1 < x0 {
            left = x1;
        } else {
            right = x1;
        }
    }
    Err(Error::Numerical {
        op: "slice_sample",
        context: format!("shrinkage did not terminate around x = {x0} in [{left}, {right}]"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain(logf: impl Fn(f64) -> f64, x0: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut x = x0;
        let w = width_for(x0);
        (0..n)
            .map(|_| {
                x = slice_sample(&mut rng, x, logf(x), &logf, lo, hi, w).unwrap();
                x
            })
            .collect()
    }

    #[test]
    fn standard_normal_moments() {
        let xs = chain(
            |x| -0.5 * x * x,
            0.3,
            f64::NEG_INFINITY,
            f64::INFINITY,
            200_000,
        );
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(m.abs() < 0.02, "mean {m}");
        assert!((v - 1.0).abs() < 0.03, "var {v}");
    }

    #[test]
    fn respects_half_line_and_reaches_boundary() {
        let xs = chain(
            |x| -0.5 * (x / 0.01).powi(2),
            0.5,
            0.0,
            f64::INFINITY,
            50_000,
        );
        assert!(xs.iter().all(|&x| x >= 0.0));
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        // half-normal(0.01) mean
        assert!(
            (m - 0.01 * (2.0 / std::f64::consts::PI).sqrt()).abs() < 3e-4,
            "mean {m}"
        );
    }

    #[test]
    fn uniform_on_bounded_support() {
        let xs = chain(|_| 0.0, 2.0, 0.0, 10.0, 100_000);
        assert!(xs.iter().all(|&x| (0.0..=10.0).contains(&x)));
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((m - 5.0).abs() < 0.1, "mean {m}");
    }

    #[test]
    fn non_finite_start_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(slice_sample(&mut rng, -1.0, f64::NEG_INFINITY, |_| 0.0, 0.0, 1.0, 1.0).is_err());
    }
}
