//! Binomial confidence intervals.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::scalar::Real;

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Upper standard-normal quantile `z` with `P(Z > z) = tail`.
pub fn normal_upper_quantile(tail: f64) -> f64 {
    assert!(tail > 0.0 && tail < 1.0, "tail probability {tail} out of range");
    let std = Normal::new(0.0, 1.0).expect("standard normal");
    -std.inverse_cdf(tail)
}

/// Wilson score interval for `failures` out of `trials` at normal quantile `z`.
pub fn wilson<T: Real>(failures: u64, trials: u64, z: f64) -> (T, T) {
    assert!(trials > 0 && failures <= trials);
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if failures == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if failures == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (T::lit(lo.min(phat)), T::lit(hi.max(phat)))
}

/// The interval every estimate reports: Wilson at 99%, or `[0, 1 - 0.01^{1/trials}]`
/// when nothing failed.
pub fn interval_99<T: Real>(failures: u64, trials: u64) -> (T, T) {
    if failures == 0 {
        (T::zero(), zero_failure_upper(trials, 0.01))
    } else {
        wilson(failures, trials, Z_99)
    }
}

/// Exact one-sided Clopper–Pearson upper limit for zero observed failures:
/// `1 - tail^{1/trials}`.
pub fn zero_failure_upper<T: Real>(trials: u64, tail: f64) -> T {
    T::lit(1.0 - tail.powf(1.0 / trials as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quantiles() {
        assert_relative_eq!(normal_upper_quantile(0.005), Z_99, epsilon = 1e-8);
        assert_relative_eq!(normal_upper_quantile(0.025), 1.959_963_984_540_054, epsilon = 1e-8);
        assert_relative_eq!(normal_upper_quantile(0.5), 0.0, epsilon = 1e-12);
        assert_relative_eq!(normal_upper_quantile(1e-6), 4.753_424_308_822_899, epsilon = 1e-7);
    }

    #[test]
    fn wilson_known_values() {
        // 10 of 100 at z = 1.96: [0.0552, 0.1744]
        let (lo, hi): (f64, f64) = wilson(10, 100, 1.959_963_984_540_054);
        assert_relative_eq!(lo, 0.055_229, epsilon = 1e-5);
        assert_relative_eq!(hi, 0.174_366, epsilon = 1e-5);
        let (lo, hi): (f64, f64) = wilson(0, 50, Z_99);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
        let (lo, hi): (f64, f64) = wilson(50, 50, Z_99);
        assert!(lo < 1.0);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn zero_failure_upper_limit() {
        let u: f64 = zero_failure_upper(100_000, 0.01);
        assert_relative_eq!(u, 4.605_e-5, max_relative = 1e-3);
    }
}
