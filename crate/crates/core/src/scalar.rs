//! Scalar abstraction shared by every probability-valued computation.
//!
//! Analytic bounds, channel parameters and estimates are written once against
//! [`Real`] and instantiated at `f64` (the default) or `f32`. Exact quantities
//! (oracle probabilities, hypergeometric tails) use [`num_rational::BigRational`]
//! and are converted with [`Real::from_ratio`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by bounds, channels and estimators.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn from_count(v: u64) -> Self {
        Self::from_u64(v).expect("count fits in scalar")
    }

    /// Nearest scalar to an exact rational.
    fn from_ratio(r: &BigRational) -> Self {
        // numerator and denominator may overflow f64 individually
        let f = r.to_f64().unwrap_or_else(|| ratio_to_f64_scaled(r.numer(), r.denom()));
        Self::lit(f)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Clamp into the unit interval.
    #[inline]
    fn clamp_unit(self) -> Self {
        self.max(Self::zero()).min(Self::one())
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {}

fn ratio_to_f64_scaled(num: &BigInt, den: &BigInt) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(900);
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn ratio_conversion_handles_huge_terms() {
        let big = BigInt::one() << 3000u32;
        let r = BigRational::new(big.clone() * 3, big * 4);
        assert_eq!(f64::from_ratio(&r), 0.75);
        assert_eq!(f32::from_ratio(&r), 0.75f32);
    }

    #[test]
    fn clamp_unit_bounds() {
        assert_eq!(1.7f64.clamp_unit(), 1.0);
        assert_eq!((-0.2f32).clamp_unit(), 0.0);
        assert_eq!(0.3f64.clamp_unit(), 0.3);
    }
}
