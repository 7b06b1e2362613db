//! Floating-point scalar abstraction.
//!
//! All numerics in this crate are generic over [`Real`], which is implemented
//! for `f32` and `f64`. Tolerances quoted in the documentation assume `f64`;
//! `f32` works but with correspondingly coarser accuracy.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftNum;

/// Scalar types that can be drawn from a standard normal distribution.
pub trait GaussianSample: Sized {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl GaussianSample for f32 {
    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl GaussianSample for f64 {
    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

/// Scalar type for all numerics: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + FftNum
    + GaussianSample
    + Send
    + Sync
    + 'static
{
    /// Lifts an `f64` constant into this type.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }

    /// Converts to `f64` for formatting and cross-precision comparisons.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn of_round_trips_constants() {
        assert_eq!(f64::of(0.25), 0.25);
        assert_eq!(f32::of(0.25), 0.25f32);
        assert_eq!(f64::of(1e-12).as_f64(), 1e-12);
    }

    #[test]
    fn normal_sampling_is_seed_deterministic() {
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..16 {
            let x: f64 = GaussianSample::standard_normal(&mut a);
            let y: f64 = GaussianSample::standard_normal(&mut b);
            assert_eq!(x, y);
        }
    }
}
