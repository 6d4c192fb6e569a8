use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};

/// Number type for coverage values. Coverage is a ratio of counts, so every
/// implementation only needs to build `num / den` and report an `f64`.
pub trait CoverageScalar: Clone + PartialOrd + Num + Debug + Send + Sync + 'static {
    fn ratio(num: u128, den: u128) -> Self;
    fn to_f64(&self) -> f64;
}

impl CoverageScalar for f64 {
    fn ratio(num: u128, den: u128) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl CoverageScalar for f32 {
    fn ratio(num: u128, den: u128) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl CoverageScalar for Ratio<i64> {
    fn ratio(num: u128, den: u128) -> Self {
        let g = gcd(num, den);
        Ratio::new(
            i64::try_from(num / g).expect("numerator fits in i64"),
            i64::try_from(den / g).expect("denominator fits in i64"),
        )
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl CoverageScalar for BigRational {
    fn ratio(num: u128, den: u128) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

pub(crate) fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}
