//! Scalar abstractions.
//!
//! [`Scalar`] is the field the closed-form probability formulas are evaluated
//! in. It is implemented for `f32`, `f64` and [`BigRational`] so that formulas
//! with rational inputs can be checked exactly. [`Real`] adds the
//! transcendental operations needed for amplitudes and square roots and is
//! implemented for the two float types only.

use std::fmt::{Debug, Display, LowerExp};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, Signed, ToPrimitive, Zero};

pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    /// Converts the exact ratio `num / den` (with `den > 0`).
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self;

    fn from_count(v: u64) -> Self {
        Self::from_ratio(&BigUint::from(v), &BigUint::from(1u32))
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            Self::zero() - self.clone()
        } else {
            self.clone()
        }
    }

    /// `self^exp` by repeated squaring.
    fn pow_u(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Float conversion of `num / den` that survives operands beyond the `f64`
/// exponent range.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let (nm, ne) = mantissa_exp(num);
    let (dm, de) = mantissa_exp(den);
    let exp = ne - de;
    let q = nm / dm;
    if exp > i32::MAX as i64 {
        f64::INFINITY
    } else if exp < i32::MIN as i64 {
        0.0
    } else {
        // two stages avoid an intermediate overflow of 2^exp
        let half = (exp / 2) as i32;
        q * 2f64.powi(half) * 2f64.powi(exp as i32 - half)
    }
}

/// `v ≈ m·2^e` with `m` holding the top 64 bits.
fn mantissa_exp(v: &BigUint) -> (f64, i64) {
    let bits = v.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (v >> shift as usize).to_u64().unwrap_or(u64::MAX);
    (top as f64, shift)
}

impl Scalar for f64 {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        ratio_to_f64(num, den)
    }
    fn from_count(v: u64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        ratio_to_f64(num, den) as f32
    }
    fn from_count(v: u64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

/// Floating-point scalar for amplitudes.
pub trait Real:
    Scalar
    + Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + Display
    + LowerExp
    + 'static
{
    /// Tolerance on the squared norm of a state.
    fn norm_tol() -> Self;
    /// Tolerance for cross-checks between two computation routes.
    fn verify_tol() -> Self;

    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("literal fits the float type")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn norm_tol() -> Self {
        1e-12
    }
    fn verify_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn norm_tol() -> Self {
        1e-5
    }
    fn verify_tol() -> Self {
        1e-4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_conversion_handles_huge_operands() {
        let big = BigUint::from(3u32).pow(1000);
        let bigger = &big * BigUint::from(4u32);
        let r = f64::from_ratio(&big, &bigger);
        assert!((r - 0.25).abs() < 1e-15);
        let r = f64::from_ratio(&BigUint::from(1u32), &BigUint::from(3u32));
        assert!((r - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn rational_is_exact() {
        let third = BigRational::from_ratio(&BigUint::from(1u32), &BigUint::from(3u32));
        let sum = third.clone() + third.clone() + third;
        assert_eq!(sum, BigRational::from_count(1));
        assert_eq!(BigRational::from_count(2).pow_u(10), BigRational::from_count(1024));
    }
}
