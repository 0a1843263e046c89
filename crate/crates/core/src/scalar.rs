//! Scalar abstraction over the two arithmetic backends.
//!
//! All measure and circle arithmetic is generic over [`Scalar`]. The `f64`
//! backend snaps coincidence tests to `1e-12` and accumulates masses with
//! compensated summation; the [`Exact`](crate::Exact) backend (arbitrary
//! precision rationals) keeps every mass and breakpoint exact. Entropy
//! itself always leaves the scalar domain through [`Scalar::to_f64`] at the
//! final logarithm.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Snapping tolerance for floating-point circle and mass comparisons.
pub const FLOAT_SNAP: f64 = 1e-12;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Running-sum state for mass aggregation.
    type Acc: Default + Clone + Send;

    /// Whether this backend is exact (no snapping, no rounding).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// Reduce into `[0, 1)`.
    fn mod_one(&self) -> Self;

    /// Total order (inputs are never NaN by construction).
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Value coincidence under the backend's snapping rule.
    fn coincides(&self, other: &Self) -> bool;

    fn acc_add(acc: &mut Self::Acc, v: &Self);
    fn acc_total(acc: &Self::Acc) -> Self;

    /// Coincidence of two circle points in `[0, 1)`, wraparound-aware.
    fn circle_coincides(&self, other: &Self) -> bool {
        if self.coincides(other) {
            return true;
        }
        let one = Self::one();
        self.clone().add(one.clone()).coincides(other) || other.clone().add(one).coincides(self)
    }

    fn half(&self) -> Self {
        self.clone() * Self::from_ratio(1, 2)
    }
}

/// Kahan compensated accumulator for the `f64` backend.
#[derive(Default, Clone, Copy, Debug)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}

impl Scalar for f64 {
    type Acc = Kahan;
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn mod_one(&self) -> Self {
        let r = self.rem_euclid(1.0);
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }

    fn coincides(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_SNAP
    }

    fn acc_add(acc: &mut Self::Acc, v: &Self) {
        acc.add(*v);
    }

    fn acc_total(acc: &Self::Acc) -> Self {
        acc.total()
    }
}

impl Scalar for BigRational {
    type Acc = BigRational;
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn mod_one(&self) -> Self {
        self - self.floor()
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn coincides(&self, other: &Self) -> bool {
        self == other
    }

    fn acc_add(acc: &mut Self::Acc, v: &Self) {
        *acc += v;
    }

    fn acc_total(acc: &Self::Acc) -> Self {
        acc.clone()
    }
}
