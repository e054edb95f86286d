//! Numeric abstractions shared by every module.
//!
//! Combinatorial code (graph operators, lattice reduction, exact oracles) is
//! written against [`Scalar`], which admits both IEEE floats and exact
//! rationals. Code that needs transcendental functions (multiplicative
//! weights, embeddings) is written against [`Real`].

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, NumAssign, Signed, ToPrimitive};

/// An ordered field element: `f32`, `f64` or an exact rational.
pub trait Scalar:
    Copy
    + Debug
    + PartialOrd
    + Num
    + NumAssign
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Send
    + Sync
    + 'static
{
    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar")
    }

    /// Exact power of two, `2^e` for any integer `e`.
    fn pow2(e: i32) -> Self {
        let mut v = Self::one();
        let base = if e >= 0 { Self::two() } else { Self::half() };
        for _ in 0..e.unsigned_abs() {
            v *= base;
        }
        v
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Copy
        + Debug
        + PartialOrd
        + Num
        + NumAssign
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Send
        + Sync
        + 'static
{
}

/// Floating point scalar (`f32` or `f64`).
pub trait Real: Scalar + Float {
    fn of_f64(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite f64")
    }
}

impl<T: Scalar + Float> Real for T {}

/// Pairwise (cascade) summation; the result does not depend on how callers
/// chunk the input and the rounding error grows as O(log n).
pub fn pairwise_sum<F: Scalar>(values: &[F]) -> F {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().copied().fold(F::zero(), |a, b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn l1_norm<F: Scalar>(v: &[F]) -> F {
    let abs: Vec<F> = v.iter().map(|x| x.abs()).collect();
    pairwise_sum(&abs)
}

pub fn linf_norm<F: Scalar>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |m, x| m.max_of(x.abs()))
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let prods: Vec<F> = a.iter().zip(b).map(|(x, y)| *x * *y).collect();
    pairwise_sum(&prods)
}

pub fn is_zero_vec<F: Scalar>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}
