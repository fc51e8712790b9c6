//! Scalar abstraction shared by every numeric module.
//!
//! The floating-point side of the library is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Combinatorial factors (binomials, central
//! binomials, Gaussian moment numbers) are carried as [`Exact`] rationals and
//! converted to the working scalar as late as possible.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Exact rational used for combinatorial coefficients and bracket exponents.
pub type Exact = Ratio<i64>;

/// Floating-point scalar the numeric kernels are written against.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Conversion from an exact rational.
    fn from_exact(q: Exact) -> Self {
        Self::lit(*q.numer() as f64) / Self::lit(*q.denom() as f64)
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    /// `self^q` for a rational exponent, with integer exponents going through `powi`
    /// so that `0^0 = 1` and negative bases stay well defined.
    fn pow_exact(self, q: Exact) -> Self {
        if q.is_integer() {
            self.powi(q.to_integer() as i32)
        } else {
            self.powf(Self::from_exact(q))
        }
    }

    /// Relative tolerance floor attainable in this precision.
    fn tol_floor() -> Self {
        Self::epsilon() * Self::lit(64.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc * (n as i128 - i) / (i + 1);
    }
    i64::try_from(acc).expect("binomial coefficient overflows i64")
}

/// `C(n, k)` as an exact rational.
pub fn binomial_exact(n: u32, k: u32) -> Exact {
    Exact::from_integer(binomial(n, k))
}

/// `n!` as an exact integer. Panics beyond `20!`.
pub fn factorial(n: u32) -> i64 {
    assert!(n <= 20, "factorial({n}) overflows i64");
    (1..=n as i64).product()
}

/// `2^-e` exactly.
pub fn inv_pow2(e: u32) -> Exact {
    Exact::new(1, 1i64 << e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(3, 5), 0);
        // Pascal rule up to the coefficient-table limit
        for n in 1..=32 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn rational_powers() {
        assert_eq!(0.0f64.pow_exact(Exact::from_integer(0)), 1.0);
        assert!((4.0f64.pow_exact(Exact::new(3, 2)) - 8.0).abs() < 1e-15);
        assert_eq!((-2.0f64).pow_exact(Exact::from_integer(3)), -8.0);
        assert_eq!(f32::from_exact(Exact::new(3, 8)), 0.375f32);
    }
}
