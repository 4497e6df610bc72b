use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficient ring for truncated series.
///
/// `Zero`/`One` supply the identities. Every scalar type is a commutative ring containing the rationals, so
/// `scale` and `from_rational` are always available. `inv` returns `None`
/// for non-units.
pub trait Scalar: Zero + One + Clone + PartialEq + Debug + Send + Sync {
    fn from_rational(r: &BigRational) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    fn inv(&self) -> Option<Self>;
}

/// Shorthand for `n/d` as a `BigRational`.
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}
