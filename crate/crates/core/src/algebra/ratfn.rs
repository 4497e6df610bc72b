use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Polynomial, Series, Var};
use crate::error::{Error, Result};

/// A rational function `numerator(q) / denominator(q)` over the rationals.
///
/// Always canonical: numerator and denominator are coprime and the
/// denominator is monic (the zero function is `0/1`). Derived equality is
/// therefore equality of rational functions; [`RationalFunction::cross_eq`]
/// checks the same thing by cross-multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let lead = den.leading().expect("nonzero denominator").recip();
        Self { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn zero() -> Self {
        Self { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    /// `c q^k` for any integer `k`.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Polynomial::monomial(c, k as usize))
        } else {
            Self::canonical(
                Polynomial::constant(c),
                Polynomial::monomial(BigRational::one(), k.unsigned_abs() as usize),
            )
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality by cross-multiplication, independent of canonical form.
    pub fn cross_eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let a_co = other.den.div_exact(&g);
        let b_co = self.den.div_exact(&g);
        let num = self.num.mul(&a_co).add(&other.num.mul(&b_co));
        Self::canonical(num, self.den.mul(&a_co))
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(r), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let e = n.unsigned_abs() as u32;
        Ok(Self::canonical(base.num.pow(e), base.den.pow(e)))
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Order of vanishing at `q = 0` (negative for a pole); `None` for zero.
    pub fn order_at_zero(&self) -> Option<i64> {
        let n = self.num.low_degree()? as i64;
        let d = self.den.low_degree().expect("nonzero denominator") as i64;
        Some(n - d)
    }

    /// Composition with `q -> -(-q)^k`.
    pub fn substitute_signed_power(&self, k: usize) -> Self {
        Self::canonical(self.num.substitute_signed_power(k), self.den.substitute_signed_power(k))
    }

    /// The function `q -> f(1/q)`.
    pub fn invert_q(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = self.num.degree().unwrap_or(0);
        let m = self.den.degree().unwrap_or(0);
        let (mut num, mut den) = (self.num.reversed(), self.den.reversed());
        if m >= n {
            num = num.shift_up(m - n);
        } else {
            den = den.shift_up(n - m);
        }
        Self::canonical(num, den)
    }

    /// Whether `f(q) = f(1/q)` as rational functions.
    pub fn is_q_inversion_symmetric(&self) -> bool {
        self.cross_eq(&self.invert_q())
    }

    /// Laurent expansion about `q = 0` through degree `order`.
    pub fn expand(&self, order: i64) -> Series<BigRational> {
        let Some(val) = self.order_at_zero() else {
            return Series::zero(Var::Q, order);
        };
        if order < val {
            return Series::zero(Var::Q, order);
        }
        let a = self.num.low_degree().expect("nonzero numerator");
        let b = self.den.low_degree().expect("nonzero denominator");
        let rel = order - val;
        let n = Series::with_truncation(Var::Q, 0, self.num.shift_down(a).coeffs().to_vec(), rel);
        let d = Series::with_truncation(Var::Q, 0, self.den.shift_down(b).coeffs().to_vec(), rel);
        let quotient = n.mul(&d.inv().expect("unit constant term")).expect("same variable");
        quotient.shift(val)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn footnote() -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(&[0, 1]), Polynomial::from_ints(&[1, 2, 1])).unwrap()
    }

    #[test]
    fn equality_after_canonicalization() {
        let a = footnote();
        let b =
            RationalFunction::new(Polynomial::from_ints(&[0, 1, 1]), Polynomial::from_ints(&[1, 1]).pow(3)).unwrap();
        assert!(a.cross_eq(&b));
        assert_eq!(a, b);
        let q = RationalFunction::monomial(rat(1, 1), 1);
        let q2 = RationalFunction::monomial(rat(1, 1), 2);
        assert!(!q.cross_eq(&q2));
        assert!(a.cross_eq(&a.clone()));
    }

    #[test]
    fn footnote_series() {
        let s = footnote().expand(10);
        assert_eq!(s.min_degree(), 1);
        for n in 1..=10i64 {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(s.coeff(n).unwrap(), rat(sign * n, 1));
        }
    }

    #[test]
    fn simple_expansions() {
        let geo = RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[1, -1])).unwrap();
        let s = geo.expand(5);
        assert!((0..=5).all(|k| s.coeff(k).unwrap() == rat(1, 1)));
        let inv_q = RationalFunction::monomial(rat(1, 1), -1);
        assert_eq!(inv_q.expand(4), Series::monomial(Var::Q, rat(1, 1), -1, 4));
    }

    #[test]
    fn inversion_symmetry() {
        assert!(footnote().is_q_inversion_symmetric());
        let palindrome = RationalFunction::monomial(rat(1, 1), 1).add(&RationalFunction::monomial(rat(1, 1), -1));
        assert!(palindrome.is_q_inversion_symmetric());
        assert!(!RationalFunction::monomial(rat(1, 1), 1).is_q_inversion_symmetric());
        assert!(RationalFunction::zero().is_q_inversion_symmetric());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RationalFunction::new(Polynomial::one(), Polynomial::zero()), Err(Error::DivisionByZero));
        assert_eq!(RationalFunction::zero().inv(), Err(Error::DivisionByZero));
    }
}
