use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial in `q` over the rationals, lowest degree first.
/// Trailing zero coefficients are always trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c q^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Order of vanishing at `q = 0`; `None` for the zero polynomial.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Divides by `q^k`, which must divide `self`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[db].recip();
        let mut rem = self.coeffs.clone();
        let Some(da) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if da < db {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = &rem[k + db] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient; panics if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    ///
    /// Runs the primitive pseudo-remainder sequence over the integers so
    /// coefficient growth stays bounded by the size of the gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        // powers of q split off exactly; the sequence then runs on the rest
        let (la, lb) = (self.low_degree().unwrap_or(0), other.low_degree().unwrap_or(0));
        let common = la.min(lb);
        let mut a = primitive_integer(&self.coeffs[la..]);
        let mut b = primitive_integer(&other.coeffs[lb..]);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = r;
        }
        Self::new(a.into_iter().map(BigRational::from_integer).collect()).monic().shift_up(common)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `p(-(-q)^k)`: the substitution used by the multiple cover formula.
    pub fn substitute_signed_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            // (-(-q)^k)^j = (-1)^j (-1)^{jk} q^{jk}
            let negative = (j + j * k) % 2 == 1;
            coeffs[j * k] = if negative { -c } else { c.clone() };
        }
        Self::new(coeffs)
    }

    /// `q^deg p(1/q)`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Multiplicity of `q = -1` as a root.
    pub fn multiplicity_at_minus_one(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        let one_plus_q = Self::from_ints(&[1, 1]);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&one_plus_q);
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }
}

fn trim_int(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn make_primitive(v: &mut [BigInt]) {
    let g = content(v);
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
}

/// Clears denominators and removes the content.
fn primitive_integer(coeffs: &[BigRational]) -> Vec<BigInt> {
    let l = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut v: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    trim_int(&mut v);
    make_primitive(&mut v);
    v
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        if !lb.is_one() {
            for c in r.iter_mut() {
                *c *= lb;
            }
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        trim_int(&mut r);
    }
    make_primitive(&mut r);
    r
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{a}*q^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_products() {
        let a = Polynomial::from_ints(&[1, 1]).pow(3).mul(&Polynomial::from_ints(&[0, 1]));
        let b = Polynomial::from_ints(&[1, 1]).pow(2).mul(&Polynomial::from_ints(&[2, 0, 1]));
        assert_eq!(a.gcd(&b), Polynomial::from_ints(&[1, 2, 1]));
        assert_eq!(a.gcd(&Polynomial::zero()), a.monic());
    }

    #[test]
    fn division() {
        let a = Polynomial::from_ints(&[-1, 0, 0, 1]);
        let (q, r) = a.div_rem(&Polynomial::from_ints(&[-1, 1]));
        assert_eq!(q, Polynomial::from_ints(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn signed_power_substitution() {
        // 1 + q  ->  1 - (-q)^2 = 1 - q^2
        assert_eq!(Polynomial::from_ints(&[1, 1]).substitute_signed_power(2), Polynomial::from_ints(&[1, 0, -1]));
        // q -> -(-q)^3 = q^3
        assert_eq!(Polynomial::from_ints(&[0, 1]).substitute_signed_power(3), Polynomial::from_ints(&[0, 0, 0, 1]));
        assert_eq!(Polynomial::from_ints(&[3, 5]).substitute_signed_power(1), Polynomial::from_ints(&[3, 5]));
    }

    #[test]
    fn root_multiplicity() {
        let p = Polynomial::from_ints(&[1, 1]).pow(3).mul(&Polynomial::from_ints(&[1, 0, 1]));
        assert_eq!(p.multiplicity_at_minus_one(), 3);
        assert_eq!(Polynomial::from_ints(&[0, 1]).multiplicity_at_minus_one(), 0);
    }

    #[test]
    fn display() {
        assert_eq!(Polynomial::from_ints(&[0, 1, -2, 3]).to_string(), "q - 2*q^2 + 3*q^3");
    }
}
