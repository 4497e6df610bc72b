use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Mul};

use super::Scalar;
use crate::error::{Error, Result};

/// A Laurent polynomial in `z` invariant under `z <-> 1/z`.
///
/// Only the coefficients of `z^0, z^1, ..., z^D` are stored; the coefficient
/// of `z^{-k}` equals that of `z^k`. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymLaurentPoly {
    half: Vec<BigRational>,
}

impl SymLaurentPoly {
    /// From the coefficients of `z^0 ..= z^D`.
    pub fn from_half(half: Vec<BigRational>) -> Self {
        let mut p = Self { half };
        p.trim();
        p
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_half(vec![c])
    }

    /// `z^k + z^{-k}` for `k > 0`, or `1` for `k == 0`.
    pub fn orbit(k: usize) -> Self {
        let mut half = vec![BigRational::zero(); k + 1];
        half[k] = BigRational::one();
        Self::from_half(half)
    }

    /// `lambda = z - 2 + 1/z = (sqrt z - 1/sqrt z)^2`.
    pub fn lambda() -> Self {
        Self::from_half(vec![BigRational::from_integer((-2).into()), BigRational::one()])
    }

    /// From an arbitrary Laurent polynomial `degree -> coefficient`,
    /// checking the symmetry.
    pub fn from_laurent(terms: &BTreeMap<i64, BigRational>) -> Result<Self> {
        for (&k, c) in terms {
            let mirror = terms.get(&-k).cloned().unwrap_or_else(BigRational::zero);
            if *c != mirror {
                return Err(Error::NotSymmetric { degree: k });
            }
        }
        let d = terms.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut half = vec![BigRational::zero(); d + 1];
        for (&k, c) in terms {
            if k >= 0 {
                half[k as usize] = c.clone();
            }
        }
        Ok(Self::from_half(half))
    }

    fn trim(&mut self) {
        while self.half.last().is_some_and(Zero::is_zero) {
            self.half.pop();
        }
    }

    /// Largest `k` with a nonzero `z^k` coefficient; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.half.len().saturating_sub(1)
    }

    /// Coefficient of `z^k` (equal to that of `z^{-k}`).
    pub fn coeff(&self, k: i64) -> BigRational {
        self.half.get(k.unsigned_abs() as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    /// All nonzero terms `degree -> coefficient` for degrees `-D ..= D`.
    pub fn to_laurent(&self) -> BTreeMap<i64, BigRational> {
        let mut out = BTreeMap::new();
        for (k, c) in self.half.iter().enumerate() {
            if !c.is_zero() {
                out.insert(k as i64, c.clone());
                out.insert(-(k as i64), c.clone());
            }
        }
        out
    }

    /// Value at `z = 1`.
    pub fn eval_at_one(&self) -> BigRational {
        let mut acc = self.half.first().cloned().unwrap_or_else(BigRational::zero);
        for c in self.half.iter().skip(1) {
            acc += c + c;
        }
        acc
    }

    /// Multiplies by `z + 1/z`.
    pub fn mul_z_plus_inv(&self) -> Self {
        let d = self.half.len();
        if d == 0 {
            return self.clone();
        }
        let get = |k: usize| self.half.get(k).cloned().unwrap_or_else(BigRational::zero);
        let mut half = Vec::with_capacity(d + 1);
        half.push(get(1) + get(1));
        for k in 1..=d {
            half.push(get(k - 1) + get(k + 1));
        }
        Self::from_half(half)
    }

    fn full(&self) -> Vec<BigRational> {
        let d = self.half.len();
        if d == 0 {
            return Vec::new();
        }
        let mut v: Vec<BigRational> = self.half.iter().skip(1).rev().cloned().collect();
        v.extend(self.half.iter().cloned());
        v
    }
}

impl Zero for SymLaurentPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.half.is_empty()
    }
}

impl One for SymLaurentPoly {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for SymLaurentPoly {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Mul for SymLaurentPoly {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Scalar for SymLaurentPoly {
    fn from_rational(r: &BigRational) -> Self {
        Self::constant(r.clone())
    }

    fn add_ref(&self, other: &Self) -> Self {
        let n = self.half.len().max(other.half.len());
        let half = (0..n).map(|k| self.coeff(k as i64) + other.coeff(k as i64)).collect();
        Self::from_half(half)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let n = self.half.len().max(other.half.len());
        let half = (0..n).map(|k| self.coeff(k as i64) - other.coeff(k as i64)).collect();
        Self::from_half(half)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, b) = (self.full(), other.full());
        let (da, db) = (self.degree(), other.degree());
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        // prod[k] holds z^{k - da - db}
        Self::from_half(prod.split_off(da + db))
    }

    fn neg_ref(&self) -> Self {
        Self { half: self.half.iter().map(|c| -c).collect() }
    }

    fn scale(&self, r: &BigRational) -> Self {
        Self::from_half(self.half.iter().map(|c| c * r).collect())
    }

    fn inv(&self) -> Option<Self> {
        if self.half.len() == 1 {
            Some(Self::constant(self.half[0].recip()))
        } else {
            None
        }
    }
}

impl fmt::Display for SymLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.half.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .to_laurent()
            .into_iter()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}
