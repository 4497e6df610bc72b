use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{RationalFunction, Scalar, Series};
use crate::error::{Error, Result};

/// Values that can be added and scaled by rationals.
pub trait Module: Clone {
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn scale(&self, r: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
}

/// A [`Module`] with a (possibly fallible) multiplication.
pub trait Algebra: Module {
    fn try_mul(&self, other: &Self) -> Result<Self>;
}

impl Module for BigRational {
    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }

    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }

    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

impl<C: Scalar> Module for Series<C> {
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn scale(&self, r: &BigRational) -> Self {
        Series::scale(self, r)
    }

    fn is_zero(&self) -> bool {
        Series::is_zero(self)
    }
}

impl<C: Scalar> Algebra for Series<C> {
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
}

impl Module for RationalFunction {
    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self.add(other))
    }

    fn scale(&self, r: &BigRational) -> Self {
        RationalFunction::scale(self, r)
    }

    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
}

impl Algebra for RationalFunction {
    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other))
    }
}

/// A series `[1 +] sum_{d=1}^{max_degree} a_d v^d` in the class-degree
/// variable `v`, truncated after `max_degree`.
///
/// Absent entries are zero; zero entries are never stored.
/// `unit` marks the presence of the constant term 1 (disconnected
/// partition functions); connected series have no grade-0 term.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries<E> {
    max_degree: usize,
    unit: bool,
    entries: BTreeMap<usize, E>,
}

impl<E: Algebra> GradedSeries<E> {
    /// A connected series (no grade-0 term). Entries above `max_degree` are
    /// dropped; an entry at grade 0 is an error.
    pub fn connected(max_degree: usize, entries: BTreeMap<usize, E>) -> Result<Self> {
        Self::build(max_degree, false, entries)
    }

    /// A series with unit constant term, `1 + sum entries`.
    pub fn with_unit(max_degree: usize, entries: BTreeMap<usize, E>) -> Result<Self> {
        Self::build(max_degree, true, entries)
    }

    fn build(max_degree: usize, unit: bool, mut entries: BTreeMap<usize, E>) -> Result<Self> {
        if entries.contains_key(&0) {
            return Err(Error::UnexpectedUnit);
        }
        entries.retain(|&d, e| d <= max_degree && !e.is_zero());
        Ok(Self { max_degree, unit, entries })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn has_unit(&self) -> bool {
        self.unit
    }

    pub fn get(&self, d: usize) -> Option<&E> {
        self.entries.get(&d)
    }

    pub fn entries(&self) -> &BTreeMap<usize, E> {
        &self.entries
    }

    /// `exp` in the grading: `E_d = (1/d) sum_{k=1}^{d} k A_k E_{d-k}`, `E_0 = 1`.
    pub fn exp(&self) -> Result<Self> {
        if self.unit {
            return Err(Error::NonzeroConstantTerm { degree: 0 });
        }
        let mut out: BTreeMap<usize, E> = BTreeMap::new();
        for d in 1..=self.max_degree {
            let mut acc: Option<E> = self.entries.get(&d).cloned();
            for k in 1..d {
                if let (Some(a), Some(e)) = (self.entries.get(&k), out.get(&(d - k))) {
                    let term = a.try_mul(e)?.scale(&ratio(k, d));
                    acc = Some(match acc {
                        Some(x) => x.try_add(&term)?,
                        None => term,
                    });
                }
            }
            if let Some(x) = acc.filter(|x| !x.is_zero()) {
                out.insert(d, x);
            }
        }
        Ok(Self { max_degree: self.max_degree, unit: true, entries: out })
    }

    /// `log` in the grading: `L_d = A_d - (1/d) sum_{k=1}^{d-1} k L_k A_{d-k}`.
    pub fn log(&self) -> Result<Self> {
        if !self.unit {
            return Err(Error::MissingUnit);
        }
        let mut out: BTreeMap<usize, E> = BTreeMap::new();
        for d in 1..=self.max_degree {
            let mut acc: Option<E> = self.entries.get(&d).cloned();
            for k in 1..d {
                if let (Some(l), Some(a)) = (out.get(&k), self.entries.get(&(d - k))) {
                    let term = l.try_mul(a)?.scale(&-ratio(k, d));
                    acc = Some(match acc {
                        Some(x) => x.try_add(&term)?,
                        None => term,
                    });
                }
            }
            if let Some(x) = acc.filter(|x| !x.is_zero()) {
                out.insert(d, x);
            }
        }
        Ok(Self { max_degree: self.max_degree, unit: false, entries: out })
    }

    /// Product, truncated at the smaller maximal degree.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let max_degree = self.max_degree.min(other.max_degree);
        let mut out: BTreeMap<usize, E> = BTreeMap::new();
        let mut push = |d: usize, v: E| -> Result<()> {
            let next = match out.remove(&d) {
                Some(x) => x.try_add(&v)?,
                None => v,
            };
            out.insert(d, next);
            Ok(())
        };
        if other.unit {
            for (&d, a) in self.entries.range(..=max_degree) {
                push(d, a.clone())?;
            }
        }
        if self.unit {
            for (&d, b) in other.entries.range(..=max_degree) {
                push(d, b.clone())?;
            }
        }
        for (&i, a) in &self.entries {
            for (&j, b) in &other.entries {
                if i + j <= max_degree {
                    push(i + j, a.try_mul(b)?)?;
                }
            }
        }
        out.retain(|_, e| !e.is_zero());
        Ok(Self { max_degree, unit: self.unit && other.unit, entries: out })
    }
}

fn ratio(k: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Var};

    fn x() -> Series<BigRational> {
        // any element works; use 2 + 3u
        Series::new(Var::U, 0, vec![rat(2, 1), rat(3, 1), rat(0, 1), rat(0, 1)])
    }

    #[test]
    fn exp_of_zero_is_one() {
        let zero: GradedSeries<Series<BigRational>> = GradedSeries::connected(4, BTreeMap::new()).unwrap();
        let e = zero.exp().unwrap();
        assert!(e.has_unit());
        assert!(e.entries().is_empty());
        assert!(e.log().unwrap().entries().is_empty());
    }

    #[test]
    fn exp_single_grade_one_entry() {
        let g = GradedSeries::connected(3, BTreeMap::from([(1, x())])).unwrap();
        let e = g.exp().unwrap();
        let x2 = x().mul(&x()).unwrap();
        let x3 = x2.mul(&x()).unwrap();
        assert_eq!(e.get(1).unwrap(), &x());
        assert_eq!(e.get(2).unwrap(), &x2.scale(&rat(1, 2)));
        assert_eq!(e.get(3).unwrap(), &x3.scale(&rat(1, 6)));
    }

    #[test]
    fn log_of_one_plus_x() {
        let g = GradedSeries::with_unit(3, BTreeMap::from([(1, x())])).unwrap();
        let l = g.log().unwrap();
        let x2 = x().mul(&x()).unwrap();
        let x3 = x2.mul(&x()).unwrap();
        assert_eq!(l.get(1).unwrap(), &x());
        assert_eq!(l.get(2).unwrap(), &x2.scale(&rat(-1, 2)));
        assert_eq!(l.get(3).unwrap(), &x3.scale(&rat(1, 3)));
    }

    #[test]
    fn unit_errors() {
        let connected: GradedSeries<Series<BigRational>> = GradedSeries::connected(2, BTreeMap::new()).unwrap();
        assert_eq!(connected.log(), Err(Error::MissingUnit));
        let unit: GradedSeries<Series<BigRational>> = GradedSeries::with_unit(2, BTreeMap::new()).unwrap();
        assert!(matches!(unit.exp(), Err(Error::NonzeroConstantTerm { .. })));
        assert_eq!(GradedSeries::connected(2, BTreeMap::from([(0, x())])), Err(Error::UnexpectedUnit));
    }

    #[test]
    fn exp_is_multiplicative() {
        let a = GradedSeries::connected(4, BTreeMap::from([(1, x()), (3, x().shift(1))])).unwrap();
        let b = GradedSeries::connected(4, BTreeMap::from([(2, x().scale(&rat(-1, 5)))])).unwrap();
        let mut sum = a.entries().clone();
        for (d, v) in b.entries() {
            let merged = match sum.remove(d) {
                Some(s) => s.add(v).unwrap(),
                None => v.clone(),
            };
            sum.insert(*d, merged);
        }
        let ab = GradedSeries::connected(4, sum).unwrap().exp().unwrap();
        assert_eq!(ab, a.exp().unwrap().mul(&b.exp().unwrap()).unwrap());
    }
}
