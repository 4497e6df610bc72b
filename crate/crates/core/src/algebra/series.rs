use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{Error, Result};

/// Formal variable a series is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    /// Genus expansion variable of Gromov-Witten potentials.
    U,
    /// Euler characteristic / square-tracking variable.
    Q,
    /// Spare tag for auxiliary expansions.
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::U => "u",
            Var::Q => "q",
            Var::T => "t",
        })
    }
}

/// A truncated formal Laurent series `sum_{k=min}^{trunc} c_k x^k + O(x^{trunc+1})`.
///
/// Coefficients are stored densely from `min_degree` to `truncation`
/// inclusive. The representation is normalized: the stored leading
/// coefficient is nonzero, so `min_degree` is the valuation. A series that
/// is zero to its truncation order stores no coefficients and has
/// `min_degree = truncation + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    var: Var,
    min_degree: i64,
    truncation: i64,
    coeffs: Vec<C>,
}

impl<C: Scalar> Series<C> {
    /// Builds `sum_i coeffs[i] x^{min_degree + i}` known up to and including
    /// degree `min_degree + coeffs.len() - 1`.
    pub fn new(var: Var, min_degree: i64, coeffs: Vec<C>) -> Self {
        let truncation = min_degree + coeffs.len() as i64 - 1;
        Self::normalized(var, min_degree, truncation, coeffs)
    }

    /// Like [`Series::new`] but with an explicit truncation order; missing
    /// trailing coefficients are zero and extra ones are dropped.
    pub fn with_truncation(var: Var, min_degree: i64, mut coeffs: Vec<C>, truncation: i64) -> Self {
        let len = (truncation - min_degree + 1).max(0) as usize;
        coeffs.resize(len, C::zero());
        Self::normalized(var, min_degree, truncation, coeffs)
    }

    fn normalized(var: Var, min_degree: i64, truncation: i64, coeffs: Vec<C>) -> Self {
        debug_assert_eq!(coeffs.len() as i64, (truncation - min_degree + 1).max(0));
        match coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) => Self { var, min_degree, truncation, coeffs },
            Some(lead) => Self {
                var,
                min_degree: min_degree + lead as i64,
                truncation,
                coeffs: coeffs.into_iter().skip(lead).collect(),
            },
            None => Self::zero(var, truncation),
        }
    }

    /// The zero series, known to be zero through `truncation`.
    pub fn zero(var: Var, truncation: i64) -> Self {
        Self { var, min_degree: truncation + 1, truncation, coeffs: Vec::new() }
    }

    pub fn one(var: Var, truncation: i64) -> Self {
        Self::monomial(var, C::one(), 0, truncation)
    }

    /// `c x^degree + O(x^{truncation+1})`.
    pub fn monomial(var: Var, c: C, degree: i64, truncation: i64) -> Self {
        if degree > truncation {
            return Self::zero(var, truncation);
        }
        let mut coeffs = vec![C::zero(); (truncation - degree + 1) as usize];
        coeffs[0] = c;
        Self::normalized(var, degree, truncation, coeffs)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Lowest degree with a nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_degree)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^k`, or `None` beyond the truncation order.
    pub fn coeff(&self, k: i64) -> Option<C> {
        if k > self.truncation {
            None
        } else if k < self.min_degree {
            Some(C::zero())
        } else {
            Some(self.coeffs[(k - self.min_degree) as usize].clone())
        }
    }

    fn coeff_ref(&self, k: i64) -> Option<&C> {
        if k < self.min_degree || k > self.truncation {
            None
        } else {
            Some(&self.coeffs[(k - self.min_degree) as usize])
        }
    }

    /// Nonzero terms as `(degree, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        let m = self.min_degree;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (m + i as i64, c))
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch { left: self.var, right: other.var });
        }
        Ok(())
    }

    /// Effective valuation used for truncation bookkeeping: a series that is
    /// zero through `T` is `O(x^{T+1})`.
    fn effective_valuation(&self) -> i64 {
        self.min_degree
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let truncation = self.truncation.min(other.truncation);
        let min = self.min_degree.min(other.min_degree).min(truncation + 1);
        let coeffs = (min..=truncation)
            .map(|k| match (self.coeff_ref(k), other.coeff_ref(k)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => C::zero(),
            })
            .collect();
        Ok(Self::normalized(self.var, min, truncation, coeffs))
    }

    pub fn neg(&self) -> Self {
        Self {
            var: self.var,
            min_degree: self.min_degree,
            truncation: self.truncation,
            coeffs: self.coeffs.iter().map(Scalar::neg_ref).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scale(r)).collect();
        Self::normalized(self.var, self.min_degree, self.truncation, coeffs)
    }

    /// Multiplies every coefficient by a scalar of the coefficient ring.
    pub fn mul_scalar(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul_ref(c)).collect();
        Self::normalized(self.var, self.min_degree, self.truncation, coeffs)
    }

    /// Cauchy product. The result is known through
    /// `min(trunc_a + val_b, trunc_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let va = self.effective_valuation();
        let vb = other.effective_valuation();
        let truncation = (self.truncation + vb).min(other.truncation + va);
        let min = va + vb;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var, truncation));
        }
        let len = (truncation - min + 1).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Ok(Self::normalized(self.var, min, truncation, coeffs))
    }

    /// Multiplicative inverse. A series `x^v (c + ...)` known through `T`
    /// inverts to `x^{-v} (1/c + ...)` known through `T - 2v`.
    pub fn inv(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroSeries)?;
        let lead_inv = self.coeffs[0].inv().ok_or(Error::NotInvertible)?;
        let rel = (self.truncation - v) as usize;
        let mut out: Vec<C> = Vec::with_capacity(rel + 1);
        out.push(lead_inv.clone());
        for n in 1..=rel {
            let mut acc = C::zero();
            for j in 1..=n {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc = acc.add_ref(&a.mul_ref(&out[n - j]));
                }
            }
            out.push(acc.mul_ref(&lead_inv).neg_ref());
        }
        Ok(Self::normalized(self.var, -v, self.truncation - 2 * v, out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        self.mul(&other.inv()?)
    }

    /// Integer power; negative exponents go through [`Series::inv`].
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        if n == 0 {
            let v = self.valuation().ok_or(Error::ZeroSeries)?;
            return Ok(Self::one(self.var, self.truncation - v));
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.expect("n > 0"))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            var: self.var,
            min_degree: self.min_degree + k,
            truncation: self.truncation + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Drops coefficients above `order`. Never raises the truncation order.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.truncation {
            return self.clone();
        }
        let keep = (order - self.min_degree + 1).max(0) as usize;
        let coeffs = self.coeffs.iter().take(keep).cloned().collect();
        Self::normalized(self.var, self.min_degree.min(order + 1), order, coeffs)
    }

    /// Exponential of a series with vanishing coefficients in degrees <= 0.
    pub fn exp(&self) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v <= 0 {
                return Err(Error::NonzeroConstantTerm { degree: v });
            }
        }
        let t = self.truncation;
        if t < 0 {
            return Ok(Self::one(self.var, t));
        }
        let n_max = t as usize;
        let a = |k: usize| self.coeff_ref(k as i64);
        let mut e: Vec<C> = Vec::with_capacity(n_max + 1);
        e.push(C::one());
        for n in 1..=n_max {
            let mut acc = C::zero();
            for k in 1..=n {
                if let Some(ak) = a(k) {
                    if !ak.is_zero() {
                        acc = acc.add_ref(&ak.mul_ref(&e[n - k]).scale(&int(k)));
                    }
                }
            }
            e.push(acc.scale(&recip(n)));
        }
        Ok(Self::normalized(self.var, 0, t, e))
    }

    /// Logarithm of a series of the form `1 + O(x)`.
    pub fn log(&self) -> Result<Self> {
        match self.valuation() {
            Some(v) if v < 0 => return Err(Error::NonzeroConstantTerm { degree: v }),
            Some(0) if self.coeffs[0] == C::one() => {}
            _ => return Err(Error::MissingUnit),
        }
        let n_max = self.truncation as usize;
        let f = |k: usize| self.coeffs.get(k);
        let mut l: Vec<C> = Vec::with_capacity(n_max + 1);
        l.push(C::zero());
        for n in 1..=n_max {
            let mut acc = f(n).cloned().unwrap_or_else(C::zero).scale(&int(n));
            for (k, lk) in l.iter().enumerate().skip(1) {
                if let Some(fk) = f(n - k) {
                    if !fk.is_zero() && !lk.is_zero() {
                        acc = acc.sub_ref(&lk.mul_ref(fk).scale(&int(k)));
                    }
                }
            }
            l.push(acc.scale(&recip(n)));
        }
        Ok(Self::normalized(self.var, 0, self.truncation, l))
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let coeffs = self.coeffs.iter().map(f).collect();
        Series::normalized(self.var, self.min_degree, self.truncation, coeffs)
    }

    /// First degree `<= order` where the two series differ, or `None` if they
    /// agree through `order`. Fails if either is not known through `order`.
    pub fn first_mismatch(&self, other: &Self, order: i64) -> Result<Option<i64>> {
        self.check_var(other)?;
        let known = self.truncation.min(other.truncation);
        if known < order {
            return Err(Error::OrderTooSmall { order: known, required: order });
        }
        let start = self.min_degree.min(other.min_degree);
        Ok((start..=order).find(|&k| self.coeff(k) != other.coeff(k)))
    }
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn recip(n: usize) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(n))
}

impl<C: Scalar + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let text = c.to_string();
            // compound coefficients (several terms) are parenthesized
            let (negative, body) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ if text.contains(' ') => (false, format!("({text})")),
                _ => (false, text),
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let monomial = match k {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{k}", self.var),
            };
            match (monomial.is_empty(), body == "1") {
                (true, _) => f.write_str(&body)?,
                (false, true) => f.write_str(&monomial)?,
                (false, false) => write!(f, "{body}*{monomial}")?,
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "O({}^{})", self.var, self.truncation + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn q(coeffs: &[i64], min: i64) -> Series<BigRational> {
        Series::new(Var::Q, min, coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let a = q(&[1, 1, 0, 0, 0], 0);
        let b = q(&[1, -1, 0, 0, 0], 0);
        assert_eq!(a.mul(&b).unwrap(), q(&[1, 0, -1, 0, 0], 0));
    }

    #[test]
    fn degree_cancellation() {
        let a = Series::monomial(Var::U, rat(1, 1), -2, 6);
        let b = Series::monomial(Var::U, rat(1, 1), 2, 10);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, Series::one(Var::U, 8));
    }

    #[test]
    fn geometric_series_times_one_minus_q() {
        let geo = q(&[1; 8], 0);
        let p = geo.mul(&q(&[1, -1], 0).truncate(1)).unwrap();
        // (1 - q) is known only through q^1, which limits the product.
        assert_eq!(p, Series::one(Var::Q, 1));
        let exact = Series::with_truncation(Var::Q, 0, vec![rat(1, 1), rat(-1, 1)], 7);
        assert_eq!(geo.mul(&exact).unwrap(), Series::one(Var::Q, 7));
    }

    #[test]
    fn inverse_of_one_minus_q_and_monomial() {
        let a = Series::with_truncation(Var::Q, 0, vec![rat(1, 1), rat(-1, 1)], 6);
        assert_eq!(a.inv().unwrap(), q(&[1; 7], 0));
        let m = Series::monomial(Var::Q, rat(1, 1), 1, 5);
        let mi = m.inv().unwrap();
        assert_eq!(mi.min_degree(), -1);
        assert_eq!(mi, Series::monomial(Var::Q, rat(1, 1), -1, 3));
    }

    #[test]
    fn inverse_of_shifted_series_multiplies_back() {
        // u^2 (1 - u^2/12 + u^4/360)
        let a = Series::new(
            Var::U,
            2,
            vec![rat(1, 1), rat(0, 1), rat(-1, 12), rat(0, 1), rat(1, 360), rat(0, 1), rat(0, 1)],
        );
        let b = a.inv().unwrap();
        assert_eq!(b.min_degree(), -2);
        assert_eq!(b.coeff(0).unwrap(), rat(1, 12));
        let back = a.mul(&b).unwrap();
        assert_eq!(back, Series::one(Var::U, back.truncation()));
        assert!(back.truncation() >= 4);
    }

    #[test]
    fn zero_inverse_fails() {
        assert_eq!(Series::<BigRational>::zero(Var::Q, 5).inv(), Err(Error::ZeroSeries));
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let a = Series::<BigRational>::one(Var::U, 3);
        let b = Series::<BigRational>::one(Var::Q, 3);
        assert!(matches!(a.mul(&b), Err(Error::VariableMismatch { .. })));
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn truncation_propagates_pessimistically() {
        let a = q(&[1, 2, 3, 4, 5, 6], 0);
        let b = q(&[1, 1, 1], 0);
        assert_eq!(a.add(&b).unwrap().truncation(), 2);
        assert_eq!(a.mul(&b).unwrap().truncation(), 2);
    }

    #[test]
    fn exp_and_log_of_q() {
        let x = Series::monomial(Var::Q, rat(1, 1), 1, 4);
        let e = x.exp().unwrap();
        let want = q(&[1, 1, 1, 1, 1], 0);
        let want = want.map_coeffs(|c| c.clone());
        let fact = [1, 1, 2, 6, 24];
        for k in 0..5 {
            assert_eq!(e.coeff(k).unwrap(), rat(1, fact[k as usize]) * want.coeff(k).unwrap());
        }
        assert_eq!(e.log().unwrap(), x);
        assert_eq!(Series::<BigRational>::zero(Var::Q, 4).exp().unwrap(), Series::one(Var::Q, 4));
        assert!(matches!(
            Series::<BigRational>::one(Var::Q, 4).scale(&rat(2, 1)).exp(),
            Err(Error::NonzeroConstantTerm { .. })
        ));
    }
}
