//! Expansion of the KKV product
//!
//! ```text
//! sum_{g,h} (-1)^g n_{g,h} (sqrt z - 1/sqrt z)^{2g} q^h
//!     = prod_{n >= 1} 1 / ((1 - q^n)^20 (1 - z q^n)^2 (1 - q^n / z)^2)
//! ```
//!
//! and extraction of the BPS numbers `n_{g,h}` in the basis
//! `lambda^g = (z - 2 + 1/z)^g`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Scalar, Series, SymLaurentPoly, Var};
use crate::error::{Error, Result};

/// Coefficients of the KKV product, `coeffs[h]` being the `q^h` coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KkvSeries {
    coeffs: Vec<SymLaurentPoly>,
}

impl KkvSeries {
    pub fn q_order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeff(&self, h: u32) -> Option<&SymLaurentPoly> {
        self.coeffs.get(h as usize)
    }

    pub fn coeffs(&self) -> &[SymLaurentPoly] {
        &self.coeffs
    }

    /// As a truncated series in `q` with symmetric Laurent coefficients.
    pub fn to_series(&self) -> Series<SymLaurentPoly> {
        Series::new(Var::Q, 0, self.coeffs.clone())
    }

    /// The `z -> 1` specialization.
    pub fn at_z_one(&self) -> Series<BigRational> {
        Series::new(Var::Q, 0, self.coeffs.iter().map(SymLaurentPoly::eval_at_one).collect())
    }
}

/// Expands the KKV product through `q^{q_order}`.
///
/// Factor `n` starts at `q^n`, so factors with `n <= q_order` suffice. The
/// pair `(1 - z q^n)(1 - q^n/z) = 1 - (z + 1/z) q^n + q^{2n}` is divided out
/// as a whole to stay inside symmetric Laurent polynomials.
pub fn kkv_product(q_order: u32) -> KkvSeries {
    let n_max = q_order as usize;
    // c[k][j]: coefficient of q^k (z^j + z^-j); integral throughout
    let mut c: Vec<Vec<BigInt>> = vec![Vec::new(); n_max + 1];
    c[0].push(BigInt::one());
    for n in 1..=n_max {
        for _ in 0..20 {
            for k in n..=n_max {
                let (lo, hi) = c.split_at_mut(k);
                add_into(&mut hi[0], &lo[k - n]);
            }
        }
        for _ in 0..2 {
            for k in n..=n_max {
                let shifted = mul_z_plus_inv(&c[k - n]);
                add_into(&mut c[k], &shifted);
                if k >= 2 * n {
                    let (lo, hi) = c.split_at_mut(k);
                    sub_into(&mut hi[0], &lo[k - 2 * n]);
                }
            }
        }
    }
    let coeffs = c
        .into_iter()
        .map(|half| SymLaurentPoly::from_half(half.into_iter().map(BigRational::from_integer).collect()))
        .collect();
    KkvSeries { coeffs }
}

fn add_into(acc: &mut Vec<BigInt>, x: &[BigInt]) {
    if acc.len() < x.len() {
        acc.resize(x.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

fn sub_into(acc: &mut Vec<BigInt>, x: &[BigInt]) {
    if acc.len() < x.len() {
        acc.resize(x.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(x) {
        *a -= b;
    }
}

/// Half-coefficients of `(z + 1/z) p`.
fn mul_z_plus_inv(half: &[BigInt]) -> Vec<BigInt> {
    if half.is_empty() {
        return Vec::new();
    }
    let get = |k: usize| half.get(k).cloned().unwrap_or_else(BigInt::zero);
    let mut out = Vec::with_capacity(half.len() + 1);
    out.push(get(1) * 2);
    for k in 1..=half.len() {
        out.push(get(k - 1) + get(k + 1));
    }
    out
}

/// `lambda^g` for `g = 0..=g_max`.
fn lambda_powers(g_max: usize) -> Vec<SymLaurentPoly> {
    let lambda = SymLaurentPoly::lambda();
    let mut out = Vec::with_capacity(g_max + 1);
    out.push(SymLaurentPoly::one());
    for g in 1..=g_max {
        let next = out[g - 1].mul_ref(&lambda);
        out.push(next);
    }
    out
}

/// Coefficients `c_g` with `p = sum_g c_g lambda^g`, `g = 0..=deg p`.
///
/// `lambda^g` has leading coefficient 1 at `z^g`, so eliminating from the
/// top degree down is exact. Asymmetric input is rejected when the
/// polynomial is built, see [`SymLaurentPoly::from_laurent`].
pub fn lambda_decompose(p: &SymLaurentPoly) -> Vec<BigRational> {
    let d = p.degree();
    let powers = lambda_powers(d);
    let mut rest = p.clone();
    let mut out = vec![BigRational::zero(); d + 1];
    for g in (0..=d).rev() {
        let c = rest.coeff(g as i64);
        if !c.is_zero() {
            rest = rest.sub_ref(&powers[g].scale(&c));
            out[g] = c;
        }
    }
    debug_assert!(rest.is_zero());
    out
}

/// Inverse of [`lambda_decompose`].
pub fn lambda_recompose(coeffs: &[BigRational]) -> SymLaurentPoly {
    let powers = lambda_powers(coeffs.len().saturating_sub(1));
    coeffs.iter().zip(&powers).fold(SymLaurentPoly::zero(), |acc, (c, p)| acc.add_ref(&p.scale(c)))
}

/// The BPS numbers `n_{g,h}` of K3 surfaces for `0 <= g, h <= h_max`.
///
/// Indexed by the square `2h - 2` of the class only. Columns with `h < 0`
/// are identically zero (the product has no negative powers of `q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KkvBpsGrid {
    h_max: u32,
    // columns[h][g] for g <= h
    columns: Vec<Vec<BigInt>>,
}

impl KkvBpsGrid {
    /// A grid from explicit columns `columns[h][g]`; column `h` may have at
    /// most `h + 1` entries.
    pub fn from_columns(mut columns: Vec<Vec<BigInt>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidArgument("a grid needs at least the column h = 0".into()));
        }
        for (h, col) in columns.iter_mut().enumerate() {
            if col.len() > h + 1 {
                return Err(Error::DegreeBound { h: h as i64, degree: col.len() as i64 - 1 });
            }
            col.resize(h + 1, BigInt::zero());
        }
        Ok(Self { h_max: columns.len() as u32 - 1, columns })
    }

    pub fn h_max(&self) -> u32 {
        self.h_max
    }

    /// `n_{g,h}`; zero for `h < 0` or `g > h`.
    pub fn n(&self, g: u32, h: i64) -> Result<BigInt> {
        if h < 0 {
            return Ok(BigInt::zero());
        }
        if h > self.h_max as i64 {
            return Err(Error::OutsideGrid { h, h_max: self.h_max });
        }
        Ok(self.columns[h as usize].get(g as usize).cloned().unwrap_or_else(BigInt::zero))
    }

    /// The column `(n_{0,h}, ..., n_{h,h})`, empty for `h < 0`.
    pub fn column(&self, h: i64) -> Result<&[BigInt]> {
        if h < 0 {
            return Ok(&[]);
        }
        if h > self.h_max as i64 {
            return Err(Error::OutsideGrid { h, h_max: self.h_max });
        }
        Ok(&self.columns[h as usize])
    }

    /// Rows `g = 0..=h_max`, each with entries for `h = 0..=h_max`.
    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        let n = self.h_max as usize + 1;
        (0..n).map(|g| (0..n).map(|h| self.columns[h].get(g).cloned().unwrap_or_else(BigInt::zero)).collect()).collect()
    }
}

/// Runs [`kkv_product`], decomposes every `q^h` coefficient in the
/// `lambda`-basis and strips the sign: `n_{g,h} = (-1)^g c_g`.
pub fn bps_grid_from_kkv(h_max: u32) -> Result<KkvBpsGrid> {
    let series = kkv_product(h_max);
    let powers = integer_lambda_powers(h_max as usize);
    let mut columns = Vec::with_capacity(h_max as usize + 1);
    for (h, p) in series.coeffs().iter().enumerate() {
        if p.degree() > h {
            return Err(Error::DegreeBound { h: h as i64, degree: p.degree() as i64 });
        }
        let mut rest = Vec::with_capacity(p.degree() + 1);
        for g in 0..=p.degree() {
            let c = p.coeff(g as i64);
            if !c.is_integer() {
                return Err(Error::NonIntegral { genus: g as u32, h: h as i64, value: c.to_string() });
            }
            rest.push(c.to_integer());
        }
        let mut col = vec![BigInt::zero(); h + 1];
        for g in (0..rest.len()).rev() {
            let c = rest[g].clone();
            if c.is_zero() {
                continue;
            }
            for (r, x) in rest.iter_mut().zip(&powers[g]) {
                *r -= &c * x;
            }
            col[g] = if g % 2 == 0 { c } else { -c };
        }
        debug_assert!(rest.iter().all(Zero::is_zero));
        columns.push(col);
    }
    Ok(KkvBpsGrid { h_max, columns })
}

/// Half-coefficients of `lambda^g`, `g = 0..=g_max`, over the integers.
fn integer_lambda_powers(g_max: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for g in 1..=g_max {
        let prev = &out[g - 1];
        let mut next = mul_z_plus_inv(prev);
        for (a, b) in next.iter_mut().zip(prev) {
            *a -= b * 2;
        }
        out.push(next);
    }
    out
}

/// `prod_{n >= 1} (1 - q^n)^{-24}` through `q^{h_max}`.
pub fn yau_zaslow_series(h_max: u32) -> Series<BigRational> {
    let n_max = h_max as usize;
    let mut c = vec![BigRational::zero(); n_max + 1];
    c[0] = BigRational::one();
    for n in 1..=n_max {
        for _ in 0..24 {
            for k in n..=n_max {
                let prev = c[k - n].clone();
                c[k] += prev;
            }
        }
    }
    Series::new(Var::Q, 0, c)
}
