//! Stable pairs generating functions of K3 classes and the GW/pairs
//! correspondence under `q = -e^{iu}`.
//!
//! For a primitive class of square `2h - 2` the connected pairs series is the
//! rational function
//!
//! ```text
//! P_h(q) = sum_{g=0}^{h} n_{g,h} q^{1-g} (1 + q)^{2g-2}.
//! ```
//!
//! Under `q = -e^{iu}` one has `(1 + q)^2 / q = (2 sin(u/2))^2`, so
//! `P_h(-e^{iu}) = sum_g n_{g,h} (2 sin(u/2))^{2g-2}`, which is the primitive
//! Gopakumar-Vafa series term by term. Imprimitive classes are assembled by
//! the multiple cover formula `P_{d beta}(q) = sum_{k|d} (1/k) P_{h_k}(-(-q)^k)`
//! where `h_k` labels a primitive class with the square of `(d/k) beta`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{GaussianRational, GradedSeries, Polynomial, RationalFunction, Scalar, Series, Var};
use crate::bps::{gw_series, BpsTable};
use crate::error::{Error, Result};
use crate::kkv::KkvBpsGrid;

/// A class `d * beta` with `beta` primitive of square `2h - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HodgeLabel {
    pub d: u32,
    pub h: i64,
}

impl HodgeLabel {
    pub fn new(d: u32, h: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("class grade d must be at least 1".into()));
        }
        Ok(Self { d, h })
    }

    /// Label `h'` of a primitive class with the square of `(d/k) beta`:
    /// `2h' - 2 = (d/k)^2 (2h - 2)`.
    ///
    /// Panics unless `k` divides `d`.
    pub fn h_of(&self, k: u32) -> i64 {
        assert!(k >= 1 && self.d.is_multiple_of(k), "{k} does not divide {}", self.d);
        let m = (self.d / k) as i64;
        m * m * (self.h - 1) + 1
    }

    pub fn divisors(&self) -> impl Iterator<Item = u32> {
        let d = self.d;
        (1..=d).filter(move |k| d.is_multiple_of(*k))
    }
}

impl fmt::Display for HodgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, h={})", self.d, self.h)
    }
}

/// `P_h(q) = sum_g n_{g,h} q^{1-g} (1+q)^{2g-2}` for a primitive class of
/// square `2h - 2`. Zero for `h < 0`.
///
/// Assembled over the common denominator `q^{h-1} (1+q)^2`:
/// numerator `sum_g n_{g,h} q^{h-g} (1+q)^{2g}`.
pub fn primitive_pairs_ratfn(h: i64, grid: &KkvBpsGrid) -> Result<RationalFunction> {
    let column = grid.column(h)?;
    if column.is_empty() {
        return Ok(RationalFunction::zero());
    }
    let h = h as usize;
    let one_plus_q_sq = Polynomial::from_ints(&[1, 2, 1]);
    let mut num = vec![BigInt::zero(); 2 * h + 1];
    let mut binomials = vec![BigInt::one()]; // row 2g of Pascal's triangle
    for (g, n) in column.iter().enumerate() {
        if !n.is_zero() {
            for (j, b) in binomials.iter().enumerate() {
                num[h - g + j] += n * b;
            }
        }
        for _ in 0..2 {
            binomials.push(BigInt::one());
            for j in (1..binomials.len() - 1).rev() {
                let prev = binomials[j - 1].clone();
                binomials[j] += prev;
            }
        }
    }
    let num = Polynomial::new(num.into_iter().map(BigRational::from_integer).collect());
    if h >= 1 {
        let den = one_plus_q_sq.shift_up(h - 1);
        RationalFunction::new(num, den)
    } else {
        RationalFunction::new(num.shift_up(1), one_plus_q_sq)
    }
}

/// Multiple cover formula: `sum_{k | d} (1/k) P_{h_of(k)}(-(-q)^k)`.
pub fn multiple_cover(label: HodgeLabel, grid: &KkvBpsGrid) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero();
    for k in label.divisors() {
        let primitive = primitive_pairs_ratfn(label.h_of(k), grid)?;
        if primitive.is_zero() {
            continue;
        }
        let weight = BigRational::new(BigInt::one(), BigInt::from(k));
        acc = acc.add(&primitive.substitute_signed_power(k as usize).scale(&weight));
    }
    Ok(acc)
}

/// `p(-e^{iu})` through `u^order` over Q(i).
///
/// With `q^j = (-1)^j e^{iju}` the coefficient of `u^k` is
/// `(i^k / k!) sum_j (-1)^j c_j j^k`.
fn compose_minus_exp_iu(p: &Polynomial, order: i64) -> Series<GaussianRational> {
    let mut terms: Vec<(BigRational, BigRational)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let signed = if j % 2 == 0 { c.clone() } else { -c };
            (BigRational::from_integer(BigInt::from(j)), signed)
        })
        .collect();
    let mut coeffs = Vec::with_capacity(order.max(0) as usize + 1);
    let mut factorial = BigInt::one();
    for k in 0..=order.max(0) {
        if k > 0 {
            factorial *= k;
            for (j, t) in terms.iter_mut() {
                *t *= &*j;
            }
        }
        let sum = terms.iter().fold(BigRational::zero(), |acc, (_, t)| acc + t);
        let c = GaussianRational::i_pow(k).scale(&(sum / BigRational::from_integer(factorial.clone())));
        coeffs.push(c);
    }
    Series::with_truncation(Var::U, 0, coeffs, order)
}

/// Laurent expansion in `u` of `r(-e^{iu})` through `u^{u_order}`.
///
/// Numerator and denominator are expanded at `q = -e^{iu}` over the
/// Gaussian rationals; the pole of order `m` at `q = -1` shows up as valuation `m`
/// of the denominator and is removed by Laurent division. The result must
/// be real and even, which holds exactly when `r` is `q <-> 1/q` symmetric.
pub fn substitute_q_minus_exp(r: &RationalFunction, u_order: i64) -> Result<Series<BigRational>> {
    if r.is_zero() {
        return Ok(Series::zero(Var::U, u_order));
    }
    let m = r.denominator().multiplicity_at_minus_one() as i64;
    let work = u_order + 2 * m;
    let num = compose_minus_exp_iu(r.numerator(), work);
    let den = compose_minus_exp_iu(r.denominator(), work);
    debug_assert_eq!(den.valuation(), Some(m));
    let quotient = num.div(&den)?.truncate(u_order);
    if quotient.truncation() < u_order {
        return Err(Error::OrderTooSmall { order: quotient.truncation(), required: u_order });
    }
    for (k, c) in quotient.terms() {
        if !c.im.is_zero() {
            return Err(Error::ImaginaryCoefficient { degree: k });
        }
        if k.rem_euclid(2) == 1 {
            return Err(Error::OddCoefficient { degree: k });
        }
    }
    Ok(quotient.map_coeffs(|c| c.re.clone()))
}

/// BPS table for the classes `D beta`, `D = 1..=d`, populated from the KKV
/// grid by square: `n_{g, D beta} = n_{g, D^2 (h-1) + 1}`, for genera with
/// `2g - 2 <= u_order`.
pub fn bps_table_for_label(label: HodgeLabel, grid: &KkvBpsGrid, u_order: i64) -> Result<BpsTable> {
    let mut table = BpsTable::new();
    let g_max = ((u_order + 2).max(0) / 2) as u32;
    for big_d in 1..=label.d {
        let dd = big_d as i64;
        let h = dd * dd * (label.h - 1) + 1;
        for (g, n) in grid.column(h)?.iter().enumerate() {
            if g as u32 <= g_max && !n.is_zero() {
                table.insert(g as u32, big_d, BigRational::from_integer(n.clone()));
            }
        }
    }
    Ok(table)
}

/// Connected GW u-series of the class `d beta` through the Gopakumar-Vafa
/// transform of the KKV-populated BPS table.
pub fn gw_series_for_label(label: HodgeLabel, grid: &KkvBpsGrid, u_order: i64) -> Result<Series<BigRational>> {
    let table = bps_table_for_label(label, grid, u_order)?;
    gw_series(&table, label.d, u_order)
}

/// Outcome of comparing both sides of the GW/pairs correspondence.
#[derive(Clone, Debug, PartialEq)]
pub struct MnopReport {
    pub label: HodgeLabel,
    pub u_order: i64,
    pub gw: Series<BigRational>,
    pub pairs: Series<BigRational>,
    /// First degree where the sides differ.
    pub mismatch: Option<i64>,
}

impl MnopReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Checks `sum_g N_{g,d beta} u^{2g-2} = P_{d beta}(q)` at `q = -e^{iu}`
/// through `u^{u_order}`.
pub fn mnop_check(label: HodgeLabel, grid: &KkvBpsGrid, u_order: i64) -> Result<MnopReport> {
    let gw = gw_series_for_label(label, grid, u_order)?;
    let pairs = substitute_q_minus_exp(&multiple_cover(label, grid)?, u_order)?;
    let mismatch = gw.first_mismatch(&pairs, u_order)?;
    Ok(MnopReport { label, u_order, gw, pairs, mismatch })
}

/// Pairs rational functions: primitive series keyed by `h`, imprimitive ones
/// keyed by `(d, h)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairsLedger {
    primitive: BTreeMap<i64, RationalFunction>,
    imprimitive: BTreeMap<(u32, i64), RationalFunction>,
}

impl PairsLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Computes and stores the series of `label`, together with every
    /// primitive series it is assembled from.
    pub fn populate(&mut self, label: HodgeLabel, grid: &KkvBpsGrid) -> Result<&RationalFunction> {
        for k in label.divisors() {
            let h = label.h_of(k);
            if let std::collections::btree_map::Entry::Vacant(slot) = self.primitive.entry(h) {
                slot.insert(primitive_pairs_ratfn(h, grid)?);
            }
        }
        let f = multiple_cover(label, grid)?;
        Ok(self.imprimitive.entry((label.d, label.h)).or_insert(f))
    }

    pub fn primitive(&self, h: i64) -> Option<&RationalFunction> {
        self.primitive.get(&h)
    }

    pub fn get(&self, label: HodgeLabel) -> Option<&RationalFunction> {
        self.imprimitive.get(&(label.d, label.h))
    }

    pub fn primitive_entries(&self) -> &BTreeMap<i64, RationalFunction> {
        &self.primitive
    }

    pub fn imprimitive_entries(&self) -> &BTreeMap<(u32, i64), RationalFunction> {
        &self.imprimitive
    }

    /// First stored function failing `q <-> 1/q` symmetry, if any.
    pub fn first_asymmetric(&self) -> Option<String> {
        if let Some((h, _)) = self.primitive.iter().find(|(_, f)| !f.is_q_inversion_symmetric()) {
            return Some(format!("primitive h={h}"));
        }
        self.imprimitive.iter().find(|(_, f)| !f.is_q_inversion_symmetric()).map(|((d, h), _)| format!("d={d}, h={h}"))
    }
}

/// The connected ledger `{d -> P_{d beta}}` for `d = 1..=d_max` as a graded
/// series in the class variable.
pub fn connected_ledger(grid: &KkvBpsGrid, h: i64, d_max: usize) -> Result<GradedSeries<RationalFunction>> {
    let mut entries = BTreeMap::new();
    for d in 1..=d_max {
        let f = multiple_cover(HodgeLabel::new(d as u32, h)?, grid)?;
        if !f.is_zero() {
            entries.insert(d, f);
        }
    }
    GradedSeries::connected(d_max, entries)
}

/// Disconnected partition function `1 + sum_d P^disc_{d beta} v^d`, the
/// exponential of [`connected_ledger`].
pub fn disconnected_partition(grid: &KkvBpsGrid, h: i64, d_max: usize) -> Result<GradedSeries<RationalFunction>> {
    connected_ledger(grid, h, d_max)?.exp()
}
