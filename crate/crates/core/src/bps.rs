//! The Gopakumar-Vafa transform between Gromov-Witten potentials and BPS
//! tables, restricted to multiples `d * beta_0` of one primitive class.
//!
//! At class grade `D` the connected potential is
//!
//! ```text
//! sum_g N_{g,D} u^{2g-2} = sum_{k | D} (1/k) sum_g n_{g,D/k} (2 sin(k u / 2))^{2g-2}
//! ```
//!
//! The relation is lower triangular (divisors of `D`, then genus) with unit
//! diagonal, so both directions are exact.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Series, Var};
use crate::error::{Error, Result};

/// Truncation order in `u` that makes genus `g_max` extraction exact.
pub fn default_u_order(g_max: u32) -> i64 {
    2 * g_max as i64 + 2
}

/// Laurent series of `(2 sin(d u / 2))^{2g-2}` through `u^order`.
///
/// Built from the real Taylor series `2 sin(d u/2) / u = sum_j (-1)^j d^{2j+1} u^{2j} / (4^j (2j+1)!)`,
/// raised to the power `2g - 2` and shifted by `u^{2g-2}`.
pub fn sine_bracket(d: u32, g: u32, order: i64) -> Result<Series<BigRational>> {
    if d == 0 {
        return Err(Error::InvalidArgument("sine_bracket needs d >= 1".into()));
    }
    let p = 2 * g as i64 - 2;
    if order < p {
        return Err(Error::OrderTooSmall { order, required: p });
    }
    let rel = order - p;
    let d = BigInt::from(d);
    let mut coeffs = vec![BigRational::zero(); rel as usize + 1];
    let mut factorial = BigInt::one(); // (2j+1)!
    let mut four_pow = BigInt::one();
    let mut d_pow = d.clone(); // d^{2j+1}
    let mut j: i64 = 0;
    while 2 * j <= rel {
        if j > 0 {
            factorial *= BigInt::from(2 * j) * BigInt::from(2 * j + 1);
            four_pow *= 4;
            d_pow *= &d * &d;
        }
        let signed = if j % 2 == 0 { d_pow.clone() } else { -&d_pow };
        coeffs[(2 * j) as usize] = BigRational::new(signed, &four_pow * &factorial);
        j += 1;
    }
    let base = Series::new(Var::U, 0, coeffs);
    Ok(base.pow(p)?.shift(p))
}

/// BPS numbers `n_{g, d beta_0}` keyed by `(genus, grade)`.
///
/// Values are rationals so that the inverse transform can report
/// non-integral output instead of failing; [`BpsTable::is_integral`] checks
/// the Gopakumar-Vafa integrality. Zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BpsTable {
    entries: BTreeMap<(u32, u32), BigRational>,
}

impl BpsTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// One embedded rigid rational curve: `n_{0, beta_0} = 1` and nothing else.
    pub fn single_state() -> Self {
        let mut t = Self::new();
        t.insert(0, 1, BigRational::one());
        t
    }

    pub fn insert(&mut self, g: u32, d: u32, value: BigRational) {
        assert!(d >= 1, "class grade must be positive");
        if value.is_zero() {
            self.entries.remove(&(g, d));
        } else {
            self.entries.insert((g, d), value);
        }
    }

    pub fn get(&self, g: u32, d: u32) -> BigRational {
        self.entries.get(&(g, d)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero entries `((g, d), n)`.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.entries.iter()
    }

    /// Nonzero entries at grade `d`, as `(g, n)`.
    pub fn grade(&self, d: u32) -> impl Iterator<Item = (u32, &BigRational)> {
        self.entries.iter().filter(move |((_, dd), _)| *dd == d).map(|((g, _), n)| (*g, n))
    }

    /// Largest genus with a nonzero entry at grade `d`.
    pub fn g_max(&self, d: u32) -> Option<u32> {
        self.grade(d).map(|(g, _)| g).max()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|v| v.is_integer())
    }

    /// Entries that are not integers.
    pub fn non_integral(&self) -> Vec<((u32, u32), BigRational)> {
        self.entries.iter().filter(|(_, v)| !v.is_integer()).map(|(k, v)| (*k, v.clone())).collect()
    }

    /// Same entries restricted to `g <= g_max` and `d <= d_max`.
    pub fn restricted(&self, g_max: u32, d_max: u32) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|((g, d), _)| *g <= g_max && *d <= d_max)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

/// Connected Gromov-Witten invariants `N_{g, d beta_0}` for `d <= d_max`,
/// known for all genera with `2g - 2 <= u_truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwPotential {
    d_max: u32,
    u_truncation: i64,
    entries: BTreeMap<(u32, u32), BigRational>,
}

impl GwPotential {
    pub fn new(d_max: u32, u_truncation: i64) -> Result<Self> {
        if u_truncation < -2 {
            return Err(Error::OrderTooSmall { order: u_truncation, required: -2 });
        }
        Ok(Self { d_max, u_truncation, entries: BTreeMap::new() })
    }

    pub fn insert(&mut self, g: u32, d: u32, value: BigRational) -> Result<()> {
        if d == 0 || d > self.d_max || 2 * g as i64 - 2 > self.u_truncation {
            return Err(Error::InconsistentRange(format!(
                "(g={g}, d={d}) outside d <= {} and 2g-2 <= {}",
                self.d_max, self.u_truncation
            )));
        }
        if value.is_zero() {
            self.entries.remove(&(g, d));
        } else {
            self.entries.insert((g, d), value);
        }
        Ok(())
    }

    pub fn get(&self, g: u32, d: u32) -> BigRational {
        self.entries.get(&(g, d)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn u_truncation(&self) -> i64 {
        self.u_truncation
    }

    /// Largest genus whose invariant is determined by the truncation.
    pub fn genus_max(&self) -> u32 {
        ((self.u_truncation + 2) / 2) as u32
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.entries.iter()
    }

    /// `sum_g N_{g,d} u^{2g-2}` through `u^{u_truncation}`.
    pub fn series(&self, d: u32) -> Series<BigRational> {
        let t = self.u_truncation;
        let mut coeffs = vec![BigRational::zero(); (t + 3) as usize];
        for g in 0..=self.genus_max() {
            coeffs[2 * g as usize] = self.get(g, d);
        }
        Series::with_truncation(Var::U, -2, coeffs, t)
    }
}

/// Memoized `sine_bracket(k, g, order)` for one truncation order.
struct BracketCache {
    order: i64,
    cache: HashMap<(u32, u32), Series<BigRational>>,
}

impl BracketCache {
    fn new(order: i64) -> Self {
        Self { order, cache: HashMap::new() }
    }

    fn get(&mut self, k: u32, g: u32) -> Result<&Series<BigRational>> {
        if !self.cache.contains_key(&(k, g)) {
            let s = sine_bracket(k, g, self.order)?;
            self.cache.insert((k, g), s);
        }
        Ok(&self.cache[&(k, g)])
    }
}

fn divisors(n: u32) -> impl Iterator<Item = u32> {
    (1..=n).filter(move |k| n.is_multiple_of(*k))
}

/// Accumulates `sum_{k | grade, k >= k_min} (1/k) sum_g n_{g, grade/k} (2 sin(k u/2))^{2g-2}`.
fn multiple_cover_sum(
    table: &BpsTable,
    grade: u32,
    k_min: u32,
    cache: &mut BracketCache,
) -> Result<Series<BigRational>> {
    let order = cache.order;
    let mut acc = Series::zero(Var::U, order);
    for k in divisors(grade).filter(|&k| k >= k_min) {
        let weight = BigRational::new(BigInt::one(), BigInt::from(k));
        for (g, n) in table.grade(grade / k) {
            if 2 * g as i64 - 2 > order {
                continue;
            }
            let term = cache.get(k, g)?.scale(&(n * &weight));
            acc = acc.add(&term)?;
        }
    }
    Ok(acc)
}

/// The connected u-series at one class grade generated by a BPS table.
pub fn gw_series(table: &BpsTable, grade: u32, u_order: i64) -> Result<Series<BigRational>> {
    if u_order < -2 {
        return Err(Error::OrderTooSmall { order: u_order, required: -2 });
    }
    let mut cache = BracketCache::new(u_order);
    let s = multiple_cover_sum(table, grade, 1, &mut cache)?;
    check_even(&s)?;
    Ok(s)
}

fn check_even(s: &Series<BigRational>) -> Result<()> {
    match s.terms().find(|(k, _)| k.rem_euclid(2) == 1) {
        Some((degree, _)) => Err(Error::OddCoefficient { degree }),
        None => Ok(()),
    }
}

/// Forward transform: BPS numbers to Gromov-Witten invariants for grades
/// `1..=d_max`, exact through `u^{u_order}`.
pub fn gw_from_bps(table: &BpsTable, d_max: u32, u_order: i64) -> Result<GwPotential> {
    if d_max == 0 {
        return Err(Error::InvalidArgument("d_max must be at least 1".into()));
    }
    let mut pot = GwPotential::new(d_max, u_order)?;
    let mut cache = BracketCache::new(u_order);
    for grade in 1..=d_max {
        let s = multiple_cover_sum(table, grade, 1, &mut cache)?;
        check_even(&s)?;
        for g in 0..=pot.genus_max() {
            if let Some(c) = s.coeff(2 * g as i64 - 2) {
                pot.insert(g, grade, c)?;
            }
        }
    }
    Ok(pot)
}

/// Inverse transform. Grade by grade the imprimitive contributions
/// (`k >= 2`, already known) are subtracted, then genus by genus the
/// primitive `(2 sin(u/2))^{2g-2}` terms are peeled off from the bottom.
pub fn bps_from_gw(pot: &GwPotential, d_max: u32) -> Result<BpsTable> {
    if d_max == 0 || d_max > pot.d_max {
        return Err(Error::InconsistentRange(format!(
            "requested d_max={d_max} but the potential covers 1..={}",
            pot.d_max
        )));
    }
    let order = pot.u_truncation;
    let mut cache = BracketCache::new(order);
    let mut table = BpsTable::new();
    for grade in 1..=d_max {
        let covers = multiple_cover_sum(&table, grade, 2, &mut cache)?;
        let mut residual = pot.series(grade).sub(&covers)?;
        for g in 0..=pot.genus_max() {
            let degree = 2 * g as i64 - 2;
            let c = residual.coeff(degree).expect("degree within truncation");
            if c.is_zero() {
                continue;
            }
            residual = residual.sub(&cache.get(1, g)?.scale(&c))?;
            table.insert(g, grade, c);
        }
        debug_assert!(residual.is_zero());
    }
    Ok(table)
}
