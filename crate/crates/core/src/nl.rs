//! Noether-Lefschetz correspondences as exact linear systems.
//!
//! Fibration invariants are `NL`-weighted sums of K3 invariants indexed by
//! divisibility and square, identically for GW u-series and connected pairs
//! rational functions:
//!
//! ```text
//! fib[beta] = sum_{(m,h)} NL[beta][(m,h)] * k3[(m,h)]
//! ```
//!
//! The matrix entries used here are synthetic rationals; only the linear
//! algebra of the correspondence and of its inversion is modeled.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Module, RationalFunction, Series};
use crate::error::{Error, Result};
use crate::kkv::KkvBpsGrid;
use crate::pairs::{gw_series_for_label, multiple_cover, substitute_q_minus_exp, HodgeLabel};

/// A K3 class of divisibility `m` and square `2h - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassLabel {
    pub m: u32,
    pub h: i64,
}

impl ClassLabel {
    pub fn new(m: u32, h: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("divisibility m must be at least 1".into()));
        }
        Ok(Self { m, h })
    }

    /// The class as `m * beta_0` with `beta_0` primitive, if the square
    /// allows it: `2h - 2 = m^2 (2h_0 - 2)`.
    pub fn hodge_label(&self) -> Option<HodgeLabel> {
        let mm = (self.m as i64) * (self.m as i64);
        if (self.h - 1) % mm != 0 {
            return None;
        }
        Some(HodgeLabel { d: self.m, h: (self.h - 1) / mm + 1 })
    }

    pub fn from_hodge(label: HodgeLabel) -> Self {
        let d = label.d as i64;
        Self { m: label.d, h: d * d * (label.h - 1) + 1 }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, h={})", self.m, self.h)
    }
}

/// A fibre class of the K3-fibred threefold (an abstract index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FibreClass(pub u32);

impl fmt::Display for FibreClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "beta{}", self.0)
    }
}

/// Values indexed by a finite list of distinct labels.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantVector<K, V> {
    labels: Vec<K>,
    values: Vec<V>,
}

impl<K: Copy + Eq + Hash + fmt::Display, V> InvariantVector<K, V> {
    pub fn new(labels: Vec<K>, values: Vec<V>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::IndexMismatch(format!("{} labels for {} values", labels.len(), values.len())));
        }
        check_distinct(&labels)?;
        Ok(Self { labels, values })
    }

    pub fn labels(&self) -> &[K] {
        &self.labels
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn get(&self, label: &K) -> Option<&V> {
        self.labels.iter().position(|l| l == label).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &V)> {
        self.labels.iter().zip(&self.values)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Replaces the value at `label`.
    pub fn set(&mut self, label: &K, value: V) -> Result<()> {
        let i = self
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::IndexMismatch(format!("no entry {label}")))?;
        self.values[i] = value;
        Ok(())
    }

    /// Values reordered to follow `order`, which must be a permutation of
    /// the labels.
    fn aligned(&self, order: &[K]) -> Result<Vec<&V>> {
        if order.len() != self.labels.len() {
            return Err(Error::IndexMismatch(format!("{} labels, expected {}", self.labels.len(), order.len())));
        }
        let index: HashMap<K, usize> = self.labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        order
            .iter()
            .map(|l| index.get(l).map(|&i| &self.values[i]).ok_or_else(|| Error::IndexMismatch(format!("missing {l}"))))
            .collect()
    }
}

fn check_distinct<K: Eq + Hash + fmt::Display>(labels: &[K]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::IndexMismatch(format!("duplicate label {l}")));
        }
    }
    Ok(())
}

/// `NL[beta][(m,h)]`: rows are fibre classes, columns K3 class labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlMatrix {
    rows: Vec<FibreClass>,
    cols: Vec<ClassLabel>,
    entries: Vec<Vec<BigRational>>,
}

impl NlMatrix {
    pub fn new(rows: Vec<FibreClass>, cols: Vec<ClassLabel>, entries: Vec<Vec<BigRational>>) -> Result<Self> {
        check_distinct(&rows)?;
        check_distinct(&cols)?;
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::IndexMismatch(format!("entries do not form a {}x{} matrix", rows.len(), cols.len())));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Square matrix over `cols` with rows `beta0, beta1, ...`.
    fn square(cols: &[ClassLabel], entry: impl FnMut(usize, usize) -> BigRational) -> Result<Self> {
        let n = cols.len();
        let rows = (0..n as u32).map(FibreClass).collect();
        let mut entry = entry;
        let entries = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
        Self::new(rows, cols.to_vec(), entries)
    }

    pub fn identity(cols: &[ClassLabel]) -> Result<Self> {
        Self::square(cols, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn zero(cols: &[ClassLabel]) -> Result<Self> {
        Self::square(cols, |_, _| BigRational::zero())
    }

    /// Upper triangular with unit diagonal and small random rationals above it.
    pub fn random_unitriangular<R: Rng>(cols: &[ClassLabel], rng: &mut R) -> Result<Self> {
        Self::square(cols, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => BigRational::one(),
            std::cmp::Ordering::Less => small_rational(rng),
            std::cmp::Ordering::Greater => BigRational::zero(),
        })
    }

    /// A dense random matrix, redrawn until it is invertible.
    pub fn random_invertible<R: Rng>(cols: &[ClassLabel], rng: &mut R) -> Result<Self> {
        loop {
            let m = Self::square(cols, |_, _| small_rational(rng))?;
            if m.rank() == cols.len() {
                return Ok(m);
            }
        }
    }

    pub fn rows(&self) -> &[FibreClass] {
        &self.rows
    }

    pub fn cols(&self) -> &[ClassLabel] {
        &self.cols
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn get(&self, row: FibreClass, col: ClassLabel) -> Option<&BigRational> {
        let i = self.rows.iter().position(|r| *r == row)?;
        let j = self.cols.iter().position(|c| *c == col)?;
        Some(&self.entries[i][j])
    }

    pub fn rank(&self) -> usize {
        let rhs: Vec<BigRational> = vec![BigRational::zero(); self.rows.len()];
        eliminate(&self.entries, rhs).map(|(_, rank)| rank).unwrap_or(0)
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=4)))
}

/// Gauss-Jordan elimination of `A x = b` with module-valued `b`.
/// Returns the reduced right-hand sides (row `i` holds the pivot of the
/// `i`-th pivot column) and the rank.
fn eliminate<V: Module>(a: &[Vec<BigRational>], mut rhs: Vec<V>) -> Result<(Vec<V>, usize)> {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigRational>> = a.to_vec();
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&r| !Zero::is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(rank, pivot);
        rhs.swap(rank, pivot);
        let inv = a[rank][col].recip();
        for x in a[rank].iter_mut() {
            *x *= &inv;
        }
        rhs[rank] = rhs[rank].scale(&inv);
        for i in 0..n_rows {
            if i == rank || Zero::is_zero(&a[i][col]) {
                continue;
            }
            let f = a[i][col].clone();
            let pivot_row = a[rank].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
            rhs[i] = rhs[i].try_add(&rhs[rank].scale(&-f))?;
        }
        rank += 1;
    }
    Ok((rhs, rank))
}

/// Fibration invariants from K3 invariants: `fib = NL * k3`.
pub fn combine<V: Module>(
    k3: &InvariantVector<ClassLabel, V>,
    nl: &NlMatrix,
) -> Result<InvariantVector<FibreClass, V>> {
    let values = k3.aligned(&nl.cols)?;
    if values.is_empty() {
        return Err(Error::IndexMismatch("empty K3 vector".into()));
    }
    let mut out = Vec::with_capacity(nl.rows.len());
    for row in &nl.entries {
        let mut acc = values[0].scale(&row[0]);
        for (v, w) in values.iter().zip(row).skip(1) {
            acc = acc.try_add(&v.scale(w))?;
        }
        out.push(acc);
    }
    InvariantVector::new(nl.rows.clone(), out)
}

/// Recovers the K3 vector from fibration invariants by exact elimination.
pub fn invert_correspondence<V: Module>(
    fib: &InvariantVector<FibreClass, V>,
    nl: &NlMatrix,
) -> Result<InvariantVector<ClassLabel, V>> {
    let (r, c) = (nl.rows.len(), nl.cols.len());
    let rhs: Vec<V> = fib.aligned(&nl.rows)?.into_iter().cloned().collect();
    let (solved, rank) = eliminate(&nl.entries, rhs)?;
    if r != c || rank < c {
        return Err(Error::Singular { rows: r, cols: c, rank });
    }
    InvariantVector::new(nl.cols.clone(), solved)
}

/// Outcome of transferring the GW/pairs correspondence through an NL system.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    pub checked: Vec<ClassLabel>,
    /// Labels whose recovered series disagree, with the reason.
    pub failures: Vec<(ClassLabel, String)>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Inverts both fibration vectors and checks, label by label, that the
/// recovered GW u-series equals the recovered pairs function at `q = -e^{iu}`.
pub fn transfer_mnop(
    fib_gw: &InvariantVector<FibreClass, Series<BigRational>>,
    fib_pairs: &InvariantVector<FibreClass, RationalFunction>,
    nl: &NlMatrix,
    u_order: i64,
) -> Result<TransferReport> {
    let gw = invert_correspondence(fib_gw, nl)?;
    let pairs = invert_correspondence(fib_pairs, nl)?;
    let mut failures = Vec::new();
    for (label, gw_series) in gw.iter() {
        let pairs_fn = pairs.get(label).expect("same column labels");
        match substitute_q_minus_exp(pairs_fn, u_order) {
            Ok(s) => {
                if let Some(k) = gw_series.first_mismatch(&s, u_order)? {
                    failures.push((*label, format!("coefficient of u^{k} differs")));
                }
            }
            Err(e @ (Error::OddCoefficient { .. } | Error::ImaginaryCoefficient { .. })) => {
                failures.push((*label, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(TransferReport { checked: gw.labels().to_vec(), failures })
}

/// K3 and fibration invariants of a synthetic K3-fibration, all built from
/// one KKV grid.
#[derive(Clone, Debug)]
pub struct SyntheticFibration {
    pub nl: NlMatrix,
    pub k3_gw: InvariantVector<ClassLabel, Series<BigRational>>,
    pub k3_pairs: InvariantVector<ClassLabel, RationalFunction>,
    pub fib_gw: InvariantVector<FibreClass, Series<BigRational>>,
    pub fib_pairs: InvariantVector<FibreClass, RationalFunction>,
}

impl SyntheticFibration {
    /// Every column label of `nl` must be of the form `m * beta_0`
    /// (see [`ClassLabel::hodge_label`]).
    pub fn build(nl: NlMatrix, grid: &KkvBpsGrid, u_order: i64) -> Result<Self> {
        let mut gw = Vec::new();
        let mut pairs = Vec::new();
        for label in &nl.cols {
            let hodge = label
                .hodge_label()
                .ok_or_else(|| Error::InvalidArgument(format!("{label}: square not divisible by m^2")))?;
            gw.push(gw_series_for_label(hodge, grid, u_order)?);
            pairs.push(multiple_cover(hodge, grid)?);
        }
        let k3_gw = InvariantVector::new(nl.cols.clone(), gw)?;
        let k3_pairs = InvariantVector::new(nl.cols.clone(), pairs)?;
        Self::from_k3(nl, k3_gw, k3_pairs)
    }

    /// Combines given K3 invariants through `nl`.
    pub fn from_k3(
        nl: NlMatrix,
        k3_gw: InvariantVector<ClassLabel, Series<BigRational>>,
        k3_pairs: InvariantVector<ClassLabel, RationalFunction>,
    ) -> Result<Self> {
        let fib_gw = combine(&k3_gw, &nl)?;
        let fib_pairs = combine(&k3_pairs, &nl)?;
        Ok(Self { nl, k3_gw, k3_pairs, fib_gw, fib_pairs })
    }

    pub fn transfer(&self, u_order: i64) -> Result<TransferReport> {
        transfer_mnop(&self.fib_gw, &self.fib_pairs, &self.nl, u_order)
    }

    /// Adds `c q^n` to the pairs function of one fibre class.
    pub fn inject_pairs_fault(&mut self, beta: FibreClass, c: BigRational, n: i64) -> Result<()> {
        let current =
            self.fib_pairs.get(&beta).ok_or_else(|| Error::IndexMismatch(format!("no entry {beta}")))?.clone();
        self.fib_pairs.set(&beta, current.add(&RationalFunction::monomial(c, n)))
    }
}

/// A default set of K3 labels `(m, h)` for demonstrations: divisibility 1
/// and 2 classes with primitive parts of small square.
pub fn demo_labels() -> Vec<ClassLabel> {
    let mut out = Vec::new();
    for h0 in 0..=2 {
        out.push(ClassLabel::from_hodge(HodgeLabel { d: 1, h: h0 }));
    }
    for h0 in 0..=1 {
        out.push(ClassLabel::from_hodge(HodgeLabel { d: 2, h: h0 }));
    }
    out
}
