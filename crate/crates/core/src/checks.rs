//! The identity suite: every check recomputes one side of an identity by an
//! independent route and reports the first disagreement.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{rat, GradedSeries, Polynomial, RationalFunction, Series, SymLaurentPoly, Var};
use crate::bps::{bps_from_gw, default_u_order, gw_from_bps, sine_bracket, BpsTable};
use crate::error::Result;
use crate::kkv::{bps_grid_from_kkv, kkv_product, lambda_decompose, lambda_recompose, yau_zaslow_series, KkvBpsGrid};
use crate::nl::{
    combine, demo_labels, invert_correspondence, ClassLabel, FibreClass, InvariantVector, NlMatrix, SyntheticFibration,
};
use crate::pairs::{gw_series_for_label, multiple_cover, substitute_q_minus_exp, HodgeLabel};

/// The low-genus, low-`h` corner of the K3 BPS table.
pub const KNOWN_TABLE: [[i64; 5]; 5] =
    [[1, 24, 324, 3200, 25650], [0, -2, -54, -800, -8550], [0, 0, 3, 88, 1401], [0, 0, 0, -4, -126], [0, 0, 0, 0, 5]];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Bound for the Yau-Zaslow and diagonal checks.
    pub h_max: u32,
    /// u-order of the GW/pairs comparisons; positive and even.
    pub u_order: i64,
    pub seed: u64,
    /// Random cases per property suite.
    pub cases: usize,
    /// Perturbs one pairs function in the MNOP grid, for testing the report.
    pub inject_fault: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { h_max: 20, u_order: 12, seed: 0, cases: 100, inject_fault: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// `Ok(Ok(detail))` on success, `Ok(Err(location))` on a failed identity.
pub type Verdict = Result<std::result::Result<String, String>>;

type Suite = Box<dyn Fn(&CheckConfig) -> Verdict>;

/// Runs all checks in a fixed order.
pub fn run_checks(cfg: &CheckConfig) -> CheckReport {
    let suites: Vec<(&str, Suite)> = vec![
        ("kkv-table", Box::new(|_| check_table())),
        ("yau-zaslow", Box::new(|c| check_yau_zaslow(c.h_max))),
        ("diagonal-and-vanishing", Box::new(|c| check_diagonal(c.h_max))),
        ("aspinwall-morrison", Box::new(|_| check_aspinwall_morrison(6))),
        ("footnote-series", Box::new(|_| check_footnote())),
        ("substitution-identity", Box::new(|c| check_substitution(c.u_order))),
        ("mnop-grid", Box::new(|c| check_mnop_grid(c.u_order, c.inject_fault))),
        ("exp-log-roundtrip", Box::new(|c| prop_exp_log(c.seed, c.cases))),
        ("gv-roundtrip", Box::new(|c| prop_gv_roundtrip(c.seed, c.cases))),
        ("lambda-roundtrip", Box::new(|c| prop_lambda_roundtrip(c.seed, c.cases))),
        ("pairs-symmetry", Box::new(|c| prop_pairs_symmetry(c.seed, c.cases))),
        ("nl-roundtrip", Box::new(|c| prop_nl_roundtrip(c.seed, c.cases))),
        ("nl-fault-detection", Box::new(|c| prop_nl_fault_detection(c.seed, c.cases))),
    ];
    let mut checks = Vec::new();
    for (name, run) in suites {
        let start = Instant::now();
        let (passed, detail) = match run(cfg) {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        log::info!("{name}: {} in {:?}", if passed { "pass" } else { "FAIL" }, start.elapsed());
        checks.push(CheckOutcome { name: name.to_string(), passed, detail });
    }
    CheckReport { checks }
}

pub fn check_table() -> Verdict {
    let grid = bps_grid_from_kkv(4)?;
    for (g, row) in KNOWN_TABLE.iter().enumerate() {
        for (h, &want) in row.iter().enumerate() {
            let got = grid.n(g as u32, h as i64)?;
            if got != BigInt::from(want) {
                return Ok(Err(format!("n_{{{g},{h}}} = {got}, expected {want}")));
            }
        }
    }
    Ok(Ok("5x5 table matches".into()))
}

pub fn check_yau_zaslow(h_max: u32) -> Verdict {
    let yz = yau_zaslow_series(h_max);
    for (h, want) in KNOWN_TABLE[0].iter().enumerate().take(h_max as usize + 1) {
        if yz.coeff(h as i64) != Some(rat(*want, 1)) {
            return Ok(Err(format!("q^{h} coefficient of the eta product is not {want}")));
        }
    }
    let at_one = kkv_product(h_max).at_z_one();
    match yz.first_mismatch(&at_one, h_max as i64)? {
        Some(h) => Ok(Err(format!("z -> 1 specialization differs at q^{h}"))),
        None => Ok(Ok(format!("agrees through q^{h_max}"))),
    }
}

pub fn check_diagonal(h_max: u32) -> Verdict {
    let grid = bps_grid_from_kkv(h_max)?;
    for h in 0..=h_max {
        let sign = if h % 2 == 0 { 1 } else { -1 };
        let want = BigInt::from(sign * (h as i64 + 1));
        let got = grid.n(h, h as i64)?;
        if got != want {
            return Ok(Err(format!("n_{{{h},{h}}} = {got}, expected {want}")));
        }
        for g in h + 1..=h_max {
            if !grid.n(g, h as i64)?.is_zero() {
                return Ok(Err(format!("n_{{{g},{h}}} is nonzero")));
            }
        }
    }
    Ok(Ok(format!("diagonal and vanishing hold for h <= {h_max}")))
}

pub fn check_aspinwall_morrison(d_max: u32) -> Verdict {
    let table = BpsTable::single_state();
    let pot = gw_from_bps(&table, d_max, default_u_order(0))?;
    for d in 1..=d_max {
        let want = BigRational::new(BigInt::one(), BigInt::from(d).pow(3));
        let got = pot.get(0, d);
        if got != want {
            return Ok(Err(format!("N_{{0,{d}}} = {got}, expected {want}")));
        }
    }
    let back = bps_from_gw(&pot, d_max)?;
    if back != table {
        return Ok(Err("inverse transform does not recover the single state".into()));
    }
    Ok(Ok(format!("N_{{0,d}} = 1/d^3 for d <= {d_max}")))
}

fn footnote_function() -> RationalFunction {
    RationalFunction::new(Polynomial::from_ints(&[0, 1]), Polynomial::from_ints(&[1, 2, 1]))
        .expect("nonzero denominator")
}

pub fn check_footnote() -> Verdict {
    let f = footnote_function();
    let s = f.expand(10);
    for k in 0..=10i64 {
        let want = if k == 0 {
            0
        } else if k % 2 == 1 {
            k
        } else {
            -k
        };
        if s.coeff(k) != Some(rat(want, 1)) {
            return Ok(Err(format!("coefficient of q^{k} is not {want}")));
        }
    }
    if !f.is_q_inversion_symmetric() {
        return Ok(Err("q/(1+q)^2 reported asymmetric".into()));
    }
    Ok(Ok("q - 2q^2 + 3q^3 - ... - 10q^10, symmetric".into()))
}

pub fn check_substitution(u_order: i64) -> Verdict {
    let lhs = substitute_q_minus_exp(&footnote_function(), u_order)?;
    let rhs = sine_bracket(1, 0, u_order)?;
    match lhs.first_mismatch(&rhs, u_order)? {
        Some(k) => Ok(Err(format!("coefficient of u^{k} differs"))),
        None => Ok(Ok(format!("agrees through u^{u_order}"))),
    }
}

/// Grid size needed for all labels `d <= d_max`, `0 <= h <= h_max`.
fn grid_bound(d_max: u32, h_max: i64) -> u32 {
    let d = d_max as i64;
    (d * d * (h_max - 1) + 1).max(1) as u32
}

pub fn check_mnop_grid(u_order: i64, inject_fault: bool) -> Verdict {
    let grid = bps_grid_from_kkv(grid_bound(3, 3))?;
    for d in 1..=3 {
        for h in 0..=3 {
            let label = HodgeLabel::new(d, h)?;
            let gw = gw_series_for_label(label, &grid, u_order)?;
            let mut pairs = multiple_cover(label, &grid)?;
            if inject_fault && d == 2 && h == 1 {
                let bump = RationalFunction::monomial(BigRational::one(), 1)
                    .add(&RationalFunction::monomial(BigRational::one(), -1));
                pairs = pairs.add(&bump);
            }
            let pairs = substitute_q_minus_exp(&pairs, u_order)?;
            if let Some(k) = gw.first_mismatch(&pairs, u_order)? {
                return Ok(Err(format!("{label}: coefficient of u^{k} differs")));
            }
        }
    }
    Ok(Ok(format!("d <= 3, h <= 3 agree through u^{u_order}")))
}

fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=5)))
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn random_ratfn(rng: &mut ChaCha8Rng) -> RationalFunction {
    let num = Polynomial::new((0..rng.gen_range(1..=3)).map(|_| small_rational(rng)).collect());
    let den = Polynomial::from_ints(&[1, 1]).pow(rng.gen_range(0..=2));
    RationalFunction::new(num, den)
        .expect("nonzero denominator")
        .mul(&RationalFunction::monomial(BigRational::one(), rng.gen_range(-1..=1)))
}

fn suite(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

pub fn prop_exp_log(seed: u64, cases: usize) -> Verdict {
    let mut rng = suite(seed, 1);
    for case in 0..cases {
        let max_degree = rng.gen_range(1..=4usize);
        let mut entries = BTreeMap::new();
        for d in 1..=max_degree {
            if rng.gen_bool(0.7) {
                entries.insert(d, random_ratfn(&mut rng));
            }
        }
        let a = GradedSeries::connected(max_degree, entries)?;
        let back = a.exp()?.log()?;
        if back != a {
            return Ok(Err(format!("case {case}: log(exp(a)) != a")));
        }
    }
    Ok(Ok(format!("{cases} cases")))
}

pub fn prop_gv_roundtrip(seed: u64, cases: usize) -> Verdict {
    let mut rng = suite(seed, 2);
    for case in 0..cases {
        let g_max = rng.gen_range(0..=3u32);
        let d_max = rng.gen_range(1..=4u32);
        let mut table = BpsTable::new();
        for d in 1..=d_max {
            for g in 0..=g_max {
                if rng.gen_bool(0.6) {
                    table.insert(g, d, nonzero_rational(&mut rng));
                }
            }
        }
        let pot = gw_from_bps(&table, d_max, default_u_order(g_max))?;
        let back = bps_from_gw(&pot, d_max)?;
        if back != table {
            return Ok(Err(format!("case {case}: bps(gw(n)) != n")));
        }
    }
    Ok(Ok(format!("{cases} cases")))
}

pub fn prop_lambda_roundtrip(seed: u64, cases: usize) -> Verdict {
    let mut rng = suite(seed, 3);
    for case in 0..cases {
        let half: Vec<BigRational> = (0..rng.gen_range(1..=7)).map(|_| small_rational(&mut rng)).collect();
        let p = SymLaurentPoly::from_half(half);
        if lambda_recompose(&lambda_decompose(&p)) != p {
            return Ok(Err(format!("case {case}: recompose(decompose(p)) != p")));
        }
        let mut c: Vec<BigRational> = (0..rng.gen_range(1..=7)).map(|_| small_rational(&mut rng)).collect();
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        if lambda_decompose(&lambda_recompose(&c)) != c {
            return Ok(Err(format!("case {case}: decompose(recompose(c)) != c")));
        }
    }
    Ok(Ok(format!("{cases} cases")))
}

/// Symmetry of every pairs function for `d <= 4`, `h <= 5`: once on the
/// KKV grid, then on random integer grids.
pub fn prop_pairs_symmetry(seed: u64, cases: usize) -> Verdict {
    let mut rng = suite(seed, 4);
    let grid = bps_grid_from_kkv(grid_bound(4, 5))?;
    for d in 1..=4 {
        for h in 0..=5 {
            let label = HodgeLabel::new(d, h)?;
            if !multiple_cover(label, &grid)?.is_q_inversion_symmetric() {
                return Ok(Err(format!("KKV grid, {label}: not symmetric")));
            }
        }
    }
    for case in 0..cases {
        let d = rng.gen_range(1..=4u32);
        let h = rng.gen_range(-1..=5i64);
        let label = HodgeLabel::new(d, h)?;
        let needed = label.h_of(1).max(0) as usize;
        let columns = (0..=needed)
            .map(|col| {
                let len = rng.gen_range(0..=col.min(3) + 1);
                (0..len).map(|_| BigInt::from(rng.gen_range(-30i64..=30))).collect()
            })
            .collect();
        let grid = KkvBpsGrid::from_columns(columns)?;
        if !multiple_cover(label, &grid)?.is_q_inversion_symmetric() {
            return Ok(Err(format!("case {case}, {label}: not symmetric")));
        }
    }
    Ok(Ok(format!("24 KKV labels and {cases} random grids")))
}

fn label_pool() -> Vec<ClassLabel> {
    let mut pool = Vec::new();
    for m in 1..=3u32 {
        for h in -3..=6i64 {
            pool.push(ClassLabel { m, h });
        }
    }
    pool
}

fn random_nl(rng: &mut ChaCha8Rng, labels: &[ClassLabel]) -> Result<NlMatrix> {
    if rng.gen_bool(0.5) {
        NlMatrix::random_unitriangular(labels, rng)
    } else {
        NlMatrix::random_invertible(labels, rng)
    }
}

pub fn prop_nl_roundtrip(seed: u64, cases: usize) -> Verdict {
    let mut rng = suite(seed, 5);
    let pool = label_pool();
    for case in 0..cases {
        let n = rng.gen_range(1..=5);
        let labels: Vec<ClassLabel> = pool.choose_multiple(&mut rng, n).copied().collect();
        let nl = random_nl(&mut rng, &labels)?;
        let gw: Vec<Series<BigRational>> = labels
            .iter()
            .map(|_| {
                let coeffs = (0..5).map(|_| small_rational(&mut rng)).collect();
                Series::with_truncation(Var::U, -2, coeffs, 6)
            })
            .collect();
        let k3_gw = InvariantVector::new(labels.clone(), gw)?;
        if invert_correspondence(&combine(&k3_gw, &nl)?, &nl)? != k3_gw {
            return Ok(Err(format!("case {case}: GW vector not recovered")));
        }
        let pairs: Vec<RationalFunction> = labels.iter().map(|_| random_ratfn(&mut rng)).collect();
        let k3_pairs = InvariantVector::new(labels.clone(), pairs)?;
        let recovered = invert_correspondence(&combine(&k3_pairs, &nl)?, &nl)?;
        if recovered.values().iter().zip(k3_pairs.values()).any(|(a, b)| !a.cross_eq(b)) {
            return Ok(Err(format!("case {case}: pairs vector not recovered")));
        }
    }
    Ok(Ok(format!("{cases} cases")))
}

/// Random NL systems over the K3 data of [`demo_labels`]: the transfer
/// passes, and fails at some label after one pairs coefficient is changed.
pub fn prop_nl_fault_detection(seed: u64, cases: usize) -> Verdict {
    let mut rng = suite(seed, 6);
    let u_order = 6;
    let labels = demo_labels();
    let grid = bps_grid_from_kkv(20)?;
    let clean = SyntheticFibration::build(NlMatrix::identity(&labels)?, &grid, u_order)?;
    for case in 0..cases {
        let nl = random_nl(&mut rng, &labels)?;
        let mut fib = SyntheticFibration::from_k3(nl, clean.k3_gw.clone(), clean.k3_pairs.clone())?;
        let report = fib.transfer(u_order)?;
        if !report.passed() {
            return Ok(Err(format!("case {case}: clean transfer failed at {}", report.failures[0].0)));
        }
        let beta = FibreClass(rng.gen_range(0..labels.len() as u32));
        let c = nonzero_rational(&mut rng);
        let n = rng.gen_range(-3..=3);
        fib.inject_pairs_fault(beta, c.clone(), n)?;
        if fib.transfer(u_order)?.passed() {
            let sign = if c.is_negative() { "-" } else { "+" };
            return Ok(Err(format!("case {case}: fault {sign}{} q^{n} at {beta} not detected", c.abs())));
        }
    }
    Ok(Ok(format!("{cases} clean and faulty transfers")))
}
