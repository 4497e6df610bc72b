use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use kkv_core::algebra::{RationalFunction, Series};
use kkv_core::bps::{default_u_order, gw_from_bps, BpsTable};
use kkv_core::checks::{run_checks, CheckConfig};
use kkv_core::kkv::{bps_grid_from_kkv, kkv_product, yau_zaslow_series};
use kkv_core::nl::{demo_labels, NlMatrix, SyntheticFibration};
use kkv_core::pairs::{bps_table_for_label, mnop_check, multiple_cover, HodgeLabel};

#[derive(Parser, Debug)]
#[command(name = "kkv", version, about = "Exact K3 BPS tables, GW potentials and pairs series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Largest h (table, yau-zaslow, check).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hmax: Option<i64>,
    /// Largest genus.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gmax: Option<i64>,
    /// Largest class degree d.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub dmax: Option<i64>,
    /// Square label h of the primitive class (square 2h - 2).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<i64>,
    /// Divisibility d of the class d * beta.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// u-order of GW series; positive and even.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub umax: Option<i64>,
    /// q-order of pairs expansions.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub qmax: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Use the table with the single entry n_{0,1} = 1 (gw).
    #[arg(long, global = true)]
    pub single_state: bool,
    /// Report q <-> 1/q symmetry (pairs).
    #[arg(long, global = true)]
    pub check_symmetry: bool,
    /// Perturb one pairs function in the suite (check, testing only).
    #[arg(long, global = true, hide = true)]
    pub inject_fault: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// BPS numbers n_{g,h} from the KKV product.
    Table,
    /// GW invariants N_{g,d beta} from a BPS table.
    Gw,
    /// Pairs rational function of the class d * beta.
    Pairs,
    /// Compare GW and pairs series of one class under q = -e^{iu}.
    MnopCheck,
    /// Eta-product coefficients against the z = 1 KKV specialization.
    YauZaslow,
    /// Synthetic K3-fibration through a random NL system.
    NlDemo,
    /// Run the full identity suite.
    Check,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid configuration (exit 2).
    Usage(String),
    /// An identity or internal assertion failed (exit 1).
    Check(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) => m,
        }
    }
}

impl From<kkv_core::Error> for Failure {
    fn from(e: kkv_core::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

/// Output of a command: the rendered text, plus a failure if an identity
/// did not hold (the report is still emitted).
pub struct Outcome {
    pub text: String,
    pub failure: Option<Failure>,
}

fn ok(text: String) -> Result<Outcome, Failure> {
    Ok(Outcome { text, failure: None })
}

fn non_negative(name: &str, v: Option<i64>, default: i64) -> Result<u32, Failure> {
    let v = v.unwrap_or(default);
    u32::try_from(v).map_err(|_| Failure::Usage(format!("--{name} must be a non-negative integer, got {v}")))
}

fn positive(name: &str, v: Option<i64>, default: i64) -> Result<u32, Failure> {
    match non_negative(name, v, default)? {
        0 => Err(Failure::Usage(format!("--{name} must be at least 1"))),
        n => Ok(n),
    }
}

fn u_order(v: Option<i64>, default: i64) -> Result<i64, Failure> {
    let u = v.unwrap_or(default);
    if u <= 0 || u % 2 != 0 {
        return Err(Failure::Usage(format!("--umax must be a positive even integer, got {u}")));
    }
    Ok(u)
}

fn reject_csv(cli: &Cli) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(Failure::Usage("csv output is only available for `table`".into()));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.command != Command::Table {
        reject_csv(cli)?;
    }
    match cli.command {
        Command::Table => cmd_table(cli),
        Command::Gw => cmd_gw(cli),
        Command::Pairs => cmd_pairs(cli),
        Command::MnopCheck => cmd_mnop_check(cli),
        Command::YauZaslow => cmd_yau_zaslow(cli),
        Command::NlDemo => cmd_nl_demo(cli),
        Command::Check => cmd_check(cli),
    }
}

fn rational(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

fn integer(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

fn series_json(s: &Series<BigRational>) -> Value {
    json!({
        "min_degree": s.min_degree(),
        "truncation": s.truncation(),
        "coefficients": s.coeffs().iter().map(rational).collect::<Vec<_>>(),
    })
}

fn ratfn_json(f: &RationalFunction) -> Value {
    json!({
        "numerator": f.numerator().coeffs().iter().map(rational).collect::<Vec<_>>(),
        "denominator": f.denominator().coeffs().iter().map(rational).collect::<Vec<_>>(),
    })
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn cmd_table(cli: &Cli) -> Result<Outcome, Failure> {
    let h_max = non_negative("hmax", cli.hmax, 4)?;
    let g_max = non_negative("gmax", cli.gmax, h_max as i64)?.min(h_max);
    let grid = bps_grid_from_kkv(h_max)?;
    let rows: Vec<Vec<BigInt>> = grid.rows().into_iter().take(g_max as usize + 1).collect();
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "h_max": h_max,
            "g_max": g_max,
            "rows": rows.iter().map(|r| r.iter().map(integer).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("g");
            for h in 0..=h_max {
                let _ = write!(out, ",h={h}");
            }
            out.push('\n');
            for (g, row) in rows.iter().enumerate() {
                let _ = write!(out, "{g}");
                for n in row {
                    let _ = write!(out, ",{n}");
                }
                out.push('\n');
            }
            out
        }
        Format::Pretty => {
            let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(2);
            let mut out = format!("{:>5}", "g\\h");
            for h in 0..=h_max {
                let _ = write!(out, " {h:>width$}");
            }
            out.push('\n');
            for (g, row) in cells.iter().enumerate() {
                let _ = write!(out, "{g:>5}");
                for c in row {
                    let _ = write!(out, " {c:>width$}");
                }
                out.push('\n');
            }
            out
        }
    };
    ok(text)
}

fn cmd_gw(cli: &Cli) -> Result<Outcome, Failure> {
    let d_max = positive("dmax", cli.dmax, 3)?;
    let g_max = non_negative("gmax", cli.gmax, 2)?;
    let u = u_order(cli.umax, default_u_order(g_max))?;
    let h = cli.h.unwrap_or(0);
    let table = if cli.single_state {
        BpsTable::single_state()
    } else {
        let label = HodgeLabel::new(d_max, h)?;
        let grid = bps_grid_from_kkv(label.h_of(1).max(0) as u32)?;
        bps_table_for_label(label, &grid, u)?.restricted(g_max, d_max)
    };
    let pot = gw_from_bps(&table, d_max, u)?;
    let g_top = g_max.min(pot.genus_max());
    let mut invariants = Vec::new();
    let mut pretty = String::new();
    for d in 1..=d_max {
        for g in 0..=g_top {
            let n = pot.get(g, d);
            let _ = writeln!(pretty, "N_{{{g},{d}}} = {n}");
            invariants.push(json!({ "g": g, "d": d, "value": rational(&n) }));
        }
    }
    let text = match cli.format {
        Format::Json => {
            let series: serde_json::Map<String, Value> =
                (1..=d_max).map(|d| (d.to_string(), series_json(&pot.series(d)))).collect();
            to_json(&json!({
                "h": if cli.single_state { Value::Null } else { json!(h) },
                "single_state": cli.single_state,
                "d_max": d_max,
                "u_order": u,
                "invariants": invariants,
                "series": series,
            }))
        }
        _ => pretty,
    };
    ok(text)
}

fn cmd_pairs(cli: &Cli) -> Result<Outcome, Failure> {
    let d = positive("d", cli.d, 1)?;
    let h = cli.h.unwrap_or(0);
    let q_order = non_negative("qmax", cli.qmax, 10)? as i64;
    let label = HodgeLabel::new(d, h)?;
    let grid = bps_grid_from_kkv(label.h_of(1).max(0) as u32)?;
    let f = multiple_cover(label, &grid)?;
    let expansion = f.expand(q_order);
    let symmetric = cli.check_symmetry.then(|| f.is_q_inversion_symmetric());
    let text = match cli.format {
        Format::Json => {
            let mut v = json!({
                "label": label,
                "function": ratfn_json(&f),
                "expansion": series_json(&expansion),
            });
            if let Some(s) = symmetric {
                v["symmetric"] = json!(s);
            }
            to_json(&v)
        }
        _ => {
            let mut out = format!("P{label}(q) = {f}\nexpansion: {expansion}\n");
            if let Some(s) = symmetric {
                let _ = writeln!(out, "symmetric: {s}");
            }
            out
        }
    };
    let failure = (symmetric == Some(false)).then(|| Failure::Check(format!("{label}: not invariant under q <-> 1/q")));
    Ok(Outcome { text, failure })
}

fn cmd_mnop_check(cli: &Cli) -> Result<Outcome, Failure> {
    let d = positive("d", cli.d, 1)?;
    let h = cli.h.unwrap_or(0);
    let u = u_order(cli.umax, 12)?;
    let label = HodgeLabel::new(d, h)?;
    let grid = bps_grid_from_kkv(label.h_of(1).max(0) as u32)?;
    let report = mnop_check(label, &grid, u)?;
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "label": label,
            "u_order": u,
            "passed": report.passed(),
            "mismatch_degree": report.mismatch,
            "gw": series_json(&report.gw),
            "pairs": series_json(&report.pairs),
        })),
        _ => {
            let status = if report.passed() { "pass" } else { "FAIL" };
            format!("{label} through u^{u}: {status}\nGW:    {}\npairs: {}\n", report.gw, report.pairs)
        }
    };
    let failure = report.mismatch.map(|k| Failure::Check(format!("{label}: GW and pairs differ at u^{k}")));
    Ok(Outcome { text, failure })
}

fn cmd_yau_zaslow(cli: &Cli) -> Result<Outcome, Failure> {
    let h_max = non_negative("hmax", cli.hmax, 20)?;
    let yz = yau_zaslow_series(h_max);
    let at_one = kkv_product(h_max).at_z_one();
    let mismatch = yz.first_mismatch(&at_one, h_max as i64)?;
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "h_max": h_max,
            "eta_product": series_json(&yz),
            "kkv_at_z_one": series_json(&at_one),
            "agree": mismatch.is_none(),
        })),
        _ => format!("{yz}\nagrees with z = 1 specialization: {}\n", mismatch.is_none()),
    };
    let failure = mismatch.map(|h| Failure::Check(format!("eta product and z = 1 specialization differ at q^{h}")));
    Ok(Outcome { text, failure })
}

fn cmd_nl_demo(cli: &Cli) -> Result<Outcome, Failure> {
    let u = u_order(cli.umax, 8)?;
    let seed = cli.seed.unwrap_or(0);
    let labels = demo_labels();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nl = NlMatrix::random_invertible(&labels, &mut rng)?;
    let grid = bps_grid_from_kkv(20)?;
    let fib = SyntheticFibration::build(nl, &grid, u)?;
    let report = fib.transfer(u)?;
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "seed": seed,
            "u_order": u,
            "labels": labels,
            "nl": fib.nl.entries().iter().map(|r| r.iter().map(rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "fibre_pairs": fib.fib_pairs.values().iter().map(ratfn_json).collect::<Vec<_>>(),
            "fibre_gw": fib.fib_gw.values().iter().map(series_json).collect::<Vec<_>>(),
            "passed": report.passed(),
            "failures": report.failures.iter().map(|(l, why)| json!({ "label": l, "reason": why })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = String::from("NL matrix (rows beta_i, columns K3 labels):\n");
            for (beta, row) in fib.nl.rows().iter().zip(fib.nl.entries()) {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "  {beta}: [{}]", cells.join(", "));
            }
            let _ = writeln!(out, "columns: {}", labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            for (beta, f) in fib.fib_pairs.iter() {
                let _ = writeln!(out, "Z_P({beta}) = {f}");
            }
            let status = if report.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(out, "transfer through u^{u}: {status}");
            out
        }
    };
    let failure = report.failures.first().map(|(l, why)| Failure::Check(format!("transfer failed at {l}: {why}")));
    Ok(Outcome { text, failure })
}

fn cmd_check(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = CheckConfig {
        h_max: non_negative("hmax", cli.hmax, 20)?,
        u_order: u_order(cli.umax, 12)?,
        seed: cli.seed.unwrap_or(0),
        inject_fault: cli.inject_fault,
        ..CheckConfig::default()
    };
    let report = run_checks(&cfg);
    let text = match cli.format {
        Format::Json => to_json(&json!({ "passed": report.passed(), "checks": report.checks })),
        _ => {
            let mut out = String::new();
            for c in &report.checks {
                let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            out
        }
    };
    let failure = report.first_failure().map(|c| Failure::Check(format!("{}: {}", c.name, c.detail)));
    Ok(Outcome { text, failure })
}
