//! Command-line front end: exact evaluation, table generation, and the
//! verification suites, with deterministic machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 bad
//! configuration or precondition violation.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::addition::{inner_product_formula_check, theorem_verify};
use crate::kraw::{
    dim_vn, enumerate_x, kraw1, kraw_multi, orthogonality_check, MultiIndex,
};
use crate::lab::{
    compositions, verify_component_formula, verify_component_formula_t,
    verify_translation_identity, GroupElem, HarmonicContext, ZonalTable, MAX_TABLE,
};
use crate::numeric::{is_prime, rat, rat_i, rat_pow, ComplexHP, Rational};
use crate::ring::{Level, RingSpec};

/// Exact Krawtchouk polynomial toolkit with a brute-force harmonic lab.
#[derive(Parser)]
#[command(name = "kkit", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Krawtchouk polynomial exactly.
    Eval(EvalArgs),
    /// Tabulate the full (n, x) value matrix over X(l, N)^2.
    Table(TableArgs),
    /// Run a verification suite and emit a report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalKind {
    /// 1-variate K_n(x; p; N).
    Kraw1,
    /// l-variate K_n(x; p; N) with per-coordinate parameters.
    #[value(name = "krawL", alias = "kraw-l")]
    KrawL,
}

#[derive(Args)]
struct EvalArgs {
    kind: EvalKind,
    /// Degree: an integer (kraw1) or comma list (krawL).
    #[arg(long)]
    n: String,
    /// Argument: a rational (kraw1) or comma list of integers (krawL).
    #[arg(long)]
    x: String,
    /// Parameter(s): rationals like `1/2`, comma-separated for krawL.
    #[arg(long)]
    p: String,
    /// The size parameter N.
    #[arg(long = "N")]
    n_cap: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct TableArgs {
    /// Number of variables l.
    #[arg(long)]
    ell: usize,
    /// The size parameter N.
    #[arg(long = "N")]
    n_cap: i64,
    /// Parameter source: entries use p = (q-1)/q.
    #[arg(long)]
    q: i64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Debug)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Zonal,
    Gamma,
    Decomposition,
    Component,
    Translation,
    Orthogonality,
    Addition,
    #[value(name = "inner-product")]
    #[serde(rename = "inner-product")]
    InnerProduct,
}

/// Sweep parameters; every field can come from `--config <json>` with
/// individual flags taking precedence.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub q: Vec<i64>,
    pub ell: Vec<u32>,
    pub n_max: i64,
    pub backend: String,
    pub precision_bits: usize,
    pub tolerance: f64,
    pub jobs: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub cases: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            q: vec![2],
            ell: vec![1],
            n_max: 2,
            backend: "exact".into(),
            precision_bits: 192,
            tolerance: 1e-20,
            jobs: None,
            format: Format::Json,
            out: None,
            seed: 0,
            cases: 100,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    /// Comma list of q values (prime p for group-oracle suites).
    #[arg(long)]
    q: Option<String>,
    /// Comma list of levels l.
    #[arg(long)]
    ell: Option<String>,
    /// Largest N in the sweep.
    #[arg(long = "N")]
    n_max: Option<i64>,
    /// Numeric backend (`exact` or `complex`); informational for suites that
    /// are exact by construction.
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    precision_bits: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Worker threads for parallel sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed for randomized checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Randomized case count per instance.
    #[arg(long)]
    cases: Option<u64>,
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

struct CliError {
    code: i32,
    msg: String,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError { code: 2, msg: msg.into() }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        config_err(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// One verification record; rationals are serialized as `num/den` strings.
#[derive(Serialize)]
struct Record {
    instance: String,
    status: String,
    lhs: Option<String>,
    rhs: Option<String>,
    discrepancy: Option<f64>,
    micros: u128,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    skipped: usize,
}

#[derive(Serialize)]
struct Report {
    command: String,
    config: SweepConfig,
    records: Vec<Record>,
    summary: Summary,
    version: &'static str,
    timestamp: u64,
}

/// Parses a rational written as `a/b` or a bare integer.
fn parse_rat(s: &str) -> CliResult<Rational> {
    let s = s.trim();
    let bad = || config_err(format!("cannot parse rational '{s}'"));
    if let Some((a, b)) = s.split_once('/') {
        let n: i64 = a.trim().parse().map_err(|_| bad())?;
        let d: i64 = b.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(config_err(format!("zero denominator in '{s}'")));
        }
        Ok(rat(n, d))
    } else {
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(rat_i(n))
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| config_err(format!("bad {what} list '{s}'"))))
        .collect()
}

/// `num/den` string form, shortened to `num` for integers.
fn rat_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Table(args) => cmd_table(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_eval(args: EvalArgs) -> CliResult<i32> {
    let value = match args.kind {
        EvalKind::Kraw1 => {
            let n: i64 = args.n.trim().parse().map_err(|_| config_err("bad --n"))?;
            let x = parse_rat(&args.x)?;
            let p = parse_rat(&args.p)?;
            kraw1(n, &x, &p, args.n_cap)?
        }
        EvalKind::KrawL => {
            let n: Vec<i64> = parse_list(&args.n, "--n")?;
            let x: Vec<i64> = parse_list(&args.x, "--x")?;
            let p: Vec<Rational> =
                args.p.split(',').map(parse_rat).collect::<CliResult<Vec<_>>>()?;
            kraw_multi(&n, &x, &p, args.n_cap)?
        }
    };
    let approx = ComplexHP::from_rational(&value, 128).to_string_dec();
    println!("{}", rat_str(&value));
    println!("~ {approx}");
    Ok(0)
}

fn cmd_table(args: TableArgs) -> CliResult<i32> {
    if args.q < 2 {
        return Err(config_err(format!("q must be >= 2, got {}", args.q)));
    }
    if args.ell < 1 || args.n_cap < 0 {
        return Err(config_err("need l >= 1 and N >= 0"));
    }
    let max = std::env::var("KKIT_MAX_TABLE")
        .ok()
        .and_then(|v| v.parse::<u128>().ok())
        .unwrap_or(MAX_TABLE);
    let labels: Vec<MultiIndex> = enumerate_x(args.ell, args.n_cap);
    let count = labels.len() as u128;
    if count * count > max {
        return Err(config_err(format!(
            "table of {count}^2 entries exceeds the guard {max} (set KKIT_MAX_TABLE to override)"
        )));
    }
    let p = rat(args.q - 1, args.q);
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(labels.len());
    for n in &labels {
        let mut row = Vec::with_capacity(labels.len());
        for x in &labels {
            let v = kraw_multi(n.parts(), x.parts(), &vec![p.clone(); args.ell], args.n_cap)?;
            row.push(rat_str(&v));
        }
        rows.push(row);
    }
    let label_str: Vec<String> = labels
        .iter()
        .map(|m| m.parts().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    let body = match args.format {
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "n\\x,{}", label_str.join(","));
            for (lab, row) in label_str.iter().zip(&rows) {
                let _ = writeln!(s, "{lab},{}", row.join(","));
            }
            s
        }
        Format::Json => {
            let doc = serde_json::json!({
                "ell": args.ell,
                "N": args.n_cap,
                "q": args.q,
                "labels": label_str,
                "rows": rows,
            });
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
    };
    emit(&args.out, &body)?;
    Ok(0)
}

fn emit(out: &Option<PathBuf>, body: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn merge_config(args: &VerifyArgs) -> CliResult<SweepConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<SweepConfig>(&text)
                .map_err(|e| config_err(format!("bad config file: {e}")))?
        }
        None => SweepConfig::default(),
    };
    if let Some(q) = &args.q {
        cfg.q = parse_list(q, "--q")?;
    }
    if let Some(ell) = &args.ell {
        cfg.ell = parse_list(ell, "--ell")?;
    }
    if let Some(n) = args.n_max {
        cfg.n_max = n;
    }
    if let Some(b) = &args.backend {
        cfg.backend = b.clone();
    }
    if let Some(p) = args.precision_bits {
        cfg.precision_bits = p;
    }
    if let Some(t) = args.tolerance {
        cfg.tolerance = t;
    }
    if args.jobs.is_some() {
        cfg.jobs = args.jobs;
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(c) = args.cases {
        cfg.cases = c;
    }
    if cfg.q.is_empty() || cfg.ell.is_empty() {
        return Err(config_err("q and ell lists must be nonempty"));
    }
    if cfg.q.iter().any(|&q| q < 2) {
        return Err(config_err("every q must be >= 2"));
    }
    if cfg.ell.iter().any(|&l| l < 1) {
        return Err(config_err("every ell must be >= 1"));
    }
    if cfg.n_max < 1 {
        return Err(config_err("N must be >= 1"));
    }
    if !(cfg.tolerance > 0.0) {
        return Err(config_err("tolerance must be positive"));
    }
    if cfg.backend != "exact" && cfg.backend != "complex" {
        return Err(config_err("backend must be `exact` or `complex`"));
    }
    Ok(cfg)
}

fn require_prime(q: i64) -> CliResult<u64> {
    if q >= 2 && is_prime(q as u64) {
        Ok(q as u64)
    } else {
        Err(config_err(format!("this suite needs a prime residue characteristic, got q = {q}")))
    }
}

/// Table sizes the group-oracle suites may build; the env override applies.
fn oracle_size_ok(spec: RingSpec, n_coords: usize) -> bool {
    crate::lab::guarded_table_size(spec.order(), n_coords).is_ok()
}

fn record(instance: String, ok: bool, lhs: Option<String>, rhs: Option<String>, d: Option<f64>, start: Instant) -> Record {
    Record {
        instance,
        status: if ok { "pass" } else { "fail" }.into(),
        lhs,
        rhs,
        discrepancy: d,
        micros: start.elapsed().as_micros(),
    }
}

fn skipped(instance: String, why: &str) -> Record {
    Record {
        instance,
        status: format!("skipped: {why}"),
        lhs: None,
        rhs: None,
        discrepancy: None,
        micros: 0,
    }
}

fn cmd_verify(args: VerifyArgs) -> CliResult<i32> {
    let cfg = merge_config(&args)?;
    if let Some(jobs) = cfg.jobs {
        // Best effort: a global pool may already exist in-process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let records = match args.suite {
        Suite::Zonal => suite_zonal(&cfg)?,
        Suite::Gamma => suite_gamma(&cfg)?,
        Suite::Decomposition => suite_decomposition(&cfg)?,
        Suite::Component => suite_component(&cfg)?,
        Suite::Translation => suite_translation(&cfg)?,
        Suite::Orthogonality => suite_orthogonality(&cfg)?,
        Suite::Addition => suite_addition(&cfg)?,
        Suite::InnerProduct => suite_inner_product(&cfg)?,
    };
    let passed = records.iter().filter(|r| r.status == "pass").count();
    let failed = records.iter().filter(|r| r.status == "fail").count();
    let skipped_n = records.len() - passed - failed;
    let report = Report {
        command: format!("verify {:?}", args.suite).to_lowercase(),
        config: cfg.clone(),
        summary: Summary { total: records.len(), passed, failed, skipped: skipped_n },
        records,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: now_secs(),
    };
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
        Format::Csv => {
            let mut s = String::from("instance,status,lhs,rhs,discrepancy,micros\n");
            for r in &report.records {
                let _ = writeln!(
                    s,
                    "\"{}\",\"{}\",{},{},{},{}",
                    r.instance,
                    r.status,
                    r.lhs.as_deref().unwrap_or(""),
                    r.rhs.as_deref().unwrap_or(""),
                    r.discrepancy.map(|d| d.to_string()).unwrap_or_default(),
                    r.micros
                );
            }
            let _ = writeln!(
                s,
                "\"summary\",\"total={} passed={} failed={}\",,,,",
                report.summary.total, report.summary.passed, report.summary.failed
            );
            s
        }
    };
    emit(&cfg.out, &body)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

/// Zonal spherical oracle vs the Krawtchouk closed form, exact.
fn suite_zonal(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut records = Vec::new();
    for &qv in &cfg.q {
        let p = require_prime(qv)?;
        for &ell in &cfg.ell {
            let spec = RingSpec::new(p, ell)?;
            for n_cap in 1..=cfg.n_max {
                let inst = format!("q={qv} ell={ell} N={n_cap}");
                if !oracle_size_ok(spec, n_cap as usize) {
                    records.push(skipped(inst, "table size guard"));
                    continue;
                }
                let start = Instant::now();
                let zonal = ZonalTable::new(spec, n_cap as usize)?;
                let param = rat(qv - 1, qv);
                let mut bad: Option<(String, String, String)> = None;
                'outer: for n in &zonal.indices {
                    for x in &zonal.indices {
                        let left = zonal.value(n, x);
                        let right = kraw_multi(
                            n.parts(),
                            x.parts(),
                            &vec![param.clone(); ell as usize],
                            n_cap,
                        )?;
                        if *left != right {
                            bad = Some((
                                format!("n={:?} x={:?}", n.parts(), x.parts()),
                                rat_str(left),
                                rat_str(&right),
                            ));
                            break 'outer;
                        }
                    }
                }
                match bad {
                    None => records.push(record(inst, true, None, None, Some(0.0), start)),
                    Some((at, l, r)) => records.push(record(
                        format!("{inst} {at}"),
                        false,
                        Some(l),
                        Some(r),
                        None,
                        start,
                    )),
                }
            }
        }
    }
    Ok(records)
}

/// Translation-coefficient values and support windows.
fn suite_gamma(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut records = Vec::new();
    for &qv in &cfg.q {
        let p = require_prime(qv)?;
        for &ell in &cfg.ell {
            let inst = format!("p={p} ell={ell}");
            let start = Instant::now();
            let spec = RingSpec::new(p, ell)?;
            let ctx = HarmonicContext::new(spec, cfg.precision_bits)?;
            let q = spec.q() as i64;
            let mut worst = 0.0f64;
            let mut bad = None;
            for r in 0..ell {
                for s in 0..=r {
                    let (w_lo, w_hi) = crate::lab::GammaTable::window(spec, r, s);
                    for i in 1..=spec.i_r(Level::Fin(r)) {
                        let g = ctx.gamma.value(r, s, i as usize);
                        let d = if r == s && i == 1 {
                            // The diagonal trivial-character coefficient sits
                            // outside the modulus window and is pinned exactly.
                            let pinned = ComplexHP::from_rational(
                                &(-Rational::one() / rat_i(q - 1)),
                                cfg.precision_bits,
                            );
                            g.sub(&pinned).abs_f64()
                        } else if i > w_lo && i <= w_hi {
                            // |gamma|^2 = 1 / (q^(r-s-1) (q-1)^2).
                            let expected = Rational::one()
                                / (rat_pow(&rat_i(q), (r - s) as u64)
                                    * rat_pow(&rat_i(q - 1), 2)
                                    / rat_i(q));
                            g.norm_sqr()
                                .sub(&ComplexHP::from_rational(&expected, cfg.precision_bits))
                                .abs_f64()
                        } else {
                            g.abs_f64()
                        };
                        if d > worst {
                            worst = d;
                            bad = Some(format!("r={r} s={s} i={i}"));
                        }
                    }
                }
            }
            let ok = worst <= cfg.tolerance;
            let inst = if ok { inst } else { format!("{inst} worst at {}", bad.unwrap()) };
            records.push(record(inst, ok, None, None, Some(worst), start));
        }
    }
    Ok(records)
}

/// Dimension bookkeeping: closed form vs direct orbit counting, and the
/// composition dimensions summing to `dim V_n`.
fn suite_decomposition(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut records = Vec::new();
    for &qv in &cfg.q {
        let p = require_prime(qv)?;
        for &ell in &cfg.ell {
            let spec = RingSpec::new(p, ell)?;
            let ctx = HarmonicContext::new(spec, cfg.precision_bits)?;
            for n_cap in 1..=cfg.n_max {
                let inst = format!("p={p} ell={ell} N={n_cap}");
                if !oracle_size_ok(spec, n_cap as usize) {
                    records.push(skipped(inst, "table size guard"));
                    continue;
                }
                let start = Instant::now();
                let zonal = ZonalTable::new(spec, n_cap as usize)?;
                let mut ok = true;
                let mut detail = String::new();
                for n in &zonal.indices {
                    let closed = dim_vn(qv, n_cap, n.parts());
                    let direct = rat_i(zonal.dim_vn_direct(n) as i64);
                    if closed != direct {
                        ok = false;
                        detail = format!(
                            " dim mismatch at n={:?}: {} vs {}",
                            n.parts(),
                            rat_str(&closed),
                            rat_str(&direct)
                        );
                        break;
                    }
                    let total: Rational = compositions(&ctx, n.parts())
                        .iter()
                        .map(|a| a.dim(n_cap, n.parts()))
                        .sum();
                    if total != closed {
                        ok = false;
                        detail = format!(
                            " composition sum at n={:?}: {} vs {}",
                            n.parts(),
                            rat_str(&total),
                            rat_str(&closed)
                        );
                        break;
                    }
                }
                records.push(record(format!("{inst}{detail}"), ok, None, None, None, start));
            }
        }
    }
    Ok(records)
}

/// Component formula: direct projection vs closed form, every `(n, u)` and
/// the `1^t` specialization.
fn suite_component(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut records = Vec::new();
    for &qv in &cfg.q {
        let p = require_prime(qv)?;
        for &ell in &cfg.ell {
            let spec = RingSpec::new(p, ell)?;
            let n_cap = cfg.n_max;
            let inst0 = format!("p={p} ell={ell} N={n_cap}");
            if !oracle_size_ok(spec, n_cap as usize) {
                records.push(skipped(inst0, "table size guard"));
                continue;
            }
            let ctx = HarmonicContext::new(spec, cfg.precision_bits)?;
            let zonal = ZonalTable::new(spec, n_cap as usize)?;
            for n in &zonal.indices {
                for u in &zonal.indices {
                    let start = Instant::now();
                    let report = verify_component_formula(&ctx, &zonal, n, u)?;
                    let ok = report.passed(cfg.tolerance);
                    records.push(record(
                        format!("{inst0} n={:?} u={:?}", n.parts(), u.parts()),
                        ok,
                        None,
                        None,
                        Some(report.max_discrepancy),
                        start,
                    ));
                }
                for t in 0..=n_cap {
                    let start = Instant::now();
                    let report = verify_component_formula_t(&ctx, &zonal, n, t)?;
                    let ok = report.passed(cfg.tolerance);
                    records.push(record(
                        format!("{inst0} n={:?} t={t}", n.parts()),
                        ok,
                        None,
                        None,
                        Some(report.max_discrepancy),
                        start,
                    ));
                }
            }
        }
    }
    Ok(records)
}

/// Randomized exact translation-identity checks.
fn suite_translation(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut records = Vec::new();
    for &qv in &cfg.q {
        let p = require_prime(qv)?;
        for &ell in &cfg.ell {
            let spec = RingSpec::new(p, ell)?;
            for n_cap in 1..=cfg.n_max {
                let inst = format!("p={p} ell={ell} N={n_cap}");
                if !oracle_size_ok(spec, n_cap as usize) {
                    records.push(skipped(inst, "table size guard"));
                    continue;
                }
                let start = Instant::now();
                let zonal = ZonalTable::new(spec, n_cap as usize)?;
                let units = spec.units();
                let m = spec.order();
                let nc = n_cap as usize;
                let mut ok = true;
                let mut detail = String::new();
                'outer: for n in &zonal.indices {
                    for _ in 0..cfg.cases {
                        let a: Vec<u64> = (0..nc).map(|_| rng.gen_range(0..m)).collect();
                        let b: Vec<u64> = (0..nc).map(|_| rng.gen_range(0..m)).collect();
                        let mut perm: Vec<usize> = (0..nc).collect();
                        for k in (1..nc).rev() {
                            perm.swap(k, rng.gen_range(0..=k));
                        }
                        let g = GroupElem {
                            units: (0..nc)
                                .map(|_| units[rng.gen_range(0..units.len())])
                                .collect(),
                            perm,
                        };
                        let rep = verify_translation_identity(&zonal, n, &a, &b, &g)?;
                        if !rep.passed() {
                            ok = false;
                            detail = format!(
                                " n={:?} a={a:?} b={b:?}: {} vs {}",
                                n.parts(),
                                rat_str(&rep.lhs),
                                rat_str(&rep.rhs)
                            );
                            break 'outer;
                        }
                    }
                }
                records.push(record(format!("{inst}{detail}"), ok, None, None, None, start));
            }
        }
    }
    Ok(records)
}

/// Exact orthogonality of the `l`-variate polynomials under the orbit-size
/// weight (q is any integer >= 2 here, not only a prime).
fn suite_orthogonality(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut records = Vec::new();
    for &qv in &cfg.q {
        for &ell in &cfg.ell {
            for n_cap in 1..=cfg.n_max {
                let inst = format!("q={qv} ell={ell} N={n_cap}");
                let start = Instant::now();
                let failures = orthogonality_check(ell as usize, n_cap, qv)?;
                let ok = failures.is_empty();
                let detail = failures
                    .first()
                    .map(|f| {
                        format!(
                            " n={:?} m={:?}: {} vs {}",
                            f.n.parts(),
                            f.m.parts(),
                            rat_str(&f.lhs),
                            rat_str(&f.rhs)
                        )
                    })
                    .unwrap_or_default();
                records.push(record(format!("{inst}{detail}"), ok, None, None, None, start));
            }
        }
    }
    Ok(records)
}

/// Exhaustive exact addition-theorem sweeps (q-parallel inside each triple).
fn suite_addition(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut records = Vec::new();
    for &qv in &cfg.q {
        for &ell in &cfg.ell {
            for n_cap in 1..=cfg.n_max {
                let inst = format!("q={qv} ell={ell} N={n_cap}");
                let start = Instant::now();
                let report = theorem_verify(&[(qv, ell as usize, n_cap)])?;
                let ok = report.passed();
                let detail = report
                    .failures
                    .first()
                    .map(|f| format!(" first failure {:?}", f.instance))
                    .unwrap_or_default();
                records.push(Record {
                    instance: format!("{inst} instances={}{detail}", report.total),
                    status: if ok { "pass" } else { "fail" }.into(),
                    lhs: report.failures.first().map(|f| rat_str(&f.lhs)),
                    rhs: report.failures.first().map(|f| rat_str(&f.rhs)),
                    discrepancy: None,
                    micros: start.elapsed().as_micros(),
                });
            }
        }
    }
    Ok(records)
}

/// Inner-product formula vs direct lab computation, random unit vectors.
fn suite_inner_product(cfg: &SweepConfig) -> CliResult<Vec<Record>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut records = Vec::new();
    for &qv in &cfg.q {
        let p = require_prime(qv)?;
        for &ell in &cfg.ell {
            let spec = RingSpec::new(p, ell)?;
            let n_cap = cfg.n_max;
            let inst0 = format!("p={p} ell={ell} N={n_cap}");
            if !oracle_size_ok(spec, n_cap as usize) {
                records.push(skipped(inst0, "table size guard"));
                continue;
            }
            let ctx = HarmonicContext::new(spec, cfg.precision_bits)?;
            let zonal = ZonalTable::new(spec, n_cap as usize)?;
            let units = spec.units();
            for n in &zonal.indices {
                for u in &zonal.indices {
                    for t in 0..=u.parts()[0].min(ell as i64 - 1) {
                        let start = Instant::now();
                        let mut worst = 0.0f64;
                        for _ in 0..cfg.cases {
                            let c: Vec<u64> = (0..n_cap as usize)
                                .map(|_| units[rng.gen_range(0..units.len())])
                                .collect();
                            let report = inner_product_formula_check(
                                &ctx,
                                &zonal,
                                n,
                                t,
                                u.parts(),
                                &c,
                            )?;
                            worst = worst.max(report.max_discrepancy);
                        }
                        let ok = worst <= cfg.tolerance;
                        records.push(record(
                            format!("{inst0} n={:?} u={:?} t={t}", n.parts(), u.parts()),
                            ok,
                            None,
                            None,
                            Some(worst),
                            start,
                        ));
                    }
                }
            }
        }
    }
    Ok(records)
}
