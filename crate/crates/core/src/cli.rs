//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and writes the result; the `supersplit` binary is a thin wrapper.
//!
//! Exit codes: 0 on success, 1 when any factorization was left unresolved,
//! 2 on bad arguments or input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::{factorize, Budget, FactorCache, FactorMap, CACHE_ENV};
use crate::curves::{genus_superelliptic, parse_rational, quotient_genera, SuperellipticCurve};
use crate::error::{Error, Result};
use crate::family::{
    admissible_s, family_condition, family_table, genus_c, genus_x, records_to_csv, sequence, solve_many,
    sum_components, FamilyOutcome, FamilyRecord, SequenceKind, SolveOptions,
};
use crate::groups::{full_group_candidates, reduced_group, verify_presentation, GroupPresentation, GroupTag, ReducedKind, MAX_CAP};
use crate::split::{
    accola_check, accola_ie_check, classify_prime_case, enumerate_splits, eqm_certificate, kani_rosen_check,
    superelliptic_kani_rosen_data, PartitionData,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNRESOLVED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub factor_budget_ms: u64,
    pub cache_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub allow_large: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { factor_budget_ms: 30_000, cache_path: None, output_format: OutputFormat::Table, allow_large: false }
    }
}

#[derive(Parser, Debug)]
#[command(name = "supersplit", version, about = "Jacobian splitting of superelliptic curves, exactly")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Wall-clock budget for each factorization, in milliseconds
    #[arg(long, global = true, default_value_t = 30_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ms: u64,
    /// Attempt factorizations for s >= 126
    #[arg(long, global = true)]
    allow_large: bool,
    /// Factorization cache file
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus of y^n = f(x), of y^n = f(x^m), or of the family curves
    Genus(GenusArgs),
    /// Splitting criterion for y^n = f(x^m)
    Split(SplitArgs),
    /// The family X_{r,s} and its solution table
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Terms of A014945 or A014957
    Seq {
        kind: String,
        #[arg(long, default_value_t = 250)]
        bound: u64,
    },
    /// Automorphism group candidates and their verification
    #[command(subcommand)]
    Group(GroupCommand),
    /// Accola genus relation for subgroup data read from JSON
    Accola {
        #[arg(long)]
        input: PathBuf,
        /// Use the inclusion-exclusion form (subgroups covering G)
        #[arg(long)]
        inclusion_exclusion: bool,
    },
    /// Kani-Rosen conditions for a genus matrix, or for y^n = f(x^m)
    KaniRosen(KaniRosenArgs),
    /// Factor an integer
    Factor { n: String },
}

#[derive(Args, Debug)]
struct GenusArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    delta: Option<u64>,
    /// Genus of X_{r,s}
    #[arg(long = "family-X", alias = "family-x")]
    family_x: bool,
    /// Genus of C_{r,λ,m}
    #[arg(long = "family-C", alias = "family-c")]
    family_c: bool,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    lambda: Option<u32>,
    /// Middle coefficients of f = x^δ + a_1 x^(δ-1) + ... + 1, e.g. `3` or `3/2,-1`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Vec<String>,
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    delta: Option<u64>,
    /// List every splitting triple up to the given bounds
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = 12)]
    n_max: u64,
    #[arg(long, default_value_t = 12)]
    m_max: u64,
    #[arg(long, default_value_t = 60)]
    delta_max: u64,
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Solutions (m, r) for the given s
    Solve {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        s: Vec<u32>,
    },
    /// Solutions for every admissible s up to s-max
    Table {
        #[arg(long, default_value_t = 50)]
        s_max: u32,
    },
    /// Values of s that survive the congruence sieve below the bound
    Admissible {
        #[arg(long, default_value_t = 500)]
        bound: u32,
    },
    /// Compare g(X_{r,s}) with the sum of the g(C_{r,λ,m})
    Check {
        #[arg(long)]
        r: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        s: u32,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Reduced automorphism group of a generic C_{r,λ,m}
    Reduced {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        m: u64,
    },
    /// Candidate full automorphism groups
    Candidates {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value = "Cm")]
        reduced: String,
        /// Print GAP input instead of relations
        #[arg(long)]
        gap: bool,
        /// Also build each group and check its order
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = MAX_CAP)]
        cap: u64,
    },
}

#[derive(Args, Debug)]
struct KaniRosenArgs {
    /// JSON with fields `gij` (square matrix) and `n` (weights)
    #[arg(long, conflicts_with_all = ["curve_n", "m", "delta"])]
    input: Option<PathBuf>,
    #[arg(long = "n", id = "curve_n")]
    curve_n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    delta: Option<u64>,
}

#[derive(Deserialize)]
struct KaniRosenInput {
    gij: Vec<Vec<i64>>,
    n: Vec<i64>,
}

struct Output {
    text: String,
    unresolved: bool,
}

impl Output {
    fn done(text: String) -> Result<Self> {
        Ok(Output { text, unresolved: false })
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    let config = RunConfig {
        factor_budget_ms: cli.budget_ms,
        cache_path: cli.cache.clone(),
        output_format: cli.format,
        allow_large: cli.allow_large,
    };
    match dispatch(cli.command, &config) {
        Ok(output) => {
            let _ = write!(out, "{}", output.text);
            if output.unresolved {
                EXIT_UNRESOLVED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, config: &RunConfig) -> Result<Output> {
    let fmt = config.output_format;
    match command {
        Command::Genus(a) => cmd_genus(a, fmt),
        Command::Split(a) => cmd_split(a, fmt),
        Command::Family(c) => cmd_family(c, config),
        Command::Seq { kind, bound } => {
            let kind: SequenceKind = kind.parse()?;
            let terms = sequence(kind, bound);
            let text = match fmt {
                OutputFormat::Table => join_line(&terms),
                OutputFormat::Json => json_line(&terms)?,
                OutputFormat::Csv => csv_column("term", &terms),
            };
            Output::done(text)
        }
        Command::Group(c) => cmd_group(c, fmt),
        Command::Accola { input, inclusion_exclusion } => {
            let data: PartitionData = read_json(&input)?;
            let residual = if inclusion_exclusion { accola_ie_check(&data)? } else { accola_check(&data)? };
            let holds = residual == 0;
            let text = match fmt {
                OutputFormat::Table => format!("residual = {residual}\nholds = {holds}\n"),
                OutputFormat::Json => json_line(&json!({ "residual": residual, "holds": holds }))?,
                OutputFormat::Csv => format!("residual,holds\n{residual},{holds}\n"),
            };
            Output::done(text)
        }
        Command::KaniRosen(a) => {
            let (gij, weights) = match (a.input, a.curve_n, a.m, a.delta) {
                (Some(path), ..) => {
                    let input: KaniRosenInput = read_json(&path)?;
                    (input.gij, input.n)
                }
                (None, Some(n), Some(m), Some(delta)) => superelliptic_kani_rosen_data(n, m, delta)?,
                _ => return Err(usage("kani-rosen needs --input or all of --n, --m, --delta")),
            };
            let verdict = kani_rosen_check(&gij, &weights)?;
            let text = match fmt {
                OutputFormat::Table => {
                    let mut t = format!(
                        "holds = {}\nquadratic = {}\nlinear = {}\n",
                        verdict.holds,
                        verdict.quadratic,
                        join_words(&verdict.linear)
                    );
                    if let Some(iso) = &verdict.isogeny {
                        t += &format!("isogeny: {iso}\n");
                    }
                    if let Some(dec) = &verdict.decomposition {
                        t += &format!("decomposition: {dec}\n");
                    }
                    t
                }
                OutputFormat::Json => json_line(&verdict)?,
                OutputFormat::Csv => format!("holds,quadratic\n{},{}\n", verdict.holds, verdict.quadratic),
            };
            Output::done(text)
        }
        Command::Factor { n } => {
            let n: BigUint = n.trim().parse().map_err(|_| usage(&format!("not a nonnegative integer: {n:?}")))?;
            let budget = Budget::millis(config.factor_budget_ms);
            let f = match open_cache(config)? {
                Some(cache) => cache.factorize(&n, &budget)?,
                None => factorize(&n, &budget)?,
            };
            let text = match fmt {
                OutputFormat::Table => format!("{f}\n"),
                OutputFormat::Json => json_line(&f)?,
                OutputFormat::Csv => factor_csv(&f),
            };
            Ok(Output { text, unresolved: !f.is_complete() })
        }
    }
}

fn usage(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

fn parse_big(name: &str, s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| usage(&format!("--{name} must be an integer, got {s:?}")))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| usage(&format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(&format!("{}: {e}", path.display())))
}

fn json_line<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(format!("no CSV form for this output: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn csv_column<T: ToString>(header: &str, values: &[T]) -> String {
    let mut s = format!("{header}\n");
    for v in values {
        s += &format!("{}\n", v.to_string());
    }
    s
}

fn join_words<T: ToString>(values: &[T]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_line<T: ToString>(values: &[T]) -> String {
    format!("{}\n", join_words(values))
}

fn factor_csv(f: &FactorMap) -> String {
    let mut s = String::from("prime,exponent\n");
    for (p, e) in f.factors() {
        s += &format!("{p},{e}\n");
    }
    if let Some(c) = f.cofactor() {
        s += &format!("[{c}],1\n");
    }
    s
}

fn single_value(name: &str, value: &dyn std::fmt::Display, fmt: OutputFormat) -> Result<Output> {
    let text = match fmt {
        OutputFormat::Table => format!("{name} = {value}\n"),
        OutputFormat::Json => format!("{{\"{name}\": \"{value}\"}}\n"),
        OutputFormat::Csv => format!("{name}\n{value}\n"),
    };
    Output::done(text)
}

fn cmd_genus(a: GenusArgs, fmt: OutputFormat) -> Result<Output> {
    if a.family_x {
        let (r, s) = match (&a.r, a.s) {
            (Some(r), Some(s)) => (parse_big("r", r)?, s),
            _ => return Err(usage("--family-X needs --r and --s")),
        };
        return single_value("g", &genus_x(&r, s)?, fmt);
    }
    if a.family_c {
        let (r, lambda, m) = match (&a.r, a.lambda, &a.m) {
            (Some(r), Some(l), Some(m)) => (parse_big("r", r)?, l, parse_big("m", m)?),
            _ => return Err(usage("--family-C needs --r, --lambda and --m")),
        };
        return single_value("g", &genus_c(&r, lambda, &m)?, fmt);
    }
    let n = a.n.ok_or_else(|| usage("genus needs --n with --d or with --m and --delta, or --family-X / --family-C"))?;
    match (a.d, &a.m, a.delta) {
        (Some(d), None, None) => single_value("g", &genus_superelliptic(n, d)?, fmt),
        (None, Some(m), delta) => {
            let m: u64 = m.trim().parse().map_err(|_| usage("--m must be a positive integer"))?;
            let curve = if a.coeffs.is_empty() {
                let delta = delta.ok_or_else(|| usage("--m needs --delta or --coeffs"))?;
                SuperellipticCurve::new(n, m, delta)?
            } else {
                let coeffs = a.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
                let curve = SuperellipticCurve::with_coeffs(n, m, coeffs)?;
                if delta.is_some_and(|d| d != curve.delta()) {
                    return Err(usage("--delta disagrees with the number of coefficients"));
                }
                curve
            };
            let q = quotient_genera(n, curve.delta())?;
            let (x1, x2) = match curve.quotient_equations() {
                Ok(pair) => (pair.x1.equation(), pair.x2.equation()),
                Err(_) => (format!("y^{n} = f(x)"), format!("y^{n} = x*f(x)")),
            };
            let text = match fmt {
                OutputFormat::Table => format!(
                    "{}\ng = {}\nX1: {x1} (g1 = {})\nX2: {x2} (g2 = {})\n",
                    curve.equation(),
                    curve.genus(),
                    q.g1,
                    q.g2
                ),
                OutputFormat::Json => json_line(&json!({
                    "curve": curve,
                    "x1": x1,
                    "x2": x2,
                    "g1": q.g1,
                    "g2": q.g2,
                    "formula_extended": q.formula_extended,
                }))?,
                OutputFormat::Csv => {
                    format!("n,m,delta,g,g1,g2\n{n},{m},{},{},{},{}\n", curve.delta(), curve.genus(), q.g1, q.g2)
                }
            };
            Output::done(text)
        }
        _ => Err(usage("give either --d, or both --m and --delta")),
    }
}

fn cmd_split(a: SplitArgs, fmt: OutputFormat) -> Result<Output> {
    if a.enumerate {
        let certs = enumerate_splits(a.n_max, a.m_max, a.delta_max);
        let text = match fmt {
            OutputFormat::Table => certs.iter().map(|c| format!("{c}\n")).collect(),
            OutputFormat::Json => json_line(&certs)?,
            OutputFormat::Csv => csv_rows(&certs)?,
        };
        return Output::done(text);
    }
    let (n, m, delta) = match (a.n, a.m, a.delta) {
        (Some(n), Some(m), Some(d)) => (n, m, d),
        _ => return Err(usage("split needs --n, --m and --delta, or --enumerate")),
    };
    let cert = eqm_certificate(n, m, delta)?;
    let case = classify_prime_case(n, m, delta).ok();
    let text = match fmt {
        OutputFormat::Table => {
            let mut t = format!("{cert}\n");
            if let Some(case) = case {
                t += &format!("prime case: {case}\n");
            }
            t
        }
        OutputFormat::Json => {
            let mut v = serde_json::to_value(cert).map_err(|e| Error::Parse(e.to_string()))?;
            if let Some(case) = case {
                v["prime_case"] = json!(case.to_string());
            }
            json_line(&v)?
        }
        OutputFormat::Csv => csv_rows(&[cert])?,
    };
    Output::done(text)
}

fn open_cache(config: &RunConfig) -> Result<Option<Arc<FactorCache>>> {
    config.cache_path.as_ref().map(|p| FactorCache::open(p).map(Arc::new)).transpose()
}

fn render_outcomes(outcomes: &[FamilyOutcome], fmt: OutputFormat) -> Result<Output> {
    let records: Vec<FamilyRecord> = outcomes.iter().flat_map(|o| o.records()).collect();
    let unresolved = outcomes.iter().any(|o| o.status == crate::family::SolveStatus::UnresolvedFactoring);
    let text = match fmt {
        OutputFormat::Table => {
            let mut t = String::from("s | m | r\n");
            for o in outcomes {
                for row in o.table_rows() {
                    t += &row;
                    t.push('\n');
                }
            }
            t
        }
        OutputFormat::Json => json_line(&records)?,
        OutputFormat::Csv => records_to_csv(&records)?,
    };
    Ok(Output { text, unresolved })
}

fn cmd_family(c: FamilyCommand, config: &RunConfig) -> Result<Output> {
    let fmt = config.output_format;
    let opts = || -> Result<SolveOptions> {
        Ok(SolveOptions {
            budget: Budget::millis(config.factor_budget_ms),
            allow_large: config.allow_large,
            cache: open_cache(config)?,
        })
    };
    match c {
        FamilyCommand::Solve { s } => {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            render_outcomes(&solve_many(&s, &opts()?)?, fmt)
        }
        FamilyCommand::Table { s_max } => render_outcomes(&family_table(s_max, &opts()?)?, fmt),
        FamilyCommand::Admissible { bound } => {
            if bound < 1 {
                return Err(usage("--bound must be at least 1"));
            }
            let values = admissible_s(bound);
            let text = match fmt {
                OutputFormat::Table => join_line(&values),
                OutputFormat::Json => json_line(&values)?,
                OutputFormat::Csv => csv_column("s", &values),
            };
            Output::done(text)
        }
        FamilyCommand::Check { r, m, s } => {
            let (r, m) = (parse_big("r", &r)?, parse_big("m", &m)?);
            let gx = genus_x(&r, s)?;
            let sum = sum_components(&r, &m, s)?;
            let condition = family_condition(&r, &m, s);
            let text = match fmt {
                OutputFormat::Table => format!(
                    "g(X) = {gx}\nsum g(C) = {sum}\nequal = {}\ncondition = {condition}\n",
                    gx == sum
                ),
                OutputFormat::Json => json_line(&json!({
                    "genus_x": gx.to_string(),
                    "sum_components": sum.to_string(),
                    "equal": gx == sum,
                    "condition": condition,
                }))?,
                OutputFormat::Csv => format!("genus_x,sum_components,equal,condition\n{gx},{sum},{},{condition}\n", gx == sum),
            };
            Output::done(text)
        }
    }
}

#[derive(Serialize)]
struct CandidateView {
    #[serde(flatten)]
    presentation: GroupPresentation,
    relations_text: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<crate::groups::Verification>,
}

fn cmd_group(c: GroupCommand, fmt: OutputFormat) -> Result<Output> {
    match c {
        GroupCommand::Reduced { r, lambda, m } => {
            let red = reduced_group(r, lambda, m, true)?;
            let text = match fmt {
                OutputFormat::Table => format!("reduced group = {red} ({})\n", red.kind),
                OutputFormat::Json => json_line(&red)?,
                OutputFormat::Csv => csv_rows(&[red])?,
            };
            Output::done(text)
        }
        GroupCommand::Candidates { n, m, reduced, gap, verify, cap } => {
            let kind: ReducedKind = reduced.parse()?;
            let mut views = Vec::new();
            for p in full_group_candidates(n, m, kind)? {
                let verification = if verify { Some(verify_presentation(&p, cap)?) } else { None };
                views.push(CandidateView { relations_text: p.relation_strings(), presentation: p, verification });
            }
            let text = match fmt {
                OutputFormat::Table => {
                    let mut t = String::new();
                    for v in &views {
                        if gap {
                            t += &format!("# {}\n{}", v.presentation.tag, v.presentation.to_gap());
                        } else {
                            t += &format!("{}\n", v.presentation);
                        }
                        if let Some(ver) = &v.verification {
                            t += &format!("  verification: {}\n", verification_text(ver));
                        }
                    }
                    t
                }
                OutputFormat::Json => json_line(&views)?,
                OutputFormat::Csv => {
                    let mut t = String::from("tag,n,m,expected_order,verification\n");
                    for v in &views {
                        let ver = v.verification.as_ref().map(verification_text).unwrap_or_default();
                        let p = &v.presentation;
                        t += &format!("{},{},{},{},{ver}\n", tag_field(p.tag), p.n, p.m, p.expected_order);
                    }
                    t
                }
            };
            Output::done(text)
        }
    }
}

fn tag_field(tag: GroupTag) -> String {
    match tag {
        GroupTag::Metacyclic(l) => format!("Metacyclic({l})"),
        other => other.to_string(),
    }
}

fn verification_text(v: &crate::groups::Verification) -> String {
    use crate::groups::Verification::*;
    match v {
        Matches { order } => format!("order {order} matches"),
        Differs { expected, actual } => format!("order {actual} differs from {expected}"),
        TooLarge { expected, cap } => format!("order {expected} exceeds cap {cap}"),
    }
}
