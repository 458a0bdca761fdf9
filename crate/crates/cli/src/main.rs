//! `qlc`: command-line front end for the qlc-core engine.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qlc_core::Error;

const SCHEMA: u32 = 1;
const DEFAULT_BUDGET_SECS: u64 = 300;

#[derive(Parser, Debug)]
#[command(name = "qlc", version, about = "Exact commutative algebra over Q, F_p and F_p(t)")]
#[command(after_help = "Ideals are given as `;`-separated generator lists, rings as `F7[x,y,z]/(x^3+y^3+z^3)`.\n\
The environment variable QLC_BUDGET_SECS sets the time budget (default 300).")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Reduced Gröbner basis of an ideal (preimage in the ambient ring when the ring has relations).
    Gb(GbArgs),
    /// Ideal membership, with the normal form as witness.
    Member(MemberArgs),
    /// Compare two ideals: equal, subset, superset or incomparable.
    Compare(PairArgs),
    /// Colon ideal I : J, or the saturation I : f^∞.
    Colon(ColonArgs),
    /// Intersection of two ideals.
    Intersect(PairArgs),
    /// Length of R/I for a zero-dimensional ideal, via standard monomials.
    Length(IdealArgs),
    /// The finite-length module J/K as a vector space with action matrices.
    Vmod(VmodArgs),
    /// Quasilength: shortest filtrations by cyclic modules killed by an ideal.
    #[command(subcommand)]
    Ql(QlCommand),
    /// Content of top local cohomology at finite level, and limit closures.
    #[command(subcommand)]
    Content(ContentCommand),
    /// Generic forcing algebras and Frobenius closure tests.
    #[command(subcommand)]
    Force(ForceCommand),
    /// Scripted reproductions of worked examples and explicit constructions.
    #[command(subcommand, alias = "paper")]
    Lab(LabCommand),
}

#[derive(Args, Debug, Serialize)]
struct IdealArgs {
    /// Ring, e.g. `Q[x,y]` or `F2[x,y,z]/(x*y - z^2)`.
    #[arg(long)]
    ring: String,
    /// `;`-separated generators.
    #[arg(long)]
    ideal: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Args, Debug, Serialize)]
struct GbArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    ideal: String,
    #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
    order: OrderArg,
}

#[derive(Args, Debug, Serialize)]
struct MemberArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    ideal: String,
    #[arg(long)]
    poly: String,
}

#[derive(Args, Debug, Serialize)]
struct PairArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    ideal: String,
    /// The second ideal.
    #[arg(long)]
    other: String,
}

#[derive(Args, Debug, Serialize)]
struct ColonArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    ideal: String,
    /// Generators of J (a single polynomial with `--saturate`).
    #[arg(long)]
    by: String,
    /// Compute I : f^∞ instead of I : J.
    #[arg(long)]
    saturate: bool,
}

#[derive(Args, Debug, Serialize)]
struct VmodArgs {
    /// A polynomial ring (no relations).
    #[arg(long)]
    ring: String,
    #[arg(long)]
    j: String,
    #[arg(long)]
    k: String,
    #[arg(long, default_value_t = qlc_core::quotient::DEFAULT_DEGREE_BOUND)]
    degree_bound: u32,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum QlCommand {
    /// Exact quasilength by search over submodule chains.
    Exact(QlArgs),
    /// Lower and upper bounds, with the exact value when the search fits the caps.
    Bounds(QlArgs),
    /// Validate a filtration certificate stored as JSON.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Serialize)]
struct QlArgs {
    /// A polynomial ring (no relations).
    #[arg(long)]
    ring: String,
    /// The killing ideal I.
    #[arg(long)]
    ideal: String,
    /// A direct summand `J | K` standing for J/K; repeat for direct sums.
    #[arg(long, required = true)]
    summand: Vec<String>,
    /// Largest module dimension searched exactly.
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, default_value_t = 200_000)]
    max_states: usize,
}

#[derive(Args, Debug, Serialize)]
struct ValidateArgs {
    /// Certificate file, as written by `ql exact --format json`.
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ContentCommand {
    /// Quasilength bounds for R/(x_1^t, …, x_d^t) for t = 1..t_max.
    Scan(ScanArgs),
    /// Limit closure of (x_1^t, …, x_d^t).
    LimitClosure(LimitClosureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Plain,
    LimitClosure,
}

#[derive(Args, Debug, Serialize)]
struct ScanArgs {
    #[arg(long)]
    ring: String,
    /// The parameters x_1, …, x_d.
    #[arg(long)]
    params: String,
    #[arg(long, default_value_t = 3)]
    t_max: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
    mode: ModeArg,
    /// Equal consecutive colon steps required to stop a limit-closure chain.
    #[arg(long, default_value_t = qlc_core::content::DEFAULT_WINDOW)]
    window: usize,
}

#[derive(Args, Debug, Serialize)]
struct LimitClosureArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    params: String,
    #[arg(long)]
    t: u32,
    #[arg(long, default_value_t = qlc_core::content::DEFAULT_WINDOW)]
    window: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ForceCommand {
    /// Presentation of the generic forcing algebra R[Z]/(u − Σ Z_i g_i).
    Build(BuildArgs),
    /// Whether c·u^q lies in I^[q] for q = p, p^2, …, p^e_max.
    TightTable(TightTableArgs),
    /// Search for a monomial multiplier c with c·u^q ∈ I^[q] for the listed e.
    TestElement(TestElementArgs),
    /// Whether the class of 1/(x_1⋯x_d) in top local cohomology dies at level k.
    LcClass(LcClassArgs),
    /// Q-sequence verdict for a forcing algebra in positive characteristic.
    Qseq(QseqArgs),
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[arg(long)]
    ring: String,
    /// Generators g_1, …, g_h.
    #[arg(long)]
    ideal: String,
    /// The element u to force into the ideal.
    #[arg(long)]
    target: String,
    /// `;`-separated names for the forcing variables.
    #[arg(long)]
    names: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct TightTableArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    ideal: String,
    #[arg(long)]
    target: String,
    #[arg(long, default_value = "1")]
    multiplier: String,
    #[arg(long, default_value_t = 2)]
    e_max: u32,
}

#[derive(Args, Debug, Serialize)]
struct TestElementArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    ideal: String,
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 1)]
    degree_bound: u32,
    /// `;`-separated Frobenius exponents.
    #[arg(long, default_value = "1; 2")]
    e_list: String,
}

#[derive(Args, Debug, Serialize)]
struct LcClassArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    params: String,
    #[arg(long, default_value_t = 4)]
    k_max: u32,
}

#[derive(Args, Debug, Serialize)]
struct QseqArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    ideal: String,
    #[arg(long)]
    target: String,
    /// Parameters of the base ring; defaults to the generators of the ideal.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 1)]
    degree_bound: u32,
    #[arg(long, default_value = "1; 2")]
    e_list: String,
    #[arg(long, default_value_t = 2)]
    t_max: u32,
    /// Degree bound for disproof candidates (default 2·t·d).
    #[arg(long)]
    search_degree: Option<u32>,
    #[arg(long, default_value_t = 20_000)]
    max_checks: usize,
    #[arg(long)]
    names: Option<String>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LabCommand {
    /// List the available examples.
    List,
    /// Run one example and compare computed values with the expected ones.
    Run(LabRunArgs),
    /// Run every example with default parameters.
    RunAll(LabRunAllArgs),
}

#[derive(Args, Debug, Serialize)]
struct LabRunArgs {
    name: String,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    k_max: Option<u32>,
    /// Coefficient field, e.g. `Q`, `F2` or `F2(t)`.
    #[arg(long)]
    field: Option<String>,
    /// `plus` or `minus`.
    #[arg(long)]
    sign: Option<String>,
    #[arg(long)]
    degree_bound: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
struct LabRunAllArgs {
    /// Include the long examples.
    #[arg(long)]
    long: bool,
}

/// What a command produced.
pub struct Outcome {
    pub result: Value,
    pub text: String,
    /// False when an expected/computed comparison or a validation failed.
    pub passed: bool,
    /// False when the budget ran out part way; `result` is then partial.
    pub complete: bool,
}

impl Outcome {
    pub fn new(result: Value, text: impl Into<String>) -> Self {
        Outcome { result, text: text.into(), passed: true, complete: true }
    }
}

fn budget() -> Result<Duration, String> {
    match std::env::var("QLC_BUDGET_SECS") {
        Err(_) => Ok(Duration::from_secs(DEFAULT_BUDGET_SECS)),
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(n) if n > 0 => Ok(Duration::from_secs(n)),
            _ => Err(format!("QLC_BUDGET_SECS must be a positive integer, got `{s}`")),
        },
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted | Error::SearchLimit(_) => 3,
        _ => 2,
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).and_then(|_| out.flush()).map_err(|e| e.to_string())
        }
    }
}

fn json_report(cli: &Cli, result: Value, complete: bool, error: Option<String>) -> String {
    let mut report = json!({
        "schema": SCHEMA,
        "input": serde_json::to_value(&cli.command).expect("arguments serialize"),
        "complete": complete,
        "result": result,
    });
    if let Some(e) = error {
        report["error"] = Value::from(e);
    }
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match budget() {
        Ok(d) => qlc_core::budget::set_deadline(d),
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }
    let (body, code) = match commands::dispatch(&cli.command) {
        Ok(o) => {
            let code = if !o.complete {
                3
            } else if !o.passed {
                1
            } else {
                0
            };
            let body = match cli.format {
                Format::Json => json_report(&cli, o.result, o.complete, None),
                Format::Text => {
                    let mut t = o.text;
                    if !o.complete {
                        t.push_str("\nincomplete: time budget exhausted");
                    }
                    t.push('\n');
                    t
                }
            };
            (body, code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code_for(&e);
            if code != 3 {
                return ExitCode::from(code);
            }
            let body = match cli.format {
                Format::Json => json_report(&cli, Value::Null, false, Some(e.to_string())),
                Format::Text => format!("incomplete: {e}\n"),
            };
            (body, code)
        }
    };
    if let Err(msg) = emit(&cli, &body) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
