//! `oscillab` command-line front end.
//!
//! Every subcommand prints a single JSON document (or a plain table) on
//! stdout. Exit status: 0 on success, 2 for malformed input or arguments,
//! 3 when a construction or self-test reports a property violation.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use oscillab::dualramsey::RamseyInstance;
use oscillab::ellinf::{approximate_in_orbit, make_xk, round_h};
use oscillab::rational::{self, rat};
use oscillab::selftest::{self, SelftestReport};
use oscillab::urysohn::{embed_metric, make_wr, try_dist, FiniteMetricSpace};
use oscillab::{EPSeq, Error, UPoint};

const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const DECIMAL_DIGITS: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "oscillab", version, about = "Exact constructions around rigid surjections and oscillation stability")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Add an approximate decimal rendering next to every rational.
    /// The decimals are truncated and not authoritative.
    #[arg(long, global = true)]
    decimal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The staircase vector x_k.
    Xk { k: usize },
    /// The rounding map h on the grid {j/(4k) : -4k <= j <= 4k}.
    H { k: usize },
    /// Certificate that T(a) lies within 2/k of the orbit of x_k.
    Approx {
        /// Finitely supported sequence (file path or inline JSON).
        a: String,
        k: usize,
    },
    /// Distance between two points of the sequence model.
    Udist {
        /// First point (file path or inline JSON).
        x: String,
        /// Second point (file path or inline JSON).
        y: String,
    },
    /// The point w_r.
    Wr { r: usize },
    /// Embed a finite metric space near the orbit of w_r.
    Embed {
        /// Metric space (file path or inline JSON).
        space: String,
        r: usize,
    },
    /// Search for a monochromatic rigid surjection.
    Ramsey {
        /// Instance (file path or inline JSON).
        instance: String,
    },
    /// Run the seeded invariant suites.
    Selftest {
        #[arg(long, env = "OSCILLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Run only the named suite.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Violation(e.to_string()),
            Error::Domain(_) | Error::Parse(_) => Failure::Input(e.to_string()),
        }
    }
}

/// Reads `arg` as inline JSON if it looks like JSON, otherwise as a path.
fn load<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read {what} from {arg:?}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("invalid {what}: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

fn h_table(k: usize) -> Result<Value, Failure> {
    let den = 4 * k as i64;
    let mut rows = Vec::new();
    for j in -den..=den {
        let u = rat(j, den);
        let h = round_h(&u, k)?;
        rows.push(json!({ "u": rational::to_string(&u), "h": rational::to_string(&h) }));
    }
    Ok(json!({ "k": k, "table": rows }))
}

/// Output value and whether it reports a violation.
fn execute(command: &Command) -> Result<(Value, bool), Failure> {
    let ok = |v: Value| Ok((v, false));
    match command {
        Command::Xk { k } => ok(to_value(&make_xk(*k)?)),
        Command::H { k } => ok(h_table(*k)?),
        Command::Approx { a, k } => {
            let a: EPSeq = load("sequence", a)?;
            let cert = approximate_in_orbit(&a, *k)?;
            let violated = !cert.holds();
            Ok((to_value(&cert), violated))
        }
        Command::Udist { x, y } => {
            let x: UPoint = load("point", x)?;
            let y: UPoint = load("point", y)?;
            ok(to_value(&try_dist(&x, &y)?))
        }
        Command::Wr { r } => ok(to_value(&make_wr(*r)?)),
        Command::Embed { space, r } => {
            let space: FiniteMetricSpace = load("metric space", space)?;
            ok(to_value(&embed_metric(&space, *r)?))
        }
        Command::Ramsey { instance } => {
            let inst: RamseyInstance = load("instance", instance)?;
            let witness = inst.solve()?;
            ok(json!({ "n": inst.n, "k": inst.k, "m": inst.m, "witness": to_value(&witness) }))
        }
        Command::Selftest { seed, cases, suite } => {
            let report = match suite {
                None => selftest::run(*seed, *cases),
                Some(name) => {
                    let one = selftest::run_one(name, *seed, *cases).ok_or_else(|| {
                        let names: Vec<&str> = selftest::SUITES.iter().map(|(n, _)| *n).collect();
                        Failure::Input(format!("unknown suite {name:?}; known: {}", names.join(", ")))
                    })?;
                    let all_passed = one.ok();
                    SelftestReport { seed: *seed, cases: *cases, suites: vec![one], all_passed }
                }
            };
            Ok((to_value(&report), !report.all_passed))
        }
    }
}

fn as_rational(s: &str) -> Option<rational::Rational> {
    s.contains('/').then(|| rational::parse(s).ok()).flatten()
}

/// Same tree with every `"num/den"` leaf replaced by a truncated decimal.
fn decimalize(v: &Value) -> Value {
    match v {
        Value::String(s) => match as_rational(s) {
            Some(q) => Value::String(rational::to_decimal(&q, DECIMAL_DIGITS)),
            None => v.clone(),
        },
        Value::Array(items) => Value::Array(items.iter().map(decimalize).collect()),
        Value::Object(map) => Value::Object(map.iter().map(|(k, x)| (k.clone(), decimalize(x))).collect()),
        _ => v.clone(),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&path, x, rows);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn render_table(v: &Value, decimal: bool) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (path, value) in rows {
        let approx = match (decimal, as_rational(&value)) {
            (true, Some(q)) => format!("  ~{}", rational::to_decimal(&q, DECIMAL_DIGITS)),
            _ => String::new(),
        };
        out.push_str(&format!("{path:<width$}  {value}{approx}\n"));
    }
    out
}

fn render(v: &Value, format: Format, decimal: bool) -> String {
    match format {
        Format::Table => render_table(v, decimal),
        Format::Json => {
            let doc =
                if decimal { json!({ "exact": v, "decimal_non_authoritative": decimalize(v) }) } else { v.clone() };
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always print");
            s.push('\n');
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok((value, violated)) => {
            print!("{}", render(&value, cli.format, cli.decimal));
            if violated {
                eprintln!("oscillab: property violation reported");
                ExitCode::from(EXIT_VIOLATION)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("oscillab: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("oscillab: {msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}
