//! Command-line front end.
//!
//! Output is JSON by default. Errors go to stderr as
//! `{"error": {"code": ..., "message": ...}}` with exit status 2 for usage
//! errors and 1 for everything else.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::addseq::{build, AdditionSequence, Algorithm, CostModel};
use crate::bench::{self, BenchTable, TABLE_BITS};
use crate::error::{Error, Result};
use crate::evaluator::{eval, EvalRequest, Function, Method, DEFAULT_CROSSOVER};
use crate::exponents::ExponentKind;
use crate::modcount::successive_minima;
use crate::theorems::Statement;

/// Environment variable naming a directory of minima tables
/// (`square.tsv`, `trigonal.tsv`, `pentagonal.tsv`) that replaces the embedded ones.
pub const MINIMA_DIR_ENV: &str = "ETATHETA_MINIMA_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "etatheta",
    version,
    about = "Eta and theta q-series by addition sequences and baby-step giant-step summation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate eta or theta constants.
    Eval(EvalArgs),
    /// Build an addition sequence and report its cost.
    Addseq(AddseqArgs),
    /// Successive minima of the value-count ratio.
    Minima(MinimaArgs),
    /// Check a decomposition statement exhaustively.
    Verify(VerifyArgs),
    /// Cost curve and operation-count tables.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "func", value_parser = parse_from_str::<Function>)]
    pub function: Function,
    /// tau as two decimal strings.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_hyphen_values = true, conflicts_with = "q", required_unless_present = "q")]
    pub tau: Option<Vec<String>>,
    /// q in the function's convention, as two decimal strings.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_hyphen_values = true)]
    pub q: Option<Vec<String>>,
    #[arg(long)]
    pub prec: u32,
    #[arg(long, default_value = "auto", value_parser = parse_from_str::<Method>)]
    pub method: Method,
    /// Truncation order at which `auto` switches to BSGS.
    #[arg(long, default_value_t = DEFAULT_CROSSOVER)]
    pub crossover: u64,
    /// Evaluate every term at full precision.
    #[arg(long)]
    pub no_precision_trick: bool,
    /// Include truncation, method and operation counts.
    #[arg(long)]
    pub report: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AddseqArgs {
    #[arg(long, value_parser = parse_from_str::<ExponentKind>, required_unless_present = "check")]
    pub kind: Option<ExponentKind>,
    /// Number of exponents, starting with the smallest.
    #[arg(long, required_unless_present = "check")]
    pub terms: Option<u64>,
    /// Validate a sequence file (text or JSON, as written by `--emit`) instead of building one.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["kind", "terms", "emit"])]
    pub check: Option<PathBuf>,
    #[arg(long, default_value = "optimized", value_parser = parse_from_str::<Algorithm>)]
    pub algo: Algorithm,
    #[arg(long, default_value = "fft", value_parser = parse_from_str::<CostModel>)]
    pub cost: CostModel,
    /// Print the sequence itself (text, or JSON with `--format json`).
    #[arg(long)]
    pub emit: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MinimaArgs {
    #[arg(long, value_parser = parse_from_str::<ExponentKind>)]
    pub kind: ExponentKind,
    #[arg(long)]
    pub limit: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Statement id, e.g. `pentagonal-double-add` or `powers-of-three`.
    #[arg(long, value_parser = parse_from_str::<Statement>)]
    pub statement: Statement,
    #[arg(long)]
    pub limit: u64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["curve", "tables"])))]
pub struct BenchArgs {
    /// Normalized cost per term of the eta series for each method.
    #[arg(long)]
    pub curve: bool,
    /// Operation counts and modeled speed-ups at the benchmark point.
    #[arg(long)]
    pub tables: bool,
    /// Term counts for `--curve`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<u64>>,
    /// Bit precisions for `--tables`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub bits: Option<Vec<u32>>,
    /// Restrict `--tables` to one table.
    #[arg(long, value_parser = parse_from_str::<BenchTable>)]
    pub table: Option<BenchTable>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn minima_dir() -> Option<PathBuf> {
    std::env::var_os(MINIMA_DIR_ENV).map(PathBuf::from)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run_eval(a: &EvalArgs) -> Result<String> {
    let mut req = match (&a.tau, &a.q) {
        (Some(t), _) => EvalRequest::tau(a.function, &t[0], &t[1], a.prec, a.method)?,
        (None, Some(q)) => EvalRequest::q(a.function, &q[0], &q[1], a.prec, a.method)?,
        (None, None) => return Err(Error::Invalid("one of --tau or --q is required".into())),
    };
    req.crossover = a.crossover;
    req.precision_trick = !a.no_precision_trick;
    req.minima_dir = minima_dir();
    let r = eval(&req)?;
    Ok(match a.format {
        Format::Json => pretty(&r.to_json(a.report)),
        Format::Tsv | Format::Plain => {
            let mut out = String::new();
            for (name, v) in &r.values {
                let (re, im) = v.to_decimal();
                out += &format!("{name}\t{re}\t{im}\n");
            }
            if a.report {
                out += &format!(
                    "# method {} T {} N {} m {} mul {} sqr {} cost {:.3}\n",
                    r.method,
                    r.t,
                    r.n,
                    r.m().map_or("-".into(), |m| m.to_string()),
                    r.counts.complex_mul,
                    r.counts.complex_sqr,
                    r.modeled_cost(CostModel::FFT)
                );
            }
            out
        }
    })
}

fn addseq_summary(a: &AddseqArgs, seq: &AdditionSequence) -> serde_json::Value {
    let terms = a.terms.unwrap_or(seq.targets.len() as u64);
    json!({
        "kind": a.kind,
        "terms": terms,
        "algo": a.algo,
        "length": seq.len(),
        "helpers": seq.helpers().len(),
        "counts": seq.counts(),
        "cost": seq.cost(a.cost),
        "normalized_cost": seq.cost(a.cost) / (3.0 * terms.max(1) as f64),
        "valid": seq.validate().is_ok(),
    })
}

fn check_sequence(path: &std::path::Path) -> Result<(String, bool)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let seq = if text.trim_start().starts_with('{') {
        AdditionSequence::from_json(&text)?
    } else {
        AdditionSequence::from_text(&text)?
    };
    let verdict = seq.validate();
    let v = json!({
        "length": seq.len(),
        "targets": seq.targets.len(),
        "valid": verdict.is_ok(),
        "violation": verdict.as_ref().err().map(|e| e.to_string()),
    });
    Ok((pretty(&v), verdict.is_ok()))
}

fn run_addseq(a: &AddseqArgs) -> Result<(String, bool)> {
    if let Some(path) = &a.check {
        return check_sequence(path);
    }
    let (Some(kind), Some(terms)) = (a.kind, a.terms) else {
        return Err(Error::Invalid("--kind and --terms are required".into()));
    };
    let seq = build(kind, terms, a.algo)?;
    let text = match (a.emit, a.format) {
        (true, Format::Json) => seq.to_json() + "\n",
        (true, _) => seq.to_text(),
        (false, Format::Json) => pretty(&addseq_summary(a, &seq)),
        (false, _) => {
            let v = addseq_summary(a, &seq);
            format!(
                "length\t{}\nhelpers\t{}\ncost\t{}\nnormalized_cost\t{}\n",
                v["length"], v["helpers"], v["cost"], v["normalized_cost"]
            )
        }
    };
    Ok((text, true))
}

fn run_minima(a: &MinimaArgs) -> Result<String> {
    let table = successive_minima(a.kind, a.limit)?;
    Ok(match a.format {
        Format::Json => pretty(&serde_json::to_value(&table).expect("serializable")),
        Format::Tsv | Format::Plain => table.to_tsv(),
    })
}

fn run_verify(a: &VerifyArgs) -> Result<(String, bool)> {
    let report = a.statement.run(a.limit)?;
    Ok((
        pretty(&serde_json::to_value(&report).expect("serializable")),
        report.passed(),
    ))
}

fn run_bench(a: &BenchArgs) -> Result<String> {
    if a.curve {
        let ns = a.ns.clone().unwrap_or_else(bench::default_curve_ns);
        let points = bench::figure_curve(&ns)?;
        return Ok(match a.format {
            Format::Json => pretty(&serde_json::to_value(&points).expect("serializable")),
            _ => bench::curve_to_tsv(&points),
        });
    }
    let bits = a.bits.clone().unwrap_or_else(|| TABLE_BITS.to_vec());
    let tables: Vec<BenchTable> = a
        .table
        .map_or_else(|| BenchTable::ALL.to_vec(), |t| vec![t]);
    let mut rows = Vec::new();
    for t in tables {
        rows.extend(bench::theory_table(t, &bits)?);
    }
    Ok(match a.format {
        Format::Json => pretty(&serde_json::to_value(&rows).expect("serializable")),
        _ => bench::rows_to_tsv(&rows),
    })
}

fn error_json(code: &str, message: &str) -> String {
    json!({ "error": { "code": code, "message": message } }).to_string()
}

/// Runs the CLI on `args` (including the program name), writing to the given
/// streams. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.render().to_string();
            let _ = writeln!(err, "{}", error_json("usage", msg.trim()));
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => run_eval(a).map(|s| (s, true)),
        Command::Addseq(a) => run_addseq(a),
        Command::Minima(a) => run_minima(a).map(|s| (s, true)),
        Command::Verify(a) => run_verify(a),
        Command::Bench(a) => run_bench(a).map(|s| (s, true)),
    };
    match result {
        Ok((text, passed)) => {
            let _ = out.write_all(text.as_bytes());
            // A statement with counterexamples is a numeric failure.
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(e.code(), &e.to_string()));
            1
        }
    }
}
