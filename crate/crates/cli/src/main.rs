use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use euler_sums::numeric::Precision;
use euler_sums::relations::discover_sum;
use euler_sums::symbolic::{catalog, table_rows, verify, Identity, VerifyResult};
use euler_sums::Error;
use euler_sums_cli::{parse_quantity, split_weight_flag, status_text, Quantity, Record, Selection};
use rayon::prelude::*;
use serde_json::json;

const SUM_GRAMMAR: &str = "\
Sum grammar: S <h-indices> <p> @<x>
  S 1,2 3 @1/2       sum H_n H_n^(2) x^n / n^3 at x = 1/2
  S 1,1 @1/2         last entry is the outer exponent: sum H_n x^n / n
  S 0-depth p=4 @1/2 no harmonic factors: Li_4(1/2)
  S 1 4 @-1          alternating: sum (-1)^n H_n / n^4
  S 1,L1 2 @1/2      an L marks an alternating harmonic number L_n(q)
Constants: zeta <s>, altzeta <s>, log2, li <k> [x], zb5_1, or a closed form such as 'z3 - 1/2*z2*log2'.
Exit codes: 0 success, 1 verification failure or no relation, 2 usage or domain error.";

#[derive(Parser)]
#[command(name = "euler-sums", version, about = "Evaluate, verify and discover closed forms of Euler-type sums", after_help = SUM_GRAMMAR)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true)]
    prec_bits: Option<u32>,
    /// Tolerance on the midpoint difference; defaults to each entry's own tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Terms summed explicitly for sums at x = 1.
    #[arg(long, global = true)]
    terms: Option<u64>,
    /// Worker threads (default: number of processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Glob over entry ids and tags, e.g. '4.*' or 'weight-5'.
    #[arg(long, global = true)]
    tag: Option<String>,
    /// Weight condition for verify ('5', '<=5', '>3'), or the basis weight for discover.
    #[arg(long, global = true, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Report zero timings so that output is byte-identical between runs.
    #[arg(long, global = true)]
    stable: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print an enclosure of a sum or constant.
    Eval {
        #[arg(required = true, num_args = 1..)]
        words: Vec<String>,
    },
    /// Verify registry entries selected by --tag and --weight.
    Verify,
    /// Search for a closed form of a sum over the constant basis.
    Discover {
        #[arg(required = true, num_args = 1..)]
        words: Vec<String>,
    },
    /// Reproduce the table of sums at x = 1/2 of a given weight.
    Table {
        #[arg(value_name = "WEIGHT")]
        table_weight: u32,
    },
}

const DEFAULT_BITS: u32 = 256;
const DISCOVER_DIGITS: u32 = 200;
const DEFAULT_TERMS: u64 = 1_000_000;

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn precision(opts: &Opts, default: Precision) -> Result<Precision, Failure> {
    match opts.prec_bits {
        Some(b) => Ok(Precision::new(b)?),
        None => Ok(default),
    }
}

fn check_tol(opts: &Opts) -> Result<(), Failure> {
    match opts.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(Failure::Usage(format!("tolerance must be positive, got {t}"))),
        _ => Ok(()),
    }
}

fn run_verify(entries: &[Identity], opts: &Opts, prec: Precision) -> Vec<VerifyResult> {
    entries
        .par_iter()
        .map(|i| {
            let mut i = i.clone();
            if let (Some(n), Some(_)) = (opts.terms, i.terms) {
                i.terms = Some(n);
            }
            verify(&i, prec, opts.tol.unwrap_or(i.tol))
        })
        .collect()
}

fn print_report(results: &[VerifyResult], opts: &Opts) {
    match opts.format {
        Format::Json => {
            for r in results {
                println!("{}", serde_json::to_string(&Record::new(r, opts.stable)).expect("serializable record"));
            }
        }
        Format::Table => {
            let w = results.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
            println!("{:<w$}  {:<10}  {:>10}  {:>10}  {:>7}  identity", "id", "status", "abs_diff", "radius", "millis");
            for r in results {
                let millis = if opts.stable { 0 } else { r.millis };
                let status = if r.status.is_verified() { "verified".to_string() } else { r.status.label().to_string() };
                println!(
                    "{:<w$}  {:<10}  {:>10.3e}  {:>10.3e}  {:>7}  {} = {}",
                    r.id, status, r.abs_diff, r.radius, millis, r.lhs, r.rhs
                );
                if !r.status.is_verified() {
                    println!("{:<w$}  {}", "", status_text(&r.status));
                }
            }
            let ok = results.iter().filter(|r| r.status.is_verified()).count();
            println!("{ok}/{} verified", results.len());
        }
    }
}

fn all_verified(results: &[VerifyResult]) -> Result<(), Failure> {
    if results.iter().all(|r| r.status.is_verified()) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_eval(words: &[String], opts: &Opts) -> Result<(), Failure> {
    let prec = precision(opts, Precision::new(DEFAULT_BITS)?)?;
    let q = parse_quantity(words)?;
    let t = Instant::now();
    let v = q.evaluate(prec, opts.terms.unwrap_or(DEFAULT_TERMS))?;
    let millis = if opts.stable { 0 } else { t.elapsed().as_millis() as u64 };
    let text = v.to_decimal(usize::MAX);
    match opts.format {
        Format::Json => println!(
            "{}",
            json!({"quantity": q.to_string(), "value": text, "radius": v.rad_f64(), "bits": prec.bits(), "millis": millis})
        ),
        Format::Table => println!("{q} = {text}"),
    }
    Ok(())
}

fn cmd_verify(opts: &Opts) -> Result<(), Failure> {
    check_tol(opts)?;
    let prec = precision(opts, Precision::new(DEFAULT_BITS)?)?;
    let sel = Selection::new(opts.tag.as_deref(), opts.weight.as_deref())?;
    let entries: Vec<Identity> = catalog().iter().filter(|i| sel.matches(i)).cloned().collect();
    if entries.is_empty() {
        return Err(Failure::Usage("no entries matched".into()));
    }
    let results = run_verify(&entries, opts, prec);
    print_report(&results, opts);
    all_verified(&results)
}

fn cmd_table(weight: u32, opts: &Opts) -> Result<(), Failure> {
    check_tol(opts)?;
    let prec = precision(opts, Precision::new(DEFAULT_BITS)?)?;
    let rows = table_rows(weight);
    if rows.is_empty() {
        return Err(Failure::Usage(format!("no table for weight {weight}")));
    }
    let results = run_verify(&rows, opts, prec);
    match opts.format {
        Format::Json => print_report(&results, opts),
        Format::Table => {
            let heading = if weight <= 4 { format!("Weight <= {weight}") } else { format!("Weight {weight}") };
            println!("{heading}");
            for (i, r) in rows.iter().zip(&results) {
                let cf = i.closed_form().expect("table rows have closed forms");
                let mark = if r.status.is_verified() { "ok" } else { r.status.label() };
                println!("  {:<7} {} = {}  [{mark}]", i.id, i.lhs_text, cf.pretty());
            }
            println!("{} rows", rows.len());
        }
    }
    all_verified(&results)
}

fn cmd_discover(words: &[String], opts: &Opts) -> Result<(), Failure> {
    let prec = precision(opts, Precision::from_digits(DISCOVER_DIGITS)?)?;
    let Quantity::Sum(spec) = parse_quantity(words)? else {
        return Err(Failure::Usage("discover expects a sum: S <h-indices> <p> @<x>".into()));
    };
    let weight = match &opts.weight {
        Some(w) => w.trim().parse().map_err(|_| Failure::Usage(format!("--weight for discover must be an integer, got '{w}'")))?,
        None => spec.weight(),
    };
    let t = Instant::now();
    let found = discover_sum(&spec, weight, prec)?;
    let millis = if opts.stable { 0 } else { t.elapsed().as_millis() as u64 };
    let cf = found.closed_form();
    match opts.format {
        Format::Json => println!(
            "{}",
            json!({
                "sum": spec.to_string(),
                "weight": weight,
                "closed_form": cf.map(|c| c.to_string()),
                "status": if cf.is_some() { "found".to_string() } else { found.to_string() },
                "millis": millis,
            })
        ),
        Format::Table => match cf {
            Some(c) => println!("{spec} = {c}"),
            None => println!("{spec}: {found}"),
        },
    }
    if cf.is_some() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(split_weight_flag(std::env::args()));
    if let Some(j) = cli.opts.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().expect("thread pool is built once");
    }
    let outcome = match &cli.cmd {
        Cmd::Eval { words } => cmd_eval(words, &cli.opts),
        Cmd::Verify => cmd_verify(&cli.opts),
        Cmd::Discover { words } => cmd_discover(words, &cli.opts),
        Cmd::Table { table_weight } => cmd_table(*table_weight, &cli.opts),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
