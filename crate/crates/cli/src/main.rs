use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hhdim_core::{
    compute_table, golden_report, scale_compare, small_res_probe, Error, Family, InvertiblePolynomial, ScaleVerdict,
    SmallResVerdict, TableDocument, Window,
};

#[derive(Parser)]
#[command(name = "hhdim", version, about = "Bigraded Hochschild cohomology dimensions for invertible polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerdictFormat {
    Pretty,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension table of HH^d split by x0-weight
    Table {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        dmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        dmax: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
        /// Include every contributing (gamma, monomial) pair
        #[arg(long)]
        monomials: bool,
        /// Accept nonsingular exponent matrices that are not sums of Fermat, chain and loop atoms
        #[arg(long)]
        allow_nonstandard: bool,
    },
    /// Compare two JSON tables up to rescaling of the weight
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "pretty")]
        format: VerdictFormat,
    },
    /// Check whether HH^d has the same rank for every d in [dmin, -1]
    ProbeSmallRes {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        dmin: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: VerdictFormat,
        #[arg(long)]
        allow_nonstandard: bool,
    },
    /// Check a cDV family against its closed forms
    Golden {
        #[arg(long)]
        family: String,
        /// Only used by bp_cA and can_cA
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long)]
        k: u32,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(if e.is_input_error() { 2 } else { 3 })
}

fn parse(poly: &str, nonstandard: bool) -> Result<InvertiblePolynomial, Error> {
    if nonstandard {
        InvertiblePolynomial::parse_nonstandard(poly)
    } else {
        InvertiblePolynomial::parse(poly)
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap());
}

fn table(poly: &str, dmin: i64, dmax: i64, format: Format, monomials: bool, nonstandard: bool) -> ExitCode {
    let run = || -> Result<TableDocument, Error> {
        let window = Window::new(dmin, dmax)?;
        let p = parse(poly, nonstandard)?;
        TableDocument::compute(&p, poly, window, monomials)
    };
    match run() {
        Ok(doc) => {
            match format {
                Format::Json => println!("{}", doc.to_json()),
                Format::Csv => print!("{}", doc.to_csv()),
                Format::Pretty => print!("{}", doc.to_pretty()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn load(path: &PathBuf) -> Result<TableDocument, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    TableDocument::from_json(&text)
}

fn compare(a: &PathBuf, b: &PathBuf, format: VerdictFormat) -> ExitCode {
    let run = || -> Result<ScaleVerdict, Error> { scale_compare(&load(a)?.table()?, &load(b)?.table()?) };
    let verdict = match run() {
        Ok(v) => v,
        Err(Error::WindowMismatch(a0, a1, b0, b1)) => {
            match format {
                VerdictFormat::Json => print_json(&json!({
                    "verdict": "InconclusiveWindow",
                    "reason": "windows do not overlap",
                    "windows": [[a0, a1], [b0, b1]],
                })),
                VerdictFormat::Pretty => println!("InconclusiveWindow: windows [{a0}, {a1}] and [{b0}, {b1}] do not overlap"),
            }
            return ExitCode::from(4);
        }
        Err(e) => return fail(&e),
    };
    if let VerdictFormat::Json = format {
        let v = match &verdict {
            ScaleVerdict::Equivalent { c, window } => {
                json!({"verdict": "Equivalent", "c": c.to_string(), "window": [window.dmin, window.dmax]})
            }
            ScaleVerdict::Distinguished { degree, left, right, window } => json!({
                "verdict": "Distinguished",
                "degree": degree,
                "left": left,
                "right": right,
                "window": [window.dmin, window.dmax],
            }),
            ScaleVerdict::InconclusiveWindow { window } => json!({
                "verdict": "InconclusiveWindow",
                "window": window.map(|w| vec![w.dmin, w.dmax]),
            }),
        };
        print_json(&v);
    } else {
        println!("{verdict}");
    }
    match verdict {
        ScaleVerdict::Equivalent { .. } => ExitCode::SUCCESS,
        ScaleVerdict::Distinguished { .. } => ExitCode::from(1),
        ScaleVerdict::InconclusiveWindow { .. } => ExitCode::from(4),
    }
}

const PROBE_NOTE: &str = "tests the rank criterion only; it does not construct a resolution";

fn probe(poly: &str, dmin: i64, format: VerdictFormat, nonstandard: bool) -> ExitCode {
    let run = || -> Result<SmallResVerdict, Error> {
        let window = Window::new(dmin, -1)?;
        let p = parse(poly, nonstandard)?;
        small_res_probe(&compute_table(&p, window)?)
    };
    let verdict = match run() {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    match format {
        VerdictFormat::Json => {
            let v = match &verdict {
                SmallResVerdict::ConstantRank { rank, window } => json!({
                    "verdict": "ConstantRank",
                    "rank": rank,
                    "window": [window.dmin, window.dmax],
                    "note": PROBE_NOTE,
                }),
                SmallResVerdict::NonConstant { ranks, reference, window } => json!({
                    "verdict": "NonConstant",
                    "reference_rank": reference,
                    "witnesses": ranks.iter().map(|(d, r)| json!({"d": d, "rank": r})).collect::<Vec<_>>(),
                    "window": [window.dmin, window.dmax],
                    "note": PROBE_NOTE,
                }),
            };
            print_json(&v);
        }
        VerdictFormat::Pretty => {
            println!("{verdict}");
            println!("note: {PROBE_NOTE}");
        }
    }
    match verdict {
        SmallResVerdict::ConstantRank { .. } => ExitCode::SUCCESS,
        SmallResVerdict::NonConstant { .. } => ExitCode::from(1),
    }
}

fn golden(family: &str, l: u32, k: u32) -> ExitCode {
    let run = || -> Result<_, Error> { golden_report(Family::from_name(family)?, l, k) };
    match run() {
        Ok(report) => {
            println!("{report}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(&e),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HH_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or(format!("HH_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    match cli.command {
        Command::Table { poly, dmin, dmax, format, monomials, allow_nonstandard } => {
            table(&poly, dmin, dmax, format, monomials, allow_nonstandard)
        }
        Command::Compare { a, b, format } => compare(&a, &b, format),
        Command::ProbeSmallRes { poly, dmin, format, allow_nonstandard } => probe(&poly, dmin, format, allow_nonstandard),
        Command::Golden { family, l, k } => golden(&family, l, k),
    }
}
