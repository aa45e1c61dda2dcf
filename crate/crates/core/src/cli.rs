//! Command-line front end. Every subcommand parses its flags, calls one
//! library operation, and serializes the result as a single JSON document.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 domain error,
//! 3 verification failure, 4 resource cap.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bent::{apply_affine, dual_bent, is_bent, random_invertible, two_flat_sum_distribution, AffineMap};
use crate::bounds::{bound_report, parse_known_counts, render_table, KnownCount};
use crate::census::{bent_count, enumerate, with_jobs, CensusOptions, CensusResult, Method, NAIVE_ARITY_CAP};
use crate::error::{Error, ErrorKind, Result};
use crate::function::BooleanFunction;
use crate::geometry::{coset_spectrum, FaceMask};
use crate::reconstruct::{reconstruct_from_ball, BallAssignment};
use crate::transforms::{degree, moebius, walsh_fast, walsh_naive};
use crate::verify::{run_suite, Suite, VerifyOptions, DEFAULT_SAMPLES, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn json(value: &impl Serialize) -> Self {
        CommandResult {
            exit_code: EXIT_OK,
            stdout: format!("{}\n", serde_json::to_string(value).expect("serializable")),
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        let exit_code = match e.kind() {
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Domain => EXIT_DOMAIN,
            ErrorKind::Resource => EXIT_RESOURCE,
        };
        CommandResult {
            exit_code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }

    fn with_stderr(mut self, text: String) -> Self {
        self.stderr.push_str(&text);
        self
    }
}

#[derive(Parser, Debug)]
#[command(name = "bentkit", version, about = "Bent function analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Walsh-Hadamard spectrum of a function
    Wht {
        /// `bf:<n>:<hex>` literal or @file
        #[arg(long = "f")]
        f: String,
        /// Use the quadratic-time reference transform
        #[arg(long)]
        naive: bool,
    },
    /// Algebraic normal form coefficient table
    Anf {
        #[arg(long = "f")]
        f: String,
    },
    /// Algebraic degree
    Degree {
        #[arg(long = "f")]
        f: String,
    },
    /// Bent-function operations
    Bent {
        #[command(subcommand)]
        op: BentOp,
    },
    /// Sums of (-1)^f over every coset of a coordinate face
    CosetSpectrum {
        #[arg(long = "f")]
        f: String,
        /// Face mask, hex (0xC) or decimal
        #[arg(long, value_parser = parse_mask)]
        mask: u64,
    },
    /// Rebuild the degree-bounded function from its values on a Hamming ball
    Reconstruct {
        /// Ball-assignment JSON literal or @file
        #[arg(long)]
        ball: String,
    },
    /// Count bent functions exhaustively
    Census {
        #[arg(long)]
        n: usize,
        /// naive, degree, or both
        #[arg(long, default_value = "both")]
        method: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the bent functions, one per line, ascending
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Evaluate the counting bounds at one arity
    Bounds {
        #[arg(long)]
        n: usize,
        /// JSON list of known counts
        #[arg(long)]
        known: Option<PathBuf>,
    },
    /// Run a verification suite
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum BentOp {
    /// Whether the spectrum is flat
    Test {
        #[arg(long = "f")]
        f: String,
    },
    /// Dual of a bent function
    Dual {
        #[arg(long = "f")]
        f: String,
    },
    /// Sum distribution over all two-dimensional affine flats
    Flats {
        #[arg(long = "f")]
        f: String,
    },
    /// Image under an affine map, random unless --map is given
    Affine {
        #[arg(long = "f")]
        f: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Affine-map JSON literal or @file
        #[arg(long)]
        map: Option<String>,
    },
}

fn parse_mask(s: &str) -> std::result::Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("bad mask {s:?}: {e}"))
}

/// Reads `@path` arguments; anything else is returned as is.
fn read_arg(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn read_path(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn function_arg(arg: &str) -> Result<BooleanFunction> {
    read_arg(arg)?.trim().parse()
}

/// Parses `argv` (without the program name) and runs the command.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once("bentkit".into()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandResult {
                        exit_code: EXIT_OK,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => CommandResult {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(|e| CommandResult::error(&e))
}

fn dispatch(command: Command) -> Result<CommandResult> {
    match command {
        Command::Wht { f, naive } => {
            let f = function_arg(&f)?;
            let w = if naive { walsh_naive(&f)? } else { walsh_fast(&f)? };
            Ok(CommandResult::json(&w))
        }
        Command::Anf { f } => {
            let a = moebius(&function_arg(&f)?);
            let values: Vec<u8> = a.to_bits().into_iter().map(u8::from).collect();
            Ok(CommandResult::json(&json!({ "n": a.arity(), "values": values })))
        }
        Command::Degree { f } => {
            let f = function_arg(&f)?;
            Ok(CommandResult::json(&json!({ "n": f.arity(), "degree": degree(&f) })))
        }
        Command::Bent { op } => bent(op),
        Command::CosetSpectrum { f, mask } => {
            let f = function_arg(&f)?;
            let face = FaceMask::new(f.arity(), mask)?;
            let sums: serde_json::Map<String, Value> = coset_spectrum(&f, &face)?
                .into_iter()
                .map(|(rep, s)| (rep.to_string(), s.into()))
                .collect();
            Ok(CommandResult::json(&json!({
                "n": f.arity(),
                "mask": format!("{mask:#x}"),
                "dim": face.dim(),
                "sums": sums,
            })))
        }
        Command::Reconstruct { ball } => {
            let a = BallAssignment::from_json(&read_arg(&ball)?)?;
            let f = reconstruct_from_ball(&a);
            Ok(CommandResult::json(&json!({
                "n": a.arity(),
                "r": a.radius(),
                "f": f.to_text(),
                "degree": degree(&f),
            })))
        }
        Command::Census { n, method, jobs, emit } => census(n, &method, jobs, emit),
        Command::Bounds { n, known } => bounds(n, known),
        Command::Verify { suite, n, samples, seed } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, &VerifyOptions { n, samples, seed })?;
            let mut out = CommandResult::json(&report);
            if !report.passed() {
                out.exit_code = EXIT_VERIFY;
                out.stderr = format!(
                    "suite {suite}: {} counterexample(s); first: {}\n",
                    report.counterexamples,
                    report.first_counterexample.as_deref().unwrap_or("-")
                );
            }
            Ok(out)
        }
    }
}

fn bent(op: BentOp) -> Result<CommandResult> {
    match op {
        BentOp::Test { f } => {
            let f = function_arg(&f)?;
            Ok(CommandResult::json(&json!({ "f": f.to_text(), "bent": is_bent(&f) })))
        }
        BentOp::Dual { f } => {
            let f = function_arg(&f)?;
            let d = dual_bent(&f)?;
            Ok(CommandResult::json(&json!({ "f": f.to_text(), "dual": d.to_text() })))
        }
        BentOp::Flats { f } => Ok(CommandResult::json(&two_flat_sum_distribution(&function_arg(&f)?)?)),
        BentOp::Affine { f, seed, map } => {
            let f = function_arg(&f)?;
            let t = match map {
                Some(m) => {
                    let t: AffineMap = serde_json::from_str(&read_arg(&m)?)
                        .map_err(|e| Error::Input(format!("affine map: {e}")))?;
                    t.validate()?;
                    t
                }
                None => random_invertible(f.arity(), seed)?,
            };
            let g = apply_affine(&f, &t)?;
            Ok(CommandResult::json(&json!({
                "f": f.to_text(),
                "map": t,
                "image": g.to_text(),
                "bent": is_bent(&f),
                "image_bent": is_bent(&g),
            })))
        }
    }
}

#[derive(Serialize)]
struct MethodCount {
    method: Method,
    count: u64,
    candidates: u64,
}

fn census(n: usize, method: &str, jobs: usize, emit: Option<PathBuf>) -> Result<CommandResult> {
    let methods = match method {
        "both" => vec![Method::Naive, Method::Degree],
        m => vec![m.parse::<Method>()?],
    };
    let opts = CensusOptions {
        shards: jobs.max(1),
        collect: emit.is_some() || methods.len() > 1,
    };
    let results: Vec<CensusResult> = methods
        .iter()
        .map(|&m| with_jobs(jobs, || enumerate(n, m, opts))?)
        .collect::<Result<_>>()?;
    let agree = results.windows(2).all(|w| w[0].count == w[1].count && w[0].functions == w[1].functions);
    let mut timing = String::new();
    for r in &results {
        timing.push_str(&format!("census n={n} method={}: {:.3} s\n", r.method, r.elapsed.as_secs_f64()));
    }
    if let (Some(path), Some(fs)) = (&emit, results[0].functions.as_ref()) {
        let mut text = String::new();
        for f in fs {
            text.push_str(&f.to_text());
            text.push('\n');
        }
        std::fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let per_method: Vec<MethodCount> = results
        .iter()
        .map(|r| MethodCount {
            method: r.method,
            count: r.count,
            candidates: r.candidates,
        })
        .collect();
    let mut out = CommandResult::json(&json!({
        "n": n,
        "count": results[0].count,
        "methods": per_method,
        "agree": agree,
    }))
    .with_stderr(timing);
    if !agree {
        out.exit_code = EXIT_VERIFY;
        out.stderr.push_str("census methods disagree\n");
    }
    Ok(out)
}

fn bounds(n: usize, known: Option<PathBuf>) -> Result<CommandResult> {
    let loaded = match &known {
        Some(path) => parse_known_counts(&read_path(path)?)?,
        None => Vec::new(),
    };
    let mut count = loaded.into_iter().find(|k| k.n == n);
    if count.is_none() && n <= NAIVE_ARITY_CAP && n.is_multiple_of(2) && n > 0 {
        count = Some(KnownCount::census(n, bent_count(n, Method::Degree)?));
    }
    let report = bound_report(n, count.as_ref())?;
    Ok(CommandResult::json(&report).with_stderr(render_table(&report)))
}
