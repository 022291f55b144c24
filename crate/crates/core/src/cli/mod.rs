//! Command-line front end: `analyze`, `check` and `gen`.

pub mod analyze;
pub mod checks;
pub mod report;

use std::ffi::OsString;
use std::io::{self, Write};
use std::sync::OnceLock;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus::{gen_spectrum, parse_kind, save, write_json, Document};
use crate::error::{Error, Result};

pub use analyze::{analyze, parse_quantities, AnalyzeOptions, Analysis, OutputFormat, Quantity};
pub use checks::{run_suite, CheckOptions, Suite, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Default tolerance, from `SINGTRACE_TOL` when set and valid.
pub fn default_tol() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("SINGTRACE_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(1e-3)
    })
}

#[derive(Debug, Parser)]
#[command(name = "singtrace", version, about = "Singular traces on singular-value data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute norms, seminorms and limits for one spectrum.
    Analyze {
        /// File (JSON or CSV), `-` for stdin, or `gen:<kind>[:args]`.
        input: String,
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Comma-separated list; all quantities when omitted.
        #[arg(long)]
        quantities: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        /// `ln t` up to which Dixmier averages are followed.
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Exit with status 3 unless every limit converged.
        #[arg(long)]
        require_converged: bool,
        /// Add wall-clock times (makes the report non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Run a built-in invariant suite; failures are reported, not fatal.
    Check {
        suite: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = CheckOptions::default().seed)]
        seed: u64,
    },
    /// Write a corpus member to a file or stdout.
    Gen {
        kind: String,
        /// Kind parameters, optionally followed by an output path.
        params: Vec<String>,
        #[arg(long)]
        head: Option<usize>,
        #[arg(long)]
        sort: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput { .. } | Error::Io(_) | Error::Json(_) => EXIT_INPUT,
        _ => EXIT_FAILURE,
    }
}

fn emit(out: &mut impl Write, value: &Value) -> Result<()> {
    write_json(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn looks_like_output(s: &str) -> bool {
    let lower = s.to_ascii_lowercase();
    s == "-" || lower.ends_with(".json") || lower.ends_with(".csv")
}

/// `kind` and its parameters as a `parse_kind` spec, plus the output path.
fn gen_spec(kind: &str, params: &[String], head: Option<usize>, sort: bool) -> (String, String) {
    let mut params = params.to_vec();
    let out = match params.last() {
        Some(p) if looks_like_output(p) => params.pop().unwrap_or_default(),
        _ => "-".to_string(),
    };
    let mut spec = kind.to_string();
    for p in &params {
        spec.push(':');
        spec.push_str(p);
    }
    if let Some(h) = head {
        spec.push(':');
        spec.push_str(&h.to_string());
    }
    if sort {
        spec.push_str(":sort");
    }
    (spec, out)
}

fn run_command(command: Command, out: &mut impl Write) -> Result<i32> {
    match command {
        Command::Analyze {
            input,
            psi,
            p,
            q,
            quantities,
            tol,
            horizon,
            format,
            require_converged,
            timing,
        } => {
            let quantities = match quantities {
                Some(list) => parse_quantities(&list)?,
                None => Quantity::ALL.to_vec(),
            };
            let opts = AnalyzeOptions {
                input,
                psi,
                p,
                q,
                quantities,
                tol: tol.unwrap_or_else(default_tol),
                horizon,
                format: match format {
                    FormatArg::Json => OutputFormat::Json,
                    FormatArg::Csv => OutputFormat::Csv,
                },
                require_converged,
                timing,
            };
            let a = analyze(&opts)?;
            match opts.format {
                OutputFormat::Json => emit(out, &a.report)?,
                OutputFormat::Csv => out.write_all(analyze::to_csv(&a.report).as_bytes())?,
            }
            Ok(if require_converged && !a.converged {
                EXIT_NOT_CONVERGED
            } else {
                EXIT_OK
            })
        }
        Command::Check { suite, tol, seed } => {
            let suite: Suite = suite.parse()?;
            let opts = CheckOptions {
                tol: tol.unwrap_or_else(default_tol),
                seed,
                ..CheckOptions::default()
            };
            let r = run_suite(suite, &opts);
            let mut v = r.to_json();
            v["schema"] = json!(report::SCHEMA);
            v["config"] = json!({ "tol": report::num(opts.tol), "seed": opts.seed });
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            kind,
            params,
            head,
            sort,
        } => {
            let (spec, path) = gen_spec(&kind, &params, head, sort);
            let values = gen_spectrum(&parse_kind(&spec)?)?;
            let mut doc = Document::new(values);
            doc.metadata.insert("kind".into(), json!(spec));
            if path == "-" {
                crate::corpus::write_document(&mut *out, &doc, crate::corpus::Format::Json)?;
                out.write_all(b"\n")?;
            } else {
                save(&path, &doc)?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run_command(cli.command, &mut out) {
        Ok(code) => {
            let _ = out.flush();
            code
        }
        Err(e) => {
            let _ = out.flush();
            let mut v = report::error(&e);
            v["schema"] = json!(report::SCHEMA);
            let mut err = io::stderr().lock();
            let _ = emit(&mut err, &v);
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_arguments() {
        let (spec, out) = gen_spec("power", &["2".into(), "out.json".into()], Some(1000), false);
        assert_eq!(spec, "power:2:1000");
        assert_eq!(out, "out.json");
        let (spec, out) = gen_spec("finite", &["3,1,2".into()], None, true);
        assert_eq!(spec, "finite:3,1,2:sort");
        assert_eq!(out, "-");
        assert!(parse_kind(&gen_spec("finite", &["3,1,2".into()], None, false).0)
            .and_then(|k| gen_spectrum(&k))
            .is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["singtrace", "analyze", "/nonexistent/missing.json"]), EXIT_INPUT);
        assert_eq!(run(["singtrace", "check", "nope"]), EXIT_INPUT);
        assert_eq!(run(["singtrace", "frobnicate"]), EXIT_INPUT);
        assert_eq!(run(["singtrace", "analyze", "gen:harmonic", "--quantities", "bogus"]), EXIT_INPUT);
    }
}
