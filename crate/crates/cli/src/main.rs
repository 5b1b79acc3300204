//! `mmin`: minimum-eigenvalue bounds for M-matrices from the command line.
//!
//! Exit status: 0 success, 1 property failure, 2 input error, 3 numerical
//! failure (singular matrix or non-convergent power iteration).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mmin_core::bounds::full_report;
use mmin_core::harness::{check_properties, GenSpec, DEFAULT_MARGIN};
use mmin_core::io::{self, Format};
use mmin_core::matcore::{classify, default_eps, tau_oracle, DEFAULT_TOL};
use mmin_core::{Error, Method};

use render::OutputFormat;

const EXIT_PROPERTY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Environment variable overriding the default power-iteration tolerance.
const TOL_ENV: &str = "MMIN_TOL";

#[derive(Parser)]
#[command(
    name = "mmin",
    version,
    about = "Lower bounds for the minimum eigenvalue of M-matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Matrix file, or a built-in fixture: ex1, ex2, ex3
    source: String,
    /// Input format; guessed from the file extension when omitted
    #[arg(long, value_parser = parse_format)]
    input_format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Print sign-pattern and dominance flags
    Classify {
        #[command(flatten)]
        src: Source,
        /// Sign tolerance (default 1e-12 * max |a_ij|)
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Print selected bounds
    Bounds {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 10)]
        t_max: usize,
        /// Comma-separated method names (default: all)
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the full bound table
    Report {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 10)]
        t_max: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print tau(A) = 1 / rho(A^{-1})
    Oracle {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        tol: Option<f64>,
        /// Decimal places
        #[arg(long, default_value_t = 4)]
        digits: usize,
    },
    /// Write a random test matrix
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Equal-diagonal family with doubly stochastic inverse
        #[arg(long)]
        ds_inverse: bool,
        /// Off-diagonal row mass of the doubly stochastic family
        #[arg(long, default_value_t = 4.0)]
        strength: f64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long, default_value_t = 1.0)]
        magnitude: f64,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; guessed from --out when omitted
        #[arg(long, value_parser = parse_format)]
        format: Option<Format>,
    },
    /// Run the property suite on seeded random matrices
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        t_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra doubly-stochastic-inverse trials (default trials / 4)
        #[arg(long)]
        ds_trials: Option<usize>,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() {
            EXIT_NUMERICAL
        } else {
            EXIT_INPUT
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| input_failure(format!("{TOL_ENV}='{s}' is not a decimal number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(input_failure("tolerance must be a positive number"));
    }
    Ok(tol)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { src, eps } => {
            let doc = io::load(&src.source, src.input_format)?;
            let eps = eps.unwrap_or_else(|| default_eps(&doc.matrix));
            let class = classify(&doc.matrix, eps)?;
            out.write_all(render::class(&class).as_bytes())?;
        }
        Command::Bounds {
            src,
            t_max,
            methods,
            format,
            tol,
        } => {
            let selected = methods
                .iter()
                .map(|m| m.trim().parse::<Method>())
                .collect::<Result<Vec<_>, _>>()?;
            let doc = io::load(&src.source, src.input_format)?;
            let mut report = full_report(&doc.matrix, t_max, tolerance(tol)?)?;
            report.matrix_id = doc.source;
            if !selected.is_empty() {
                report.rows.retain(|r| selected.contains(&r.method));
            }
            out.write_all(render::report(&report, format).as_bytes())?;
        }
        Command::Report {
            src,
            t_max,
            format,
            tol,
        } => {
            let doc = io::load(&src.source, src.input_format)?;
            let mut report = full_report(&doc.matrix, t_max, tolerance(tol)?)?;
            report.matrix_id = doc.source;
            out.write_all(render::report(&report, format).as_bytes())?;
        }
        Command::Oracle { src, tol, digits } => {
            let doc = io::load(&src.source, src.input_format)?;
            let tau = tau_oracle(&doc.matrix, tolerance(tol)?)?;
            writeln!(out, "{tau:.digits$}")?;
        }
        Command::Generate {
            n,
            seed,
            ds_inverse,
            strength,
            density,
            margin,
            magnitude,
            out: path,
            format,
        } => {
            let spec = if ds_inverse {
                GenSpec::ds_inverse(n, seed, strength)
            } else {
                GenSpec::sdd(n, seed)
                    .with_density(density)
                    .with_margin(margin)
                    .with_magnitude(magnitude)
            };
            let matrix = spec.generate()?;
            let format = format
                .or_else(|| path.as_deref().map(Format::infer))
                .unwrap_or(Format::Plain);
            let text = io::render(&matrix, format);
            match path {
                Some(p) => std::fs::write(&p, text)
                    .map_err(|e| input_failure(format!("cannot write '{}': {e}", p.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Verify {
            trials,
            t_max,
            seed,
            ds_trials,
        } => {
            if trials == 0 {
                return Err(input_failure("--trials must be positive"));
            }
            let mut specs = GenSpec::sdd_suite(trials, seed);
            specs.extend(GenSpec::ds_suite(ds_trials.unwrap_or(trials / 4), seed));
            let report = check_properties(&specs, t_max)?;
            writeln!(out, "trials: {}", report.trials)?;
            writeln!(out, "failures: {}", report.failures.len())?;
            writeln!(out, "max_gap: {:e}", report.max_gap)?;
            for f in &report.failures {
                let seed = f.spec.map(|s| s.seed.to_string()).unwrap_or_default();
                writeln!(out, "FAIL {} seed={seed}: {}", f.property, f.detail)?;
            }
            if !report.passed() {
                return Ok(EXIT_PROPERTY);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => {
            let _ = lock.flush();
            ExitCode::from(code)
        }
        Err(f) => {
            let _ = lock.flush();
            eprintln!("mmin: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
