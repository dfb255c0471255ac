//! Batch front-end: `ultrapic <command> <file> [options]`.
//!
//! Exit status 0 on success, 1 when the analysis fails (the series is fine
//! but the question cannot be answered, e.g. `WindowInsufficient`), 2 on
//! usage or parse errors.

mod commands;
pub mod format;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

pub use format::{parse_series_bytes, parse_series_file, ParseError, ParseErrorKind, SeriesDocument};
pub use svg::emit_polygon_svg;

pub const MAX_PRECISION_VAR: &str = "ULTRAPIC_MAX_PRECISION";
pub const DEFAULT_MAX_PRECISION: u32 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Tsv,
    Json,
}

/// A bound on `s`; `inf` / `-inf` leave that side open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound(pub Option<BigRational>);

fn rational_arg(s: &str) -> Result<BigRational, String> {
    format::parse_rational(s).ok_or_else(|| format!("`{s}` is not an integer or num/den"))
}

fn bound_arg(s: &str) -> Result<Bound, String> {
    match s {
        "inf" | "+inf" | "-inf" => Ok(Bound(None)),
        _ => rational_arg(s).map(|r| Bound(Some(r))),
    }
}

#[derive(Debug, Parser)]
#[command(name = "ultrapic", version, about = "Exact p-adic analysis of Laurent series")]
struct Cli {
    /// Write output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Tsv)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Newton polygon and valuation envelope.
    Polygon {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["S1", "S2"], allow_hyphen_values = true, value_parser = rational_arg)]
        range: Option<Vec<BigRational>>,
        /// Emit SVG instead of a table.
        #[arg(long)]
        svg: bool,
    },
    /// Count zeros with valuation in [S1, S2].
    Zeros {
        file: PathBuf,
        #[arg(long, value_name = "S1", allow_hyphen_values = true, value_parser = bound_arg)]
        from: Bound,
        #[arg(long, value_name = "S2", allow_hyphen_values = true, value_parser = bound_arg)]
        to: Bound,
    },
    /// Singularity type at the origin.
    Classify {
        file: PathBuf,
        #[arg(long = "radius-val", value_name = "S", allow_hyphen_values = true, value_parser = rational_arg)]
        radius_val: BigRational,
    },
    /// Extend a zero-free series across the puncture.
    Extend {
        file: PathBuf,
        #[arg(long = "radius-val", value_name = "S", allow_hyphen_values = true, value_parser = rational_arg)]
        radius_val: BigRational,
    },
    /// Image disc of the closed disc v(z) >= S.
    Image {
        file: PathBuf,
        #[arg(long = "radius-val", value_name = "S", allow_hyphen_values = true, value_parser = rational_arg)]
        radius_val: BigRational,
    },
    /// Whether W is a value of the series on v(z) >= S.
    Contains {
        file: PathBuf,
        #[arg(long = "radius-val", value_name = "S", allow_hyphen_values = true, value_parser = rational_arg)]
        radius_val: BigRational,
        #[arg(long, value_name = "W", allow_hyphen_values = true, value_parser = rational_arg)]
        value: BigRational,
    },
    /// Split a polynomial into factors of a single slope.
    Factor {
        file: PathBuf,
        #[arg(long, value_name = "N")]
        precision: u32,
    },
}

pub(crate) enum Failure {
    Usage(String),
    Analysis(crate::Error),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Analysis(e)
    }
}

/// Run one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let max_precision = match std::env::var(MAX_PRECISION_VAR) {
        Err(_) => DEFAULT_MAX_PRECISION,
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(n) if n > 0 => n,
            _ => {
                let _ = writeln!(err, "error: {MAX_PRECISION_VAR} must be a positive integer, got `{v}`");
                return 2;
            }
        },
    };

    let result = commands::execute(&cli.command, cli.format, max_precision);
    let text = match result {
        Ok(text) => text,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
        Err(Failure::Analysis(e)) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text.as_bytes()) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
        }
    }
    0
}
