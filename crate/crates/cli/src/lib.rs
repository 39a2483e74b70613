//! Command-line front end for `picman`.

pub mod report;
pub mod spec;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use picman::scalar::DEFAULT_PRECISION;
use picman::Error;

pub use spec::{parse_map_spec, render_spec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "picman", version, about = "Picard-Manin computations for plane Cremona maps")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Working precision in bits for certified reals.
    #[arg(long, env = "PICMAN_PRECISION", default_value_t = DEFAULT_PRECISION, global = true)]
    pub precision: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree growth, dynamical degree, isometry type, axis and stability of a map.
    Analyze {
        /// `quadratic [p1,p2,p3 / q1,q2,q3]`, `dejonquieres d=N`, `henon d=N`,
        /// `monomial a,b;c,d` or `compose(f; g; ...)` (f after g)
        spec: String,
        #[arg(long, default_value_t = 12)]
        iterates: usize,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Truncated end points and central point of the axis of a generic map.
    Axis {
        /// `quadratic [p1,p2,p3 / q1,q2,q3]`, `dejonquieres d=N`, `henon d=N`,
        /// `monomial a,b;c,d` or `compose(f; g; ...)` (f after g)
        spec: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// The isometry of the Kummer lattice induced by a matrix of SL2(Z).
    Kummer {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// The Coble surface construction.
    Coble,
    /// Tightness constants for a translation length.
    Constants {
        #[arg(long, conflicts_with = "degree", required_unless_present = "degree")]
        length: Option<String>,
        /// Use `L = log d`.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Sampled checks of hyperbolicity, approximation trees and canoeing.
    Hypcheck {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// An automorph of an indefinite binary form `A,B,C`.
    Pell {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
}

/// Exit status for an error: 2 for precision failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionFailure(_) => 2,
        _ => 1,
    }
}

pub fn execute(cli: &Cli) -> picman::Result<Value> {
    let prec = cli.precision.max(64);
    match &cli.command {
        Command::Analyze { spec, iterates, depth } => report::analyze(spec, *iterates, *depth, prec),
        Command::Axis { spec, depth } => report::axis(spec, *depth),
        Command::Kummer { matrix } => report::kummer(matrix, prec),
        Command::Coble => report::coble(prec),
        Command::Constants { length, degree } => report::constants(length.as_deref(), *degree, prec),
        Command::Hypcheck { dim, samples, seed } => report::hypcheck(*dim, *samples, *seed, prec),
        Command::Pell { form } => report::pell(form, prec),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code with the text for stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (1, String::new(), text) };
        }
    };
    match execute(&cli) {
        Ok(v) => {
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
                Format::Text => report::to_text(&v),
            };
            (0, out, String::new())
        }
        Err(e) => {
            let code = exit_code(&e);
            let body = serde_json::json!({"error": {"kind": report::error_kind(&e), "message": e.to_string()}});
            (code, String::new(), serde_json::to_string_pretty(&body).expect("serializable") + "\n")
        }
    }
}
