//! `toric-chow`: Euler series of restricted Chow varieties of smooth complete
//! toric varieties, computed from fan data.
//!
//! Exit codes: 0 success, 1 mathematical mismatch or invalid fan, 2 usage or
//! I/O error.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Mismatch;

#[derive(Parser, Debug)]
#[command(name = "toric-chow", version, about = "Euler series of restricted Chow varieties of toric varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a fan is simplicial, smooth and complete.
    Validate {
        #[command(flatten)]
        source: FanSource,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the p-cones with their orbit monomials and classes.
    Orbits {
        #[command(flatten)]
        source: FanSource,
        #[arg(short = 'p', long = "codim")]
        p: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Euler series E_p in closed form, optionally expanded up to a weight.
    Euler {
        #[command(flatten)]
        source: FanSource,
        #[arg(short = 'p', long = "codim")]
        p: usize,
        /// Expand up to this weight.
        #[arg(long = "max-weight", short = 'D')]
        max_weight: Option<u64>,
        /// Grading functional on the class lattice, e.g. `1,3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print the class basis behind the labels t1..tr.
        #[arg(long)]
        show_basis: bool,
    },
    /// Equivariant Euler series, one factor per p-cone.
    Equivariant {
        #[command(flatten)]
        source: FanSource,
        #[arg(short = 'p', long = "codim")]
        p: usize,
        /// Expand and check the pushforward up to this weight.
        #[arg(long = "max-weight", short = 'D')]
        max_weight: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write the fan of a builtin family as JSON.
    Gen {
        /// `pn n`, `product n m`, `blowup-pn n` or `hirzebruch a`.
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Recompute the worked examples and report each check.
    VerifyExamples {
        /// One of pn, product, blowup, hirzebruch, equivariant, zero-cycles.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct FanSource {
    /// Fan file in the JSON schema {"dim", "rays", "max_cones"}.
    #[arg(long)]
    pub fan: Option<PathBuf>,
    /// Builtin fan, e.g. "hirzebruch 2".
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { source, format } => commands::validate(&source, format),
        Command::Orbits { source, p, format } => commands::orbits(&source, p, format),
        Command::Euler {
            source,
            p,
            max_weight,
            weights,
            format,
            show_basis,
        } => commands::euler(&source, p, max_weight, weights, format, show_basis),
        Command::Equivariant {
            source,
            p,
            max_weight,
            format,
        } => commands::equivariant(&source, p, max_weight, format),
        Command::Gen { spec, output } => commands::gen(&spec.join(" "), output.as_deref()),
        Command::VerifyExamples { only, format } => verify::run(only.as_deref(), format),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Mismatch>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
