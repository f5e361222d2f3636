//! `toroidal`: exact computations for toroidal Lie algebras from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CliError;

#[derive(Parser)]
#[command(name = "toroidal", version, about = "Exact computations for toroidal Lie algebras and their modules")]
struct Cli {
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix and positive roots of a finite root system, e.g. `A2`.
    Rootsys { cartan_type: String },
    /// Weight multiplicities of the irreducible affine module X(Λ).
    AffineMult {
        cartan_type: String,
        #[arg(long)]
        level: i64,
        /// Finite part in fundamental-weight coordinates, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        finite: Vec<i64>,
        #[arg(long, default_value_t = 4)]
        depth: i64,
    },
    /// The Garland polynomial p^s in h1, h2, ….
    Garland {
        #[arg(long)]
        s: u32,
    },
    /// A unimodular matrix B with B n = (gcd(n), 0, …, 0).
    Gcdmat {
        #[arg(required = true, allow_negative_numbers = true)]
        n: Vec<i64>,
    },
    /// The lattice G_π of a Π-function.
    Gpi {
        /// Π-function: a path or inline JSON.
        #[arg(long)]
        json: String,
        #[arg(long = "box", default_value_t = toroidal_core::pimod::DEFAULT_BOX)]
        box_n: i64,
    },
    /// Weight spaces of the looped module L(X_π) on a window.
    BuildL {
        #[arg(long)]
        json: String,
        #[arg(long, default_value_t = 2)]
        depth: i64,
        /// Window `lo:hi` per direction t_2, …, t_k, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Decompose L(X_π) into the components X_π^g on the window interior.
    Decompose {
        #[arg(long)]
        json: String,
        #[arg(long, default_value_t = 2)]
        depth: i64,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long = "box", default_value_t = toroidal_core::pimod::DEFAULT_BOX)]
        box_n: i64,
    },
    /// Decide X_π^g ≅ X_π'^g' (or X_π ≅ X_π' when no g is given).
    IsoCheck {
        /// `{"pi": …, "g": […], "pi2": …, "g2": […]}`.
        #[arg(long)]
        json: String,
        #[arg(long = "box", default_value_t = toroidal_core::pimod::DEFAULT_BOX)]
        box_n: i64,
    },
    /// Run every invariant check on L(X_π); exits nonzero on any failure.
    Verify {
        #[arg(long)]
        json: String,
        #[arg(long, default_value_t = 2)]
        depth: i64,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long = "box", default_value_t = toroidal_core::pimod::DEFAULT_BOX)]
        box_n: i64,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("TOROIDAL_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Usage(format!("TOROIDAL_THREADS={v} is not a number")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (text, passed) = match cli.command {
        Command::Rootsys { cartan_type } => (commands::rootsys(&cartan_type)?, true),
        Command::AffineMult { cartan_type, level, finite, depth } => {
            (commands::affine_mult(&cartan_type, level, &finite, depth)?, true)
        }
        Command::Garland { s } => (commands::garland(s), true),
        Command::Gcdmat { n } => (commands::gcdmat(&n)?, true),
        Command::Gpi { json, box_n } => (commands::gpi(&json, box_n)?, true),
        Command::BuildL { json, depth, window } => (commands::build_l(&json, depth, &window)?, true),
        Command::Decompose { json, depth, window, box_n } => commands::decompose(&json, depth, &window, box_n)?,
        Command::IsoCheck { json, box_n } => (commands::iso_check(&json, box_n)?, true),
        Command::Verify { json, depth, window, box_n } => commands::verify(&json, depth, &window, box_n)?,
    };
    match cli.out {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
