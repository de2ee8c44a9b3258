//! `arbor`: batch driver over the arbor library.
//!
//! Every command prints one JSON report on stdout and, with `--out DIR`, also writes the
//! report and any DOT graphs into `DIR`. Exit status: 0 success, 1 validation failure,
//! 2 structural error (malformed or unusable input), 64 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_STRUCTURAL: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "arbor", version, about = "Pocsets, Dunwoody trees, cubings and regular neighborhoods")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Ball radius for the free-group commands.
    #[arg(long, global = true, default_value_t = 2)]
    pub radius: usize,
    /// Order for ultrafilters and cubings.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Almost)]
    pub mode: Mode,
    /// Treat undecided corners as errors (default).
    #[arg(long, global = true, conflicts_with = "permissive")]
    pub strict: bool,
    /// Drop pairs with undecided corners instead of failing.
    #[arg(long, global = true)]
    pub permissive: bool,
    #[arg(long, global = true, default_value_t = 20000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_vertices: u64,
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_dim: u64,
    /// Compare trees with V0/V1 colors fixed.
    #[arg(long, global = true)]
    pub color_strict: bool,
    /// Directory for report.json and DOT files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Subset,
    Almost,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the order axioms and corner consistency of a pocset.
    Validate {
        #[arg(long)]
        pocset: PathBuf,
        /// Also require every two pairs to be nested.
        #[arg(long)]
        nested: bool,
    },
    /// Realize a nested pocset as a tree.
    Dunwoody {
        #[arg(long)]
        pocset: PathBuf,
    },
    /// Build the cubing of a pocset.
    Cubing {
        #[arg(long)]
        pocset: PathBuf,
    },
    /// Build the regular neighborhood and check its conditions.
    Arn {
        #[arg(long, conflicts_with = "specs", required_unless_present = "specs")]
        pocset: Option<PathBuf>,
        #[arg(long)]
        specs: Option<PathBuf>,
        /// Check condition 2 against a parallel copy of this pair (base name).
        #[arg(long)]
        candidate: Option<String>,
        /// Check condition 2 against this extension of the pocset by one new part.
        #[arg(long, conflicts_with = "candidate")]
        candidate_file: Option<PathBuf>,
    },
    /// Intersection number of two splittings.
    Inumber {
        #[arg(long)]
        specs: PathBuf,
        #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
        pair: Vec<String>,
    },
    /// Common refinement of the parts of a nested pocset.
    Compat {
        #[arg(long, conflicts_with = "specs", required_unless_present = "specs")]
        pocset: Option<PathBuf>,
        #[arg(long)]
        specs: Option<PathBuf>,
        /// Part multiplicity, as PART=K.
        #[arg(long = "mult", value_name = "PART=K")]
        multiplicities: Vec<String>,
    },
    /// Move a fragment into very good position.
    Vgp {
        #[arg(long)]
        pocset: PathBuf,
        /// Ultrafilter and points, see the README.
        #[arg(long)]
        points: PathBuf,
    },
    /// Translates of a family of splittings by a ball of the free group.
    SigmaBall {
        #[arg(long)]
        specs: PathBuf,
    },
    /// Bounded check of one lemma-level property.
    Probe {
        #[arg(long)]
        specs: PathBuf,
        /// symmetry, coset-identity, all-inclusions, trivially-ascending, sandwiching or almost-equal.
        #[arg(long)]
        probe: String,
        /// Splittings to use; all when omitted.
        #[arg(long = "spec")]
        spec_names: Vec<String>,
        /// Subgroup generator words.
        #[arg(long)]
        subgroup: Vec<String>,
        #[arg(long)]
        translate: Option<String>,
        #[arg(long)]
        point: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(&cli))
}
