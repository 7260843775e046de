//! `gmc`: correlation measures for Gaussian states from the command line.
//!
//! Every command except `ribbon-sweep` (and the `--sweep` variants) prints a
//! JSON report on stdout. Exit codes: 0 success, 1 domain error (unphysical
//! state, parameter out of range), 2 I/O, parse or usage error.

mod commands;
mod format;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Output;

#[derive(Parser, Debug)]
#[command(
    name = "gmc",
    version,
    about = "Maximal correlation of Gaussian states"
)]
pub struct Cli {
    /// Tolerance for physicality and ribbon PSD tests.
    #[arg(long, global = true, default_value_t = gmc_core::tol::PSD)]
    pub tol: f64,

    /// Emit JSON (the default; accepted for explicitness).
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Physicality, purity and classicality of a state file.
    Validate { path: String },
    /// Local (and for two modes, bipartite) standard form.
    StandardForm { path: String },
    /// Quantum maximal correlation of a two-mode state.
    Mu { path: String },
    /// Gaussian maximal correlation across a bipartition.
    MuG {
        path: String,
        /// Parties as mode lists, e.g. "0,1;2,3". Default: "0;1".
        #[arg(long)]
        partition: Option<String>,
    },
    /// The parameter V, i.e. the largest q with gamma >= q (gamma_A + gamma_B).
    VParam {
        path: String,
        #[arg(long)]
        partition: Option<String>,
    },
    /// Quantum ribbon membership, one mode per party.
    RibbonCheck {
        path: String,
        /// Comma-separated theta, one entry per mode.
        #[arg(long, required_unless_present = "sweep")]
        theta: Option<String>,
        /// Emit a CSV grid with this many points per axis instead.
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Gaussian ribbon membership, parties may hold several modes.
    GaussianRibbonCheck {
        path: String,
        #[arg(long, required_unless_present = "sweep")]
        theta: Option<String>,
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// CSV grid of ribbon verdicts and margins over [0, 1]^m.
    RibbonSweep {
        path: String,
        /// Points per axis.
        #[arg(long, default_value_t = 11)]
        sweep: usize,
        /// Use the Gaussian ribbon instead of the quantum one.
        #[arg(long)]
        gaussian: bool,
        #[arg(long)]
        partition: Option<String>,
    },
    /// Can copies of RESOURCE be turned into TARGET by local operations?
    Feasibility {
        resource: String,
        target: Option<String>,
        /// Compare against the noisy Bell state with this visibility.
        #[arg(long, conflicts_with = "target")]
        werner: Option<f64>,
        #[arg(long, value_enum, default_value_t = MeasureArg::Mu)]
        measure: MeasureArg,
    },
    /// Emit a named state.
    Catalog {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        nu: f64,
        /// Second thermal parameter for `product` (defaults to --lambda).
        #[arg(long)]
        lambda_b: Option<f64>,
    },
    /// Seeded self-verification suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureArg {
    Mu,
    MuG,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Ca,
    Cc,
    Tmsv,
    Product,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, &argv) {
        Ok(Output::Json(text)) | Ok(Output::Csv(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Failed(text)) => {
            print!("{text}");
            eprintln!("gmc: some properties failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("gmc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
