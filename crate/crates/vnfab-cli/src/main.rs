//! `vnfab` command-line tool: interconnect and repeater estimates, thermal
//! scenarios, dynamic-logic simulation, the pipelined processor, layout
//! planning and the acceptance suite.
//!
//! Exit codes: 0 success, 1 analysis failure, 2 usage or configuration error.

mod commands;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use thiserror::Error;
use vnfab::config::{ConfigError, Mode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Analysis(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn analysis(e: impl std::fmt::Display) -> Self {
        CliError::Analysis(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "vnfab",
    version,
    about = "Vertical-nanowire fabric models and designs"
)]
pub struct Cli {
    /// Configuration file (JSON); the built-in defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FabricArgs {
    /// Interconnect mode: cmos or skybridge.
    #[arg(long, default_value = "cmos")]
    pub mode: Mode,
    /// CMOS parameter set, 1 or 2 (cmos mode only).
    #[arg(long)]
    pub param_set: Option<u8>,
    /// Total gate count, e.g. 1e7; defaults to the config value.
    #[arg(long)]
    pub n: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wire-length distribution, tier boundaries and repeater report.
    Interconnect {
        #[command(flatten)]
        fabric: FabricArgs,
        /// Also write a side-by-side table of all parameter sets.
        #[arg(long)]
        compare: bool,
    },
    /// Per-tier optimal segments and repeater counts.
    Repeaters {
        #[command(flatten)]
        fabric: FabricArgs,
    },
    /// Steady-state temperatures of a nanowire stack.
    Thermal {
        /// Gate conduction level in [0, 1]: 0 insulating, 1 gate at reference temperature.
        #[arg(long, default_value_t = 0.0)]
        gate_conduction: f64,
        /// Attach power pillars to the rail contacts.
        #[arg(long)]
        hdpp: bool,
        /// Number of heat-extraction junctions, placed at the topmost
        /// transistor of each gate from the top down (implies --hdpp).
        #[arg(long, default_value_t = 0)]
        hej: usize,
        /// Explicit junction positions (transistor indices, bottom = 0).
        #[arg(long, value_delimiter = ',')]
        hej_at: Vec<usize>,
        /// Length of each heat bridge in nanowire pitches.
        #[arg(long, default_value_t = 10)]
        bridge_pitches: u32,
        /// Dynamic gates stacked on the nanowire.
        #[arg(long, default_value_t = 2)]
        gates: usize,
        /// Inputs per gate.
        #[arg(long, default_value_t = 8)]
        fan_in: usize,
    },
    /// Slot-level simulation of a netlist under a stimulus file.
    Simulate {
        netlist: PathBuf,
        stimulus: PathBuf,
        /// Use the single-rail six-slot schedule instead of dual rail.
        #[arg(long)]
        single_rail: bool,
    },
    /// The 4-bit pipelined processor.
    Wisp {
        #[command(subcommand)]
        action: WispAction,
    },
    /// Nanowire placement, area and sensitivity sweeps.
    Layout {
        /// Built-in design: cla4, cla8, cla16, multiplier or wisp.
        #[arg(long, default_value = "cla4", conflicts_with = "netlist")]
        design: String,
        /// Netlist file to place instead of a built-in design.
        #[arg(long)]
        netlist: Option<PathBuf>,
        /// Program preconfigured into the processor's ROM (wisp design).
        #[arg(long)]
        program: Option<PathBuf>,
        /// Sweep axis: spacing, feature-size or aspect-ratio.
        #[arg(long, requires = "values")]
        sweep: Option<String>,
        /// Comma-separated axis values (nm for lengths, ratio for aspect).
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
    },
    /// Run the acceptance suite and print the pass/fail table.
    Accept,
}

#[derive(Debug, Subcommand)]
pub enum WispAction {
    /// Run a program on the gate-level pipeline and print the registers.
    Run {
        program: PathBuf,
        /// Instructions to retire; defaults to the program length.
        #[arg(long)]
        instructions: Option<usize>,
    },
    /// Print the ROM image (16 lines of 9 binary digits).
    Assemble { program: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::dispatch(&cli) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("{}", Cli::command().render_usage());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
