//! `dualgap`: design reports, C–V sweeps, release shapes and sacrificial
//! profiles for dual-gap MEMS tunable capacitors.

mod commands;
mod design;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Input, Outcome};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "dualgap", version, about = "Dual-gap MEMS tunable capacitor toolkit")]
struct Cli {
    #[command(flatten)]
    source: Source,

    /// Output file (relative paths go under $DUALGAP_OUT_DIR when set).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Design file (JSON).
    #[arg(long, global = true)]
    design: Option<PathBuf>,

    /// Built-in design instead of a file.
    #[arg(long, global = true, value_parser = ["paper-device"])]
    preset: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacitance, tuning range and pull-in summary.
    Report,
    /// Quasi-static C–V sweep to CSV.
    CvSweep {
        /// Highest bias, V [default: solver.v_max_V]
        #[arg(long)]
        vmax: Option<f64>,
        /// Grid points [default: solver.cv_points]
        #[arg(long)]
        points: Option<usize>,
    },
    /// Post-release membrane shape and gaps to CSV.
    Release {
        /// Beam elements, even and at least 8 [default: solver.fem_elements]
        #[arg(long)]
        elements: Option<usize>,
    },
    /// Sacrificial-layer surface profile to CSV.
    Profile,
}

fn load(source: &Source) -> Result<Input, CliError> {
    match (&source.design, &source.preset) {
        (Some(path), None) => {
            let (bundle, bytes) = design::load_design(path)?;
            Ok(Input {
                bundle,
                digest_bytes: bytes,
            })
        }
        (None, Some(name)) => Ok(Input {
            bundle: design::load_preset(name)?,
            digest_bytes: commands::preset_digest_bytes(
                name,
                design::preset_text(name).unwrap_or_default(),
            ),
        }),
        _ => Err(CliError::Schema("give exactly one of --design or --preset".into())),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let input = load(&cli.source)?;
    for w in &input.bundle.warnings {
        eprintln!("warning: {w}");
    }
    let out = || {
        cli.out
            .as_deref()
            .map(output::resolve_out)
            .ok_or_else(|| CliError::Schema("--out is required for this command".into()))
    };
    let solver = &input.bundle.solver;
    match &cli.command {
        Command::Report => commands::report(&input),
        Command::CvSweep { vmax, points } => commands::cv_sweep(
            &input,
            vmax.unwrap_or(solver.v_max),
            points.unwrap_or(solver.cv_points),
            &out()?,
        ),
        Command::Release { elements } => {
            commands::release(&input, elements.unwrap_or(solver.fem_elements), &out()?)
        }
        Command::Profile => commands::profile(&input, &out()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if cli.json || matches!(cli.command, Command::Report) {
                println!("{}", serde_json::to_string_pretty(&outcome.json).expect("JSON output"));
            } else {
                println!("{}", outcome.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dualgap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
