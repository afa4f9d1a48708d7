use std::path::PathBuf;
use std::process::ExitCode;

use attend_core::error::{ExportError, ScenarioError};
use attend_core::harness::{export_csv, preset, run, Scenario, PRESET_NAMES};
use attend_core::RunTrace64;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "attend", version, about = "Run sonar/range-scanner attention scenarios and export traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in preset and write CSV traces.
    Run(RunArgs),
    /// List the built-in presets.
    ListPresets,
    /// Check a scenario file without running it.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    scenario: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: out/<scenario name>).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Disable sensor noise.
    #[arg(long)]
    no_noise: bool,
    /// Override the winner-takes-all threshold.
    #[arg(long)]
    threshold: Option<f64>,
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        Failure::Io(e.to_string())
    }
}

fn run_command(args: RunArgs) -> Result<(), Failure> {
    let mut scenario = match (&args.scenario, &args.preset) {
        (Some(path), _) => Scenario::load(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    if args.no_noise {
        scenario.sensors.noise = false;
    }
    if let Some(t) = args.threshold {
        scenario.wta_threshold = t;
    }
    scenario.validate()?;

    let trace: RunTrace64 = run(&scenario);
    let out_dir = args
        .out_dir
        .unwrap_or_else(|| PathBuf::from("out").join(&scenario.name));
    let files = export_csv(&trace, &out_dir)?;

    let winners = trace.winners().count();
    println!(
        "{}: {} ticks, {} winner(s), sequence {:?}",
        scenario.name,
        trace.len(),
        winners,
        trace.winner_sequence()
    );
    println!("wrote {} files to {}", files.len(), out_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::ListPresets => {
            for name in PRESET_NAMES {
                let s = preset(name).expect("built-in presets are valid");
                println!("{name}\t{}", s.description);
            }
            Ok(())
        }
        Command::Validate { scenario } => Scenario::load(&scenario).map_err(Failure::from).map(|s| {
            println!("{}: ok ({} ticks)", s.name, s.ticks());
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
