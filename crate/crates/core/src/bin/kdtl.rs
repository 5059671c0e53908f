use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kdtl::commands::{cmd_beam, cmd_library, cmd_scan, cmd_visibility};
use kdtl::config::{LoadedConfig, Overrides};
use kdtl::VisibilityModel;

/// Kapitza-Dirac-Talbot-Lau interferometer simulations.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// RNG seed; overrides `seed`.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Visibility model; overrides `model`.
    #[arg(long, global = true, value_name = "MODEL")]
    model: Option<VisibilityModel>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Visibility against laser power.
    Visibility,
    /// Synthetic interferogram and fringe fit.
    Scan,
    /// Substitution library and peak assignment.
    Library,
    /// Velocity selection and beam density.
    Beam,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let Some(path) = cli.config else {
        eprintln!("error: --config PATH is required");
        return ExitCode::from(2);
    };
    let overrides = Overrides {
        output_dir: cli.out,
        seed: cli.seed,
        model: cli.model,
    };
    let result = LoadedConfig::load(&path, &overrides).and_then(|cfg| match cli.command {
        Command::Visibility => cmd_visibility(&cfg),
        Command::Scan => cmd_scan(&cfg),
        Command::Library => cmd_library(&cfg),
        Command::Beam => cmd_beam(&cfg),
    });
    match result {
        Ok(report) => {
            println!("{}", report.summary);
            for p in &report.outputs {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
