use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nls_expspline::error::{Error, Result};
use nls_expspline::experiment::config::{layered, parse_override, ConfigBuilder, Entry};
use nls_expspline::experiment::{presets, run, sweep};

/// Exponential cubic B-spline collocation solver for the cubic NLS equation.
#[derive(Debug, Parser)]
#[command(name = "nls-expspline", version)]
struct Cli {
    /// Output directory, overriding `out_dir` from the config.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Start from a built-in preset; the config file then only overrides it.
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Extra `key=value` assignment, applied last. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and write snapshots, diagnostics and a summary.
    Run { config: Option<PathBuf> },
    /// Search for the tension parameter with the smallest final error.
    Sweep { config: Option<PathBuf> },
    /// List the built-in presets.
    Presets,
}

fn builder(cli: &Cli, file: Option<&PathBuf>) -> Result<ConfigBuilder> {
    let text = match file {
        Some(path) => Some(
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let source = file.map(|p| p.display().to_string()).unwrap_or_default();
    let mut overrides = cli.set.iter().map(|s| parse_override(s)).collect::<Result<Vec<_>>>()?;
    if let Some(dir) = &cli.out_dir {
        overrides.retain(|e| e.key != "out_dir");
        overrides.push(Entry { key: "out_dir".into(), value: dir.display().to_string(), origin: "--out-dir".into() });
    }
    layered(cli.preset.as_deref(), text.as_deref().map(|t| (t, source.as_str())), &overrides)
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Presets => {
            for p in presets::all() {
                println!("{:<26} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Run { config } => {
            let cfg = builder(cli, config.as_ref())?.build_run()?;
            let out = run(&cfg)?;
            print!("{}", nls_expspline::experiment::run::summary_text(&out));
            match out.failure {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Sweep { config } => {
            let cfg = builder(cli, config.as_ref())?.build_sweep()?;
            let res = sweep(&cfg)?;
            print!("{}", nls_expspline::experiment::sweep::best_text(&res));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
