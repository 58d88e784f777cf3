use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grigwalk_cli::manifest::RunManifest;
use grigwalk_cli::{presets, report, run, ExperimentConfig};

#[derive(Parser)]
#[command(name = "grigwalk", version, about = "Random walk experiments on Grigorchuk groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON config.
    Run {
        config: PathBuf,
        /// Output directory; defaults to the config's `output` or `runs/<kind>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in preset.
    Verify {
        preset: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Print the preset's config instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Summarize manifests in a directory and its subdirectories.
    Report { dir: PathBuf },
    /// List preset names.
    List,
}

fn execute(config: &ExperimentConfig, out: Option<PathBuf>, default: &str) -> grigwalk_cli::Result<bool> {
    let dir = out.or_else(|| config.output.clone()).unwrap_or_else(|| Path::new("runs").join(default));
    let m: RunManifest = run::run(config, &dir)?;
    for c in &m.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.summary);
    }
    println!("{} written to {}{}", m.kind, dir.display(), if m.partial { " (partial)" } else { "" });
    Ok(m.passed)
}

fn main_inner(cli: Cli) -> grigwalk_cli::Result<bool> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let kind = cfg.experiment.kind();
            execute(&cfg, out, kind)
        }
        Command::Verify { preset, out, seed, print_config } => {
            let cfg = presets::preset(&preset, seed)?;
            if print_config {
                println!("{}", cfg.to_json());
                return Ok(true);
            }
            execute(&cfg, out, &preset)
        }
        Command::Report { dir } => {
            let rows = report::rows(&dir)?;
            print!("{}", report::format_table(&rows));
            Ok(rows.iter().all(|r| r.passed))
        }
        Command::List => {
            for n in presets::names() {
                println!("{n}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
