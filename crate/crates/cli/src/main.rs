//! `locinf`: run, list and validate experiment configurations.

mod catalog;
mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Parser, Subcommand};

use config::{Config, Overrides};
use output::Manifest;

#[derive(Parser)]
#[command(name = "locinf", version, about = "Locally informed MCMC experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file and write CSVs.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: available cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Use the full replicate counts instead of desk-scale ones.
        #[arg(long)]
        paper_scale: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the experiment catalog with default parameters.
    List,
    /// Check a config file without running it.
    Validate { config: PathBuf },
}

fn run(cfg: Config) -> anyhow::Result<()> {
    let diagnostics = cfg.diagnostics();
    if !diagnostics.is_empty() {
        let lines: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();
        anyhow::bail!("invalid config:\n  {}", lines.join("\n  "));
    }
    let threads = cfg.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let tables = pool
        .install(|| experiments::run(&cfg))
        .with_context(|| format!("experiment {}", cfg.experiment))?;
    let wall_seconds = clock.elapsed().as_secs_f64();

    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut files = Vec::new();
    for t in &tables {
        let path = t.write(&cfg.out, cfg.experiment.id())?;
        println!("wrote {}", path.display());
        files.push(format!("{}.csv", t.name));
    }
    let manifest = Manifest {
        experiment: cfg.experiment.id(),
        seed: cfg.seed,
        threads,
        paper_scale: cfg.paper_scale,
        replicates: cfg.replicates(),
        started_unix,
        wall_seconds,
        files,
        resolved_params: cfg.params.to_toml(),
        config_source: &cfg.source,
    };
    let path = cfg.out.join("manifest.toml");
    std::fs::write(&path, manifest.render()).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {} ({wall_seconds:.1}s)", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, seed, threads, paper_scale, out } => {
            let overrides = Overrides { seed, threads, out, paper_scale };
            Config::load(&config, &overrides).and_then(run)
        }
        Command::List => {
            print!("{}", catalog::render());
            Ok(())
        }
        Command::Validate { config } => match Config::load(&config, &Overrides::default()) {
            Ok(cfg) => {
                let diagnostics = cfg.diagnostics();
                if diagnostics.is_empty() {
                    println!("ok");
                    Ok(())
                } else {
                    for d in &diagnostics {
                        println!("{d}");
                    }
                    return ExitCode::from(1);
                }
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
