//! `seqent`: finite-scale sequence entropy profiles, densities, and
//! constructive mixing searches for `Z^d` symbolic shifts and circle
//! rotations, driven by JSON run configurations.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CmdError, CmdOutput};
use config::Overrides;
use seqent::EntropyUnit;

#[derive(Parser)]
#[command(
    name = "seqent",
    version,
    about = "Finite-scale sequence entropy for Z^d shifts and rotations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Entropy unit for emitted values.
    #[arg(long, global = true, value_enum)]
    unit: Option<UnitArg>,

    /// Worker threads for row-level parallelism (output is identical for
    /// any value).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Enumeration budget in states (overrides config and SEQENT_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Write the CSV/JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitArg {
    Nats,
    Bits,
}

impl From<UnitArg> for EntropyUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Nats => EntropyUnit::Nats,
            UnitArg::Bits => EntropyUnit::Bits,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sequence entropy profiles.
    Entropy {
        #[command(subcommand)]
        which: EntropyCommand,
    },
    /// Density table of a subset generator along the box sequence.
    Density,
    /// Constructive searches (independence, entropy-sequence, se-pairs,
    /// correlation), per the config's search block.
    Search,
    /// Packaged reproductions.
    Reproduce {
        #[command(subcommand)]
        which: ReproduceCommand,
    },
}

#[derive(Subcommand)]
enum EntropyCommand {
    /// Measure-theoretic profile of a partition.
    Measure,
    /// Topological profile of an open cover (exact minimal subcovers).
    Top,
}

#[derive(Subcommand)]
enum ReproduceCommand {
    /// The zero-entropy Z^2 system whose column sequence entropy is log 2.
    Example61,
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let code = run(&cli);
    std::process::exit(code);
}

fn run(cli: &Cli) -> i32 {
    let overrides = Overrides {
        unit: cli.unit.map(EntropyUnit::from),
        budget: cli.budget,
    };
    let result = dispatch(cli, &overrides);
    match result {
        Ok(output) => {
            if let Err(e) = emit(cli, &output) {
                eprintln!("error: {e}");
                return 1;
            }
            output.exit
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, overrides: &Overrides) -> Result<CmdOutput, CmdError> {
    match &cli.command {
        Command::Reproduce {
            which: ReproduceCommand::Example61,
        } => {
            let unit = overrides.unit.unwrap_or(EntropyUnit::Nats);
            let budget = overrides
                .budget
                .or_else(|| {
                    std::env::var(config::BUDGET_ENV)
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or(seqent::DEFAULT_BUDGET);
            commands::cmd_reproduce_example61(unit, budget)
        }
        command => {
            let path = cli.config.as_ref().ok_or_else(|| {
                CmdError::Config("this command needs --config <path>".to_string())
            })?;
            let (world, settings) = config::load(path, overrides)?;
            match command {
                Command::Entropy {
                    which: EntropyCommand::Measure,
                } => commands::cmd_entropy_measure(&world, &settings),
                Command::Entropy {
                    which: EntropyCommand::Top,
                } => commands::cmd_entropy_top(&world, &settings),
                Command::Density => commands::cmd_density(&settings),
                Command::Search => commands::cmd_search(&world, &settings),
                Command::Reproduce { .. } => unreachable!("handled above"),
            }
        }
    }
}

fn emit(cli: &Cli, output: &CmdOutput) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, output.content.as_bytes())?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(output.content.as_bytes())?;
        }
    }
    for line in &output.summary {
        eprintln!("{line}");
    }
    Ok(())
}
