use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use splitkit::harness::{self, HarnessError, Options, Outcome};

#[derive(Parser)]
#[command(name = "splitkit", version, about = "Run monotone splitting experiments from a config file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment config (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[run] out`
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the problem seed
    #[arg(long)]
    seed_override: Option<u64>,
    /// Print nothing but errors
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run each configured method once
    Run(Common),
    /// Run each method over the `[sweep]` stepsize grid
    Sweep(Common),
    /// Check Lyapunov certificates along BFoRB, BRFoB or DR runs
    Certify(Common),
    /// Integrate the continuous-time flow in the `[ode]` section
    Flow(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, cmd): (_, fn(&_, &_) -> Result<Outcome, HarnessError>) = match &cli.command {
        Command::Run(c) => (c, harness::cmd_run),
        Command::Sweep(c) => (c, harness::cmd_sweep),
        Command::Certify(c) => (c, harness::cmd_certify),
        Command::Flow(c) => (c, harness::cmd_flow),
    };
    let result = harness::load_config(&common.config).and_then(|cfg| {
        let opts = Options {
            out: common.out.clone(),
            seed_override: common.seed_override,
            base_dir: common
                .config
                .parent()
                .map(PathBuf::from)
                .unwrap_or_default(),
        };
        cmd(&cfg, &opts)
    });
    match result {
        Ok(outcome) => {
            if !common.quiet {
                for line in &outcome.lines {
                    println!("{line}");
                }
            }
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("splitkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
