use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hrnet::commands;
use hrnet::config::RunConfig;
use hrnet::error::CliError;
use hrnet::verify::{Suite, CRITERIA};

/// Environment variable overriding the configured output directory.
const OUT_DIR_ENV: &str = "HRNET_OUT_DIR";

#[derive(Parser)]
#[command(name = "hrnet", version, about = "Diffusively coupled Hindmarsh-Rose neuron networks")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "configs/default.toml")]
    config: PathBuf,
    /// Output directory; overrides HRNET_OUT_DIR and the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel runs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Initial-condition seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print parameters and derived constants; write constants.csv.
    Constants {
        /// Only the domain constants eta1, eta2 and |Omega|.
        #[arg(long)]
        domain_only: bool,
    },
    /// Integrate one run; write trajectory.csv and report.txt.
    Simulate,
    /// Repeat the run over values of one parameter; write sweep.csv.
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
    },
    /// Run the verification suite.
    Verify {
        /// Print criterion names without running them.
        #[arg(long)]
        list: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Verify { list: true } = cli.command {
        for c in &CRITERIA {
            println!("[{}] {}", c.id, c.name);
        }
        return Ok(());
    }
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::invalid("jobs", e))?;
    }
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.initial.seed = seed;
    }
    let out_dir = cli
        .out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| cfg.output.dir.clone());

    match cli.command {
        Command::Constants { domain_only } => {
            print!("{}", commands::cmd_constants(&cfg, &out_dir, domain_only)?);
        }
        Command::Simulate => {
            let out = commands::cmd_simulate(&cfg, &out_dir)?;
            println!(
                "{} records written to {}",
                out.record.rows.len(),
                out_dir.join("trajectory.csv").display()
            );
        }
        Command::Sweep { param, values } => {
            let rows = commands::cmd_sweep(&cfg, &out_dir, &param, &values)?;
            let failed = rows.iter().filter(|r| r.status != "ok").count();
            println!(
                "{} rows written to {} ({failed} failed)",
                rows.len(),
                out_dir.join("sweep.csv").display()
            );
        }
        Command::Verify { .. } => {
            let scratch = out_dir.join("verify");
            let suite = Suite::new(cfg, &scratch);
            let report = suite.run_all(|c, o| {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                println!("{tag} [{}] {}: {}", c.id, c.name, o.detail);
            });
            let failed = report.failed();
            if failed > 0 {
                return Err(CliError::Verification {
                    failed,
                    total: report.results.len(),
                });
            }
            println!("all {} criteria passed", report.results.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
