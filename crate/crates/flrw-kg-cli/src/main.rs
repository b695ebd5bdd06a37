//! `flrw-kg` — batch front-end for the FLRW Klein-Gordon solvers.
//!
//! Exit codes: 0 success, 1 runtime error, 2 config error,
//! 3 oracle mismatch (comparison mode).

mod commands;
mod config;
mod logger;
mod output;

use clap::{Parser, Subcommand};
use commands::CliError;
use config::RunConfig;
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "flrw-kg", version, about = "Klein-Gordon solvers in the contracting FLRW spacetime")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration (defaults used when omitted)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory for CSV/JSON artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// worker threads (0 = all cores)
    #[arg(long, global = true)]
    threads: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the linear Cauchy problem via the integral transform
    SolveLinear,
    /// Picard fixed-point solve of the semilinear integral equation
    SolveSemilinear,
    /// Classify parameters against conditions (i)-(vi)
    Classify,
    /// Lifespan lower bound over an epsilon ladder, optionally measured
    Lifespan,
    /// Certify the kernel integral bounds for K0 and K1
    CertifyKernels,
    /// Sample and classify a (M, gamma, Gamma) parameter box
    Domain,
    /// Method-of-lines oracle run
    Oracle,
    /// Configuration utilities
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Print the effective configuration with every default made explicit
    Dump,
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!(
                    "{} at line {} column {}",
                    e,
                    e.line(),
                    e.column()
                ))
            })
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = load_config(&cli.config)?;
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if cfg.threads > 1 {
        log::debug!(
            "threads = {} requested; computations run deterministically single-threaded",
            cfg.threads
        );
    }
    if let Command::Config { action: ConfigAction::Dump } = &cli.command {
        return commands::cmd_config_dump(&cfg);
    }
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::SolveLinear => commands::cmd_solve_linear(&cfg, &cli.out),
        Command::SolveSemilinear => commands::cmd_solve_semilinear(&cfg, &cli.out),
        Command::Classify => commands::cmd_classify(&cfg, &cli.out),
        Command::Lifespan => commands::cmd_lifespan(&cfg, &cli.out),
        Command::CertifyKernels => commands::cmd_certify_kernels(&cfg, &cli.out),
        Command::Domain => commands::cmd_domain(&cfg, &cli.out),
        Command::Oracle => commands::cmd_oracle(&cfg, &cli.out),
        Command::Config { .. } => unreachable!(),
    }
}

fn main() {
    logger::init();
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        let payload = json!({
            "error": {
                "kind": e.kind(),
                "message": e.to_string(),
            }
        });
        eprintln!("{}", serde_json::to_string(&payload).unwrap());
        std::process::exit(e.exit_code());
    }
}
