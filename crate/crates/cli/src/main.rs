// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relplace_cli::{cmd_compare, cmd_oracle, cmd_simulate, cmd_solve, error_json, error_kind};

#[derive(Parser)]
#[command(name = "relplace", version, about = "Reliability-aware NFV service placement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the admission policy by value iteration.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Solver seed; defaults to `mdp.seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (policy.json, trace.csv).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the slotted simulator with one strategy.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        policy: Option<PathBuf>,
        /// mdp, vrssp, min-resource, min-reliability, cera or redundant-vnf.
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        slots: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (slots.csv, summary.json).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run several strategies over several seeds.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated strategy ids.
        #[arg(long)]
        strategies: String,
        /// Comma-separated seeds.
        #[arg(long)]
        seeds: String,
        /// Policy for the mdp strategy; solved from the config when absent.
        #[arg(long)]
        policy: Option<PathBuf>,
        #[arg(long)]
        slots: Option<u64>,
        /// Output directory (compare.csv, runs.csv, by_vnf_count.csv).
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive optimum of a tiny instance, printed as JSON.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        instance: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Solve { config, seed, out } => {
            let p = cmd_solve(&config, seed, &out)?;
            println!("{}", serde_json::json!({"iterations": p.iterations, "mean_value": p.mean_value()}));
        }
        Command::Simulate { config, policy, strategy, slots, seed, out } => {
            let s = cmd_simulate(&config, policy.as_deref(), &strategy, slots, seed, &out)?;
            println!("{}", serde_json::to_string(&s)?);
        }
        Command::Compare { config, strategies, seeds, policy, slots, out } => {
            let c = cmd_compare(&config, &strategies, &seeds, policy.as_deref(), slots, &out)?;
            println!("{}", serde_json::to_string(&c.rows)?);
        }
        Command::Oracle { config, instance } => {
            let r = cmd_oracle(&config, &instance)?;
            println!("{}", serde_json::to_string_pretty(&r)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(error_kind(&e), &format!("{e:#}")));
            ExitCode::from(1)
        }
    }
}
