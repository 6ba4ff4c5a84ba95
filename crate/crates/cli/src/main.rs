mod args;
mod commands;
mod config;
mod output;

use std::fmt;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use serde_json::Value;

use args::{Cli, Command};
use config::Config;

/// Bad invocation rather than bad data; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn run(cli: &Cli) -> Result<Value> {
    let cfg = Config::load(cli.config.as_deref())?;
    if let Some(n) = cli.threads.or(cfg.threads) {
        if n == 0 {
            return Err(UsageError("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::Stats(a) => commands::stats(a, &cfg),
        Command::Normalize(a) => commands::normalize_cmd(a),
        Command::Channels(a) => commands::channels(a),
        Command::Persistence(a) => commands::persistence_cmd(a),
        Command::Bottleneck(a) => commands::bottleneck(a),
        Command::Sample(a) => commands::sample(a, &cfg),
        Command::Fuse(a) => commands::fuse_cmd(a, &cfg),
        Command::Regularize(a) => commands::regularize(a, &cfg),
        Command::Losses(a) => commands::losses(a, &cfg),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Stratify(a) => commands::stratify(a, &cfg),
        Command::Synth(a) => commands::synth(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(value) => {
            if cli.json {
                println!("{value}");
            } else {
                print!("{}", output::human(&value));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 })
        }
    }
}
