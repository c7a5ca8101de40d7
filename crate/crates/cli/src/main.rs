// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use decoscatter_cli::{run_file, CliError, Experiment, Format};

/// Run a decoscatter experiment from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "decoscatter", version)]
struct Args {
    experiment: Experiment,
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output` in the config; default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Worker threads for sweep points and sector evolution.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("decoscatter: config error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global thread pool is configured once");
    }
    match run_file(
        args.experiment,
        &args.config,
        args.out.as_deref(),
        args.format,
    ) {
        Ok(manifest) => {
            for a in &manifest.artifacts {
                println!("{}  {}", a.sha256, a.file);
            }
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("decoscatter: {e}");
    ExitCode::from(e.exit_code() as u8)
}
