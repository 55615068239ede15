// `!(x > 0.0)` is used on purpose: it rejects NaN together with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

/// Acceptance check failed.
const EXIT_FAIL: u8 = 1;
/// Bad configuration or a run that could not complete.
const EXIT_ERROR: u8 = 2;

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("PASYM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("PASYM_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("cannot set up {n} threads: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<bool, String> {
        init_threads()?;
        let file = config::load(cli.config.as_deref())?;
        match cli.command {
            Command::ResidualOrder(a) => commands::residual_order(a.merge(file.residual_order)),
            Command::FoldProfile(a) => commands::fold_profile(a.merge(file.fold_profile)),
            Command::InitialLayer(a) => commands::initial_layer(a.merge(file.initial_layer)),
            Command::OracleRun(a) => commands::oracle_run(a.merge(file.oracle_run)),
            Command::Exponents(a) => commands::exponents(a.merge(file.exponents)),
        }
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
