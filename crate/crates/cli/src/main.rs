mod args;
mod commands;
mod output;
mod reproduce;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Common};
use output::{header_of, render, Record};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(keyrate::Error),
    Numerical(String),
    Io(std::io::Error),
}

impl From<keyrate::Error> for CliError {
    fn from(e: keyrate::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_numerical() => 3,
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

fn thread_pool() -> Result<(), CliError> {
    let Ok(v) = std::env::var("KEYRATE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("KEYRATE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(common: &Common, header: &[&str], records: &[Record]) -> Result<(), CliError> {
    let text = render(header, records, common.format);
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(CliError::Io),
    }
}

/// Returns whether every reproduction check passed or is a documented gap.
fn run(cli: &Cli) -> Result<bool, CliError> {
    thread_pool()?;
    let cfg = cli.common.optimizer();
    cfg.validate()?;
    let command = match (&cli.command, cli.reproduce_paper) {
        (Some(_), true) => return Err(CliError::Usage("--reproduce-paper takes no subcommand".into())),
        (Some(c), false) => c,
        (None, true) => &Command::ReproducePaper,
        (None, false) => return Err(CliError::Usage("no command given; see --help".into())),
    };
    let common = &cli.common;
    match command {
        Command::Rate(a) => {
            let recs = commands::rate(a, &cfg)?;
            emit(common, &header_of(&recs, &commands::RATE_HEADER), &recs)?;
        }
        Command::Sweep(a) => {
            let recs = commands::sweep(a, &cfg)?;
            emit(common, &header_of(&recs, &commands::RATE_HEADER), &recs)?;
        }
        Command::Threshold(a) => {
            let recs = commands::threshold_cmd(a, &cfg)?;
            emit(common, &commands::THRESHOLD_HEADER, &recs)?;
        }
        Command::FeasibleSet(a) => {
            let recs = commands::feasible_set(a, common.seed)?;
            emit(common, &commands::FEASIBLE_HEADER, &recs)?;
        }
        Command::ReproducePaper => {
            let rows = reproduce::rows(&cfg, common.seed)?;
            let recs: Vec<Record> = rows.iter().map(reproduce::Row::record).collect();
            emit(common, &reproduce::HEADER, &recs)?;
            let failed: Vec<_> = rows.iter().filter(|r| r.status == reproduce::Status::Fail).collect();
            for r in &failed {
                eprintln!(
                    "FAIL: {} = {} (paper {} ± {})",
                    r.check, r.computed, r.paper, r.tolerance
                );
            }
            return Ok(failed.is_empty());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
