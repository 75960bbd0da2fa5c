//! Command-line experiment runner for run-length-limited subcodes of
//! Reed-Muller codes.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;

use clap::{Parser, Subcommand};

use config::{Flags, Format, Settings};
use error::Result;

#[derive(Debug, Parser)]
#[command(name = "rmrll", version, about = "Rate tables, bound curves, P_b sweeps and exact counts for RLL subcodes of RM codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact subcode rates against their asymptote.
    Rates(Flags),
    /// Rate bound curves over R, or the bound chain at given --m.
    Bounds(Flags),
    /// Monte Carlo bit error rate under bit-MAP decoding.
    Simulate(Flags),
    /// Exact (1,inf) subcode counts of RM(m, r) by enumeration.
    Oracle(Flags),
    /// Weight distribution of RM(m, r).
    Weights(Flags),
    /// Channel and noiseless constraint capacities.
    ChannelCap(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Rates(f)
            | Command::Bounds(f)
            | Command::Simulate(f)
            | Command::Oracle(f)
            | Command::Weights(f)
            | Command::ChannelCap(f) => f,
        }
    }
}

const BEC_AXIS_NOTE: &str = "on the erasure channel read R = 1 - epsilon";

/// Runs a command and returns the bytes it would write.
pub fn render(command: &Command) -> Result<(Settings, Vec<u8>)> {
    let s = Settings::resolve(command.flags())?;
    let csv_default = s.format.unwrap_or(Format::Csv);
    let bytes = match command {
        Command::Rates(_) => output::table("rates", &commands::rates(&s)?, csv_default, &[])?,
        Command::Bounds(_) if s.m.is_some() => output::table("bounds", &commands::chain(&s)?, csv_default, &[])?,
        Command::Bounds(_) => output::table("bounds", &commands::curve(&s)?, csv_default, &[BEC_AXIS_NOTE])?,
        Command::Simulate(_) => output::table("simulate", &commands::simulate(&s)?, csv_default, &[])?,
        Command::Oracle(_) => {
            let report = commands::oracle(&s)?;
            match s.format.unwrap_or(Format::Json) {
                Format::Json => output::json_bytes(&report)?,
                Format::Csv => output::csv_bytes(&[report], &[])?,
            }
        }
        Command::Weights(_) => output::table("weights", &commands::weights(&s)?, csv_default, &[])?,
        Command::ChannelCap(_) => output::table("channel-cap", &commands::channel_cap(&s)?, csv_default, &[])?,
    };
    Ok((s, bytes))
}

/// Runs a command, writing to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<()> {
    let (settings, bytes) = render(&cli.command)?;
    match &settings.out {
        Some(path) => std::fs::write(path, &bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

#[cfg(test)]
mod cli_tests;
