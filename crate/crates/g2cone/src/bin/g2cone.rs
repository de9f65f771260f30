use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use g2cone::{execute, Command, Formats, MuRange, RunConfig, Status};

#[derive(Debug, Parser)]
#[command(name = "g2cone", version, about = "G2 metrics on deformed cones over S3 x S3")]
struct Cli {
    command: Command,
    /// Family parameter(s), comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "mu_range")]
    mu: Vec<f64>,
    /// LO:HI:N evenly spaced values.
    #[arg(long)]
    mu_range: Option<MuRange>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    u_max: Option<f64>,
    /// Relative integrator tolerance; the absolute one is 1/100 of it.
    #[arg(long)]
    tol: Option<f64>,
    /// Distance to the limit direction that counts as converged.
    #[arg(long)]
    conv_tol: Option<f64>,
    /// Series order at the singular orbit.
    #[arg(long)]
    order: Option<usize>,
    /// Keep every N-th trajectory sample in files and torsion checks.
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Subset of csv,json,svg.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<String>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random states drawn by verify-torsion.
    #[arg(long)]
    samples: Option<usize>,
    /// Replace the 3-form by one with a flipped sign (negative control).
    #[arg(long)]
    wrong_sign: bool,
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, g2cone::ConfigError> {
        let d = RunConfig::default();
        let formats = match &self.format {
            Some(list) => Formats::parse_list(list)?,
            None => d.formats,
        };
        Ok(RunConfig {
            mus: self.mu_range.map_or(self.mu, |r| r.values()),
            t_max: self.t_max.unwrap_or(d.t_max),
            u_max: self.u_max.unwrap_or(d.u_max),
            tol: self.tol.unwrap_or(d.tol),
            conv_tol: self.conv_tol.unwrap_or(d.conv_tol),
            order: self.order.unwrap_or(d.order),
            stride: self.stride.unwrap_or(d.stride),
            out: self.out,
            formats,
            seed: self.seed,
            samples: self.samples.unwrap_or(d.samples),
            wrong_sign: self.wrong_sign,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command;
    let cfg = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("invalid configuration: {e}");
            return ExitCode::from(Status::InvalidConfig as u8);
        }
    };
    match execute(command, &cfg) {
        Ok(status) => {
            match status {
                Status::Passed => eprintln!("{}: passed", command.name()),
                Status::Failed => eprintln!("{}: failed", command.name()),
                Status::InvalidConfig => {}
            }
            ExitCode::from(status as u8)
        }
        Err(e) => {
            eprintln!("{}: {e:#}", command.name());
            ExitCode::from(Status::Failed as u8)
        }
    }
}
