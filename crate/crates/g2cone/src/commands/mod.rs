//! The five commands. Each returns a typed report and whether every
//! assertion of its contract held; [`execute`] writes the artifacts.

mod oracle;
mod shoot;
mod stationary;
mod sweep;
mod torsion;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::{ConfigError, RunConfig};
use crate::numfmt::to_json_string;

pub use oracle::{check_kind, oracle, BsAsymptotics, KindReport, OracleReport};
pub use shoot::{
    expected_slopes, member_dir, shoot_member, step_options, FitSummary, MemberReport, MonitorExtrema, Range,
    ShapeSummary, SphereSummary, TorsionSummary,
};
pub use stationary::{stationary, ChartReport, PointReport, StationaryCmdReport};
pub use sweep::{sweep, SweepReport, SWEEP_HEADER};
pub use torsion::{verify_torsion, TorsionCase, VerifyTorsionReport};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    VerifyTorsion,
    Oracle,
    Shoot,
    Stationary,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyTorsion => "verify-torsion",
            Command::Oracle => "oracle",
            Command::Shoot => "shoot",
            Command::Stationary => "stationary",
            Command::Sweep => "sweep",
        }
    }
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed = 0,
    Failed = 1,
    InvalidConfig = 2,
}

impl Status {
    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Status::Passed
        } else {
            Status::Failed
        }
    }
}

/// Complex number as written to JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let text = to_json_string(value)?;
    write_file(path, text.as_bytes())
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Runs `cmd`, writes its artifacts under `cfg.out`, and returns the exit status.
pub fn execute(cmd: Command, cfg: &RunConfig) -> anyhow::Result<Status> {
    if let Err(e) = cfg.validate() {
        eprintln!("invalid configuration: {e}");
        return Ok(Status::InvalidConfig);
    }
    let json_path = |name: &str| -> PathBuf { cfg.out.join(format!("{name}.json")) };
    let passed = match cmd {
        Command::VerifyTorsion => {
            let rep = verify_torsion(cfg);
            if cfg.formats.json {
                write_json(&json_path("verify_torsion"), &rep)?;
            }
            rep.passed
        }
        Command::Oracle => {
            let rep = oracle();
            if cfg.formats.json {
                write_json(&json_path("oracle"), &rep)?;
            }
            rep.passed
        }
        Command::Stationary => {
            let rep = stationary(cfg);
            if cfg.formats.json {
                write_json(&json_path("stationary"), &rep)?;
            }
            rep.passed
        }
        Command::Shoot => {
            if cfg.mus.is_empty() {
                eprintln!("invalid configuration: {}", ConfigError::MissingMu);
                return Ok(Status::InvalidConfig);
            }
            let mut all = true;
            for &mu in &cfg.mus {
                all &= shoot_member(mu, cfg)?.passed;
            }
            all
        }
        Command::Sweep => sweep(cfg)?.passed,
    };
    Ok(Status::from_passed(passed))
}
