//! Run configuration shared by all commands.

use std::path::PathBuf;
use std::str::FromStr;

use g2cone_core::shoot::{DEFAULT_CONVERGENCE_TOL, DEFAULT_ORDER, DEFAULT_T_MAX, DEFAULT_U_MAX};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("mu = {0} is outside (0, 1)")]
    Mu(f64),
    #[error("invalid mu range {0:?}, expected LO:HI:N")]
    MuRange(String),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("series order {0} outside 3..=8")]
    Order(usize),
    #[error("stride must be at least 1")]
    Stride,
    #[error("sample count must be at least 1")]
    Samples,
    #[error("unknown output format {0:?}")]
    Format(String),
    #[error("this command needs --mu or --mu-range")]
    MissingMu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self { csv: true, json: true, svg: false }
    }
}

impl Formats {
    pub fn parse_list<S: AsRef<str>>(items: &[S]) -> Result<Self, ConfigError> {
        let mut f = Formats { csv: false, json: false, svg: false };
        for item in items {
            match item.as_ref().trim() {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                "" => {}
                other => return Err(ConfigError::Format(other.to_string())),
            }
        }
        Ok(f)
    }
}

/// `LO:HI:N`, N evenly spaced values including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for MuRange {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConfigError::MuRange(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 || !matches!(lo.partial_cmp(&hi), Some(o) if o.is_le()) {
            return Err(bad());
        }
        Ok(Self { lo, hi, n })
    }
}

impl MuRange {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64).collect()
    }
}

/// Sweep grid used when no μ is given: 0.1, 0.2, …, 0.9.
pub fn default_mu_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Explicit μ values; empty means the command's default.
    pub mus: Vec<f64>,
    pub t_max: f64,
    pub u_max: f64,
    pub tol: f64,
    pub conv_tol: f64,
    pub order: usize,
    pub stride: usize,
    pub out: PathBuf,
    pub formats: Formats,
    pub seed: u64,
    /// Random states drawn by the torsion check.
    pub samples: usize,
    /// Replace Ψ by a form with one flipped sign (negative control).
    pub wrong_sign: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mus: Vec::new(),
            t_max: DEFAULT_T_MAX,
            u_max: DEFAULT_U_MAX,
            tol: 1e-10,
            conv_tol: DEFAULT_CONVERGENCE_TOL,
            order: DEFAULT_ORDER,
            stride: 10,
            out: PathBuf::from("out"),
            formats: Formats::default(),
            seed: 0,
            samples: 200,
            wrong_sign: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(&mu) = self.mus.iter().find(|m| !(**m > 0.0 && **m < 1.0)) {
            return Err(ConfigError::Mu(mu));
        }
        for (name, value) in
            [("t-max", self.t_max), ("u-max", self.u_max), ("tol", self.tol), ("conv-tol", self.conv_tol)]
        {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::NonPositive { name, value });
            }
        }
        if !(3..=8).contains(&self.order) {
            return Err(ConfigError::Order(self.order));
        }
        if self.stride == 0 {
            return Err(ConfigError::Stride);
        }
        if self.samples == 0 {
            return Err(ConfigError::Samples);
        }
        Ok(())
    }

    /// μ values to run, falling back to `default`.
    pub fn mus_or(&self, default: &[f64]) -> Vec<f64> {
        if self.mus.is_empty() {
            default.to_vec()
        } else {
            self.mus.clone()
        }
    }
}
