//! Run parameters merged from `--config <json>` and flags (flags win).

use bcmsr::channels::{BlackwellParams, DueckParams, NoiseCase, V0Choice};
use bcmsr::keysim::{ColoringKind, SimMode};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Example {
    Dueck1,
    Dueck2,
    /// Dueck channel; the noise case comes from `case`
    Dueck,
    Blackwell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// A channel law for `simulate`: a named one or an explicit P(y1, y2) table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Named(String),
    Table(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub example: Option<Example>,
    pub case: Option<u8>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub v0: Option<V0Choice>,
    pub grid: Option<usize>,
    pub pgrid: Option<String>,
    pub format: Option<Format>,
    pub out: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub blocklength: Option<usize>,
    pub rate: Option<f64>,
    pub mode: Option<SimMode>,
    pub coloring: Option<ColoringKind>,
    pub channel: Option<ChannelSpec>,
    pub otp_bits: Option<usize>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn merged(mut self, flags: &RunConfig) -> Self {
        overlay!(self, flags, example, case, p, q, r, alpha, beta, alpha1, alpha2, v0, grid, pgrid, format, out, seed);
        overlay!(self, flags, trials, blocklength, rate, mode, coloring, channel, otp_bits);
        self
    }

    pub fn example(&self) -> Example {
        match (self.example.unwrap_or(Example::Dueck1), self.case) {
            (Example::Dueck, Some(2)) => Example::Dueck2,
            (Example::Dueck, _) => Example::Dueck1,
            (e, _) => e,
        }
    }

    pub fn noise_case(&self) -> Result<NoiseCase, CliError> {
        match self.example() {
            Example::Dueck2 => Ok(NoiseCase::Star),
            Example::Dueck1 => match self.case {
                Some(c) if self.example == Some(Example::Dueck1) && c != 1 => {
                    Err(CliError::Usage(format!("--case {c} conflicts with example dueck1")))
                }
                _ => Ok(NoiseCase::Chain),
            },
            _ => Err(CliError::Usage("not a Dueck example".into())),
        }
    }

    pub fn dueck(&self) -> Result<DueckParams, CliError> {
        if let Some(c) = self.case {
            NoiseCase::from_index(c).ok_or_else(|| CliError::Usage(format!("--case must be 1 or 2, got {c}")))?;
        }
        let mut d = DueckParams::new(self.noise_case()?, self.p.unwrap_or(0.05), self.q.unwrap_or(0.05), self.r.unwrap_or(0.05));
        d.v0 = self.v0.unwrap_or_default();
        d.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(d)
    }

    pub fn blackwell(&self) -> Result<BlackwellParams, CliError> {
        let mut b = BlackwellParams::new(self.p.unwrap_or(0.1), self.alpha.unwrap_or(1.0 / 3.0), self.beta.unwrap_or(1.0 / 3.0));
        b.alpha1 = self.alpha1.unwrap_or(b.alpha1);
        b.alpha2 = self.alpha2.unwrap_or(b.alpha2);
        b.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(b)
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// `lo:hi:n` evenly spaced, or a comma-separated list. Default 0:0.5:26.
    pub fn p_grid(&self) -> Result<Vec<f64>, CliError> {
        let spec = self.pgrid.as_deref().unwrap_or("0:0.5:26").trim();
        let bad = || CliError::Usage(format!("bad p grid `{spec}` (use lo:hi:n or a comma list)"));
        let grid = if spec.is_empty() {
            Vec::new()
        } else if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            let [lo, hi, n] = parts[..] else { return Err(bad()) };
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            bcmsr::channels::linspace(lo, hi, n)
        } else {
            spec.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        if grid.is_empty() {
            return Err(CliError::Usage("p grid is empty".into()));
        }
        Ok(grid)
    }
}
