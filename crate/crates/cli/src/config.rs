//! Experiment configuration.
//!
//! A config file is flat `key = value` text; `#` starts a comment. Command
//! line flags are applied afterwards through the same keys, so flags win.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use secjam::channel::db_to_linear;
use secjam::SystemParams;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    LambdaJ,
    LambdaA,
    KActive,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::LambdaJ => "lambda_j",
            SweepVariable::LambdaA => "lambda_a",
            SweepVariable::KActive => "k_active",
        }
    }

    /// Returns `base` with this variable set to `value`.
    pub fn apply(self, base: &SystemParams, value: f64) -> SystemParams {
        let mut p = base.clone();
        match self {
            SweepVariable::LambdaJ => p.lambda_j = value,
            SweepVariable::LambdaA => p.lambda_a = value,
            SweepVariable::KActive => p.k_active = value as usize,
        }
        p
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lambda_j" | "lambda-j" => Ok(SweepVariable::LambdaJ),
            "lambda_a" | "lambda-a" => Ok(SweepVariable::LambdaA),
            "k_active" | "k" => Ok(SweepVariable::KActive),
            _ => Err(format!("unknown sweep variable `{s}` (expected lambda_j, lambda_a or k_active)")),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    /// Transmission time optimized per slot.
    Optimized,
    /// Alice always uses the whole slot.
    FixedAlpha1,
}

impl FromStr for AlphaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "optimized" | "optimized_alpha" => Ok(AlphaMode::Optimized),
            "fixed" | "fixed_alpha_1" => Ok(AlphaMode::FixedAlpha1),
            _ => Err(format!("unknown mode `{s}` (expected optimized_alpha or fixed_alpha_1)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: SystemParams,
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    pub n_slots: usize,
    pub n_draws_means: usize,
    pub mode: AlphaMode,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    pub replicas: usize,
    pub batches: usize,
    pub deplete_on_insecure: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            sweep_variable: SweepVariable::LambdaJ,
            sweep_values: (1..=10).map(|i| i as f64 / 10.0).collect(),
            n_slots: 40_000,
            n_draws_means: 100_000,
            mode: AlphaMode::Optimized,
            output_path: None,
            replicas: 4,
            batches: 40,
            deplete_on_insecure: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| CliError::config(key, format!("cannot parse `{value}`: {e}")))
}

/// Parses `a,b,c` or an inclusive range `start:stop:step`.
pub fn parse_values(key: &str, s: &str) -> Result<Vec<f64>, CliError> {
    let s = s.trim();
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let start: f64 = parse(key, parts[0])?;
        let stop: f64 = parse(key, parts[1])?;
        let step: f64 = parse(key, parts[2])?;
        if !(step > 0.0) || stop < start {
            return Err(CliError::config(key, format!("bad range `{s}`")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        // Round to the step's grid so 0.1:1.0:0.1 yields exact decimals.
        return Ok((0..=n).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect());
    }
    s.split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| parse(key, v))
        .collect()
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let p = &mut self.params;
        match key {
            "seed" => p.seed = parse(key, value)?,
            "slots" => self.n_slots = parse(key, value)?,
            "draws" => self.n_draws_means = parse(key, value)?,
            "replicas" => self.replicas = parse(key, value)?,
            "batches" => self.batches = parse(key, value)?,
            "n" | "n_antennas" => p.n_antennas = parse(key, value)?,
            "k" | "k_active" => p.k_active = parse(key, value)?,
            "lambda_a" => p.lambda_a = parse(key, value)?,
            "lambda_j" => p.lambda_j = parse(key, value)?,
            "snr_db" => {
                let lin = db_to_linear(parse(key, value)?);
                p.snr_a = lin;
                p.snr_j = lin;
            }
            "snr_a_db" => p.snr_a = db_to_linear(parse(key, value)?),
            "snr_j_db" => p.snr_j = db_to_linear(parse(key, value)?),
            "cap_a" => p.cap_a = parse(key, value)?,
            "cap_j" => p.cap_j = parse(key, value)?,
            "alpha_grid" => p.alpha_grid = parse(key, value)?,
            "mode" => self.mode = parse(key, value)?,
            "out" => self.output_path = Some(PathBuf::from(value.trim())),
            "sweep" => self.sweep_variable = parse(key, value)?,
            "values" => self.sweep_values = parse_values(key, value)?,
            "deplete_on_insecure" => self.deplete_on_insecure = parse(key, value)?,
            _ => return Err(CliError::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Applies every setting of a flat `key = value` document.
    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("line {}", lineno + 1), format!("expected key = value, got `{line}`"))
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.merge_text(&text)
    }

    /// Base parameters with the mode applied.
    pub fn base_params(&self) -> SystemParams {
        let mut p = self.params.clone();
        p.alpha_fixed = match self.mode {
            AlphaMode::Optimized => None,
            AlphaMode::FixedAlpha1 => Some(1.0),
        };
        p
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.sweep_values.is_empty() {
            return Err(CliError::config("values", "sweep needs at least one value"));
        }
        if self.n_slots < 1 {
            return Err(CliError::config("slots", "need at least one slot"));
        }
        if self.n_draws_means < 1 {
            return Err(CliError::config("draws", "need at least one draw"));
        }
        if self.replicas < 1 {
            return Err(CliError::config("replicas", "need at least one replica"));
        }
        if self.batches < 30 {
            return Err(CliError::config("batches", "batch means need at least 30 batches"));
        }
        let base = self.base_params();
        base.validate()
            .map_err(|e| CliError::config("params", e.to_string()))?;
        for (i, &v) in self.sweep_values.iter().enumerate() {
            let key = format!("values[{i}]");
            if self.sweep_variable == SweepVariable::KActive && (v.fract() != 0.0 || v < 0.0) {
                return Err(CliError::config(key, format!("{v} is not an antenna count")));
            }
            self.sweep_variable
                .apply(&base, v)
                .validate()
                .map_err(|e| CliError::config(key, format!("{v}: {e}")))?;
        }
        Ok(())
    }
}
