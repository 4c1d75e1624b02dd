//! Run configuration: a flat key-value file format with one section per
//! subsystem, environment-variable overrides, and command-line precedence.
//!
//! Grammar (one entry per line):
//!
//! ```text
//! # comment
//! [section]            ; one of: model, scan, output, verify
//! key = value          ; floats, integers, strings, or comma-separated lists
//! ```
//!
//! Sections and keys:
//!
//! * `[model]`  omega1, omega2, omega3, phi, gamma1, gamma2, prefactor
//! * `[scan]`   grid, delta (comma-separated list), delta_min, delta_max,
//!   delta_steps, prominence
//! * `[output]` dir, format (csv | json)
//! * `[verify]` samples, seed
//!
//! Environment overrides use `ATOMLOC_<SECTION>_<KEY>` (for example
//! `ATOMLOC_MODEL_OMEGA1=25`). Precedence: defaults < file < environment <
//! command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::presets::PresetId;

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Everything a command run needs. The seed fixes every random stream, so
/// identical configs give byte-identical outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    /// Line-scan detunings.
    pub deltas: Vec<f64>,
    /// Contour-map detuning range: (min, max, steps).
    pub delta_range: (f64, f64, usize),
    /// Position grid points over one period.
    pub grid: usize,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub preset: Option<PresetId>,
    /// Verification draw count.
    pub samples: usize,
    pub seed: u64,
    /// Peak-detection prominence threshold as a fraction of the global max.
    pub prominence_frac: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::new(30.0, 20.0, 20.0),
            deltas: vec![0.0, 5.0, 13.0],
            delta_range: (-25.0, 25.0, 201),
            grid: crate::scan::DEFAULT_GRID,
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            preset: None,
            samples: 1000,
            seed: 42,
            prominence_frac: crate::scan::DEFAULT_PROMINENCE_FRAC,
        }
    }
}

impl RunConfig {
    /// Serialize to the flat key-value format.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[model]");
        let _ = writeln!(out, "omega1 = {}", self.params.omega1);
        let _ = writeln!(out, "omega2 = {}", self.params.omega2);
        let _ = writeln!(out, "omega3 = {}", self.params.omega3);
        let _ = writeln!(out, "phi = {}", self.params.phi);
        let _ = writeln!(out, "gamma1 = {}", self.params.gamma1);
        let _ = writeln!(out, "gamma2 = {}", self.params.gamma2);
        let _ = writeln!(out, "prefactor = {}", self.params.prefactor);
        let _ = writeln!(out);
        let _ = writeln!(out, "[scan]");
        let _ = writeln!(
            out,
            "delta = {}",
            self.deltas
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        let _ = writeln!(out, "delta_min = {}", self.delta_range.0);
        let _ = writeln!(out, "delta_max = {}", self.delta_range.1);
        let _ = writeln!(out, "delta_steps = {}", self.delta_range.2);
        let _ = writeln!(out, "grid = {}", self.grid);
        let _ = writeln!(out, "prominence = {}", self.prominence_frac);
        let _ = writeln!(out);
        let _ = writeln!(out, "[output]");
        let _ = writeln!(out, "dir = {}", self.out_dir.display());
        let _ = writeln!(out, "format = {}", self.format);
        let _ = writeln!(out);
        let _ = writeln!(out, "[verify]");
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "seed = {}", self.seed);
        out
    }

    /// Parse the flat key-value format, applying entries over `self`.
    pub fn apply_config_str(&mut self, text: &str) -> Result<()> {
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_lowercase();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            self.apply_entry(&section, key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Apply one `section.key = value` entry.
    pub fn apply_entry(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidConfig(format!("{section}.{key}: {what} '{value}'"));
        let parse_f64 =
            |value: &str| -> Result<f64> { value.parse::<f64>().map_err(|_| bad("not a number")) };
        let parse_usize = |value: &str| -> Result<usize> {
            value.parse::<usize>().map_err(|_| bad("not an integer"))
        };
        match (section, key.to_lowercase().as_str()) {
            ("model", "omega1") => self.params.omega1 = parse_f64(value)?,
            ("model", "omega2") => self.params.omega2 = parse_f64(value)?,
            ("model", "omega3") => self.params.omega3 = parse_f64(value)?,
            ("model", "phi") => self.params.phi = parse_f64(value)?,
            ("model", "gamma1") => self.params.gamma1 = parse_f64(value)?,
            ("model", "gamma2") => self.params.gamma2 = parse_f64(value)?,
            ("model", "prefactor") => self.params.prefactor = parse_f64(value)?,
            ("scan", "delta") => {
                let mut deltas = Vec::new();
                for piece in value.split(',') {
                    let piece = piece.trim();
                    if piece.is_empty() {
                        continue;
                    }
                    deltas.push(piece.parse::<f64>().map_err(|_| bad("not a number list"))?);
                }
                self.deltas = deltas;
            }
            ("scan", "delta_min") => self.delta_range.0 = parse_f64(value)?,
            ("scan", "delta_max") => self.delta_range.1 = parse_f64(value)?,
            ("scan", "delta_steps") => self.delta_range.2 = parse_usize(value)?,
            ("scan", "grid") => self.grid = parse_usize(value)?,
            ("scan", "prominence") => self.prominence_frac = parse_f64(value)?,
            ("output", "dir") => self.out_dir = PathBuf::from(value),
            ("output", "format") => self.format = value.parse()?,
            ("verify", "samples") => self.samples = parse_usize(value)?,
            ("verify", "seed") => {
                self.seed = value.parse::<u64>().map_err(|_| bad("not an integer"))?
            }
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unknown configuration key '{section}.{key}'"
                )))
            }
        }
        Ok(())
    }

    /// Apply `ATOMLOC_<SECTION>_<KEY>` overrides from an explicit variable
    /// list (test-friendly; the CLI passes `std::env::vars()`).
    pub fn apply_env_overrides<I>(&mut self, vars: I) -> Result<()>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut entries: Vec<(String, String, String)> = Vec::new();
        for (name, value) in vars {
            let Some(rest) = name.strip_prefix("ATOMLOC_") else {
                continue;
            };
            let Some((section, key)) = rest.split_once('_') else {
                continue;
            };
            entries.push((section.to_lowercase(), key.to_lowercase(), value));
        }
        // Deterministic application order regardless of environment order.
        entries.sort();
        for (section, key, value) in entries {
            self.apply_entry(&section, &key, &value)?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = RunConfig::default();
        config.apply_config_str(&text)?;
        Ok(config)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_config_string()).map_err(|e| Error::io(path, e))
    }

    /// Validity checks shared by all commands.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.grid < 64 {
            return Err(Error::InvalidConfig(format!(
                "grid must be at least 64 points, got {}",
                self.grid
            )));
        }
        if self.delta_range.2 < 2 || self.delta_range.1 <= self.delta_range.0 {
            return Err(Error::InvalidConfig(
                "delta range needs max > min and at least 2 steps".into(),
            ));
        }
        if !(self.prominence_frac > 0.0 && self.prominence_frac < 1.0) {
            return Err(Error::InvalidConfig(
                "prominence fraction must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_config() {
        let mut config = RunConfig::default();
        config.params.omega3 = 10.0;
        config.params.phi = 1.25;
        config.deltas = vec![0.0, 2.5, 7.0];
        config.grid = 1001;
        config.format = OutputFormat::Json;
        config.seed = 7;
        let text = config.to_config_string();
        let mut reloaded = RunConfig::default();
        reloaded.apply_config_str(&text).unwrap();
        assert_eq!(config, reloaded);
    }

    #[test]
    fn env_overrides_beat_file_values() {
        let mut config = RunConfig::default();
        config.apply_config_str("[model]\nomega1 = 10\n").unwrap();
        config
            .apply_env_overrides([
                ("ATOMLOC_MODEL_OMEGA1".to_string(), "25".to_string()),
                ("UNRELATED".to_string(), "1".to_string()),
                ("ATOMLOC_VERIFY_SEED".to_string(), "99".to_string()),
            ])
            .unwrap();
        assert_eq!(config.params.omega1, 25.0);
        assert_eq!(config.seed, 99);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let mut config = RunConfig::default();
        assert!(matches!(
            config.apply_config_str("[model]\nbogus = 3\n"),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            config.apply_config_str("[scan]\ngrid = many\n"),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            config.apply_config_str("[output]\nformat = yaml\n"),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let mut config = RunConfig::default();
        config
            .apply_config_str("# heading\n\n[scan]\n# grid comment\ngrid = 2001\n")
            .unwrap();
        assert_eq!(config.grid, 2001);
    }

    #[test]
    fn validate_flags_small_grid() {
        let config = RunConfig {
            grid: 10,
            ..RunConfig::default()
        };
        assert!(matches!(config.validate(), Err(Error::InvalidConfig(_))));
    }
}
