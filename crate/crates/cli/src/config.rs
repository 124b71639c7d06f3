//! Declarative experiment configuration and flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use ouselect::risklab::SigmaChoice;
use ouselect::selector::{default_grid, rho_schedule, ThetaEstimator};
use ouselect::signals::catalogue;
use ouselect::{Execution, FamilyBounds, FamilyGrid, NoiseParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Default master seed.
pub const DEFAULT_SEED: u64 = 20261016;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Estimate,
    AuditOracle,
    AuditSigma,
    AuditConditions,
    Efficiency,
    Moments,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Simulate => "simulate",
            Command::Estimate => "estimate",
            Command::AuditOracle => "audit-oracle",
            Command::AuditSigma => "audit-sigma",
            Command::AuditConditions => "audit-conditions",
            Command::Efficiency => "efficiency",
            Command::Moments => "moments",
        };
        f.write_str(s)
    }
}

/// Noise family: the single configured process or a 3×3 box per `ϱ*` corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    #[default]
    Single,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AutoTag {
    Auto,
}

/// Penalty `ρ`: a fixed value or the schedule `ρ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rho {
    Fixed(f64),
    #[default]
    #[serde(with = "auto_tag")]
    Auto,
}

mod auto_tag {
    use super::AutoTag;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        AutoTag::Auto.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        AutoTag::deserialize(d).map(|_| ())
    }
}

impl Rho {
    pub fn at(self, n: usize) -> f64 {
        match self {
            Rho::Fixed(r) => r,
            Rho::Auto => rho_schedule(n),
        }
    }
}

impl FromStr for Rho {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Rho::Auto);
        }
        s.parse::<f64>()
            .map(Rho::Fixed)
            .map_err(|_| format!("`{s}` is neither a number nor `auto`"))
    }
}

fn default_signal() -> String {
    "expcos".to_string()
}
fn default_n() -> Vec<usize> {
    vec![100]
}
fn default_dt() -> f64 {
    1.0 / 512.0
}
fn default_replicates() -> usize {
    200
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_out() -> PathBuf {
    PathBuf::from("ouselect-out")
}
fn default_indices() -> Vec<usize> {
    vec![1, 2, 3, 4]
}
fn default_j_max() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default = "default_signal")]
    pub signal: String,
    #[serde(default = "default_n")]
    pub n: Vec<usize>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub rho: Rho,
    /// `None` audits both modes and estimates with `σ̂_n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaChoice>,
    #[serde(default)]
    pub family: FamilyKind,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Observation CSV for `estimate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Basis indices for `moments`.
    #[serde(default = "default_indices")]
    pub indices: Vec<usize>,
    /// Largest coordinate for `audit-conditions`.
    #[serde(default = "default_j_max")]
    pub j_max: usize,
    #[serde(default)]
    pub execution: Execution,
    #[serde(default = "NoiseParams::reference")]
    pub noise: NoiseParams,
    /// Family box; defaults to the tightest box around `noise`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<FamilyBounds>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: None,
            signal: default_signal(),
            n: default_n(),
            dt: default_dt(),
            replicates: default_replicates(),
            seed: default_seed(),
            rho: Rho::Auto,
            sigma: None,
            family: FamilyKind::Single,
            out: default_out(),
            input: None,
            indices: default_indices(),
            j_max: default_j_max(),
            execution: Execution::Parallel,
            noise: NoiseParams::reference(),
            bounds: None,
        }
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub replicates: Option<usize>,
    pub n: Option<Vec<usize>>,
    pub rho: Option<Rho>,
    pub sigma: Option<SigmaChoice>,
    pub family: Option<FamilyKind>,
    pub signal: Option<String>,
    pub dt: Option<f64>,
    pub input: Option<PathBuf>,
    pub sequential: bool,
}

#[derive(Deserialize)]
struct ManifestConfig {
    config: ExperimentConfig,
}

impl ExperimentConfig {
    /// Reads a TOML config, or the `config` block of a JSON run manifest.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str::<ManifestConfig>(&text)
                .map(|m| m.config)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn apply(&mut self, o: Overrides) {
        if o.command.is_some() {
            self.command = o.command;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.out {
            self.out = v;
        }
        if let Some(v) = o.replicates {
            self.replicates = v;
        }
        if let Some(v) = o.n {
            self.n = v;
        }
        if let Some(v) = o.rho {
            self.rho = v;
        }
        if o.sigma.is_some() {
            self.sigma = o.sigma;
        }
        if let Some(v) = o.family {
            self.family = v;
        }
        if let Some(v) = o.signal {
            self.signal = v;
        }
        if let Some(v) = o.dt {
            self.dt = v;
        }
        if o.input.is_some() {
            self.input = o.input;
        }
        if o.sequential {
            self.execution = Execution::Sequential;
        }
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("cannot echo config: {e}")))
    }

    pub fn command(&self) -> Result<Command, CliError> {
        self.command
            .ok_or_else(|| CliError::Config("no command given on the command line or in the config".to_string()))
    }

    pub fn bounds(&self) -> FamilyBounds {
        self.bounds.unwrap_or_else(|| FamilyBounds::around(&self.noise))
    }

    pub fn family_grid(&self) -> Result<FamilyGrid, CliError> {
        let bounds = self.bounds();
        match self.family {
            FamilyKind::Single => FamilyGrid::new(vec![self.noise], bounds).map_err(config_err),
            FamilyKind::Box => Ok(FamilyGrid::box_grid(bounds)),
        }
    }

    pub fn sigma_modes(&self) -> Vec<SigmaChoice> {
        match self.sigma {
            Some(m) => vec![m],
            None => vec![SigmaChoice::Known, SigmaChoice::Estimated],
        }
    }

    pub fn points_per_period(&self) -> Option<usize> {
        let m = (1.0 / self.dt).round();
        (m >= 1.0 && (m * self.dt - 1.0).abs() <= 1e-12).then_some(m as usize)
    }

    /// Checks every numeric field against the library preconditions.
    pub fn validate(&self) -> Result<(), CliError> {
        let command = self.command()?;
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.dt > 0.0 && self.dt <= 1.0) || self.points_per_period().is_none() {
            return bad(format!("dt = {} must be 1/m for an integer m ≥ 1", self.dt));
        }
        if self.replicates < 2 && !matches!(command, Command::Simulate | Command::Estimate) {
            return bad(format!("need at least 2 replicates, got {}", self.replicates));
        }
        if let Rho::Fixed(r) = self.rho {
            if !(r > 0.0 && r < 1.0 / 3.0) {
                return bad(format!("rho = {r} must lie in (0, 1/3)"));
            }
        }
        let signal = catalogue(&self.signal).map_err(config_err)?;
        self.noise.validate().map_err(config_err)?;
        let bounds = self.bounds();
        FamilyBounds::new(bounds.a_max, bounds.lambda_max, bounds.rho_star_min, bounds.rho_star_max)
            .map_err(config_err)?;
        self.family_grid()?;
        if self.input.is_some() && command != Command::Estimate {
            return bad("--input only applies to `estimate`".to_string());
        }
        let needs_n = !(command == Command::Estimate && self.input.is_some());
        if needs_n {
            if self.n.is_empty() {
                return bad("the n list is empty".to_string());
            }
            if let Some(n) = self.n.iter().find(|n| **n < 3) {
                return bad(format!("horizon n = {n} must be at least 3"));
            }
        }
        let estimated = self.sigma_modes().contains(&SigmaChoice::Estimated);
        match command {
            Command::Simulate => {}
            Command::Estimate => {
                if needs_n {
                    for &n in &self.n {
                        self.check_theta_range(n, estimated)?;
                    }
                }
            }
            Command::AuditOracle => {
                for &n in &self.n {
                    self.check_theta_range(n, estimated)?;
                }
            }
            Command::AuditSigma => {
                if !signal.ds_l1().is_finite() {
                    return bad(format!("signal {} has no derivative norm", signal.name));
                }
                for &n in &self.n {
                    self.check_theta_range(n, true)?;
                }
            }
            Command::Efficiency => {
                for &n in &self.n {
                    self.check_theta_range(n, false)?;
                }
            }
            Command::AuditConditions => {
                if self.j_max == 0 {
                    return bad("j_max must be at least 1".to_string());
                }
            }
            Command::Moments => {
                if self.indices.is_empty() || self.indices.contains(&0) {
                    return bad("moment indices must be a nonempty list of integers ≥ 1".to_string());
                }
            }
        }
        Ok(())
    }

    /// The grid must resolve every coefficient the selector reads.
    fn check_theta_range(&self, n: usize, full: bool) -> Result<(), CliError> {
        let grid = default_grid(n).map_err(config_err)?;
        let len = if full {
            n
        } else {
            grid.mu().max(2 * grid.omega_max().ceil() as usize).min(n)
        };
        ThetaEstimator::new(len, self.dt).map(|_| ()).map_err(config_err)
    }
}

fn config_err(e: ouselect::Error) -> CliError {
    CliError::Config(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_parses_values_and_auto() {
        assert_eq!("auto".parse::<Rho>().unwrap(), Rho::Auto);
        assert_eq!("0.1".parse::<Rho>().unwrap(), Rho::Fixed(0.1));
        assert!("x".parse::<Rho>().is_err());
        assert_eq!(Rho::Auto.at(1000), rho_schedule(1000));
    }

    #[test]
    fn toml_echo_round_trips() {
        let cfg = ExperimentConfig {
            command: Some(Command::AuditOracle),
            rho: Rho::Fixed(0.125),
            sigma: Some(SigmaChoice::Known),
            bounds: Some(FamilyBounds::new(2.0, 1.0, 1.0, 3.0).unwrap()),
            ..ExperimentConfig::default()
        };
        let back: ExperimentConfig = toml::from_str(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
        let auto: ExperimentConfig = toml::from_str("command = \"moments\"\nrho = \"auto\"\n").unwrap();
        assert_eq!(auto.rho, Rho::Auto);
        assert_eq!(auto.noise, NoiseParams::reference());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<ExperimentConfig>("command = \"moments\"\nreplicate = 3\n").is_err());
    }

    #[test]
    fn box_family_has_nine_members_per_corner() {
        let cfg = ExperimentConfig {
            command: Some(Command::AuditSigma),
            family: FamilyKind::Box,
            bounds: Some(FamilyBounds::new(1.0, 1.0, 1.0, 2.0).unwrap()),
            ..ExperimentConfig::default()
        };
        assert_eq!(cfg.family_grid().unwrap().members.len(), 18);
        cfg.validate().unwrap();
    }

    #[test]
    fn points_per_period_requires_unit_fraction() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.points_per_period(), Some(512));
        cfg.dt = 0.3;
        assert_eq!(cfg.points_per_period(), None);
    }
}
