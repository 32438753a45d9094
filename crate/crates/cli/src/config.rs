//! Versioned JSON run configuration (`"schema": "seldark/1"`).

use serde::Deserialize;

use seldark::drive::{ConditionMode, Envelope, Polarity, TargetQubit};
use seldark::gate::CorrectionMode;
use seldark::SystemSpec;

/// Top-level run configuration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must be "seldark/1".
    pub schema: String,
    pub system: SystemConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub correction_mode: Option<String>,
    #[serde(default)]
    pub rng_seed: Option<u64>,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub chain: Option<ChainConfig>,
    #[serde(default)]
    pub dressed: Option<DressedConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub delta1: f64,
    pub delta2: f64,
    pub j: f64,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default)]
    pub anharm1: Option<f64>,
    #[serde(default)]
    pub anharm2: Option<f64>,
}

fn default_levels() -> usize {
    2
}

/// Drive settings; everything left unset is derived from the darkening
/// condition and the exact spectrum.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default)]
    pub a1: Option<f64>,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub phi1: Option<f64>,
    #[serde(default)]
    pub envelope: Option<String>,
    #[serde(default)]
    pub target_qubit: Option<u8>,
    #[serde(default)]
    pub polarity: Option<String>,
    #[serde(default)]
    pub condition_mode: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub deltas: Vec<f64>,
    pub drive_site: usize,
    pub flip_site: usize,
    /// Coupling strengths expressed as J/δΔ ratios (δΔ is the mean adjacent
    /// splitting difference).
    pub j_over_ddelta: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DressedConfig {
    /// C₁ values (GHz) of the search ray.
    pub c1_values: Vec<f64>,
}

/// A config problem with the offending field spelled out.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error at `{}`: {}", self.field, self.message)
    }
}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| err("<json>", e.to_string()))?;
        if config.schema != "seldark/1" {
            return Err(err(
                "schema",
                format!("expected \"seldark/1\", got \"{}\"", config.schema),
            ));
        }
        Ok(config)
    }

    pub fn system_spec(&self) -> Result<SystemSpec, ConfigError> {
        let spec = SystemSpec {
            delta1: self.system.delta1,
            delta2: self.system.delta2,
            j: self.system.j,
            levels: self.system.levels,
            anharm1: self.system.anharm1,
            anharm2: self.system.anharm2,
        };
        spec.validate().map_err(|e| err("system", e.to_string()))?;
        Ok(spec)
    }

    pub fn envelope(&self) -> Result<Envelope, ConfigError> {
        match self.drive.envelope.as_deref() {
            None | Some("half_sine") => Ok(Envelope::HalfSine),
            Some("rect") => Ok(Envelope::Rect),
            Some(other) => Err(err(
                "drive.envelope",
                format!("expected \"rect\" or \"half_sine\", got \"{other}\""),
            )),
        }
    }

    pub fn target_qubit(&self) -> Result<TargetQubit, ConfigError> {
        match self.drive.target_qubit {
            None | Some(2) => Ok(TargetQubit::Q2),
            Some(1) => Ok(TargetQubit::Q1),
            Some(other) => Err(err(
                "drive.target_qubit",
                format!("expected 1 or 2, got {other}"),
            )),
        }
    }

    pub fn polarity(&self) -> Result<Polarity, ConfigError> {
        match self.drive.polarity.as_deref() {
            None | Some("cnot1") => Ok(Polarity::Cnot1),
            Some("cnot0") => Ok(Polarity::Cnot0),
            Some(other) => Err(err(
                "drive.polarity",
                format!("expected \"cnot1\" or \"cnot0\", got \"{other}\""),
            )),
        }
    }

    pub fn condition_mode(&self) -> Result<ConditionMode, ConfigError> {
        match self.drive.condition_mode.as_deref() {
            None | Some("exact") => Ok(ConditionMode::Exact),
            Some("weak") => Ok(ConditionMode::Weak),
            Some(other) => Err(err(
                "drive.condition_mode",
                format!("expected \"exact\" or \"weak\", got \"{other}\""),
            )),
        }
    }

    pub fn correction_mode(&self) -> Result<CorrectionMode, ConfigError> {
        match self.correction_mode.as_deref() {
            None | Some("analytic") => Ok(CorrectionMode::Analytic),
            Some("phase") => Ok(CorrectionMode::Phase),
            Some("arbitrary") => Ok(CorrectionMode::Arbitrary),
            Some(other) => Err(err(
                "correction_mode",
                format!("expected \"analytic\", \"phase\" or \"arbitrary\", got \"{other}\""),
            )),
        }
    }

    pub fn seed(&self) -> u64 {
        self.rng_seed.unwrap_or(0)
    }
}
