//! Sweep configuration: flat TOML schema, built-in presets, validation and
//! the canonical hash echoed into every output row.

use std::str::FromStr;

use hoskip_analytic::db_to_linear;
use hoskip_model::{MobilityProfile, NetworkParams, StrategyChoice, TierParams};
use serde::{Deserialize, Deserializer, Serialize};

use crate::CliError;

/// Flat TOML schema of one sweep. The gridded keys (`theta_db`,
/// `v_kmh_grid`, `d_f_s`) accept either a single number or an array.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    /// Macro-tier station density, stations per km^2.
    pub lambda_macro_per_km2: f64,
    /// Femto-tier station density, stations per km^2.
    pub lambda_femto_per_km2: f64,
    /// Macro transmit power, watts.
    pub p_macro_watt: f64,
    /// Femto transmit power, watts.
    pub p_femto_watt: f64,
    /// Path-loss exponent, > 2.
    pub eta: f64,
    /// Receiver noise power, watts (0 for the interference-limited regime).
    #[serde(default)]
    pub noise_watt: f64,
    /// SINR threshold grid in dB.
    #[serde(deserialize_with = "one_or_many")]
    pub theta_db: Vec<f64>,
    /// System bandwidth in Hz.
    pub w_hz: f64,
    /// Velocity grid in km/h.
    #[serde(deserialize_with = "one_or_many")]
    pub v_kmh_grid: Vec<f64>,
    /// Macro-to-macro handover delay in seconds.
    pub d_m_s: f64,
    /// Femto-involved handover delay grid in seconds, each >= `d_m_s`.
    #[serde(deserialize_with = "one_or_many")]
    pub d_f_s: Vec<f64>,
    /// Strategy choices to evaluate, tags like `bc` or `fs+ic`; defaults to
    /// every choice.
    #[serde(default = "default_strategies")]
    pub strategies: Vec<String>,
    /// Monte Carlo realizations per coverage cell; 0 leaves the Monte Carlo
    /// columns empty.
    #[serde(default)]
    pub mc_samples: u64,
    /// Seed of the Monte Carlo random streams.
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_strategies() -> Vec<String> {
    StrategyChoice::ALL.iter().map(StrategyChoice::tag).collect()
}

fn default_seed() -> u64 {
    1
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    })
}

/// Built-in configurations selectable with `run --preset <name>`.
pub const PRESETS: [(&str, &str); 4] = [
    ("table2", include_str!("../presets/table2.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn parse(text: &str) -> Result<RawConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(format!("configuration: {e}")))
}

/// A validated sweep: network, grids, Monte Carlo settings and the canonical
/// configuration hash.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub params: NetworkParams,
    pub theta_db: Vec<f64>,
    /// `theta_db` converted to linear SINR once, at resolution time.
    pub theta_linear: Vec<f64>,
    pub bandwidth_hz: f64,
    pub velocities_kmh: Vec<f64>,
    pub macro_delay_s: f64,
    pub femto_delays_s: Vec<f64>,
    pub choices: Vec<StrategyChoice>,
    pub mc_samples: u64,
    pub seed: u64,
    /// Canonical `key=value` rendering of the effective configuration.
    pub canonical: String,
    /// FNV-1a 64 hash of `canonical` as 16 hex digits, echoed into every row.
    pub hash: String,
    /// Normalised configuration echoed into JSON output.
    pub echo: RawConfig,
}

impl RawConfig {
    /// Validates every field and freezes the effective run plan.
    pub fn resolve(mut self) -> Result<RunPlan, CliError> {
        let params = NetworkParams {
            macro_tier: TierParams::new(self.lambda_macro_per_km2, self.p_macro_watt),
            femto_tier: TierParams::new(self.lambda_femto_per_km2, self.p_femto_watt),
            path_loss_exponent: self.eta,
            noise_power_watt: self.noise_watt,
        };
        params.validate().map_err(config_err)?;

        grid_of_finite("theta_db", &self.theta_db)?;
        grid_of_finite("v_kmh_grid", &self.v_kmh_grid)?;
        grid_of_finite("d_f_s", &self.d_f_s)?;
        for &v in &self.v_kmh_grid {
            if v < 0.0 {
                return Err(CliError::Config(format!(
                    "v_kmh_grid: velocity must be >= 0, got {v}"
                )));
            }
        }
        for &d_f in &self.d_f_s {
            MobilityProfile::new(0.0, self.d_m_s, d_f)
                .validate()
                .map_err(config_err)?;
        }
        if !(self.w_hz > 0.0) || !self.w_hz.is_finite() {
            return Err(CliError::Config(format!(
                "w_hz: bandwidth must be finite and > 0, got {}",
                self.w_hz
            )));
        }

        if self.strategies.is_empty() {
            return Err(CliError::Config("strategies: grid must not be empty".into()));
        }
        let mut choices = Vec::with_capacity(self.strategies.len());
        for tag in &self.strategies {
            let choice = StrategyChoice::from_str(tag)
                .map_err(|e| CliError::Config(format!("strategies: {e}")))?;
            if choices.contains(&choice) {
                return Err(CliError::Config(format!(
                    "strategies: duplicate entry '{choice}'"
                )));
            }
            choices.push(choice);
        }
        // normalise the echo so hash and JSON reflect the parsed choices
        self.strategies = choices.iter().map(StrategyChoice::tag).collect();

        let canonical = self.canonical();
        let hash = format!("{:016x}", fnv1a64(canonical.as_bytes()));
        Ok(RunPlan {
            params,
            theta_linear: self.theta_db.iter().map(|&db| db_to_linear(db)).collect(),
            theta_db: self.theta_db.clone(),
            bandwidth_hz: self.w_hz,
            velocities_kmh: self.v_kmh_grid.clone(),
            macro_delay_s: self.d_m_s,
            femto_delays_s: self.d_f_s.clone(),
            choices,
            mc_samples: self.mc_samples,
            seed: self.seed,
            canonical,
            hash,
            echo: self,
        })
    }

    /// One `key=value` line per field, in schema order, with shortest
    /// round-trip float formatting; the input to the configuration hash.
    fn canonical(&self) -> String {
        let nums = |xs: &[f64]| {
            xs.iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        [
            format!("lambda_macro_per_km2={}", self.lambda_macro_per_km2),
            format!("lambda_femto_per_km2={}", self.lambda_femto_per_km2),
            format!("p_macro_watt={}", self.p_macro_watt),
            format!("p_femto_watt={}", self.p_femto_watt),
            format!("eta={}", self.eta),
            format!("noise_watt={}", self.noise_watt),
            format!("theta_db={}", nums(&self.theta_db)),
            format!("w_hz={}", self.w_hz),
            format!("v_kmh_grid={}", nums(&self.v_kmh_grid)),
            format!("d_m_s={}", self.d_m_s),
            format!("d_f_s={}", nums(&self.d_f_s)),
            format!("strategies={}", self.strategies.join(",")),
            format!("mc_samples={}", self.mc_samples),
            format!("seed={}", self.seed),
        ]
        .join("\n")
    }
}

fn grid_of_finite(name: &'static str, xs: &[f64]) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(CliError::Config(format!("{name}: grid must not be empty")));
    }
    for &x in xs {
        if !x.is_finite() {
            return Err(CliError::Config(format!(
                "{name}: every entry must be finite, got {x}"
            )));
        }
    }
    Ok(())
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// FNV-1a 64-bit hash; platform-independent, so hashes are comparable across
/// machines and runs.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
