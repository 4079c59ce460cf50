//! Run configuration: one JSON document, every key optional. Command-line
//! flags are applied on top before validation.

use std::f64::consts::PI;
use std::path::Path;

use lohps::correlation::HbtConfig;
use lohps::interference::{BeatParams, Beta};
use lohps::oracle::{McConfig, QuadratureSpec};
use lohps::qkd::{source_distribution, Analysis, ChannelParams, MuBounds, SourceModel, SourceSpec};
use lohps::statistics::HeraldConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub beat: BeatConfig,
    pub herald: HeraldSection,
    pub hbt: HbtSection,
    pub g2: G2Section,
    pub channel: ChannelParams,
    pub qkd: QkdSection,
    pub mc: McSection,
    pub oracle: OracleSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeatConfig {
    /// Angular frequency displacement, rad/s.
    pub delta: f64,
    /// Coherence time of the source output, s.
    pub coherence_time: f64,
    /// σ = coherence_time × this factor, unless `sigma` is given.
    pub sigma_per_coherence_time: f64,
    pub sigma: Option<f64>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub points: usize,
}

impl Default for BeatConfig {
    fn default() -> Self {
        Self {
            delta: 2.0 * PI * 40e6,
            coherence_time: 2.2e-9,
            sigma_per_coherence_time: 0.5,
            sigma: None,
            tau_min: None,
            tau_max: None,
            points: 1000,
        }
    }
}

impl BeatConfig {
    pub fn sigma(&self) -> f64 {
        self.sigma
            .unwrap_or(self.coherence_time * self.sigma_per_coherence_time)
    }

    pub fn params(&self) -> BeatParams {
        BeatParams::new(0.0, self.sigma(), self.delta)
    }

    /// Delay grid; defaults to ±4σ.
    pub fn tau_grid(&self) -> Vec<f64> {
        let s = self.sigma();
        linspace(
            self.tau_min.unwrap_or(-4.0 * s),
            self.tau_max.unwrap_or(4.0 * s),
            self.points,
        )
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params().validate()?;
        if self.points < 2 {
            return Err(CliError::Config("beat.points must be at least 2".into()));
        }
        let grid = self.tau_grid();
        if !(grid[0] < grid[grid.len() - 1]) {
            return Err(CliError::Config("beat.tau_min must be below beat.tau_max".into()));
        }
        Ok(())
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeraldSection {
    pub mu: Vec<f64>,
    pub eta_c: f64,
    pub beta: f64,
}

impl Default for HeraldSection {
    fn default() -> Self {
        Self {
            mu: vec![0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.67],
            eta_c: 0.15,
            beta: -1.0,
        }
    }
}

impl HeraldSection {
    pub fn configs(&self) -> Result<Vec<HeraldConfig>, CliError> {
        if self.mu.is_empty() {
            return Err(CliError::Config("herald.mu must not be empty".into()));
        }
        let beta = Beta::new(self.beta)?;
        self.mu
            .iter()
            .map(|&mu| Ok(HeraldConfig::new(mu, self.eta_c, beta)?))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HbtSection {
    pub eta_f: f64,
    pub eta_g: f64,
}

impl Default for HbtSection {
    fn default() -> Self {
        Self {
            eta_f: 0.15,
            eta_g: 0.15,
        }
    }
}

impl HbtSection {
    pub fn config(&self) -> Result<HbtConfig, CliError> {
        Ok(HbtConfig::new(self.eta_f, self.eta_g)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct G2Section {
    pub mu: f64,
    pub eta_c: f64,
    pub beta: f64,
    /// Curve half-width in units of π/Δ.
    pub curve_half_periods: f64,
    pub curve_points: usize,
}

impl Default for G2Section {
    fn default() -> Self {
        Self {
            mu: 0.1,
            eta_c: 0.15,
            beta: -1.0,
            curve_half_periods: 3.0,
            curve_points: 601,
        }
    }
}

impl G2Section {
    pub fn herald(&self) -> Result<HeraldConfig, CliError> {
        Ok(HeraldConfig::new(self.mu, self.eta_c, Beta::new(self.beta)?)?)
    }

    pub fn curve_grid(&self, delta: f64) -> Result<Vec<f64>, CliError> {
        if self.curve_points < 2 || !(self.curve_half_periods > 0.0) || delta == 0.0 {
            return Err(CliError::Config(
                "g2 curve needs curve_points >= 2, curve_half_periods > 0 and delta != 0".into(),
            ));
        }
        let half = self.curve_half_periods * PI / delta.abs();
        Ok(linspace(-half, half, self.curve_points))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SourceName {
    Faint,
    Spdc,
    Hps,
    Ideal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QkdSection {
    pub sources: Vec<SourceName>,
    pub analyses: Vec<Analysis>,
    pub distance_max_km: f64,
    pub distance_step_km: f64,
    pub mu_bounds: MuBounds,
    pub hps_eta_c: f64,
    pub hps_beta: f64,
    pub spdc_p1: f64,
    pub spdc_g2: f64,
}

impl Default for QkdSection {
    fn default() -> Self {
        Self {
            sources: vec![SourceName::Faint, SourceName::Spdc, SourceName::Hps, SourceName::Ideal],
            analyses: vec![Analysis::Gllp, Analysis::Decoy],
            distance_max_km: 200.0,
            distance_step_km: 1.0,
            mu_bounds: MuBounds::default(),
            hps_eta_c: 0.15,
            hps_beta: -1.0,
            spdc_p1: 0.42,
            spdc_g2: 0.018,
        }
    }
}

impl QkdSection {
    pub fn source_specs(&self) -> Result<Vec<SourceSpec>, CliError> {
        if self.sources.is_empty() || self.analyses.is_empty() {
            return Err(CliError::Config(
                "qkd.sources and qkd.analyses must not be empty".into(),
            ));
        }
        self.mu_bounds.validate()?;
        let hps_beta = Beta::new(self.hps_beta)?;
        HeraldConfig::new(self.mu_bounds.max, self.hps_eta_c, hps_beta)?;
        self.sources
            .iter()
            .map(|s| {
                Ok(match s {
                    SourceName::Faint => SourceSpec::FaintLaser,
                    SourceName::Hps => SourceSpec::LinearOpticHps {
                        eta_c: self.hps_eta_c,
                        beta: hps_beta,
                    },
                    SourceName::Spdc => {
                        source_distribution(&SourceModel::SpdcHps {
                            p1: self.spdc_p1,
                            g2: self.spdc_g2,
                        })?;
                        SourceSpec::SpdcHps {
                            p1: self.spdc_p1,
                            g2: self.spdc_g2,
                        }
                    }
                    SourceName::Ideal => SourceSpec::IdealSingle,
                })
            })
            .collect()
    }

    pub fn distances(&self) -> Result<Vec<f64>, CliError> {
        if !(self.distance_step_km > 0.0) || !(self.distance_max_km >= 0.0) {
            return Err(CliError::Config(
                "qkd.distance_step_km must be positive and qkd.distance_max_km non-negative".into(),
            ));
        }
        let n = (self.distance_max_km / self.distance_step_km + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| i as f64 * self.distance_step_km).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSection {
    pub trials: u64,
    pub seed: u64,
    pub chunk_trials: u64,
}

impl Default for McSection {
    fn default() -> Self {
        Self {
            trials: 10_000_000,
            seed: 2018,
            chunk_trials: McConfig::DEFAULT_CHUNK,
        }
    }
}

impl McSection {
    pub fn config(&self) -> Result<McConfig, CliError> {
        let mc = McConfig {
            trials: self.trials,
            seed: self.seed,
            chunk_trials: self.chunk_trials,
        };
        mc.validate()?;
        Ok(mc)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    pub mu: f64,
    pub beta: f64,
    pub eta_c: f64,
    /// σΔ for the quadrature check.
    pub sigma_delta: f64,
    pub quadrature: QuadratureSpec,
    /// Multiplies every check tolerance.
    pub tolerance_scale: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            mu: 0.1,
            beta: -1.0,
            eta_c: 0.15,
            sigma_delta: 20.0,
            quadrature: QuadratureSpec::default(),
            tolerance_scale: 1.0,
        }
    }
}

impl OracleSection {
    pub fn validate(&self) -> Result<(), CliError> {
        HeraldConfig::new(self.mu, self.eta_c, Beta::new(self.beta)?)?;
        self.quadrature.validate()?;
        if !(self.sigma_delta > 0.0) {
            return Err(CliError::Config("oracle.sigma_delta must be positive".into()));
        }
        if !(self.tolerance_scale >= 0.0) {
            return Err(CliError::Config("oracle.tolerance_scale must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<std::path::PathBuf>,
    pub format: Option<Format>,
}
