//! Hanbury-Brown–Twiss analysis of the heralded pulse.
//!
//! A symmetric beam splitter sends the heralded photons to detectors F and G.
//! Dark counts are neglected, so only single- and two-photon pulses click.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};
use crate::interference::{beta, BeatParams};
use crate::statistics::{heralded_statistics, HeraldConfig, HeraldedStatistics};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HbtConfig {
    pub eta_f: f64,
    pub eta_g: f64,
}

impl HbtConfig {
    pub fn new(eta_f: f64, eta_g: f64) -> Result<Self> {
        let c = Self { eta_f, eta_g };
        c.validate()?;
        Ok(c)
    }

    pub fn symmetric(eta: f64) -> Result<Self> {
        Self::new(eta, eta)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("eta_f", self.eta_f)?;
        check_unit_interval("eta_g", self.eta_g)
    }

    pub fn swapped(self) -> Self {
        Self {
            eta_f: self.eta_g,
            eta_g: self.eta_f,
        }
    }
}

/// Click probabilities per heralded pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionProbabilities {
    pub q_f: f64,
    pub q_g: f64,
    pub q_fg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Result {
    pub q_f: f64,
    pub q_g: f64,
    pub q_fg: f64,
    /// `q_fg / (q_f q_g)`.
    pub g2_direct: f64,
    /// Rearranged expression in the source statistics whose `P_m²`
    /// coefficient is `2 - η_F/4 - η_G/4 + η_F η_G/8` rather than the
    /// `2(1 - η_F/4)(1 - η_G/4)` that follows from the click probabilities.
    pub g2_eq25: f64,
}

impl G2Result {
    /// Relative difference of the rearranged form from the direct ratio.
    pub fn relative_difference(&self) -> f64 {
        (self.g2_eq25 - self.g2_direct) / self.g2_direct
    }
}

/// Per-detector click probability for a single arm of efficiency `eta`.
///
/// A single photon reaches the arm with probability ½. Each photon of a pair
/// independently lands on the arm and is detected with probability `eta/2`,
/// so the arm clicks with probability `1 - (1 - eta/2)² = eta - eta²/4`.
fn arm_click(stats: &HeraldedStatistics, eta: f64) -> f64 {
    stats.p_single * eta / 2.0 + (eta - eta * eta / 4.0) * stats.p_multi
}

/// Click probabilities at F, G and in coincidence.
///
/// A coincidence needs the two photons of a pair to leave by different
/// ports (probability ½) and both to be detected.
pub fn detection_probabilities(stats: &HeraldedStatistics, hbt: &HbtConfig) -> Result<DetectionProbabilities> {
    hbt.validate()?;
    Ok(DetectionProbabilities {
        q_f: arm_click(stats, hbt.eta_f),
        q_g: arm_click(stats, hbt.eta_g),
        q_fg: hbt.eta_f * hbt.eta_g * stats.p_multi / 2.0,
    })
}

/// Second-order correlation at zero delay.
pub fn g2_zero(stats: &HeraldedStatistics, hbt: &HbtConfig) -> Result<G2Result> {
    let DetectionProbabilities { q_f, q_g, q_fg } = detection_probabilities(stats, hbt)?;
    if !(q_f > 0.0) {
        return Err(Error::UndefinedG2("F"));
    }
    if !(q_g > 0.0) {
        return Err(Error::UndefinedG2("G"));
    }
    let (ps, pm) = (stats.p_single, stats.p_multi);
    let (ef, eg) = (hbt.eta_f, hbt.eta_g);
    let den =
        ps * ps / 2.0 + (2.0 - ef / 4.0 - eg / 4.0 + ef * eg / 8.0) * pm * pm + (2.0 - ef / 4.0 - eg / 4.0) * ps * pm;
    Ok(G2Result {
        q_f,
        q_g,
        q_fg,
        g2_direct: q_fg / (q_f * q_g),
        g2_eq25: pm / den,
    })
}

/// Parameters shared by every point of a g²(τ) curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub mu: f64,
    pub eta_c: f64,
    pub sigma: f64,
    pub delta: f64,
    pub hbt: HbtConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub tau: f64,
    pub beta: f64,
    pub g2: f64,
}

/// Model g²(0) of the heralded pulse as the herald delay τ is scanned.
///
/// Each point is independent; evaluation runs in parallel and the output
/// keeps the order of `tau_grid`.
pub fn g2_curve(tau_grid: &[f64], params: &CurveParams) -> Result<Vec<CurvePoint>> {
    if tau_grid.is_empty() {
        return Err(crate::error::invalid("tau_grid", "must not be empty"));
    }
    BeatParams::new(0.0, params.sigma, params.delta).validate()?;
    params.hbt.validate()?;
    tau_grid
        .par_iter()
        .map(|&tau| {
            let b = beta(&BeatParams::new(tau, params.sigma, params.delta))?;
            let stats = heralded_statistics(&HeraldConfig::new(params.mu, params.eta_c, b)?)?;
            let g2 = g2_zero(&stats, &params.hbt)?;
            Ok(CurvePoint {
                tau,
                beta: b.value(),
                g2: g2.g2_direct,
            })
        })
        .collect()
}
