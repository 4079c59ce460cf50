//! BB84 key-rate model over a lossy fibre link.
//!
//! Sources are described by their vacuum / single / two-photon emission
//! probabilities. The channel gives each photon-number component a yield and
//! an error rate; the secret-key probability per pulse then follows from
//! either the GLLP bound (every multi-photon pulse is assumed compromised) or
//! the asymptotic decoy-state estimate (the true single-photon gain and
//! error are known).

mod optimize;
mod source;

pub use optimize::{
    evaluate, max_distance, optimize_mu, DistanceFlag, MaxDistance, MuBounds, MuOptimum, RateFlag, SourceFamily,
    SourceSpec,
};
pub use source::{source_distribution, SourceModel, SourcePhotonDistribution};

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelParams {
    /// Fibre attenuation, dB/km.
    pub alpha_db_per_km: f64,
    /// Efficiency of Bob's detection apparatus.
    pub eta_bob: f64,
    /// Dark-count probability per gate.
    pub p_dark: f64,
    /// Optical misalignment error probability.
    pub e_opt: f64,
    /// Error-correction inefficiency.
    pub f_ec: f64,
    /// Basis-matching factor.
    pub q: f64,
    /// Error probability of a dark count.
    pub e0: f64,
}

impl Default for ChannelParams {
    /// Standard telecom fibre link with gated InGaAs detectors.
    fn default() -> Self {
        Self {
            alpha_db_per_km: 0.21,
            eta_bob: 0.045,
            p_dark: 0.85e-6,
            e_opt: 0.033,
            f_ec: 1.16,
            q: 0.5,
            e0: 0.5,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_db_per_km > 0.0) || !self.alpha_db_per_km.is_finite() {
            return Err(invalid("alpha_db_per_km", "must be positive"));
        }
        if !(self.eta_bob > 0.0 && self.eta_bob <= 1.0) {
            return Err(invalid("eta_bob", format!("{} not in (0, 1]", self.eta_bob)));
        }
        if !(0.0..1.0).contains(&self.p_dark) {
            return Err(invalid("p_dark", format!("{} not in [0, 1)", self.p_dark)));
        }
        if !(0.0..0.5).contains(&self.e_opt) {
            return Err(invalid("e_opt", format!("{} not in [0, 0.5)", self.e_opt)));
        }
        if !(self.f_ec >= 1.0) {
            return Err(invalid("f_ec", "must be at least 1"));
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(invalid("q", format!("{} not in (0, 1]", self.q)));
        }
        check_unit_interval("e0", self.e0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Gllp,
    Decoy,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Gllp => "gllp",
            Analysis::Decoy => "decoy",
        }
    }
}

/// Per-distance link quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyRateResult {
    pub distance_km: f64,
    /// Mean photon number used, for sources that have one.
    pub mu_used: Option<f64>,
    pub q_mu: f64,
    pub e_mu: f64,
    pub q1: f64,
    /// Single-photon error; reported as ½ when no single-photon gain is left.
    pub e1: f64,
    /// Secret-key probability per pulse, clamped at zero.
    pub rate: f64,
    /// Unclamped rate, continuous in distance; non-positive exactly when
    /// `rate` is zero.
    pub raw_rate: f64,
}

/// Overall transmittance `η_Bob 10^(-αL/10)`.
pub fn transmittance(channel: &ChannelParams, distance_km: f64) -> Result<f64> {
    if !(distance_km >= 0.0) {
        return Err(invalid("distance_km", format!("{distance_km} must be non-negative")));
    }
    Ok(channel.eta_bob * 10f64.powf(-channel.alpha_db_per_km * distance_km / 10.0))
}

/// Shannon binary entropy in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid("x", format!("{x} not in [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Yields, gains and error rates of the vacuum, single- and two-photon
/// components, plus the overall gain and error rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkStatistics {
    pub transmittance: f64,
    pub yields: [f64; 3],
    pub gains: [f64; 3],
    pub errors: [f64; 3],
    pub q_mu: f64,
    pub e_mu: f64,
}

pub fn yield_gain_error(
    dist: &SourcePhotonDistribution,
    channel: &ChannelParams,
    distance_km: f64,
) -> Result<LinkStatistics> {
    channel.validate()?;
    let eta = transmittance(channel, distance_km)?;
    let probs = dist.as_array();
    let mut yields = [0.0; 3];
    let mut gains = [0.0; 3];
    let mut errors = [0.0; 3];
    for i in 0..3 {
        let eta_i = 1.0 - (1.0 - eta).powi(i as i32);
        yields[i] = channel.p_dark + eta_i;
        gains[i] = probs[i] * yields[i];
        errors[i] = if yields[i] > 0.0 {
            (channel.e0 * channel.p_dark + channel.e_opt * eta_i) / yields[i]
        } else {
            channel.e0
        };
    }
    let q_mu: f64 = gains.iter().sum();
    if !(q_mu > 0.0) {
        return Err(Error::NoDetections);
    }
    let e_mu = errors.iter().zip(&gains).map(|(e, g)| e * g).sum::<f64>() / q_mu;
    Ok(LinkStatistics {
        transmittance: eta,
        yields,
        gains,
        errors,
        q_mu,
        e_mu,
    })
}

fn finish(channel: &ChannelParams, link: &LinkStatistics, distance_km: f64, q1: f64, e1: f64) -> Result<KeyRateResult> {
    let leak = link.q_mu * binary_entropy(link.e_mu.clamp(0.0, 1.0))? * channel.f_ec;
    let secure = if q1 > 0.0 {
        q1 * (1.0 - binary_entropy(e1.clamp(0.0, 0.5))?)
    } else {
        0.0
    };
    let raw_rate = channel.q * (secure - leak);
    let rate = if q1 <= 0.0 || e1 >= 0.5 { 0.0 } else { raw_rate.max(0.0) };
    Ok(KeyRateResult {
        distance_km,
        mu_used: None,
        q_mu: link.q_mu,
        e_mu: link.e_mu,
        q1,
        e1,
        rate,
        raw_rate,
    })
}

/// Key rate when every multi-photon pulse is assumed to leak to the
/// eavesdropper: `Q₁ = Q_μ - P₂`, `e₁ = E_μ Q_μ / Q₁`.
pub fn key_rate_gllp(
    dist: &SourcePhotonDistribution,
    channel: &ChannelParams,
    distance_km: f64,
) -> Result<KeyRateResult> {
    let link = yield_gain_error(dist, channel, distance_km)?;
    let q1 = link.q_mu - dist.p2;
    let e1 = if q1 > 0.0 { link.e_mu * link.q_mu / q1 } else { 0.5 };
    finish(channel, &link, distance_km, q1, e1)
}

/// Key rate with ideal (infinite-decoy) estimation of the single-photon
/// gain and error.
pub fn key_rate_decoy(
    dist: &SourcePhotonDistribution,
    channel: &ChannelParams,
    distance_km: f64,
) -> Result<KeyRateResult> {
    let link = yield_gain_error(dist, channel, distance_km)?;
    let q1 = link.gains[1];
    let e1 = if q1 > 0.0 { link.errors[1] } else { 0.5 };
    finish(channel, &link, distance_km, q1, e1)
}

pub fn key_rate(
    dist: &SourcePhotonDistribution,
    channel: &ChannelParams,
    distance_km: f64,
    analysis: Analysis,
) -> Result<KeyRateResult> {
    match analysis {
        Analysis::Gllp => key_rate_gllp(dist, channel, distance_km),
        Analysis::Decoy => key_rate_decoy(dist, channel, distance_km),
    }
}
