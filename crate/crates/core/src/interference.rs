//! Two-source interference at a lossless symmetric beam splitter.
//!
//! Inputs are Fock pairs `|m, n>` on ports A and B with `m + n <= 3`; outputs
//! are photon counts `(r, s)` on ports C and D. Every table depends on the
//! two sources only through the interference parameter β.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest total photon number kept by the model.
pub const MAX_PHOTONS: u32 = 3;

/// Timing and spectral parameters of the two interfering wave-packets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeatParams {
    /// Relative delay between the temporal modes, seconds.
    pub tau: f64,
    /// Gaussian half-width at 1/e, seconds.
    pub sigma: f64,
    /// Angular frequency displacement, rad/s.
    pub delta: f64,
    /// Mean angular frequency, rad/s. Cancels from every probability.
    pub omega: f64,
}

impl BeatParams {
    pub fn new(tau: f64, sigma: f64, delta: f64) -> Self {
        Self {
            tau,
            sigma,
            delta,
            omega: 0.0,
        }
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(invalid("sigma", format!("{} must be positive", self.sigma)));
        }
        if !self.tau.is_finite() {
            return Err(invalid("tau", "must be finite"));
        }
        if !self.delta.is_finite() {
            return Err(invalid("delta", "must be finite"));
        }
        Ok(())
    }
}

/// Interference parameter, always in `[-1, 1]`.
///
/// `1` is full bunching (HOM dip), `0` distinguishable photons and `-1` the
/// anti-bunching peak used as the source's operating point.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Beta(f64);

impl Beta {
    pub const BUNCHING: Beta = Beta(1.0);
    pub const DISTINGUISHABLE: Beta = Beta(0.0);
    pub const ANTI_BUNCHING: Beta = Beta(-1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (-1.0..=1.0).contains(&value) {
            Ok(Beta(value))
        } else {
            Err(invalid("beta", format!("{value} not in [-1, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Beta {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Beta::new(value)
    }
}

impl From<Beta> for f64 {
    fn from(b: Beta) -> f64 {
        b.0
    }
}

/// Photon numbers entering ports A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockPair {
    pub m: u32,
    pub n: u32,
}

impl FockPair {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m + n > MAX_PHOTONS {
            return Err(Error::OutsideTruncation { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn total(self) -> u32 {
        self.m + self.n
    }

    pub fn swapped(self) -> Self {
        Self { m: self.n, n: self.m }
    }

    /// All pairs allowed by the truncation, in lexicographic order.
    pub fn all() -> impl Iterator<Item = FockPair> {
        (0..=MAX_PHOTONS).flat_map(|m| (0..=MAX_PHOTONS - m).map(move |n| FockPair { m, n }))
    }
}

/// Conditional distribution over output counts `(r, s)` for one input pair.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    input: FockPair,
    entries: BTreeMap<(u32, u32), f64>,
}

impl OutcomeDistribution {
    pub fn input(&self) -> FockPair {
        self.input
    }

    /// Probability of `(r, s)`; zero for outcomes not in the table.
    pub fn get(&self, r: u32, s: u32) -> f64 {
        self.entries.get(&(r, s)).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    fn from_entries(input: FockPair, entries: &[((u32, u32), f64)]) -> Self {
        Self {
            input,
            entries: entries.iter().copied().collect(),
        }
    }

    fn swapped(&self) -> Self {
        Self {
            input: self.input.swapped(),
            entries: self.entries.iter().map(|(&(r, s), &p)| ((s, r), p)).collect(),
        }
    }
}

/// `β = exp(-τ²/2σ²) cos(τΔ)`.
pub fn beta(params: &BeatParams) -> Result<Beta> {
    params.validate()?;
    let envelope = (-params.tau * params.tau / (2.0 * params.sigma * params.sigma)).exp();
    let value = envelope * (params.tau * params.delta).cos();
    debug_assert!((-1.0..=1.0).contains(&value));
    Ok(Beta(value))
}

/// Output table of the beam splitter for `input` at interference `beta`.
///
/// Inputs with all photons in one port split binomially; `|1,1>` carries the
/// two-photon interference term and `|2,1>` is one interfering pair plus an
/// independent photon.
pub fn conditional_output_distribution(input: FockPair, beta: Beta) -> Result<OutcomeDistribution> {
    let FockPair { m, n } = input;
    if m + n > MAX_PHOTONS {
        return Err(Error::OutsideTruncation { m, n });
    }
    if m < n {
        return Ok(conditional_output_distribution(input.swapped(), beta)?.swapped());
    }
    let b = beta.value();
    let entries: &[((u32, u32), f64)] = match (m, n) {
        (0, 0) => &[((0, 0), 1.0)],
        (1, 0) => &[((1, 0), 0.5), ((0, 1), 0.5)],
        (2, 0) => &[((2, 0), 0.25), ((0, 2), 0.25), ((1, 1), 0.5)],
        (3, 0) => &[((3, 0), 0.125), ((0, 3), 0.125), ((2, 1), 0.375), ((1, 2), 0.375)],
        (1, 1) => &[
            ((1, 1), 0.5 * (1.0 - b)),
            ((2, 0), 0.25 * (1.0 + b)),
            ((0, 2), 0.25 * (1.0 + b)),
        ],
        (2, 1) => &[
            ((3, 0), 0.125 * (1.0 + b)),
            ((0, 3), 0.125 * (1.0 + b)),
            ((2, 1), 0.125 * (3.0 - b)),
            ((1, 2), 0.125 * (3.0 - b)),
        ],
        _ => unreachable!("m >= n and m + n <= 3"),
    };
    Ok(OutcomeDistribution::from_entries(input, entries))
}

/// Normalised coincidence level `½(2 - β)` of the beat pattern.
///
/// `0.5` at the HOM dip, `1` for distinguishable photons and up to `1.5` on
/// the anti-bunching peaks.
pub fn coincidence_pattern(params: &BeatParams) -> Result<f64> {
    Ok(0.5 * (2.0 - beta(params)?.value()))
}
