//! Per-distance tuning of μ and the maximum link length.

use serde::{Deserialize, Serialize};

use super::source::{source_distribution, SourceModel};
use super::{key_rate, Analysis, ChannelParams, KeyRateResult};
use crate::error::{invalid, Result};
use crate::interference::Beta;

/// Upper end of the distance search, km.
pub const MAX_SEARCH_KM: f64 = 500.0;
/// Resolution of the distance bisection, km.
pub const DISTANCE_RESOLUTION_KM: f64 = 0.1;

const GOLDEN_RELATIVE_WIDTH: f64 = 1e-4;

/// Sources whose mean photon number is a free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceFamily {
    FaintLaser,
    LinearOpticHps { eta_c: f64, beta: Beta },
}

impl SourceFamily {
    pub fn at(self, mu: f64) -> SourceModel {
        match self {
            SourceFamily::FaintLaser => SourceModel::FaintLaser { mu },
            SourceFamily::LinearOpticHps { eta_c, beta } => SourceModel::LinearOpticHps { mu, eta_c, beta },
        }
    }
}

/// A source as used in link comparisons: tunable ones get their μ optimised
/// at every distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    FaintLaser,
    LinearOpticHps { eta_c: f64, beta: Beta },
    SpdcHps { p1: f64, g2: f64 },
    IdealSingle,
}

impl SourceSpec {
    /// Heralded source at the anti-bunching point with a 15% herald detector.
    pub const HPS_DEFAULT: SourceSpec = SourceSpec::LinearOpticHps {
        eta_c: 0.15,
        beta: Beta::ANTI_BUNCHING,
    };
    pub const SPDC_DEFAULT: SourceSpec = SourceSpec::SpdcHps { p1: 0.42, g2: 0.018 };

    pub fn name(&self) -> &'static str {
        match self {
            SourceSpec::FaintLaser => "faint",
            SourceSpec::LinearOpticHps { .. } => "hps",
            SourceSpec::SpdcHps { .. } => "spdc",
            SourceSpec::IdealSingle => "ideal",
        }
    }

    pub fn family(&self) -> Option<SourceFamily> {
        match *self {
            SourceSpec::FaintLaser => Some(SourceFamily::FaintLaser),
            SourceSpec::LinearOpticHps { eta_c, beta } => Some(SourceFamily::LinearOpticHps { eta_c, beta }),
            SourceSpec::SpdcHps { .. } | SourceSpec::IdealSingle => None,
        }
    }

    fn fixed_model(&self) -> Option<SourceModel> {
        match *self {
            SourceSpec::SpdcHps { p1, g2 } => Some(SourceModel::SpdcHps { p1, g2 }),
            SourceSpec::IdealSingle => Some(SourceModel::IdealSingle),
            _ => None,
        }
    }
}

/// Search range for μ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MuBounds {
    pub min: f64,
    pub max: f64,
    pub grid_points: usize,
}

impl Default for MuBounds {
    /// The upper bound keeps the three-photon truncation of the heralded
    /// source accurate.
    fn default() -> Self {
        Self {
            min: 1e-4,
            max: 0.65,
            grid_points: 200,
        }
    }
}

impl MuBounds {
    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(invalid(
                "mu bounds",
                format!("need 0 < min < max, got [{}, {}]", self.min, self.max),
            ));
        }
        if self.grid_points < 3 {
            return Err(invalid("grid_points", "need at least 3"));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let (lo, hi) = (self.min.ln(), self.max.ln());
        let n = self.grid_points;
        let mut grid: Vec<f64> = (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect();
        grid[0] = self.min;
        grid[n - 1] = self.max;
        grid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateFlag {
    Positive,
    NoPositiveRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuOptimum {
    pub mu_star: f64,
    pub result: KeyRateResult,
    pub flag: RateFlag,
}

/// Maximises the key rate over μ: log-spaced grid, then golden-section
/// refinement between the neighbours of the best grid point.
pub fn optimize_mu(
    family: SourceFamily,
    channel: &ChannelParams,
    distance_km: f64,
    analysis: Analysis,
    bounds: &MuBounds,
) -> Result<MuOptimum> {
    bounds.validate()?;
    let eval = |mu: f64| -> Result<KeyRateResult> {
        let dist = source_distribution(&family.at(mu))?;
        let mut r = key_rate(&dist, channel, distance_km, analysis)?;
        r.mu_used = Some(mu);
        Ok(r)
    };

    let grid = bounds.grid();
    let mut best_idx = 0;
    let mut best = eval(grid[0])?;
    for (i, &mu) in grid.iter().enumerate().skip(1) {
        let r = eval(mu)?;
        if r.rate > best.rate {
            best = r;
            best_idx = i;
        }
    }
    if !(best.rate > 0.0) {
        return Ok(MuOptimum {
            mu_star: grid[0],
            result: eval(grid[0])?,
            flag: RateFlag::NoPositiveRate,
        });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = grid[best_idx.saturating_sub(1)];
    let mut b = grid[(best_idx + 1).min(grid.len() - 1)];
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut rc = eval(c)?;
    let mut rd = eval(d)?;
    while (b - a) > GOLDEN_RELATIVE_WIDTH * 0.5 * (a + b) {
        if rc.rate >= rd.rate {
            b = d;
            d = c;
            rd = rc;
            c = b - inv_phi * (b - a);
            rc = eval(c)?;
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + inv_phi * (b - a);
            rd = eval(d)?;
        }
    }
    for r in [rc, rd] {
        if r.rate > best.rate {
            best = r;
        }
    }
    Ok(MuOptimum {
        mu_star: best.mu_used.expect("set by eval"),
        result: best,
        flag: RateFlag::Positive,
    })
}

/// Key rate of `source` at one distance, with μ optimised where the source
/// has one.
pub fn evaluate(
    source: &SourceSpec,
    channel: &ChannelParams,
    distance_km: f64,
    analysis: Analysis,
    bounds: &MuBounds,
) -> Result<KeyRateResult> {
    match (source.family(), source.fixed_model()) {
        (Some(family), _) => Ok(optimize_mu(family, channel, distance_km, analysis, bounds)?.result),
        (None, Some(model)) => key_rate(&source_distribution(&model)?, channel, distance_km, analysis),
        (None, None) => unreachable!("every source is either tunable or fixed"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceFlag {
    Found,
    NoPositiveRate,
    /// The rate is still positive at [`MAX_SEARCH_KM`].
    CapReached,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxDistance {
    pub distance_km: f64,
    pub flag: DistanceFlag,
}

/// Longest link with a positive (optimised) key rate: doubling search from
/// 1 km, then bisection down to 0.1 km.
pub fn max_distance(
    source: &SourceSpec,
    channel: &ChannelParams,
    analysis: Analysis,
    bounds: &MuBounds,
) -> Result<MaxDistance> {
    let positive = |l: f64| -> Result<bool> { Ok(evaluate(source, channel, l, analysis, bounds)?.rate > 0.0) };
    if !positive(0.0)? {
        return Ok(MaxDistance {
            distance_km: 0.0,
            flag: DistanceFlag::NoPositiveRate,
        });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while positive(hi)? {
        if hi >= MAX_SEARCH_KM {
            return Ok(MaxDistance {
                distance_km: MAX_SEARCH_KM,
                flag: DistanceFlag::CapReached,
            });
        }
        lo = hi;
        hi = (2.0 * hi).min(MAX_SEARCH_KM);
    }
    while hi - lo > DISTANCE_RESOLUTION_KM {
        let mid = 0.5 * (lo + hi);
        if positive(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(MaxDistance {
        distance_km: lo,
        flag: DistanceFlag::Found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_optimum_at_zero_distance() {
        let bounds = MuBounds::default();
        let opt = optimize_mu(
            SourceFamily::FaintLaser,
            &ChannelParams::default(),
            0.0,
            Analysis::Gllp,
            &bounds,
        )
        .unwrap();
        assert_eq!(opt.flag, RateFlag::Positive);
        assert!(opt.mu_star > bounds.min && opt.mu_star < bounds.max);
        assert_eq!(opt.result.mu_used, Some(opt.mu_star));
    }

    #[test]
    fn refinement_never_worse_than_grid() {
        let c = ChannelParams::default();
        let bounds = MuBounds::default();
        let opt = optimize_mu(SourceFamily::FaintLaser, &c, 20.0, Analysis::Gllp, &bounds).unwrap();
        for mu in bounds.grid() {
            let d = source_distribution(&SourceModel::FaintLaser { mu }).unwrap();
            assert!(key_rate(&d, &c, 20.0, Analysis::Gllp).unwrap().rate <= opt.result.rate);
        }
    }

    #[test]
    fn no_positive_rate_flag() {
        let opt = optimize_mu(
            SourceFamily::FaintLaser,
            &ChannelParams::default(),
            400.0,
            Analysis::Decoy,
            &MuBounds::default(),
        )
        .unwrap();
        assert_eq!(opt.flag, RateFlag::NoPositiveRate);
        assert_eq!(opt.mu_star, 1e-4);
        assert_eq!(opt.result.rate, 0.0);
    }

    #[test]
    fn optimum_deterministic() {
        let c = ChannelParams::default();
        let a = optimize_mu(
            SourceFamily::LinearOpticHps {
                eta_c: 0.15,
                beta: Beta::ANTI_BUNCHING,
            },
            &c,
            50.0,
            Analysis::Decoy,
            &MuBounds::default(),
        )
        .unwrap();
        let b = optimize_mu(
            SourceFamily::LinearOpticHps {
                eta_c: 0.15,
                beta: Beta::ANTI_BUNCHING,
            },
            &c,
            50.0,
            Analysis::Decoy,
            &MuBounds::default(),
        )
        .unwrap();
        assert_eq!(a.mu_star.to_bits(), b.mu_star.to_bits());
        assert_eq!(a.result.rate.to_bits(), b.result.rate.to_bits());
    }

    #[test]
    fn cap_reached_without_dark_counts() {
        let c = ChannelParams {
            p_dark: 0.0,
            ..Default::default()
        };
        let m = max_distance(&SourceSpec::IdealSingle, &c, Analysis::Gllp, &MuBounds::default()).unwrap();
        assert_eq!(m.flag, DistanceFlag::CapReached);
        assert_eq!(m.distance_km, MAX_SEARCH_KM);
    }

    #[test]
    fn no_positive_rate_anywhere() {
        let c = ChannelParams {
            e_opt: 0.2,
            ..Default::default()
        };
        let m = max_distance(&SourceSpec::FaintLaser, &c, Analysis::Gllp, &MuBounds::default()).unwrap();
        assert_eq!(m.flag, DistanceFlag::NoPositiveRate);
        assert_eq!(m.distance_km, 0.0);
    }

    #[test]
    fn bounds_validation() {
        assert!(MuBounds {
            min: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(MuBounds {
            max: 1e-5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(MuBounds {
            grid_points: 2,
            ..Default::default()
        }
        .validate()
        .is_err());
        let g = MuBounds::default().grid();
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1e-4).abs() < 1e-18 && (g[199] - 0.65).abs() < 1e-12);
    }
}
