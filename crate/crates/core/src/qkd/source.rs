use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, invalid, Result};
use crate::interference::Beta;
use crate::statistics::{heralded_statistics, HeraldConfig};

/// Emission probabilities of a source per pulse. Every component with two
/// or more photons is folded into `p2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourcePhotonDistribution {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

impl SourcePhotonDistribution {
    pub fn new(p0: f64, p1: f64, p2: f64) -> Result<Self> {
        check_unit_interval("p0", p0)?;
        check_unit_interval("p1", p1)?;
        check_unit_interval("p2", p2)?;
        let total = p0 + p1 + p2;
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid("source distribution", format!("sums to {total}")));
        }
        Ok(Self { p0, p1, p2 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p0, self.p1, self.p2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceModel {
    /// Attenuated laser with Poisson photon number.
    FaintLaser {
        mu: f64,
    },
    /// The two-WCS heralded source, characterised by its herald-conditioned
    /// statistics.
    LinearOpticHps {
        mu: f64,
        eta_c: f64,
        beta: Beta,
    },
    /// SPDC heralded source given its single-photon probability and g²(0);
    /// `p2 = g2 p1² / 2`.
    SpdcHps {
        p1: f64,
        g2: f64,
    },
    IdealSingle,
}

pub fn source_distribution(model: &SourceModel) -> Result<SourcePhotonDistribution> {
    match *model {
        SourceModel::FaintLaser { mu } => {
            if !(mu >= 0.0) || !mu.is_finite() {
                return Err(invalid("mu", format!("{mu} must be non-negative")));
            }
            let p0 = (-mu).exp();
            let p1 = mu * p0;
            SourcePhotonDistribution::new(p0, p1, (1.0 - p0 - p1).max(0.0))
        }
        SourceModel::LinearOpticHps { mu, eta_c, beta } => {
            let s = heralded_statistics(&HeraldConfig::new(mu, eta_c, beta)?)?;
            SourcePhotonDistribution::new(s.p_vacuum, s.p_single, s.p_multi)
        }
        SourceModel::SpdcHps { p1, g2 } => {
            check_unit_interval("p1", p1)?;
            if !(g2 >= 0.0) || !g2.is_finite() {
                return Err(invalid("g2", format!("{g2} must be non-negative")));
            }
            let p2 = g2 * p1 * p1 / 2.0;
            if p1 + p2 > 1.0 {
                return Err(invalid("spdc", format!("p1 + p2 = {} exceeds 1", p1 + p2)));
            }
            SourcePhotonDistribution::new(1.0 - p1 - p2, p1, p2)
        }
        SourceModel::IdealSingle => SourcePhotonDistribution::new(0.0, 1.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistics::heralded_statistics_antibunching;
    use approx::assert_abs_diff_eq;

    #[test]
    fn spdc_reference_source() {
        let d = source_distribution(&SourceModel::SpdcHps { p1: 0.42, g2: 0.018 }).unwrap();
        assert_abs_diff_eq!(d.p2, 1.5876e-3, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p0, 0.578_412_4, epsilon = 1e-12);
    }

    #[test]
    fn spdc_rejects_overfull() {
        assert!(source_distribution(&SourceModel::SpdcHps { p1: 0.9, g2: 1.0 }).is_err());
    }

    #[test]
    fn faint_laser_limits() {
        let d = source_distribution(&SourceModel::FaintLaser { mu: 1e-9 }).unwrap();
        assert_abs_diff_eq!(d.p0, 1.0, epsilon = 1e-8);
        let d = source_distribution(&SourceModel::FaintLaser { mu: 0.5 }).unwrap();
        assert_abs_diff_eq!(d.p1, 0.5 * (-0.5f64).exp(), epsilon = 1e-16);
    }

    #[test]
    fn hps_passes_statistics_through() {
        let d = source_distribution(&SourceModel::LinearOpticHps {
            mu: 0.1,
            eta_c: 0.15,
            beta: Beta::ANTI_BUNCHING,
        })
        .unwrap();
        let s = heralded_statistics_antibunching(0.1, 0.15).unwrap();
        assert_abs_diff_eq!(d.p0, s.p_vacuum, epsilon = 1e-14);
        assert_abs_diff_eq!(d.p1, s.p_single, epsilon = 1e-14);
        assert_abs_diff_eq!(d.p2, s.p_multi, epsilon = 1e-14);
    }

    #[test]
    fn distribution_validation() {
        assert!(SourcePhotonDistribution::new(0.5, 0.5, 0.1).is_err());
        assert!(SourcePhotonDistribution::new(-0.1, 1.0, 0.1).is_err());
        assert_eq!(source_distribution(&SourceModel::IdealSingle).unwrap().p1, 1.0);
    }
}
