//! Photon-number statistics of the heralded output.
//!
//! Both sources emit Poisson light with the same mean μ per temporal mode.
//! The joint input distribution is truncated to `m + n <= 3`, pushed through
//! the beam-splitter tables and conditioned on at least one click of the
//! herald detector on port C. Port D carries the heralded pulse.

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, invalid, Error, Result};
use crate::interference::{conditional_output_distribution, Beta, FockPair, MAX_PHOTONS};

/// From this μ upwards the three-photon truncation discards about 1% of the
/// input mass or more (grid reading).
pub const TRUNCATION_WARNING_MU: f64 = 0.67;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeraldConfig {
    /// Mean photon number per temporal mode, per source.
    pub mu: f64,
    /// Overall efficiency of the herald detector.
    pub eta_c: f64,
    pub beta: Beta,
}

impl HeraldConfig {
    pub fn new(mu: f64, eta_c: f64, beta: Beta) -> Result<Self> {
        let config = Self { mu, eta_c, beta };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        check_mu(self.mu)?;
        check_unit_interval("eta_c", self.eta_c)
    }

    /// True when μ is large enough for the truncation to be inaccurate.
    /// Not an error: the formulas stay well defined.
    pub fn truncation_warning(&self) -> bool {
        self.mu >= TRUNCATION_WARNING_MU
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(invalid("mu", format!("{mu} must be positive")))
    }
}

/// Normalised herald-conditioned statistics of the output pulse.
///
/// `p_multi` is the probability of exactly two photons: with at least one
/// photon spent on the herald and at most three in total, port D never holds
/// more than two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeraldedStatistics {
    pub p_vacuum: f64,
    pub p_single: f64,
    pub p_multi: f64,
    /// Un-normalised probability of a herald click per temporal mode.
    pub herald_rate: f64,
}

impl HeraldedStatistics {
    pub fn total(&self) -> f64 {
        self.p_vacuum + self.p_single + self.p_multi
    }
}

/// `i`-photon detection efficiency `1 - (1 - η)^i` of a detector with
/// single-photon efficiency `eta`.
pub fn photon_detection_efficiency(eta: f64, photons: u32) -> f64 {
    1.0 - (1.0 - eta).powi(photons as i32)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Poisson weight `μ^(m+n) e^(-2μ) / (m! n!)` of the input `|m, n>`.
pub fn input_weight(m: u32, n: u32, mu: f64) -> f64 {
    mu.powi((m + n) as i32) * (-2.0 * mu).exp() / (factorial(m) * factorial(n))
}

/// Probability of `(r, s)` output photons, summed over every retained input.
pub fn output_joint(r: u32, s: u32, config: &HeraldConfig) -> Result<f64> {
    if r + s > MAX_PHOTONS {
        return Err(Error::OutsideTruncation { m: r, n: s });
    }
    FockPair::all().try_fold(0.0, |acc, input| {
        let table = conditional_output_distribution(input, config.beta)?;
        Ok(acc + table.get(r, s) * input_weight(input.m, input.n, config.mu))
    })
}

/// Joint output table indexed as `[r][s]`; entries with `r + s > 3` are zero.
fn output_table(config: &HeraldConfig) -> Result<[[f64; 4]; 4]> {
    let mut table = [[0.0; 4]; 4];
    for r in 0..=MAX_PHOTONS {
        for s in 0..=MAX_PHOTONS - r {
            table[r as usize][s as usize] = output_joint(r, s, config)?;
        }
    }
    Ok(table)
}

fn herald_total_from(table: &[[f64; 4]; 4], eta_c: f64) -> f64 {
    let mut total = 0.0;
    for r in 1..=MAX_PHOTONS {
        for s in 0..=(MAX_PHOTONS - r).min(2) {
            total += photon_detection_efficiency(eta_c, r) * table[r as usize][s as usize];
        }
    }
    total
}

/// Probability `P_T` that the herald detector clicks in a temporal mode.
pub fn herald_total(config: &HeraldConfig) -> Result<f64> {
    config.validate()?;
    Ok(herald_total_from(&output_table(config)?, config.eta_c))
}

/// Herald-conditioned vacuum / single / two-photon probabilities, built from
/// the output table. Dark counts of the herald detector are ignored.
pub fn heralded_statistics(config: &HeraldConfig) -> Result<HeraldedStatistics> {
    config.validate()?;
    let p = output_table(config)?;
    let eta = |i| photon_detection_efficiency(config.eta_c, i);
    let total = herald_total_from(&p, config.eta_c);
    if !(total > 0.0) {
        return Err(Error::NoHeraldEvents);
    }
    Ok(HeraldedStatistics {
        p_vacuum: (eta(1) * p[1][0] + eta(2) * p[2][0] + eta(3) * p[3][0]) / total,
        p_single: (eta(1) * p[1][1] + eta(2) * p[2][1]) / total,
        p_multi: eta(1) * p[1][2] / total,
        herald_rate: total,
    })
}

/// Common denominator of the rational closed forms (times 24).
fn closed_form_denominator(mu: f64, eta: f64, beta: f64) -> f64 {
    24.0 + mu * (48.0 - 12.0 * eta - 6.0 * eta * beta)
        + mu * mu * (48.0 - 24.0 * eta + 4.0 * eta * eta + (3.0 * eta * eta - 6.0 * eta) * beta)
}

/// Same quantities as [`heralded_statistics`], from the rational functions
/// of μ, η_C and β obtained by expanding the table sums. The common
/// `e^(-2μ)` factor cancels between numerators and denominator.
pub fn heralded_statistics_closed_form(config: &HeraldConfig) -> Result<HeraldedStatistics> {
    config.validate()?;
    let (mu, eta, b) = (config.mu, config.eta_c, config.beta.value());
    let den = closed_form_denominator(mu, eta, b);
    let herald_rate = (-2.0 * mu).exp() * eta * mu * den / 24.0;
    if !(herald_rate > 0.0) {
        return Err(Error::NoHeraldEvents);
    }
    let vacuum = 24.0
        + mu * (24.0 - 12.0 * eta + (12.0 - 6.0 * eta) * b)
        + mu * mu * (12.0 - 12.0 * eta + 4.0 * eta * eta + (9.0 - 9.0 * eta + 3.0 * eta * eta) * b);
    let multi = mu * mu * (12.0 - 3.0 * b);
    let single = mu * (24.0 - 12.0 * b) + mu * mu * (24.0 - 12.0 * eta + (3.0 * eta - 6.0) * b);
    Ok(HeraldedStatistics {
        p_vacuum: vacuum / den,
        p_single: single / den,
        p_multi: multi / den,
        herald_rate,
    })
}

/// Closed forms at the anti-bunching point β = -1.
pub fn heralded_statistics_antibunching(mu: f64, eta_c: f64) -> Result<HeraldedStatistics> {
    check_mu(mu)?;
    check_unit_interval("eta_c", eta_c)?;
    let eta2 = eta_c * eta_c;
    let den = 8.0 + mu * (16.0 - 2.0 * eta_c) + mu * mu * (16.0 - 6.0 * eta_c + eta2 / 3.0);
    let herald_rate = (-2.0 * mu).exp() * eta_c * mu * den / 8.0;
    if !(herald_rate > 0.0) {
        return Err(Error::NoHeraldEvents);
    }
    Ok(HeraldedStatistics {
        p_vacuum: (8.0 + mu * (4.0 - 2.0 * eta_c) + mu * mu * (1.0 - eta_c + eta2 / 3.0)) / den,
        p_single: (12.0 * mu + mu * mu * (10.0 - 5.0 * eta_c)) / den,
        p_multi: 5.0 * mu * mu / den,
        herald_rate,
    })
}

/// Second-order small-μ expansion of the anti-bunching statistics at unit
/// herald efficiency, as `(vacuum, single, multi)`.
///
/// The vacuum row is sometimes quoted with a 15/8 μ² term; expanding the
/// exact ratio (and requiring the three rows to sum to one) gives 11/8.
pub fn antibunching_series(mu: f64) -> (f64, f64, f64) {
    let mu2 = mu * mu;
    (1.0 - 1.5 * mu + 11.0 / 8.0 * mu2, 1.5 * mu - 2.0 * mu2, 5.0 / 8.0 * mu2)
}

/// Second-order expansion of a single faint-laser pulse of mean μ, as
/// `(vacuum, single, multi)`.
pub fn faint_laser_series(mu: f64) -> (f64, f64, f64) {
    let mu2 = mu * mu;
    (1.0 - mu + 0.5 * mu2, mu - mu2, 0.5 * mu2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationMode {
    /// Mass outside `m + n <= 3`, the constraint the model actually uses.
    PairSum,
    /// Mass outside `m <= 3, n <= 3`.
    Grid,
}

/// Poisson mass of the two-source input discarded by the truncation.
pub fn truncation_error(mu: f64, mode: TruncationMode) -> f64 {
    let kept: f64 = (0..=MAX_PHOTONS)
        .flat_map(|m| (0..=MAX_PHOTONS).map(move |n| (m, n)))
        .filter(|&(m, n)| mode == TruncationMode::Grid || m + n <= MAX_PHOTONS)
        .map(|(m, n)| input_weight(m, n, mu))
        .sum();
    1.0 - kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn config(mu: f64, eta_c: f64, beta: f64) -> HeraldConfig {
        HeraldConfig::new(mu, eta_c, Beta::new(beta).unwrap()).unwrap()
    }

    #[test]
    fn input_weights() {
        assert_abs_diff_eq!(input_weight(0, 0, 0.1), 0.818_730_753_077_981_8, epsilon = 1e-15);
        assert_abs_diff_eq!(input_weight(1, 1, 0.1), 0.008_187_307_530_779_819, epsilon = 1e-17);
        let total: f64 = (0..=20)
            .flat_map(|m| (0..=20).map(move |n| input_weight(m, n, 0.1)))
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn output_mass_equals_retained_input_mass() {
        let c = config(0.3, 0.5, 0.2);
        let out: f64 = (0..=3)
            .flat_map(|r| (0..=3 - r).map(move |s| (r, s)))
            .map(|(r, s)| output_joint(r, s, &c).unwrap())
            .sum();
        let input: f64 = FockPair::all().map(|p| input_weight(p.m, p.n, 0.3)).sum();
        assert_abs_diff_eq!(out, input, epsilon = 1e-15);
    }

    #[test]
    fn output_joint_rejects_four_photons() {
        let c = config(0.1, 0.5, 0.0);
        assert!(output_joint(2, 2, &c).is_err());
        assert!(output_joint(4, 0, &c).is_err());
    }

    #[test]
    fn output_joint_at_bunching_has_no_pair_interference_term() {
        // Only the |2,0> and |0,2> inputs feed (1,1) once the |1,1> term vanishes.
        let mu = 1e-3;
        let c = config(mu, 1.0, 1.0);
        let expected = 2.0 * 0.5 * input_weight(2, 0, mu);
        assert_abs_diff_eq!(output_joint(1, 1, &c).unwrap(), expected, epsilon = 1e-18);
    }

    #[test]
    fn output_joint_symmetric_in_ports() {
        let c = config(0.1, 0.15, -1.0);
        let a = output_joint(2, 0, &c).unwrap();
        assert_eq!(a, output_joint(0, 2, &c).unwrap());
        // exact enumeration (rational arithmetic) at mu = 0.1, beta = -1
        assert_abs_diff_eq!(a, 0.002_046_826_882_694_954_6, epsilon = 1e-15);
    }

    #[test]
    fn herald_total_limits() {
        assert_eq!(herald_total(&config(0.1, 0.0, -1.0)).unwrap(), 0.0);
        let small = herald_total(&config(1e-6, 1.0, 0.0)).unwrap();
        let smaller = herald_total(&config(1e-8, 1.0, 0.0)).unwrap();
        assert!(small > 0.0 && smaller < small);
        assert_abs_diff_eq!(small / 1e-6, 1.0, epsilon = 1e-5);
    }

    #[test]
    fn herald_total_operating_point() {
        let total = herald_total(&config(0.1, 0.15, -1.0)).unwrap();
        assert_abs_diff_eq!(total, 0.014_923_018_229_020_392, epsilon = 1e-15);
    }

    #[test]
    fn statistics_at_operating_point() {
        let s = heralded_statistics(&config(0.1, 0.15, -1.0)).unwrap();
        assert_abs_diff_eq!(s.p_vacuum, 0.861_897_989_677_067_6, epsilon = 1e-14);
        assert_abs_diff_eq!(s.p_single, 0.132_958_546_251_314_8, epsilon = 1e-14);
        assert_abs_diff_eq!(s.p_multi, 0.005_143_464_071_617_594, epsilon = 1e-15);
    }

    #[test]
    fn no_herald_events_without_detector() {
        assert_eq!(heralded_statistics(&config(0.1, 0.0, 0.0)), Err(Error::NoHeraldEvents));
        assert_eq!(heralded_statistics_antibunching(0.1, 0.0), Err(Error::NoHeraldEvents));
    }

    #[test]
    fn config_validation() {
        assert!(HeraldConfig::new(0.0, 0.5, Beta::DISTINGUISHABLE).is_err());
        assert!(HeraldConfig::new(0.1, 1.5, Beta::DISTINGUISHABLE).is_err());
        let c = HeraldConfig::new(0.7, 0.5, Beta::DISTINGUISHABLE).unwrap();
        assert!(c.truncation_warning());
        assert!(config(0.67, 0.5, 0.0).truncation_warning());
        assert!(!config(0.66, 0.5, 0.0).truncation_warning());
    }

    #[test]
    fn closed_form_matches_table_route() {
        for &mu in &[0.001, 0.1, 0.5] {
            for &eta in &[0.05, 0.5, 1.0] {
                for &b in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
                    let c = config(mu, eta, b);
                    let table = heralded_statistics(&c).unwrap();
                    let closed = heralded_statistics_closed_form(&c).unwrap();
                    assert_abs_diff_eq!(table.p_vacuum, closed.p_vacuum, epsilon = 1e-13);
                    assert_abs_diff_eq!(table.p_single, closed.p_single, epsilon = 1e-13);
                    assert_abs_diff_eq!(table.p_multi, closed.p_multi, epsilon = 1e-13);
                    assert_abs_diff_eq!(table.herald_rate, closed.herald_rate, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn antibunching_closure() {
        for &mu in &[1e-4, 0.1, 0.65, 2.0] {
            for &eta in &[0.0001, 0.15, 1.0] {
                let s = heralded_statistics_antibunching(mu, eta).unwrap();
                assert_abs_diff_eq!(s.total(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn antibunching_small_mu_limits() {
        let mu = 1e-6;
        let s = heralded_statistics_antibunching(mu, 0.4).unwrap();
        assert_abs_diff_eq!(s.p_vacuum, 1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(s.p_single / mu, 1.5, epsilon = 1e-5);
        assert_abs_diff_eq!(s.p_multi / (mu * mu), 0.625, epsilon = 1e-5);
    }

    #[test]
    fn exact_vacuum_series_has_cubic_remainder() {
        let remainder = |mu: f64| {
            let s = heralded_statistics_antibunching(mu, 1.0).unwrap();
            let (v, single, multi) = antibunching_series(mu);
            [
                (s.p_vacuum - v) / mu.powi(3),
                (s.p_single - single) / mu.powi(3),
                (s.p_multi - multi) / mu.powi(3),
            ]
        };
        let (a, b) = (remainder(1e-2), remainder(1e-3));
        for i in 0..3 {
            assert!(((a[i] - b[i]) / b[i]).abs() < 0.2, "row {i}: {} vs {}", a[i], b[i]);
        }
    }

    #[test]
    fn truncation_errors() {
        assert_abs_diff_eq!(truncation_error(1e-9, TruncationMode::Grid), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(truncation_error(1e-9, TruncationMode::PairSum), 0.0, epsilon = 1e-12);
        let grid = 1.0 - ((-0.67f64).exp() * (1.0 + 0.67 + 0.67f64.powi(2) / 2.0 + 0.67f64.powi(3) / 6.0)).powi(2);
        assert_abs_diff_eq!(truncation_error(0.67, TruncationMode::Grid), grid, epsilon = 1e-14);
        assert_abs_diff_eq!(
            truncation_error(0.67, TruncationMode::PairSum),
            0.047_191_442_511_654_5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pair_sum_matches_poisson_tail() {
        // Total photon number of the two sources is Poisson(2 mu).
        let mu: f64 = 0.4;
        let lambda = 2.0 * mu;
        let head: f64 = (0..=3)
            .map(|k| lambda.powi(k) * (-lambda).exp() / factorial(k as u32))
            .sum();
        assert_abs_diff_eq!(
            truncation_error(mu, TruncationMode::PairSum),
            1.0 - head,
            epsilon = 1e-14
        );
    }
}
