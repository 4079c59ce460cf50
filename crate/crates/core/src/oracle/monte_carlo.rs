//! Seeded Monte Carlo of heralding and HBT detection.
//!
//! Trials are split into fixed-size chunks. Chunk `i` draws from a ChaCha8
//! generator seeded with `seed` on stream `i`, so results depend only on
//! `(seed, trials, chunk_trials)` and never on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{poisson_pair, retyped_tables};
use crate::error::{check_unit_interval, invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    /// Number of simulated temporal modes (herald windows).
    pub trials: u64,
    pub seed: u64,
    /// Trials per independent sub-stream.
    #[serde(default = "McConfig::default_chunk")]
    pub chunk_trials: u64,
}

impl McConfig {
    pub const DEFAULT_CHUNK: u64 = 1 << 20;

    fn default_chunk() -> u64 {
        Self::DEFAULT_CHUNK
    }

    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            chunk_trials: Self::DEFAULT_CHUNK,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if self.chunk_trials == 0 {
            return Err(invalid("chunk_trials", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McHeraldedEstimate {
    pub trials: u64,
    pub heralded: u64,
    pub p_vacuum: f64,
    pub p_single: f64,
    pub p_multi: f64,
    pub se_vacuum: f64,
    pub se_single: f64,
    pub se_multi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McG2Estimate {
    pub heralded: u64,
    pub clicks_f: u64,
    pub clicks_g: u64,
    pub coincidences: u64,
    pub g2: f64,
    /// Delta-method standard error of `g2`.
    pub std_error: f64,
}

impl McG2Estimate {
    /// 95% normal confidence interval.
    pub fn confidence_interval(&self) -> (f64, f64) {
        (self.g2 - 1.96 * self.std_error, self.g2 + 1.96 * self.std_error)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    heralded: u64,
    by_photons: [u64; 3],
    clicks_f: u64,
    clicks_g: u64,
    coincidences: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts {
            heralded: self.heralded + o.heralded,
            by_photons: [
                self.by_photons[0] + o.by_photons[0],
                self.by_photons[1] + o.by_photons[1],
                self.by_photons[2] + o.by_photons[2],
            ],
            clicks_f: self.clicks_f + o.clicks_f,
            clicks_g: self.clicks_g + o.clicks_g,
            coincidences: self.coincidences + o.coincidences,
        }
    }
}

/// Cumulative sampling tables: input pairs from the truncated, renormalised
/// Poisson distribution, then outcomes per input.
struct Sampler {
    input_cdf: Vec<f64>,
    outcome_cdfs: Vec<Vec<(f64, u32, u32)>>,
    herald_eff: [f64; 4],
}

impl Sampler {
    fn new(mu: f64, beta: f64, eta_c: f64) -> Self {
        let tables = retyped_tables(beta);
        let weights: Vec<f64> = tables.iter().map(|&((m, n), _)| poisson_pair(m, n, mu)).collect();
        let norm: f64 = weights.iter().sum();
        let input_cdf = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w / norm;
                Some(*acc)
            })
            .collect();
        let outcome_cdfs = tables
            .into_iter()
            .map(|(_, outcomes)| {
                outcomes
                    .into_iter()
                    .scan(0.0, |acc, (r, s, p)| {
                        *acc += p;
                        Some((*acc, r, s))
                    })
                    .collect()
            })
            .collect();
        let herald_eff = [0, 1, 2, 3].map(|r| 1.0 - (1.0 - eta_c).powi(r));
        Self {
            input_cdf,
            outcome_cdfs,
            herald_eff,
        }
    }

    /// Samples one temporal mode; returns the photon count of the heralded
    /// port if the herald fired.
    fn herald<R: Rng>(&self, rng: &mut R) -> Option<u32> {
        let u: f64 = rng.gen();
        let input = self
            .input_cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.input_cdf.len() - 1);
        let outcomes = &self.outcome_cdfs[input];
        let v: f64 = rng.gen();
        let &(_, r, s) = outcomes
            .iter()
            .find(|o| v < o.0)
            .unwrap_or(&outcomes[outcomes.len() - 1]);
        (rng.gen::<f64>() < self.herald_eff[r as usize]).then_some(s)
    }
}

fn simulate(sampler: &Sampler, hbt: Option<(f64, f64)>, mc: &McConfig) -> Counts {
    let chunks = mc.trials.div_ceil(mc.chunk_trials);
    let per_chunk: Vec<Counts> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(chunk);
            let n = mc.chunk_trials.min(mc.trials - chunk * mc.chunk_trials);
            let mut counts = Counts::default();
            for _ in 0..n {
                let Some(s) = sampler.herald(&mut rng) else {
                    continue;
                };
                counts.heralded += 1;
                counts.by_photons[s as usize] += 1;
                if let Some((eta_f, eta_g)) = hbt {
                    let (mut f, mut g) = (false, false);
                    for _ in 0..s {
                        // Port F with probability ½, then detection.
                        let u: f64 = rng.gen();
                        if u < 0.5 * eta_f {
                            f = true;
                        } else if (0.5..0.5 + 0.5 * eta_g).contains(&u) {
                            g = true;
                        }
                    }
                    counts.clicks_f += u64::from(f);
                    counts.clicks_g += u64::from(g);
                    counts.coincidences += u64::from(f && g);
                }
            }
            counts
        })
        .collect();
    per_chunk.into_iter().fold(Counts::default(), |a, b| a + b)
}

fn check_inputs(mu: f64, beta: f64, eta_c: f64, mc: &McConfig) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(invalid("mu", format!("{mu} must be positive")));
    }
    if !(-1.0..=1.0).contains(&beta) {
        return Err(invalid("beta", format!("{beta} not in [-1, 1]")));
    }
    check_unit_interval("eta_c", eta_c)?;
    mc.validate()
}

/// Empirical herald-conditioned photon statistics with binomial standard
/// errors.
pub fn monte_carlo_heralded(mu: f64, beta: f64, eta_c: f64, mc: &McConfig) -> Result<McHeraldedEstimate> {
    check_inputs(mu, beta, eta_c, mc)?;
    let counts = simulate(&Sampler::new(mu, beta, eta_c), None, mc);
    if counts.heralded == 0 {
        return Err(Error::NoHeraldEvents);
    }
    let n = counts.heralded as f64;
    let freq = counts.by_photons.map(|c| c as f64 / n);
    let se = freq.map(|p| (p * (1.0 - p) / n).sqrt());
    Ok(McHeraldedEstimate {
        trials: mc.trials,
        heralded: counts.heralded,
        p_vacuum: freq[0],
        p_single: freq[1],
        p_multi: freq[2],
        se_vacuum: se[0],
        se_single: se[1],
        se_multi: se[2],
    })
}

/// Empirical g²(0) from an HBT analyser on the heralded port. Each heralded
/// photon independently takes either output of the analyser's beam splitter.
pub fn monte_carlo_g2(mu: f64, beta: f64, eta_c: f64, eta_f: f64, eta_g: f64, mc: &McConfig) -> Result<McG2Estimate> {
    check_inputs(mu, beta, eta_c, mc)?;
    check_unit_interval("eta_f", eta_f)?;
    check_unit_interval("eta_g", eta_g)?;
    let c = simulate(&Sampler::new(mu, beta, eta_c), Some((eta_f, eta_g)), mc);
    if c.heralded == 0 {
        return Err(Error::NoHeraldEvents);
    }
    if c.clicks_f == 0 {
        return Err(Error::UndefinedG2("F"));
    }
    if c.clicks_g == 0 {
        return Err(Error::UndefinedG2("G"));
    }
    let n = c.heralded as f64;
    let (a, f, g) = (c.coincidences as f64 / n, c.clicks_f as f64 / n, c.clicks_g as f64 / n);
    let g2 = a / (f * g);
    // Variance of log g2 from the covariance of the three click indicators.
    let std_error = if c.coincidences == 0 {
        f64::INFINITY
    } else {
        let var_log = (1.0 - a) / a + (1.0 - f) / f + (1.0 - g) / g - 2.0 * (1.0 - f) - 2.0 * (1.0 - g)
            + 2.0 * (a - f * g) / (f * g);
        g2 * (var_log.max(0.0) / n).sqrt()
    };
    Ok(McG2Estimate {
        heralded: c.heralded,
        clicks_f: c.clicks_f,
        clicks_g: c.clicks_g,
        coincidences: c.coincidences,
        g2,
        std_error,
    })
}
