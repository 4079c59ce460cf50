//! Brute-force evaluation of the `|1,1> -> (1,1)` coincidence probability
//! from Gaussian wave-packets.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Reference delay, in units of σ, where the photons are distinguishable.
const REFERENCE_DELAY: f64 = 12.0;

/// Discretisation of the τ₀ and δτ integrals. Ranges are half-widths in
/// units of σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub tau0_range: f64,
    pub delta_tau_range: f64,
    pub points_per_sigma: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            tau0_range: 8.0,
            delta_tau_range: 8.0,
            points_per_sigma: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_sigma < 8 {
            return Err(Error::GridTooCoarse(self.points_per_sigma));
        }
        if !(self.tau0_range > 0.0) || !(self.delta_tau_range > 0.0) {
            return Err(invalid("quadrature range", "must be positive"));
        }
        Ok(())
    }
}

/// Wave-packet pair in units where σ = 1. The carrier ω is dropped: it only
/// contributes a global phase to each product and cancels in the modulus.
struct WavePackets {
    delta: f64,
}

impl WavePackets {
    fn a(&self, t: f64, offset: f64) -> Complex64 {
        let x = t - offset / 2.0;
        Complex64::from_polar((-x * x / 2.0).exp(), self.delta / 2.0 * t)
    }

    fn b(&self, t: f64, offset: f64) -> Complex64 {
        let x = t + offset / 2.0;
        Complex64::from_polar((-x * x / 2.0).exp(), -self.delta / 2.0 * t)
    }

    /// `¼ |ξ_A(τ₀+τ) ξ_B(τ₀) - ξ_A(τ₀) ξ_B(τ₀+τ)|²`.
    fn joint_density(&self, tau0: f64, tau: f64, offset: f64) -> f64 {
        let amp = self.a(tau0 + tau, offset) * self.b(tau0, offset) - self.a(tau0, offset) * self.b(tau0 + tau, offset);
        0.25 * amp.norm_sqr()
    }
}

/// Evenly spaced nodes and step on `[centre - half, centre + half]`.
fn nodes(centre: f64, half: f64, per_unit: u32) -> (Vec<f64>, f64) {
    let count = (2.0 * half * per_unit as f64).ceil() as usize;
    let h = 2.0 * half / count as f64;
    ((0..=count).map(|i| centre - half + i as f64 * h).collect(), h)
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Integral of the joint density over τ₀ and the wave-packet offset δτ.
///
/// The density is concentrated around τ₀ = -τ/2 and δτ ∈ {-τ, 0, τ}, so
/// both windows follow τ; the δτ window grows with |τ| to keep the
/// displaced lobes inside it.
fn integrated_density(packets: &WavePackets, tau: f64, spec: &QuadratureSpec) -> f64 {
    let (t0, h0) = nodes(-tau / 2.0, spec.tau0_range, spec.points_per_sigma);
    let (offsets, hd) = nodes(0.0, spec.delta_tau_range + tau.abs(), spec.points_per_sigma);
    let rows: Vec<f64> = offsets
        .par_iter()
        .map(|&offset| {
            let row: Vec<f64> = t0.iter().map(|&t| packets.joint_density(t, tau, offset)).collect();
            trapezoid(&row, h0)
        })
        .collect();
    trapezoid(&rows, hd)
}

/// Coincidence probability of two single photons delayed by `tau`, scaled
/// so that it equals ½ for distinguishable photons.
pub fn numeric_p11(tau: f64, sigma: f64, delta: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid("sigma", format!("{sigma} must be positive")));
    }
    spec.validate()?;
    let packets = WavePackets { delta: delta * sigma };
    let value = integrated_density(&packets, tau / sigma, spec);
    let reference = integrated_density(&packets, REFERENCE_DELAY, spec);
    Ok(0.5 * value / reference)
}
