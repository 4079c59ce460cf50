//! Independent checks of the closed-form model.
//!
//! Nothing here calls into [`crate::interference`] or [`crate::statistics`]:
//! the beam-splitter tables are re-entered by hand in [`enumerate`] and the
//! two-photon probability is integrated numerically in [`quadrature`].

pub mod enumerate;
pub mod monte_carlo;
pub mod quadrature;

pub use enumerate::{enumerate_output_distribution, independent_routing_distribution, JointDistribution};
pub use monte_carlo::{monte_carlo_g2, monte_carlo_heralded, McConfig, McG2Estimate, McHeraldedEstimate};
pub use quadrature::{numeric_p11, QuadratureSpec};
