//! Model of a heralded photon source built from two frequency-displaced weak
//! coherent states interfering at a symmetric beam splitter.
//!
//! The crate is organised bottom-up:
//!
//! * [`interference`] – conditional output tables of the beam splitter for
//!   few-photon Fock inputs, parameterised by the interference parameter β.
//! * [`statistics`] – Poisson weighting of those tables and the herald-
//!   conditioned vacuum / single / multi-photon statistics.
//! * [`correlation`] – Hanbury-Brown–Twiss detection probabilities and g².
//! * [`qkd`] – BB84 key-rate model (GLLP and asymptotic decoy) comparing
//!   several photon sources over a lossy fibre link.
//! * [`oracle`] – independent checks: quadrature of the two-photon joint
//!   density, brute-force enumeration and seeded Monte Carlo.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod error;
pub mod interference;
pub mod oracle;
pub mod qkd;
pub mod statistics;

pub use error::{Error, Result};
