//! Disorder-averaged correlation functions, concurrence and entanglement
//! entropies of the isotropic XX spin chain with weak Gaussian disorder.
//!
//! The crate has two independent routes to the same physics:
//!
//! * [`perturbation`] evaluates the first-order-in-variance expressions for
//!   the disorder-averaged correlator `Ḡ_R` of the infinite chain, both for
//!   quenched and annealed averages, at finite and zero temperature.
//! * [`oracle`] solves finite open chains exactly as free fermions and
//!   averages over sampled disorder realizations.
//!
//! [`entanglement`] turns correlator triples `(G₀, G₁, G₂)` into
//! concurrences and entropies, and [`study`] composes everything into sweep
//! rows and crossover searches.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clean;
pub mod entanglement;
pub mod error;
pub mod oracle;
pub mod perturbation;
pub mod quadrature;
pub mod study;

pub use clean::{ChainParams, CorrelatorSet, Provenance, Thermo};
pub use entanglement::EntanglementReport;
pub use error::{Error, Result};
pub use oracle::OracleConfig;
pub use perturbation::{Average, Channel, DisorderSpec};
pub use quadrature::{Estimate, QuadError, QuadratureConfig};
