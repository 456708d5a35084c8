//! Front end for the `disconc` binary: parameter sweeps, oracle validation
//! and crossover search, with CSV/JSON emission.
//!
//! Energies are in units of `J`, which is fixed to 1.

pub mod crossover;
pub mod output;
pub mod sweep;
pub mod validate;

use disconc_core::ChainParams;

/// The coupling used by every command.
pub const J: f64 = 1.0;

/// Clean parameters at field `b` (in units of `J`).
pub fn chain(b: f64) -> anyhow::Result<ChainParams> {
    Ok(ChainParams::new(J, b)?)
}
