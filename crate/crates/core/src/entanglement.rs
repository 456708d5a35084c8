//! Concurrences and entropies from correlator sets.
//!
//! The reduced two-site state of the XX chain is an X-state fixed by
//! `⟨σᶻ⟩ = G₀`, `⟨σᶻσᶻ⟩ = G₀² − G_R²` and `⟨σˣσˣ + σʸσʸ⟩`, which equals
//! `−2G₁` at distance one and `2(G₁² − G₀G₂)` at distance two. With that
//! dictionary the Wootters concurrence reduces to
//!
//! ```text
//! C₁ = max{0, |G₁| − ½ √([(1−G₀)² − G₁²][(1+G₀)² − G₁²])}
//! C₂ = max{0, |G₁² − G₀G₂| − ½ √([(1−G₀)² − G₂²][(1+G₀)² − G₂²])}
//! ```
//!
//! The product under the root equals `(1 + G₀² − G_R²)² − 4G₀²`.
//!
//! Logarithm bases differ on purpose: the single-site entropy is in bits,
//! the two-site entropy uses the natural log. Both are entanglement
//! measures only in the ground state.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::clean::{CorrelatorSet, Thermo};
use crate::error::{Error, Result};

/// Radicands down to `−RADICAND_SLACK` are treated as zero.
pub const RADICAND_SLACK: f64 = 1e-9;

const ENTROPY_SLACK: f64 = 1e-12;

/// Which reported quantities carry their entanglement meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validity {
    /// `s_single` and `s_two` measure entanglement (ground state only);
    /// at finite temperature they are plain correlation measures.
    pub entropies_are_entanglement: bool,
}

/// Entanglement quantities derived from one correlator set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Nearest-neighbour concurrence.
    pub c1: f64,
    /// Next-nearest-neighbour concurrence.
    pub c2: f64,
    /// Single-site entropy in bits.
    pub s_single: f64,
    /// Two-site entropy in nats.
    pub s_two: f64,
    /// Interpretation flags.
    pub validity: Validity,
}

fn x_state_concurrence(coherence: f64, g0: f64, gr: f64, what: &'static str) -> Result<f64> {
    for (name, value) in [("G0", g0), ("G_R", gr)] {
        if !(value.abs() <= 1.0 + RADICAND_SLACK) {
            return Err(Error::InvalidCorrelator { what: name, value });
        }
    }
    let radicand = ((1.0 - g0).powi(2) - gr * gr) * ((1.0 + g0).powi(2) - gr * gr);
    if radicand < -RADICAND_SLACK {
        return Err(Error::InvalidCorrelator {
            what,
            value: radicand,
        });
    }
    let c = coherence.abs() - 0.5 * radicand.max(0.0).sqrt();
    Ok(c.clamp(0.0, 1.0))
}

/// Nearest-neighbour concurrence from `(G₀, G₁)`.
pub fn concurrence_nn(g: &CorrelatorSet) -> Result<f64> {
    x_state_concurrence(g.g1, g.g0, g.g1, "concurrence radicand (R=1)")
}

/// Next-nearest-neighbour concurrence from `(G₀, G₁, G₂)`.
pub fn concurrence_nnn(g: &CorrelatorSet) -> Result<f64> {
    x_state_concurrence(g.g1 * g.g1 - g.g0 * g.g2, g.g0, g.g2, "concurrence radicand (R=2)")
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Single-site entropy `h((1 + G₀)/2)` in bits.
pub fn entropy_single_site(g0: f64) -> Result<f64> {
    if !(g0.abs() <= 1.0 + ENTROPY_SLACK) {
        return Err(Error::InvalidCorrelator {
            what: "G0",
            value: g0,
        });
    }
    let up = (0.5 * (1.0 + g0)).clamp(0.0, 1.0);
    let down = (0.5 * (1.0 - g0)).clamp(0.0, 1.0);
    let s = -(xlogx(up) + xlogx(down)) / core::f64::consts::LN_2;
    Ok(if s > 0.0 { s.min(1.0) } else { 0.0 })
}

/// Two-site entropy in nats:
/// `−a ln a − c ln c − d ln[(b+d)/(b−d)] − b ln(b² − d²)` with
/// `a = [(1+G₀)² − G₁²]/4`, `b = (1 − G₀² + G₁²)/4`,
/// `c = [(1−G₀)² − G₁²]/4`, `d = −G₁/2`. Evaluated as the Shannon entropy
/// of the eigenvalues `a, c, b ± d`.
pub fn entropy_two_site(g0: f64, g1: f64) -> Result<f64> {
    let a = ((1.0 + g0).powi(2) - g1 * g1) / 4.0;
    let b = (1.0 - g0 * g0 + g1 * g1) / 4.0;
    let c = ((1.0 - g0).powi(2) - g1 * g1) / 4.0;
    let d = -g1 / 2.0;
    for (what, value) in [("a", a), ("c", c), ("b - |d|", b - d.abs())] {
        if !(value >= -ENTROPY_SLACK) {
            return Err(Error::InvalidCorrelator { what, value });
        }
    }
    let s = -(xlogx(a) + xlogx(c) + xlogx(b + d) + xlogx(b - d));
    Ok(s.max(0.0))
}

/// All four quantities for `g` at temperature `t`.
pub fn report(g: &CorrelatorSet, t: Thermo) -> Result<EntanglementReport> {
    Ok(EntanglementReport {
        c1: concurrence_nn(g)?,
        c2: concurrence_nnn(g)?,
        s_single: entropy_single_site(g.g0)?,
        s_two: entropy_two_site(g.g0, g.g1)?,
        validity: Validity {
            entropies_are_entanglement: matches!(t, Thermo::ZeroTemperature),
        },
    })
}
