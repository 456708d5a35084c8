//! The clean (disorder-free) XX chain in the thermodynamic limit.
//!
//! Conventions: the Jordan–Wigner fermions have dispersion
//! `ε(q) = 2(B − J cos q)` and occupation `k(q) = 1/(1 + e^{βε(q)})`. The
//! correlator used everywhere is
//!
//! ```text
//! G_R = ∫ dq/2π cos(qR) tanh(βε(q)/2) = ∫ dq/2π cos(qR) [1 − 2k(q)]
//! ```
//!
//! i.e. the hyperbolic tangent is taken of `βε/2`. This is the only reading
//! compatible with the partition function `ln Z₀/N = ∫ dq/2π ln 2cosh(βε/2)`
//! and with the Fermi factor above; it is assumed throughout the crate.
//!
//! `G₀` is the magnetization per site `⟨σ^z⟩`. Under `B → −B` the chain is
//! mapped onto itself by `a_l → (−1)^l a_l†`, which gives
//! `G_R(−B) = (−1)^{R+1} G_R(B)`.

use core::f64::consts::PI;

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d_with_breaks, QuadratureConfig};

/// Clean couplings of the chain `H₀ = −(J/2) Σ (σˣσˣ + σʸσʸ) − B Σ σᶻ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    /// Nearest-neighbour coupling, `J > 0`.
    pub j: f64,
    /// Uniform magnetic field.
    pub b: f64,
}

impl ChainParams {
    /// Validated constructor. Negative fields are allowed and handled via
    /// the particle–hole symmetry where a formula needs `B ≥ 0`.
    pub fn new(j: f64, b: f64) -> Result<Self> {
        if !(j > 0.0 && j.is_finite()) {
            return Err(Error::InvalidParameter("J must be positive and finite"));
        }
        if !b.is_finite() {
            return Err(Error::InvalidParameter("B must be finite"));
        }
        Ok(Self { j, b })
    }

    /// Fermi momentum `α = arccos(B/J)` for `0 ≤ B < J`, and `0` for `B ≥ J`.
    pub fn fermi_momentum(&self) -> f64 {
        let ratio = self.b / self.j;
        if ratio >= 1.0 {
            0.0
        } else if ratio <= -1.0 {
            PI
        } else {
            ratio.acos()
        }
    }

    fn mirrored(&self) -> Self {
        Self {
            j: self.j,
            b: -self.b,
        }
    }
}

/// Temperature: a finite inverse temperature or exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermo {
    /// Inverse temperature `β > 0`.
    Finite {
        /// `β = 1/T`.
        beta: f64,
    },
    /// The ground state.
    ZeroTemperature,
}

impl Thermo {
    /// Finite temperature from `β`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter("beta must be positive and finite"));
        }
        Ok(Self::Finite { beta })
    }

    /// From a temperature `T ≥ 0`; `T = 0` gives [`Thermo::ZeroTemperature`].
    pub fn from_temperature(t: f64) -> Result<Self> {
        if t == 0.0 {
            Ok(Self::ZeroTemperature)
        } else if t > 0.0 && t.is_finite() {
            Self::from_beta(1.0 / t)
        } else {
            Err(Error::InvalidParameter("temperature must be finite and >= 0"))
        }
    }

    /// `Some(β)` for finite temperature.
    pub fn beta(&self) -> Option<f64> {
        match *self {
            Self::Finite { beta } => Some(beta),
            Self::ZeroTemperature => None,
        }
    }

    /// `T = 1/β`, or `0`.
    pub fn temperature(&self) -> f64 {
        match *self {
            Self::Finite { beta } => 1.0 / beta,
            Self::ZeroTemperature => 0.0,
        }
    }
}

/// Where a [`CorrelatorSet`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Clean closed form or quadrature.
    Clean,
    /// First-order disorder perturbation theory.
    Perturbative,
    /// Monte Carlo average over exactly solved finite chains.
    Oracle,
}

/// The correlators `(G₀, G₁, G₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    /// `G₀`, the magnetization.
    pub g0: f64,
    /// Nearest-neighbour correlator.
    pub g1: f64,
    /// Next-nearest-neighbour correlator.
    pub g2: f64,
    /// Origin of the numbers.
    pub provenance: Provenance,
    /// Standard errors of the three entries (oracle only).
    pub stderr: Option<[f64; 3]>,
}

impl CorrelatorSet {
    /// A set without error bars.
    pub fn new(g0: f64, g1: f64, g2: f64, provenance: Provenance) -> Self {
        Self {
            g0,
            g1,
            g2,
            provenance,
            stderr: None,
        }
    }

    /// `G_R` for `R ∈ {0, 1, 2}`.
    pub fn get(&self, r: u32) -> Option<f64> {
        match r {
            0 => Some(self.g0),
            1 => Some(self.g1),
            2 => Some(self.g2),
            _ => None,
        }
    }

    /// Entries as an array.
    pub fn as_array(&self) -> [f64; 3] {
        [self.g0, self.g1, self.g2]
    }

    /// Checks `|G_R| ≤ 1 + tol` for every entry.
    pub fn check_bounds(&self, tol: f64) -> Result<()> {
        for (what, value) in [("G0", self.g0), ("G1", self.g1), ("G2", self.g2)] {
            if !(value.abs() <= 1.0 + tol) {
                return Err(Error::InvalidCorrelator { what, value });
            }
        }
        Ok(())
    }
}

/// `ε(q) = 2(B − J cos q)`.
pub fn dispersion(q: f64, p: &ChainParams) -> f64 {
    2.0 * (p.b - p.j * q.cos())
}

/// Fermi function of the energy `e` at inverse temperature `beta`,
/// evaluated without overflow.
pub fn fermi(e: f64, beta: f64) -> f64 {
    let x = beta * e;
    if x > 0.0 {
        let t = (-x).exp();
        t / (1.0 + t)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `k(1 − k)` for the Fermi function, accurate deep in both tails.
pub fn fermi_variance(e: f64, beta: f64) -> f64 {
    let t = (-(beta * e).abs()).exp();
    t / ((1.0 + t) * (1.0 + t))
}

/// Occupation `k(q)` of mode `q`: `1/(1 + e^{βε(q)})` at finite `β`, a
/// step function with value `½` on the Fermi surface at `T = 0`.
pub fn fermi_factor(q: f64, p: &ChainParams, t: Thermo) -> f64 {
    let e = dispersion(q, p);
    match t {
        Thermo::Finite { beta } => fermi(e, beta),
        Thermo::ZeroTemperature => {
            if e < 0.0 {
                1.0
            } else if e > 0.0 {
                0.0
            } else {
                0.5
            }
        }
    }
}

/// Momenta in `[0, π]` where `βε(q)` crosses a few fixed levels around the
/// Fermi surface. Used as quadrature breakpoints for thermally sharp
/// integrands.
pub(crate) fn thermal_breaks(p: &ChainParams, beta: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for level in [-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0] {
        let e = level / beta;
        let c = (p.b - 0.5 * e) / p.j;
        if c > -1.0 && c < 1.0 {
            out.push(c.acos());
        }
    }
    out
}

fn finite_beta(t: Thermo) -> Result<f64> {
    t.beta()
        .ok_or(Error::InvalidParameter("a finite temperature is required"))
}

/// `ln Z₀ / N = ∫ dq/2π ln 2cosh(βε(q)/2)`; finite temperature only.
pub fn log_partition_per_site(p: &ChainParams, t: Thermo, cfg: &QuadratureConfig) -> Result<f64> {
    let beta = finite_beta(t)?;
    let f = |q: f64| {
        let y = (0.5 * beta * dispersion(q, p)).abs();
        (y + (-2.0 * y).exp().ln_1p()) / PI
    };
    Ok(integrate_1d_with_breaks(f, 0.0, PI, &thermal_breaks(p, beta), cfg)?.value)
}

/// Magnetization per site `(1/β) ∂_B ln Z₀/N = ∫ dq/2π tanh(βε/2)`,
/// identical to `G₀`.
pub fn magnetization_per_site(p: &ChainParams, t: Thermo, cfg: &QuadratureConfig) -> Result<f64> {
    g_r_clean(0, p, t, cfg)
}

/// Clean correlator `G_R`. Finite temperature uses quadrature; `T = 0`
/// dispatches to [`g_r_clean_zero_t`].
pub fn g_r_clean(r: u32, p: &ChainParams, t: Thermo, cfg: &QuadratureConfig) -> Result<f64> {
    let beta = match t {
        Thermo::Finite { beta } => beta,
        Thermo::ZeroTemperature => return Ok(g_r_clean_zero_t(r, p)),
    };
    let rf = f64::from(r);
    let f = |q: f64| (rf * q).cos() * (0.5 * beta * dispersion(q, p)).tanh() / PI;
    Ok(integrate_1d_with_breaks(f, 0.0, PI, &thermal_breaks(p, beta), cfg)?.value)
}

/// Ground-state correlator: `1 − 2α/π` for `R = 0` and `−2 sin(αR)/(πR)`
/// otherwise, with `α` the Fermi momentum.
pub fn g_r_clean_zero_t(r: u32, p: &ChainParams) -> f64 {
    if p.b < 0.0 {
        let sign = if r % 2 == 0 { -1.0 } else { 1.0 };
        return sign * g_r_clean_zero_t(r, &p.mirrored());
    }
    let alpha = p.fermi_momentum();
    if r == 0 {
        1.0 - 2.0 * alpha / PI
    } else {
        let rf = f64::from(r);
        -2.0 * (alpha * rf).sin() / (PI * rf)
    }
}

/// `(G₀, G₁, G₂)` of the clean chain.
pub fn clean_set(p: &ChainParams, t: Thermo, cfg: &QuadratureConfig) -> Result<CorrelatorSet> {
    Ok(CorrelatorSet::new(
        g_r_clean(0, p, t, cfg)?,
        g_r_clean(1, p, t, cfg)?,
        g_r_clean(2, p, t, cfg)?,
        Provenance::Clean,
    ))
}
