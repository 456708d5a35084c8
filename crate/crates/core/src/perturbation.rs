//! First-order disorder corrections to `G_R` for random couplings
//! `J → J + j_l`, `j_l ~ N(0, Δ)`.
//!
//! At finite temperature, after folding both momenta onto `[0, π]`,
//!
//! ```text
//! Ḡ_R = G_R + Δ [ Q_R + n² L_R ]
//! Q_R = (8/π²) ∫₀^π dq cos(qR) ∫₀^π dp ½(1 + cos p cos q) Br(p, q)
//! Br  = [k(q) − k(p)]/[ε(p) − ε(q)]² − β k(q)(1 − k(q))/[ε(p) − ε(q)]
//! L_R = −8β² [∫₀^π dp/π cos p k(p)] [∫₀^π dq/π cos q cos(qR) k(q)(1 − k(q))]
//! ```
//!
//! with `n = 0` for the quenched and `n = 1` for the annealed average. `Br`
//! is a `0/0` quotient on `p = q`; inside `|β(ε(p) − ε(q))| < η` the Taylor
//! form from [`singular_limit`] is used instead.
//!
//! At zero temperature the correction is
//!
//! ```text
//! (4Δ/π²) ∫₀^α dq ∫₀^{π/2} dp [f₁ + f₂]
//! f₁ = (1 + cos p cos q)(cos qR − cos pR)/(ε(p) − ε(q))²
//! f₂ = (1 − cos p cos q)(cos qR − (−1)^R cos pR)/(ν(p) − ε(q))²,  ν(p) = 2(B + J cos p)
//! ```
//!
//! `f₁` has a simple pole on `p = q` and is odd under `p ↔ q`, so its
//! principal value over `[0, α]²` vanishes and only `p ∈ [α, π/2]` is left.
//! That reduced form is the production path; [`zero_t_coefficient_pv`]
//! evaluates the full domain by symmetric band exclusion for comparison.
//! The two temperature regimes share no code, and the zero-temperature
//! result is the same for both averages.

use core::f64::consts::PI;

use alloc::vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::clean::{
    dispersion, fermi, fermi_variance, g_r_clean, g_r_clean_zero_t, thermal_breaks, ChainParams,
    CorrelatorSet, Provenance, Thermo,
};
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_1d_with_breaks, Estimate, Integral2d, QuadratureConfig, Rect, SingularLocus,
};

/// Variances above this (in units of `J²`) are flagged as outside the
/// regime where first-order perturbation theory is trustworthy.
pub const VARIANCE_CEILING: f64 = 0.01;

/// Which Hamiltonian term is disordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// Random couplings `j_l` on the bonds.
    Coupling,
    /// Random fields `b_l σ^z_l` on the sites (oracle only).
    Field,
}

/// How the disorder is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Average {
    /// Average of observables over frozen realizations.
    Quenched,
    /// Average weighted by each realization's partition function.
    Annealed,
}

/// Replica number `n` of the loop term: 0 (quenched) or 1 (annealed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplicaCount {
    /// `n → 0`.
    Zero,
    /// `n = 1`.
    One,
}

impl ReplicaCount {
    /// Numeric value of `n`.
    pub fn n(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::One => 1.0,
        }
    }
}

impl Average {
    /// Replica count associated with the average.
    pub fn replicas(self) -> ReplicaCount {
        match self {
            Self::Quenched => ReplicaCount::Zero,
            Self::Annealed => ReplicaCount::One,
        }
    }
}

/// Gaussian disorder of variance `Δ` in one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderSpec {
    /// Variance `Δ ≥ 0`.
    pub variance: f64,
    /// Disordered term.
    pub channel: Channel,
    /// Averaging prescription.
    pub average: Average,
}

impl DisorderSpec {
    /// Validated constructor.
    pub fn new(variance: f64, channel: Channel, average: Average) -> Result<Self> {
        if !(variance >= 0.0 && variance.is_finite()) {
            return Err(Error::InvalidParameter("variance must be finite and >= 0"));
        }
        Ok(Self {
            variance,
            channel,
            average,
        })
    }

    /// Random couplings with the given average.
    pub fn coupling(variance: f64, average: Average) -> Result<Self> {
        Self::new(variance, Channel::Coupling, average)
    }

    /// No disorder.
    pub fn clean() -> Self {
        Self {
            variance: 0.0,
            channel: Channel::Coupling,
            average: Average::Quenched,
        }
    }
}

/// Soft diagnostics attached to perturbative results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Warnings {
    /// `Δ` above [`VARIANCE_CEILING`]`·J²`.
    pub large_variance: bool,
    /// Zero-temperature input sitting on the critical field `B = J`.
    pub band_edge: bool,
}

impl Warnings {
    /// Union of two warning sets.
    pub fn merge(self, other: Self) -> Self {
        Self {
            large_variance: self.large_variance || other.large_variance,
            band_edge: self.band_edge || other.band_edge,
        }
    }

    /// True when any flag is set.
    pub fn any(&self) -> bool {
        self.large_variance || self.band_edge
    }
}

/// A disorder-averaged correlator with its decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedCorrelator {
    /// `Ḡ_R`.
    pub value: f64,
    /// Clean `G_R`.
    pub clean: f64,
    /// `Δ·Q_R`, present for both averages.
    pub quenched_shift: f64,
    /// `Δ·n²·L_R`; zero for quenched and at `T = 0`.
    pub loop_shift: f64,
    /// Quadrature error estimate on the shifts.
    pub error: f64,
    /// Diagnostics.
    pub warnings: Warnings,
}

/// The two first-order coefficients at finite temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    /// `Q_R`.
    pub quenched: Estimate,
    /// `L_R`.
    pub loop_term: Estimate,
}

fn variance_warning(p: &ChainParams, d: &DisorderSpec) -> Warnings {
    Warnings {
        large_variance: d.variance > VARIANCE_CEILING * p.j * p.j,
        band_edge: false,
    }
}

fn require_coupling(d: &DisorderSpec) -> Result<()> {
    match d.channel {
        Channel::Coupling => Ok(()),
        Channel::Field => Err(Error::Unsupported(
            "no perturbative formula for random fields; use the oracle",
        )),
    }
}

/// Raw bracket `Br(p, q)`; not finite at `ε(p) = ε(q)`.
pub fn bracket(q: f64, p: f64, params: &ChainParams, beta: f64) -> f64 {
    let eq = dispersion(q, params);
    let ep = dispersion(p, params);
    let delta = ep - eq;
    (fermi(eq, beta) - fermi(ep, beta)) / (delta * delta)
        - beta * fermi_variance(eq, beta) / delta
}

/// Taylor form of [`bracket`] around `ε(p) = ε(q)`:
/// `−k″/2 − k‴δ/6 − k⁗δ²/24` with `δ = ε(p) − ε(q)` and derivatives of the
/// Fermi function taken at `ε(q)`. The leading term is
/// `−β²k(1 − k)(1 − 2k)/2`.
pub fn singular_limit(q: f64, p_near_q: f64, params: &ChainParams, beta: f64) -> f64 {
    let eq = dispersion(q, params);
    let delta = dispersion(p_near_q, params) - eq;
    let s = fermi_variance(eq, beta);
    let t = 1.0 - 2.0 * fermi(eq, beta);
    let b2 = beta * beta;
    let k2 = b2 * s * t;
    let k3 = -b2 * beta * s * (1.0 - 6.0 * s);
    let k4 = b2 * b2 * s * t * (1.0 - 12.0 * s);
    -0.5 * k2 - k3 * delta / 6.0 - k4 * delta * delta / 24.0
}

fn finite_beta(t: Thermo) -> Result<f64> {
    t.beta().ok_or(Error::InvalidParameter(
        "finite-temperature formula called at T = 0; use g_r_disordered_zero_t",
    ))
}

/// `Q_R`, the coefficient of `Δ` shared by both averages.
pub fn quenched_coefficient(
    r: u32,
    params: &ChainParams,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let rf = f64::from(r);
    let scale = 8.0 / (PI * PI);
    let weight = move |q: f64, p: f64| scale * (rf * q).cos() * 0.5 * (1.0 + p.cos() * q.cos());
    let raw = |q: f64, p: f64| weight(q, p) * bracket(q, p, params, beta);
    let series = |q: f64, p: f64| weight(q, p) * singular_limit(q, p, params, beta);
    let offset = |q: f64, p: f64| beta * (dispersion(p, params) - dispersion(q, params));
    let curve = |q: f64| vec![q];
    let breaks = thermal_breaks(params, beta);
    let inner = |_: f64| breaks.clone();
    let est = Integral2d::new(Rect::new(0.0, PI, 0.0, PI))
        .outer_breaks(&breaks)
        .inner_breaks(&inner)
        .locus(SingularLocus::Removable {
            curve: &curve,
            offset: &offset,
            replacement: &series,
        })
        .eval(raw, cfg)?;
    Ok(est)
}

/// `L_R`, the loop coefficient (multiplied by `n²` in the average).
pub fn loop_coefficient(
    r: u32,
    params: &ChainParams,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let rf = f64::from(r);
    let breaks = thermal_breaks(params, beta);
    let occupied = integrate_1d_with_breaks(
        |p: f64| p.cos() * fermi(dispersion(p, params), beta) / PI,
        0.0,
        PI,
        &breaks,
        cfg,
    )?;
    let surface = integrate_1d_with_breaks(
        |q: f64| q.cos() * (rf * q).cos() * fermi_variance(dispersion(q, params), beta) / PI,
        0.0,
        PI,
        &breaks,
        cfg,
    )?;
    let pref = -8.0 * beta * beta;
    Ok(Estimate {
        value: pref * occupied.value * surface.value,
        error: pref.abs()
            * (occupied.error * surface.value.abs() + surface.error * occupied.value.abs()),
        evaluations: occupied.evaluations + surface.evaluations,
    })
}

/// Both finite-temperature coefficients.
pub fn first_order_coefficients(
    r: u32,
    params: &ChainParams,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<Coefficients> {
    Ok(Coefficients {
        quenched: quenched_coefficient(r, params, beta, cfg)?,
        loop_term: loop_coefficient(r, params, beta, &QuadratureConfig::one_d())?,
    })
}

/// `Ḡ_R` at finite temperature. `cfg` controls the double integral; the
/// clean part and the loop term use the 1D defaults.
pub fn g_r_disordered(
    r: u32,
    params: &ChainParams,
    t: Thermo,
    d: &DisorderSpec,
    cfg: &QuadratureConfig,
) -> Result<AveragedCorrelator> {
    require_coupling(d)?;
    let beta = finite_beta(t)?;
    let clean = g_r_clean(r, params, t, &QuadratureConfig::one_d())?;
    let warnings = variance_warning(params, d);
    if d.variance == 0.0 {
        return Ok(AveragedCorrelator {
            value: clean,
            clean,
            quenched_shift: 0.0,
            loop_shift: 0.0,
            error: 0.0,
            warnings,
        });
    }
    let quenched = quenched_coefficient(r, params, beta, cfg)?;
    let n = d.average.replicas().n();
    let (loop_shift, loop_err) = if n == 0.0 {
        (0.0, 0.0)
    } else {
        let l = loop_coefficient(r, params, beta, &QuadratureConfig::one_d())?;
        (d.variance * n * n * l.value, d.variance * l.error)
    };
    let quenched_shift = d.variance * quenched.value;
    Ok(AveragedCorrelator {
        value: clean + quenched_shift + loop_shift,
        clean,
        quenched_shift,
        loop_shift,
        error: d.variance * quenched.error + loop_err,
        warnings,
    })
}

fn zero_t_terms(r: u32, params: &ChainParams) -> (impl Fn(f64, f64) -> f64 + '_, impl Fn(f64, f64) -> f64 + '_) {
    let rf = f64::from(r);
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let f1 = move |q: f64, p: f64| {
        let de = dispersion(p, params) - dispersion(q, params);
        (1.0 + p.cos() * q.cos()) * ((rf * q).cos() - (rf * p).cos()) / (de * de)
    };
    let f2 = move |q: f64, p: f64| {
        let dn = 2.0 * params.j * (p.cos() + q.cos());
        (1.0 - p.cos() * q.cos()) * ((rf * q).cos() - sign * (rf * p).cos()) / (dn * dn)
    };
    (f1, f2)
}

fn zero_t_mirror(r: u32, params: &ChainParams) -> Option<(f64, ChainParams)> {
    if params.b < 0.0 {
        let sign = if r % 2 == 0 { -1.0 } else { 1.0 };
        Some((sign, ChainParams::new(params.j, -params.b).ok()?))
    } else {
        None
    }
}

/// Coefficient of `Δ` in the zero-temperature correction, using the
/// reduced domain (`f₁` on `[0, α] × [α, π/2]`, `f₂` on `[0, α] × [0, π/2]`).
pub fn zero_t_coefficient(r: u32, params: &ChainParams, cfg: &QuadratureConfig) -> Result<Estimate> {
    if let Some((sign, mirrored)) = zero_t_mirror(r, params) {
        let est = zero_t_coefficient(r, &mirrored, cfg)?;
        return Ok(Estimate {
            value: sign * est.value,
            ..est
        });
    }
    let alpha = params.fermi_momentum();
    let (f1, f2) = zero_t_terms(r, params);
    let scale = 4.0 / (PI * PI);
    let a = Integral2d::new(Rect::new(0.0, alpha, alpha, 0.5 * PI)).eval(&f1, cfg)?;
    let b = Integral2d::new(Rect::new(0.0, alpha, 0.0, 0.5 * PI)).eval(&f2, cfg)?;
    Ok(Estimate {
        value: scale * (a.value + b.value),
        error: scale * (a.error + b.error),
        evaluations: a.evaluations + b.evaluations,
    })
}

/// Same coefficient as [`zero_t_coefficient`], with `f₁` integrated over
/// the full `[0, α] × [0, π/2]` as a principal value (symmetric exclusion
/// of `|p − q| < η`, extrapolated in `η`). Slower and less accurate.
pub fn zero_t_coefficient_pv(r: u32, params: &ChainParams, cfg: &QuadratureConfig) -> Result<Estimate> {
    if let Some((sign, mirrored)) = zero_t_mirror(r, params) {
        let est = zero_t_coefficient_pv(r, &mirrored, cfg)?;
        return Ok(Estimate {
            value: sign * est.value,
            ..est
        });
    }
    let alpha = params.fermi_momentum();
    let (f1, f2) = zero_t_terms(r, params);
    let scale = 4.0 / (PI * PI);
    let curve = |q: f64| vec![q];
    let a = Integral2d::new(Rect::new(0.0, alpha, 0.0, 0.5 * PI))
        .locus(SingularLocus::SimplePole {
            curve: &curve,
            principal_value: true,
        })
        .eval(&f1, cfg)?;
    let b = Integral2d::new(Rect::new(0.0, alpha, 0.0, 0.5 * PI)).eval(&f2, cfg)?;
    Ok(Estimate {
        value: scale * (a.value + b.value),
        error: scale * (a.error + b.error),
        evaluations: a.evaluations + b.evaluations,
    })
}

/// `Ḡ_R` at zero temperature; identical for both averages.
pub fn g_r_disordered_zero_t(
    r: u32,
    params: &ChainParams,
    d: &DisorderSpec,
    cfg: &QuadratureConfig,
) -> Result<AveragedCorrelator> {
    require_coupling(d)?;
    let clean = g_r_clean_zero_t(r, params);
    let warnings = Warnings {
        band_edge: (params.b.abs() / params.j - 1.0).abs() < 1e-9,
        ..variance_warning(params, d)
    };
    if d.variance == 0.0 {
        return Ok(AveragedCorrelator {
            value: clean,
            clean,
            quenched_shift: 0.0,
            loop_shift: 0.0,
            error: 0.0,
            warnings,
        });
    }
    let coeff = zero_t_coefficient(r, params, cfg)?;
    let shift = d.variance * coeff.value;
    Ok(AveragedCorrelator {
        value: clean + shift,
        clean,
        quenched_shift: shift,
        loop_shift: 0.0,
        error: d.variance * coeff.error,
        warnings,
    })
}

/// `Ḡ_R` at any temperature.
pub fn g_r_averaged(
    r: u32,
    params: &ChainParams,
    t: Thermo,
    d: &DisorderSpec,
    cfg: &QuadratureConfig,
) -> Result<AveragedCorrelator> {
    match t {
        Thermo::Finite { .. } => g_r_disordered(r, params, t, d, cfg),
        Thermo::ZeroTemperature => g_r_disordered_zero_t(r, params, d, cfg),
    }
}

/// `(Ḡ₀, Ḡ₁, Ḡ₂)` with merged warnings.
pub fn averaged_set(
    params: &ChainParams,
    t: Thermo,
    d: &DisorderSpec,
    cfg: &QuadratureConfig,
) -> Result<(CorrelatorSet, Warnings)> {
    let mut out = [0.0; 3];
    let mut warnings = Warnings::default();
    for (r, slot) in (0u32..).zip(out.iter_mut()) {
        let g = g_r_averaged(r, params, t, d, cfg)?;
        *slot = g.value;
        warnings = warnings.merge(g.warnings);
    }
    let provenance = if d.variance == 0.0 {
        Provenance::Clean
    } else {
        Provenance::Perturbative
    };
    Ok((CorrelatorSet::new(out[0], out[1], out[2], provenance), warnings))
}
