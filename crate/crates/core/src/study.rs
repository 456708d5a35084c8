//! Compositions used by the command-line front end: single sweep points
//! and the search for the crossover field `B_c`.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::clean::{ChainParams, CorrelatorSet, Provenance, Thermo};
use crate::entanglement::{concurrence_nn, concurrence_nnn, report, EntanglementReport};
use crate::error::{Error, Result};
use crate::perturbation::{averaged_set, g_r_averaged, Average, DisorderSpec, Warnings};
use crate::quadrature::QuadratureConfig;

/// One point of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    /// Clean couplings.
    pub params: ChainParams,
    /// Temperature.
    pub thermo: Thermo,
    /// Disorder.
    pub disorder: DisorderSpec,
}

/// Evaluated sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Input.
    pub point: SweepPoint,
    /// `(Ḡ₀, Ḡ₁, Ḡ₂)`.
    pub correlators: CorrelatorSet,
    /// Concurrences and entropies.
    pub report: EntanglementReport,
    /// Perturbative diagnostics.
    pub warnings: Warnings,
}

/// Perturbative correlators and entanglement at one point.
pub fn evaluate_point(point: &SweepPoint, cfg: &QuadratureConfig) -> Result<SweepRow> {
    let (correlators, warnings) = averaged_set(&point.params, point.thermo, &point.disorder, cfg)?;
    Ok(SweepRow {
        point: *point,
        correlators,
        report: report(&correlators, point.thermo)?,
        warnings,
    })
}

/// Search setup for `B_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverQuery {
    /// Coupling `J`.
    pub j: f64,
    /// Temperature.
    pub thermo: Thermo,
    /// Disorder variance `Δ > 0`.
    pub variance: f64,
    /// Averaging prescription.
    pub average: Average,
    /// Concurrence distance, 1 or 2.
    pub r: u32,
    /// Scan range in `B`.
    pub b_range: (f64, f64),
    /// Coarse scan step.
    pub scan_step: f64,
    /// Bisection resolution.
    pub tolerance: f64,
}

impl CrossoverQuery {
    /// Defaults: scan `B ∈ [0.02, 2]·J` in steps of `0.02·J`, resolve to
    /// `10⁻⁴·J`.
    pub fn new(j: f64, thermo: Thermo, variance: f64, average: Average, r: u32) -> Self {
        Self {
            j,
            thermo,
            variance,
            average,
            r,
            b_range: (0.02 * j, 2.0 * j),
            scan_step: 0.02 * j,
            tolerance: 1e-4 * j,
        }
    }
}

/// Outcome of a crossover search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossover {
    /// `C̄_R(Δ) − C̄_R(0)` turns from negative to positive at this field.
    Found(f64),
    /// No such sign change in the scanned range.
    NoneInRange,
}

/// Differences below this are treated as zero (no sign).
pub const SHIFT_ZERO: f64 = 1e-12;

/// `C̄_R(Δ) − C̄_R(0)` at field `b`.
pub fn concurrence_shift(b: f64, q: &CrossoverQuery, cfg: &QuadratureConfig) -> Result<f64> {
    let params = ChainParams::new(q.j, b)?;
    let d = DisorderSpec::coupling(q.variance, q.average)?;
    let mut disordered = [0.0; 3];
    let mut clean = [0.0; 3];
    for r in 0..=q.r.min(2) {
        let g = g_r_averaged(r, &params, q.thermo, &d, cfg)?;
        disordered[r as usize] = g.value;
        clean[r as usize] = g.clean;
    }
    let conc = |g: [f64; 3]| {
        let set = CorrelatorSet::new(g[0], g[1], g[2], Provenance::Perturbative);
        match q.r {
            1 => concurrence_nn(&set),
            _ => concurrence_nnn(&set),
        }
    };
    Ok(conc(disordered)? - conc(clean)?)
}

fn sign(x: f64) -> i8 {
    if x.abs() < SHIFT_ZERO {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Scans `B` upward for the first change of `C̄_R(Δ) − C̄_R(0)` from
/// negative to positive and bisects it.
pub fn find_crossover(q: &CrossoverQuery, cfg: &QuadratureConfig) -> Result<Crossover> {
    if !(q.variance > 0.0) {
        return Err(Error::InvalidParameter("crossover search needs variance > 0"));
    }
    if !matches!(q.r, 1 | 2) {
        return Err(Error::InvalidParameter("crossover search supports R = 1, 2"));
    }
    let (lo, hi) = q.b_range;
    if !(lo < hi && q.scan_step > 0.0 && q.tolerance > 0.0) {
        return Err(Error::InvalidParameter("invalid crossover scan range"));
    }
    let steps = ((hi - lo) / q.scan_step).ceil() as usize;
    let mut last_negative: Option<f64> = None;
    for i in 0..=steps {
        let b = (lo + i as f64 * q.scan_step).min(hi);
        match sign(concurrence_shift(b, q, cfg)?) {
            -1 => last_negative = Some(b),
            1 => {
                if let Some(mut below) = last_negative {
                    let mut above = b;
                    while above - below > q.tolerance {
                        let mid = 0.5 * (below + above);
                        if sign(concurrence_shift(mid, q, cfg)?) < 0 {
                            below = mid;
                        } else {
                            above = mid;
                        }
                    }
                    return Ok(Crossover::Found(0.5 * (below + above)));
                }
            }
            _ => {}
        }
    }
    Ok(Crossover::NoneInRange)
}
