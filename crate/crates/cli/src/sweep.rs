//! Grids over `(B, T, Δ, average)` evaluated with the perturbative kernels.

use anyhow::{bail, Context};
use disconc_core::perturbation::VARIANCE_CEILING;
use disconc_core::study::{evaluate_point, SweepPoint, SweepRow};
use disconc_core::{Average, DisorderSpec, QuadratureConfig, Thermo};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain;

/// Temperatures of the reference figures.
pub const DEFAULT_TEMPERATURES: [f64; 4] = [0.0, 0.01, 0.02, 0.03];
/// Disorder strengths of the reference figures.
pub const DEFAULT_VARIANCES: [f64; 3] = [0.0, 5e-4, 1e-3];

/// A sweep request. `B` runs over `steps` evenly spaced values in
/// `[b_min, b_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub b_min: f64,
    pub b_max: f64,
    pub steps: usize,
    pub temperatures: Vec<f64>,
    pub variances: Vec<f64>,
    pub averages: Vec<Average>,
    /// Allow variances above the perturbative ceiling.
    pub force: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            b_min: 0.8,
            b_max: 1.2,
            steps: 41,
            temperatures: DEFAULT_TEMPERATURES.to_vec(),
            variances: DEFAULT_VARIANCES.to_vec(),
            averages: vec![Average::Quenched, Average::Annealed],
            force: false,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.steps < 2 {
            bail!("steps must be >= 2");
        }
        if !(self.b_min.is_finite() && self.b_max.is_finite() && self.b_min < self.b_max) {
            bail!("need finite b_min < b_max");
        }
        if self.temperatures.is_empty() || self.variances.is_empty() || self.averages.is_empty() {
            bail!("temperature, variance and average lists must be non-empty");
        }
        for &d in &self.variances {
            if !(d >= 0.0 && d.is_finite()) {
                bail!("variance {d} must be finite and >= 0");
            }
            if d > VARIANCE_CEILING && !self.force {
                bail!("variance {d} exceeds the perturbative ceiling {VARIANCE_CEILING}; pass --force to run anyway");
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> Vec<f64> {
        let span = self.b_max - self.b_min;
        (0..self.steps)
            .map(|i| self.b_min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    /// Grid points in output order: average, temperature, variance, field.
    pub fn points(&self) -> anyhow::Result<Vec<SweepPoint>> {
        self.validate()?;
        let mut out = Vec::new();
        for &average in &self.averages {
            for &t in &self.temperatures {
                let thermo = Thermo::from_temperature(t)?;
                for &variance in &self.variances {
                    let disorder = DisorderSpec::coupling(variance, average)?;
                    for b in self.fields() {
                        out.push(SweepPoint {
                            params: chain(b)?,
                            thermo,
                            disorder,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn average_name(a: Average) -> &'static str {
    match a {
        Average::Quenched => "quenched",
        Average::Annealed => "annealed",
    }
}

/// One output line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub b: f64,
    pub temperature: f64,
    pub variance: f64,
    pub average: &'static str,
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub c1: f64,
    pub c2: f64,
    pub s_single: f64,
    pub s_two: f64,
    pub entropies_are_entanglement: bool,
    pub large_variance: bool,
    pub band_edge: bool,
}

impl From<&SweepRow> for SweepRecord {
    fn from(r: &SweepRow) -> Self {
        Self {
            b: r.point.params.b,
            temperature: r.point.thermo.temperature(),
            variance: r.point.disorder.variance,
            average: average_name(r.point.disorder.average),
            g0: r.correlators.g0,
            g1: r.correlators.g1,
            g2: r.correlators.g2,
            c1: r.report.c1,
            c2: r.report.c2,
            s_single: r.report.s_single,
            s_two: r.report.s_two,
            entropies_are_entanglement: r.report.validity.entropies_are_entanglement,
            large_variance: r.warnings.large_variance,
            band_edge: r.warnings.band_edge,
        }
    }
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run(spec: &SweepSpec, cfg: &QuadratureConfig) -> anyhow::Result<Vec<SweepRecord>> {
    spec.points()?
        .par_iter()
        .map(|p| {
            evaluate_point(p, cfg).map(|r| SweepRecord::from(&r)).with_context(|| {
                format!(
                    "B={} T={} Δ={} {}",
                    p.params.b,
                    p.thermo.temperature(),
                    p.disorder.variance,
                    average_name(p.disorder.average)
                )
            })
        })
        .collect()
}
