//! Search for the field where disorder starts to raise the concurrence.

use disconc_core::study::{find_crossover, Crossover, CrossoverQuery};
use disconc_core::{Average, QuadratureConfig, Thermo};
use serde::Serialize;

use crate::sweep::average_name;
use crate::J;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverSpec {
    pub average: Average,
    pub temperature: f64,
    pub variance: f64,
    pub r: u32,
    pub b_min: f64,
    pub b_max: f64,
    pub step: f64,
    pub tolerance: f64,
}

impl Default for CrossoverSpec {
    fn default() -> Self {
        Self {
            average: Average::Quenched,
            temperature: 0.02,
            variance: 1e-3,
            r: 1,
            b_min: 0.02,
            b_max: 2.0,
            step: 0.02,
            tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverRecord {
    pub average: &'static str,
    pub temperature: f64,
    pub variance: f64,
    pub r: u32,
    pub b_min: f64,
    pub b_max: f64,
    pub found: bool,
    pub b_c: Option<f64>,
}

pub fn run(spec: &CrossoverSpec, quad: &QuadratureConfig) -> anyhow::Result<CrossoverRecord> {
    let query = CrossoverQuery {
        b_range: (spec.b_min * J, spec.b_max * J),
        scan_step: spec.step * J,
        tolerance: spec.tolerance * J,
        ..CrossoverQuery::new(
            J,
            Thermo::from_temperature(spec.temperature)?,
            spec.variance,
            spec.average,
            spec.r,
        )
    };
    let b_c = match find_crossover(&query, quad)? {
        Crossover::Found(b) => Some(b / J),
        Crossover::NoneInRange => None,
    };
    Ok(CrossoverRecord {
        average: average_name(spec.average),
        temperature: spec.temperature,
        variance: spec.variance,
        r: spec.r,
        b_min: spec.b_min,
        b_max: spec.b_max,
        found: b_c.is_some(),
        b_c,
    })
}
