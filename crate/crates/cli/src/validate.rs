//! Perturbative kernels against the Monte Carlo oracle at one point.

use anyhow::Context;
use disconc_core::oracle::{OracleEstimate, OracleRun, PairOutcome};
use disconc_core::perturbation::g_r_averaged;
use disconc_core::{Average, Channel, DisorderSpec, Error, OracleConfig, QuadratureConfig, Thermo};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::chain;
use crate::sweep::average_name;

/// Relative tolerance on slopes in `Δ`.
pub const SLOPE_REL_TOL: f64 = 0.15;
/// Alternative tolerance in combined standard errors.
pub const SLOPE_SIGMAS: f64 = 3.0;
/// Clean-limit tolerance between the infinite chain and the oracle.
pub const CLEAN_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateSpec {
    pub b: f64,
    pub temperature: f64,
    pub variance: f64,
    pub channel: Channel,
    pub averages: Vec<Average>,
    pub offsets: Vec<u32>,
    pub n_sites: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub bulk_window: f64,
}

impl Default for ValidateSpec {
    fn default() -> Self {
        Self {
            b: 1.01,
            temperature: 0.02,
            variance: 5e-4,
            channel: Channel::Coupling,
            averages: vec![Average::Quenched, Average::Annealed],
            offsets: vec![1],
            n_sites: 128,
            n_samples: 4000,
            seed: 2024,
            bulk_window: 1.0 / 3.0,
        }
    }
}

impl ValidateSpec {
    fn oracle_config(&self, disorder: DisorderSpec) -> anyhow::Result<OracleConfig> {
        let cfg = OracleConfig {
            bulk_window: self.bulk_window,
            ..OracleConfig::new(
                self.n_sites,
                self.n_samples,
                self.seed,
                chain(self.b)?,
                Thermo::from_temperature(self.temperature)?,
                disorder,
            )?
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One line of the validation report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub average: &'static str,
    pub r: u32,
    pub perturbative: Option<f64>,
    pub oracle: Option<f64>,
    pub oracle_stderr: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
    pub flags: String,
}

/// One disorder realization, for audit dumps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub average: &'static str,
    pub seed: u64,
    pub index: u64,
    pub member: i8,
    pub disorder_sha256: String,
    pub g: [f64; 3],
    pub log_weight: f64,
}

/// Outcome of a slope comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeCheck {
    pub tolerance: f64,
    pub pass: bool,
}

/// Passes when the slopes agree within [`SLOPE_REL_TOL`] of the
/// perturbative value or [`SLOPE_SIGMAS`] combined errors, whichever is
/// looser.
pub fn compare_slopes(perturbative: f64, pert_err: f64, oracle: f64, oracle_err: f64) -> SlopeCheck {
    let tolerance = (SLOPE_REL_TOL * perturbative.abs())
        .max(SLOPE_SIGMAS * pert_err.hypot(oracle_err));
    SlopeCheck {
        tolerance,
        pass: (perturbative - oracle).abs() <= tolerance,
    }
}

fn digest(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Oracle estimate with pairs evaluated in parallel. The result does not
/// depend on scheduling. With `dump`, every realization is also returned.
pub fn oracle_estimate(
    cfg: &OracleConfig,
    dump: bool,
) -> anyhow::Result<(OracleEstimate, Vec<SampleRecord>)> {
    if cfg.disorder.variance == 0.0 {
        return Ok((disconc_core::oracle::sample_correlators(cfg)?, Vec::new()));
    }
    let run = OracleRun::new(*cfg)?;
    let pairs: Vec<PairOutcome> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| run.evaluate_pair(i))
        .collect::<Result<_, Error>>()?;
    let estimate = run.combine(&pairs)?;
    let mut samples = Vec::new();
    if dump {
        for p in &pairs {
            let draws = run.draw(p.index);
            for (k, (member, sample)) in p.members.iter().zip(&draws).enumerate() {
                samples.push(SampleRecord {
                    average: average_name(cfg.disorder.average),
                    seed: cfg.seed,
                    index: p.index,
                    member: if k == 0 { 1 } else { -1 },
                    disorder_sha256: digest(sample.channel_values(cfg.disorder.channel)),
                    g: member.g,
                    log_weight: member.log_weight,
                });
            }
        }
    }
    Ok((estimate, samples))
}

/// Full report plus optional sample records.
pub struct Validation {
    pub checks: Vec<CheckRecord>,
    pub samples: Vec<SampleRecord>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn run(spec: &ValidateSpec, quad: &QuadratureConfig, dump: bool) -> anyhow::Result<Validation> {
    let params = chain(spec.b)?;
    let thermo = Thermo::from_temperature(spec.temperature)?;
    let mut checks = Vec::new();
    let mut samples = Vec::new();

    let clean_cfg = spec.oracle_config(DisorderSpec::clean())?;
    let (clean_oracle, _) = oracle_estimate(&clean_cfg, false)?;
    for r in 0..3u32 {
        let pert = g_r_averaged(r, &params, thermo, &DisorderSpec::clean(), quad)?.value;
        let oracle = clean_oracle.set.as_array()[r as usize];
        checks.push(CheckRecord {
            check: "clean_limit",
            average: "none",
            r,
            perturbative: Some(pert),
            oracle: Some(oracle),
            oracle_stderr: Some(0.0),
            tolerance: Some(CLEAN_TOL),
            status: status((pert - oracle).abs() <= CLEAN_TOL),
            flags: String::new(),
        });
    }

    if spec.variance > 0.0 {
        for &average in &spec.averages {
            let disorder = DisorderSpec::new(spec.variance, spec.channel, average)?;
            let name = average_name(average);
            if thermo == Thermo::ZeroTemperature && average == Average::Annealed {
                for &r in &spec.offsets {
                    checks.push(skipped("slope", name, r, "annealed oracle needs T > 0"));
                }
                continue;
            }
            let cfg = spec.oracle_config(disorder)?;
            let (est, dumped) = oracle_estimate(&cfg, dump).with_context(|| format!("{name} oracle"))?;
            samples.extend(dumped);
            let stderr = est.set.stderr.unwrap_or([0.0; 3]);
            let mut flags = Vec::new();
            if est.low_effective_samples {
                flags.push("low_effective_samples");
            }
            if disorder.variance > disconc_core::perturbation::VARIANCE_CEILING {
                flags.push("large_variance");
            }
            for &r in &spec.offsets {
                let i = r.min(2) as usize;
                let oracle_slope = (est.set.as_array()[i] - clean_oracle.set.as_array()[i]) / spec.variance;
                let oracle_err = stderr[i] / spec.variance;
                match g_r_averaged(r, &params, thermo, &disorder, quad) {
                    Ok(g) => {
                        let slope = (g.value - g.clean) / spec.variance;
                        let cmp = compare_slopes(slope, g.error / spec.variance, oracle_slope, oracle_err);
                        checks.push(CheckRecord {
                            check: "slope",
                            average: name,
                            r,
                            perturbative: Some(slope),
                            oracle: Some(oracle_slope),
                            oracle_stderr: Some(oracle_err),
                            tolerance: Some(cmp.tolerance),
                            status: status(cmp.pass),
                            flags: flags.join(";"),
                        });
                    }
                    Err(Error::Unsupported(why)) => checks.push(CheckRecord {
                        oracle: Some(oracle_slope),
                        oracle_stderr: Some(oracle_err),
                        ..skipped("slope", name, r, why)
                    }),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }

    if thermo == Thermo::ZeroTemperature && spec.channel == Channel::Coupling {
        let variance = spec.variance.max(1e-3);
        for r in 0..3u32 {
            let at = |a| g_r_averaged(r, &params, thermo, &DisorderSpec::coupling(variance, a)?, quad);
            let q = at(Average::Quenched)?.value;
            let a = at(Average::Annealed)?.value;
            checks.push(CheckRecord {
                check: "zero_t_averages_equal",
                average: "both",
                r,
                perturbative: Some(a - q),
                oracle: None,
                oracle_stderr: None,
                tolerance: Some(0.0),
                status: status(q.to_bits() == a.to_bits()),
                flags: String::new(),
            });
        }
    }

    Ok(Validation { checks, samples })
}

fn skipped(check: &'static str, average: &'static str, r: u32, why: &str) -> CheckRecord {
    CheckRecord {
        check,
        average,
        r,
        perturbative: None,
        oracle: None,
        oracle_stderr: None,
        tolerance: None,
        status: Status::Skip,
        flags: why.replace(' ', "_"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_tolerance_takes_the_looser_bound() {
        let tight = compare_slopes(-10.0, 0.0, -8.6, 0.1);
        assert_eq!(tight.tolerance, 1.5);
        assert!(tight.pass);
        let noisy = compare_slopes(-10.0, 0.0, -6.0, 1.5);
        assert!((noisy.tolerance - 4.5).abs() < 1e-12);
        assert!(noisy.pass);
        assert!(!compare_slopes(-10.0, 0.0, -7.0, 0.1).pass);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            digest(&[]),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_ne!(digest(&[0.0]), digest(&[-0.0]));
    }

    #[test]
    fn small_validation_run() {
        let spec = ValidateSpec {
            b: 0.9,
            temperature: 0.05,
            variance: 1e-3,
            n_sites: 64,
            n_samples: 200,
            offsets: vec![0, 1, 2],
            ..ValidateSpec::default()
        };
        let v = run(&spec, &QuadratureConfig::two_d(), true).unwrap();
        assert_eq!(v.samples.len(), 2 * 2 * 200);
        assert_eq!(v.checks.iter().filter(|c| c.check == "clean_limit").count(), 3);
        assert_eq!(v.checks.iter().filter(|c| c.check == "slope").count(), 6);
        assert!(v.checks.iter().filter(|c| c.check == "clean_limit").all(|c| c.status == Status::Pass));
    }
}
