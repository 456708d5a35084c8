//! Exact finite-chain reference: open XX chains with sampled disorder,
//! solved as free fermions and averaged over realizations.
//!
//! A realization maps to the tridiagonal single-particle matrix
//! `h_ll = 2(B − b_l)`, `h_{l,l+1} = −(J + j_l)` and the constant
//! `−BN + Σ b_l`, so that `H = Σ a†_i h_ij a_j + const`. Correlators are
//! read off `C_ij = ⟨a†_i a_j⟩` as `G_R = −(C_{l,l+R} + C_{l+R,l} − δ_{R0})`,
//! averaged over the central part of the chain.
//!
//! Disorder draws come in antithetic pairs `μ ± √Δ z`. Each draw index has
//! its own ChaCha stream derived from `(seed, index)`, so results do not
//! depend on evaluation order. Quenched averages use `μ = 0`. Annealed
//! averages sample from a Gaussian shifted to `μ_l = Δ ∂ ln Z/∂j_l` of the
//! clean chain and correct with importance weights
//! `ln w = ln Z(j) − Σ j_l μ_l / Δ`, normalized by log-sum-exp; this keeps
//! the effective sample size high where plain `Z`-weighting degenerates.

pub mod eigen;
pub mod fock;
mod wootters;

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::clean::{fermi, ChainParams, CorrelatorSet, Provenance, Thermo};
use crate::error::{Error, Result};
use crate::perturbation::{Average, Channel, DisorderSpec};

pub use eigen::{jacobi_eigen, tridiagonal_eigen, tridiagonal_eigen_rows, Eigen};
pub use wootters::{density_matrix, oracle_concurrence, wootters_concurrence, xy_coherence};

/// Effective sample sizes below this are flagged.
pub const MIN_EFFECTIVE_SAMPLES: f64 = 10.0;

/// Parameters of an oracle run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Chain length `N ≥ 8`.
    pub n_sites: usize,
    /// Number of antithetic draw pairs.
    pub n_samples: usize,
    /// Master seed.
    pub seed: u64,
    /// Fraction of central sites used for translational averaging.
    pub bulk_window: f64,
    /// Clean couplings.
    pub params: ChainParams,
    /// Temperature.
    pub thermo: Thermo,
    /// Disorder distribution.
    pub disorder: DisorderSpec,
}

impl OracleConfig {
    /// Config with the default central-third window.
    pub fn new(
        n_sites: usize,
        n_samples: usize,
        seed: u64,
        params: ChainParams,
        thermo: Thermo,
        disorder: DisorderSpec,
    ) -> Result<Self> {
        let cfg = Self {
            n_sites,
            n_samples,
            seed,
            bulk_window: 1.0 / 3.0,
            params,
            thermo,
            disorder,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the documented invariants.
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 8 {
            return Err(Error::InvalidParameter("n_sites must be >= 8"));
        }
        if self.n_samples < 1 {
            return Err(Error::InvalidParameter("n_samples must be >= 1"));
        }
        if !(self.bulk_window > 0.0 && self.bulk_window <= 1.0) {
            return Err(Error::InvalidParameter("bulk_window must be in (0, 1]"));
        }
        if self.window().1 < 3 {
            return Err(Error::InvalidParameter("bulk window must hold at least 3 sites"));
        }
        if !(self.disorder.variance >= 0.0 && self.disorder.variance.is_finite()) {
            return Err(Error::InvalidParameter("variance must be finite and >= 0"));
        }
        if self.thermo == Thermo::ZeroTemperature && self.disorder.average == Average::Annealed {
            return Err(Error::Unsupported(
                "annealed weights need a finite temperature; use a large beta",
            ));
        }
        Ok(())
    }

    /// `(first site, number of sites)` of the bulk window.
    pub fn window(&self) -> (usize, usize) {
        let len = ((self.bulk_window * self.n_sites as f64).round() as usize).clamp(1, self.n_sites);
        ((self.n_sites - len) / 2, len)
    }

    fn disorder_len(&self) -> usize {
        match self.disorder.channel {
            Channel::Coupling => self.n_sites - 1,
            Channel::Field => self.n_sites,
        }
    }
}

/// One disorder realization.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSample {
    /// Bond couplings `j_l`, length `N − 1`.
    pub couplings: Vec<f64>,
    /// Site fields `b_l`, length `N`.
    pub fields: Vec<f64>,
}

impl DisorderSample {
    /// All-zero realization on `n` sites.
    pub fn clean(n: usize) -> Self {
        Self {
            couplings: vec![0.0; n.saturating_sub(1)],
            fields: vec![0.0; n],
        }
    }

    /// Number of sites.
    pub fn n_sites(&self) -> usize {
        self.fields.len()
    }

    /// The disordered channel's values.
    pub fn channel_values(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::Coupling => &self.couplings,
            Channel::Field => &self.fields,
        }
    }

    fn with_channel(n: usize, channel: Channel, values: Vec<f64>) -> Self {
        let mut s = Self::clean(n);
        match channel {
            Channel::Coupling => s.couplings = values,
            Channel::Field => s.fields = values,
        }
        s
    }
}

/// Tridiagonal single-particle Hamiltonian plus constant.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticle {
    /// Diagonal `2(B − b_l)`.
    pub diag: Vec<f64>,
    /// Off-diagonal `−(J + j_l)`.
    pub off: Vec<f64>,
    /// Constant `−BN + Σ b_l`.
    pub offset: f64,
}

impl SingleParticle {
    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.diag.len();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = self.diag[i];
        }
        for (i, &o) in self.off.iter().enumerate() {
            m[i * n + i + 1] = o;
            m[(i + 1) * n + i] = o;
        }
        m
    }

    /// Solves the single-particle problem.
    pub fn eigen(&self) -> Result<Eigen> {
        tridiagonal_eigen(&self.diag, &self.off)
    }
}

/// Builds the open-chain single-particle matrix for `sample`.
pub fn single_particle_matrix(sample: &DisorderSample, p: &ChainParams) -> Result<SingleParticle> {
    let n = sample.n_sites();
    if n == 0 || sample.couplings.len() + 1 != n {
        return Err(Error::InvalidParameter("sample lengths must be N - 1 bonds and N sites"));
    }
    Ok(SingleParticle {
        diag: sample.fields.iter().map(|b| 2.0 * (p.b - b)).collect(),
        off: sample.couplings.iter().map(|j| -(p.j + j)).collect(),
        offset: -p.b * n as f64 + sample.fields.iter().sum::<f64>(),
    })
}

/// Mode occupations: Fermi function at finite `β`; filled negative modes
/// and half-filled zero modes at `T = 0`.
pub fn occupations(values: &[f64], t: Thermo) -> Vec<f64> {
    values
        .iter()
        .map(|&e| match t {
            Thermo::Finite { beta } => fermi(e, beta),
            Thermo::ZeroTemperature => {
                let tol = 1e-12 * values.iter().fold(1.0, |m: f64, v| m.max(v.abs()));
                if e < -tol {
                    1.0
                } else if e > tol {
                    0.0
                } else {
                    0.5
                }
            }
        })
        .collect()
}

/// Dense `C_ij = ⟨a†_i a_j⟩`, row-major.
pub fn thermal_correlations(h: &SingleParticle, t: Thermo) -> Result<Vec<f64>> {
    let eig = h.eigen()?;
    let occ = occupations(&eig.values, t);
    let n = eig.len();
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v: f64 = (0..n).map(|k| eig.vector(i, k) * eig.vector(j, k) * occ[k]).sum();
            c[i * n + j] = v;
            c[j * n + i] = v;
        }
    }
    Ok(c)
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `ln Z = −β·offset + Σ_k ln(1 + e^{−βλ_k})`.
pub fn log_partition(h: &SingleParticle, eigenvalues: &[f64], beta: f64) -> f64 {
    -beta * h.offset + eigenvalues.iter().map(|&e| softplus(-beta * e)).sum::<f64>()
}

/// Window-averaged `(G₀, G₁, G₂)` of a chain solved on the window rows.
fn bulk_correlators(eig: &Eigen, occ: &[f64]) -> [f64; 3] {
    let len = eig.rows().len();
    // Weighted band of C restricted to the window: c[r][l] = C_{l, l+r}.
    let mut c = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    for (k, &f) in occ.iter().enumerate() {
        if f == 0.0 {
            continue;
        }
        let col = eig.column(k);
        for (r, band) in c.iter_mut().enumerate() {
            for l in 0..len - r {
                band[l] += f * col[l] * col[l + r];
            }
        }
    }
    let mut out = [0.0; 3];
    for (r, slot) in out.iter_mut().enumerate() {
        let count = len - r;
        let delta = if r == 0 { 1.0 } else { 0.0 };
        let sum: f64 = c[r][..count].iter().map(|v| -(2.0 * v - delta)).sum();
        *slot = sum / count as f64;
    }
    out
}

/// Per-realization result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Realization {
    /// Window-averaged `(G₀, G₁, G₂)`.
    pub g: [f64; 3],
    /// Unnormalized log importance weight (annealed) or 0 (quenched).
    pub log_weight: f64,
}

/// The two antithetic realizations of one draw index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOutcome {
    /// Draw index.
    pub index: u64,
    /// `μ + √Δ z` and `μ − √Δ z`.
    pub members: [Realization; 2],
}

/// Monte Carlo estimate with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    /// Averaged correlators with standard errors.
    pub set: CorrelatorSet,
    /// Kish effective sample size (annealed only).
    pub effective_samples: Option<f64>,
    /// Effective sample size below [`MIN_EFFECTIVE_SAMPLES`].
    pub low_effective_samples: bool,
    /// Number of chains solved.
    pub realizations: usize,
}

/// A prepared oracle run; pairs can be evaluated in any order or in
/// parallel and combined afterwards.
#[derive(Debug, Clone)]
pub struct OracleRun {
    cfg: OracleConfig,
    tilt: Vec<f64>,
}

impl OracleRun {
    /// Validates `cfg` and, for annealed runs, computes the proposal shift.
    pub fn new(cfg: OracleConfig) -> Result<Self> {
        cfg.validate()?;
        let len = cfg.disorder_len();
        let tilt = match (cfg.disorder.average, cfg.thermo) {
            (Average::Annealed, Thermo::Finite { beta }) if cfg.disorder.variance > 0.0 => {
                let h = single_particle_matrix(&DisorderSample::clean(cfg.n_sites), &cfg.params)?;
                let c = thermal_correlations(&h, cfg.thermo)?;
                let n = cfg.n_sites;
                let delta = cfg.disorder.variance;
                (0..len)
                    .map(|l| match cfg.disorder.channel {
                        Channel::Coupling => delta * beta * 2.0 * c[l * n + l + 1],
                        Channel::Field => -delta * beta * (1.0 - 2.0 * c[l * n + l]),
                    })
                    .collect()
            }
            _ => vec![0.0; len],
        };
        Ok(Self { cfg, tilt })
    }

    /// The config.
    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    /// Proposal mean `μ_l`.
    pub fn tilt(&self) -> &[f64] {
        &self.tilt
    }

    /// Standard normal draws `z` for `index`.
    pub fn normals(&self, index: u64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(index);
        (0..self.cfg.disorder_len())
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    /// The antithetic pair of realizations for `index`.
    pub fn draw(&self, index: u64) -> [DisorderSample; 2] {
        let z = self.normals(index);
        let sd = self.cfg.disorder.variance.sqrt();
        let make = |sign: f64| {
            let values = self
                .tilt
                .iter()
                .zip(&z)
                .map(|(m, z)| m + sign * sd * z)
                .collect();
            DisorderSample::with_channel(self.cfg.n_sites, self.cfg.disorder.channel, values)
        };
        [make(1.0), make(-1.0)]
    }

    /// Solves one realization.
    pub fn solve(&self, sample: &DisorderSample) -> Result<Realization> {
        let h = single_particle_matrix(sample, &self.cfg.params)?;
        let (start, len) = self.cfg.window();
        let eig = tridiagonal_eigen_rows(&h.diag, &h.off, start..start + len)?;
        let occ = occupations(&eig.values, self.cfg.thermo);
        let g = bulk_correlators(&eig, &occ);
        let log_weight = match (self.cfg.disorder.average, self.cfg.thermo) {
            (Average::Annealed, Thermo::Finite { beta }) => {
                let tilt_term = if self.cfg.disorder.variance > 0.0 {
                    sample
                        .channel_values(self.cfg.disorder.channel)
                        .iter()
                        .zip(&self.tilt)
                        .map(|(j, m)| j * m)
                        .sum::<f64>()
                        / self.cfg.disorder.variance
                } else {
                    0.0
                };
                log_partition(&h, &eig.values, beta) - tilt_term
            }
            _ => 0.0,
        };
        Ok(Realization { g, log_weight })
    }

    /// Draws and solves pair `index`.
    pub fn evaluate_pair(&self, index: u64) -> Result<PairOutcome> {
        let [plus, minus] = self.draw(index);
        Ok(PairOutcome {
            index,
            members: [self.solve(&plus)?, self.solve(&minus)?],
        })
    }

    /// Combines pair outcomes into an estimate. Standard errors treat each
    /// pair as one independent unit. The result does not depend on the
    /// order of `pairs`.
    pub fn combine(&self, pairs: &[PairOutcome]) -> Result<OracleEstimate> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("no samples to combine"));
        }
        let mut sorted = pairs.to_vec();
        sorted.sort_by_key(|p| p.index);
        match self.cfg.disorder.average {
            Average::Quenched => Ok(combine_quenched(&sorted)),
            Average::Annealed => Ok(combine_annealed(&sorted)),
        }
    }
}

fn combine_quenched(pairs: &[PairOutcome]) -> OracleEstimate {
    let m = pairs.len() as f64;
    let mut mean = [0.0; 3];
    let mut err = [0.0; 3];
    for r in 0..3 {
        let units: Vec<f64> = pairs
            .iter()
            .map(|p| 0.5 * (p.members[0].g[r] + p.members[1].g[r]))
            .collect();
        mean[r] = units.iter().sum::<f64>() / m;
        if pairs.len() > 1 {
            let var = units.iter().map(|u| (u - mean[r]).powi(2)).sum::<f64>() / (m - 1.0);
            err[r] = (var / m).sqrt();
        }
    }
    OracleEstimate {
        set: oracle_set(mean, pairs.len() > 1, err),
        effective_samples: None,
        low_effective_samples: false,
        realizations: 2 * pairs.len(),
    }
}

fn combine_annealed(pairs: &[PairOutcome]) -> OracleEstimate {
    let lmax = pairs
        .iter()
        .flat_map(|p| p.members.iter().map(|r| r.log_weight))
        .fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<[f64; 2]> = pairs
        .iter()
        .map(|p| [(p.members[0].log_weight - lmax).exp(), (p.members[1].log_weight - lmax).exp()])
        .collect();
    let total: f64 = w.iter().map(|x| x[0] + x[1]).sum();
    let squares: f64 = w.iter().map(|x| x[0] * x[0] + x[1] * x[1]).sum();
    let ess = total * total / squares;
    let m = pairs.len() as f64;
    let mut mean = [0.0; 3];
    let mut err = [0.0; 3];
    for r in 0..3 {
        let y: Vec<f64> = pairs
            .iter()
            .zip(&w)
            .map(|(p, w)| w[0] * p.members[0].g[r] + w[1] * p.members[1].g[r])
            .collect();
        mean[r] = y.iter().sum::<f64>() / total;
        if pairs.len() > 1 {
            let resid: f64 = y
                .iter()
                .zip(&w)
                .map(|(y, w)| (y - mean[r] * (w[0] + w[1])).powi(2))
                .sum();
            err[r] = (m / (m - 1.0) * resid).sqrt() / total;
        }
    }
    OracleEstimate {
        set: oracle_set(mean, pairs.len() > 1, err),
        effective_samples: Some(ess),
        low_effective_samples: ess < MIN_EFFECTIVE_SAMPLES,
        realizations: 2 * pairs.len(),
    }
}

fn oracle_set(g: [f64; 3], has_err: bool, err: [f64; 3]) -> CorrelatorSet {
    CorrelatorSet {
        g0: g[0],
        g1: g[1],
        g2: g[2],
        provenance: Provenance::Oracle,
        stderr: has_err.then_some(err),
    }
}

/// Sequential Monte Carlo estimate of `(Ḡ₀, Ḡ₁, Ḡ₂)`. Without disorder a
/// single chain is solved and the standard errors are zero.
pub fn sample_correlators(cfg: &OracleConfig) -> Result<OracleEstimate> {
    let run = OracleRun::new(*cfg)?;
    if cfg.disorder.variance == 0.0 {
        let r = run.solve(&DisorderSample::clean(cfg.n_sites))?;
        return Ok(OracleEstimate {
            set: oracle_set(r.g, true, [0.0; 3]),
            effective_samples: None,
            low_effective_samples: false,
            realizations: 1,
        });
    }
    let pairs = (0..cfg.n_samples as u64)
        .map(|i| run.evaluate_pair(i))
        .collect::<Result<Vec<_>>>()?;
    run.combine(&pairs)
}
