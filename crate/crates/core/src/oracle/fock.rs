//! Brute-force thermal traces over the full `2ⁿ`-dimensional spin space
//! for very short chains. Works directly with Pauli operators and builds
//! the fermions from Jordan–Wigner strings, so it shares nothing with the
//! single-particle route except the Hamiltonian parameters.
//!
//! Basis state bit `i` set means site `i` is spin-down (occupied).

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::clean::ChainParams;
use crate::error::{Error, Result};
use crate::oracle::DisorderSample;

/// Largest chain handled.
pub const MAX_SITES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
struct Dense {
    dim: usize,
    data: Vec<f64>,
}

impl Dense {
    fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, s: f64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.data {
            *a *= s;
        }
    }

    fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.at(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn sigma_z(n: usize, site: usize) -> Dense {
    let dim = 1 << n;
    let mut m = Dense::zeros(dim);
    for s in 0..dim {
        m.data[s * dim + s] = if s >> site & 1 == 0 { 1.0 } else { -1.0 };
    }
    m
}

/// `σ⁺ = |↑⟩⟨↓|` on `site`.
fn sigma_plus(n: usize, site: usize) -> Dense {
    let dim = 1 << n;
    let mut m = Dense::zeros(dim);
    for s in 0..dim {
        if s >> site & 1 == 1 {
            let t = s & !(1 << site);
            m.data[t * dim + s] = 1.0;
        }
    }
    m
}

fn transpose(m: &Dense) -> Dense {
    let n = m.dim;
    let mut out = Dense::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.data[j * n + i] = m.data[i * n + j];
        }
    }
    out
}

/// Annihilator `a_i = (Π_{m<i} σᶻ_m) σ⁺_i`.
fn annihilator(n: usize, site: usize) -> Dense {
    let mut op = Dense::identity(1 << n);
    for m in 0..site {
        op = op.mul(&sigma_z(n, m));
    }
    op.mul(&sigma_plus(n, site))
}

/// Spin Hamiltonian `−Σ (J + j_l)/2 (σˣσˣ + σʸσʸ) − Σ (B − b_l) σᶻ`.
fn hamiltonian(sample: &DisorderSample, p: &ChainParams) -> Dense {
    let n = sample.n_sites();
    let dim = 1 << n;
    let mut h = Dense::zeros(dim);
    for l in 0..n.saturating_sub(1) {
        let sp = sigma_plus(n, l);
        let sm = transpose(&sp);
        let sp1 = sigma_plus(n, l + 1);
        let sm1 = transpose(&sp1);
        // (σˣσˣ + σʸσʸ)/2 = σ⁺σ⁻ + σ⁻σ⁺
        let hop = {
            let mut x = sp.mul(&sm1);
            x.add_scaled(&sm.mul(&sp1), 1.0);
            x
        };
        h.add_scaled(&hop, -(p.j + sample.couplings[l]));
    }
    for l in 0..n {
        h.add_scaled(&sigma_z(n, l), -(p.b - sample.fields[l]));
    }
    h
}

/// `exp(−β(H − e₀))` with `e₀` a Gershgorin lower bound, by scaling and
/// squaring a Taylor series.
fn boltzmann(h: &Dense, beta: f64) -> (Dense, f64) {
    let n = h.dim;
    let e0 = (0..n)
        .map(|i| {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| h.at(i, j).abs()).sum();
            h.at(i, i) - off
        })
        .fold(f64::INFINITY, f64::min);
    let mut a = h.clone();
    a.add_scaled(&Dense::identity(n), -e0);
    a.scale(-beta);
    let norm = a.norm1();
    let mut squarings = 0;
    while norm / f64::from(1u32 << squarings.min(31)) > 0.125 && squarings < 60 {
        squarings += 1;
    }
    a.scale(0.5.powi(squarings));
    let mut result = Dense::identity(n);
    let mut term = Dense::identity(n);
    for k in 1..=24 {
        term = term.mul(&a);
        term.scale(1.0 / f64::from(k));
        result.add_scaled(&term, 1.0);
    }
    for _ in 0..squarings {
        result = result.mul(&result);
    }
    (result, e0)
}

/// `Tr H` over the full spin space.
pub fn hamiltonian_trace(sample: &DisorderSample, p: &ChainParams) -> Result<f64> {
    let n = sample.n_sites();
    if n == 0 || n > MAX_SITES {
        return Err(Error::InvalidParameter("brute force needs 1..=10 sites"));
    }
    Ok(hamiltonian(sample, p).trace())
}

/// Thermal state of a short chain.
#[derive(Debug, Clone)]
pub struct FockThermal {
    n: usize,
    rho: Dense,
    log_z: f64,
}

impl FockThermal {
    /// Builds `ρ = e^{−βH}/Z` for `n ≤` [`MAX_SITES`] sites.
    pub fn new(sample: &DisorderSample, p: &ChainParams, beta: f64) -> Result<Self> {
        let n = sample.n_sites();
        if n == 0 || n > MAX_SITES {
            return Err(Error::InvalidParameter("brute force needs 1..=10 sites"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter("beta must be positive and finite"));
        }
        let h = hamiltonian(sample, p);
        let (mut rho, e0) = boltzmann(&h, beta);
        let z = rho.trace();
        rho.scale(1.0 / z);
        Ok(Self {
            n,
            rho,
            log_z: z.ln() - beta * e0,
        })
    }

    /// `ln Z`.
    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    fn expect(&self, op: &Dense) -> f64 {
        let d = self.rho.dim;
        let mut acc = 0.0;
        for s in 0..d {
            for t in 0..d {
                acc += self.rho.data[s * d + t] * op.data[t * d + s];
            }
        }
        acc
    }

    /// Full matrix `⟨a†_i a_j⟩`, row-major.
    pub fn correlations(&self) -> Vec<f64> {
        let n = self.n;
        let ann: Vec<Dense> = (0..n).map(|i| annihilator(n, i)).collect();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let create = transpose(&ann[i]);
            for j in 0..n {
                out[i * n + j] = self.expect(&create.mul(&ann[j]));
            }
        }
        out
    }

    /// `⟨σᶻ_i⟩`.
    pub fn magnetization(&self, site: usize) -> f64 {
        self.expect(&sigma_z(self.n, site))
    }
}
