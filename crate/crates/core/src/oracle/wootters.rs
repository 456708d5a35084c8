//! Two-site reduced density matrices and the Wootters concurrence.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{eigen::jacobi_eigen, sample_correlators, OracleConfig};
use crate::clean::CorrelatorSet;
use crate::error::{Error, Result};

/// Tolerated negative eigenvalue of a density matrix.
pub const PSD_SLACK: f64 = 1e-9;

/// `⟨σˣ_l σˣ_{l+R} + σʸ_l σʸ_{l+R}⟩ = 2(−1)^R det[G_{i−j+1}]` for the
/// `R × R` Toeplitz block with `G_{−r} = G_r` (Wick reduction of the
/// Jordan–Wigner string). Supports `R ∈ {1, 2}`.
pub fn xy_coherence(g: &CorrelatorSet, r: u32) -> Result<f64> {
    let at = |k: i32| g.get(k.unsigned_abs());
    let det = match r {
        1 => at(1),
        2 => match (at(1), at(0), at(2)) {
            (Some(g1), Some(g0), Some(g2)) => Some(g1 * g1 - g0 * g2),
            _ => None,
        },
        _ => None,
    }
    .ok_or(Error::Unsupported("two-site states are available for R = 1, 2"))?;
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    Ok(2.0 * sign * det)
}

/// Reduced state of sites `l, l+R` in the basis `↑↑, ↑↓, ↓↑, ↓↓`.
pub fn density_matrix(g: &CorrelatorSet, r: u32) -> Result<[[f64; 4]; 4]> {
    let gr = g
        .get(r)
        .ok_or(Error::Unsupported("two-site states are available for R = 1, 2"))?;
    let m = g.g0;
    let zz = m * m - gr * gr;
    let u = xy_coherence(g, r)?;
    let mut rho = [[0.0; 4]; 4];
    rho[0][0] = (1.0 + 2.0 * m + zz) / 4.0;
    rho[1][1] = (1.0 - zz) / 4.0;
    rho[2][2] = (1.0 - zz) / 4.0;
    rho[3][3] = (1.0 - 2.0 * m + zz) / 4.0;
    rho[1][2] = u / 4.0;
    rho[2][1] = u / 4.0;
    Ok(rho)
}

/// `C(ρ) = max{0, λ₁ − λ₂ − λ₃ − λ₄}` for a real symmetric two-qubit `ρ`.
///
/// With `ρ = WWᵀ` and `Y = σʸ⊗σʸ` (real), the nonzero eigenvalues of
/// `ρỸρY` are those of `S²` with `S = WᵀYW`, so `λ_i = |eig(S)|`.
pub fn wootters_concurrence(rho: &[[f64; 4]; 4]) -> Result<f64> {
    let mut flat = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            flat[i * 4 + j] = 0.5 * (rho[i][j] + rho[j][i]);
        }
    }
    let eig = jacobi_eigen(&flat, 4)?;
    let min = eig.values[0];
    if min < -PSD_SLACK {
        return Err(Error::InvalidState {
            min_eigenvalue: min,
        });
    }
    let mut w = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            w[i][k] = eig.vector(i, k) * eig.values[k].max(0.0).sqrt();
        }
    }
    // Y = σʸ⊗σʸ: (Yx)_0 = −x_3, (Yx)_1 = x_2, (Yx)_2 = x_1, (Yx)_3 = −x_0.
    let y_col = |k: usize| [-w[3][k], w[2][k], w[1][k], -w[0][k]];
    let mut s = [0.0; 16];
    for a in 0..4 {
        for b in 0..4 {
            let yb = y_col(b);
            s[a * 4 + b] = (0..4).map(|i| w[i][a] * yb[i]).sum();
        }
    }
    for a in 0..4 {
        for b in 0..a {
            let avg = 0.5 * (s[a * 4 + b] + s[b * 4 + a]);
            s[a * 4 + b] = avg;
            s[b * 4 + a] = avg;
        }
    }
    let v = jacobi_eigen(&s, 4)?.values;
    let mut lambda = [v[0].abs(), v[1].abs(), v[2].abs(), v[3].abs()];
    lambda.sort_by(|x, y| y.total_cmp(x));
    let c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Wootters concurrence of the two-site state built from the oracle's
/// averaged correlators.
pub fn oracle_concurrence(cfg: &OracleConfig, r: u32) -> Result<f64> {
    let est = sample_correlators(cfg)?;
    wootters_concurrence(&density_matrix(&est.set, r)?)
}
