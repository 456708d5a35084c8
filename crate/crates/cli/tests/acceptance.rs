//! End-to-end acceptance checks. Run with `cargo test --test acceptance`;
//! prints one line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use disconc::validate::{compare_slopes, oracle_estimate};
use disconc_core::clean::{g_r_clean, ChainParams, Thermo};
use disconc_core::entanglement::{concurrence_nn, concurrence_nnn, entropy_single_site, entropy_two_site};
use disconc_core::oracle::fock::FockThermal;
use disconc_core::oracle::{
    density_matrix, sample_correlators, single_particle_matrix, thermal_correlations,
    wootters_concurrence, DisorderSample,
};
use disconc_core::perturbation::{averaged_set, g_r_disordered, g_r_disordered_zero_t, zero_t_coefficient};
use disconc_core::study::{concurrence_shift, find_crossover, Crossover, CrossoverQuery};
use disconc_core::{Average, CorrelatorSet, DisorderSpec, OracleConfig, Provenance, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn params(b: f64) -> ChainParams {
    ChainParams::new(1.0, b).unwrap()
}

fn thermo(t: f64) -> Thermo {
    Thermo::from_temperature(t).unwrap()
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::two_d()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const GRID_B: [f64; 5] = [0.0, 0.5, 0.9, 1.0, 1.1];
const GRID_T: [f64; 4] = [0.01, 0.02, 0.03, 0.1];

fn clean_limit() -> Outcome {
    let (mut vs_clean, mut vs_oracle) = (0f64, 0f64);
    for b in GRID_B {
        for t in GRID_T {
            let (p, th) = (params(b), thermo(t));
            let oracle = sample_correlators(
                &OracleConfig::new(256, 1, 0, p, th, DisorderSpec::clean()).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?
            .set
            .as_array();
            for r in 0..3u32 {
                let clean = g_r_clean(r, &p, th, &QuadratureConfig::one_d()).map_err(|e| e.to_string())?;
                for avg in [Average::Quenched, Average::Annealed] {
                    let d = DisorderSpec::coupling(0.0, avg).unwrap();
                    let g = g_r_disordered(r, &p, th, &d, &quad()).map_err(|e| e.to_string())?.value;
                    vs_clean = vs_clean.max((g - clean).abs());
                    vs_oracle = vs_oracle.max((g - oracle[r as usize]).abs());
                }
                vs_oracle = vs_oracle.max((clean - oracle[r as usize]).abs());
            }
        }
    }
    check(
        vs_clean <= 1e-6 && vs_oracle <= 1e-3,
        format!("max |disordered(0) - clean| = {vs_clean:.1e}, max |kernel - oracle| = {vs_oracle:.1e}"),
    )
}

fn zero_temperature() -> Outcome {
    let mut worst = 0f64;
    let mut identical = true;
    let cold = Thermo::from_beta(200.0).unwrap();
    for b in [0.5, 0.9] {
        let p = params(b);
        for r in 0..3u32 {
            let at = |avg| DisorderSpec::coupling(1e-3, avg).unwrap();
            let q = g_r_disordered_zero_t(r, &p, &at(Average::Quenched), &quad()).map_err(|e| e.to_string())?;
            let a = g_r_disordered_zero_t(r, &p, &at(Average::Annealed), &quad()).map_err(|e| e.to_string())?;
            identical &= q.value.to_bits() == a.value.to_bits();
            let finite = g_r_disordered(r, &p, cold, &at(Average::Quenched), &quad()).map_err(|e| e.to_string())?;
            worst = worst.max((q.value - finite.value).abs());
        }
    }
    check(
        worst <= 1e-3 && identical,
        format!("max |T=0 - β=200| = {worst:.1e}, averages identical: {identical}"),
    )
}

fn single_site_immunity() -> Outcome {
    let mut worst = 0f64;
    let mut exact = true;
    let mut entropy_fixed = true;
    for b in [0.1, 0.5, 0.9, 0.99, 1.2] {
        let p = params(b);
        let coeff = zero_t_coefficient(0, &p, &quad()).map_err(|e| e.to_string())?;
        exact &= coeff.value == 0.0;
        let clean = entropy_single_site(g_r_disordered_zero_t(0, &p, &DisorderSpec::clean(), &quad()).unwrap().value)
            .map_err(|e| e.to_string())?;
        for delta in [5e-4, 1e-3] {
            let g = g_r_disordered_zero_t(0, &p, &DisorderSpec::coupling(delta, Average::Quenched).unwrap(), &quad())
                .map_err(|e| e.to_string())?;
            worst = worst.max((g.value - g.clean).abs());
            entropy_fixed &= entropy_single_site(g.value).map_err(|e| e.to_string())? == clean;
        }
    }
    check(
        exact && worst < 1e-10 && entropy_fixed,
        format!("coefficient exactly 0: {exact}, max |shift| = {worst:.1e}, S_single unchanged: {entropy_fixed}"),
    )
}

fn slopes() -> Outcome {
    let (b, t, delta) = (1.01, 0.02, 5e-4);
    let (p, th) = (params(b), thermo(t));
    let cfg = |d| OracleConfig::new(128, 4000, 2024, p, th, d).unwrap();
    let (clean, _) = oracle_estimate(&cfg(DisorderSpec::clean()), false).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for avg in [Average::Quenched, Average::Annealed] {
        let d = DisorderSpec::coupling(delta, avg).unwrap();
        let (est, _) = oracle_estimate(&cfg(d), false).map_err(|e| e.to_string())?;
        let oracle = (est.set.g1 - clean.set.g1) / delta;
        let oracle_err = est.set.stderr.unwrap()[1] / delta;
        let g = g_r_disordered(1, &p, th, &d, &quad()).map_err(|e| e.to_string())?;
        let slope = (g.value - g.clean) / delta;
        let cmp = compare_slopes(slope, g.error / delta, oracle, oracle_err);
        ok &= cmp.pass;
        parts.push(format!(
            "{avg:?}: kernel {slope:.3}, oracle {oracle:.3} ± {oracle_err:.3} (tol {:.3})",
            cmp.tolerance
        ));
    }
    check(ok, parts.join("; "))
}

fn crossover() -> Outcome {
    let query = |t, avg| CrossoverQuery::new(1.0, thermo(t), 1e-3, avg, 1);
    let found = |q: &CrossoverQuery| match find_crossover(q, &quad()) {
        Ok(Crossover::Found(b)) => Ok(Some(b)),
        Ok(Crossover::NoneInRange) => Ok(None),
        Err(e) => Err(e.to_string()),
    };
    let quenched = query(0.02, Average::Quenched);
    let Some(b_q) = found(&quenched)? else {
        return Err("no quenched crossover at T = 0.02".into());
    };
    let shift = |b: f64| concurrence_shift(b, &quenched, &quad()).map_err(|e| e.to_string());
    let below = [b_q - 0.1, b_q - 0.05, b_q - 0.01];
    let above = [b_q + 0.01, b_q + 0.05, b_q + 0.1];
    let mut signs_ok = true;
    for b in below {
        signs_ok &= shift(b)? < 0.0;
    }
    for b in above {
        signs_ok &= shift(b)? > 0.0;
    }
    let b_a = found(&query(0.02, Average::Annealed))?;
    let annealed_lower = b_a.is_some_and(|b| b < b_q);
    let none_cold = [Average::Quenched, Average::Annealed]
        .into_iter()
        .map(|avg| found(&query(0.0, avg)))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(Option::is_none);
    check(
        (0.9..1.1).contains(&b_q) && signs_ok && annealed_lower && none_cold,
        format!(
            "quenched B_c = {b_q:.4} (sign change ok: {signs_ok}), annealed B_c = {}, none at T=0: {none_cold}",
            b_a.map_or("none".into(), |b| format!("{b:.4}"))
        ),
    )
}

fn wootters_agrees(g: &CorrelatorSet) -> Result<f64, String> {
    let mut worst = 0f64;
    for (r, formula) in [(1, concurrence_nn(g)), (2, concurrence_nnn(g))] {
        let formula = formula.map_err(|e| e.to_string())?;
        let rho = density_matrix(g, r).map_err(|e| e.to_string())?;
        let w = wootters_concurrence(&rho).map_err(|e| e.to_string())?;
        worst = worst.max((formula - w).abs());
    }
    Ok(worst)
}

fn concurrence_routes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0f64;
    let mut accepted = 0;
    while accepted < 1000 {
        let g = CorrelatorSet::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            Provenance::Perturbative,
        );
        let physical = [1, 2]
            .iter()
            .all(|&r| wootters_concurrence(&density_matrix(&g, r).unwrap()).is_ok());
        if physical {
            worst = worst.max(wootters_agrees(&g)?);
            accepted += 1;
        }
    }
    let mut grid_worst = 0f64;
    for b in GRID_B {
        for t in GRID_T {
            let (g, _) = averaged_set(&params(b), thermo(t), &DisorderSpec::clean(), &quad())
                .map_err(|e| e.to_string())?;
            grid_worst = grid_worst.max(wootters_agrees(&g)?);
        }
    }
    check(
        worst <= 1e-9 && grid_worst <= 1e-9,
        format!("random sets: {worst:.1e}, clean grid: {grid_worst:.1e}"),
    )
}

fn two_site_entropy() -> Outcome {
    let mut increments = Vec::new();
    let mut ordered = true;
    for b in [0.5, 0.8, 0.95] {
        let s = [0.0, 5e-4, 1e-3].map(|delta| {
            let d = DisorderSpec::coupling(delta, Average::Quenched).unwrap();
            let (g, _) = averaged_set(&params(b), Thermo::ZeroTemperature, &d, &quad()).unwrap();
            entropy_two_site(g.g0, g.g1).unwrap()
        });
        ordered &= s[0] < s[1] && s[1] < s[2];
        increments.push(s[2] - s[0]);
    }
    let growing = increments.windows(2).all(|w| w[1] > w[0]);
    check(
        ordered && growing,
        format!(
            "ordered: {ordered}, S(1e-3) - S(0) at B = 0.5, 0.8, 0.95: {}",
            increments.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn oracle_self_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0f64;
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let sample = DisorderSample {
            couplings: (0..n - 1).map(|_| rng.random_range(-0.4..0.4)).collect(),
            fields: (0..n).map(|_| rng.random_range(-0.4..0.4)).collect(),
        };
        let p = params(rng.random_range(-1.5..1.5));
        let beta = rng.random_range(0.1..8.0);
        let h = single_particle_matrix(&sample, &p).map_err(|e| e.to_string())?;
        let c = thermal_correlations(&h, Thermo::from_beta(beta).unwrap()).map_err(|e| e.to_string())?;
        let fock = FockThermal::new(&sample, &p, beta).map_err(|e| e.to_string())?;
        for (a, b) in c.iter().zip(fock.correlations()) {
            worst = worst.max((a - b).abs());
        }
    }
    let bits = |cfg: &OracleConfig| -> Result<Vec<u64>, String> {
        let est = sample_correlators(cfg).map_err(|e| e.to_string())?;
        let mut v: Vec<u64> = est.set.as_array().iter().map(|x| x.to_bits()).collect();
        v.extend(est.set.stderr.unwrap().iter().map(|x| x.to_bits()));
        Ok(v)
    };
    let mut deterministic = true;
    for avg in [Average::Quenched, Average::Annealed] {
        let d = DisorderSpec::coupling(1e-3, avg).unwrap();
        let cfg = OracleConfig::new(64, 100, 77, params(0.9), thermo(0.05), d).unwrap();
        let first = bits(&cfg)?;
        deterministic &= first == bits(&cfg)?;
        let (parallel, _) = oracle_estimate(&cfg, false).map_err(|e| e.to_string())?;
        deterministic &= parallel.set.as_array().map(f64::to_bits)[..] == first[..3];
    }
    check(
        worst <= 1e-12 && deterministic,
        format!("max |free fermion - Fock| = {worst:.1e}, bitwise reproducible: {deterministic}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("clean limit", clean_limit),
        ("zero-temperature consistency", zero_temperature),
        ("single-site immunity at T=0", single_site_immunity),
        ("slopes against Monte Carlo", slopes),
        ("crossover signs", crossover),
        ("concurrence routes", concurrence_routes),
        ("two-site entropy ordering", two_site_entropy),
        ("oracle self-check", oracle_self_check),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {}: {tag} {name} [{:.1}s] {detail}",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
