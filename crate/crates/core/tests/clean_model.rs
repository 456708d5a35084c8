use std::f64::consts::{LN_2, PI};

use disconc_core::clean::{
    clean_set, dispersion, fermi_factor, g_r_clean, g_r_clean_zero_t, log_partition_per_site,
    magnetization_per_site, ChainParams, Thermo,
};
use disconc_core::oracle::{
    log_partition, sample_correlators, single_particle_matrix, DisorderSample,
};
use disconc_core::{DisorderSpec, OracleConfig, QuadratureConfig};
use proptest::prelude::*;

fn params(b: f64) -> ChainParams {
    ChainParams::new(1.0, b).unwrap()
}

fn beta(b: f64) -> Thermo {
    Thermo::from_beta(b).unwrap()
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::one_d()
}

#[test]
fn dispersion_examples() {
    assert_eq!(dispersion(0.0, &params(1.0)), 0.0);
    assert_eq!(dispersion(PI, &params(1.0)), 4.0);
    assert!((dispersion(PI / 2.0, &params(0.5)) - 1.0).abs() < 1e-15);
}

#[test]
fn fermi_factor_examples() {
    assert_eq!(fermi_factor(0.0, &params(1.0), beta(3.0)), 0.5);
    assert_eq!(fermi_factor(PI, &params(1.0), Thermo::ZeroTemperature), 0.0);
    assert_eq!(fermi_factor(0.0, &params(1.0), Thermo::ZeroTemperature), 0.5);
    assert_eq!(fermi_factor(1.0, &params(0.0), Thermo::ZeroTemperature), 1.0);
    assert!(fermi_factor(PI, &params(1.0), beta(1e6)) < 1e-300);
    let k = fermi_factor(PI, &params(1.0), beta(1.0));
    assert!((k - 1.0 / (1.0 + 4f64.exp())).abs() < 1e-15);
    assert!((k - 0.017_986).abs() < 1e-6);
}

#[test]
fn log_partition_limits() {
    let hot = log_partition_per_site(&params(0.7), beta(1e-9), &cfg()).unwrap();
    assert!((hot - LN_2).abs() < 1e-9);
    // Flat band: ε ≈ 2B, so ln 2cosh(βB).
    let p = ChainParams::new(1e-3, 5.0).unwrap();
    let flat = log_partition_per_site(&p, beta(1.0), &cfg()).unwrap();
    assert!((flat - (2.0 * 5f64.cosh()).ln()).abs() < 1e-5);
}

fn clean_chain_log_z(n: usize, p: &ChainParams, beta: f64) -> f64 {
    let h = single_particle_matrix(&DisorderSample::clean(n), p).unwrap();
    let eig = h.eigen().unwrap();
    log_partition(&h, &eig.values, beta)
}

#[test]
fn log_partition_matches_finite_chains() {
    let p = params(0.0);
    // The boundary contribution cancels in the difference.
    let bulk = (clean_chain_log_z(256, &p, 1.0) - clean_chain_log_z(128, &p, 1.0)) / 128.0;
    let lnz = log_partition_per_site(&p, beta(1.0), &cfg()).unwrap();
    assert!((bulk - lnz).abs() < 1e-3, "{bulk} vs {lnz}");
}

#[test]
fn magnetization_is_derivative_of_free_energy() {
    let tight = QuadratureConfig {
        rel_tol: 1e-14,
        abs_tol: 1e-16,
        ..cfg()
    };
    let h = 1e-5;
    for (b, bt) in [(0.3, 1.0), (0.9, 5.0), (1.2, 20.0), (2.0, 0.5)] {
        let up = log_partition_per_site(&params(b + h), beta(bt), &tight).unwrap();
        let down = log_partition_per_site(&params(b - h), beta(bt), &tight).unwrap();
        let fd = (up - down) / (2.0 * h * bt);
        let m = magnetization_per_site(&params(b), beta(bt), &cfg()).unwrap();
        assert!((fd - m).abs() < 1e-6, "B={b} β={bt}: {fd} vs {m}");
    }
}

#[test]
fn magnetization_examples() {
    for bt in [0.1, 1.0, 30.0] {
        let m = magnetization_per_site(&params(0.0), beta(bt), &cfg()).unwrap();
        assert!(m.abs() < 1e-12);
        assert_eq!(m, g_r_clean(0, &params(0.0), beta(bt), &cfg()).unwrap());
    }
    let polarized = magnetization_per_site(&params(2.0), beta(1e3), &cfg()).unwrap();
    assert!((polarized - 1.0).abs() < 1e-12);
}

#[test]
fn g1_matches_open_chain() {
    let p = params(0.5);
    let t = beta(20.0);
    let oracle = OracleConfig::new(256, 1, 7, p, t, DisorderSpec::clean()).unwrap();
    let est = sample_correlators(&oracle).unwrap();
    for r in 0..3 {
        let g = g_r_clean(r, &p, t, &cfg()).unwrap();
        assert!((g - est.set.get(r).unwrap()).abs() < 1e-3, "R={r}");
    }
}

#[test]
fn zero_temperature_closed_form() {
    assert!(g_r_clean_zero_t(0, &params(0.0)).abs() < 1e-15);
    assert_eq!(g_r_clean_zero_t(0, &params(1.0)), 1.0);
    assert_eq!(g_r_clean_zero_t(0, &params(1.3)), 1.0);
    assert!((g_r_clean_zero_t(1, &params(0.0)) + 2.0 / PI).abs() < 1e-15);
    assert!(g_r_clean_zero_t(2, &params(0.0)).abs() < 1e-15);
    let finite = g_r_clean(1, &params(0.5), beta(500.0), &cfg()).unwrap();
    assert!((finite - g_r_clean_zero_t(1, &params(0.5))).abs() < 1e-4);
}

#[test]
fn zero_temperature_dispatch() {
    let p = params(0.4);
    let set = clean_set(&p, Thermo::ZeroTemperature, &cfg()).unwrap();
    for r in 0..3 {
        assert_eq!(set.get(r).unwrap(), g_r_clean_zero_t(r, &p));
    }
}

#[test]
fn converges_monotonically_to_ground_state() {
    for b in [0.3, 0.5, 0.8] {
        let p = params(b);
        for r in 0..3 {
            let exact = g_r_clean_zero_t(r, &p);
            let gaps: Vec<f64> = [50.0, 100.0, 200.0, 500.0]
                .iter()
                .map(|&bt| (g_r_clean(r, &p, beta(bt), &cfg()).unwrap() - exact).abs())
                .collect();
            assert!(gaps.windows(2).all(|w| w[1] < w[0]), "B={b} R={r}: {gaps:?}");
            assert!(gaps[3] < 1e-4);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn correlators_are_bounded(b in -3.0f64..3.0, bt in 0.05f64..300.0, r in 0u32..6) {
        let g = g_r_clean(r, &params(b), beta(bt), &cfg()).unwrap();
        prop_assert!(g.abs() <= 1.0 + 1e-12);
        prop_assert!(g_r_clean_zero_t(r, &params(b)).abs() <= 1.0);
    }

    #[test]
    fn field_reversal(b in 0.0f64..2.5, bt in 0.1f64..200.0, r in 0u32..5) {
        let sign = if r % 2 == 0 { -1.0 } else { 1.0 };
        let up = g_r_clean(r, &params(b), beta(bt), &cfg()).unwrap();
        let down = g_r_clean(r, &params(-b), beta(bt), &cfg()).unwrap();
        prop_assert!((down - sign * up).abs() < 1e-9);
        let up0 = g_r_clean_zero_t(r, &params(b));
        let down0 = g_r_clean_zero_t(r, &params(-b));
        prop_assert!((down0 - sign * up0).abs() < 1e-14);
    }

    #[test]
    fn magnetization_equals_g0(b in -2.0f64..2.0, bt in 0.1f64..100.0) {
        let p = params(b);
        prop_assert_eq!(
            magnetization_per_site(&p, beta(bt), &cfg()).unwrap(),
            g_r_clean(0, &p, beta(bt), &cfg()).unwrap()
        );
    }
}
