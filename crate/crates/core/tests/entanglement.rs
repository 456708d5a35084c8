use std::f64::consts::PI;

use disconc_core::clean::{ChainParams, Thermo};
use disconc_core::entanglement::{
    concurrence_nn, concurrence_nnn, entropy_single_site, entropy_two_site, report,
};
use disconc_core::oracle::{density_matrix, wootters_concurrence};
use disconc_core::perturbation::averaged_set;
use disconc_core::{Average, CorrelatorSet, DisorderSpec, Provenance, QuadratureConfig};
use proptest::prelude::*;

fn set(g0: f64, g1: f64, g2: f64) -> CorrelatorSet {
    CorrelatorSet::new(g0, g1, g2, Provenance::Perturbative)
}

fn averaged(b: f64, t: f64, delta: f64, average: Average) -> CorrelatorSet {
    let p = ChainParams::new(1.0, b).unwrap();
    let d = DisorderSpec::coupling(delta, average).unwrap();
    averaged_set(&p, Thermo::from_temperature(t).unwrap(), &d, &QuadratureConfig::two_d())
        .unwrap()
        .0
}

#[test]
fn documented_values() {
    assert_eq!(concurrence_nn(&set(1.0, 0.0, 0.0)).unwrap(), 0.0);
    assert_eq!(concurrence_nnn(&set(1.0, 0.0, 0.0)).unwrap(), 0.0);
    let half = concurrence_nn(&set(0.0, 2.0 / PI, 0.0)).unwrap();
    assert!((half - (2.0 / PI - 0.5 * (1.0 - 4.0 / (PI * PI)))).abs() < 1e-15);
    assert!((half - 0.3390).abs() < 1e-3);
    assert!((entropy_single_site(0.5).unwrap() - 0.811_278_1).abs() < 1e-7);
    assert!((entropy_two_site(0.0, 0.0).unwrap() - 4f64.ln()).abs() < 1e-15);
    assert_eq!(entropy_two_site(1.0, 0.0).unwrap(), 0.0);
}

#[test]
fn zero_temperature_clean_chain_against_density_matrix() {
    let g = averaged(0.0, 0.0, 0.0, Average::Quenched);
    for (r, formula) in [(1, concurrence_nn(&g).unwrap()), (2, concurrence_nnn(&g).unwrap())] {
        let w = wootters_concurrence(&density_matrix(&g, r).unwrap()).unwrap();
        assert!((w - formula).abs() < 1e-12, "R={r}");
    }
}

#[test]
fn next_nearest_concurrence_is_smaller() {
    for b in [0.5, 0.7, 0.9, 0.95, 1.0, 1.05, 1.1, 1.3] {
        for t in [0.0, 0.01, 0.02, 0.03] {
            for delta in [0.0, 5e-4, 1e-3] {
                for avg in [Average::Quenched, Average::Annealed] {
                    let g = averaged(b, t, delta, avg);
                    let (c1, c2) = (concurrence_nn(&g).unwrap(), concurrence_nnn(&g).unwrap());
                    assert!(c2 <= c1, "B={b} T={t} Δ={delta}: {c2} > {c1}");
                }
            }
        }
    }
}

#[test]
fn two_site_entropy_grows_with_disorder_in_ground_state() {
    for b in [0.3, 0.5, 0.7, 0.8, 0.9, 0.95] {
        let s: Vec<f64> = [0.0, 5e-4, 1e-3]
            .iter()
            .map(|&d| {
                let g = averaged(b, 0.0, d, Average::Quenched);
                entropy_two_site(g.g0, g.g1).unwrap()
            })
            .collect();
        assert!(s[0] < s[1] && s[1] < s[2], "B={b}: {s:?}");
    }
}

#[test]
fn report_marks_thermal_entropies() {
    let g = averaged(0.8, 0.02, 5e-4, Average::Annealed);
    let r = report(&g, Thermo::from_temperature(0.02).unwrap()).unwrap();
    assert!(!r.validity.entropies_are_entanglement);
    assert_eq!(r.c1, concurrence_nn(&g).unwrap());
    assert_eq!(r.s_single, entropy_single_site(g.g0).unwrap());
}

/// A correlator triple whose two-site states are both physical.
fn physical() -> impl Strategy<Value = CorrelatorSet> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_map(|(a, b, c)| set(a, b, c))
        .prop_filter("unphysical", |g| {
            [1, 2].iter().all(|&r| wootters_concurrence(&density_matrix(g, r).unwrap()).is_ok())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn formula_matches_wootters(g in physical()) {
        let w1 = wootters_concurrence(&density_matrix(&g, 1).unwrap()).unwrap();
        let w2 = wootters_concurrence(&density_matrix(&g, 2).unwrap()).unwrap();
        prop_assert!((concurrence_nn(&g).unwrap() - w1).abs() < 1e-9);
        prop_assert!((concurrence_nnn(&g).unwrap() - w2).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sign_invariance(g in physical()) {
        prop_assert_eq!(concurrence_nn(&g).unwrap(), concurrence_nn(&set(-g.g0, g.g1, g.g2)).unwrap());
        prop_assert_eq!(concurrence_nn(&g).unwrap(), concurrence_nn(&set(g.g0, -g.g1, g.g2)).unwrap());
        // Field reversal maps (G₀, G₁, G₂) to (−G₀, G₁, −G₂); G₀G₂ is what enters C₂.
        let reversed = set(-g.g0, g.g1, -g.g2);
        prop_assert_eq!(concurrence_nnn(&g).unwrap(), concurrence_nnn(&reversed).unwrap());
        prop_assert_eq!(concurrence_nnn(&g).unwrap(), concurrence_nnn(&set(g.g0, -g.g1, g.g2)).unwrap());
        prop_assert_eq!(entropy_single_site(g.g0).unwrap(), entropy_single_site(-g.g0).unwrap());
    }

    #[test]
    fn outputs_stay_in_range(g in physical(), noise in proptest::array::uniform3(-1e-10f64..1e-10)) {
        let g = set(g.g0 + noise[0], g.g1 + noise[1], g.g2 + noise[2]);
        for c in [concurrence_nn(&g), concurrence_nnn(&g)].into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&c));
        }
        if let Ok(s) = entropy_single_site(g.g0) {
            prop_assert!((0.0..=1.0).contains(&s));
        }
        if let Ok(s) = entropy_two_site(g.g0, g.g1) {
            prop_assert!(s >= 0.0);
        }
    }

    #[test]
    fn inconsistent_inputs_are_rejected(g0 in -1.0f64..1.0, excess in 1e-6f64..0.5) {
        // |G₁| beyond 1 + |G₀| makes a diagonal entry of the state negative.
        let g1 = 1.0 + g0.abs() + excess;
        prop_assert!(concurrence_nn(&set(g0, g1, 0.0)).is_err());
    }
}
