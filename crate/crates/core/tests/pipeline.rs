//! End-to-end flows across codes, decoder, wegner and montecarlo.

use codeglass_core::codes::{self, Sector};
use codeglass_core::decoder::{estimate_psucc, exact_psucc, nishimori_beta};
use codeglass_core::montecarlo::{self, Schedule};
use codeglass_core::wegner::{self, Budget};

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn sampled_success_matches_exact_sum() {
    let problem = codes::toric(3).unwrap().sector(Sector::X).unwrap();
    let p = 0.1;
    let beta = nishimori_beta(p).unwrap();
    let exact = exact_psucc(&problem, beta, &budget()).unwrap();
    let est = estimate_psucc(&problem, p, beta, 4000, 17, &budget()).unwrap();
    assert!((est.mean - exact).abs() <= 4.0 * est.stderr, "{} vs {exact}", est.mean);
}

#[test]
fn toric_sectors_decode_alike() {
    let code = codes::toric(3).unwrap();
    let beta = nishimori_beta(0.08).unwrap();
    let x = exact_psucc(&code.sector(Sector::X).unwrap(), beta, &budget()).unwrap();
    let z = exact_psucc(&code.sector(Sector::Z).unwrap(), beta, &budget()).unwrap();
    assert!((x - z).abs() < 1e-12);
}

#[test]
fn nishimori_temperature_is_optimal() {
    // Decoding at beta_p maximizes the success probability.
    let problem = codes::toric(3).unwrap().sector(Sector::X).unwrap();
    let p = 0.12;
    let best = exact_psucc(&problem, nishimori_beta(p).unwrap(), &budget()).unwrap();
    assert!(best <= 1.0 + 1e-12);
    for beta in [0.3, 0.7, 2.5] {
        let count = 1u64 << problem.syndrome_rank();
        let mut success = 0.0;
        for index in 0..count {
            let (_, e) = problem.syndrome_representative(index);
            let at_beta = wegner::ClassPartition::compute(&problem, &e, beta, &budget()).unwrap();
            let truth = wegner::ClassPartition::compute(&problem, &e, nishimori_beta(p).unwrap(), &budget()).unwrap();
            success += (truth.log_z[at_beta.c_max as usize]).exp();
        }
        assert!(success <= best + 1e-12, "beta {beta}: {success} > {best}");
    }
}

#[test]
fn odd_torus_beats_even_torus_at_low_noise() {
    // Weight-L/2 errors tie on an even torus, so L = 4 trails L = 3.
    let beta = nishimori_beta(0.04).unwrap();
    let l3 = exact_psucc(&codes::toric(3).unwrap().sector(Sector::X).unwrap(), beta, &budget()).unwrap();
    let wide = Budget { spin_log2: 26, coset_log2: 32 };
    let l4 = exact_psucc(&codes::toric(4).unwrap().sector(Sector::X).unwrap(), beta, &wide).unwrap();
    assert!(l4 < l3, "{l4} vs {l3}");
}

#[test]
fn heat_sample_respects_bound_on_gauge_code() {
    let code = codes::gauge_code(&codes::toric(2).unwrap(), 2).unwrap();
    let problem = code.sector(Sector::X).unwrap();
    let rep = montecarlo::specific_heat_check(&problem, 0.1, 6, &Schedule::new(600, 60), 3).unwrap();
    assert!(rep.mean.is_finite() && rep.mean >= 0.0);
    assert!(rep.excess_z() <= 3.0, "{rep:?}");
}
