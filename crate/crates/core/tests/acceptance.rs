//! Acceptance suite: one test per criterion, named so the pass/fail line of
//! `cargo test --test acceptance` reads as a checklist.

mod common;

use common::{random_game, random_network, random_profile};
use num::{BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use congestion_core::bounds::{h_sigma, poa_upper_bound, pos_upper_bound};
use congestion_core::equilibria::{
    analyze, is_approx_nash, is_equilibrium_with, is_nash, EnumerationBudget, ProfileIter,
    RatioValue,
};
use congestion_core::game::{
    altruistic_cost, perceived_cost, potential, social_cost, tax_cost, Game,
};
use congestion_core::generators::{
    gen_poa_general, gen_poa_network, gen_pos_general, gen_singleton_pos, gen_two_player_tight,
};
use congestion_core::network::{feasible_flows, fotakis_condition, potential_of_flow};
use congestion_core::rational::{rat, rational_f64};
use congestion_core::verifier::{delta_sweep, verify};

fn budget() -> EnumerationBudget {
    EnumerationBudget::new(10_000_000)
}

#[test]
fn criterion_01_poa_tightness_classical_point() {
    let out = gen_poa_general(3, &rat(1, 1)).unwrap();
    let analysis = analyze(&out.game, &rat(1, 1), &rat(1, 1), &budget()).unwrap();
    assert_eq!(analysis.poa, RatioValue::Finite(rat(5, 2)));
}

#[test]
fn criterion_02_poa_network_construction() {
    let one = BigRational::one();
    let two = rat(2, 1);
    for n in [2usize, 3, 4] {
        for rho in [rat(1, 2), rat(1, 1), rat(2, 1)] {
            let out = gen_poa_network(n, &rho).unwrap();
            assert!(
                is_nash(&out.game, &out.designated_ne, &rho).unwrap(),
                "designated profile not an equilibrium at n={n}, rho={rho}"
            );
            let nr = rat(n as i64, 1);
            for sigma in [rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)] {
                let ne_cost = social_cost(&out.game, &out.designated_ne, &sigma).unwrap();
                let expected_ne =
                    &nr * ((&one + &two * &rho * (&one + &sigma)) * &nr - &two * &rho * &sigma);
                assert_eq!(ne_cost, expected_ne);
                let cmp_cost = social_cost(&out.game, &out.comparison, &sigma).unwrap();
                let expected_cmp = &nr * ((&one + &rho) * &nr + &rho);
                assert_eq!(cmp_cost, expected_cmp);
            }
        }
    }
}

#[test]
fn criterion_03_rho_plus_one_regime() {
    for rho in [rat(2, 1), rat(3, 1), rat(4, 1)] {
        let out = gen_two_player_tight(&rho).unwrap();
        let analysis = analyze(&out.game, &rho, &rat(1, 1), &budget()).unwrap();
        assert_eq!(
            analysis.poa,
            RatioValue::Finite(BigRational::one() + &rho),
            "rho = {rho}"
        );
    }
}

#[test]
fn criterion_04_pos_bound_reproduction() {
    let close = |value: f64, target: f64, tol: f64| (value - target).abs() <= tol;
    assert!(close(pos_upper_bound(1.0, 1.0).unwrap().value, 1.577, 1e-3));
    assert!(close(pos_upper_bound(0.5, 0.5).unwrap().value, 1.447, 1e-3));
    assert!(close(pos_upper_bound(1.0, 0.5).unwrap().value, 1.0, 1e-12));
    let h1 = h_sigma(1.0).unwrap();
    assert!(close(pos_upper_bound(h1, 1.0).unwrap().value, 2.013, 2e-3));
}

#[test]
fn criterion_05_pos_construction_consistency() {
    let one = rat(1, 1);
    let eps = rat(1, 1000);
    let expected = [
        (2usize, 1usize, rat(5000, 3501)),
        (3, 2, rat(28000, 19003)),
    ];
    for (n1, n2, pos) in expected {
        let out = gen_pos_general(n1, n2, &one, &eps).unwrap();
        let analysis = analyze(&out.game, &one, &one, &budget()).unwrap();
        assert_eq!(analysis.ne_count, 1, "({n1},{n2})");
        assert_eq!(analysis.best_ne, out.designated_ne);
        assert_eq!(analysis.optimum, out.comparison);
        assert_eq!(analysis.pos, RatioValue::Finite(pos));
        let predicted = out.predicted_ne_cost.eval(&one) / out.predicted_comparison_cost.eval(&one);
        assert_eq!(analysis.pos, RatioValue::Finite(predicted));
    }
}

#[test]
fn criterion_06_singleton_pos() {
    let out = gen_singleton_pos(5, 2, &rat(1, 1000)).unwrap();
    assert_eq!(out.rho, rat(1, 2));
    let analysis = analyze(&out.game, &out.rho, &rat(1, 1), &budget()).unwrap();
    assert_eq!(analysis.ne_count, 1);
    assert_eq!(analysis.best_ne, vec![0; 5]);
    assert_eq!(analysis.best_ne_cost, rat(25, 1));
    let pos = analysis.pos.finite().unwrap();
    assert!(pos >= &(rat(16, 7) - rat(2, 5)), "pos = {pos}");
}

#[test]
fn criterion_07_inequality_certification() {
    let holding = [
        (rat(1, 1), rat(1, 1)),
        (rat(1, 2), rat(1, 2)),
        (rat(1, 1), rat(1, 2)),
        (rat(63, 100), rat(1, 1)),
        (rat(2, 1), rat(1, 1)),
    ];
    for (rho, sigma) in &holding {
        let report = verify("smoothness", Some(rho), Some(sigma), 100).unwrap();
        assert!(
            report.holds && report.region_ok,
            "smoothness at rho={rho}, sigma={sigma}"
        );
    }
    let report = verify("smoothness", Some(&rat(1, 1)), Some(&rat(2, 5)), 100).unwrap();
    assert!(!report.holds);
    let witness = report.witness.unwrap();
    assert_eq!((witness.x, witness.y), (1, 0));

    for sigma in [rat(1, 2), rat(1, 1), rat(2, 1)] {
        assert!(verify("pos_core", None, Some(&sigma), 200).unwrap().holds);
    }
    assert!(verify("f1_nonneg", None, Some(&rat(1, 2)), 100).unwrap().holds);
    for rho in [rat(2, 1), rat(3, 1)] {
        assert!(verify("two_sigma", Some(&rho), Some(&rat(1, 1)), 100).unwrap().holds);
    }
    for rho in [rat(1, 4), rat(1, 2), rat(1, 1)] {
        assert!(verify("network_pos_a", Some(&rho), None, 100).unwrap().holds);
        assert!(verify("network_pos_b", Some(&rho), None, 100).unwrap().holds);
    }
}

#[test]
fn criterion_08_delta_sweep() {
    let report = delta_sweep(0.5, 2.0, 1e-4).unwrap();
    assert_eq!(report.points, 15001);
    assert!(report.holds);
    assert!(report.min_delta >= -1e-9);
}

#[test]
fn criterion_09_potential_exactness() {
    let rhos = [rat(0, 1), rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1)];
    let mut rng = ChaCha20Rng::seed_from_u64(901);
    for _ in 0..500 {
        let game = random_game(&mut rng, 4, 6, 4, false);
        let mut profile = random_profile(&mut rng, &game);
        for _ in 0..3 {
            let player = rng.random_range(0..game.n());
            let count = game.strategies[player].len();
            if count < 2 {
                continue;
            }
            let alt = loop {
                let c = rng.random_range(0..count);
                if c != profile[player] {
                    break c;
                }
            };
            let mut deviated = profile.clone();
            deviated[player] = alt;
            for rho in &rhos {
                let d_potential = potential(&game, &deviated, rho).unwrap()
                    - potential(&game, &profile, rho).unwrap();
                let d_cost = perceived_cost(&game, &deviated, player, rho).unwrap()
                    - perceived_cost(&game, &profile, player, rho).unwrap();
                assert_eq!(d_potential, d_cost);
            }
            profile = deviated;
        }
    }
}

#[test]
fn criterion_10_equivalence_suites() {
    let mut rng = ChaCha20Rng::seed_from_u64(1001);
    let approx_threshold = rat(3, 2);
    for _ in 0..200 {
        let game = random_game(&mut rng, 3, 5, 3, false);
        for rho in [rat(1, 1), rat(3, 2), rat(2, 1)] {
            for profile in ProfileIter::new(&game) {
                let under_rho = is_nash(&game, &profile, &rho).unwrap();
                let under_altruism =
                    is_equilibrium_with(&game, &profile, |p, i| altruistic_cost(&game, p, i, &rho))
                        .unwrap();
                assert_eq!(under_rho, under_altruism);
                if under_rho && rho >= approx_threshold {
                    assert!(is_approx_nash(&game, &profile, &rho).unwrap());
                }
            }
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(1002);
    for _ in 0..200 {
        let game = random_game(&mut rng, 3, 5, 3, true);
        for rho in [rat(1, 4), rat(1, 2), rat(1, 1)] {
            for profile in ProfileIter::new(&game) {
                let under_rho = is_nash(&game, &profile, &rho).unwrap();
                let under_tax =
                    is_equilibrium_with(&game, &profile, |p, i| tax_cost(&game, p, i, &rho))
                        .unwrap();
                assert_eq!(under_rho, under_tax);
            }
        }
    }
}

#[test]
fn criterion_11_fotakis_oracle() {
    let mut rng = ChaCha20Rng::seed_from_u64(1101);
    let flow_budget = EnumerationBudget::new(100_000);
    let mut accepted = 0;
    while accepted < 100 {
        let Some((net, paths)) = random_network(&mut rng) else {
            continue;
        };
        let flows = feasible_flows(&net, &paths, &flow_budget).unwrap();
        if flows.len() > 80 {
            continue;
        }
        accepted += 1;
        for rho in [rat(1, 2), rat(1, 1), rat(2, 1)] {
            let values: Vec<BigRational> = flows
                .iter()
                .map(|f| potential_of_flow(&net, f, &rho).unwrap())
                .collect();
            let min = values.iter().min().unwrap().clone();
            for (flow, value) in flows.iter().zip(&values) {
                let condition = fotakis_condition(&net, flow, &rho, 1000, &flow_budget).unwrap();
                assert_eq!(
                    condition,
                    *value == min,
                    "flow {flow:?} at rho={rho} on {net:?}"
                );
            }
        }
    }
}

fn assert_bounded(game: &Game, rho: &BigRational, sigma: &BigRational) {
    let analysis = analyze(game, rho, sigma, &budget()).unwrap();
    let rho_f = rational_f64(rho);
    let sigma_f = rational_f64(sigma);
    let poa_bound = poa_upper_bound(rho_f, sigma_f).unwrap();
    if poa_bound.region_ok {
        assert!(
            analysis.poa.as_f64() <= poa_bound.value + 1e-9,
            "poa {:?} above bound {} at rho={rho}, sigma={sigma}",
            analysis.poa,
            poa_bound.value
        );
    }
    if sigma_f > 0.0 {
        let pos_bound = pos_upper_bound(rho_f, sigma_f).unwrap();
        if pos_bound.region_ok {
            assert!(
                analysis.pos.as_f64() <= pos_bound.value + 1e-9,
                "pos {:?} above bound {} at rho={rho}, sigma={sigma}",
                analysis.pos,
                pos_bound.value
            );
        }
    }
}

#[test]
fn criterion_12_upper_bound_safety_net() {
    let pool = [
        (rat(1, 1), rat(1, 1)),
        (rat(1, 2), rat(1, 2)),
        (rat(3, 2), rat(1, 1)),
        (rat(2, 1), rat(1, 1)),
        (rat(63, 100), rat(1, 1)),
        (rat(1, 1), rat(1, 2)),
    ];
    let mut rng = ChaCha20Rng::seed_from_u64(1201);
    for i in 0..1000 {
        let game = random_game(&mut rng, 3, 5, 3, false);
        let (rho, sigma) = &pool[i % pool.len()];
        assert_bounded(&game, rho, sigma);
        let (rho, sigma) = &pool[(i + 3) % pool.len()];
        assert_bounded(&game, rho, sigma);
    }

    let one = rat(1, 1);
    for rho in [rat(1, 1), rat(3, 2), rat(2, 1)] {
        assert_bounded(&gen_poa_general(3, &rho).unwrap().game, &rho, &one);
    }
    assert_bounded(&gen_poa_general(4, &one).unwrap().game, &one, &one);
    for rho in [rat(2, 1), rat(3, 1), rat(4, 1)] {
        assert_bounded(&gen_two_player_tight(&rho).unwrap().game, &rho, &one);
    }
    let eps = rat(1, 1000);
    assert_bounded(&gen_pos_general(2, 1, &one, &eps).unwrap().game, &one, &one);
    assert_bounded(&gen_pos_general(3, 2, &one, &eps).unwrap().game, &one, &one);
    let singleton = gen_singleton_pos(5, 2, &eps).unwrap();
    assert_bounded(&singleton.game, &singleton.rho, &one);
    assert_bounded(&singleton.game, &one, &one);
    for rho in [rat(1, 2), rat(1, 1)] {
        assert_bounded(&gen_poa_network(2, &rho).unwrap().game, &rho, &one);
    }
    assert_bounded(&gen_poa_network(3, &one).unwrap().game, &one, &one);
}
