//! Values checked against independent computations: brute-force enumeration,
//! closed forms and exact evaluation.

use std::f64::consts::E;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secretary_core::analysis::{
    case_bound, j_closed_form, j_integral, k_closed_form, k_integral, lambert_w, learned_dynkin_guarantee,
    reciprocal_binomial_mean, Branch, Case, CaseBoundInput,
};
use secretary_core::hardness::{
    build_lp, error_set_members, error_sets, exact_policy_value, instance_family, policy_from_lp, solve_lp,
};
use secretary_core::simulate::{estimate_ratio, exact_ratio_small};
use secretary_core::{AlgorithmSpec, ClassicalParams, ErrorRule, Instance, MultiParams};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

#[test]
fn reciprocal_binomial_by_enumeration() {
    for n in 0..=20 {
        for p in (1..=9).map(|i| i as f64 / 10.0) {
            let brute: f64 = (0..=n)
                .map(|x| binomial(n, x) * p.powi(x as i32) * (1.0 - p).powi((n - x) as i32) / (x + 1) as f64)
                .sum();
            let got = reciprocal_binomial_mean(n, p).unwrap();
            assert!((got - brute).abs() < 1e-12, "n={n} p={p}: {got} vs {brute}");
        }
    }
}

#[test]
fn quadrature_matches_alternating_sums() {
    for tau in [0.1, 0.313, 0.7] {
        for m in 0..=15 {
            assert!((j_integral(tau, m).unwrap() - j_closed_form(tau, m)).abs() < 1e-9, "J tau={tau} m={m}");
            assert!((k_integral(tau, m).unwrap() - k_closed_form(tau, m)).abs() < 1e-9, "K tau={tau} m={m}");
        }
    }
}

#[test]
fn case_two_minus_four_is_reciprocal() {
    for tau in [0.2, 0.313, 0.45] {
        for theta in [0.3, 0.646] {
            for m in 1..=20 {
                let input = CaseBoundInput { tau, theta, m };
                let d = case_bound(Case::Ii, input).unwrap() - case_bound(Case::Iv, input).unwrap();
                assert!((d - 1.0 / (m + 1) as f64).abs() < 1e-12, "tau={tau} m={m}");
            }
        }
    }
}

#[test]
fn case_four_monotone_and_limit() {
    let tau = 0.313;
    let at = |m| case_bound(Case::Iv, CaseBoundInput { tau, theta: 0.646, m }).unwrap();
    let vals: Vec<f64> = (1..=50).map(at).collect();
    assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!((at(1) - tau * (1.0 - tau)).abs() < 1e-9);
    assert!((at(500) - tau * (1.0 / tau).ln()).abs() < 1e-3);
}

#[test]
fn lambert_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    use rand::Rng;
    for _ in 0..1000 {
        let x = rng.gen_range(-1.0 / E..50.0);
        let w = lambert_w(Branch::Principal, x).unwrap();
        assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0), "W0({x})");
        let y = rng.gen_range(-1.0 / E..0.0);
        let w = lambert_w(Branch::Lower, y).unwrap();
        assert!(w <= -1.0);
        assert!((w * w.exp() - y).abs() <= 1e-12, "W-1({y})");
    }
}

#[test]
fn guarantee_shape() {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 100.0).collect();
    let g: Vec<f64> = grid.iter().map(|&e| learned_dynkin_guarantee(e).unwrap()).collect();
    assert!(g.windows(2).all(|w| w[1] <= w[0]));
    let knee = (1.0 - 0.215) / (1.0 + 0.215);
    for (&e, &v) in grid.iter().zip(&g) {
        if e >= knee {
            assert_eq!(v, 0.215);
        }
    }
}

fn small_instances() -> Vec<Instance> {
    vec![
        Instance::new(vec![3.0, 1.0, 2.0], vec![3.0, 1.0, 2.0], 1).unwrap(),
        Instance::new(vec![3.0, 1.0, 2.0, 5.0], vec![2.0, 1.5, 2.5, 1.0], 1).unwrap(),
        Instance::new(vec![4.0, 1.0, 2.5, 3.0, 0.5], vec![1.0, 5.0, 2.0, 3.2, 0.4], 2).unwrap(),
        Instance::new(vec![1.0, 6.0, 2.0, 3.0, 5.0, 4.0], vec![1.1, 5.0, 1.5, 3.3, 6.5, 4.0], 3).unwrap(),
    ]
}

/// Monte-Carlo estimates agree with exact enumeration within 3 standard errors
/// (plus a small floor for rules whose ratio is almost deterministic).
#[test]
fn monte_carlo_matches_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for inst in small_instances() {
        let mut algs = vec![AlgorithmSpec::Kleinberg, AlgorithmSpec::TopK];
        algs.push(AlgorithmSpec::LearnedKleinberg(MultiParams::new(0.3, ErrorRule::Global).unwrap()));
        algs.push(AlgorithmSpec::LearnedKleinbergGuaranteed { switch_rule: ErrorRule::RefinedMulti });
        if inst.capacity() == 1 {
            algs.push(AlgorithmSpec::Dynkin { tau: 1.0 / E });
            algs.push(AlgorithmSpec::LearnedDynkin(ClassicalParams::new(0.313, 0.3, ErrorRule::Global).unwrap()));
            algs.push(AlgorithmSpec::LearnedDynkin(
                ClassicalParams::new(0.4, 0.5, ErrorRule::RefinedClassical).unwrap(),
            ));
            algs.push(AlgorithmSpec::ProphetThreshold { spread: 0.5 });
        }
        for a in &algs {
            let exact = exact_ratio_small(&inst, a).unwrap().ratio;
            let mc = estimate_ratio(&inst, a, 100_000, &mut rng).unwrap();
            let tol = 3.0 * mc.std_error + 1e-9;
            assert!((mc.mean - exact).abs() <= tol, "{} on n={}: mc {} exact {exact}", a.label(), inst.n(), mc.mean);
        }
    }
}

#[test]
fn dynkin_success_matches_tau_log() {
    let n = 200;
    let values: Vec<f64> = (0..n).map(|i| if i == 7 { 1000.0 } else { 1.0 + i as f64 * 1e-3 }).collect();
    let inst = Instance::new(values.clone(), values, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for tau in [0.2, 1.0 / E, 0.5] {
        let est = estimate_ratio(&inst, &AlgorithmSpec::Dynkin { tau }, 40_000, &mut rng).unwrap();
        let p = tau * (1.0 / tau).ln();
        let se = (p * (1.0 - p) / 40_000.0).sqrt();
        // Finite n: the optimum is hired with probability tau * ln(1/tau) + O(1/n).
        assert!((est.success_rate - p).abs() <= 3.0 * se + 0.01, "tau={tau}: {}", est.success_rate);
    }
}

#[test]
fn hardness_certification() {
    let mut previous = f64::INFINITY;
    for n in 2..=5 {
        let model = build_lp(n).unwrap();
        let sol = solve_lp(&model).unwrap();
        assert!(sol.residual <= 1e-9);
        assert!(sol.z <= previous + 1e-12, "z*({n}) = {} above z*({}) = {previous}", sol.z, n - 1);
        previous = sol.z;
        if n <= 4 {
            let policy = policy_from_lp(&model, &sol.values).unwrap();
            let min = error_sets(n).into_iter().map(|e| exact_policy_value(&policy, e)).fold(f64::INFINITY, f64::min);
            assert!((min - sol.z).abs() <= 1e-8, "n={n}: min_E {min} vs z* {}", sol.z);
        }
    }
}

#[test]
fn lp_policy_runs_online() {
    for n in [3, 4] {
        let model = build_lp(n).unwrap();
        let sol = solve_lp(&model).unwrap();
        let policy = policy_from_lp(&model, &sol.values).unwrap();
        for e in error_sets(n) {
            let inst = instance_family(n, &error_set_members(e), 1e3).unwrap();
            let online = exact_ratio_small(&inst, &policy).unwrap().success;
            let direct = exact_policy_value(&policy, e);
            assert!((online - direct).abs() <= 1e-8, "n={n} E={:?}", error_set_members(e));
        }
    }
}
