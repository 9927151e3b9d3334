//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::E;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secretary_core::algorithms::learned_kleinberg;
use secretary_core::analysis::{
    agkk_f, agkk_ratio, case_bound, comparison_curves, grid_search, j_closed_form, j_integral, k_closed_form,
    k_integral, overall_lower_bound, reciprocal_binomial_mean, Case, CaseBoundInput,
};
use secretary_core::generators::generate;
use secretary_core::hardness::{
    build_lp, ceiling_policy, deterministic_ceiling_check, error_set, error_sets, exact_policy_value, policy_from_lp,
    solve_lp,
};
use secretary_core::simulate::{estimate_ratio, sweep, AlgorithmConfig, ExperimentConfig, SweepResult};
use secretary_core::{
    epsilon_global, offline_opt, random_schedule, schedule_from_permutation, AlgorithmSpec, ErrorRule, GeneratorKind,
    GeneratorSpec, Instance, MultiParams,
};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Appends the elapsed time to a passing check, failing it when over `budget`.
fn within_budget(check: Check, start: Instant, budget: Duration) -> Check {
    let detail = check?;
    let took = start.elapsed();
    ensure(took < budget, format!("{detail}; {:.1}s of a {}s budget", took.as_secs_f64(), budget.as_secs()))
}

fn grid_config(generators: Vec<GeneratorKind>, ks: Vec<usize>, algorithms: Vec<AlgorithmConfig>) -> ExperimentConfig {
    ExperimentConfig {
        generators,
        epsilons: (0..=10).map(|i| f64::from(i) / 10.0).collect(),
        ks,
        n: 100,
        datasets_per_cell: 100,
        trials_per_dataset: 100,
        algorithms,
        master_seed: 2024,
    }
}

fn exactness_at_zero_error() -> Check {
    let start = Instant::now();
    let mut config = grid_config(
        GeneratorKind::ALL.to_vec(),
        vec![1, 10, 50],
        vec![
            AlgorithmConfig::LearnedDynkin { tau: vec![0.313], theta: vec![0.646], rule: ErrorRule::Global },
            AlgorithmConfig::LearnedKleinberg { theta: None, rule: ErrorRule::Global },
        ],
    );
    config.epsilons = vec![0.0];
    let result = sweep(&config).map_err(|e| e.to_string())?;
    let worst = result.rows.iter().map(|r| (r.estimate.mean - 1.0).abs()).fold(0.0, f64::max);
    let n = result.rows.len();
    let check = ensure(n == 12 && worst <= 1e-12, format!("{n} rows, max |mean - 1| = {worst:e}"));
    within_budget(check, start, Duration::from_secs(120))
}

fn dynkin_baseline() -> Check {
    let n = 100;
    let values: Vec<f64> = (0..n).map(|i| if i == 41 { 1e3 } else { 1.0 + i as f64 / n as f64 }).collect();
    let inst = Instance::new(values.clone(), values, 1).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let est =
        estimate_ratio(&inst, &AlgorithmSpec::Dynkin { tau: 1.0 / E }, 100_000, &mut rng).map_err(|e| e.to_string())?;
    let freq = est.success_rate;
    ensure((freq - 1.0 / E).abs() <= 0.01, format!("success frequency {freq:.4} vs 1/e = {:.4}", 1.0 / E))
}

fn single_choice_lower_bound() -> Check {
    let start = Instant::now();
    let config = grid_config(
        GeneratorKind::ALL.to_vec(),
        vec![1],
        vec![AlgorithmConfig::LearnedDynkin { tau: vec![0.313], theta: vec![0.646], rule: ErrorRule::Global }],
    );
    let result: SweepResult = sweep(&config).map_err(|e| e.to_string())?;
    let mut worst_margin = f64::INFINITY;
    let mut failures = 0;
    for d in &result.datasets {
        let eps = d.epsilon_hat;
        let bound = 0.215f64.max((1.0 - eps) / (1.0 + eps));
        let margin = d.estimate.mean + 3.0 * d.estimate.std_error + 0.02 - bound;
        worst_margin = worst_margin.min(margin);
        if margin < 0.0 {
            failures += 1;
        }
    }
    let check = ensure(
        failures == 0,
        format!("{} datasets, {failures} below bound, smallest margin {worst_margin:.4}", result.datasets.len()),
    );
    within_budget(check, start, Duration::from_secs(1800))
}

fn grid_search_optimum() -> Check {
    let start = Instant::now();
    let g = grid_search((0.5, 0.8), (0.2, 0.45), 0.001, 50).map_err(|e| e.to_string())?;
    let at = overall_lower_bound(0.646, 0.313, 50).map_err(|e| e.to_string())?;
    let ok = (0.215..=0.22).contains(&g.bound)
        && (g.theta - 0.646).abs() <= 0.005
        && (g.tau - 0.313).abs() <= 0.005
        && (0.215..=0.216).contains(&at);
    let check = ensure(
        ok,
        format!(
            "optimum theta={:.3} tau={:.3} bound={:.6}; bound at (0.646, 0.313) = {at:.6}",
            g.theta, g.tau, g.bound
        ),
    );
    within_budget(check, start, Duration::from_secs(600))
}

fn case_formulas() -> Check {
    let mut worst: f64 = 0.0;
    for tau in [0.1, 0.313, 0.7] {
        for m in 0..=15 {
            let j = j_integral(tau, m).map_err(|e| e.to_string())?;
            let k = k_integral(tau, m).map_err(|e| e.to_string())?;
            worst = worst.max((j - j_closed_form(tau, m)).abs()).max((k - k_closed_form(tau, m)).abs());
        }
    }
    let case_one = case_bound(Case::I, CaseBoundInput { tau: 0.313, theta: 0.646, m: 1 }).map_err(|e| e.to_string())?;
    ensure(
        worst <= 1e-9 && case_one >= 0.363,
        format!("max |quadrature - closed form| = {worst:e}; case (i) at tau=0.313 = {case_one:.6}"),
    )
}

fn multiple_choice_bound() -> Check {
    let mut schedules = 0usize;
    let mut violations = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in GeneratorKind::ALL {
        for k in [1, 10, 50] {
            for e in 0..=10 {
                let epsilon = f64::from(e) / 10.0;
                for seed in 0..4 {
                    let spec = GeneratorSpec { kind, n: 100, k, epsilon, seed };
                    let Ok(inst) = generate(&spec) else { continue };
                    let eps = epsilon_global(&inst);
                    let mut thetas = vec![0.5, 0.9];
                    thetas.push(MultiParams::guaranteed(k).theta);
                    for theta in thetas.into_iter().filter(|&t| eps <= t) {
                        let params = MultiParams::new(theta, ErrorRule::Global).map_err(|e| e.to_string())?;
                        let target = (1.0 - eps) / (1.0 + eps) * offline_opt(&inst);
                        for _ in 0..25 {
                            let s = random_schedule(inst.n(), &mut rng);
                            let value = learned_kleinberg(&inst, &s, &params).value;
                            schedules += 1;
                            if value < target * (1.0 - 1e-12) {
                                violations += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    ensure(
        schedules >= 10_000 && violations == 0,
        format!("{schedules} schedules with error <= theta, {violations} below ((1-eps)/(1+eps)) opt"),
    )
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn reciprocal_binomial_identity() -> Check {
    let mut worst: f64 = 0.0;
    for n in 0..=20 {
        for i in 1..=9 {
            let p = f64::from(i) / 10.0;
            let brute: f64 = (0..=n)
                .map(|x| binomial(n, x) * p.powi(x as i32) * (1.0 - p).powi((n - x) as i32) / (x + 1) as f64)
                .sum();
            worst = worst.max((reciprocal_binomial_mean(n, p).map_err(|e| e.to_string())? - brute).abs());
        }
    }
    ensure(worst <= 1e-12, format!("max deviation from enumeration {worst:e}"))
}

fn comparison_ratio() -> Check {
    let err = |e: secretary_core::Error| e.to_string();
    let mut robust_ok = true;
    for c in [1.0, 1.71, 3.0] {
        for (lambda, eta) in [(0.1, 0.1), (0.2, 0.5), (0.0, 0.0), (0.5, 0.9)] {
            robust_ok &= (agkk_ratio(c, lambda, eta, 1.0).map_err(err)? - 1.0 / (c * E)).abs() < 1e-15;
        }
    }
    let f1 = agkk_f(1.0).map_err(err)?;
    let c = 1.0 / (0.215 * E);
    let worst = agkk_ratio(c, 0.2, 0.3, 1.0).map_err(err)?;
    let etas: Vec<f64> = (0..=100).map(|i| f64::from(i) / 100.0).collect();
    let lambdas = [0.05, 0.1, 0.2, 0.3, 0.5];
    let rows = comparison_curves(&[1.0, 1.71, 3.0], &lambdas, &etas).map_err(err)?;
    let mut monotone = true;
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.c == b.c && a.lambda == b.lambda && b.epsilon < b.lambda {
            monotone &= b.agkk <= a.agkk;
        }
    }
    ensure(
        robust_ok && f1.abs() < 1e-7 && (worst - 0.215).abs() <= 1e-6 && monotone,
        format!(
            "robust branch ok={robust_ok}; f(1)={f1:e}; worst case at c=1/(0.215e) = {worst:.7}; monotone={monotone}"
        ),
    )
}

fn hardness_lp() -> Check {
    let err = |e: secretary_core::Error| e.to_string();
    let mut zs = Vec::new();
    let mut cert: f64 = 0.0;
    let mut timings = Vec::new();
    for n in 2..=5 {
        let start = Instant::now();
        let model = build_lp(n).map_err(err)?;
        let sol = solve_lp(&model).map_err(err)?;
        timings.push(start.elapsed());
        if n <= 4 {
            let policy = policy_from_lp(&model, &sol.values).map_err(err)?;
            let min = error_sets(n).into_iter().map(|e| exact_policy_value(&policy, e)).fold(f64::INFINITY, f64::min);
            cert = cert.max((min - sol.z).abs());
        }
        zs.push(sol.z);
    }
    let monotone = zs.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let ok = (zs[0] - 0.5).abs() <= 1e-9
        && monotone
        && cert <= 1e-8
        && timings[2] < Duration::from_secs(60)
        && timings[3] < Duration::from_secs(1800);
    let z_text: Vec<String> = zs.iter().map(|z| format!("{z:.6}")).collect();
    ensure(
        ok,
        format!(
            "z*(2..5) = [{}]; certification gap {cert:e}; n=4 {:.2}s, n=5 {:.2}s",
            z_text.join(", "),
            timings[2].as_secs_f64(),
            timings[3].as_secs_f64()
        ),
    )
}

fn deterministic_ceiling() -> Check {
    let first = exact_policy_value(&ceiling_policy([true; 3]), error_set(&[2, 3, 4]));
    let report = deterministic_ceiling_check(10.0).map_err(|e| e.to_string())?;
    let eligible = report.policies.iter().filter(|p| p.beats_quarter_on_singletons).count();
    let best = report
        .policies
        .iter()
        .filter(|p| p.beats_quarter_on_singletons)
        .map(|p| p.min_score)
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(
        (first - 0.25).abs() < 1e-15 && report.holds,
        format!(
            "hire-first-erroneous on E={{2,3,4}}: {first}; {eligible} eligible policies, best worst case {best:.6}"
        ),
    )
}

fn order_uniformity() -> Check {
    let trials = 60_000;
    let perms: Vec<Vec<usize>> =
        vec![vec![1, 2, 3], vec![1, 3, 2], vec![2, 1, 3], vec![2, 3, 1], vec![3, 1, 2], vec![3, 2, 1]];
    let index = |o: &[usize]| perms.iter().position(|p| p == o).expect("a permutation of 1..=3");
    let p = 1.0 / 6.0;
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    let expected = trials as f64 * p;

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut from_random = [0usize; 6];
    let mut from_perm = [0usize; 6];
    let mut consistent = true;
    let mut base = vec![1, 2, 3];
    for _ in 0..trials {
        let s = random_schedule(3, &mut rng);
        let mut by_time = vec![1, 2, 3];
        by_time.sort_by(|&a, &b| s.time_of(a).total_cmp(&s.time_of(b)));
        consistent &= by_time == s.order();
        from_random[index(s.order())] += 1;

        base.shuffle(&mut rng);
        let s = schedule_from_permutation(&base, &mut rng).map_err(|e| e.to_string())?;
        let mut by_time = vec![1, 2, 3];
        by_time.sort_by(|&a, &b| s.time_of(a).total_cmp(&s.time_of(b)));
        consistent &= by_time == base;
        from_perm[index(&by_time)] += 1;
    }
    let dev = from_random.iter().chain(&from_perm).map(|&c| (c as f64 - expected).abs() / sd).fold(0.0, f64::max);
    ensure(
        consistent && dev <= 3.0,
        format!("largest cell deviation {dev:.2} sd; random {from_random:?}; from permutation {from_perm:?}"),
    )
}

fn adversarial_orderings() -> Check {
    let config = grid_config(
        vec![GeneratorKind::Adversarial],
        vec![1],
        vec![
            AlgorithmConfig::LearnedDynkin { tau: vec![0.313], theta: vec![0.7], rule: ErrorRule::Global },
            AlgorithmConfig::TopK,
            AlgorithmConfig::Dynkin { tau: vec![1.0 / E] },
        ],
    );
    let result = sweep(&config).map_err(|e| e.to_string())?;
    let mut worst_vs_top: f64 = f64::INFINITY;
    let mut worst_vs_dynkin: f64 = f64::INFINITY;
    for eps in &config.epsilons {
        let mean = |name: &str| {
            result.rows.iter().find(|r| r.cell.epsilon == *eps && r.algorithm == name).map(|r| r.estimate.mean)
        };
        let (Some(ld), Some(top), Some(dk)) = (mean("learned-dynkin"), mean("top-k"), mean("dynkin")) else {
            return Err(format!("missing rows at epsilon {eps}"));
        };
        if *eps <= 0.7 {
            worst_vs_top = worst_vs_top.min(ld - top);
        } else {
            worst_vs_dynkin = worst_vs_dynkin.min(ld - dk);
        }
    }
    ensure(
        worst_vs_top >= -0.02 && worst_vs_dynkin >= -0.05,
        format!("min(learned - top-k) for eps <= 0.7: {worst_vs_top:.4}; min(learned - dynkin) for eps > 0.7: {worst_vs_dynkin:.4}"),
    )
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("exact ratio 1 at zero prediction error", exactness_at_zero_error),
        ("Dynkin success frequency near 1/e", dynkin_baseline),
        ("learned Dynkin per-dataset lower bound", single_choice_lower_bound),
        ("parameter grid search optimum", grid_search_optimum),
        ("case integrals against closed forms", case_formulas),
        ("learned Kleinberg per-instance bound", multiple_choice_bound),
        ("reciprocal binomial mean identity", reciprocal_binomial_identity),
        ("comparison ratio curves", comparison_ratio),
        ("hardness LP values and certification", hardness_lp),
        ("deterministic ceiling on four candidates", deterministic_ceiling),
        ("arrival order uniformity", order_uniformity),
        ("adversarial orderings at k = 1", adversarial_orderings),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
