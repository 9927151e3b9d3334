use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secretary_core::algorithms::{
    dynkin, kleinberg, learned_dynkin, learned_dynkin_run, learned_kleinberg, top_k_prediction, Mode,
};
use secretary_core::generators::{gen_adversarial, gen_almost_constant, gen_uniform, generate};
use secretary_core::{
    epsilon_global, epsilon_refined_classical, epsilon_refined_multi, error_of, offline_opt, random_schedule,
    schedule_from_permutation, ClassicalParams, ErrorRule, GeneratorKind, GeneratorSpec, Instance, MultiParams,
    Schedule,
};

fn instance_strategy(max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n)
        .prop_flat_map(|n| (prop::collection::vec(0.01f64..100.0, n), prop::collection::vec(0.0f64..100.0, n), 1..=n))
        .prop_map(|(v, p, k)| Instance::new(v, p, k).unwrap())
}

fn with_schedule(max_n: usize) -> impl Strategy<Value = (Instance, Schedule)> {
    (instance_strategy(max_n), any::<u64>()).prop_map(|(i, seed)| {
        let s = random_schedule(i.n(), &mut ChaCha8Rng::seed_from_u64(seed));
        (i, s)
    })
}

fn single(i: &Instance) -> Instance {
    i.with_capacity(1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn error_is_scale_invariant(a in 0.01f64..1e3, p in 0.0f64..1e3, c in 1e-3f64..1e3) {
        let e1 = error_of(a, p);
        let e2 = error_of(c * a, c * p);
        prop_assert!((e1 - e2).abs() <= 1e-12 * e1.max(1.0));
    }

    #[test]
    fn refined_errors_never_exceed_global(i in instance_strategy(12)) {
        let g = epsilon_global(&i);
        prop_assert!(epsilon_refined_classical(&i) <= g);
        prop_assert!(epsilon_refined_multi(&i) <= g);
    }

    #[test]
    fn permutation_schedule_keeps_order(perm in Just((1..=9usize).collect::<Vec<_>>()).prop_shuffle(), seed in any::<u64>()) {
        let s = schedule_from_permutation(&perm, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(s.order(), perm.as_slice());
        let times: Vec<f64> = perm.iter().map(|&i| s.time_of(i)).collect();
        prop_assert!(times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn opt_grows_with_candidates(i in instance_strategy(10), v in 0.01f64..100.0, p in 0.0f64..100.0) {
        let mut vals = i.values();
        let mut preds = i.predictions();
        vals.push(v);
        preds.push(p);
        let bigger = Instance::new(vals, preds, i.capacity()).unwrap();
        prop_assert!(offline_opt(&bigger) >= offline_opt(&i));
    }

    #[test]
    fn generators_are_reproducible_and_bounded(
        kind in prop::sample::select(GeneratorKind::ALL.to_vec()),
        n in 2usize..60,
        eps in 0.0f64..0.99,
        seed in any::<u64>(),
    ) {
        let spec = GeneratorSpec { kind, n, k: 1 + n / 4, epsilon: eps, seed };
        let a = generate(&spec).unwrap();
        prop_assert_eq!(&a, &generate(&spec).unwrap());
        match kind {
            GeneratorKind::Uniform => prop_assert!(epsilon_global(&gen_uniform(&spec).unwrap()) <= eps + 1e-12),
            GeneratorKind::Adversarial => {
                let e = epsilon_global(&gen_adversarial(&spec).unwrap());
                prop_assert!((e - eps).abs() <= 1e-12);
            }
            // Spikes are distinguishable from the 1% noise once 1/(1-eps) > 1.01.
            GeneratorKind::AlmostConstant if eps > 0.01 => {
                let i = gen_almost_constant(&spec).unwrap();
                let mut vals = i.values();
                vals.sort_by(|x, y| y.total_cmp(x));
                let spike = 1.0 / (1.0 - eps);
                let spiked: f64 = vals.iter().filter(|&&v| v >= spike).sum();
                prop_assert_eq!(vals.iter().filter(|&&v| v >= spike).count(), spec.k);
                prop_assert!((offline_opt(&i) - spiked).abs() <= 1e-12 * spiked);
            }
            GeneratorKind::AlmostConstant => {}
        }
    }

    #[test]
    fn hires_are_irrevocable_and_bounded((i, s) in with_schedule(16), theta in 0.0f64..2.0) {
        let k = i.capacity();
        let params = MultiParams::new(theta, ErrorRule::Global).unwrap();
        for o in [kleinberg(&i, &s, k, (0.0, 1.0)), learned_kleinberg(&i, &s, &params), top_k_prediction(&i, &s)] {
            prop_assert!(o.hired.len() <= k);
            let mut set = o.hired_set();
            set.dedup();
            prop_assert_eq!(set.len(), o.hired.len());
            // Hiring order follows arrival order.
            let pos: Vec<f64> = o.hired.iter().map(|&c| s.time_of(c)).collect();
            prop_assert!(pos.windows(2).all(|w| w[0] < w[1]));
        }
        let one = single(&i);
        prop_assert!(dynkin(&one, &s, 0.37).hired.len() <= 1);
    }

    #[test]
    fn rules_are_deterministic((i, s) in with_schedule(12), tau in 0.05f64..0.95, theta in 0.0f64..2.0) {
        let one = single(&i);
        let params = ClassicalParams::new(tau, theta, ErrorRule::Global).unwrap();
        prop_assert_eq!(learned_dynkin(&one, &s, &params), learned_dynkin(&one, &s, &params));
        let mp = MultiParams::new(theta, ErrorRule::RefinedMulti).unwrap();
        prop_assert_eq!(learned_kleinberg(&i, &s, &mp), learned_kleinberg(&i, &s, &mp));
    }

    #[test]
    fn infinite_threshold_is_top_prediction((i, s) in with_schedule(12), tau in 0.05f64..0.95) {
        let one = single(&i);
        for rule in [ErrorRule::Global, ErrorRule::RefinedClassical] {
            let params = ClassicalParams::new(tau, f64::INFINITY, rule).unwrap();
            prop_assert_eq!(learned_dynkin(&one, &s, &params).hired, top_k_prediction(&one, &s).hired);
        }
    }

    #[test]
    fn learned_dynkin_mode_discipline((i, s) in with_schedule(12), tau in 0.05f64..0.95, theta in 0.0f64..1.5) {
        let one = single(&i);
        let params = ClassicalParams::new(tau, theta, ErrorRule::Global).unwrap();
        let (o, state) = learned_dynkin_run(&one, &s, &params);
        if let Some(&h) = o.hired.first() {
            match state.mode {
                Mode::Prediction => prop_assert_eq!(h, one.top_predicted()),
                Mode::Secretary => prop_assert!(s.time_of(h) > tau),
            }
        }
    }

    #[test]
    fn exact_predictions_never_switch((i, s) in with_schedule(12), theta in 0.0f64..1.0) {
        let exact = Instance::new(i.values(), i.values(), i.capacity()).unwrap();
        let one = single(&exact);
        for rule in [ErrorRule::Global, ErrorRule::RefinedClassical] {
            let params = ClassicalParams::new(0.313, theta, rule).unwrap();
            let (o, state) = learned_dynkin_run(&one, &s, &params);
            prop_assert_eq!(state.mode, Mode::Prediction);
            prop_assert_eq!(o.ratio, 1.0);
        }
        for rule in [ErrorRule::Global, ErrorRule::RefinedMulti] {
            let o = learned_kleinberg(&exact, &s, &MultiParams::new(theta, rule).unwrap());
            prop_assert!((o.ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn decisions_are_scale_invariant((i, s) in with_schedule(12), c in 1e-3f64..1e3, theta in 0.0f64..1.5) {
        let j = i.scaled(c).unwrap();
        let (oi, oj) = (single(&i), single(&j));
        let cp = ClassicalParams::new(0.313, theta, ErrorRule::Global).unwrap();
        let mp = MultiParams::new(theta, ErrorRule::Global).unwrap();
        prop_assert_eq!(dynkin(&oi, &s, 0.37).hired, dynkin(&oj, &s, 0.37).hired);
        prop_assert_eq!(learned_dynkin(&oi, &s, &cp).hired, learned_dynkin(&oj, &s, &cp).hired);
        prop_assert_eq!(kleinberg(&i, &s, i.capacity(), (0.0, 1.0)).hired, kleinberg(&j, &s, j.capacity(), (0.0, 1.0)).hired);
        prop_assert_eq!(learned_kleinberg(&i, &s, &mp).hired, learned_kleinberg(&j, &s, &mp).hired);
        prop_assert_eq!(top_k_prediction(&i, &s).hired, top_k_prediction(&j, &s).hired);
    }
}
