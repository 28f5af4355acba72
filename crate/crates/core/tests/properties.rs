use itertools::Itertools;
use polysel::lagrange::eval_monomial;
use polysel::oracle::{
    brute_force_feasible, gen_coefficients, gen_grid, gen_instance, ConstraintSystem, InstanceKind,
};
use polysel::selection::membership_violation;
use polysel::{
    affine_condition, check_selection, check_separation, coefficients, hyers_ulam_epsilon,
    is_n_concave, is_n_convex, separate, solve_selection, stabilize, witness_for_tuple, Config,
    Interval, IntervalFn, Nodes, SampledFn, Tuple,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kind(k: u8) -> InstanceKind {
    [
        InstanceKind::Feasible,
        InstanceKind::Infeasible,
        InstanceKind::Random,
    ][k as usize % 3]
}

fn shrink(f: &IntervalFn, rng: &mut ChaCha8Rng) -> IntervalFn {
    let ivs = f
        .intervals()
        .iter()
        .map(|iv| {
            let a = iv.lo + rng.gen::<f64>() * iv.width();
            let b = iv.lo + rng.gen::<f64>() * iv.width();
            Interval::new(a.min(b), a.max(b)).unwrap()
        })
        .collect();
    IntervalFn::new(f.grid().clone(), ivs).unwrap()
}

fn widen(f: &IntervalFn, rng: &mut ChaCha8Rng) -> IntervalFn {
    let ivs = f
        .intervals()
        .iter()
        .map(|iv| Interval::new(iv.lo - rng.gen::<f64>(), iv.hi + rng.gen::<f64>()).unwrap())
        .collect();
    IntervalFn::new(f.grid().clone(), ivs).unwrap()
}

fn noisy_polynomial(seed: u64, m: usize, n: usize, delta: f64) -> SampledFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = gen_grid(&mut rng, m, -1.0, 1.0);
    let w = gen_coefficients(&mut rng, n, 2.0);
    let values = grid
        .xs()
        .iter()
        .map(|&x| eval_monomial(&w, x) + rng.gen_range(-delta..=delta))
        .collect();
    SampledFn::new(grid, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn feasibility_is_monotone_under_inclusion(
        seed in 0u64..1_000_000, n in 1usize..=3, extra in 0usize..5, k in 0u8..3,
    ) {
        let cfg = Config::default();
        let f = gen_instance(seed, n + 2 + extra, n, kind(k));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let feasible = check_selection(&f, n, &cfg).unwrap().feasible;
        if feasible {
            let g = widen(&f, &mut rng);
            prop_assert!(f.is_subset_of(&g));
            prop_assert!(check_selection(&g, n, &cfg).unwrap().feasible);
        } else {
            let g = shrink(&f, &mut rng);
            prop_assert!(g.is_subset_of(&f));
            prop_assert!(!check_selection(&g, n, &cfg).unwrap().feasible);
        }
    }

    #[test]
    fn solver_witness_lies_in_the_tube(
        seed in 0u64..1_000_000, n in 0usize..=4, extra in 0usize..6,
    ) {
        let cfg = Config::default();
        let f = gen_instance(seed, n + 2 + extra, n, InstanceKind::Feasible);
        let report = solve_selection(&f, n, &cfg).unwrap();
        prop_assert!(report.feasible);
        let w = report.witness.unwrap();
        prop_assert!(w.degree_bound() <= n);
        prop_assert!(membership_violation(&f, &w) <= cfg.acceptance);
    }

    #[test]
    fn oracle_witness_lies_in_the_tube(seed in 0u64..1_000_000, n in 1usize..=3, k in 0u8..3) {
        let cfg = Config::default();
        let f = gen_instance(seed, n + 4, n, kind(k));
        let cs = ConstraintSystem::from_interval_fn(&f, n);
        match brute_force_feasible(&cs, cfg.decision).unwrap() {
            Some(a) => {
                prop_assert_eq!(a.len(), n + 1);
                for (x, iv) in f.xs().iter().zip(f.intervals()) {
                    prop_assert!(iv.contains(eval_monomial(&a, *x), cfg.acceptance));
                }
            }
            None => prop_assert!(!check_selection(&f, n, &cfg).unwrap().feasible),
        }
    }

    #[test]
    fn single_tuple_witness_meets_every_interval(seed in 0u64..1_000_000, n in 1usize..=4) {
        let cfg = Config::default();
        let f = gen_instance(seed, n + 2, n, InstanceKind::Feasible);
        let t = Tuple::new((0..n + 2).collect(), n + 2).unwrap();
        let w = witness_for_tuple(&f, &t, &cfg).unwrap();
        prop_assert!(membership_violation(&f, &w) <= cfg.acceptance);
    }

    #[test]
    fn parallel_scan_reports_the_same_certificate(
        seed in 0u64..1_000_000, n in 1usize..=3, k in 0u8..3,
    ) {
        let serial = Config::default();
        let parallel = serial.with_parallel(true);
        let f = gen_instance(seed, 10, n, kind(k));
        prop_assert_eq!(
            check_selection(&f, n, &serial).unwrap(),
            check_selection(&f, n, &parallel).unwrap()
        );
        prop_assert_eq!(
            solve_selection(&f, n, &serial).unwrap(),
            solve_selection(&f, n, &parallel).unwrap()
        );
    }

    #[test]
    fn separation_check_and_solver_agree(seed in 0u64..1_000_000, n in 1usize..=3, k in 0u8..3) {
        let cfg = Config::default();
        let tube = gen_instance(seed, n + 5, n, kind(k));
        let lo = tube.intervals().iter().map(|iv| iv.lo).collect();
        let hi = tube.intervals().iter().map(|iv| iv.hi).collect();
        let f = SampledFn::new(tube.grid().clone(), lo).unwrap();
        let g = SampledFn::new(tube.grid().clone(), hi).unwrap();
        let checked = check_separation(&f, &g, n, &cfg).unwrap();
        let solved = separate(&f, &g, n, &cfg).unwrap();
        prop_assert_eq!(checked.separable, solved.separable);
        prop_assert_eq!(solved.separable, check_selection(&tube, n, &cfg).unwrap().feasible);
        if n == 1 {
            prop_assert_eq!(affine_condition(&f, &g, &cfg).unwrap(), checked.separable);
        }
    }

    #[test]
    fn polynomials_are_convex_and_concave_of_their_degree(
        seed in 0u64..1_000_000, n in 1usize..=4, extra in 0usize..6,
    ) {
        let cfg = Config::default();
        let f = noisy_polynomial(seed, n + 2 + extra, n, 0.0);
        prop_assert!(is_n_convex(&f, n, &cfg).unwrap().holds);
        prop_assert!(is_n_concave(&f, n, &cfg).unwrap().holds);
        prop_assert!(hyers_ulam_epsilon(&f, n, &cfg).unwrap() <= 1e-9);
    }

    #[test]
    fn epsilon_is_bounded_by_the_noise(
        seed in 0u64..1_000_000, n in 1usize..=3, extra in 0usize..5, delta in 0.0f64..1.0,
    ) {
        let cfg = Config::default();
        let f = noisy_polynomial(seed, n + 2 + extra, n, delta);
        let xs = f.xs();
        let mut amplification = 0.0f64;
        for idx in (0..xs.len()).combinations(n + 2) {
            let rest = Nodes::new(idx[1..].iter().map(|&i| xs[i]).collect()).unwrap();
            let l = coefficients(xs[idx[0]], &rest);
            amplification = amplification.max(1.0 + l.iter().map(|c| c.abs()).sum::<f64>());
        }
        let eps = hyers_ulam_epsilon(&f, n, &cfg).unwrap();
        prop_assert!(eps <= delta * amplification + 1e-9, "eps {} > {}", eps, delta * amplification);
    }

    #[test]
    fn stabilized_polynomial_stays_within_half_epsilon(
        seed in 0u64..1_000_000, n in 1usize..=3, extra in 0usize..5, delta in 0.0f64..1.0,
    ) {
        let cfg = Config::default();
        let f = noisy_polynomial(seed, n + 2 + extra, n, delta);
        let eps = hyers_ulam_epsilon(&f, n, &cfg).unwrap();
        let w = stabilize(&f, n, eps, &cfg).unwrap();
        for (&x, &y) in f.xs().iter().zip(f.values()) {
            prop_assert!((w.eval(x) - y).abs() <= eps / 2.0 + cfg.acceptance);
        }
    }
}

#[test]
fn generated_kinds_match_the_oracle() {
    let cfg = Config::default();
    for seed in 0..60 {
        let f = gen_instance(seed, 7, 2, InstanceKind::Feasible);
        assert!(
            brute_force_feasible(&ConstraintSystem::from_interval_fn(&f, 2), cfg.decision)
                .unwrap()
                .is_some()
        );
        let g = gen_instance(seed, 7, 2, InstanceKind::Infeasible);
        assert!(
            brute_force_feasible(&ConstraintSystem::from_interval_fn(&g, 2), cfg.decision)
                .unwrap()
                .is_none()
        );
    }
}
