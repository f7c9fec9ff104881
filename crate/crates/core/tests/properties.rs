//! Property tests for the invariants of the library. States, Hamiltonians and
//! channels are drawn from seeded generators so failures shrink to a seed.

use asymrate::asymptotics::Rate;
use asymrate::channels::{is_covariant, random_covariant_channel};
use asymrate::monotone::mc_function;
use asymrate::operator::{
    dephase, read_matrix_json, tensor_power, time_evolve, trace_distance, variance, write_matrix_json, DensityMatrix,
    HermitianOperator,
};
use asymrate::random::{random_hermitian, random_mixed_state, random_pure_state, seeded_rng};
use asymrate::sequences::{
    convolve, default_lambda_cap, energy_distribution, f_max, f_min, integer_hamiltonian, inverse_sequence, poisson,
    poisson_to_tail,
};
use asymrate::smoothing::{smooth_skew_info, SmoothingOptions};
use asymrate::variance_bound::{g, g_inverse};
use asymrate::{qfi, skew_info, MonotoneFunction};
use proptest::prelude::*;
use rand::Rng;

fn builtin(k: usize) -> MonotoneFunction {
    match k % 4 {
        0 => MonotoneFunction::sld(),
        1 => MonotoneFunction::wyd(0.2).unwrap(),
        2 => MonotoneFunction::wyd(0.5).unwrap(),
        _ => MonotoneFunction::wyd(0.8).unwrap(),
    }
}

fn integer_levels(d: usize, seed: u64) -> HermitianOperator {
    let mut rng = seeded_rng(seed ^ 0x5eed);
    let mut levels: Vec<i64> = (0..d).map(|_| rng.random_range(0..3)).collect();
    levels[0] = 0;
    integer_hamiltonian(&levels)
}

fn fast_opts(seed: u64) -> SmoothingOptions {
    SmoothingOptions { restarts: 2, max_iterations: 600, seed, ..SmoothingOptions::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pure_state_skew_equals_variance(seed in any::<u64>(), d in 2usize..6, k in 0usize..4) {
        let mut rng = seeded_rng(seed);
        let h = random_hermitian(d, &mut rng);
        let psi = random_pure_state(d, &mut rng);
        let i = skew_info(&psi, &h, &builtin(k)).unwrap().value;
        prop_assert!((i - variance(&psi, &h).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn sld_sandwich_and_variance_cap(seed in any::<u64>(), d in 2usize..6, k in 1usize..4) {
        let mut rng = seeded_rng(seed);
        let h = random_hermitian(d, &mut rng);
        let rho = random_mixed_state(d, &mut rng);
        let f = builtin(k);
        let i_f = skew_info(&rho, &h, &f).unwrap().value;
        let i_sld = skew_info(&rho, &h, &MonotoneFunction::sld()).unwrap().value;
        prop_assert!(i_f >= -1e-12);
        prop_assert!(i_f <= i_sld + 1e-10);
        prop_assert!(i_sld <= i_f / (2.0 * f.f0()) + 1e-10);
        prop_assert!(i_sld <= variance(&rho, &h).unwrap() + 1e-10);
    }

    #[test]
    fn skew_is_convex(seed in any::<u64>(), d in 2usize..5, k in 0usize..4, w in 0.0f64..1.0) {
        let mut rng = seeded_rng(seed);
        let h = random_hermitian(d, &mut rng);
        let a = random_mixed_state(d, &mut rng);
        let b = random_mixed_state(d, &mut rng);
        let f = builtin(k);
        let mix = skew_info(&a.mix(&b, w).unwrap(), &h, &f).unwrap().value;
        let chord = (1.0 - w) * skew_info(&a, &h, &f).unwrap().value + w * skew_info(&b, &h, &f).unwrap().value;
        prop_assert!(mix <= chord + 1e-10);
    }

    #[test]
    fn time_evolution_leaves_skew_unchanged(seed in any::<u64>(), d in 2usize..5, k in 0usize..4, t in -5.0f64..5.0) {
        let mut rng = seeded_rng(seed);
        let h = random_hermitian(d, &mut rng);
        let rho = random_mixed_state(d, &mut rng);
        let f = builtin(k);
        let before = skew_info(&rho, &h, &f).unwrap().value;
        let after = skew_info(&time_evolve(&rho, &h, t).unwrap(), &h, &f).unwrap().value;
        prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0));
    }

    #[test]
    fn dephased_states_have_zero_skew(seed in any::<u64>(), d in 2usize..5, k in 0usize..4) {
        let h = integer_levels(d, seed);
        let rho = random_mixed_state(d, &mut seeded_rng(seed));
        let sym = dephase(&rho, &h).unwrap();
        prop_assert!(skew_info(&sym, &h, &builtin(k)).unwrap().value.abs() <= 1e-10);
    }

    #[test]
    fn skew_is_additive_on_products(seed in any::<u64>(), k in 0usize..4) {
        let mut rng = seeded_rng(seed);
        let (ha, hb) = (random_hermitian(2, &mut rng), random_hermitian(3, &mut rng));
        let (a, b) = (random_mixed_state(2, &mut rng), random_mixed_state(3, &mut rng));
        let f = builtin(k);
        let h = ha.tensor(&HermitianOperator::identity(3)).unwrap().matrix()
            + HermitianOperator::identity(2).tensor(&hb).unwrap().matrix();
        let h = HermitianOperator::new(h).unwrap();
        let joint = skew_info(&a.tensor(&b).unwrap(), &h, &f).unwrap().value;
        let sum = skew_info(&a, &ha, &f).unwrap().value + skew_info(&b, &hb, &f).unwrap().value;
        prop_assert!((joint - sum).abs() <= 1e-9 * sum.max(1.0));
    }

    #[test]
    fn covariant_channels_do_not_increase_skew(
        seed in any::<u64>(), di in 2usize..5, d_out in 2usize..5, anc in 1usize..4, k in 0usize..4,
    ) {
        let (hi, ho) = (integer_levels(di, seed), integer_levels(d_out, seed.wrapping_add(1)));
        let Ok(ch) = random_covariant_channel(&hi, &ho, anc, seed) else { return Ok(()) };
        prop_assert!(is_covariant(&ch, &hi, &ho, 1e-9).unwrap().covariant);
        prop_assert!(ch.completeness_deviation() <= 1e-9);
        let rho = random_mixed_state(di, &mut seeded_rng(seed));
        let f = builtin(k);
        let out = ch.apply(&rho).unwrap();
        prop_assert!(skew_info(&out, &ho, &f).unwrap().value <= skew_info(&rho, &hi, &f).unwrap().value + 1e-9);
    }

    #[test]
    fn monotone_functions_are_symmetric(k in 0usize..4, x in 1e-3f64..1e3) {
        let f = builtin(k);
        prop_assert!((f.eval(x) - x * f.eval(1.0 / x)).abs() <= 1e-9 * f.eval(x).max(1.0));
        prop_assert!(f.eval(x) <= MonotoneFunction::sld().eval(x) + 1e-12);
        prop_assert!(mc_function(&f, x, 1.0).unwrap() >= -1e-12);
    }

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>(), d in 1usize..6) {
        let h = random_hermitian(d, &mut seeded_rng(seed));
        let mut buf = Vec::new();
        write_matrix_json(h.matrix(), &mut buf).unwrap();
        let back = read_matrix_json(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, h.matrix());
    }

    #[test]
    fn poisson_laws_add_under_convolution(a in 0.05f64..4.0, b in 0.05f64..4.0) {
        let lhs = convolve(&poisson_to_tail(a, 1e-14), &poisson_to_tail(b, 1e-14));
        let rhs = poisson_to_tail(a + b, 1e-14);
        for n in 0..=rhs.end().min(lhs.end()) {
            prop_assert!((lhs.get(n) - rhs.get(n)).abs() <= 1e-10);
        }
    }

    #[test]
    fn poisson_inverse_has_negative_parameter(lam in 0.05f64..3.0) {
        let inv = inverse_sequence(&poisson(lam, 40), 40).unwrap();
        let expect = poisson(-lam, 40);
        for n in 0..=40 {
            prop_assert!((inv.get(n) - expect.get(n)).abs() <= 1e-8 * expect.get(n).abs().max(1.0));
        }
    }

    #[test]
    fn g_inverse_undoes_g(x in 0.0f64..6.0) {
        prop_assert!((g_inverse(g(x)).unwrap() - x).abs() <= 1e-7);
    }

    #[test]
    fn rate_copies_is_a_ceiling(num in 1u64..50, den in 1u64..50, m in 0usize..1000) {
        let r = Rate::new(num, den).unwrap();
        let c = r.copies(m);
        prop_assert!(c as u128 * den as u128 >= num as u128 * m as u128);
        prop_assert!(c == 0 || ((c - 1) as u128) * (den as u128) < num as u128 * m as u128);
    }

    #[test]
    fn qfi_lies_between_fisher_extremes(seed in any::<u64>(), d in 2usize..5) {
        let h = integer_levels(d, seed);
        let psi = random_pure_state(d, &mut seeded_rng(seed));
        let p = energy_distribution(&psi, &h).unwrap();
        let cap = default_lambda_cap(&p);
        let f = qfi(&psi, &h).unwrap();
        prop_assert!(f_min(&p, cap).unwrap() <= f + 1e-6);
        prop_assert!(f <= f_max(&p, cap).unwrap().value() + 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn smoothing_is_feasible_and_below_unsmoothed(seed in any::<u64>(), d in 2usize..4, eps in 0.02f64..0.3) {
        let mut rng = seeded_rng(seed);
        let h = random_hermitian(d, &mut rng);
        let rho = random_mixed_state(d, &mut rng);
        let f = MonotoneFunction::sld();
        let r = smooth_skew_info(&rho, &h, &f, eps, &fast_opts(seed)).unwrap();
        prop_assert!(r.value <= skew_info(&rho, &h, &f).unwrap().value + 1e-12);
        prop_assert!(r.value >= -1e-12);
        prop_assert!(trace_distance(&rho, &r.witness).unwrap() <= eps + 1e-9);
        prop_assert!((skew_info(&r.witness, &h, &f).unwrap().value - r.value).abs() <= 1e-9);
    }

    #[test]
    fn smoothing_decreases_with_epsilon(seed in any::<u64>(), eps in 0.02f64..0.15) {
        let mut rng = seeded_rng(seed);
        let h = random_hermitian(3, &mut rng);
        let rho = random_mixed_state(3, &mut rng);
        let f = MonotoneFunction::wyd(0.5).unwrap();
        let small = smooth_skew_info(&rho, &h, &f, eps, &fast_opts(seed)).unwrap().value;
        let large = smooth_skew_info(&rho, &h, &f, 2.0 * eps, &fast_opts(seed)).unwrap().value;
        prop_assert!(large <= small + 1e-6);
    }

    #[test]
    fn tensor_power_skew_scales_with_copies(seed in any::<u64>(), k in 0usize..4) {
        let mut rng = seeded_rng(seed);
        let h = integer_levels(2, seed);
        let rho = random_mixed_state(2, &mut rng);
        let f = builtin(k);
        let h3 = asymrate::operator::iid_hamiltonian(&h, 3).unwrap();
        let joint = skew_info(&tensor_power(&rho, 3).unwrap(), &h3, &f).unwrap().value;
        let one = skew_info(&rho, &h, &f).unwrap().value;
        prop_assert!((joint - 3.0 * one).abs() <= 1e-9 * joint.max(1.0));
    }
}

#[test]
fn pure_density_matrix_is_rank_one() {
    let mut rng = seeded_rng(1);
    let psi = random_pure_state(4, &mut rng);
    assert!(psi.is_pure(1e-10));
    let rho: DensityMatrix = random_mixed_state(4, &mut rng);
    assert!(!rho.is_pure(1e-10));
}
