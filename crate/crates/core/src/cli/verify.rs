//! Invariant suites behind `asymrate verify`. Each invariant reports its
//! worst measured violation against a tolerance; it passes when
//! `measured ≤ tolerance`, and `slack = tolerance − measured`.

use rand::Rng;
use serde::Serialize;

use crate::asymptotics::{estimate_rates, local_minimum_check, Rate, StateFamily};
use crate::channels::{is_covariant, random_covariant_channel, random_unitary_channel, QuantumChannel};
use crate::error::{Error, Result};
use crate::monotone::{validate_standard_monotone, MonotoneFunction};
use crate::operator::{dephase, trace_distance, variance, DensityMatrix, HermitianOperator};
use crate::random::{haar_unitary, random_hermitian, random_mixed_state, random_pure_state, seeded_rng};
use crate::reference::{coherence_bit, qutrit_hamiltonian, qutrit_mixture, sld_mixture_closed_form, wyd_mixture_closed_form};
use crate::sequences::{
    convolve, energy_distribution, f_max, f_min, default_lambda_cap, inverse_sequence, poisson, poisson_to_tail,
    state_with_distribution, EnergyDistribution, IntSequence,
};
use crate::skew::{qfi, skew_info};
use crate::smoothing::{brute_force_smooth, skew_gradient, skew_gradient_fd, smooth_skew_info, SmoothingOptions};
use crate::variance_bound::{g, g_inverse, gamma, verify_variance_bound};

pub const SUITES: [&str; 5] = ["skew", "smooth", "channels", "sequences", "rates"];

#[derive(Debug, Clone, Serialize)]
pub struct Invariant {
    pub suite: String,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub slack: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub count: usize,
    pub passed: bool,
    pub invariants: Vec<Invariant>,
}

/// Options for [`run_suite`].
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Adds a non-covariant channel to the set checked for covariance.
    pub inject_noncovariant: bool,
}

struct Collector {
    suite: &'static str,
    out: Vec<Invariant>,
}

impl Collector {
    fn push(&mut self, name: &str, measured: f64, tolerance: f64) {
        let measured = if measured.is_nan() { f64::INFINITY } else { measured };
        self.out.push(Invariant {
            suite: self.suite.into(),
            name: name.into(),
            measured,
            tolerance,
            slack: tolerance - measured,
            passed: measured <= tolerance,
        });
    }
}

/// Runs one suite by name, or every suite for `all`.
pub fn run_suite(name: &str, opts: VerifyOptions) -> Result<VerifyReport> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite '{other}' (expected one of {} or all)",
                SUITES.join(", ")
            )))
        }
    };
    let mut invariants = Vec::new();
    for s in names {
        let mut c = Collector { suite: SUITES.iter().find(|&&x| x == s).unwrap(), out: Vec::new() };
        match s {
            "skew" => skew_suite(&mut c, opts)?,
            "smooth" => smooth_suite(&mut c, opts)?,
            "channels" => channels_suite(&mut c, opts)?,
            "sequences" => sequences_suite(&mut c, opts)?,
            _ => rates_suite(&mut c, opts)?,
        }
        invariants.extend(c.out);
    }
    Ok(VerifyReport {
        suite: name.into(),
        count: invariants.len(),
        passed: invariants.iter().all(|i| i.passed),
        invariants,
    })
}

fn regular_builtins() -> Vec<MonotoneFunction> {
    vec![
        MonotoneFunction::sld(),
        MonotoneFunction::wyd(0.1).unwrap(),
        MonotoneFunction::wyd(0.3).unwrap(),
        MonotoneFunction::wyd(0.5).unwrap(),
    ]
}

fn value(rho: &DensityMatrix, h: &HermitianOperator, f: &MonotoneFunction) -> Result<f64> {
    Ok(skew_info(rho, h, f)?.value)
}

fn skew_suite(c: &mut Collector, opts: VerifyOptions) -> Result<()> {
    let mut rng = seeded_rng(opts.seed);
    let fs = regular_builtins();
    let sld = MonotoneFunction::sld();
    let (mut pure, mut sandwich, mut qfi_gap, mut var_gap, mut convex, mut unitary) = (0f64, 0f64, 0f64, 0f64, 0f64, 0f64);
    for k in 0..40 {
        let d = 2 + k % 4;
        let h = random_hermitian(d, &mut rng);
        let psi = random_pure_state(d, &mut rng);
        let rho = random_mixed_state(d, &mut rng);
        let sigma = random_mixed_state(d, &mut rng);
        let var_psi = variance(&psi, &h)?;
        let i_sld = value(&rho, &h, &sld)?;
        qfi_gap = qfi_gap.max((qfi(&rho, &h)? - 4.0 * i_sld).abs());
        let u = haar_unitary(d, &mut rng);
        let hu = h.conjugate_by(&u.adjoint());
        let rho_u = DensityMatrix::new(&u * rho.matrix() * u.adjoint())?;
        let w: f64 = rng.random();
        let mix = rho.mix(&sigma, 1.0 - w)?;
        for f in &fs {
            pure = pure.max((value(&psi, &h, f)? - var_psi).abs());
            let i_f = value(&rho, &h, f)?;
            sandwich = sandwich.max(i_f - i_sld).max(i_sld - i_f / (2.0 * f.f0()));
            var_gap = var_gap.max(i_f - variance(&rho, &h)?);
            let lhs = value(&mix, &h, f)?;
            convex = convex.max(lhs - w * i_f - (1.0 - w) * value(&sigma, &h, f)?);
            unitary = unitary.max((value(&rho_u, &hu, f)? - i_f).abs());
        }
    }
    c.push("pure_state_equals_variance", pure, 1e-8);
    c.push("sld_sandwich", sandwich, 1e-9);
    c.push("qfi_is_four_sld", qfi_gap, 1e-9);
    c.push("bounded_by_variance", var_gap, 1e-9);
    c.push("convex_in_state", convex, 1e-9);
    c.push("unitary_covariance", unitary, 1e-9);

    let mut sym = 0f64;
    for d in 2..=5 {
        let levels: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        let h = HermitianOperator::from_real_diagonal(&levels);
        let rho = dephase(&random_mixed_state(d, &mut rng), &h)?;
        for f in &fs {
            sym = sym.max(value(&rho, &h, f)?.abs());
        }
    }
    c.push("symmetric_states_vanish", sym, 1e-12);

    let h3 = qutrit_hamiltonian();
    let (mut sld_err, mut wyd_err) = (0f64, 0f64);
    for k in 1..10 {
        let q = k as f64 / 10.0;
        let rho = qutrit_mixture(q)?;
        sld_err = sld_err.max((value(&rho, &h3, &sld)? - sld_mixture_closed_form(q)).abs());
        for p in [0.1, 0.3, 0.5] {
            let f = MonotoneFunction::wyd(p)?;
            wyd_err = wyd_err.max((value(&rho, &h3, &f)? - wyd_mixture_closed_form(q, p)).abs());
        }
    }
    c.push("qutrit_sld_closed_form", sld_err, 1e-10);
    c.push("qutrit_wyd_closed_form", wyd_err, 1e-9);

    let mut failed = 0.0;
    for f in fs.iter().chain([&MonotoneFunction::rld()]) {
        if !validate_standard_monotone(f, 1000)?.all_passed() {
            failed += 1.0;
        }
    }
    c.push("builtin_standard_monotone_conditions", failed, 0.0);
    Ok(())
}

fn smooth_suite(c: &mut Collector, opts: VerifyOptions) -> Result<()> {
    let mut rng = seeded_rng(opts.seed.wrapping_add(1));
    let sopts = SmoothingOptions { restarts: 3, seed: opts.seed, ..Default::default() };
    let sld = MonotoneFunction::sld();
    let wyd = MonotoneFunction::wyd(0.3)?;
    let (mut below, mut eps_mono, mut oracle, mut feasible) = (0f64, 0f64, 0f64, 0f64);
    let h2 = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
    for k in 0..4 {
        let rho = random_mixed_state(2, &mut rng);
        let f = if k % 2 == 0 { &sld } else { &wyd };
        let base = value(&rho, &h2, f)?;
        let mut prev = base;
        for eps in [0.05, 0.1, 0.2] {
            let r = smooth_skew_info(&rho, &h2, f, eps, &sopts)?;
            below = below.max(r.value - base);
            eps_mono = eps_mono.max(r.value - prev);
            prev = r.value;
            oracle = oracle.max((r.value - brute_force_smooth(&rho, &h2, f, eps, 400)?).abs());
            let w = r.witness.eig().eigenvalues;
            let trace: f64 = w.iter().sum();
            feasible = feasible
                .max(trace_distance(&rho, &r.witness)? - eps)
                .max(-w[0])
                .max((trace - 1.0).abs());
        }
    }
    c.push("smoothing_below_unsmoothed", below, 1e-9);
    c.push("nonincreasing_in_epsilon", eps_mono, 1e-3);
    c.push("optimizer_matches_qubit_oracle", oracle, 2e-3);
    c.push("witness_in_ball", feasible, 1e-9);

    let mut grad = 0f64;
    for d in [2, 3, 4] {
        let rho = random_mixed_state(d, &mut rng);
        let h = random_hermitian(d, &mut rng);
        for f in [&sld, &wyd] {
            let (_, a) = skew_gradient(rho.matrix(), h.matrix(), f);
            let (_, b) = skew_gradient_fd(rho.matrix(), h.matrix(), f, 1e-5);
            grad = grad.max((&a - &b).norm() / b.norm().max(1e-12));
        }
    }
    c.push("analytic_gradient_matches_differences", grad, 1e-4);
    Ok(())
}

fn random_levels<R: Rng>(d: usize, rng: &mut R) -> HermitianOperator {
    let mut levels: Vec<f64> = (0..d).map(|_| rng.random_range(0..3) as f64).collect();
    levels[0] = 0.0;
    HermitianOperator::from_real_diagonal(&levels)
}

fn channels_suite(c: &mut Collector, opts: VerifyOptions) -> Result<()> {
    let mut rng = seeded_rng(opts.seed.wrapping_add(2));
    let fs = regular_builtins();
    let mut cases: Vec<(QuantumChannel, HermitianOperator, HermitianOperator)> = Vec::new();
    let mut k = 0u64;
    while cases.len() < 20 {
        k += 1;
        let (di, d_out) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let (hi, ho) = (random_levels(di, &mut rng), random_levels(d_out, &mut rng));
        let anc = rng.random_range(1..=3);
        if let Ok(ch) = random_covariant_channel(&hi, &ho, anc, opts.seed.wrapping_mul(1000) + k) {
            cases.push((ch, hi, ho));
        }
    }
    if opts.inject_noncovariant {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]);
        cases.push((random_unitary_channel(3, opts.seed), h.clone(), h));
    }
    let (mut residual, mut completeness, mut mono) = (0f64, 0f64, 0f64);
    for (ch, hi, ho) in &cases {
        residual = residual.max(is_covariant(ch, hi, ho, 1e-9)?.residual);
        completeness = completeness.max(ch.completeness_deviation());
        for _ in 0..3 {
            let rho = random_mixed_state(ch.dim_in(), &mut rng);
            let out = ch.apply(&rho)?;
            for f in &fs {
                mono = mono.max(value(&out, ho, f)? - value(&rho, hi, f)?);
            }
        }
    }
    c.push("covariance_residual", residual, 1e-9);
    c.push("trace_preserving", completeness, 1e-9);
    c.push("skew_monotone_under_covariant_channels", mono, 1e-8);

    let h2 = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
    let mut smooth_mono = 0f64;
    for j in 0..4 {
        let ch = random_covariant_channel(&h2, &h2, 2, opts.seed.wrapping_add(500 + j))?;
        let rho = random_mixed_state(2, &mut rng);
        let out = ch.apply(&rho)?;
        let f = MonotoneFunction::sld();
        let a = brute_force_smooth(&out, &h2, &f, 0.1, 300)?;
        let b = brute_force_smooth(&rho, &h2, &f, 0.1, 300)?;
        smooth_mono = smooth_mono.max(a - b);
    }
    c.push("smoothed_monotone_under_covariant_channels", smooth_mono, 1e-3);

    let mut deph = 0f64;
    for d in 2..=4 {
        let h = random_levels(d, &mut rng);
        let rho = QuantumChannel::dephasing(&h).apply(&random_mixed_state(d, &mut rng))?;
        for f in &fs {
            deph = deph.max(value(&rho, &h, f)?.abs());
        }
    }
    c.push("dephasing_removes_skew", deph, 1e-12);
    Ok(())
}

fn max_diff(a: &IntSequence, b: &IntSequence) -> f64 {
    let lo = a.offset.min(b.offset);
    let hi = a.end().min(b.end());
    (lo..=hi).map(|n| (a.get(n) - b.get(n)).abs()).fold(0.0, f64::max)
}

fn sequences_suite(c: &mut Collector, opts: VerifyOptions) -> Result<()> {
    let mut rng = seeded_rng(opts.seed.wrapping_add(3));
    let mut conv = 0f64;
    for (a, b) in [(0.5, 1.5), (1.0, 2.0), (0.3, 4.2)] {
        let pa = poisson_to_tail(a, 1e-14);
        let pb = poisson_to_tail(b, 1e-14);
        conv = conv.max(max_diff(&convolve(&pa, &pb), &poisson_to_tail(a + b, 1e-14)));
    }
    c.push("poisson_convolution", conv, 1e-9);

    let mut inv = 0f64;
    for lam in [0.5, 1.0, 2.0] {
        let n = 40;
        let q = inverse_sequence(&poisson(lam, n), n as usize)?;
        inv = inv.max(max_diff(&q, &poisson(-lam, n)));
    }
    c.push("poisson_inverse", inv, 1e-8);

    let mut ginv = 0f64;
    for k in 0..=40 {
        let x = k as f64 * 0.1;
        ginv = ginv.max((g_inverse(g(x))? - x).abs());
    }
    c.push("g_inverse_roundtrip", ginv, 1e-7);

    let gammas: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|&e| gamma(1.0, e)).collect::<Result<_>>()?;
    let rising = gammas.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    c.push("gamma_decreasing_below_0.01", rising.max(gammas[3] - 1e-2), 0.0);

    let mut bound_fail = 0.0;
    for _ in 0..20 {
        let (lambda, m) = (0.25, 40);
        let p = poisson_to_tail(lambda * m as f64, 1e-15);
        let mut v = p.values.clone();
        let mass: f64 = rng.random_range(0.0..0.004);
        let from = rng.random_range(5..15usize);
        let to = rng.random_range(0..v.len());
        let moved = mass.min(v[from]);
        v[from] -= moved;
        v[to] += moved;
        let q = EnergyDistribution::new(IntSequence::new(0, v, p.tail_bound))?;
        if !verify_variance_bound(&q, lambda, m, 0.01)?.holds {
            bound_fail += 1.0;
        }
    }
    c.push("variance_bound_on_perturbed_poisson", bound_fail, 0.0);

    let mut sandwich = 0f64;
    for _ in 0..8 {
        let n = rng.random_range(2..=4);
        let mut probs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.05).collect();
        let s: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= s);
        let (psi, h) = state_with_distribution(&probs)?;
        let p = energy_distribution(&psi, &h)?;
        let cap = default_lambda_cap(&p);
        let f = qfi(&psi, &h)?;
        sandwich = sandwich.max(f_min(&p, cap)? - f).max(f - f_max(&p, cap)?.value());
    }
    c.push("fisher_sandwich", sandwich, 1e-6);

    let mu = 0.5;
    let trunc = poisson(mu, 60);
    let p = EnergyDistribution::new(IntSequence::finite(0, trunc.values.clone()))?;
    let cap = default_lambda_cap(&p);
    let err = (f_max(&p, cap)?.value() - 4.0 * mu).abs().max((f_min(&p, cap)? - 4.0 * mu).abs());
    c.push("truncated_poisson_fisher", err, 1e-3);
    Ok(())
}

fn rates_suite(c: &mut Collector, opts: VerifyOptions) -> Result<()> {
    let (phi, h) = coherence_bit();
    let sld = MonotoneFunction::sld();
    let mut additivity = 0f64;
    for rate in [Rate::one(), Rate::new(1, 2)?, Rate::new(3, 2)?] {
        let fam = StateFamily::iid(&phi, &h, rate)?;
        for m in 1..=6 {
            let mem = fam.member(m)?;
            let per = value(&mem.state, &mem.hamiltonian, &sld)? / m as f64;
            additivity = additivity.max((per - rate.copies(m) as f64 / m as f64 * 0.25).abs());
        }
    }
    c.push("iid_additivity", additivity, 1e-8);

    let fam = StateFamily::noniid_example();
    let mut formula = 0f64;
    let mut distance = 0f64;
    let mut prev = f64::INFINITY;
    for m in [4, 9, 16, 25] {
        let mem = fam.member(m)?;
        formula = formula.max((variance(&mem.state, &mem.hamiltonian)? - StateFamily::noniid_variance_formula(m)).abs());
        let d = trace_distance(&mem.state, &StateFamily::noniid_reference(m)?)?;
        distance = distance.max((d - (m as f64).powf(-0.25)).abs()).max(d - prev);
        prev = d;
    }
    c.push("noniid_variance_formula", formula, 1e-8);
    c.push("noniid_distance_decreasing", distance, 1e-10);

    let sopts = SmoothingOptions { restarts: 2, seed: opts.seed, ..Default::default() };
    let iid = StateFamily::iid(&phi, &h, Rate::one())?;
    let rep = estimate_rates(&iid, &sld, &[2, 3, 4], &[0.2, 0.1], &sopts)?;
    c.push("rate_ordering", rep.inf_estimate - rep.sup_estimate, 0.0);
    let post = StateFamily::partially_dephased(iid, 0.3)?;
    let rep_post = estimate_rates(&post, &sld, &[2, 3, 4], &[0.2, 0.1], &sopts)?;
    c.push("post_processing_monotone", rep_post.sup_estimate - rep.sup_estimate, 5e-3);

    let lm = local_minimum_check(&phi, &h, &sld, 1e-3, 6, 10, 0.1, opts.seed)?;
    c.push("local_minimum_bound", lm.threshold - lm.sampled_min.min(lm.smoothed), 0.0);
    Ok(())
}
