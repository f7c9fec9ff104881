//! The Gaussian tail function `g`, the margins `α_ε` and `γ_λ(ε)`, the
//! parameters entering the lower bound on smoothed skew information, and the
//! variance bound for distributions close to a shifted Poisson law.
use asymrate::sequences::{poisson_to_tail, EnergyDistribution, IntSequence};
use asymrate::variance_bound::{alpha, g, gamma, lower_bound_params, verify_variance_bound};
use asymrate::MonotoneFunction;

fn main() -> asymrate::Result<()> {
    println!("g(1) = {:.12}", g(1.0));
    println!("eps,alpha,gamma");
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        println!("{eps:e},{:.6},{:.6}", alpha(1.0, eps)?, gamma(1.0, eps)?);
    }
    let f = MonotoneFunction::sld();
    for eps in [1e-4, 1e-8, 1e-12] {
        let p = lower_bound_params(0.25, eps, &f)?;
        println!("eps {eps:e}: delta1 {:.3e} delta2 {:.3e} delta_f {:.4}", p.delta1, p.delta2, p.delta_f);
    }
    match lower_bound_params(0.25, 0.2, &f) {
        Ok(_) => println!("eps 0.2 accepted"),
        Err(e) => println!("eps 0.2 rejected: {e}"),
    }

    let (lambda, m, eps) = (1.0, 40, 1e-4);
    let p = poisson_to_tail(lambda * m as f64, 1e-15);
    let mut v = p.values.clone();
    v[40] -= 5e-5;
    v[46] += 5e-5;
    let q = EnergyDistribution::new(IntSequence::new(0, v, p.tail_bound))?;
    let r = verify_variance_bound(&q, lambda, m, eps)?;
    println!("perturbed P_40: Var {:.4} >= bound {:.4}: {}", r.variance, r.bound, r.holds);
    Ok(())
}
