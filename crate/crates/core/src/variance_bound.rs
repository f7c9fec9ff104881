//! Quantitative pieces of the local-minimum argument for smoothed skew
//! information around i.i.d. pure states: the Gaussian variance fraction `g`,
//! the window width `α_ε`, the variance deficit `γ_λ(ε)` of distributions
//! ε-close to a shifted Poisson law, and the resulting per-copy slack `δ^f(ε)`.

use serde::Serialize;
use statrs::function::erf::{erf, erfc};

use crate::error::{Error, Result};
use crate::monotone::{MonotoneFunction, MonotoneTag};
use crate::sequences::{poisson_shift_fit, EnergyDistribution};

/// Upper end of the bracket used to invert `g`.
pub const G_INVERSE_MAX: f64 = 40.0;

fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `g(x) = ∫_{−x}^{x} β² φ(β) dβ = erf(x/√2) − (2x/√(2π)) e^{−x²/2}`:
/// the share of a standard normal's variance inside `[−x, x]`.
pub fn g(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x <= 1.0 {
        erf(x / std::f64::consts::SQRT_2) - 2.0 * x * normal_density(x)
    } else {
        1.0 - g_complement(x)
    }
}

/// `1 − g(x) = erfc(x/√2) + 2x φ(x)`, accurate where `g` rounds to one.
pub fn g_complement(x: f64) -> f64 {
    if x <= 1.0 {
        return 1.0 - g(x);
    }
    erfc(x / std::f64::consts::SQRT_2) + 2.0 * x * normal_density(x)
}

/// Solves `g_complement(x) = t` for `t ∈ (0, 1]` by bisection on `[0, 40]`.
pub fn g_complement_inverse(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidParameter(format!("g complement inverse needs t in (0, 1], got {t}")));
    }
    let (mut lo, mut hi) = (0.0, G_INVERSE_MAX);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g_complement(mid) > t {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `g⁻¹(y)` for `y ∈ [0, 1)`.
pub fn g_inverse(y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::InvalidParameter(format!("g⁻¹ needs y in [0, 1), got {y}")));
    }
    g_complement_inverse(1.0 - y)
}

/// `α_ε` defined by `α_ε √λ = g⁻¹(1 − ε)`.
pub fn alpha(lambda: f64, eps: f64) -> Result<f64> {
    check_lambda_eps(lambda, eps)?;
    Ok(g_complement_inverse(eps)? / lambda.sqrt())
}

fn check_lambda_eps(lambda: f64, eps: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be positive")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {eps} must lie in (0, 1)")));
    }
    Ok(())
}

/// `1 − ε − λ/α_ε²`, which must be positive for `γ_λ(ε)` to be defined.
pub fn gamma_margin(lambda: f64, eps: f64) -> Result<f64> {
    let a = alpha(lambda, eps)?;
    Ok(1.0 - eps - lambda / (a * a))
}

/// Boundary of the set of `ε ∈ (0, 1)` accepted by `ok`, found by bisection.
fn margin_threshold(ok: impl Fn(f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest `ε` for which `γ_λ(ε)` is defined.
pub fn gamma_threshold(lambda: f64) -> f64 {
    margin_threshold(|e| gamma_margin(lambda, e).is_ok_and(|m| m > 0.0))
}

/// `γ_λ(ε) = (α_ε² ε + 2λε) + 4α_ε² ε² λ / (1 − ε − λ/α_ε²)`.
pub fn gamma(lambda: f64, eps: f64) -> Result<f64> {
    let a = alpha(lambda, eps)?;
    let margin = 1.0 - eps - lambda / (a * a);
    if margin <= 0.0 {
        return Err(Error::EpsilonTooLarge { epsilon: eps, threshold: gamma_threshold(lambda) });
    }
    let a2 = a * a;
    Ok(a2 * eps + 2.0 * lambda * eps + 4.0 * a2 * eps * eps * lambda / margin)
}

/// `δ₁ = 1 − (1 − ε)²`.
pub fn delta1(eps: f64) -> f64 {
    1.0 - (1.0 - eps).powi(2)
}

/// `δ₂ = √(1 − (1 − δ₁)²) + ε`.
pub fn delta2(eps: f64) -> f64 {
    let d1 = delta1(eps);
    (1.0 - (1.0 - d1).powi(2)).sqrt() + eps
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundParams {
    pub lambda: f64,
    pub epsilon: f64,
    pub f_tag: MonotoneTag,
    pub alpha_eps: f64,
    /// `γ_λ(ε)`.
    pub gamma: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// `δ^f(ε) = λ − (λ − γ_λ(δ₂)) · f(0)/f(δ₁/(1−δ₁)) · (1 − 2δ₁)² ≥ 0`.
    pub delta_f: f64,
}

/// All parameters of the per-copy lower bound `(1/m) I^f(ρ_m) ≥ λ − δ^f(ε)`
/// for states `ρ_m` in the ε-ball around `ψ^{⊗m}` with `λ = Var(ψ, H)`.
pub fn lower_bound_params(lambda: f64, eps: f64, f: &MonotoneFunction) -> Result<LowerBoundParams> {
    check_lambda_eps(lambda, eps)?;
    if !f.is_regular() {
        return Err(Error::NotRegular(f.tag().to_string()));
    }
    let d1 = delta1(eps);
    let d2 = delta2(eps);
    let usable = |e: f64| {
        let d2 = delta2(e);
        d2 < 1.0
            && delta1(e) < 0.5
            && gamma_margin(lambda, e).is_ok_and(|m| m > 0.0)
            && gamma_margin(lambda, d2).is_ok_and(|m| m > 0.0)
    };
    if !usable(eps) {
        return Err(Error::EpsilonTooLarge {
            epsilon: eps,
            threshold: margin_threshold(usable),
        });
    }
    let gamma_eps = gamma(lambda, eps)?;
    let gamma_d2 = gamma(lambda, d2)?;
    let factor = f.f0() / f.eval(d1 / (1.0 - d1)) * (1.0 - 2.0 * d1).powi(2);
    Ok(LowerBoundParams {
        lambda,
        epsilon: eps,
        f_tag: f.tag().clone(),
        alpha_eps: alpha(lambda, eps)?,
        gamma: gamma_eps,
        delta1: d1,
        delta2: d2,
        delta_f: lambda - (lambda - gamma_d2) * factor,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VarianceBoundReport {
    pub variance: f64,
    /// `Var(P_{mλ}) = mλ`.
    pub poisson_variance: f64,
    /// `γ_λ(ε) · m`.
    pub allowance: f64,
    pub shift: i64,
    pub d_tv: f64,
    /// `mλ − γ_λ(ε) m`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks `Var(q) ≥ mλ − γ_λ(ε) m` for a distribution within total variation
/// `ε` of some shift of `P_{mλ}`.
pub fn verify_variance_bound(q: &EnergyDistribution, lambda: f64, m: usize, eps: f64) -> Result<VarianceBoundReport> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let gam = gamma(lambda, eps)?;
    let ml = m as f64 * lambda;
    let (shift, d_tv) = poisson_shift_fit(q, ml);
    if d_tv > eps {
        return Err(Error::Precondition(format!(
            "best shifted Poisson fit has d_TV = {d_tv:.3e} > ε = {eps}"
        )));
    }
    let variance = q.variance();
    let bound = ml - gam * m as f64;
    Ok(VarianceBoundReport {
        variance,
        poisson_variance: ml,
        allowance: gam * m as f64,
        shift,
        d_tv,
        bound,
        holds: variance >= bound - 1e-9,
    })
}
