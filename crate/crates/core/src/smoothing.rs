//! ε-smoothed skew information
//! `I^f_ε(ρ, H) = inf { I^f(σ, H) : σ a state, ½‖σ − ρ‖₁ ≤ ε }`.
//!
//! `I^f` is convex in the state and the feasible set is convex, so a projected
//! gradient method reaches the global minimum up to its stopping tolerance.
//! The projection onto {states} ∩ {trace-distance ball} uses Dykstra's
//! alternating scheme between the two exact projections.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monotone::MonotoneFunction;
use crate::operator::{
    c, check_same_dim, dephase, eigh, symmetrize, trace_distance, CMatrix, DensityMatrix,
    HermitianOperator,
};
use crate::random::{random_mixed_state, seeded_rng};
use crate::skew::{rotate, skew_from_eigensystem, DEFAULT_EIGENVALUE_FLOOR};

/// Eigenvalues are clipped to this floor when forming the gradient, which
/// otherwise diverges for WYD at rank-deficient points.
const GRADIENT_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    Analytic,
    /// Central differences with step `fd_step` in an orthonormal Hermitian basis.
    FiniteDifference,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmoothingOptions {
    pub max_iterations: usize,
    pub restarts: usize,
    /// Stop when a step improves the objective by less than `tolerance·max(1, value)`
    /// for `patience` consecutive iterations, or the projected step vanishes.
    pub tolerance: f64,
    pub patience: usize,
    pub initial_step: f64,
    pub dykstra_steps: usize,
    pub gradient: GradientMode,
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for SmoothingOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            restarts: 5,
            tolerance: 1e-10,
            patience: 20,
            initial_step: 1.0,
            dykstra_steps: 200,
            gradient: GradientMode::Analytic,
            fd_step: 1e-5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothingResult {
    pub value: f64,
    #[serde(skip)]
    pub witness: DensityMatrix,
    pub epsilon: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_inputs(rho: &DensityMatrix, h: &HermitianOperator, f: &MonotoneFunction, eps: f64) -> Result<()> {
    if !f.is_regular() {
        return Err(Error::NotRegular(f.tag().to_string()));
    }
    check_same_dim(rho.dim(), h.dim(), "state vs Hamiltonian")?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("epsilon = {eps} must lie in [0, 1]")));
    }
    Ok(())
}

fn objective(sigma: &CMatrix, h: &CMatrix, f: &MonotoneFunction) -> f64 {
    skew_from_eigensystem(&eigh(sigma), h, f, DEFAULT_EIGENVALUE_FLOOR)
}

/// Value and gradient `G` of `σ ↦ I^f(σ, H)`, with `dI = Tr(G·dσ)`.
///
/// In the eigenbasis of `σ`, `Γ_lk = 2 Σ_j H̃_lj H̃_jk · [K(λ_j, λ_l) − K(λ_j, λ_k)]/(λ_l − λ_k)`
/// with `K = f(0)φ/2`; the divided difference becomes `∂_y K` on (near-)degenerate pairs.
pub fn skew_gradient(sigma: &CMatrix, h: &CMatrix, f: &MonotoneFunction) -> (f64, CMatrix) {
    let es = eigh(sigma);
    let value = skew_from_eigensystem(&es, h, f, DEFAULT_EIGENVALUE_FLOOR);
    let ht = rotate(h, &es.eigenvectors);
    let lam: Vec<f64> = es.eigenvalues.iter().map(|&l| l.max(GRADIENT_FLOOR)).collect();
    let n = lam.len();
    let half_f0 = 0.5 * f.f0();
    let k = |x: f64, y: f64| half_f0 * f.pair_weight(x, y);
    let dk = |x: f64, y: f64| half_f0 * f.pair_weight_dy(x, y);
    let mut gamma = CMatrix::zeros(n, n);
    for l in 0..n {
        for kk in l..n {
            let (a, b) = (lam[l], lam[kk]);
            let close = (a - b).abs() <= 1e-7 * a.max(b);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let w = ht[(l, j)] * ht[(j, kk)];
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let dd = if close {
                    dk(lam[j], 0.5 * (a + b))
                } else {
                    (k(lam[j], a) - k(lam[j], b)) / (a - b)
                };
                acc += w * dd;
            }
            gamma[(l, kk)] = acc * 2.0;
            if l != kk {
                gamma[(kk, l)] = gamma[(l, kk)].conj();
            }
        }
    }
    // dI = Tr(Γ V†XV) = Tr(VΓV† X)
    let v = &es.eigenvectors;
    (value, symmetrize(&(v * gamma * v.adjoint())))
}

/// Orthonormal basis (Hilbert–Schmidt) of `n × n` Hermitian matrices.
fn hermitian_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let mut m = CMatrix::zeros(n, n);
        m[(i, i)] = c(1.0);
        out.push(m);
        for j in (i + 1)..n {
            let mut re = CMatrix::zeros(n, n);
            re[(i, j)] = c(s);
            re[(j, i)] = c(s);
            out.push(re);
            let mut im = CMatrix::zeros(n, n);
            im[(i, j)] = Complex64::new(0.0, -s);
            im[(j, i)] = Complex64::new(0.0, s);
            out.push(im);
        }
    }
    out
}

/// Central finite-difference gradient of `I^f` in the Hermitian basis.
pub fn skew_gradient_fd(sigma: &CMatrix, h: &CMatrix, f: &MonotoneFunction, step: f64) -> (f64, CMatrix) {
    let n = sigma.nrows();
    let value = objective(sigma, h, f);
    let mut g = CMatrix::zeros(n, n);
    for b in hermitian_basis(n) {
        let plus = objective(&(sigma + &b * c(step)), h, f);
        let minus = objective(&(sigma - &b * c(step)), h, f);
        g += &b * c((plus - minus) / (2.0 * step));
    }
    (value, g)
}

/// Euclidean projection onto the probability simplex scaled to `total`.
fn project_simplex(v: &[f64], total: f64) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - total) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Euclidean projection onto the ℓ₁ ball of radius `r`.
fn project_l1_ball(v: &[f64], r: f64) -> Vec<f64> {
    if v.iter().map(|x| x.abs()).sum::<f64>() <= r {
        return v.to_vec();
    }
    let mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    let w = project_simplex(&mags, r);
    v.iter().zip(w).map(|(&x, m)| x.signum() * m).collect()
}

fn spectral_map(m: &CMatrix, g: impl Fn(&[f64]) -> Vec<f64>) -> CMatrix {
    let es = eigh(&symmetrize(m));
    let new = g(&es.eigenvalues);
    let mut scaled = es.eigenvectors.clone();
    for (j, l) in new.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*l);
    }
    symmetrize(&(&scaled * es.eigenvectors.adjoint()))
}

fn project_states(m: &CMatrix) -> CMatrix {
    spectral_map(m, |l| project_simplex(l, 1.0))
}

fn project_ball(m: &CMatrix, center: &CMatrix, eps: f64) -> CMatrix {
    center + spectral_map(&(m - center), |l| project_l1_ball(l, 2.0 * eps))
}

fn half_trace_norm(m: &CMatrix) -> f64 {
    0.5 * crate::operator::trace_norm_hermitian(&symmetrize(m))
}

/// Approximate projection onto `{σ state, ½‖σ − ρ‖₁ ≤ ε}`; the result is
/// always feasible (a final contraction toward `ρ` absorbs Dykstra's residual).
fn project_feasible(x: &CMatrix, rho: &CMatrix, eps: f64, steps: usize) -> CMatrix {
    let n = x.nrows();
    let mut cur = x.clone();
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    let mut y = project_states(&cur);
    for _ in 0..steps {
        y = project_states(&(&cur + &p));
        p = &cur + &p - &y;
        let next = project_ball(&(&y + &q), rho, eps);
        q = &y + &q - &next;
        let gap = (&next - &y).norm();
        let moved = (&next - &cur).norm();
        cur = next;
        if gap < 1e-12 && moved < 1e-12 {
            break;
        }
    }
    let d = half_trace_norm(&(&y - rho));
    if d > eps {
        let t = eps / d;
        y = rho + (&y - rho) * c(t);
    }
    y
}

struct Run {
    value: f64,
    sigma: CMatrix,
    iterations: usize,
    converged: bool,
}

fn descend(
    start: CMatrix,
    rho: &CMatrix,
    h: &CMatrix,
    f: &MonotoneFunction,
    eps: f64,
    opts: &SmoothingOptions,
) -> Run {
    let grad = |s: &CMatrix| match opts.gradient {
        GradientMode::Analytic => skew_gradient(s, h, f),
        GradientMode::FiniteDifference => skew_gradient_fd(s, h, f, opts.fd_step),
    };
    let mut sigma = project_feasible(&start, rho, eps, opts.dykstra_steps);
    let (mut value, mut g) = grad(&sigma);
    let mut t = opts.initial_step;
    let mut stalled = 0;
    for it in 0..opts.max_iterations {
        if value <= 0.0 {
            return Run { value: 0.0, sigma, iterations: it, converged: true };
        }
        let mut accepted = None;
        for _ in 0..60 {
            let cand = project_feasible(&(&sigma - &g * c(t)), rho, eps, opts.dykstra_steps);
            let d = &cand - &sigma;
            let dn2 = d.norm_squared();
            if dn2 < 1e-30 {
                break;
            }
            let v = objective(&cand, h, f);
            let lin = (g.adjoint() * &d).trace().re;
            if v <= value + lin + dn2 / (2.0 * t) + 1e-15 && v <= value {
                accepted = Some((cand, v));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, v)) = accepted else {
            return Run { value, sigma, iterations: it, converged: true };
        };
        let improvement = value - v;
        sigma = cand;
        let (nv, ng) = grad(&sigma);
        value = nv;
        g = ng;
        t = (t * 2.0).min(1e6);
        if improvement <= opts.tolerance * value.max(1.0) {
            stalled += 1;
            if stalled >= opts.patience {
                return Run { value, sigma, iterations: it + 1, converged: true };
            }
        } else {
            stalled = 0;
        }
    }
    Run { value, sigma, iterations: opts.max_iterations, converged: false }
}

/// Starting points: `ρ`, the point at distance `ε` toward the dephased state,
/// and random feasible perturbations.
fn starts(rho: &DensityMatrix, h: &HermitianOperator, eps: f64, opts: &SmoothingOptions) -> Vec<CMatrix> {
    let r = rho.matrix();
    let mut out = vec![r.clone()];
    if let Ok(deph) = dephase(rho, h) {
        let d = half_trace_norm(&(deph.matrix() - r));
        let t = if d > 0.0 { (eps / d).min(1.0) } else { 0.0 };
        out.push(r + (deph.matrix() - r) * c(t));
    }
    let mut rng = seeded_rng(opts.seed);
    while out.len() < opts.restarts.max(1) {
        let tau = random_mixed_state(rho.dim(), &mut rng);
        let w: f64 = rng.random::<f64>();
        out.push(r + (tau.matrix() - r) * c(w));
    }
    out.truncate(opts.restarts.max(1));
    out
}

/// `I^f_ε(ρ, H)` by projected gradient descent with restarts; the reported
/// value is `I^f` of the returned witness, an upper bound on the infimum.
pub fn smooth_skew_info(
    rho: &DensityMatrix,
    h: &HermitianOperator,
    f: &MonotoneFunction,
    eps: f64,
    opts: &SmoothingOptions,
) -> Result<SmoothingResult> {
    check_inputs(rho, h, f, eps)?;
    let base = skew_from_eigensystem(&rho.eig(), h.matrix(), f, DEFAULT_EIGENVALUE_FLOOR);
    if eps == 0.0 || base == 0.0 {
        return Ok(SmoothingResult {
            value: base,
            witness: rho.clone(),
            epsilon: eps,
            iterations: 0,
            converged: true,
        });
    }
    let mut best: Option<Run> = None;
    let mut iterations = 0;
    let mut all_converged = true;
    for s in starts(rho, h, eps, opts) {
        let run = descend(s, rho.matrix(), h.matrix(), f, eps, opts);
        iterations += run.iterations;
        all_converged &= run.converged;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
        if best.as_ref().is_some_and(|b| b.value == 0.0) {
            break;
        }
    }
    let best = best.expect("at least one start");
    let witness = DensityMatrix::from_matrix_unchecked(best.sigma);
    let value = skew_from_eigensystem(&witness.eig(), h.matrix(), f, DEFAULT_EIGENVALUE_FLOOR);
    Ok(SmoothingResult {
        value,
        witness,
        epsilon: eps,
        iterations,
        converged: all_converged || best.converged,
    })
}

/// `F^ε(ρ, H) = 4 · I^{f_SLD}_ε(ρ, H)`.
pub fn smooth_qfi(rho: &DensityMatrix, h: &HermitianOperator, eps: f64, opts: &SmoothingOptions) -> Result<f64> {
    Ok(4.0 * smooth_skew_info(rho, h, &MonotoneFunction::sld(), eps, opts)?.value)
}

/// Qubit skew information from the Bloch coordinates `(z, x)` relative to the
/// Hamiltonian axis: `f(0) φ((1+r)/2, (1−r)/2) b² x²/r²` with `b` half the energy gap.
fn qubit_skew(z: f64, x: f64, b: f64, f: &MonotoneFunction) -> f64 {
    let r2 = z * z + x * x;
    if r2 == 0.0 || x == 0.0 {
        return 0.0;
    }
    let r = r2.sqrt().min(1.0);
    f.f0() * f.pair_weight(0.5 * (1.0 + r), 0.5 * (1.0 - r)) * b * b * x * x / r2
}

fn brute_force_qubit(rho: &DensityMatrix, h: &HermitianOperator, f: &MonotoneFunction, eps: f64, resolution: usize) -> f64 {
    let he = h.eig();
    let b = 0.5 * (he.eigenvalues[1] - he.eigenvalues[0]);
    if b == 0.0 {
        return 0.0;
    }
    let rr = rotate(rho.matrix(), &he.eigenvectors);
    let z0 = rr[(1, 1)].re - rr[(0, 0)].re;
    let x0 = 2.0 * rr[(0, 1)].norm();
    // The objective is invariant under rotations about the Hamiltonian axis,
    // so the minimum lies in the half plane through that axis and ρ.
    let radius = 2.0 * eps;
    let feasible = |z: f64, x: f64| {
        (z - z0).powi(2) + (x - x0).powi(2) <= radius * radius * (1.0 + 1e-12) && z * z + x * x <= 1.0 + 1e-12
    };
    let n = resolution.max(8);
    let mut best = (qubit_skew(z0, x0, b, f), z0, x0);
    let consider = |z: f64, x: f64, best: &mut (f64, f64, f64)| {
        if feasible(z, x) {
            let v = qubit_skew(z, x, b, f);
            if v < best.0 {
                *best = (v, z, x);
            }
        }
    };
    let (mut cz, mut cx, mut half) = (z0, x0, radius);
    for _round in 0..6 {
        for i in 0..=n {
            for j in 0..=n {
                let z = cz - half + 2.0 * half * i as f64 / n as f64;
                let x = cx - half + 2.0 * half * j as f64 / n as f64;
                consider(z, x, &mut best);
            }
        }
        // Boundary of the ε-disc and of the Bloch disc, where minima usually sit.
        for k in 0..(8 * n) {
            let a = std::f64::consts::TAU * k as f64 / (8 * n) as f64;
            let (z, x) = (z0 + radius * a.cos(), x0 + radius * a.sin());
            if (z - cz).abs() <= half && (x - cx).abs() <= half {
                consider(z, x, &mut best);
            }
            let (z, x) = (a.cos(), a.sin());
            if (z - cz).abs() <= half && (x - cx).abs() <= half {
                consider(z, x, &mut best);
            }
        }
        cz = best.1;
        cx = best.2;
        half *= 4.0 / n as f64;
    }
    best.0
}

fn brute_force_qutrit(rho: &DensityMatrix, h: &HermitianOperator, f: &MonotoneFunction, eps: f64, resolution: usize) -> Result<f64> {
    let mut rng = seeded_rng(0x5eed);
    let r = rho.matrix();
    let eval = |m: &CMatrix| objective(m, h.matrix(), f);
    let pull_in = |m: CMatrix| {
        let d = half_trace_norm(&(&m - r));
        if d > eps {
            r + (&m - r) * c(eps / d)
        } else {
            m
        }
    };
    let mut best_m = r.clone();
    let mut best = eval(r);
    if let Ok(deph) = dephase(rho, h) {
        let cand = pull_in(deph.matrix().clone());
        let v = eval(&cand);
        if v < best {
            best = v;
            best_m = cand;
        }
    }
    for _ in 0..resolution {
        let tau = random_mixed_state(3, &mut rng);
        let w: f64 = rng.random::<f64>();
        let cand = pull_in(r + (tau.matrix() - r) * c(w.sqrt()));
        let v = eval(&cand);
        if v < best {
            best = v;
            best_m = cand;
        }
    }
    let mut scale = 0.5;
    for _ in 0..(resolution * 4) {
        let tau = random_mixed_state(3, &mut rng);
        let cand = pull_in(&best_m + (tau.matrix() - &best_m) * c(scale));
        let v = eval(&cand);
        if v < best {
            best = v;
            best_m = cand;
        } else {
            scale = (scale * 0.98).max(1e-6);
        }
    }
    Ok(best)
}

/// Derivative-free reference minimum of `I^f` over the ε-ball, for dimension ≤ 3.
///
/// Qubits: nested grids in the Bloch half plane containing the Hamiltonian
/// axis, with a closed-form objective. Qutrits: seeded random search with
/// shrinking perturbations.
pub fn brute_force_smooth(
    rho: &DensityMatrix,
    h: &HermitianOperator,
    f: &MonotoneFunction,
    eps: f64,
    resolution: usize,
) -> Result<f64> {
    check_inputs(rho, h, f, eps)?;
    match rho.dim() {
        1 => Ok(0.0),
        2 => Ok(brute_force_qubit(rho, h, f, eps, resolution)),
        3 => brute_force_qutrit(rho, h, f, eps, resolution),
        d => Err(Error::InvalidParameter(format!(
            "brute-force smoothing supports dimension ≤ 3, got {d}"
        ))),
    }
}

/// Trace distance from `ρ` to its dephased version: the smallest `ε` for which
/// this particular symmetric state is in the ball.
pub fn dephasing_radius(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    trace_distance(rho, &dephase(rho, h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_mixed_state, random_state_with_rank};
    use crate::reference::coherence_bit;
    use crate::skew::skew_info;

    fn quick() -> SmoothingOptions {
        SmoothingOptions { restarts: 3, ..Default::default() }
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let mut rng = seeded_rng(4);
        for d in 2..=4 {
            let rho = random_mixed_state(d, &mut rng);
            let h = random_hermitian(d, &mut rng);
            for f in [MonotoneFunction::sld(), MonotoneFunction::wyd(0.3).unwrap()] {
                let (v1, g1) = skew_gradient(rho.matrix(), h.matrix(), &f);
                let (v2, g2) = skew_gradient_fd(rho.matrix(), h.matrix(), &f, 1e-6);
                assert!((v1 - v2).abs() < 1e-14);
                let err = (&g1 - &g2).norm() / g2.norm().max(1e-3);
                assert!(err < 1e-5, "d={d} {:?} err={err}", f.tag());
            }
        }
    }

    #[test]
    fn gradient_handles_degenerate_spectrum() {
        let mut rng = seeded_rng(5);
        let h = random_hermitian(3, &mut rng);
        let rho = DensityMatrix::diagonal(&[0.4, 0.4, 0.2]).unwrap();
        let f = MonotoneFunction::sld();
        let (_, g1) = skew_gradient(rho.matrix(), h.matrix(), &f);
        let (_, g2) = skew_gradient_fd(rho.matrix(), h.matrix(), &f, 1e-6);
        assert!((&g1 - &g2).norm() < 1e-5 * g2.norm().max(1.0));
    }

    #[test]
    fn projections_are_exact() {
        assert_eq!(project_simplex(&[0.2, 0.3, 0.5], 1.0), vec![0.2, 0.3, 0.5]);
        let p = project_simplex(&[2.0, 0.0, -1.0], 1.0);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let b = project_l1_ball(&[3.0, -1.0], 2.0);
        assert!((b[0] - 2.0).abs() < 1e-15 && b[1] == 0.0);
        let mut rng = seeded_rng(1);
        let rho = random_mixed_state(3, &mut rng);
        let x = crate::random::ginibre(3, 3, &mut rng);
        let y = project_feasible(&symmetrize(&x), rho.matrix(), 0.1, 200);
        let s = DensityMatrix::new(y).unwrap();
        assert!(trace_distance(&rho, &s).unwrap() <= 0.1 + 1e-10);
    }

    #[test]
    fn zero_epsilon_returns_skew() {
        let (phi, h) = coherence_bit();
        let r = smooth_skew_info(&phi, &h, &MonotoneFunction::sld(), 0.0, &quick()).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
        assert!((smooth_qfi(&phi, &h, 0.0, &quick()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_state_within_reach_gives_zero() {
        let (phi, h) = coherence_bit();
        assert!((dephasing_radius(&phi, &h).unwrap() - 0.5).abs() < 1e-12);
        let r = smooth_skew_info(&phi, &h, &MonotoneFunction::sld(), 0.5, &quick()).unwrap();
        assert!(r.value < 1e-12);
        assert!(r.witness.commutes_with(&h, 1e-9).unwrap());
        assert!(brute_force_smooth(&phi, &h, &MonotoneFunction::sld(), 0.6, 100).unwrap() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(brute_force_smooth(&mixed, &h, &MonotoneFunction::sld(), 0.1, 50).unwrap(), 0.0);
    }

    #[test]
    fn coherence_bit_oracle_bracket() {
        let (phi, h) = coherence_bit();
        let v = brute_force_smooth(&phi, &h, &MonotoneFunction::sld(), 0.1, 200).unwrap();
        assert!(v > 0.0 && v < 0.25, "{v}");
        let r = smooth_skew_info(&phi, &h, &MonotoneFunction::sld(), 0.1, &quick()).unwrap();
        assert!((r.value - v).abs() < 2e-3, "{} vs {v}", r.value);
    }

    #[test]
    fn optimizer_matches_oracle_on_qubits() {
        let mut rng = seeded_rng(17);
        for _ in 0..6 {
            let rho = random_mixed_state(2, &mut rng);
            let h = random_hermitian(2, &mut rng);
            for f in [MonotoneFunction::sld(), MonotoneFunction::wyd(0.3).unwrap()] {
                let oracle = brute_force_smooth(&rho, &h, &f, 0.05, 200).unwrap();
                let r = smooth_skew_info(&rho, &h, &f, 0.05, &quick()).unwrap();
                assert!(trace_distance(&rho, &r.witness).unwrap() <= 0.05 + 1e-8);
                assert!((r.value - oracle).abs() < 2e-3, "{} vs {oracle}", r.value);
                assert!(r.value <= skew_info(&rho, &h, &f).unwrap().value + 1e-8);
            }
        }
    }

    #[test]
    fn optimizer_on_qutrit_beats_random_search() {
        let mut rng = seeded_rng(23);
        let rho = random_state_with_rank(3, 2, &mut rng);
        let h = random_hermitian(3, &mut rng);
        let f = MonotoneFunction::sld();
        let oracle = brute_force_smooth(&rho, &h, &f, 0.1, 400).unwrap();
        let r = smooth_skew_info(&rho, &h, &f, 0.1, &quick()).unwrap();
        assert!(r.value <= oracle + 1e-3, "{} vs {oracle}", r.value);
    }

    #[test]
    fn finite_difference_mode_agrees() {
        let mut rng = seeded_rng(31);
        let rho = random_mixed_state(2, &mut rng);
        let h = random_hermitian(2, &mut rng);
        let f = MonotoneFunction::sld();
        let a = smooth_skew_info(&rho, &h, &f, 0.1, &quick()).unwrap().value;
        let opts = SmoothingOptions { gradient: GradientMode::FiniteDifference, ..quick() };
        let b = smooth_skew_info(&rho, &h, &f, 0.1, &opts).unwrap().value;
        assert!((a - b).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_input() {
        let (phi, h) = coherence_bit();
        assert!(smooth_skew_info(&phi, &h, &MonotoneFunction::rld(), 0.1, &quick()).is_err());
        assert!(smooth_skew_info(&phi, &h, &MonotoneFunction::sld(), 1.5, &quick()).is_err());
        let big = DensityMatrix::maximally_mixed(4);
        let hb = HermitianOperator::identity(4);
        assert!(brute_force_smooth(&big, &hb, &MonotoneFunction::sld(), 0.1, 10).is_err());
    }
}
