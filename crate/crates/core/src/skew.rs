//! Metric adjusted skew information and the SLD quantum Fisher information.
//!
//! For `ρ = Σ λ_i |i⟩⟨i|` the skew information is
//!
//! ```text
//! I^f(ρ, H) = f(0)/2 · Σ_{i,j} (λ_i − λ_j)² / (λ_j f(λ_i/λ_j)) · |⟨i|H|j⟩|²
//! ```
//!
//! Pairs are evaluated through the symmetric weight `φ(x, y)` of
//! [`MonotoneFunction::pair_weight`], whose limit at a zero eigenvalue is
//! `x / f(0)`; this is finite exactly because `f` is regular.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monotone::{MonotoneFunction, MonotoneTag};
use crate::operator::{variance, CMatrix, DensityMatrix, EigenSystem, HermitianOperator};

/// Default eigenvalue floor: eigenvalues below it are treated as exact zeros.
pub const DEFAULT_EIGENVALUE_FLOOR: f64 = 1e-12;
/// Eigenvalue pairs closer than this contribute nothing.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SkewInfoResult {
    pub value: f64,
    pub f_tag: MonotoneTag,
    pub eigenvalue_floor_used: f64,
}

/// `I^f(ρ, H)` with the default eigenvalue floor.
pub fn skew_info(
    rho: &DensityMatrix,
    h: &HermitianOperator,
    f: &MonotoneFunction,
) -> Result<SkewInfoResult> {
    skew_info_with_floor(rho, h, f, DEFAULT_EIGENVALUE_FLOOR)
}

pub fn skew_info_with_floor(
    rho: &DensityMatrix,
    h: &HermitianOperator,
    f: &MonotoneFunction,
    floor: f64,
) -> Result<SkewInfoResult> {
    if !f.is_regular() {
        return Err(Error::NotRegular(f.tag().to_string()));
    }
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state {} vs Hamiltonian {}",
            rho.dim(),
            h.dim()
        )));
    }
    let es = rho.eig();
    let value = skew_from_eigensystem(&es, h.matrix(), f, floor);
    Ok(SkewInfoResult {
        value,
        f_tag: f.tag().clone(),
        eigenvalue_floor_used: floor,
    })
}

/// `V† H V`.
pub(crate) fn rotate(h: &CMatrix, v: &CMatrix) -> CMatrix {
    v.adjoint() * h * v
}

pub(crate) fn clipped_eigenvalues(es: &EigenSystem, floor: f64) -> Vec<f64> {
    es.eigenvalues
        .iter()
        .map(|&l| if l < floor { 0.0 } else { l })
        .collect()
}

/// Core sum over eigenvalue pairs. Assumes `f` regular and matching dims.
pub(crate) fn skew_from_eigensystem(
    es: &EigenSystem,
    h: &CMatrix,
    f: &MonotoneFunction,
    floor: f64,
) -> f64 {
    let ht = rotate(h, &es.eigenvectors);
    let lam = clipped_eigenvalues(es, floor);
    let n = lam.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (lam[i], lam[j]);
            if (a - b).abs() < DEGENERACY_TOL {
                continue;
            }
            let w = ht[(i, j)].norm_sqr();
            if w == 0.0 {
                continue;
            }
            acc += f.pair_weight(a, b) * w;
        }
    }
    // two orderings × f(0)/2
    (f.f0() * acc).max(0.0)
}

/// SLD quantum Fisher information `F = 2 Σ (λ_i − λ_j)²/(λ_i + λ_j) |⟨i|H|j⟩|²`.
///
/// Evaluated directly from its own formula; it equals `4 I^{f_SLD}`.
pub fn qfi(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state {} vs Hamiltonian {}",
            rho.dim(),
            h.dim()
        )));
    }
    let es = rho.eig();
    let ht = rotate(h.matrix(), &es.eigenvectors);
    let lam = clipped_eigenvalues(&es, DEFAULT_EIGENVALUE_FLOOR);
    let n = lam.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = lam[i] + lam[j];
            if s <= 0.0 {
                continue;
            }
            let d = lam[i] - lam[j];
            acc += d * d / s * ht[(i, j)].norm_sqr();
        }
    }
    Ok(2.0 * acc)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalized(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = inner(v, v).re.sqrt();
    if !(n > 0.0) {
        return Err(Error::InvalidParameter("zero state vector".into()));
    }
    Ok(v.iter().map(|z| z / n).collect())
}

fn matrix_element(a: &[Complex64], h: &CMatrix, b: &[Complex64]) -> Complex64 {
    let n = a.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[i].conj() * h[(i, j)] * b[j];
        }
    }
    acc
}

/// Closed form of `I^f` for a rank-two mixture `(1−q)ψ₁ + qψ₂` of orthonormal
/// pure states:
///
/// ```text
/// (1−q)Var(ψ₁) + qVar(ψ₂) − (1 − f(0)(1−2q)²/(q f((1−q)/q))) |⟨ψ₁|H|ψ₂⟩|²
/// ```
pub fn two_pure_mixture_closed_form(
    q: f64,
    psi1: &[Complex64],
    psi2: &[Complex64],
    h: &HermitianOperator,
    f: &MonotoneFunction,
) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")));
    }
    if psi1.len() != h.dim() || psi2.len() != h.dim() {
        return Err(Error::DimensionMismatch("state vectors vs Hamiltonian".into()));
    }
    let a = normalized(psi1)?;
    let b = normalized(psi2)?;
    let overlap = inner(&a, &b).norm();
    if overlap > 1e-10 {
        return Err(Error::NotOrthogonal(overlap));
    }
    let var1 = variance(&DensityMatrix::pure(&a)?, h)?;
    let var2 = variance(&DensityMatrix::pure(&b)?, h)?;
    let cross = matrix_element(&a, h.matrix(), &b).norm_sqr();
    let r = (1.0 - q) / q;
    let coeff = 1.0 - f.f0() * (1.0 - 2.0 * q).powi(2) / (q * f.eval(r));
    Ok((1.0 - q) * var1 + q * var2 - coeff * cross)
}

/// `4 · lim_{p→0+} I^{f_WYD,p}(ρ(q), H) = (9 − 7q)/4` for the qutrit mixture
/// built by [`crate::reference::qutrit_mixture`].
pub fn wyd_p_to_zero_bound(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")));
    }
    Ok((9.0 - 7.0 * q) / 4.0)
}

/// Quantities entering the top-eigenvector lower bound on `I^f(ρ, H)`.
#[derive(Debug, Clone, Serialize)]
pub struct TopEigenvectorBound {
    /// `δ = 1 − ⟨Ψ|ρ|Ψ⟩`.
    pub infidelity: f64,
    /// `|⟨Φ|Ψ⟩|` for the top eigenvector `Φ` of `ρ`.
    pub overlap: f64,
    pub skew_info: f64,
    /// `f(0)/f(δ/(1−δ)) · (1−2δ)² · Var(Φ, H)`; `None` when `δ ≥ 1/2`.
    pub lower_bound: Option<f64>,
    pub overlap_holds: bool,
    pub bound_holds: bool,
}

/// Evaluates `|⟨Φ|Ψ⟩| ≥ 1 − 2δ` and, for `δ < 1/2`,
/// `I^f(ρ,H) ≥ f(0)/f(δ/(1−δ)) (1−2δ)² Var(Φ,H)`.
pub fn top_eigenvector_bound(
    rho: &DensityMatrix,
    psi: &[Complex64],
    h: &HermitianOperator,
    f: &MonotoneFunction,
) -> Result<TopEigenvectorBound> {
    let psi = normalized(psi)?;
    let delta = 1.0 - rho.expectation_vector(&psi)?;
    let phi = rho.top_eigenvector();
    let overlap = inner(&phi, &psi).norm();
    let value = skew_info(rho, h, f)?.value;
    let lower_bound = if delta < 0.5 {
        let var_phi = variance(&DensityMatrix::pure(&phi)?, h)?;
        Some(f.f0() / f.eval(delta / (1.0 - delta)) * (1.0 - 2.0 * delta).powi(2) * var_phi)
    } else {
        None
    };
    Ok(TopEigenvectorBound {
        infidelity: delta,
        overlap,
        skew_info: value,
        lower_bound,
        overlap_holds: overlap >= 1.0 - 2.0 * delta - 1e-12,
        bound_holds: lower_bound.is_none_or(|lb| value >= lb - 1e-8),
    })
}
