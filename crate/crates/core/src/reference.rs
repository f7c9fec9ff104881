//! Reference states and closed-form values for the worked examples: the
//! coherence bit and the qutrit mixture `ρ(q) = (1−q)ψ₁ + qψ₂` with
//! `H = diag(0, 1, 2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, HermitianOperator};

fn cvec(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// `|φ_coh⟩ = (|0⟩ + |1⟩)/√2` with `H_coh = |1⟩⟨1|`; its Fisher information is 1.
pub fn coherence_bit() -> (DensityMatrix, HermitianOperator) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (
        DensityMatrix::pure_real(&[s, s]).expect("normalized"),
        coherence_bit_hamiltonian(),
    )
}

pub fn coherence_bit_vector() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    cvec(&[s, s])
}

pub fn coherence_bit_hamiltonian() -> HermitianOperator {
    HermitianOperator::from_real_diagonal(&[0.0, 1.0])
}

/// `H = Σ_n n|n⟩⟨n|` on a qutrit.
pub fn qutrit_hamiltonian() -> HermitianOperator {
    HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0])
}

/// `|ψ₁⟩ = ½|0⟩ + ½|1⟩ + (1/√2)|2⟩`.
pub fn qutrit_psi1() -> Vec<Complex64> {
    cvec(&[0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2])
}

/// `|ψ₂⟩ = (|0⟩ − |1⟩)/√2`.
pub fn qutrit_psi2() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    cvec(&[s, -s, 0.0])
}

/// `ρ(q) = (1−q)ψ₁ + qψ₂` for `q ∈ [0, 1]`.
pub fn qutrit_mixture(q: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!("q = {q} must lie in [0, 1]")));
    }
    let a = DensityMatrix::pure(&qutrit_psi1())?;
    let b = DensityMatrix::pure(&qutrit_psi2())?;
    a.mix(&b, q)
}

/// `I^{f_SLD}(ρ(q), H) = (11 − 15q + 8q²)/16`.
pub fn sld_mixture_closed_form(q: f64) -> f64 {
    (11.0 - 15.0 * q + 8.0 * q * q) / 16.0
}

/// `I^{f_WYD,p}(ρ(q), H) = (11−7q)/16 − ⅛(1 − q(r^p − 1)(r^{1−p} − 1))`, `r = (1−q)/q`.
pub fn wyd_mixture_closed_form(q: f64, p: f64) -> f64 {
    let r = (1.0 - q) / q;
    (11.0 - 7.0 * q) / 16.0 - (1.0 - q * (r.powf(p) - 1.0) * (r.powf(1.0 - p) - 1.0)) / 8.0
}
