//! Dense complex-matrix foundation: Hermitian operators, density matrices,
//! eigendecomposition, trace distance, tensor products and time evolution.
//!
//! Everything here is dense. Dimensions are capped (default
//! [`DEFAULT_DIM_CAP`]) so that accidental tensor blow-ups fail loudly instead
//! of exhausting memory.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Largest dimension any constructor in this crate will build by default.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Deviation from Hermiticity tolerated (and symmetrized away) on construction.
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Eigenvalue floor below which a density matrix is rejected.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed trace error of a density matrix.
pub const TRACE_TOL: f64 = 1e-10;

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Max-abs deviation `‖A − A†‖_max`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub(crate) fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub(crate) fn check_same_dim(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("{what}: {a} vs {b}")));
    }
    Ok(())
}

/// Eigenvalues (ascending) and unitary eigenvector columns of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenSystem {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let l = self.eigenvalues[j];
            scaled.column_mut(j).scale_mut(l);
        }
        &scaled * self.eigenvectors.adjoint()
    }

    /// Applies a real function to the spectrum: `V g(Λ) V†`.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let s = g(self.eigenvalues[j]);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }
}

/// Zeroes entries below `1e-40` of the largest one; the complex eigensolver
/// produces NaN when tiny entries underflow inside its rotations.
fn flush_tiny(m: &CMatrix) -> CMatrix {
    let cut = max_abs(m) * 1e-40;
    m.map(|z| if z.norm() < cut { Complex64::new(0.0, 0.0) } else { z })
}

/// Unitary discrete Fourier matrix.
fn dft(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |i, j| {
        Complex64::from_polar(s, 2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64)
    })
}

fn has_nan(v: &nalgebra::DVector<f64>) -> bool {
    v.iter().any(|x| x.is_nan())
}

/// Eigendecomposition of a matrix assumed Hermitian (not checked).
pub(crate) fn eigh(m: &CMatrix) -> EigenSystem {
    let n = m.nrows();
    if n == 1 {
        return EigenSystem {
            eigenvalues: vec![m[(0, 0)].re],
            eigenvectors: CMatrix::identity(1, 1),
        };
    }
    let mut se = flush_tiny(m).symmetric_eigen();
    if has_nan(&se.eigenvalues) {
        // a dense change of basis moves the decomposition off the failing path
        let f = dft(n);
        let rotated = flush_tiny(&(f.adjoint() * m * &f)).symmetric_eigen();
        se.eigenvalues = rotated.eigenvalues;
        se.eigenvectors = f * rotated.eigenvectors;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    EigenSystem {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let mut vals = flush_tiny(m).symmetric_eigenvalues();
    if has_nan(&vals) {
        let f = dft(m.nrows());
        vals = flush_tiny(&(f.adjoint() * m * &f)).symmetric_eigenvalues();
    }
    let mut v: Vec<f64> = vals.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub(crate) fn trace_norm_hermitian(m: &CMatrix) -> f64 {
    eigvalsh(m).iter().map(|l| l.abs()).sum()
}

pub(crate) fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// A Hermitian operator, typically a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Accepts `m` if its anti-Hermitian part is below [`HERMITIAN_TOL`], then
    /// symmetrizes it.
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        let deviation = hermitian_deviation(&m);
        if !deviation.is_finite() || deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            matrix: symmetrize(&m),
        })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            matrix: CMatrix::from_fn(n, n, |i, j| if i == j { c(diag[i]) } else { c(0.0) }),
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = CMatrix::from_fn(n, n, |i, j| c(rows[i].get(j).copied().unwrap_or(f64::NAN)));
        Self::new(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn eig(&self) -> EigenSystem {
        eigh(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.matrix)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: tensor_capped(&self.matrix, &other.matrix, DEFAULT_DIM_CAP)?,
        })
    }

    /// `self + s·I`.
    pub fn shifted(&self, s: f64) -> Self {
        let n = self.dim();
        Self {
            matrix: &self.matrix + CMatrix::identity(n, n) * c(s),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            matrix: &self.matrix * c(s),
        }
    }

    /// `U† H U` for a unitary `U`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self {
            matrix: symmetrize(&(u.adjoint() * &self.matrix * u)),
        }
    }

    /// Whether the operator is diagonal within `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }
}

/// A density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and the eigenvalue floor [`PSD_TOL`].
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        let deviation = hermitian_deviation(&m);
        if !deviation.is_finite() || deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let m = symmetrize(&m);
        let tr = trace(&m).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace {tr} != 1")));
        }
        let min_eig = eigvalsh(&m)[0];
        if min_eig < -PSD_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix: m })
    }

    /// Projector onto a state vector (normalized here; must be nonzero).
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidParameter("zero or invalid state vector".into()));
        }
        let n = amplitudes.len();
        let v: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        Ok(Self {
            matrix: CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()),
        })
    }

    pub fn pure_real(amplitudes: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = amplitudes.iter().map(|&a| c(a)).collect();
        Self::pure(&v)
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let n = probs.len();
        Self::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(probs[i])
            } else {
                c(0.0)
            }
        }))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) * c(1.0 / dim as f64),
        }
    }

    /// Wraps a matrix already known to be a state (up to float noise).
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn eig(&self) -> EigenSystem {
        eigh(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.matrix)
    }

    /// Convex combination `(1−w)·self + w·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        check_same_dim(self.dim(), other.dim(), "mix")?;
        Ok(Self {
            matrix: &self.matrix * c(1.0 - w) + &other.matrix * c(w),
        })
    }

    /// Purity test: largest eigenvalue within `tol` of 1.
    pub fn is_pure(&self, tol: f64) -> bool {
        let ev = self.eigenvalues();
        (ev[ev.len() - 1] - 1.0).abs() <= tol
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn top_eigenvector(&self) -> Vec<Complex64> {
        let es = self.eig();
        let n = self.dim();
        es.eigenvectors.column(n - 1).iter().copied().collect()
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalized vector.
    pub fn expectation_vector(&self, psi: &[Complex64]) -> Result<f64> {
        check_same_dim(self.dim(), psi.len(), "expectation")?;
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += psi[i].conj() * self.matrix[(i, j)] * psi[j];
            }
        }
        Ok(acc.re)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: tensor_capped(&self.matrix, &other.matrix, DEFAULT_DIM_CAP)?,
        })
    }

    /// Whether the state commutes with `h` within `tol` (max-abs of the commutator).
    pub fn commutes_with(&self, h: &HermitianOperator, tol: f64) -> Result<bool> {
        Ok(commutator_norm(self, h)? <= tol)
    }
}

/// `‖[ρ, H]‖_max`.
pub fn commutator_norm(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    check_same_dim(rho.dim(), h.dim(), "commutator")?;
    let comm = rho.matrix() * h.matrix() - h.matrix() * rho.matrix();
    Ok(max_abs(&comm))
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
pub fn eig_hermitian(a: &HermitianOperator) -> EigenSystem {
    a.eig()
}

/// Eigendecomposition of an arbitrary matrix, rejecting non-Hermitian input.
pub fn eig_hermitian_checked(m: &CMatrix) -> Result<EigenSystem> {
    Ok(HermitianOperator::new(m.clone())?.eig())
}

/// Trace distance `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim(), "trace distance")?;
    let d = 0.5 * trace_norm_hermitian(&(rho.matrix() - sigma.matrix()));
    Ok(d.clamp(0.0, 1.0))
}

/// `e^{−iHt} ρ e^{iHt}`.
pub fn time_evolve(rho: &DensityMatrix, h: &HermitianOperator, t: f64) -> Result<DensityMatrix> {
    check_same_dim(rho.dim(), h.dim(), "time evolution")?;
    let u = unitary_evolution(h, t);
    Ok(DensityMatrix::from_matrix_unchecked(symmetrize(
        &(&u * rho.matrix() * u.adjoint()),
    )))
}

/// `e^{−iHt}`.
pub fn unitary_evolution(h: &HermitianOperator, t: f64) -> CMatrix {
    h.eig()
        .map_spectrum(|e| Complex64::from_polar(1.0, -e * t))
}

/// Energy levels of `h` (eigenvalues merged within `tol`) with their spectral projectors.
pub fn energy_projectors(h: &HermitianOperator, tol: f64) -> Vec<(f64, CMatrix)> {
    let es = h.eig();
    let n = h.dim();
    let mut out: Vec<(f64, CMatrix)> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && es.eigenvalues[end] - es.eigenvalues[end - 1] <= tol {
            end += 1;
        }
        let cols = es.eigenvectors.columns(start, end - start);
        let level = es.eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((level, cols * cols.adjoint()));
        start = end;
    }
    out
}

/// `Σ_E Π_E ρ Π_E`: removes all coherence between distinct energy levels.
pub fn dephase(rho: &DensityMatrix, h: &HermitianOperator) -> Result<DensityMatrix> {
    check_same_dim(rho.dim(), h.dim(), "dephasing")?;
    let mut acc = CMatrix::zeros(rho.dim(), rho.dim());
    for (_, p) in energy_projectors(h, 1e-9) {
        acc += &p * rho.matrix() * &p;
    }
    Ok(DensityMatrix::from_matrix_unchecked(symmetrize(&acc)))
}

/// Kronecker product with the default dimension cap.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    tensor_capped(a, b, DEFAULT_DIM_CAP)
}

pub fn tensor_capped(a: &CMatrix, b: &CMatrix, cap: usize) -> Result<CMatrix> {
    let rows = a.nrows() as u128 * b.nrows() as u128;
    let cols = a.ncols() as u128 * b.ncols() as u128;
    let dim = rows.max(cols);
    if dim > cap as u128 {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(a.kronecker(b))
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of an operator on `A ⊗ B` over the chosen factor.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), traced: Subsystem) -> Result<CMatrix> {
    let (da, db) = dims;
    if m.nrows() != da * db || m.ncols() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "partial trace: matrix {}x{} vs dims {da}x{db}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(match traced {
        Subsystem::B => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::A => CMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    })
}

/// Partial trace of a density matrix.
pub fn partial_trace_state(
    rho: &DensityMatrix,
    dims: (usize, usize),
    traced: Subsystem,
) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_matrix_unchecked(partial_trace(
        rho.matrix(),
        dims,
        traced,
    )?))
}

/// `Σ_i I^{⊗i−1} ⊗ H ⊗ I^{⊗k−i}` with the default dimension cap.
pub fn iid_hamiltonian(h: &HermitianOperator, k: usize) -> Result<HermitianOperator> {
    iid_hamiltonian_capped(h, k, DEFAULT_DIM_CAP)
}

pub fn iid_hamiltonian_capped(
    h: &HermitianOperator,
    k: usize,
    cap: usize,
) -> Result<HermitianOperator> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of copies must be >= 1".into()));
    }
    let d = h.dim();
    let dim = (d as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if dim > cap as u128 {
        return Err(Error::DimensionCap { dim, cap });
    }
    // H_{k} = H_{k-1} ⊗ I + I^{⊗(k-1)} ⊗ H
    let mut acc = h.matrix().clone();
    for j in 2..=k {
        let prev_dim = d.pow((j - 1) as u32);
        acc = acc.kronecker(&CMatrix::identity(d, d))
            + CMatrix::identity(prev_dim, prev_dim).kronecker(h.matrix());
    }
    Ok(HermitianOperator::from_matrix_unchecked(acc))
}

/// `k`-fold tensor power of a state with the default dimension cap.
pub fn tensor_power(rho: &DensityMatrix, k: usize) -> Result<DensityMatrix> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of copies must be >= 1".into()));
    }
    let dim = (rho.dim() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if dim > DEFAULT_DIM_CAP as u128 {
        return Err(Error::DimensionCap {
            dim,
            cap: DEFAULT_DIM_CAP,
        });
    }
    let mut acc = rho.matrix().clone();
    for _ in 1..k {
        acc = acc.kronecker(rho.matrix());
    }
    Ok(DensityMatrix::from_matrix_unchecked(acc))
}

/// `Tr(ρH²) − Tr(ρH)²`, clamped at zero.
pub fn variance(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    check_same_dim(rho.dim(), h.dim(), "variance")?;
    let rh = rho.matrix() * h.matrix();
    let mean = trace(&rh).re;
    let second = trace(&(&rh * h.matrix())).re;
    Ok((second - mean * mean).max(0.0))
}

/// `Tr(ρH)`.
pub fn expectation(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    check_same_dim(rho.dim(), h.dim(), "expectation")?;
    Ok(trace(&(rho.matrix() * h.matrix())).re)
}

/// Matrix interchange format: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..m.ncols() {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { dim: n, re, im }
    }

    /// Square matrix; `im` may be empty for real matrices.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        if self.re.len() != n * n || !(self.im.is_empty() || self.im.len() == n * n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix json: dim {n} but {} real / {} imaginary entries",
                self.re.len(),
                self.im.len()
            )));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let k = i * n + j;
            Complex64::new(self.re[k], self.im.get(k).copied().unwrap_or(0.0))
        }))
    }
}

/// Rectangular variant used for Kraus operators.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RectMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl RectMatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (r, cl) = m.shape();
        let mut re = Vec::with_capacity(r * cl);
        let mut im = Vec::with_capacity(r * cl);
        for i in 0..r {
            for j in 0..cl {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self {
            rows: r,
            cols: cl,
            re,
            im,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let (r, cl) = (self.rows, self.cols);
        if self.re.len() != r * cl || !(self.im.is_empty() || self.im.len() == r * cl) {
            return Err(Error::DimensionMismatch("kraus json entry count".into()));
        }
        Ok(CMatrix::from_fn(r, cl, |i, j| {
            let k = i * cl + j;
            Complex64::new(self.re[k], self.im.get(k).copied().unwrap_or(0.0))
        }))
    }
}

pub fn read_matrix_json(reader: impl Read) -> Result<CMatrix> {
    let mj: MatrixJson = serde_json::from_reader(reader)?;
    mj.to_matrix()
}

pub fn write_matrix_json(m: &CMatrix, writer: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(writer, &MatrixJson::from_matrix(m))?;
    Ok(())
}

/// Writes `index,eigenvalue` rows.
pub fn write_spectrum_csv(eigenvalues: &[f64], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index", "eigenvalue"])?;
    for (i, e) in eigenvalues.iter().enumerate() {
        w.write_record([i.to_string(), format!("{e:.17e}")])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_mixed_state, seeded_rng};
    use std::f64::consts::PI;

    #[test]
    fn eig_of_diagonal_and_pauli_x() {
        let h = HermitianOperator::from_real_diagonal(&[2.0, 0.0, 1.0]);
        let es = eig_hermitian(&h);
        for (a, b) in es.eigenvalues.iter().zip([0.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let x = HermitianOperator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let ev = x.eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = seeded_rng(7);
        let h = random_hermitian(5, &mut rng);
        let es = eig_hermitian(&h);
        assert!(max_abs(&(es.reconstruct() - h.matrix())) < 1e-9);
        let v = &es.eigenvectors;
        assert!(max_abs(&(v.adjoint() * v - CMatrix::identity(5, 5))) < 1e-9);
        assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(
            eig_hermitian_checked(&m),
            Err(Error::NotHermitian { .. })
        ));
        // float noise is symmetrized away
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0 + 1e-12), c(0.0)]);
        assert!(HermitianOperator::new(m).is_ok());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::diagonal(&[1.2, -0.2]).is_err());
        assert!(DensityMatrix::diagonal(&[0.25, 0.75]).is_ok());
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::pure_real(&[1.0, 0.0]).unwrap();
        let one = DensityMatrix::pure_real(&[0.0, 1.0]).unwrap();
        let mm = DensityMatrix::maximally_mixed(2);
        assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-15);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-14);
        assert!((trace_distance(&zero, &mm).unwrap() - 0.5).abs() < 1e-14);
        assert!(trace_distance(&zero, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn trace_distance_triangle_and_contraction() {
        let mut rng = seeded_rng(11);
        for _ in 0..50 {
            let a = random_mixed_state(4, &mut rng);
            let b = random_mixed_state(4, &mut rng);
            let cst = random_mixed_state(4, &mut rng);
            let ab = trace_distance(&a, &b).unwrap();
            let bc = trace_distance(&b, &cst).unwrap();
            let ac = trace_distance(&a, &cst).unwrap();
            assert!(ac <= ab + bc + 1e-9);
            assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
            let ra = partial_trace_state(&a, (2, 2), Subsystem::B).unwrap();
            let rb = partial_trace_state(&b, (2, 2), Subsystem::B).unwrap();
            assert!(trace_distance(&ra, &rb).unwrap() <= ab + 1e-9);
        }
    }

    #[test]
    fn time_evolution_examples() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = DensityMatrix::pure_real(&[s, s]).unwrap();
        let same = time_evolve(&phi, &h, 0.0).unwrap();
        assert!(max_abs(&(same.matrix() - phi.matrix())) < 1e-14);
        let flipped = time_evolve(&phi, &h, PI).unwrap();
        let minus = DensityMatrix::pure_real(&[s, -s]).unwrap();
        assert!(max_abs(&(flipped.matrix() - minus.matrix())) < 1e-12);
        let diag = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let ev = time_evolve(&diag, &h, 1.234).unwrap();
        assert!(max_abs(&(ev.matrix() - diag.matrix())) < 1e-14);
    }

    #[test]
    fn time_evolution_preserves_spectrum() {
        let mut rng = seeded_rng(3);
        let rho = random_mixed_state(4, &mut rng);
        let h = random_hermitian(4, &mut rng);
        let out = time_evolve(&rho, &h, 0.77).unwrap();
        for (a, b) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn tensor_and_partial_trace() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(tensor(&i2, &i2).unwrap(), CMatrix::identity(4, 4));
        let mut rng = seeded_rng(5);
        let rho = random_mixed_state(2, &mut rng);
        let sigma = random_mixed_state(3, &mut rng);
        let prod = rho.tensor(&sigma).unwrap();
        let back = partial_trace(prod.matrix(), (2, 3), Subsystem::B).unwrap();
        assert!(max_abs(&(back - rho.matrix())) < 1e-14);
        let back = partial_trace(prod.matrix(), (2, 3), Subsystem::A).unwrap();
        assert!(max_abs(&(back - sigma.matrix())) < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure_real(&[s, 0.0, 0.0, s]).unwrap();
        let red = partial_trace(bell.matrix(), (2, 2), Subsystem::B).unwrap();
        assert!(max_abs(&(red - CMatrix::identity(2, 2) * c(0.5))) < 1e-14);
        assert!(partial_trace(bell.matrix(), (3, 2), Subsystem::B).is_err());
    }

    #[test]
    fn iid_hamiltonian_spectrum_is_sumset() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        assert_eq!(iid_hamiltonian(&h, 1).unwrap(), h);
        let ev = iid_hamiltonian(&h, 2).unwrap().eigenvalues();
        for (a, b) in ev.iter().zip([0.0, 1.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let ev = iid_hamiltonian(&h, 3).unwrap().eigenvalues();
        assert!((ev[7] - 3.0).abs() < 1e-14);
        let q = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            iid_hamiltonian(&q, 8),
            Err(Error::DimensionCap { .. })
        ));
        assert!(iid_hamiltonian(&q, 0).is_err());
    }

    #[test]
    fn variance_examples() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi1 = DensityMatrix::pure_real(&[0.5, 0.5, s]).unwrap();
        let psi2 = DensityMatrix::pure_real(&[s, -s, 0.0]).unwrap();
        assert!((variance(&psi1, &h).unwrap() - 11.0 / 16.0).abs() < 1e-14);
        assert!((variance(&psi2, &h).unwrap() - 0.25).abs() < 1e-14);
        let eig = DensityMatrix::pure_real(&[0.0, 1.0, 0.0]).unwrap();
        assert!(variance(&eig, &h).unwrap().abs() < 1e-15);
        let hc = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        let phi = DensityMatrix::pure_real(&[s, s]).unwrap();
        assert!((variance(&phi, &hc).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn matrix_json_roundtrip_and_errors() {
        let mut rng = seeded_rng(1);
        let h = random_hermitian(3, &mut rng);
        let mut buf = Vec::new();
        write_matrix_json(h.matrix(), &mut buf).unwrap();
        let back = read_matrix_json(buf.as_slice()).unwrap();
        assert_eq!(&back, h.matrix());
        let bad = MatrixJson {
            dim: 2,
            re: vec![1.0],
            im: vec![],
        };
        assert!(bad.to_matrix().is_err());
    }

    #[test]
    fn spectrum_csv_has_header() {
        let mut buf = Vec::new();
        write_spectrum_csv(&[0.0, 1.5], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("index,eigenvalue\n0,"));
    }
}
