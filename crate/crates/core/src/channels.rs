//! Quantum channels in Kraus form and the covariance test that singles out the
//! free operations of the resource theory of asymmetry.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{
    c, energy_projectors, max_abs, symmetrize, CMatrix, DensityMatrix, HermitianOperator,
    MatrixJson, RectMatrixJson, Subsystem,
};
use crate::random::{ginibre, haar_unitary, seeded_rng};

/// Tolerance on `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Spectra are treated as integers when every eigenvalue is this close to one.
pub const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct QuantumChannel {
    kraus: Vec<CMatrix>,
    dim_in: usize,
    dim_out: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CovarianceCheck {
    pub covariant: bool,
    /// Max-abs entry of `[J, H_out ⊗ I − I ⊗ H_inᵀ]`.
    pub residual: f64,
}

impl QuantumChannel {
    /// Validates shapes and trace preservation.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("channel needs at least one Kraus operator".into()))?;
        let (dim_out, dim_in) = first.shape();
        if kraus.iter().any(|k| k.shape() != (dim_out, dim_in)) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        let ch = Self { kraus, dim_in, dim_out };
        let dev = ch.completeness_deviation();
        if dev > COMPLETENESS_TOL {
            return Err(Error::InvalidParameter(format!(
                "Kraus operators are not trace preserving (deviation {dev:.3e})"
            )));
        }
        Ok(ch)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc += k.adjoint() * k;
        }
        max_abs(&(acc - CMatrix::identity(self.dim_in, self.dim_in)))
    }

    pub fn identity(dim: usize) -> Self {
        Self { kraus: vec![CMatrix::identity(dim, dim)], dim_in: dim, dim_out: dim }
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// `ρ ↦ Σ_E Π_E ρ Π_E` over the energy eigenspaces of `h`.
    pub fn dephasing(h: &HermitianOperator) -> Self {
        let kraus = energy_projectors(h, INTEGER_TOL).into_iter().map(|(_, p)| p).collect();
        Self { kraus, dim_in: h.dim(), dim_out: h.dim() }
    }

    /// Discards one factor of `A ⊗ B`.
    pub fn partial_trace(dims: (usize, usize), traced: Subsystem) -> Self {
        let (da, db) = dims;
        let (kept, gone) = match traced {
            Subsystem::A => (db, da),
            Subsystem::B => (da, db),
        };
        let kraus = (0..gone)
            .map(|k| {
                let mut m = CMatrix::zeros(kept, da * db);
                for i in 0..kept {
                    let col = match traced {
                        Subsystem::A => k * db + i,
                        Subsystem::B => i * db + k,
                    };
                    m[(i, col)] = c(1.0);
                }
                m
            })
            .collect();
        Self { kraus, dim_in: da * db, dim_out: kept }
    }

    /// `Σ K ρ K†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input {} vs state {}",
                self.dim_in,
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_matrix_unchecked(symmetrize(&self.apply_matrix(rho.matrix()))))
    }

    fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            acc += k * m * k.adjoint();
        }
        acc
    }

    /// Choi matrix `J = Σ_ij ℰ(|i⟩⟨j|) ⊗ |i⟩⟨j|` on output ⊗ input.
    pub fn choi(&self) -> CMatrix {
        let (di, d_out) = (self.dim_in, self.dim_out);
        let mut j = CMatrix::zeros(d_out * di, d_out * di);
        for k in &self.kraus {
            // vec(K) = Σ_i K|i⟩ ⊗ |i⟩, and J = Σ_K vec(K) vec(K)†
            let mut v = nalgebra::DVector::zeros(d_out * di);
            for a in 0..d_out {
                for i in 0..di {
                    v[a * di + i] = k[(a, i)];
                }
            }
            j += &v * v.adjoint();
        }
        j
    }

    /// Sequential composition `other ∘ self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if other.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch("channel composition".into()));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for b in &other.kraus {
            for a in &self.kraus {
                kraus.push(b * a);
            }
        }
        Ok(Self { kraus, dim_in: self.dim_in, dim_out: other.dim_out })
    }
}

/// Covariance test through the Choi matrix: `ℰ` is covariant with respect to
/// `(H_in, H_out)` iff `J` commutes with `H_out ⊗ I − I ⊗ H_inᵀ`.
pub fn is_covariant(
    ch: &QuantumChannel,
    h_in: &HermitianOperator,
    h_out: &HermitianOperator,
    tol: f64,
) -> Result<CovarianceCheck> {
    if h_in.dim() != ch.dim_in || h_out.dim() != ch.dim_out {
        return Err(Error::DimensionMismatch("Hamiltonians vs channel dimensions".into()));
    }
    let j = ch.choi();
    let gen = h_out.matrix().kronecker(&CMatrix::identity(ch.dim_in, ch.dim_in))
        - CMatrix::identity(ch.dim_out, ch.dim_out).kronecker(&h_in.matrix().transpose());
    let residual = max_abs(&(&j * &gen - &gen * &j));
    Ok(CovarianceCheck { covariant: residual <= tol, residual })
}

/// Rounds the spectrum of `h` to integers, failing if any eigenvalue is not
/// within [`INTEGER_TOL`] of one.
pub fn integer_spectrum(h: &HermitianOperator) -> Result<Vec<i64>> {
    h.eigenvalues()
        .into_iter()
        .map(|e| {
            let r = e.round();
            if (e - r).abs() > INTEGER_TOL {
                Err(Error::NonIntegerSpectrum(format!("eigenvalue {e}")))
            } else {
                Ok(r as i64)
            }
        })
        .collect()
}

fn multiplicities(levels: &[i64]) -> BTreeMap<i64, Vec<usize>> {
    let mut m: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &e) in levels.iter().enumerate() {
        m.entry(e).or_default().push(i);
    }
    m
}

/// Random covariant channel from `(H_in)` to `(H_out)` via a covariant
/// Stinespring isometry `V : in → out ⊗ E` with environment Hamiltonian
/// `H_E = diag(0, …, ancilla_dim − 1)`.
///
/// `V` maps the input level `n` into the level `n + s` of `H_out ⊗ I + I ⊗ H_E`
/// (with a seeded choice of offset `s`), as a Haar-random isometry on each
/// block. Both Hamiltonians must have integer spectra.
pub fn random_covariant_channel(
    h_in: &HermitianOperator,
    h_out: &HermitianOperator,
    ancilla_dim: usize,
    seed: u64,
) -> Result<QuantumChannel> {
    if ancilla_dim == 0 {
        return Err(Error::InvalidParameter("ancilla_dim must be ≥ 1".into()));
    }
    let ein = h_in.eig();
    let eout = h_out.eig();
    let lin = integer_spectrum(h_in)?;
    let lout = integer_spectrum(h_out)?;
    let (di, d_out, de) = (h_in.dim(), h_out.dim(), ancilla_dim);
    // joint basis index a*de + k ↔ (out eigenvector a, environment level k)
    let joint: Vec<i64> = (0..d_out * de).map(|idx| lout[idx / de] + (idx % de) as i64).collect();
    let src = multiplicities(&lin);
    let dst = multiplicities(&joint);
    let lo = joint.iter().min().unwrap() - lin.iter().max().unwrap();
    let hi = joint.iter().max().unwrap() - lin.iter().min().unwrap();
    let offsets: Vec<i64> = (lo..=hi)
        .filter(|s| {
            src.iter()
                .all(|(n, idx)| dst.get(&(n + s)).is_some_and(|t| t.len() >= idx.len()))
        })
        .collect();
    let mut rng = seeded_rng(seed);
    let &shift = offsets.choose(&mut rng).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no energy-conserving embedding of input levels {lin:?} into output ⊗ ancilla levels"
        ))
    })?;
    let mut v_eig = CMatrix::zeros(d_out * de, di);
    for (n, idx) in &src {
        let targets = &dst[&(n + shift)];
        let block = if targets.len() == idx.len() {
            haar_unitary(idx.len(), &mut rng)
        } else {
            let g = ginibre(targets.len(), idx.len(), &mut rng);
            g.qr().q()
        };
        for (bi, &col) in idx.iter().enumerate() {
            for (ti, &row) in targets.iter().enumerate() {
                v_eig[(row, col)] = block[(ti, bi)];
            }
        }
    }
    // V = (U_out ⊗ I) V_eig U_in†
    let u_out = eout.eigenvectors.kronecker(&CMatrix::identity(de, de));
    let v = u_out * v_eig * ein.eigenvectors.adjoint();
    let kraus = (0..de)
        .map(|k| CMatrix::from_fn(d_out, di, |a, i| v[(a * de + k, i)]))
        .collect();
    QuantumChannel::new(kraus)
}

/// Haar-random unitary channel, covariant only by accident.
pub fn random_unitary_channel(dim: usize, seed: u64) -> QuantumChannel {
    let mut rng = seeded_rng(seed);
    QuantumChannel { kraus: vec![haar_unitary(dim, &mut rng)], dim_in: dim, dim_out: dim }
}

/// One serialized Kraus operator: the square `{dim, re, im}` form or the
/// rectangular `{rows, cols, re, im}` form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KrausJson {
    Square(MatrixJson),
    Rect(RectMatrixJson),
}

impl KrausJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        if m.is_square() {
            Self::Square(MatrixJson::from_matrix(m))
        } else {
            Self::Rect(RectMatrixJson::from_matrix(m))
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        match self {
            Self::Square(m) => m.to_matrix(),
            Self::Rect(m) => m.to_matrix(),
        }
    }
}

pub fn read_kraus_json(reader: impl Read) -> Result<QuantumChannel> {
    let list: Vec<KrausJson> = serde_json::from_reader(reader)?;
    QuantumChannel::new(list.iter().map(KrausJson::to_matrix).collect::<Result<_>>()?)
}

pub fn write_kraus_json(ch: &QuantumChannel, writer: impl Write) -> Result<()> {
    let list: Vec<KrausJson> = ch.kraus.iter().map(KrausJson::from_matrix).collect();
    serde_json::to_writer_pretty(writer, &list)?;
    Ok(())
}
