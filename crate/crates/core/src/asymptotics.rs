//! State families indexed by `m`, finite-grid estimates of the smooth skew
//! information rates
//!
//! ```text
//! I^f_+ = lim_{ε→0} limsup_m (1/m) I^f_ε(ρ_m, H_m),   I^f_− = lim_{ε→0} liminf_m (1/m) I^f_ε(ρ_m, H_m),
//! ```
//!
//! and the bounds `C_cost ≥ 4I^f_+ ≥ 4I^f_− ≥ C_dist` they imply.
//!
//! Pure members are stored in their energy-reduced form: one basis vector
//! `Π_n ψ / ‖Π_n ψ‖` per energy level `n` between the lowest and highest
//! occupied level, with `H = diag(levels)`. Covariant channels map the full
//! pair to the reduced pair and back, so every skew information and its
//! smoothed version is unchanged.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monotone::{MonotoneFunction, MonotoneTag};
use crate::operator::{
    c, dephase, iid_hamiltonian_capped, tensor_power, trace_distance, variance, DensityMatrix,
    HermitianOperator, DEFAULT_DIM_CAP,
};
use crate::random::{random_mixed_state, seeded_rng};
use crate::sequences::{convolve, energy_distribution, normalize_period, IntSequence};
use crate::skew::skew_info;
use crate::smoothing::{smooth_skew_info, SmoothingOptions};
use crate::variance_bound::lower_bound_params;

/// Exact positive rational `num/den`, so that `⌈Rm⌉` has no rounding error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    num: u64,
    den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameter(format!("rate {num}/{den} must be positive")));
        }
        let g = gcd(num, den);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn one() -> Self {
        Self { num: 1, den: 1 }
    }

    /// `⌈R m⌉`.
    pub fn copies(&self, m: usize) -> usize {
        (self.num as usize * m).div_ceil(self.den as usize)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rate {
    type Err = Error;

    /// Accepts `3`, `3/4` or a finite decimal such as `0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse rate '{s}'"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            return Self::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        }
        match s.split_once('.') {
            None => Self::new(s.parse().map_err(|_| bad())?, 1),
            Some((int, frac)) => {
                if frac.len() > 12 || !frac.chars().all(|ch| ch.is_ascii_digit()) {
                    return Err(bad());
                }
                let den = 10u64.pow(frac.len() as u32);
                let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
                let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
                let num = int.checked_mul(den).and_then(|n| n.checked_add(frac)).ok_or_else(bad)?;
                Self::new(num, den)
            }
        }
    }
}

impl Serialize for Rate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One element `(ρ_m, H_m)` of a family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub state: DensityMatrix,
    pub hamiltonian: HermitianOperator,
    /// Dimension of the underlying many-copy Hilbert space, saturating at `u128::MAX`.
    pub full_dim: u128,
}

fn power_dim(d: usize, k: usize) -> u128 {
    u32::try_from(k).ok().and_then(|k| (d as u128).checked_pow(k)).unwrap_or(u128::MAX)
}

#[derive(Debug, Clone)]
enum Kind {
    Iid {
        psi: DensityMatrix,
        h: HermitianOperator,
        rate: Rate,
        levels: IntSequence,
    },
    NonIid,
    Symmetric {
        rho: DensityMatrix,
        h: HermitianOperator,
    },
    /// Mixes each member with its dephased version at weight `w`, a covariant map.
    PartialDephasing {
        inner: Box<StateFamily>,
        weight: f64,
    },
}

#[derive(Debug, Clone)]
pub struct StateFamily {
    pub label: String,
    /// Largest `m` whose full many-copy dimension fits [`DEFAULT_DIM_CAP`].
    pub m_cap: usize,
    kind: Kind,
}

fn largest_m(site_dim: usize, copies: impl Fn(usize) -> usize) -> usize {
    let mut m = 0;
    while (site_dim as u128).pow(copies(m + 1) as u32) <= DEFAULT_DIM_CAP as u128 {
        m += 1;
        if m > 64 {
            break;
        }
    }
    m
}

/// Reduced pure state with amplitudes `√p(n)` on levels `offset..`.
fn reduced_pure(p: &IntSequence) -> Result<(DensityMatrix, HermitianOperator)> {
    let amps: Vec<f64> = p.values.iter().map(|x| x.max(0.0).sqrt()).collect();
    let levels: Vec<f64> = p.indexed().map(|(n, _)| n as f64).collect();
    Ok((DensityMatrix::pure_real(&amps)?, HermitianOperator::from_real_diagonal(&levels)))
}

impl StateFamily {
    /// `ψ̂_iid(R) = {ψ^{⊗⌈Rm⌉}}` with `H_m = Σ_k H^{(k)}`, after period normalization.
    pub fn iid(psi: &DensityMatrix, h: &HermitianOperator, rate: Rate) -> Result<Self> {
        if !psi.is_pure(1e-8) {
            return Err(Error::InvalidParameter("i.i.d. families need a pure state".into()));
        }
        let (hn, _) = normalize_period(psi, h)?;
        let levels = energy_distribution(psi, &hn)?.into_sequence();
        let d = psi.dim();
        Ok(Self {
            label: format!("iid(R={rate})"),
            m_cap: largest_m(d, |m| rate.copies(m)),
            kind: Kind::Iid { psi: psi.clone(), h: hn, rate, levels },
        })
    }

    /// `ψ_m = √(1−ε_m) φ_coh^{⊗m} + √ε_m |2⟩^{⊗m}` on qutrits with `H = diag(0, 1, 2)` per
    /// site and `ε_m = 1/√m`.
    pub fn noniid_example() -> Self {
        Self { label: "noniid-example".into(), m_cap: largest_m(3, |m| m), kind: Kind::NonIid }
    }

    /// Constant symmetric sequence `ρ^{⊗m}`; `ρ` must commute with `H`.
    pub fn symmetric(rho: &DensityMatrix, h: &HermitianOperator) -> Result<Self> {
        if !rho.commutes_with(h, 1e-9)? {
            return Err(Error::InvalidParameter("state does not commute with the Hamiltonian".into()));
        }
        Ok(Self {
            label: "symmetric".into(),
            m_cap: largest_m(rho.dim(), |m| m),
            kind: Kind::Symmetric { rho: rho.clone(), h: h.clone() },
        })
    }

    /// Applies `ρ ↦ (1−w)ρ + w Δ(ρ)` to every member, where `Δ` removes energy coherence.
    pub fn partially_dephased(inner: StateFamily, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidParameter(format!("weight {weight} must lie in [0, 1]")));
        }
        Ok(Self {
            label: format!("{}+dephase({weight})", inner.label),
            m_cap: inner.m_cap,
            kind: Kind::PartialDephasing { inner: Box::new(inner), weight },
        })
    }

    /// `ε_m = 1/√m` of the non-i.i.d. example.
    pub fn noniid_weight(m: usize) -> f64 {
        1.0 / (m as f64).sqrt()
    }

    /// Energy distribution of `φ_coh^{⊗m}`: binomial(m, ½).
    fn coherent_levels(m: usize) -> IntSequence {
        let half = IntSequence::finite(0, vec![0.5, 0.5]);
        let mut acc = IntSequence::delta(0);
        for _ in 0..m {
            acc = convolve(&acc, &half);
        }
        acc
    }

    /// Member `m` in reduced form (pure families) or as the full tensor power.
    pub fn member(&self, m: usize) -> Result<FamilyMember> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        match &self.kind {
            Kind::Iid { psi, rate, levels, .. } => {
                let k = rate.copies(m);
                let mut acc = IntSequence::delta(0);
                for _ in 0..k {
                    acc = convolve(&acc, levels);
                }
                let (state, hamiltonian) = reduced_pure(&acc.trimmed())?;
                Ok(FamilyMember { state, hamiltonian, full_dim: power_dim(psi.dim(), k) })
            }
            Kind::NonIid => {
                let eps = Self::noniid_weight(m);
                let bin = Self::coherent_levels(m);
                let mut values = vec![0.0; 2 * m + 1];
                for (n, v) in bin.indexed() {
                    values[n as usize] = (1.0 - eps) * v;
                }
                values[2 * m] += eps;
                let (state, hamiltonian) = reduced_pure(&IntSequence::finite(0, values))?;
                Ok(FamilyMember { state, hamiltonian, full_dim: power_dim(3, m) })
            }
            Kind::Symmetric { rho, h } => {
                let state = tensor_power(rho, m)?;
                let hamiltonian = iid_hamiltonian_capped(h, m, DEFAULT_DIM_CAP)?;
                Ok(FamilyMember { state, hamiltonian, full_dim: power_dim(rho.dim(), m) })
            }
            Kind::PartialDephasing { inner, weight } => {
                let mut mem = inner.member(m)?;
                let deph = dephase(&mem.state, &mem.hamiltonian)?;
                mem.state = mem.state.mix(&deph, *weight)?;
                Ok(mem)
            }
        }
    }

    /// Member `m` on the full many-copy space, for cross-checks of the reduced form.
    pub fn full_member(&self, m: usize) -> Result<FamilyMember> {
        match &self.kind {
            Kind::Iid { psi, h, rate, .. } => {
                let k = rate.copies(m);
                Ok(FamilyMember {
                    state: tensor_power(psi, k)?,
                    hamiltonian: iid_hamiltonian_capped(h, k, DEFAULT_DIM_CAP)?,
                    full_dim: power_dim(psi.dim(), k),
                })
            }
            Kind::NonIid => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let site = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]);
                let phi = tensor_power(&DensityMatrix::pure_real(&[s, s, 0.0])?, m)?;
                let two = tensor_power(&DensityMatrix::pure_real(&[0.0, 0.0, 1.0])?, m)?;
                let phi_v = phi.top_eigenvector();
                let two_v = two.top_eigenvector();
                let eps = Self::noniid_weight(m);
                // top eigenvectors carry arbitrary phases; fix them to be real-positive at their largest entry
                let fix = |v: Vec<Complex64>| {
                    let k = (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
                    let ph = v[k] / v[k].norm();
                    v.into_iter().map(|z| z / ph).collect::<Vec<_>>()
                };
                let (a, b) = (fix(phi_v), fix(two_v));
                let amps: Vec<Complex64> = a
                    .iter()
                    .zip(&b)
                    .map(|(x, y)| x * c((1.0 - eps).sqrt()) + y * c(eps.sqrt()))
                    .collect();
                Ok(FamilyMember {
                    state: DensityMatrix::pure(&amps)?,
                    hamiltonian: iid_hamiltonian_capped(&site, m, DEFAULT_DIM_CAP)?,
                    full_dim: power_dim(3, m),
                })
            }
            Kind::Symmetric { .. } => self.member(m),
            Kind::PartialDephasing { inner, weight } => {
                let mut mem = inner.full_member(m)?;
                let deph = dephase(&mem.state, &mem.hamiltonian)?;
                mem.state = mem.state.mix(&deph, *weight)?;
                Ok(mem)
            }
        }
    }

    /// Reduced `φ_coh^{⊗m}` on the same basis as the non-i.i.d. member `m`.
    pub fn noniid_reference(m: usize) -> Result<DensityMatrix> {
        let bin = Self::coherent_levels(m);
        let mut values = vec![0.0; 2 * m + 1];
        for (n, v) in bin.indexed() {
            values[n as usize] = v;
        }
        Ok(reduced_pure(&IntSequence::finite(0, values))?.0)
    }

    /// `(√m/4)(9m − 8√m − 1)`.
    pub fn noniid_variance_formula(m: usize) -> f64 {
        let mf = m as f64;
        let r = mf.sqrt();
        r / 4.0 * (9.0 * mf - 8.0 * r - 1.0)
    }
}

/// Finite-grid estimate of the smooth rates.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub family: String,
    pub f_tag: MonotoneTag,
    pub m_grid: Vec<usize>,
    pub eps_grid: Vec<f64>,
    /// `values[i][j] = (1/m_i) I^f_{ε_j}(ρ_{m_i}, H_{m_i})`.
    pub values: Vec<Vec<f64>>,
    pub converged: Vec<Vec<bool>>,
    /// `(1/m) I^f(ρ_m, H_m)` without smoothing.
    pub unsmoothed: Vec<f64>,
    pub tail_window: usize,
    pub sup_estimate: f64,
    pub inf_estimate: f64,
    pub caveat: String,
}

impl RateReport {
    /// Largest increase of a value along decreasing `ε` for fixed `m`.
    pub fn epsilon_monotonicity_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.values {
            for w in row.windows(2) {
                worst = worst.max(w[0] - w[1]);
            }
        }
        worst
    }
}

pub const RATE_CAVEAT: &str = "The rates are limits m → ∞ followed by ε → 0. These estimates are the \
extrema of (1/m)·I^f_ε over the largest-m window at the smallest ε of a finite grid; the double limit \
is extrapolated, not computed.";

/// Fills the `(m, ε)` grid with smoothed values per copy and reads off the
/// tail-window extrema at the smallest `ε`.
pub fn estimate_rates(
    family: &StateFamily,
    f: &MonotoneFunction,
    m_grid: &[usize],
    eps_grid: &[f64],
    opts: &SmoothingOptions,
) -> Result<RateReport> {
    if m_grid.is_empty() || eps_grid.is_empty() {
        return Err(Error::InvalidParameter("m and ε grids must be nonempty".into()));
    }
    if let Some(&m) = m_grid.iter().find(|&&m| m == 0 || m > family.m_cap) {
        return Err(Error::DimensionCap { dim: m as u128, cap: family.m_cap });
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("ε grid must be strictly decreasing".into()));
    }
    let members: Vec<FamilyMember> = m_grid.iter().map(|&m| family.member(m)).collect::<Result<_>>()?;
    let unsmoothed: Vec<f64> = members
        .iter()
        .zip(m_grid)
        .map(|(mem, &m)| Ok(skew_info(&mem.state, &mem.hamiltonian, f)?.value / m as f64))
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, usize)> =
        (0..m_grid.len()).flat_map(|i| (0..eps_grid.len()).map(move |j| (i, j))).collect();
    let results: Vec<(f64, bool)> = cells
        .par_iter()
        .map(|&(i, j)| {
            let mem = &members[i];
            let r = smooth_skew_info(&mem.state, &mem.hamiltonian, f, eps_grid[j], opts)?;
            Ok((r.value / m_grid[i] as f64, r.converged))
        })
        .collect::<Result<_>>()?;
    let ne = eps_grid.len();
    let values: Vec<Vec<f64>> = (0..m_grid.len()).map(|i| (0..ne).map(|j| results[i * ne + j].0).collect()).collect();
    let converged = (0..m_grid.len()).map(|i| (0..ne).map(|j| results[i * ne + j].1).collect()).collect();
    let tail_window = m_grid.len().min(3);
    let last: Vec<f64> = values[m_grid.len() - tail_window..].iter().map(|row| row[ne - 1]).collect();
    let sup_estimate = last.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inf_estimate = last.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(RateReport {
        family: family.label.clone(),
        f_tag: f.tag().clone(),
        m_grid: m_grid.to_vec(),
        eps_grid: eps_grid.to_vec(),
        values,
        converged,
        unsmoothed,
        tail_window,
        sup_estimate,
        inf_estimate,
        caveat: RATE_CAVEAT.into(),
    })
}

/// Estimate of the lower bound `C_cost ≥ 4 I^f_+`.
pub fn cost_lower_bound(report: &RateReport) -> f64 {
    4.0 * report.sup_estimate
}

/// Estimate of the upper bound `4 I^f_− ≥ C_dist`.
pub fn dist_upper_bound(report: &RateReport) -> f64 {
    4.0 * report.inf_estimate
}

/// `4 I^f(ρ, H) ≥ C_dist` for i.i.d. copies of a (possibly mixed) state, by additivity.
pub fn iid_dist_upper_bound(rho: &DensityMatrix, h: &HermitianOperator, f: &MonotoneFunction) -> Result<f64> {
    Ok(4.0 * skew_info(rho, h, f)?.value)
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalMinimumCheck {
    pub m: usize,
    pub epsilon: f64,
    pub variance: f64,
    pub delta_f: f64,
    /// `Var(ψ, H) − δ^f(ε) − slack`.
    pub threshold: f64,
    /// Smallest `(1/m) I^f` over random states in the ball.
    pub sampled_min: f64,
    /// `(1/m) I^f_ε` from the optimizer.
    pub smoothed: f64,
    pub holds: bool,
}

/// Checks `(1/m) I^f(σ_m) ≥ Var(ψ,H) − δ^f(ε) − slack` for random `σ_m` in
/// the ε-ball around `ψ^{⊗m}` and for the optimizer's minimizer.
pub fn local_minimum_check(
    psi: &DensityMatrix,
    h: &HermitianOperator,
    f: &MonotoneFunction,
    eps: f64,
    m: usize,
    samples: usize,
    slack: f64,
    seed: u64,
) -> Result<LocalMinimumCheck> {
    let var = variance(psi, h)?;
    let params = lower_bound_params(var, eps, f)?;
    let family = StateFamily::iid(psi, h, Rate::one())?;
    let full = family.full_member(m)?;
    let mut rng = seeded_rng(seed);
    let mut sampled_min = f64::INFINITY;
    for _ in 0..samples {
        let tau = random_mixed_state(full.state.dim(), &mut rng);
        let d = trace_distance(&full.state, &tau)?;
        let u: f64 = rand::Rng::random(&mut rng);
        let t = if d > 0.0 { (eps / d).min(1.0) * u } else { 0.0 };
        let sigma = full.state.mix(&tau, t)?;
        sampled_min = sampled_min.min(skew_info(&sigma, &full.hamiltonian, f)?.value / m as f64);
    }
    let red = family.member(m)?;
    let smoothed = smooth_skew_info(&red.state, &red.hamiltonian, f, eps, &SmoothingOptions { seed, ..Default::default() })?.value
        / m as f64;
    let threshold = var - params.delta_f - slack;
    Ok(LocalMinimumCheck {
        m,
        epsilon: eps,
        variance: var,
        delta_f: params.delta_f,
        threshold,
        sampled_min,
        smoothed,
        holds: sampled_min >= threshold && smoothed >= threshold,
    })
}
