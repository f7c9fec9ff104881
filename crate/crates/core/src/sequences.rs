//! Integer-indexed sequences: energy distributions of pure states, the
//! generalized Poisson family `P_λ(n) = e^{−λ} λⁿ / n!`, convolution and its
//! inverse, and the max/min quantum Fisher information
//!
//! ```text
//! F_max(p) = inf { 4λ : P_λ * p̃ ≥ 0 },    F_min(p) = sup { 4λ : p * P_{−λ} ≥ 0 }.
//! ```
//!
//! Every sequence is one-sided (zero below `offset`) and carries a certified
//! bound on the ℓ₁ mass beyond its stored range, so that nonnegativity
//! conditions quantified over all integers can be decided from finite data.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::channels::INTEGER_TOL;
use crate::error::{Error, Result};
use crate::operator::{check_same_dim, DensityMatrix, HermitianOperator};

/// Entries above this value count as nonnegative in feasibility checks.
pub const NONNEG_TOL: f64 = -1e-9;
/// Largest tail bound accepted by a feasibility check.
pub const FEASIBILITY_TAIL: f64 = 1e-9;
/// Target tail bound when choosing truncation lengths.
pub const TRUNCATION_TAIL: f64 = 1e-10;
/// Bisection steps for `F_max` / `F_min`.
pub const BISECTION_STEPS: usize = 60;
/// Longest stored range used when certifying tails.
pub const MAX_STORED_LEN: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntSequence {
    /// Index of `values[0]`.
    pub offset: i64,
    pub values: Vec<f64>,
    /// Bound on `Σ |a(n)|` over `n ≥ offset + values.len()`.
    pub tail_bound: f64,
}

impl IntSequence {
    pub fn new(offset: i64, values: Vec<f64>, tail_bound: f64) -> Self {
        Self { offset, values, tail_bound }
    }

    pub fn finite(offset: i64, values: Vec<f64>) -> Self {
        Self::new(offset, values, 0.0)
    }

    /// `δ_{n,k}`.
    pub fn delta(k: i64) -> Self {
        Self::finite(k, vec![1.0])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last stored index.
    pub fn end(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> f64 {
        if n < self.offset {
            return 0.0;
        }
        self.values.get((n - self.offset) as usize).copied().unwrap_or(0.0)
    }

    pub fn stored_l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Υ_k`: `(Υ_k a)(n) = a(n − k)`.
    pub fn shift(&self, k: i64) -> Self {
        Self { offset: self.offset + k, ..self.clone() }
    }

    /// Drops exactly-zero entries at both ends (only trailing ones when the tail is nonzero).
    pub fn trimmed(&self) -> Self {
        let first = self.values.iter().position(|&v| v != 0.0);
        let Some(first) = first else {
            return Self::new(self.offset, Vec::new(), self.tail_bound);
        };
        let last = if self.tail_bound == 0.0 {
            self.values.iter().rposition(|&v| v != 0.0).unwrap()
        } else {
            self.values.len() - 1
        };
        Self::new(self.offset + first as i64, self.values[first..=last].to_vec(), self.tail_bound)
    }

    /// Restricts storage to `n ≤ end`, moving the dropped mass into the tail bound.
    pub fn truncated(&self, end: i64) -> Self {
        if end >= self.end() {
            return self.clone();
        }
        let keep = (end - self.offset + 1).max(0) as usize;
        let dropped: f64 = self.values[keep..].iter().map(|v| v.abs()).sum();
        Self::new(self.offset, self.values[..keep].to_vec(), self.tail_bound + dropped)
    }

    pub fn mean(&self) -> f64 {
        let s = self.sum();
        self.indexed().map(|(n, v)| n as f64 * v).sum::<f64>() / s
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        let s = self.sum();
        (self.indexed().map(|(n, v)| (n as f64 - mu).powi(2) * v).sum::<f64>() / s).max(0.0)
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.offset + i as i64, v))
    }
}

/// A probability distribution over energy levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyDistribution(IntSequence);

impl EnergyDistribution {
    /// Requires entries ≥ −1e-12 and total mass within 1e-9 (+ tail) of one.
    pub fn new(seq: IntSequence) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::InvalidParameter("empty distribution".into()));
        }
        if seq.min_value() < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "negative probability {}",
                seq.min_value()
            )));
        }
        let s = seq.sum();
        if (s - 1.0).abs() > 1e-9 + seq.tail_bound {
            return Err(Error::InvalidParameter(format!("probabilities sum to {s}")));
        }
        Ok(Self(seq))
    }

    pub fn from_probabilities(offset: i64, probs: Vec<f64>) -> Result<Self> {
        Self::new(IntSequence::finite(offset, probs))
    }

    pub fn point_mass(n: i64) -> Self {
        Self(IntSequence::delta(n))
    }

    pub fn sequence(&self) -> &IntSequence {
        &self.0
    }

    pub fn into_sequence(self) -> IntSequence {
        self.0
    }

    pub fn mean(&self) -> f64 {
        self.0.mean()
    }

    pub fn variance(&self) -> f64 {
        self.0.variance()
    }
}

/// Affine change of energy scale applied by [`normalize_period`]: `H' = (H − shift)/scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodNormalization {
    pub shift: f64,
    pub scale: f64,
}

fn support_levels(psi: &DensityMatrix, h: &HermitianOperator) -> Result<Vec<(f64, f64)>> {
    check_same_dim(psi.dim(), h.dim(), "state vs Hamiltonian")?;
    if !psi.is_pure(1e-8) {
        return Err(Error::InvalidParameter("energy distributions need a pure state".into()));
    }
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (e, p) in crate::operator::energy_projectors(h, INTEGER_TOL) {
        let w = (&p * psi.matrix()).trace().re;
        out.push((e, w.max(0.0)));
    }
    Ok(out)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rescales `H` so that its levels on the support of `ψ` are integers with
/// lowest level 0 and coprime gaps, which makes the period of `ψ` equal to 2π.
pub fn normalize_period(
    psi: &DensityMatrix,
    h: &HermitianOperator,
) -> Result<(HermitianOperator, PeriodNormalization)> {
    let levels: Vec<f64> = support_levels(psi, h)?
        .into_iter()
        .filter(|&(_, w)| w > 1e-12)
        .map(|(e, _)| e)
        .collect();
    let e0 = levels[0];
    let gaps: Vec<f64> = levels.iter().map(|e| e - e0).filter(|g| *g > 0.0).collect();
    let Some(&gmin) = gaps.iter().min_by(|a, b| a.total_cmp(b)) else {
        return Ok((h.shifted(-e0), PeriodNormalization { shift: e0, scale: 1.0 }));
    };
    let gmax = gaps.iter().copied().fold(0.0, f64::max);
    for denom in 1..=1000u64 {
        let unit = gmin / denom as f64;
        let ints: Option<Vec<u64>> = gaps
            .iter()
            .map(|g| {
                let r = g / unit;
                ((r - r.round()).abs() * unit <= 1e-9 * gmax.max(1.0)).then(|| r.round() as u64)
            })
            .collect();
        if let Some(ints) = ints {
            let d = ints.iter().copied().fold(0, gcd);
            let scale = unit * d as f64;
            return Ok((
                h.shifted(-e0).scaled(1.0 / scale),
                PeriodNormalization { shift: e0, scale },
            ));
        }
    }
    Err(Error::NoFinitePeriod)
}

/// `p_ψ(n) = ⟨ψ|Π_n|ψ⟩` for a Hamiltonian whose occupied levels are integers.
pub fn energy_distribution(psi: &DensityMatrix, h: &HermitianOperator) -> Result<EnergyDistribution> {
    let levels = support_levels(psi, h)?;
    let mut pts: Vec<(i64, f64)> = Vec::new();
    for (e, w) in levels {
        if w <= 1e-14 {
            continue;
        }
        let r = e.round();
        if (e - r).abs() > INTEGER_TOL {
            return Err(Error::NonIntegerSpectrum(format!(
                "occupied level {e} is not an integer; call normalize_period first"
            )));
        }
        pts.push((r as i64, w));
    }
    let lo = pts.iter().map(|p| p.0).min().unwrap();
    let hi = pts.iter().map(|p| p.0).max().unwrap();
    let mut values = vec![0.0; (hi - lo + 1) as usize];
    for (n, w) in pts {
        values[(n - lo) as usize] += w;
    }
    let s: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= s);
    EnergyDistribution::new(IntSequence::finite(lo, values))
}

fn poisson_log_term(lambda: f64, n: u64) -> f64 {
    -lambda + n as f64 * lambda.abs().ln() - ln_gamma(n as f64 + 1.0)
}

/// Bound on `Σ_{n > n_max} |P_λ(n)|` from the ratio test.
fn poisson_tail(lambda: f64, n_max: u64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let a = lambda.abs();
    let next = poisson_log_term(lambda, n_max + 1).exp();
    let ratio = a / (n_max as f64 + 2.0);
    if ratio < 1.0 {
        next / (1.0 - ratio)
    } else {
        (a - lambda).exp()
    }
}

/// `P_λ` on `[0, n_max]`; `λ < 0` gives the signed sequence that inverts `P_{|λ|}`.
pub fn poisson(lambda: f64, n_max: u64) -> IntSequence {
    let values = (0..=n_max)
        .map(|n| {
            if lambda == 0.0 {
                return if n == 0 { 1.0 } else { 0.0 };
            }
            let v = poisson_log_term(lambda, n).exp();
            if lambda < 0.0 && n % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    IntSequence::new(0, values, poisson_tail(lambda, n_max))
}

/// Smallest `n_max` with the `P_λ` tail bound below `tail`.
pub fn poisson_cutoff(lambda: f64, tail: f64) -> u64 {
    let a = lambda.abs();
    let mut n = (a + 10.0 * a.sqrt()).ceil() as u64 + 10;
    while poisson_tail(lambda, n) > tail && n < MAX_STORED_LEN as u64 {
        n += 1 + n / 8;
    }
    n
}

/// `P_λ` truncated where its tail bound drops below `tail`.
pub fn poisson_to_tail(lambda: f64, tail: f64) -> IntSequence {
    poisson(lambda, poisson_cutoff(lambda, tail))
}

/// `(a*b)(n) = Σ_k a(n−k) b(k)`, exact on the stored range of the result
/// (which ends where the shorter factor's exact knowledge ends).
pub fn convolve(a: &IntSequence, b: &IntSequence) -> IntSequence {
    if a.is_empty() || b.is_empty() {
        let tail = a.tail_bound * (b.stored_l1() + b.tail_bound) + b.tail_bound * a.stored_l1();
        return IntSequence::new(a.offset + b.offset, Vec::new(), tail);
    }
    let full_len = a.len() + b.len() - 1;
    let mut full = vec![0.0; full_len];
    for (i, &x) in a.values.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.values.iter().enumerate() {
            full[i + j] += x * y;
        }
    }
    let offset = a.offset + b.offset;
    // Entries at or beyond the first index a tail can reach are incomplete.
    let mut keep = full_len;
    if a.tail_bound > 0.0 {
        keep = keep.min(a.len());
    }
    if b.tail_bound > 0.0 {
        keep = keep.min(b.len());
    }
    let dropped: f64 = full[keep..].iter().map(|v| v.abs()).sum();
    let tail = dropped
        + a.stored_l1() * b.tail_bound
        + a.tail_bound * b.stored_l1()
        + a.tail_bound * b.tail_bound;
    full.truncate(keep);
    IntSequence::new(offset, full, tail)
}

/// `½ Σ_n |p(n) − q(n)|` over the stored ranges.
pub fn total_variation(p: &IntSequence, q: &IntSequence) -> f64 {
    let lo = p.offset.min(q.offset);
    let hi = p.end().max(q.end());
    0.5 * (lo..=hi).map(|n| (p.get(n) - q.get(n)).abs()).sum::<f64>()
}

/// Radius `r` with `Σ_{k≥1} |q_k| r^k = |q_0|`; every root of `q(z)` has `|z| ≥ r`.
fn cauchy_root_radius(q: &[f64]) -> f64 {
    let q0 = q[0].abs();
    let h = |r: f64| q[1..].iter().enumerate().map(|(k, c)| c.abs() * r.powi(k as i32 + 1)).sum::<f64>() - q0;
    if q.len() == 1 {
        return f64::INFINITY;
    }
    let mut hi = 1.0;
    while h(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Tail bound for the inverse of a finitely supported `q` stored up to `n_max`:
/// Cauchy estimates `|q̃(n)| ≤ M(ρ)/ρⁿ` with `M(ρ) = 1/(|q₀| − Σ_{k≥1}|q_k|ρ^k)`.
fn inverse_tail_bound(q: &[f64], n_max: usize) -> f64 {
    if q.len() == 1 {
        return 0.0;
    }
    let r = cauchy_root_radius(q);
    if r <= 1.0 {
        return f64::INFINITY;
    }
    let q0 = q[0].abs();
    let mut best = f64::INFINITY;
    for i in 1..100 {
        let rho = 1.0 + (r.min(1e6) - 1.0) * i as f64 / 100.0;
        let s: f64 = q[1..].iter().enumerate().map(|(k, c)| c.abs() * rho.powi(k as i32 + 1)).sum();
        let denom = q0 - s;
        if denom <= 0.0 {
            continue;
        }
        let log_b = -denom.ln() - (n_max as f64 + 1.0) * rho.ln() - (1.0 - 1.0 / rho).ln();
        best = best.min(log_b.exp());
    }
    best
}

/// `q̃` with `(q * q̃)(n) = δ_{n,0}` on `[−offset, −offset + n_max]`, via
/// `q̃(0) = 1/q(0)`, `q̃(n) = −(1/q(0)) Σ_{k=1}^n q(k) q̃(n−k)` (indices relative to the offset).
///
/// The tail bound is certified for finitely supported `q`, and infinite when
/// `q` itself has an uncertified tail or roots inside the unit disc.
pub fn inverse_sequence(q: &IntSequence, n_max: usize) -> Result<IntSequence> {
    let q0 = *q.values.first().ok_or(Error::ZeroLeadingEntry)?;
    if q0 == 0.0 {
        return Err(Error::ZeroLeadingEntry);
    }
    let mut out = vec![0.0; n_max + 1];
    out[0] = 1.0 / q0;
    for n in 1..=n_max {
        let kmax = n.min(q.len() - 1);
        let s: f64 = (1..=kmax).map(|k| q.values[k] * out[n - k]).sum();
        out[n] = -s / q0;
    }
    let tail = if q.tail_bound == 0.0 {
        inverse_tail_bound(&q.values, n_max)
    } else {
        f64::INFINITY
    };
    Ok(IntSequence::new(-q.offset, out, tail))
}

/// Outcome of the `F_max` bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum MaxFisher {
    Finite { value: f64, lambda: f64 },
    /// No `λ ≤ λ_cap` passed the certified nonnegativity test.
    CapExhausted { lambda_cap: f64 },
}

impl MaxFisher {
    /// `+∞` when the cap was exhausted.
    pub fn value(&self) -> f64 {
        match self {
            Self::Finite { value, .. } => *value,
            Self::CapExhausted { .. } => f64::INFINITY,
        }
    }
}

/// Certified `s ≥ 0`: stored entries above [`NONNEG_TOL`], tail below [`FEASIBILITY_TAIL`].
fn certified_nonnegative(s: &IntSequence) -> bool {
    s.tail_bound < FEASIBILITY_TAIL && s.values.iter().all(|&v| v >= NONNEG_TOL)
}

fn normalized_support(p: &EnergyDistribution) -> Result<IntSequence> {
    let t = p.sequence().trimmed();
    if t.is_empty() {
        return Err(Error::InvalidParameter("distribution has no mass".into()));
    }
    if t.tail_bound != 0.0 {
        return Err(Error::Precondition("F_max/F_min need a finitely supported distribution".into()));
    }
    Ok(t.shift(-t.offset))
}

fn max_feasible(p: &IntSequence, lambda: f64) -> bool {
    let support = p.len();
    let mut n = support + 32;
    loop {
        let inv = match inverse_sequence(p, n) {
            Ok(s) => s,
            Err(_) => return false,
        };
        let pl = poisson(lambda, n as u64);
        let s = convolve(&pl, &inv).truncated(n as i64);
        if s.values.iter().any(|&v| v < NONNEG_TOL) {
            return false;
        }
        if s.tail_bound < FEASIBILITY_TAIL {
            return true;
        }
        if inv.tail_bound.is_infinite() || n >= MAX_STORED_LEN {
            return false;
        }
        n *= 2;
    }
}

fn min_feasible(p: &IntSequence, lambda: f64) -> bool {
    let cutoff = poisson_cutoff(-lambda, TRUNCATION_TAIL / (1.0 + p.stored_l1()));
    let pl = poisson(-lambda, cutoff + p.len() as u64);
    certified_nonnegative(&convolve(p, &pl))
}

/// Default search cap `64 · max(Var(p), 1)`.
pub fn default_lambda_cap(p: &EnergyDistribution) -> f64 {
    64.0 * p.variance().max(1.0)
}

/// `F_max(p) = inf{4λ : P_λ * p̃ ≥ 0}` by bisection on `[0, λ_cap]`.
pub fn f_max(p: &EnergyDistribution, lambda_cap: f64) -> Result<MaxFisher> {
    let q = normalized_support(p)?;
    if max_feasible(&q, 0.0) {
        return Ok(MaxFisher::Finite { value: 0.0, lambda: 0.0 });
    }
    if !max_feasible(&q, lambda_cap) {
        return Ok(MaxFisher::CapExhausted { lambda_cap });
    }
    let (mut lo, mut hi) = (0.0, lambda_cap);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if max_feasible(&q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MaxFisher::Finite { value: 4.0 * hi, lambda: hi })
}

/// `F_min(p) = sup{4λ : p * P_{−λ} ≥ 0}` by bisection on `[0, λ_cap]`.
pub fn f_min(p: &EnergyDistribution, lambda_cap: f64) -> Result<f64> {
    let q = normalized_support(p)?;
    if min_feasible(&q, lambda_cap) {
        return Ok(4.0 * lambda_cap);
    }
    let (mut lo, mut hi) = (0.0, lambda_cap);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if min_feasible(&q, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(4.0 * lo)
}

/// Best shift `k*` over `round(mean(p) − λ) ± 5` and the resulting `d_TV(p, Υ_k P_λ)`.
pub fn poisson_shift_fit(p: &EnergyDistribution, lambda: f64) -> (i64, f64) {
    let pl = poisson_to_tail(lambda, 1e-14);
    let centre = (p.mean() - lambda).round() as i64;
    let mut best = (centre, f64::INFINITY);
    for k in (centre - 5)..=(centre + 5) {
        let d = total_variation(p.sequence(), &pl.shift(k));
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

/// Moves probability mass `ε` from the extreme tails onto the level nearest
/// the mean. A simple distribution-level smoothing for exploration; it is not
/// the purification-based smoothing of the max/min Fisher information.
pub fn tv_trim(p: &EnergyDistribution, eps: f64) -> Result<EnergyDistribution> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("epsilon = {eps} must lie in [0, 1)")));
    }
    let seq = p.sequence();
    let mut v = seq.values.clone();
    let mu = seq.mean();
    let centre = ((mu.round() as i64 - seq.offset).max(0) as usize).min(v.len() - 1);
    let (mut lo, mut hi) = (0usize, v.len() - 1);
    let mut left = eps;
    while left > 0.0 && lo < hi {
        let far_lo = (mu - (seq.offset + lo as i64) as f64).abs();
        let far_hi = ((seq.offset + hi as i64) as f64 - mu).abs();
        let idx = if far_lo >= far_hi { lo } else { hi };
        if idx == centre {
            break;
        }
        let take = v[idx].min(left);
        v[idx] -= take;
        v[centre] += take;
        left -= take;
        if v[idx] <= 0.0 {
            if idx == lo {
                lo += 1;
            } else {
                hi -= 1;
            }
        }
    }
    EnergyDistribution::new(IntSequence::finite(seq.offset, v))
}

#[derive(Debug, Deserialize, Serialize)]
struct Row {
    n: i64,
    value: f64,
}

/// Reads `(n, value)` rows, skipping `#` comment lines; gaps are filled with zeros.
pub fn read_sequence_csv(reader: impl Read) -> Result<IntSequence> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let rows: Vec<Row> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    if rows.is_empty() {
        return Err(Error::InvalidParameter("empty sequence file".into()));
    }
    let lo = rows.iter().map(|r| r.n).min().unwrap();
    let hi = rows.iter().map(|r| r.n).max().unwrap();
    let mut values = vec![0.0; (hi - lo + 1) as usize];
    for r in rows {
        values[(r.n - lo) as usize] += r.value;
    }
    Ok(IntSequence::finite(lo, values))
}

pub fn write_sequence_csv(seq: &IntSequence, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (n, value) in seq.indexed() {
        w.serialize(Row { n, value })?;
    }
    w.flush()?;
    Ok(())
}

/// Diagonal Hamiltonian with the given integer levels.
pub fn integer_hamiltonian(levels: &[i64]) -> HermitianOperator {
    let d: Vec<f64> = levels.iter().map(|&l| l as f64).collect();
    HermitianOperator::from_real_diagonal(&d)
}

/// Pure state whose energy distribution under `diag(0, 1, …)` is `p`.
pub fn state_with_distribution(p: &[f64]) -> Result<(DensityMatrix, HermitianOperator)> {
    let amps: Vec<f64> = p.iter().map(|x| x.max(0.0).sqrt()).collect();
    let levels: Vec<i64> = (0..p.len() as i64).collect();
    Ok((DensityMatrix::pure_real(&amps)?, integer_hamiltonian(&levels)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{coherence_bit, qutrit_hamiltonian, qutrit_psi1};
    use std::f64::consts::E;

    fn close(a: &IntSequence, b: &IntSequence, tol: f64) -> bool {
        let lo = a.offset.min(b.offset);
        let hi = a.end().min(b.end());
        (lo..=hi).all(|n| (a.get(n) - b.get(n)).abs() <= tol)
    }

    #[test]
    fn energy_distributions() {
        let (phi, h) = coherence_bit();
        let p = energy_distribution(&phi, &h).unwrap();
        assert_eq!(p.sequence().offset, 0);
        assert!((p.sequence().values[0] - 0.5).abs() < 1e-15);
        let psi = DensityMatrix::pure(&qutrit_psi1()).unwrap();
        let p = energy_distribution(&psi, &qutrit_hamiltonian()).unwrap();
        let want = [0.25, 0.25, 0.5];
        for (a, b) in p.sequence().values.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        let e = DensityMatrix::pure_real(&[0.0, 0.0, 1.0]).unwrap();
        let p = energy_distribution(&e, &qutrit_hamiltonian()).unwrap();
        assert_eq!(p.sequence(), &IntSequence::delta(2));
        let frac = HermitianOperator::from_real_diagonal(&[0.0, 0.5]);
        assert!(matches!(energy_distribution(&phi, &frac), Err(Error::NonIntegerSpectrum(_))));
    }

    #[test]
    fn period_normalization() {
        let psi = DensityMatrix::pure_real(&[0.6, 0.0, 0.8]).unwrap();
        let h = HermitianOperator::from_real_diagonal(&[0.0, 2.0, 4.0]);
        let (h2, rec) = normalize_period(&psi, &h).unwrap();
        assert!((rec.scale - 4.0).abs() < 1e-12);
        let psi3 = DensityMatrix::pure_real(&[0.6, 0.48, 0.64]).unwrap();
        let (h3, rec3) = normalize_period(&psi3, &h).unwrap();
        assert!((rec3.scale - 2.0).abs() < 1e-12);
        assert_eq!(h3.eigenvalues().iter().map(|x| x.round() as i64).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!((h2.eigenvalues()[2] - 1.0).abs() < 1e-12);
        let two = DensityMatrix::pure_real(&[0.6, 0.8]).unwrap();
        let (h4, rec4) = normalize_period(&two, &HermitianOperator::from_real_diagonal(&[3.0, 4.0])).unwrap();
        assert_eq!(rec4, PeriodNormalization { shift: 3.0, scale: 1.0 });
        assert!((h4.eigenvalues()[1] - 1.0).abs() < 1e-15);
        let irr = HermitianOperator::from_real_diagonal(&[0.0, 1.0, std::f64::consts::SQRT_2]);
        assert!(matches!(normalize_period(&psi3, &irr), Err(Error::NoFinitePeriod)));
    }

    #[test]
    fn poisson_values() {
        assert_eq!(poisson(0.0, 5).values, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((poisson(1.0, 3).values[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((poisson(-1.0, 3).values[1] + E).abs() < 1e-13);
        let p = poisson(2.0, 40);
        assert!((p.sum() - 1.0).abs() < 1e-12);
        assert!(p.tail_bound < 1e-20);
    }

    #[test]
    fn convolution_identities() {
        let p = IntSequence::finite(0, vec![0.2, 0.3, 0.5]);
        assert_eq!(convolve(&IntSequence::delta(0), &p), p);
        let a = poisson_to_tail(1.0, 1e-14);
        let b = poisson_to_tail(2.0, 1e-14);
        let ab = convolve(&a, &b);
        assert!(close(&ab, &poisson(3.0, ab.end() as u64), 1e-9));
        assert!(ab.tail_bound < 1e-9);
        let pm = IntSequence::delta(4);
        assert!((total_variation(&pm, &pm.shift(1)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn convolution_tail_is_sound() {
        let a = poisson(1.5, 6);
        let b = poisson(0.5, 3);
        let c = convolve(&a, &b);
        let exact = poisson(2.0, 60);
        let stored_err: f64 = c.indexed().map(|(n, v)| (v - exact.get(n)).abs()).sum();
        assert!(stored_err < 1e-14, "{stored_err}");
        let missing: f64 = exact.indexed().filter(|(n, _)| *n > c.end()).map(|(_, v)| v).sum();
        assert!(missing <= c.tail_bound + 1e-15);
    }

    #[test]
    fn inverse_sequences() {
        let d = inverse_sequence(&IntSequence::delta(0), 5).unwrap();
        assert_eq!(d.values, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let half = IntSequence::finite(0, vec![0.5, 0.5]);
        let inv = inverse_sequence(&half, 8).unwrap();
        for (n, v) in inv.indexed() {
            assert_eq!(v, 2.0 * if n % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert!(inv.tail_bound.is_infinite());
        let pl = poisson_to_tail(0.7, 1e-16);
        let inv = inverse_sequence(&pl, pl.len() - 1).unwrap();
        assert!(close(&inv, &poisson(-0.7, pl.len() as u64), 1e-8));
        assert!(matches!(
            inverse_sequence(&IntSequence::finite(0, vec![0.0, 1.0]), 3),
            Err(Error::ZeroLeadingEntry)
        ));
        let shifted = inverse_sequence(&IntSequence::finite(3, vec![0.5, 0.25]), 4).unwrap();
        assert_eq!(shifted.offset, -3);
    }

    #[test]
    fn inverse_tail_bound_is_sound() {
        let q = IntSequence::finite(0, vec![0.6, 0.3, 0.1]);
        let short = inverse_sequence(&q, 20).unwrap();
        let long = inverse_sequence(&q, 400).unwrap();
        let actual: f64 = long.values[21..].iter().map(|v| v.abs()).sum();
        assert!(short.tail_bound.is_finite());
        assert!(actual <= short.tail_bound, "{actual} > {}", short.tail_bound);
        let conv = convolve(&q, &long).truncated(400);
        for (n, v) in conv.indexed() {
            assert!((v - if n == 0 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }

    #[test]
    fn max_min_fisher_examples() {
        let pm = EnergyDistribution::point_mass(3);
        assert_eq!(f_max(&pm, 10.0).unwrap(), MaxFisher::Finite { value: 0.0, lambda: 0.0 });
        // the −1e-9 entry tolerance admits λ up to about 1e-9
        assert!(f_min(&pm, 10.0).unwrap() < 1e-8);
        let mu = 0.5;
        let tp = poisson_to_tail(mu, 1e-13);
        let p = EnergyDistribution::new(IntSequence::finite(0, tp.values.clone())).unwrap();
        let fmax = f_max(&p, default_lambda_cap(&p)).unwrap().value();
        let fmin = f_min(&p, default_lambda_cap(&p)).unwrap();
        assert!((fmax - 4.0 * mu).abs() < 1e-3, "{fmax}");
        assert!((fmin - 4.0 * mu).abs() < 1e-3, "{fmin}");
        let half = EnergyDistribution::from_probabilities(0, vec![0.5, 0.5]).unwrap();
        assert!(f_min(&half, 64.0).unwrap() < 1e-8);
        assert!(matches!(f_max(&half, 64.0).unwrap(), MaxFisher::CapExhausted { .. }));
    }

    #[test]
    fn shift_fit() {
        let p2 = poisson_to_tail(2.0, 1e-15).shift(3);
        let p = EnergyDistribution::new(p2).unwrap();
        let (k, d) = poisson_shift_fit(&p, 2.0);
        assert_eq!(k, 3);
        assert!(d < 1e-9);
        let (k, d) = poisson_shift_fit(&EnergyDistribution::point_mass(7), 0.0);
        assert_eq!((k, d), (7, 0.0));
    }

    #[test]
    fn trimming_moves_eps_mass() {
        let p = EnergyDistribution::from_probabilities(0, vec![0.1, 0.2, 0.4, 0.2, 0.1]).unwrap();
        let t = tv_trim(&p, 0.15).unwrap();
        assert!((total_variation(p.sequence(), t.sequence()) - 0.15).abs() < 1e-12);
        assert!(t.variance() < p.variance());
    }

    #[test]
    fn csv_round_trip() {
        let s = IntSequence::finite(-2, vec![0.25, 0.0, 0.75]);
        let mut buf = Vec::new();
        write_sequence_csv(&s, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("n,value"));
        assert_eq!(read_sequence_csv(buf.as_slice()).unwrap(), s);
    }
}
