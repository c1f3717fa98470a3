//! Diagonal similarities between weighted multi-shifts.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{level_row_norm, shift_tuple, Side, TruncatedFock};
use crate::freeword::Word;
use crate::weights::{Tabulated, WeightSequence};

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalIntertwiner {
    pub max_len: usize,
    pub n: usize,
    /// `d_σ` by graded index.
    pub entries: Vec<f64>,
    /// Scan infimum of `d_σ`.
    pub c1: f64,
    /// Scan supremum of `d_σ`.
    pub c2: f64,
    /// `max d / min d`.
    pub cond: f64,
    /// Largest relative gap between the recursion and the direct product
    /// `μ'(γ, ρ) / μ(γ, ρ)`, `ρ` the longest zero-weight suffix.
    pub route_gap: f64,
}

impl DiagonalIntertwiner {
    pub fn entry(&self, sigma: &Word) -> Option<f64> {
        crate::freeword::graded_index(sigma, self.n)
            .ok()
            .and_then(|i| self.entries.get(i).copied())
    }

    /// Entries of the inverse diagonal.
    pub fn inverse(&self) -> DiagonalIntertwiner {
        let entries: Vec<f64> = self.entries.iter().map(|d| 1.0 / d).collect();
        DiagonalIntertwiner {
            max_len: self.max_len,
            n: self.n,
            c1: 1.0 / self.c2,
            c2: 1.0 / self.c1,
            cond: self.cond,
            route_gap: self.route_gap,
            entries,
        }
    }
}

fn check_pair(w: &WeightSequence, wp: &WeightSequence, max_len: usize) -> Result<()> {
    if w.n() != wp.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: wp.n(),
        });
    }
    w.check_level(max_len)?;
    wp.check_level(max_len)
}

/// `D` with `D W_i = W_i' D`: `d_{g₀} = 1`, `d_σ = (μ'_σ/μ_σ) d_{tail σ}`, and `d_σ = 1`
/// where `μ_σ = 0`.
pub fn similarity_diagonal(
    w: &WeightSequence,
    wp: &WeightSequence,
    max_len: usize,
) -> Result<DiagonalIntertwiner> {
    check_pair(w, wp, max_len)?;
    let n = w.n();
    let space = TruncatedFock::new(n, max_len)?;
    let mu = w.weight_table(max_len)?;
    let mup = wp.weight_table(max_len)?;
    for idx in 1..space.dim() {
        if (mu[idx] == 0.0) != (mup[idx] == 0.0) {
            return Err(Error::ZeroPatternMismatch(format!(
                "word {}: weights {} and {}",
                space.word(idx),
                mu[idx],
                mup[idx]
            )));
        }
    }
    let mut entries = vec![1.0; space.dim()];
    for idx in 1..space.dim() {
        if mu[idx] != 0.0 {
            let tail = space.index(&space.word(idx).tail()).unwrap();
            entries[idx] = mup[idx] / mu[idx] * entries[tail];
        }
    }

    let mut route_gap = 0.0_f64;
    for idx in 1..space.dim() {
        if mu[idx] == 0.0 {
            continue;
        }
        let sigma = space.word(idx);
        let rho_len = (0..sigma.len())
            .rev()
            .find(|&l| l > 0 && mu[space.index(&sigma.suffix(l)).unwrap()] == 0.0)
            .unwrap_or(0);
        let rho = sigma.suffix(rho_len);
        let gamma = sigma.prefix(sigma.len() - rho_len);
        let direct = wp.mu_product_chain(&gamma, &rho) / w.mu_product_chain(&gamma, &rho);
        route_gap = route_gap.max((direct / entries[idx] - 1.0).abs());
    }

    let c1 = entries.iter().copied().fold(f64::INFINITY, f64::min);
    let c2 = entries.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(DiagonalIntertwiner {
        max_len,
        n,
        c1,
        c2,
        cond: c2 / c1,
        route_gap,
        entries,
    })
}

/// `max_i |(D W_i − W_i' D) e_α|` over columns `|α| < N`.
pub fn verify_intertwining(
    d: &DiagonalIntertwiner,
    w: &WeightSequence,
    wp: &WeightSequence,
    max_len: usize,
) -> Result<f64> {
    check_pair(w, wp, max_len)?;
    let space = TruncatedFock::new(w.n(), max_len)?;
    if d.entries.len() < space.dim() || d.n != w.n() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: d.entries.len(),
        });
    }
    let a = shift_tuple(w, Side::Left, max_len)?;
    let b = shift_tuple(wp, Side::Left, max_len)?;
    let mut worst = 0.0_f64;
    for (ai, bi) in a.iter().zip(&b) {
        for col in 0..space.level_range(max_len).start {
            let (row, m) = ai.column(col).unwrap();
            let (_, mp) = bi.column(col).unwrap();
            worst = worst.max((d.entries[row] * m - mp * d.entries[col]).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelGamma {
    pub level: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub struct Contraction {
    /// The contractive weights `v`, tabulated up to `N`.
    pub weights: WeightSequence,
    /// `Γ(σ)` by graded index (1 on `g₀` and on zero-weight words).
    pub gamma: Vec<f64>,
    pub by_level: Vec<LevelGamma>,
    /// Largest `μ(β, α)` seen by the precondition scan.
    pub scan_sup: f64,
}

/// Weights `v ≤ 1` with `μ(σ,g₀)/v(σ,g₀) = Γ(σ) ∈ [1, M]`, built over left extensions.
pub fn contraction_weights(w: &WeightSequence, bound: f64, max_len: usize) -> Result<Contraction> {
    if !(bound >= 1.0) || !bound.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bound M must be finite and at least 1, got {bound}"
        )));
    }
    w.check_level(max_len)?;
    let tol = 1e-12;
    let mut scan_sup = 1.0_f64;
    for k in 1..=max_len {
        let lv = level_row_norm(w, k, max_len)?;
        scan_sup = scan_sup.max(lv.value);
        if lv.value > bound * (1.0 + tol) {
            return Err(Error::Precondition(format!(
                "mu({}, {}) = {} exceeds M = {bound}",
                lv.beta, lv.alpha, lv.value
            )));
        }
    }
    let n = w.n();
    let space = TruncatedFock::new(n, max_len)?;
    let mu = w.weight_table(max_len)?;
    // Γ stays in [1, M], so plain products neither overflow nor underflow
    let mut gamma = vec![1.0_f64; space.dim()];
    let mut v = vec![0.0_f64; space.dim()];
    v[0] = 1.0;
    for idx in 1..space.dim() {
        if mu[idx] == 0.0 {
            continue;
        }
        let tail = space.index(&space.word(idx).tail()).unwrap();
        let x = mu[idx] * gamma[tail];
        if x >= 1.0 {
            v[idx] = 1.0;
            gamma[idx] = x;
        } else {
            v[idx] = x;
        }
        if gamma[idx] > bound * (1.0 + tol) {
            break;
        }
    }
    if let Some(idx) = gamma.iter().position(|&g| g > bound * (1.0 + tol)) {
        return Err(Error::Precondition(format!(
            "Gamma({}) = {} exceeds M = {bound}",
            space.word(idx),
            gamma[idx]
        )));
    }
    let by_level = (0..=max_len)
        .map(|len| {
            let r = space.level_range(len);
            LevelGamma {
                level: len,
                min: gamma[r.clone()]
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min),
                max: gamma[r].iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    let fam = Tabulated::from_dense(n, max_len, v, "contraction")?;
    Ok(Contraction {
        weights: WeightSequence::new(n, Arc::new(fam))?,
        gamma,
        by_level,
        scan_sup,
    })
}
