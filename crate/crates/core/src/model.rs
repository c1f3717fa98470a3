//! Similarity models for matrix tuples.
//!
//! [`tuple_stats`] iterates the completely positive map
//! `φ_T(X) = Σ T_i X T_i*` from `X = I`, so the level norms
//! `‖Σ_{|σ|=k} T_σ T_σ*‖ = ‖φ_T^k(I)‖` cost `k·n` matrix products. The
//! embedding `K h = Σ_α μ(α,g₀)^{-1} e_α ⊗ Q^{1/2} T_α* h` intertwines `T_i*`
//! with `W_i* ⊗ I`; [`build_k_embedding`] materializes it on a truncation and
//! measures what the truncation leaves over.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{shift_tuple, Side, TruncatedFock};
use crate::freeword::Word;
use crate::linalg::{
    hermitian_eigenvalues, identity, is_exact_zero, op_norm, psd_norm, sqrt_pd, CMat, C64,
};
use crate::weights::{Levels, WeightSequence};
use crate::Evidence;

#[derive(Debug, Clone)]
pub struct OperatorTuple {
    mats: Vec<CMat>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleJson {
    pub n: usize,
    pub d: usize,
    /// `matrices[i][row][col] = [re, im]`.
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl OperatorTuple {
    pub fn new(mats: Vec<CMat>) -> Result<Self> {
        let d = mats
            .first()
            .map(|m| m.nrows())
            .ok_or_else(|| Error::InvalidParameter("tuple needs at least one matrix".into()))?;
        for m in &mats {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::InvalidParameter(
                    "tuple matrices must be square of equal size".into(),
                ));
            }
        }
        if mats.len() > u8::MAX as usize {
            return Err(Error::InvalidParameter("too many matrices".into()));
        }
        Ok(OperatorTuple { mats })
    }

    pub fn zeros(n: usize, d: usize) -> Self {
        OperatorTuple {
            mats: vec![CMat::zeros(d, d); n],
        }
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn d(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    /// `T_i`, 1-based.
    pub fn get(&self, i: usize) -> &CMat {
        &self.mats[i - 1]
    }

    /// `T_α = T_{i₁} ⋯ T_{i_k}` for `α = g_{i₁} ⋯ g_{i_k}`.
    pub fn word(&self, alpha: &Word) -> CMat {
        let mut p = identity(self.d());
        for l in alpha.letters() {
            p *= &self.mats[l - 1];
        }
        p
    }

    /// `φ_T(X) = Σ T_i X T_i*`.
    pub fn phi(&self, x: &CMat) -> CMat {
        let d = self.d();
        let mut out = CMat::zeros(d, d);
        for t in &self.mats {
            out += t * x * t.adjoint();
        }
        out
    }

    /// Largest `‖T_iT_j − T_jT_i‖`.
    pub fn commutator_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let c = &self.mats[i] * &self.mats[j] - &self.mats[j] * &self.mats[i];
                worst = worst.max(op_norm(&c));
            }
        }
        worst
    }

    pub fn is_commuting(&self, tol: f64) -> bool {
        self.commutator_defect() <= tol
    }

    pub fn from_json(j: &TupleJson) -> Result<Self> {
        if j.matrices.len() != j.n {
            return Err(Error::Parse(format!(
                "expected {} matrices, found {}",
                j.n,
                j.matrices.len()
            )));
        }
        let mut mats = Vec::with_capacity(j.n);
        for m in &j.matrices {
            if m.len() != j.d || m.iter().any(|r| r.len() != j.d) {
                return Err(Error::Parse(format!("each matrix must be {0}x{0}", j.d)));
            }
            mats.push(CMat::from_fn(j.d, j.d, |r, c| {
                C64::new(m[r][c][0], m[r][c][1])
            }));
        }
        OperatorTuple::new(mats)
    }

    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            n: self.n(),
            d: self.d(),
            matrices: self
                .mats
                .iter()
                .map(|m| {
                    (0..m.nrows())
                        .map(|r| {
                            (0..m.ncols())
                                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TupleStats {
    /// `‖φ_T^k(I)‖` for `k = 1 … kmax`.
    pub level_norms: Vec<f64>,
    pub log_level_norms: Vec<f64>,
    /// `‖φ_T^k(I)‖^{1/2k}`.
    pub roots: Vec<f64>,
    /// Max of `roots` over the last window.
    pub r_estimate: f64,
    /// `min_k ‖φ_T^k(I)‖^{1/2k}`, an upper bound for `r(T)` by submultiplicativity.
    pub r_upper: f64,
    /// Least `m` with `φ_T^m(I) = 0`, if reached.
    pub nilpotent_index: Option<usize>,
}

pub const STATS_WINDOW: usize = 4;

/// Level norms of a tuple by normalized iteration of `φ_T`.
pub fn tuple_stats(t: &OperatorTuple, kmax: usize) -> TupleStats {
    let mut x = identity(t.d());
    let mut log_acc = 0.0;
    let mut level_norms = Vec::with_capacity(kmax);
    let mut log_level_norms = Vec::with_capacity(kmax);
    let mut nilpotent_index = None;
    for k in 1..=kmax {
        if nilpotent_index.is_some() {
            level_norms.push(0.0);
            log_level_norms.push(f64::NEG_INFINITY);
            continue;
        }
        let y = t.phi(&x);
        let s = psd_norm(&y);
        if is_exact_zero(&y) || s == 0.0 {
            nilpotent_index = Some(k);
            level_norms.push(0.0);
            log_level_norms.push(f64::NEG_INFINITY);
            continue;
        }
        log_acc += s.ln();
        x = y / C64::new(s, 0.0);
        log_level_norms.push(log_acc);
        level_norms.push(log_acc.exp());
    }
    let roots: Vec<f64> = log_level_norms
        .iter()
        .enumerate()
        .map(|(k, &l)| (l / (2.0 * (k + 1) as f64)).exp())
        .collect();
    let w = STATS_WINDOW.min(roots.len());
    let r_estimate = roots[roots.len() - w..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let r_upper = roots.iter().copied().fold(f64::INFINITY, f64::min);
    TupleStats {
        level_norms,
        log_level_norms,
        roots,
        r_estimate,
        r_upper,
        nilpotent_index,
    }
}

/// Nilpotency index of the tuple. Products of length `d` vanish for a nilpotent
/// tuple of `d × d` matrices, so `d` levels decide it.
pub fn nilpotent_index(t: &OperatorTuple) -> Option<usize> {
    tuple_stats(t, t.d()).nilpotent_index
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelCertificate {
    pub max_len: usize,
    #[serde(skip)]
    pub k_matrix: CMat,
    /// `‖K T_i* − (W_i* ⊗ I) K‖` per generator.
    pub residuals: Vec<f64>,
    /// Same, restricted to the blocks `|γ| < N`.
    pub interior_residuals: Vec<f64>,
    /// `‖Σ_{|α|=k} T_α Q T_α* / μ(α,g₀)²‖` for `k = 0 … N`.
    pub level_terms: Vec<f64>,
    /// Largest eigenvalue of the partial sums through level `k`.
    pub partial_max: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub cb_bound: f64,
    pub convergence: Evidence,
    /// The sum has no terms beyond the truncation (nilpotent tuple).
    pub exact: bool,
}

pub const RATIO_DELTA: f64 = 0.05;
const ZERO_BLOCK_REL: f64 = 1e-12;

/// Ratio-test verdict on the last `window` terms of a nonnegative sequence.
pub fn ratio_verdict(terms: &[f64], window: usize, delta: f64) -> Evidence {
    if let Some(first_zero) = terms.iter().position(|&t| t == 0.0) {
        if terms[first_zero..].iter().all(|&t| t == 0.0) {
            return Evidence::Certified;
        }
    }
    let w = window.min(terms.len());
    if w < 2 {
        return Evidence::Undetermined;
    }
    let tail = &terms[terms.len() - w..];
    let ratios: Vec<f64> = tail.windows(2).map(|p| p[1] / p[0]).collect();
    if ratios.iter().all(|&r| r < 1.0 - delta) {
        Evidence::Convergent
    } else if ratios.iter().all(|&r| r >= 1.0) {
        Evidence::Divergent
    } else {
        Evidence::Undetermined
    }
}

/// `build_K_embedding` on levels `|α| ≤ N`.
pub fn build_k_embedding(
    t: &OperatorTuple,
    w: &WeightSequence,
    q: &CMat,
    max_len: usize,
) -> Result<ModelCertificate> {
    if w.n() != t.n() {
        return Err(Error::InvalidParameter(format!(
            "weights have n = {} but the tuple has n = {}",
            w.n(),
            t.n()
        )));
    }
    w.check_level(max_len)?;
    let d = t.d();
    if q.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: q.nrows(),
        });
    }
    let q_half = sqrt_pd(q, 1e-12)?;
    let space = TruncatedFock::new(t.n(), max_len)?;
    let norms = w.norm_table(max_len)?;
    let dim = space.dim();
    let scale = 1.0 + t.mats().iter().map(op_norm).fold(0.0, f64::max);

    // T_α* through T_{g_iγ}* = T_γ* T_i*
    let adj: Vec<CMat> = t.mats().iter().map(|m| m.adjoint()).collect();
    let mut t_adj: Vec<CMat> = Vec::with_capacity(dim);
    t_adj.push(identity(d));
    for idx in 1..dim {
        let word = space.word(idx);
        let tail = space.index(&word.tail()).unwrap();
        let i = word.first().unwrap();
        t_adj.push(&t_adj[tail] * &adj[i - 1]);
    }

    let mut blocks: Vec<CMat> = Vec::with_capacity(dim);
    for idx in 0..dim {
        let nrm = norms[idx];
        if nrm == 0.0 {
            if op_norm(&t_adj[idx]) > ZERO_BLOCK_REL * scale.powi(space.word(idx).len() as i32) {
                return Err(Error::Precondition(format!(
                    "word {} has zero weight norm but T_alpha is nonzero",
                    space.word(idx)
                )));
            }
            blocks.push(CMat::zeros(d, d));
        } else {
            blocks.push(&q_half * &t_adj[idx] / C64::new(nrm, 0.0));
        }
    }

    let mut k_matrix = CMat::zeros(dim * d, d);
    for (idx, b) in blocks.iter().enumerate() {
        k_matrix.view_mut((idx * d, 0), (d, d)).copy_from(b);
    }

    let mut level_terms = vec![0.0; max_len + 1];
    let mut partial_max = vec![0.0; max_len + 1];
    let mut partial = CMat::zeros(d, d);
    for len in 0..=max_len {
        let mut s = CMat::zeros(d, d);
        for idx in space.level_range(len) {
            s += blocks[idx].adjoint() * &blocks[idx];
        }
        level_terms[len] = psd_norm(&s);
        partial += s;
        partial_max[len] = psd_norm(&partial);
    }
    let ev = hermitian_eigenvalues(&partial);
    let lambda_min = ev[0];
    let lambda_max = *ev.last().unwrap();

    let shifts = shift_tuple(w, Side::Left, max_len)?;
    let mut residuals = Vec::with_capacity(t.n());
    let mut interior_residuals = Vec::with_capacity(t.n());
    for (i, s) in shifts.iter().enumerate() {
        let mut gram_all = CMat::zeros(d, d);
        let mut gram_interior = CMat::zeros(d, d);
        for idx in 0..dim {
            let mut r = &blocks[idx] * &adj[i];
            let gamma = space.word(idx);
            if gamma.len() < max_len {
                let target = space.index(&gamma.prepend(i + 1)).unwrap();
                let (row, val) = s.column(idx).unwrap();
                debug_assert_eq!(row, target);
                r -= &blocks[target] * C64::new(val, 0.0);
                gram_interior += r.adjoint() * &r;
            }
            gram_all += r.adjoint() * &r;
        }
        residuals.push(psd_norm(&gram_all).sqrt());
        interior_residuals.push(psd_norm(&gram_interior).sqrt());
    }

    // φ_T^{N+1}(I) = 0 means every dropped block vanishes
    let exact = tuple_stats(t, max_len + 1)
        .nilpotent_index
        .is_some_and(|m| m <= max_len + 1);
    let convergence = if exact {
        Evidence::Certified
    } else {
        ratio_verdict(&level_terms, STATS_WINDOW, RATIO_DELTA)
    };
    if convergence == Evidence::Divergent {
        return Err(Error::Divergent(format!(
            "level terms of the weighted sum do not decay: {:?}",
            &level_terms[level_terms.len().saturating_sub(STATS_WINDOW)..]
        )));
    }
    Ok(ModelCertificate {
        max_len,
        k_matrix,
        residuals,
        interior_residuals,
        level_terms,
        partial_max,
        lambda_min,
        lambda_max,
        cb_bound: (lambda_max / lambda_min).sqrt(),
        convergence,
        exact,
    })
}

#[derive(Debug, Clone)]
pub enum ModelMode {
    /// User-supplied weights and positive definite `Q`.
    Rota { weights: WeightSequence, q: CMat },
    /// Model weights of a non-nilpotent tuple.
    Main1,
    /// Model weights of a nilpotent tuple.
    Nilpotent,
}

impl ModelMode {
    pub fn name(&self) -> &'static str {
        match self {
            ModelMode::Rota { .. } => "rota",
            ModelMode::Main1 => "main1",
            ModelMode::Nilpotent => "nilpotent",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelBound {
    pub mode: &'static str,
    /// The analytic bound: `√(b/a)` (rota), `π/√6` (main1), `√(Σ_{k<m} (k+1)^{-2})` (nilpotent).
    pub bound: f64,
    pub nilpotent_index: Option<usize>,
    pub certificate: ModelCertificate,
    /// `certificate.cb_bound ≤ bound` up to rounding.
    pub consistent: bool,
}

pub fn nilpotent_bound(m: usize) -> f64 {
    (0..m)
        .map(|k| 1.0 / ((k + 1) as f64).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn main1_bound() -> f64 {
    std::f64::consts::PI / 6f64.sqrt()
}

/// `model_bound`, cross-checked against the embedding on levels `|α| ≤ N`.
pub fn model_bound(t: &OperatorTuple, mode: &ModelMode, max_len: usize) -> Result<ModelBound> {
    let index = nilpotent_index(t);
    match mode {
        ModelMode::Rota { weights, q } => {
            let cert = build_k_embedding(t, weights, q, max_len)?;
            Ok(ModelBound {
                mode: mode.name(),
                bound: cert.cb_bound,
                nilpotent_index: index,
                consistent: true,
                certificate: cert,
            })
        }
        ModelMode::Main1 => {
            if let Some(m) = index {
                return Err(Error::Precondition(format!(
                    "tuple is nilpotent of index {m}; use the nilpotent mode"
                )));
            }
            let w = WeightSequence::from_tuple_norms(t, max_len)?;
            let cert = build_k_embedding(t, &w, &identity(t.d()), max_len)?;
            let bound = main1_bound();
            Ok(ModelBound {
                mode: mode.name(),
                bound,
                nilpotent_index: None,
                consistent: cert.cb_bound <= bound * (1.0 + 1e-12),
                certificate: cert,
            })
        }
        ModelMode::Nilpotent => {
            let m = index.ok_or_else(|| {
                Error::Precondition("tuple is not nilpotent; use the main1 mode".into())
            })?;
            if m < 2 {
                return Err(Error::Precondition(
                    "tuple is zero; the model is e_0 (x) I with bound 1".into(),
                ));
            }
            let w = WeightSequence::from_tuple_norms(t, m)?;
            let cert = build_k_embedding(t, &w, &identity(t.d()), max_len.max(m - 1))?;
            let bound = nilpotent_bound(m);
            Ok(ModelBound {
                mode: mode.name(),
                bound,
                nilpotent_index: Some(m),
                consistent: cert.cb_bound <= bound * (1.0 + 1e-12),
                certificate: cert,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FpWeights {
    /// `a_0 = 1, a_1, …, a_K`.
    pub a: Vec<f64>,
    /// `μ_k = a_k / a_{k−1}`, index `k − 1`.
    pub mu: Vec<f64>,
    /// `κ_k = a_1^{1/2} (a_{2^m})^{1/2^{m+1}}` with `k = 2^m + q`, index `k − 1`.
    pub kappa: Vec<f64>,
    /// `σ_k = a_k / (κ_1 ⋯ κ_k)`, index `k` (`σ_0 = 1`).
    pub sigma: Vec<f64>,
    /// `a_k^{1/k}` for `k = 1 … K`.
    pub roots: Vec<f64>,
    /// The log-increments `ln a_k − ln a_{k−1}` keep falling over the second half of the
    /// window and the last one sits below the midpoint one by more than `ln(1 − δ)`.
    /// A positive radius makes the increments level off at `ln r`.
    pub quasi_nilpotent_evidence: bool,
}

/// `foias_pearcy_weights` from `a_1, …, a_K` (`a_0 = 1` implied).
pub fn foias_pearcy_weights(a_tail: &[f64]) -> Result<FpWeights> {
    if a_tail.is_empty() {
        return Err(Error::InvalidParameter("sequence must be nonempty".into()));
    }
    if a_tail.contains(&0.0) {
        return Err(Error::Precondition(
            "a_k = 0: the tuple is nilpotent; use the nilpotent model".into(),
        ));
    }
    if a_tail.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "a_k must be positive and finite".into(),
        ));
    }
    let mut a = vec![1.0];
    a.extend_from_slice(a_tail);
    let big_k = a.len() - 1;
    for k in 1..=big_k {
        for m in 1..=k {
            if k + m > big_k {
                break;
            }
            if a[k + m] > a[k] * a[m] * (1.0 + 1e-12) {
                return Err(Error::NotSubmultiplicative {
                    k,
                    m,
                    lhs: a[k + m],
                    rhs: a[k] * a[m],
                });
            }
        }
    }
    let mu: Vec<f64> = (1..=big_k).map(|k| a[k] / a[k - 1]).collect();
    let kappa: Vec<f64> = (1..=big_k)
        .map(|k| {
            let m = usize::BITS - 1 - k.leading_zeros();
            let p = 1usize << m;
            a[1].sqrt() * a[p].powf(1.0 / (2.0 * p as f64))
        })
        .collect();
    let mut sigma = vec![1.0];
    let mut log_kappa = 0.0;
    for k in 1..=big_k {
        log_kappa += kappa[k - 1].ln();
        sigma.push((a[k].ln() - log_kappa).exp());
    }
    let roots: Vec<f64> = (1..=big_k).map(|k| a[k].powf(1.0 / k as f64)).collect();
    let half = big_k.div_ceil(2);
    let inc: Vec<f64> = (1..=big_k).map(|k| a[k].ln() - a[k - 1].ln()).collect();
    let quasi_nilpotent_evidence = big_k >= 4
        && inc[half - 1..].windows(2).all(|w| w[1] < w[0])
        && inc[big_k - 1] - inc[half - 1] < (1.0 - RATIO_DELTA).ln();
    Ok(FpWeights {
        a,
        mu,
        kappa,
        sigma,
        roots,
        quasi_nilpotent_evidence,
    })
}

/// `a_k = ‖φ_T^k(I)‖^{1/4}` for `k = 1 … kmax`.
pub fn fp_sequence_from_tuple(t: &OperatorTuple, kmax: usize) -> Vec<f64> {
    tuple_stats(t, kmax)
        .log_level_norms
        .iter()
        .map(|l| (l / 4.0).exp())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FpCertificate {
    pub max_len: usize,
    pub kappa_dominates_roots: bool,
    pub sigma_in_unit_interval: bool,
    pub kappa_nonincreasing: bool,
    pub y_norm: f64,
    pub y_min: f64,
    /// `max_i ‖Y V_i* − W_i* Y‖` on columns below the top level.
    pub intertwining_residual: f64,
    /// Smallest eigenvalue of `(YK)*(YK)`; `‖YKh‖ ≥ ‖h‖` for all `h` iff it is ≥ 1.
    pub yk_lambda_min: Option<f64>,
    /// `‖(YK)_{g₀} − I‖`.
    pub vacuum_defect: Option<f64>,
    pub quasi_nilpotent_evidence: bool,
}

/// `foias_pearcy_certify` on levels `|β| ≤ N`; with a tuple, also certifies `‖YKh‖ ≥ ‖h‖`.
pub fn foias_pearcy_certify(
    fp: &FpWeights,
    n: usize,
    max_len: usize,
    tuple: Option<&OperatorTuple>,
) -> Result<FpCertificate> {
    let big_k = fp.a.len() - 1;
    if max_len > big_k {
        return Err(Error::BeyondLevelCap {
            cap: big_k,
            requested: max_len,
        });
    }
    let tol = 1e-12;
    let kappa_dominates_roots =
        (1..=max_len).all(|k| fp.kappa[k - 1] >= fp.roots[k - 1] * (1.0 - tol));
    let sigma_in_unit_interval = fp.sigma[..=max_len]
        .iter()
        .all(|&s| s > 0.0 && s <= 1.0 + tol);
    let kappa_nonincreasing = fp.kappa[..max_len]
        .windows(2)
        .all(|p| p[1] <= p[0] * (1.0 + tol));
    let y_norm = fp.sigma[..=max_len].iter().copied().fold(0.0, f64::max);
    let y_min = fp.sigma[..=max_len]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);

    let v_weights = WeightSequence::new(
        n,
        std::sync::Arc::new(Levels::new(fp.a.clone(), false, "levels")?),
    )?;
    let mut kappa_norms = vec![1.0];
    for k in 1..=big_k {
        kappa_norms.push(kappa_norms[k - 1] * fp.kappa[k - 1]);
    }
    let w_weights = WeightSequence::new(
        n,
        std::sync::Arc::new(Levels::new(kappa_norms, false, "levels")?),
    )?;
    let v = shift_tuple(&v_weights, Side::Left, max_len)?;
    let wk = shift_tuple(&w_weights, Side::Left, max_len)?;
    let space = TruncatedFock::new(n, max_len)?;
    let sigma_of = |idx: usize| fp.sigma[space.word(idx).len()];
    let mut residual = 0.0_f64;
    for (vi, wi) in v.iter().zip(&wk) {
        // Y V_i* e_{g_iγ} = σ_γ μ_{g_iγ} e_γ and W_i* Y e_{g_iγ} = κ_{g_iγ} σ_{g_iγ} e_γ
        for col in 0..space.dim() {
            if let (Some((row_v, mu)), Some((row_w, ka))) = (vi.column(col), wi.column(col)) {
                debug_assert_eq!(row_v, row_w);
                let lhs = sigma_of(col) * mu;
                let rhs = ka * sigma_of(row_v);
                residual = residual.max((lhs - rhs).abs());
            }
        }
    }

    let (yk_lambda_min, vacuum_defect) = match tuple {
        Some(t) => {
            if t.n() != n {
                return Err(Error::InvalidParameter("tuple size differs from n".into()));
            }
            let cert = build_k_embedding(t, &v_weights, &identity(t.d()), max_len)?;
            let d = t.d();
            let mut yk = cert.k_matrix.clone();
            for idx in 0..space.dim() {
                let s = C64::new(sigma_of(idx), 0.0);
                let mut blk = yk.view_mut((idx * d, 0), (d, d));
                blk *= s;
            }
            let gram = yk.adjoint() * &yk;
            let lmin = hermitian_eigenvalues(&gram)[0];
            let vac = yk.view((0, 0), (d, d)).into_owned() - identity(d);
            (Some(lmin), Some(op_norm(&vac)))
        }
        None => (None, None),
    };
    Ok(FpCertificate {
        max_len,
        kappa_dominates_roots,
        sigma_in_unit_interval,
        kappa_nonincreasing,
        y_norm,
        y_min,
        intertwining_residual: residual,
        yk_lambda_min,
        vacuum_defect,
        quasi_nilpotent_evidence: fp.quasi_nilpotent_evidence,
    })
}
