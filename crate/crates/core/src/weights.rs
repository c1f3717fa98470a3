//! Weight sequences `β ↦ μ_β` and the scalar data derived from them.
//!
//! A [`WeightSequence`] pairs the number of generators with a
//! [`WeightFamily`] trait object. Families are built by name through a
//! [`FamilyRegistry`], which is how the CLI and JSON weight specs select them.
//! Families that depend only on word length also expose the norming constants
//! `A_k = μ(β, g₀)` (`|β| = k`) in closed form, and products are then computed
//! as `A_{|α|+|β|} / A_{|α|}` instead of by chain multiplication.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freeword::{enumerate_words, fock_dim, graded_index, level_offset, Word};
use crate::model::{tuple_stats, OperatorTuple};

pub trait WeightFamily: Send + Sync + fmt::Debug {
    /// Registry name of the family.
    fn kind(&self) -> &'static str;

    /// `μ_β` for `|β| ≥ 1`. Callers stay within [`WeightFamily::level_cap`].
    fn weight(&self, beta: &Word) -> f64;

    /// Longest word length the family is defined for, if finite.
    fn level_cap(&self) -> Option<usize> {
        None
    }

    /// `μ(β, g₀)` for `|β| = k` when the family depends only on length.
    fn length_norm(&self, _k: usize) -> Option<f64> {
        None
    }

    /// `sup_α μ(β, α)` over the whole semigroup for `|β| = k`, when known in closed form.
    fn certified_level_norm(&self, _k: usize) -> Option<f64> {
        None
    }

    /// Exact joint spectral radius of the multi-shift, when known.
    fn certified_radius(&self) -> Option<f64> {
        None
    }

    /// `sup_β μ_β` over the whole semigroup, when known.
    fn certified_weight_sup(&self) -> Option<f64> {
        None
    }

    /// Exact point-evaluation verdict as a function of `x = ‖λ‖²`.
    fn ball_membership(&self, _x: f64) -> Option<bool> {
        None
    }

    /// Parameters for the JSON weight spec (without `n` and `kind`).
    fn params(&self) -> Value;
}

#[derive(Clone)]
pub struct WeightSequence {
    n: usize,
    family: Arc<dyn WeightFamily>,
}

impl fmt::Debug for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSequence")
            .field("n", &self.n)
            .field("family", &self.family)
            .finish()
    }
}

impl WeightSequence {
    pub fn new(n: usize, family: Arc<dyn WeightFamily>) -> Result<Self> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidParameter(format!("n = {n} out of range")));
        }
        Ok(WeightSequence { n, family })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &dyn WeightFamily {
        self.family.as_ref()
    }

    pub fn kind(&self) -> &'static str {
        self.family.kind()
    }

    pub fn is_length_only(&self) -> bool {
        self.family.length_norm(1).is_some()
    }

    /// Errors if words of length `max_len` are beyond the family's table.
    pub fn check_level(&self, max_len: usize) -> Result<()> {
        match self.family.level_cap() {
            Some(cap) if max_len > cap => Err(Error::BeyondLevelCap {
                cap,
                requested: max_len,
            }),
            _ => Ok(()),
        }
    }

    /// `μ_β`, with `μ_{g₀} = 1`.
    pub fn mu(&self, beta: &Word) -> f64 {
        if beta.is_empty() {
            1.0
        } else {
            self.family.weight(beta)
        }
    }

    /// `μ(β, α)`: closed form for length-only families, suffix chain otherwise.
    pub fn mu_product(&self, beta: &Word, alpha: &Word) -> f64 {
        if beta.is_empty() {
            return 1.0;
        }
        match self.length_product(alpha.len(), beta.len()) {
            Some(v) => v,
            None => self.mu_product_chain(beta, alpha),
        }
    }

    /// `A_{m+k} / A_m` for length-only families (0 once a level vanishes).
    pub fn length_product(&self, m: usize, k: usize) -> Option<f64> {
        let am = self.family.length_norm(m)?;
        let amk = self.family.length_norm(m + k)?;
        if am == 0.0 || amk == 0.0 {
            Some(0.0)
        } else if m == 0 {
            Some(amk)
        } else {
            Some(amk / am)
        }
    }

    /// `μ_{g_{i₁}⋯g_{i_p}α} · μ_{g_{i₂}⋯g_{i_p}α} ⋯ μ_{g_{i_p}α}`, always by multiplication.
    pub fn mu_product_chain(&self, beta: &Word, alpha: &Word) -> f64 {
        let full = beta.concat(alpha);
        let mut p = 1.0;
        for j in 0..beta.len() {
            p *= self.mu(&full.suffix(full.len() - j));
        }
        p
    }

    /// `μ(α, g₀)`.
    pub fn mu_norm(&self, alpha: &Word) -> f64 {
        self.mu_product(alpha, &Word::empty())
    }

    /// `b_α = 1 / μ(α, g₀)²` (infinite on zero-norm words).
    pub fn b(&self, alpha: &Word) -> f64 {
        let m = self.mu_norm(alpha);
        1.0 / (m * m)
    }

    /// Right weight `μ̃_{αg_i} = μ(αg_i, g₀) / μ(α, g₀)`; 0 when `μ(α, g₀) = 0`.
    pub fn mu_right(&self, alpha: &Word, i: usize) -> f64 {
        let den = self.mu_norm(alpha);
        if den == 0.0 {
            return 0.0;
        }
        if let Some(v) = self.length_product(alpha.len(), 1) {
            return v;
        }
        self.mu_norm(&alpha.append(i)) / den
    }

    /// `μ_α` for every word of length ≤ `max_len`, by graded index.
    pub fn weight_table(&self, max_len: usize) -> Result<Vec<f64>> {
        self.check_level(max_len)?;
        let words = enumerate_words(self.n, max_len)?;
        Ok(words.iter().map(|w| self.mu(w)).collect())
    }

    /// `μ(α, g₀)` for every word of length ≤ `max_len`, by graded index.
    pub fn norm_table(&self, max_len: usize) -> Result<Vec<f64>> {
        self.check_level(max_len)?;
        let words = enumerate_words(self.n, max_len)?;
        if self.is_length_only() {
            return Ok(words.iter().map(|w| self.mu_norm(w)).collect());
        }
        let mut out = vec![1.0; words.len()];
        for (idx, w) in words.iter().enumerate().skip(1) {
            let t = graded_index(&w.tail(), self.n)?;
            out[idx] = self.mu(w) * out[t];
        }
        Ok(out)
    }

    pub fn spec(&self) -> WeightSpec {
        let mut v = self.family.params();
        if let Value::Object(ref mut m) = v {
            m.insert("n".into(), json!(self.n));
            m.insert("kind".into(), json!(self.family.kind()));
        }
        serde_json::from_value(v).expect("family params form a valid spec")
    }

    /// Weights rebuilt from `b_α` values (graded index order, `b_{g₀} = 1`)
    /// through `μ_{g_iα} = √(b_α / b_{g_iα})`.
    pub fn from_b(n: usize, b: &[f64], cap: usize) -> Result<Self> {
        let dim = fock_dim(n, cap)?;
        if b.len() < dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.len(),
            });
        }
        let words = enumerate_words(n, cap)?;
        let mut table = vec![1.0; dim];
        for (idx, w) in words.iter().enumerate().skip(1) {
            let t = graded_index(&w.tail(), n)?;
            if !(b[idx] > 0.0 && b[t] > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "b must be positive (word {w})"
                )));
            }
            table[idx] = (b[t] / b[idx]).sqrt();
        }
        Ok(WeightSequence::new(
            n,
            Arc::new(Tabulated::from_dense(n, cap, table, "tabulated")?),
        )?)
    }

    /// `interpolate_from_sequence`: weights `μ_β = a_{|β|}/a_{|β|−1}` with `a₀ = 1`;
    /// `a` lists `a₁, a₂, …`.
    pub fn interpolate(n: usize, a: &[f64]) -> Result<Self> {
        let fam = Levels::interpolated(a)?;
        WeightSequence::new(n, Arc::new(fam))
    }

    /// Model weights of a tuple: `μ(β, g₀) = (|β|+1) ‖Σ_{|σ|=|β|} T_σT_σ*‖^{1/2}`,
    /// vanishing from the nilpotency index on. Non-nilpotent tuples are
    /// tabulated through level `kmax`.
    pub fn from_tuple_norms(t: &OperatorTuple, kmax: usize) -> Result<Self> {
        let stats = tuple_stats(t, kmax.max(1));
        if stats.level_norms.first().copied().unwrap_or(0.0) == 0.0 {
            return Err(Error::InvalidParameter(
                "tuple is zero: all level norms vanish".into(),
            ));
        }
        let mut a = vec![1.0];
        let mut tail_zero = false;
        for (k, &norm) in stats.level_norms.iter().enumerate() {
            if norm == 0.0 {
                tail_zero = true;
                break;
            }
            a.push((k as f64 + 2.0) * norm.sqrt());
        }
        if tail_zero {
            a.push(0.0);
        }
        let fam = Levels::new(a, tail_zero, "tuple")?;
        WeightSequence::new(t.n(), Arc::new(fam))
    }
}

fn binom_real(s: f64, k: usize) -> f64 {
    // C(s+k-1, k) = Π_{j=1}^k (s+j-1)/j
    (1..=k).fold(1.0, |acc, j| acc * (s + j as f64 - 1.0) / j as f64)
}

#[derive(Debug, Clone)]
pub struct Unit;

impl WeightFamily for Unit {
    fn kind(&self) -> &'static str {
        "unit"
    }
    fn weight(&self, _beta: &Word) -> f64 {
        1.0
    }
    fn length_norm(&self, _k: usize) -> Option<f64> {
        Some(1.0)
    }
    fn certified_level_norm(&self, _k: usize) -> Option<f64> {
        Some(1.0)
    }
    fn certified_radius(&self) -> Option<f64> {
        Some(1.0)
    }
    fn certified_weight_sup(&self) -> Option<f64> {
        Some(1.0)
    }
    fn ball_membership(&self, x: f64) -> Option<bool> {
        Some(x < 1.0)
    }
    fn params(&self) -> Value {
        json!({})
    }
}

#[derive(Debug, Clone)]
pub struct Constant {
    pub rho: f64,
}

impl WeightFamily for Constant {
    fn kind(&self) -> &'static str {
        "constant"
    }
    fn weight(&self, _beta: &Word) -> f64 {
        self.rho
    }
    fn length_norm(&self, k: usize) -> Option<f64> {
        Some(self.rho.powi(k as i32))
    }
    fn certified_level_norm(&self, k: usize) -> Option<f64> {
        Some(self.rho.powi(k as i32))
    }
    fn certified_radius(&self) -> Option<f64> {
        Some(self.rho)
    }
    fn certified_weight_sup(&self) -> Option<f64> {
        Some(self.rho)
    }
    fn ball_membership(&self, x: f64) -> Option<bool> {
        (self.rho > 0.0).then_some(x < self.rho * self.rho)
    }
    fn params(&self) -> Value {
        json!({ "rho": self.rho })
    }
}

/// `μ_β = √(|β| / (s + |β| − 1))`, so `μ(β, g₀)² = 1 / C(s+k−1, k)`.
#[derive(Debug, Clone)]
pub struct Besov {
    pub s: f64,
}

impl WeightFamily for Besov {
    fn kind(&self) -> &'static str {
        "besov"
    }
    fn weight(&self, beta: &Word) -> f64 {
        let k = beta.len() as f64;
        (k / (self.s + k - 1.0)).sqrt()
    }
    fn length_norm(&self, k: usize) -> Option<f64> {
        Some((1.0 / binom_real(self.s, k)).sqrt())
    }
    fn certified_level_norm(&self, k: usize) -> Option<f64> {
        // each factor j/(s+j-1) is ≤ 1 and increases to 1 when s ≥ 1; otherwise
        // it is ≥ 1 and decreasing, so α = g₀ is extremal
        if self.s >= 1.0 {
            Some(1.0)
        } else {
            self.length_norm(k)
        }
    }
    fn certified_radius(&self) -> Option<f64> {
        Some(1.0)
    }
    fn certified_weight_sup(&self) -> Option<f64> {
        Some(if self.s >= 1.0 {
            1.0
        } else {
            (1.0 / self.s).sqrt()
        })
    }
    fn ball_membership(&self, x: f64) -> Option<bool> {
        // terms C(s+k-1,k) x^k ~ k^{s-1} x^k
        Some(x < 1.0)
    }
    fn params(&self) -> Value {
        json!({ "s": self.s })
    }
}

/// `μ_β = √((|β| / (|β|+1))^s)`, so `μ(β, g₀)² = (k+1)^{−s}`.
#[derive(Debug, Clone)]
pub struct DirichletScale {
    pub s: f64,
}

impl WeightFamily for DirichletScale {
    fn kind(&self) -> &'static str {
        "dirichlet"
    }
    fn weight(&self, beta: &Word) -> f64 {
        let k = beta.len() as f64;
        (k / (k + 1.0)).powf(self.s).sqrt()
    }
    fn length_norm(&self, k: usize) -> Option<f64> {
        Some((k as f64 + 1.0).powf(-self.s / 2.0))
    }
    fn certified_level_norm(&self, k: usize) -> Option<f64> {
        if self.s >= 0.0 {
            Some(1.0)
        } else {
            self.length_norm(k)
        }
    }
    fn certified_radius(&self) -> Option<f64> {
        Some(1.0)
    }
    fn certified_weight_sup(&self) -> Option<f64> {
        Some(if self.s >= 0.0 {
            1.0
        } else {
            2f64.powf(-self.s / 2.0)
        })
    }
    fn ball_membership(&self, x: f64) -> Option<bool> {
        // terms (k+1)^s x^k
        Some(x < 1.0 || (x == 1.0 && self.s < -1.0))
    }
    fn params(&self) -> Value {
        json!({ "s": self.s })
    }
}

/// `μ_β = ((|β|+1)/|β|)^p`, so `μ(β, g₀) = (k+1)^p`.
#[derive(Debug, Clone)]
pub struct RatioPower {
    pub p: f64,
}

impl WeightFamily for RatioPower {
    fn kind(&self) -> &'static str {
        "ratio_power"
    }
    fn weight(&self, beta: &Word) -> f64 {
        let k = beta.len() as f64;
        ((k + 1.0) / k).powf(self.p)
    }
    fn length_norm(&self, k: usize) -> Option<f64> {
        Some((k as f64 + 1.0).powf(self.p))
    }
    fn certified_level_norm(&self, k: usize) -> Option<f64> {
        // ((m+k+1)/(m+1))^p is decreasing in m for p ≥ 0
        if self.p >= 0.0 {
            self.length_norm(k)
        } else {
            Some(1.0)
        }
    }
    fn certified_radius(&self) -> Option<f64> {
        Some(1.0)
    }
    fn certified_weight_sup(&self) -> Option<f64> {
        Some(if self.p >= 0.0 {
            2f64.powf(self.p)
        } else {
            1.0
        })
    }
    fn ball_membership(&self, x: f64) -> Option<bool> {
        // terms x^k / (k+1)^{2p}
        Some(x < 1.0 || (x == 1.0 && 2.0 * self.p > 1.0))
    }
    fn params(&self) -> Value {
        json!({ "p": self.p })
    }
}

/// `μ_β = (|β|+1)^{−p}`, so `μ(β, g₀) = ((k+1)!)^{−p}`.
#[derive(Debug, Clone)]
pub struct InversePower {
    pub p: f64,
}

impl WeightFamily for InversePower {
    fn kind(&self) -> &'static str {
        "inverse_power"
    }
    fn weight(&self, beta: &Word) -> f64 {
        (beta.len() as f64 + 1.0).powf(-self.p)
    }
    fn length_norm(&self, k: usize) -> Option<f64> {
        Some((2..=k + 1).fold(1.0, |acc, j| acc * (j as f64).powf(-self.p)))
    }
    fn certified_level_norm(&self, k: usize) -> Option<f64> {
        if self.p >= 0.0 {
            self.length_norm(k)
        } else {
            Some(f64::INFINITY)
        }
    }
    fn certified_radius(&self) -> Option<f64> {
        Some(match self.p {
            p if p > 0.0 => 0.0,
            p if p == 0.0 => 1.0,
            _ => f64::INFINITY,
        })
    }
    fn certified_weight_sup(&self) -> Option<f64> {
        Some(if self.p >= 0.0 {
            2f64.powf(-self.p)
        } else {
            f64::INFINITY
        })
    }
    fn ball_membership(&self, x: f64) -> Option<bool> {
        // terms ((k+1)!)^{2p} x^k
        Some(match self.p {
            p if p > 0.0 => x == 0.0,
            p if p == 0.0 => x < 1.0,
            _ => true,
        })
    }
    fn params(&self) -> Value {
        json!({ "p": self.p })
    }
}

/// Length-only weights given by their norming constants `A_k = μ(β, g₀)`.
#[derive(Debug, Clone)]
pub struct Levels {
    /// `A_0 = 1, A_1, …, A_K`.
    a: Vec<f64>,
    /// `A_k = 0` for every `k > K`.
    tail_zero: bool,
    submultiplicative: bool,
    source: &'static str,
}

impl Levels {
    pub fn new(a: Vec<f64>, tail_zero: bool, source: &'static str) -> Result<Self> {
        if a.first() != Some(&1.0) {
            return Err(Error::InvalidParameter("A_0 must be 1".into()));
        }
        if a.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "level constants must be finite and nonnegative".into(),
            ));
        }
        if tail_zero && *a.last().unwrap() != 0.0 {
            return Err(Error::InvalidParameter(
                "a zero tail requires the last listed level to vanish".into(),
            ));
        }
        check_zero_pattern(&a)?;
        let submultiplicative = submultiplicative_violation(&a, 1e-12).is_none();
        Ok(Levels {
            a,
            tail_zero,
            submultiplicative,
            source,
        })
    }

    fn interpolated(a_tail: &[f64]) -> Result<Self> {
        let mut a = vec![1.0];
        a.extend_from_slice(a_tail);
        if a.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "sequence entries must be finite and nonnegative".into(),
            ));
        }
        check_zero_pattern(&a)?;
        if let Some((k, m)) = submultiplicative_violation(&a, 0.0) {
            return Err(Error::NotSubmultiplicative {
                k,
                m,
                lhs: a[k + m],
                rhs: a[k] * a[m],
            });
        }
        let tail_zero = *a.last().unwrap() == 0.0;
        Ok(Levels {
            a,
            tail_zero,
            submultiplicative: true,
            source: "interpolated",
        })
    }

    pub fn constants(&self) -> &[f64] {
        &self.a
    }

    pub fn is_submultiplicative(&self) -> bool {
        self.submultiplicative
    }

    fn level(&self, k: usize) -> Option<f64> {
        match self.a.get(k) {
            Some(&v) => Some(v),
            None if self.tail_zero => Some(0.0),
            None => None,
        }
    }
}

fn check_zero_pattern(a: &[f64]) -> Result<()> {
    if let Some(first_zero) = a.iter().position(|&v| v == 0.0) {
        if let Some(j) = a[first_zero..].iter().position(|&v| v > 0.0) {
            return Err(Error::InvalidZeroPattern(format!(
                "a[{first_zero}] = 0 but a[{}] > 0",
                first_zero + j
            )));
        }
    }
    Ok(())
}

/// First `(k, m)` with `a_{k+m} > a_k a_m (1 + rel)`, if any.
fn submultiplicative_violation(a: &[f64], rel: f64) -> Option<(usize, usize)> {
    let len = a.len();
    for k in 1..len {
        for m in 1..=k {
            if k + m >= len {
                break;
            }
            if a[k + m] > a[k] * a[m] * (1.0 + rel) {
                return Some((m, k));
            }
        }
    }
    None
}

impl WeightFamily for Levels {
    fn kind(&self) -> &'static str {
        if self.source == "interpolated" {
            "interpolated"
        } else {
            "levels"
        }
    }
    fn weight(&self, beta: &Word) -> f64 {
        let k = beta.len();
        let prev = self.level(k - 1).expect("within level cap");
        let cur = self.level(k).expect("within level cap");
        if prev == 0.0 {
            0.0
        } else {
            cur / prev
        }
    }
    fn level_cap(&self) -> Option<usize> {
        (!self.tail_zero).then(|| self.a.len() - 1)
    }
    fn length_norm(&self, k: usize) -> Option<f64> {
        self.level(k)
    }
    fn certified_level_norm(&self, k: usize) -> Option<f64> {
        // for submultiplicative constants A_{m+k}/A_m ≤ A_k, with equality at m = 0
        if self.submultiplicative {
            self.level(k)
        } else {
            None
        }
    }
    fn certified_radius(&self) -> Option<f64> {
        self.tail_zero.then_some(0.0)
    }
    fn params(&self) -> Value {
        if self.source == "interpolated" {
            json!({ "sequence": self.a[1..].to_vec() })
        } else {
            json!({ "sequence": self.a[1..].to_vec(), "tail_zero": self.tail_zero })
        }
    }
}

/// Explicit weights for every word up to a level cap.
#[derive(Debug, Clone)]
pub struct Tabulated {
    n: usize,
    cap: usize,
    table: Vec<f64>,
    valid_truncation: bool,
    kind: &'static str,
    extra: Value,
}

impl Tabulated {
    /// `table[idx]` is `μ` of the word with graded index `idx`; entry 0 is ignored.
    pub fn from_dense(
        n: usize,
        cap: usize,
        mut table: Vec<f64>,
        kind: &'static str,
    ) -> Result<Self> {
        let dim = fock_dim(n, cap)?;
        if table.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: table.len(),
            });
        }
        if table.iter().skip(1).any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "weights must be finite and nonnegative".into(),
            ));
        }
        table[0] = 1.0;
        let valid_truncation = first_suffix_violation(n, cap, &table).is_none();
        Ok(Tabulated {
            n,
            cap,
            table,
            valid_truncation,
            kind,
            extra: json!({}),
        })
    }

    /// Whether the nonzero support is closed under taking suffixes.
    pub fn is_valid_truncation(&self) -> bool {
        self.valid_truncation
    }
}

/// A word with nonzero weight whose tail has zero weight, if any.
fn first_suffix_violation(n: usize, cap: usize, table: &[f64]) -> Option<Word> {
    let words = enumerate_words(n, cap).ok()?;
    for (idx, w) in words.iter().enumerate() {
        if w.len() >= 2 && table[idx] != 0.0 {
            let t = graded_index(&w.tail(), n).ok()?;
            if table[t] == 0.0 {
                return Some(w.clone());
            }
        }
    }
    None
}

impl WeightFamily for Tabulated {
    fn kind(&self) -> &'static str {
        self.kind
    }
    fn weight(&self, beta: &Word) -> f64 {
        let idx = graded_index(beta, self.n).expect("letters checked by caller");
        self.table[idx]
    }
    fn level_cap(&self) -> Option<usize> {
        Some(self.cap)
    }
    fn params(&self) -> Value {
        if self.kind == "series" {
            return self.extra.clone();
        }
        let words = enumerate_words(self.n, self.cap).unwrap_or_default();
        let table: BTreeMap<String, f64> = words
            .iter()
            .zip(&self.table)
            .skip(1)
            .map(|(w, &v)| (w.to_string(), v))
            .collect();
        json!({
            "table": table,
            "level_cap": self.cap,
            "allow_any_zero_pattern": !self.valid_truncation,
        })
    }
}

/// Coefficients `b_α` of `1 + Σ_{k≥1} C(s+k−1, k) φ^k` up to words of length `cap`,
/// where `φ = Σ d_α Z_α` has no constant term; graded index order.
pub fn series_coefficients(n: usize, d: &[f64], s: f64, cap: usize) -> Result<Vec<f64>> {
    let dim = fock_dim(n, cap)?;
    if d.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: d.len(),
        });
    }
    let mut g = vec![0.0; dim];
    g[0] = 1.0;
    let mut power = g.clone();
    for k in 1..=cap {
        power = concat_product(n, cap, &power, d);
        let c = binom_real(s, k);
        for (gi, pi) in g.iter_mut().zip(&power) {
            *gi += c * pi;
        }
    }
    Ok(g)
}

/// Coefficients of `X·Y` in the free algebra, truncated at length `cap`.
pub fn concat_product(n: usize, cap: usize, x: &[f64], y: &[f64]) -> Vec<f64> {
    let dim = x.len();
    let mut out = vec![0.0; dim];
    let pow: Vec<usize> = (0..=cap).map(|j| n.pow(j as u32)).collect();
    for len in 0..=cap {
        let off = level_offset(n, len);
        for v in 0..pow[len] {
            let mut acc = 0.0;
            for j in 0..=len {
                // prefix of length j, suffix of length len - j
                let pv = v / pow[len - j];
                let sv = v % pow[len - j];
                let xa = x[level_offset(n, j) + pv];
                if xa != 0.0 {
                    acc += xa * y[level_offset(n, len - j) + sv];
                }
            }
            out[off + v] = acc;
        }
    }
    out
}

/// Series family: `b_α` is the `Z_α` coefficient of `1 + Σ C(s+k−1,k) φ^k`.
pub fn series_family(
    n: usize,
    coeffs: &BTreeMap<Word, f64>,
    s: f64,
    cap: usize,
) -> Result<Tabulated> {
    if !(s >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "series family requires s >= 1 (got {s})"
        )));
    }
    if cap == 0 {
        return Err(Error::InvalidParameter("level cap must be positive".into()));
    }
    let dim = fock_dim(n, cap)?;
    let mut d = vec![0.0; dim];
    for (w, &v) in coeffs {
        w.check(n)?;
        if w.is_empty() {
            if v != 0.0 {
                return Err(Error::InvalidParameter(
                    "series generator must have no constant term".into(),
                ));
            }
            continue;
        }
        if !(v >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coefficient of {w} is negative"
            )));
        }
        if w.len() <= cap {
            d[graded_index(w, n)?] = v;
        }
    }
    for i in 1..=n {
        if d[i] <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "series coefficient of generator {i} must be positive"
            )));
        }
    }
    let b = series_coefficients(n, &d, s, cap)?;
    let words = enumerate_words(n, cap)?;
    let mut table = vec![1.0; dim];
    for (idx, w) in words.iter().enumerate().skip(1) {
        let t = graded_index(&w.tail(), n)?;
        table[idx] = (b[t] / b[idx]).sqrt();
    }
    let mut fam = Tabulated::from_dense(n, cap, table, "series")?;
    let coeff_json: BTreeMap<String, f64> =
        coeffs.iter().map(|(w, &v)| (w.to_string(), v)).collect();
    fam.extra = json!({ "series": { "coeffs": coeff_json, "s": s }, "level_cap": cap });
    Ok(fam)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub coeffs: BTreeMap<String, f64>,
    pub s: f64,
}

/// JSON weight spec, e.g. `{"n": 2, "kind": "besov", "s": 2.0}`.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub n: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_any_zero_pattern: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_zero: Option<bool>,
}

impl WeightSpec {
    pub fn family(n: usize, kind: &str) -> Self {
        WeightSpec {
            n,
            kind: kind.to_string(),
            ..Default::default()
        }
    }

    fn need(&self, v: Option<f64>, name: &str) -> Result<f64> {
        v.ok_or_else(|| Error::InvalidParameter(format!("family {} needs {name}", self.kind)))
    }
}

/// Builds one family from a spec; registered by name.
pub trait FamilyBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, spec: &WeightSpec) -> Result<Arc<dyn WeightFamily>>;
}

struct FnBuilder {
    name: &'static str,
    summary: &'static str,
    build: fn(&WeightSpec) -> Result<Arc<dyn WeightFamily>>,
}

impl FamilyBuilder for FnBuilder {
    fn name(&self) -> &'static str {
        self.name
    }
    fn summary(&self) -> &'static str {
        self.summary
    }
    fn build(&self, spec: &WeightSpec) -> Result<Arc<dyn WeightFamily>> {
        (self.build)(spec)
    }
}

pub struct FamilyRegistry {
    builders: BTreeMap<&'static str, Box<dyn FamilyBuilder>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry {
            builders: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, builder: Box<dyn FamilyBuilder>) {
        self.builders.insert(builder.name(), builder);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.builders.keys().copied().collect()
    }

    pub fn summaries(&self) -> Vec<(&'static str, &'static str)> {
        self.builders
            .values()
            .map(|b| (b.name(), b.summary()))
            .collect()
    }

    pub fn build(&self, spec: &WeightSpec) -> Result<WeightSequence> {
        let builder = self.builders.get(spec.kind.as_str()).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown weight family {:?} (known: {})",
                spec.kind,
                self.names().join(", ")
            ))
        })?;
        WeightSequence::new(spec.n, builder.build(spec)?)
    }

    pub fn with_builtin() -> Self {
        let mut r = Self::empty();
        let mut add = |name, summary, build| {
            r.register(Box::new(FnBuilder {
                name,
                summary,
                build,
            }))
        };
        add("unit", "mu = 1 (full Fock space)", |_| Ok(Arc::new(Unit)));
        add("constant", "mu = rho", |spec| {
            let rho = spec.need(spec.rho, "rho")?;
            if !(rho >= 0.0) || !rho.is_finite() {
                return Err(Error::InvalidParameter("rho must be >= 0".into()));
            }
            Ok(Arc::new(Constant { rho }))
        });
        add("besov", "mu_k = sqrt(k/(s+k-1)), s > 0", |spec| {
            let s = spec.need(spec.s, "s")?;
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "besov needs s > 0 (got {s})"
                )));
            }
            Ok(Arc::new(Besov { s }))
        });
        add("dirichlet", "mu_k = sqrt((k/(k+1))^s)", |spec| {
            let s = spec.need(spec.s, "s")?;
            if !s.is_finite() {
                return Err(Error::InvalidParameter("s must be finite".into()));
            }
            Ok(Arc::new(DirichletScale { s }))
        });
        add("ratio_power", "mu_k = ((k+1)/k)^p", |spec| {
            let p = spec.need(spec.p, "p")?;
            if !p.is_finite() {
                return Err(Error::InvalidParameter("p must be finite".into()));
            }
            Ok(Arc::new(RatioPower { p }))
        });
        add("inverse_power", "mu_k = (k+1)^(-p)", |spec| {
            let p = spec.need(spec.p, "p")?;
            if !p.is_finite() {
                return Err(Error::InvalidParameter("p must be finite".into()));
            }
            Ok(Arc::new(InversePower { p }))
        });
        add(
            "interpolated",
            "mu_k = a_k/a_(k-1) from a submultiplicative a_1, a_2, ...",
            |spec| {
                let a = spec
                    .sequence
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter("interpolated needs sequence".into()))?;
                Ok(Arc::new(Levels::interpolated(a)?))
            },
        );
        add(
            "levels",
            "length-only weights from norming constants A_1, A_2, ...",
            |spec| {
                let a_tail = spec
                    .sequence
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter("levels needs sequence".into()))?;
                let mut a = vec![1.0];
                a.extend_from_slice(a_tail);
                Ok(Arc::new(Levels::new(
                    a,
                    spec.tail_zero.unwrap_or(false),
                    "levels",
                )?))
            },
        );
        add(
            "tabulated",
            "explicit table of weights up to a level cap",
            |spec| {
                let table = spec
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter("tabulated needs table".into()))?;
                let mut parsed = BTreeMap::new();
                for (k, &v) in table {
                    let w: Word = k.parse()?;
                    w.check(spec.n)?;
                    if w.is_empty() {
                        return Err(Error::InvalidParameter(
                            "table entries need |word| >= 1".into(),
                        ));
                    }
                    parsed.insert(w, v);
                }
                let cap = spec
                    .level_cap
                    .or_else(|| parsed.keys().map(|w| w.len()).max())
                    .unwrap_or(0);
                let words = enumerate_words(spec.n, cap)?;
                let mut dense = vec![1.0; words.len()];
                for (idx, w) in words.iter().enumerate().skip(1) {
                    dense[idx] = match (parsed.get(w), spec.default) {
                        (Some(&v), _) => v,
                        (None, Some(d)) => d,
                        (None, None) => {
                            return Err(Error::InvalidParameter(format!(
                                "table has no entry for word {w} and no default"
                            )))
                        }
                    };
                }
                let fam = Tabulated::from_dense(spec.n, cap, dense, "tabulated")?;
                if !fam.valid_truncation && !spec.allow_any_zero_pattern.unwrap_or(false) {
                    let w = first_suffix_violation(spec.n, cap, &fam.table).unwrap();
                    return Err(Error::InvalidZeroPattern(format!(
                        "word {w} has nonzero weight but a zero-weight suffix"
                    )));
                }
                Ok(Arc::new(fam))
            },
        );
        add(
            "series",
            "b_alpha from 1 + sum_k C(s+k-1,k) phi^k, s >= 1",
            |spec| {
                let series = spec.series.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("series needs series.coeffs and series.s".into())
                })?;
                let mut coeffs = BTreeMap::new();
                for (k, &v) in &series.coeffs {
                    coeffs.insert(k.parse::<Word>()?, v);
                }
                let cap = spec.level_cap.unwrap_or(6);
                Ok(Arc::new(series_family(spec.n, &coeffs, series.s, cap)?))
            },
        );
        r
    }
}

/// Builds weights from a spec through the built-in registry.
pub fn make_family(spec: &WeightSpec) -> Result<WeightSequence> {
    FamilyRegistry::with_builtin().build(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVerdict {
    CertifiedBounded,
    CertifiedUnbounded,
    BoundedWithinScan,
    UnboundedSuspected,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorBounds {
    pub generator: usize,
    /// `max_{|α| = j} μ_{g_iα}` for `j = 0 … max_len − 1`.
    pub left_by_level: Vec<f64>,
    /// `max_{|α| = j} μ̃_{αg_i}` for `j = 0 … max_len − 1`.
    pub right_by_level: Vec<f64>,
    pub left_sup: f64,
    pub right_sup: f64,
    pub left_verdict: BoundVerdict,
    pub right_verdict: BoundVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundednessReport {
    pub max_len: usize,
    pub generators: Vec<GeneratorBounds>,
    pub certified_weight_sup: Option<f64>,
}

const GROWTH_WINDOW: usize = 4;

fn scan_verdict(levels: &[f64], certified: Option<f64>) -> BoundVerdict {
    if let Some(c) = certified {
        return if c.is_finite() {
            BoundVerdict::CertifiedBounded
        } else {
            BoundVerdict::CertifiedUnbounded
        };
    }
    let w = GROWTH_WINDOW.min(levels.len());
    let tail = &levels[levels.len() - w..];
    if w >= 2 && tail.windows(2).all(|p| p[1] > p[0]) {
        BoundVerdict::UnboundedSuspected
    } else {
        BoundVerdict::BoundedWithinScan
    }
}

/// Sups of the left weights `μ_{g_iα}` and right weights `μ̃_{αg_i}` over `|g_iα| ≤ max_len`.
pub fn boundedness_report(w: &WeightSequence, max_len: usize) -> Result<BoundednessReport> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be positive".into()));
    }
    w.check_level(max_len)?;
    let n = w.n();
    let weights = w.weight_table(max_len)?;
    let norms = w.norm_table(max_len)?;
    let words = enumerate_words(n, max_len - 1)?;
    let certified = w.family().certified_weight_sup();
    let mut generators = Vec::with_capacity(n);
    for i in 1..=n {
        let mut left = vec![0.0_f64; max_len];
        let mut right = vec![0.0_f64; max_len];
        for a in &words {
            let l = weights[graded_index(&a.prepend(i), n)?];
            let den = norms[graded_index(a, n)?];
            let r = if den == 0.0 {
                0.0
            } else {
                norms[graded_index(&a.append(i), n)?] / den
            };
            left[a.len()] = left[a.len()].max(l);
            right[a.len()] = right[a.len()].max(r);
        }
        let left_sup = left.iter().copied().fold(0.0, f64::max);
        let right_sup = right.iter().copied().fold(0.0, f64::max);
        generators.push(GeneratorBounds {
            generator: i,
            left_verdict: scan_verdict(&left, certified),
            right_verdict: scan_verdict(&right, certified),
            left_by_level: left,
            right_by_level: right,
            left_sup,
            right_sup,
        });
    }
    Ok(BoundednessReport {
        max_len,
        generators,
        certified_weight_sup: certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn fam(n: usize, kind: &str, f: impl FnOnce(&mut WeightSpec)) -> WeightSequence {
        let mut spec = WeightSpec::family(n, kind);
        f(&mut spec);
        make_family(&spec).unwrap()
    }

    #[test]
    fn unit_products_are_one() {
        let u = fam(2, "unit", |_| {});
        for b in enumerate_words(2, 3).unwrap() {
            for a in enumerate_words(2, 2).unwrap() {
                assert_eq!(u.mu_product(&b, &a), 1.0);
            }
        }
    }

    #[test]
    fn ratio_weights_product_closed_form() {
        let r = fam(2, "ratio_power", |s| s.p = Some(1.0));
        for b in enumerate_words(2, 3).unwrap().into_iter().skip(1) {
            for a in enumerate_words(2, 3).unwrap() {
                let want = (a.len() + b.len() + 1) as f64 / (a.len() + 1) as f64;
                assert!((r.mu_product(&b, &a) - want).abs() < 1e-14);
                assert!((r.mu_product_chain(&b, &a) - want).abs() < 1e-13);
            }
            assert_eq!(r.mu_norm(&b), (b.len() + 1) as f64);
        }
    }

    #[test]
    fn besov_norms() {
        let b2 = fam(2, "besov", |s| s.s = Some(2.0));
        let a = w("1.2");
        assert!((b2.mu_norm(&a).powi(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((b2.mu_product_chain(&a, &Word::empty()).powi(2) - 1.0 / 3.0).abs() < 1e-15);
        let b1 = fam(3, "besov", |s| s.s = Some(1.0));
        for x in enumerate_words(3, 3).unwrap().into_iter().skip(1) {
            assert_eq!(b1.mu(&x), 1.0);
        }
        assert!(make_family(&WeightSpec {
            s: Some(0.0),
            ..WeightSpec::family(2, "besov")
        })
        .is_err());
    }

    #[test]
    fn dirichlet_zero_is_unit() {
        let d = fam(2, "dirichlet", |s| s.s = Some(0.0));
        for x in enumerate_words(2, 4).unwrap() {
            assert_eq!(d.mu(&x), 1.0);
            assert_eq!(d.mu_norm(&x), 1.0);
        }
        let d2 = fam(2, "dirichlet", |s| s.s = Some(2.0));
        assert!((d2.mu_norm(&w("1.1.2")).powi(2) - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn series_with_sum_of_generators_is_besov() {
        for &s in &[1.0, 1.5, 2.0, 3.0] {
            let mut coeffs = BTreeMap::new();
            coeffs.insert("1".to_string(), 1.0);
            coeffs.insert("2".to_string(), 1.0);
            let ser = fam(2, "series", |spec| {
                spec.series = Some(SeriesSpec { coeffs, s });
                spec.level_cap = Some(5);
            });
            let bes = fam(2, "besov", |spec| spec.s = Some(s));
            for x in enumerate_words(2, 5).unwrap().into_iter().skip(1) {
                assert!((ser.mu(&x) - bes.mu(&x)).abs() < 1e-13, "s={s} word={x}");
            }
        }
    }

    #[test]
    fn series_rejects_bad_input() {
        let mk = |coeffs: &[(&str, f64)], s: f64| {
            let coeffs = coeffs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            make_family(&WeightSpec {
                series: Some(SeriesSpec { coeffs, s }),
                ..WeightSpec::family(2, "series")
            })
        };
        assert!(mk(&[("1", 1.0), ("2", 1.0)], 0.5).is_err());
        assert!(mk(&[("1", 1.0)], 2.0).is_err());
        assert!(mk(&[("1", 1.0), ("2", 1.0), ("e", 1.0)], 2.0).is_err());
        assert!(mk(&[("1", 1.0), ("2", 1.0), ("1.2", -0.1)], 2.0).is_err());
        assert!(mk(&[("1", 1.0), ("2", 0.5), ("1.2", 0.3)], 2.0).is_ok());
    }

    #[test]
    fn concat_product_against_word_oracle() {
        let n = 2;
        let cap = 3;
        let words = enumerate_words(n, cap).unwrap();
        let x: Vec<f64> = (0..words.len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..words.len()).map(|i| (i as f64 * 0.11).cos()).collect();
        let got = concat_product(n, cap, &x, &y);
        let mut want = vec![0.0; words.len()];
        for (ia, a) in words.iter().enumerate() {
            for (ib, b) in words.iter().enumerate() {
                let ab = a.concat(b);
                if ab.len() <= cap {
                    want[graded_index(&ab, n).unwrap()] += x[ia] * y[ib];
                }
            }
        }
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolation_examples() {
        let geo = WeightSequence::interpolate(2, &[2.0, 4.0, 8.0, 16.0]).unwrap();
        for x in enumerate_words(2, 4).unwrap().into_iter().skip(1) {
            assert_eq!(geo.mu(&x), 2.0);
            assert_eq!(geo.mu_norm(&x), 2f64.powi(x.len() as i32));
        }
        let nil = WeightSequence::interpolate(2, &[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(nil.mu(&w("1")), 1.0);
        assert_eq!(nil.mu(&w("2.1")), 1.0);
        assert_eq!(nil.mu(&w("1.1.2")), 0.0);
        assert_eq!(nil.mu(&w("1.1.2.2.1")), 0.0);
        assert_eq!(nil.family().level_cap(), None);
        assert!(matches!(
            WeightSequence::interpolate(2, &[1.0, 2.0, 6.0]),
            Err(Error::NotSubmultiplicative { k: 1, m: 1, .. })
        ));
        assert!(matches!(
            WeightSequence::interpolate(2, &[1.0, 0.0, 0.5]),
            Err(Error::InvalidZeroPattern(_))
        ));
    }

    #[test]
    fn tabulated_zero_pattern_validation() {
        let mut table = BTreeMap::new();
        table.insert("1".to_string(), 0.0);
        let base = WeightSpec {
            table: Some(table.clone()),
            default: Some(1.0),
            level_cap: Some(2),
            ..WeightSpec::family(2, "tabulated")
        };
        // g₂g₁ has nonzero weight but its suffix g₁ is zero
        assert!(matches!(
            make_family(&base),
            Err(Error::InvalidZeroPattern(_))
        ));
        let any = make_family(&WeightSpec {
            allow_any_zero_pattern: Some(true),
            ..base.clone()
        })
        .unwrap();
        assert_eq!(any.mu(&w("1")), 0.0);
        assert_eq!(any.mu(&w("2.1")), 1.0);
        // a valid truncation: zero on g₁ and every word ending in g₁
        table.insert("1.1".into(), 0.0);
        table.insert("2.1".into(), 0.0);
        let ok = make_family(&WeightSpec {
            table: Some(table),
            ..base
        })
        .unwrap();
        assert_eq!(ok.mu(&w("1.2")), 1.0);
        assert!(ok.check_level(3).is_err());
    }

    #[test]
    fn spec_round_trip() {
        for spec in [
            WeightSpec {
                s: Some(2.5),
                ..WeightSpec::family(3, "besov")
            },
            WeightSpec {
                p: Some(2.0),
                ..WeightSpec::family(2, "ratio_power")
            },
            WeightSpec {
                rho: Some(0.5),
                ..WeightSpec::family(1, "constant")
            },
            WeightSpec {
                sequence: Some(vec![1.0, 0.5, 0.0]),
                ..WeightSpec::family(2, "interpolated")
            },
        ] {
            let ws = make_family(&spec).unwrap();
            assert_eq!(ws.spec(), spec);
            let text = serde_json::to_string(&spec).unwrap();
            let back: WeightSpec = serde_json::from_str(&text).unwrap();
            assert_eq!(back, spec);
        }
        let tab = WeightSequence::from_b(2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0], 2).unwrap();
        let again = make_family(&tab.spec()).unwrap();
        for x in enumerate_words(2, 2).unwrap() {
            assert_eq!(again.mu(&x), tab.mu(&x));
        }
    }

    #[test]
    fn registry_knows_builtin_names() {
        let r = FamilyRegistry::with_builtin();
        for name in [
            "unit",
            "besov",
            "dirichlet",
            "series",
            "tabulated",
            "interpolated",
        ] {
            assert!(r.names().contains(&name));
        }
        assert!(r.build(&WeightSpec::family(2, "nope")).is_err());
    }

    #[test]
    fn boundedness_examples() {
        let u = fam(2, "unit", |_| {});
        let rep = boundedness_report(&u, 5).unwrap();
        for g in &rep.generators {
            assert_eq!(g.left_sup, 1.0);
            assert_eq!(g.right_sup, 1.0);
            assert_eq!(g.left_verdict, BoundVerdict::CertifiedBounded);
        }
        let bes = fam(2, "besov", |s| s.s = Some(3.0));
        let rep = boundedness_report(&bes, 6).unwrap();
        assert!(rep.generators.iter().all(|g| g.left_sup <= 1.0));
        let r = fam(2, "ratio_power", |s| s.p = Some(1.0));
        let rep = boundedness_report(&r, 6).unwrap();
        assert_eq!(rep.generators[0].left_sup, 2.0);
        assert_eq!(rep.generators[0].left_by_level[0], 2.0);
        // tabulated growth is flagged from the scan alone
        let mut b = vec![1.0; 15];
        let words = enumerate_words(2, 3).unwrap();
        for (idx, x) in words.iter().enumerate() {
            b[idx] = 1.0 / ((x.len() + 1) as f64).powi(2 * x.len() as i32);
        }
        let grow = WeightSequence::from_b(2, &b, 3).unwrap();
        let rep = boundedness_report(&grow, 3).unwrap();
        assert_eq!(
            rep.generators[0].left_verdict,
            BoundVerdict::UnboundedSuspected
        );
    }
}
