//! Truncated full Fock space and the weighted left/right multi-shifts on it.
//!
//! On levels `|α| ≤ N` the left shift acts as the compression `P_N W_i P_N`:
//! `W_i e_α = μ_{g_iα} e_{g_iα}` for `|α| < N` and `W_i e_α = 0` on the top
//! level. Every shift matrix has at most one entry per column, so norms of
//! the diagonal operators `Σ_{|β|=k} W_β W_β*` are read off the weights
//! instead of being computed from dense matrices.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeword::{enumerate_words, graded_index, level_offset, Word};
use crate::linalg::{CMat, C64};
use crate::weights::WeightSequence;

#[derive(Debug, Clone)]
pub struct TruncatedFock {
    n: usize,
    max_len: usize,
    words: Vec<Word>,
}

impl TruncatedFock {
    pub fn new(n: usize, max_len: usize) -> Result<Self> {
        Ok(TruncatedFock {
            n,
            max_len,
            words: enumerate_words(n, max_len)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> &Word {
        &self.words[idx]
    }

    pub fn index(&self, w: &Word) -> Option<usize> {
        if w.len() > self.max_len {
            return None;
        }
        graded_index(w, self.n).ok()
    }

    /// Indices of the words of length exactly `len`.
    pub fn level_range(&self, len: usize) -> std::ops::Range<usize> {
        level_offset(self.n, len)..level_offset(self.n, len + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A shift on the truncation: column `j` maps to `value · e_row`.
#[derive(Debug, Clone)]
pub struct ShiftMatrix {
    pub generator: usize,
    pub side: Side,
    dim: usize,
    columns: Vec<Option<(usize, f64)>>,
}

impl ShiftMatrix {
    /// `build_shift_matrix`: `W_i` (left) or `Λ_i` (right) compressed to levels ≤ `max_len`.
    pub fn build(w: &WeightSequence, i: usize, side: Side, max_len: usize) -> Result<Self> {
        let n = w.n();
        if i == 0 || i > n {
            return Err(Error::LetterOutOfRange { letter: i, n });
        }
        w.check_level(max_len)?;
        let space = TruncatedFock::new(n, max_len)?;
        let norms = match side {
            Side::Left => None,
            Side::Right => Some(w.norm_table(max_len)?),
        };
        let mut columns = vec![None; space.dim()];
        for (col, alpha) in space.words().iter().enumerate() {
            if alpha.len() == max_len {
                continue;
            }
            let entry = match side {
                Side::Left => {
                    let target = alpha.prepend(i);
                    (space.index(&target).unwrap(), w.mu(&target))
                }
                Side::Right => {
                    let target = alpha.append(i);
                    let row = space.index(&target).unwrap();
                    let norms = norms.as_ref().unwrap();
                    let v = if norms[col] == 0.0 {
                        0.0
                    } else {
                        norms[row] / norms[col]
                    };
                    (row, v)
                }
            };
            columns[col] = Some(entry);
        }
        Ok(ShiftMatrix {
            generator: i,
            side,
            dim: space.dim(),
            columns,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Structural entries (one per column below the top level).
    pub fn nnz(&self) -> usize {
        self.columns.iter().filter(|c| c.is_some()).count()
    }

    pub fn column(&self, col: usize) -> Option<(usize, f64)> {
        self.columns[col]
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.check(v.len())?;
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (col, entry) in self.columns.iter().enumerate() {
            if let Some((row, val)) = *entry {
                out[row] += v[col] * val;
            }
        }
        Ok(out)
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.check(v.len())?;
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (col, entry) in self.columns.iter().enumerate() {
            if let Some((row, val)) = *entry {
                out[col] = v[row] * val;
            }
        }
        Ok(out)
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (col, entry) in self.columns.iter().enumerate() {
            if let Some((row, val)) = *entry {
                m[(row, col)] = C64::new(val, 0.0);
            }
        }
        m
    }

    /// `(row, col, re, im)` for each structural entry, column-major.
    pub fn triplets(&self) -> Vec<(usize, usize, f64, f64)> {
        self.columns
            .iter()
            .enumerate()
            .filter_map(|(col, e)| e.map(|(row, v)| (row, col, v, 0.0)))
            .collect()
    }

    pub fn write_triplets<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (r, c, re, im) in self.triplets() {
            writeln!(out, "{r} {c} {re:.17e} {im:.17e}")?;
        }
        Ok(())
    }
}

/// `apply_shift`: applies `W_i`/`Λ_i` or its adjoint.
pub fn apply_shift(op: &ShiftMatrix, v: &[C64], adjoint: bool) -> Result<Vec<C64>> {
    if adjoint {
        op.apply_adjoint(v)
    } else {
        op.apply(v)
    }
}

/// Shift matrices for all generators on one side.
pub fn shift_tuple(w: &WeightSequence, side: Side, max_len: usize) -> Result<Vec<ShiftMatrix>> {
    (1..=w.n())
        .map(|i| ShiftMatrix::build(w, i, side, max_len))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelNorm {
    pub k: usize,
    /// `max μ(β, α)` over `|β| = k`, `|α| ≤ N − k`: the square root of
    /// `‖Σ_{|β|=k} W_β W_β*‖` on the truncation.
    pub value: f64,
    pub beta: Word,
    pub alpha: Word,
    /// `max μ(β, α)` over the deepest words `|α| = N − k`.
    pub deepest: f64,
    /// Supremum over the whole semigroup, when the family has a closed form.
    pub certified: Option<f64>,
}

/// `level_row_norm` with arg-max; the scan covers every word of length ≤ `max_len`.
pub fn level_row_norm(w: &WeightSequence, k: usize, max_len: usize) -> Result<LevelNorm> {
    if k > max_len {
        return Err(Error::InvalidParameter(format!(
            "level k = {k} exceeds truncation N = {max_len}"
        )));
    }
    w.check_level(max_len)?;
    let n = w.n();
    let certified = w.family().certified_level_norm(k);
    if w.is_length_only() {
        let mut best = (f64::NEG_INFINITY, 0usize);
        let mut deepest = 0.0;
        for m in 0..=max_len - k {
            let v = w.length_product(m, k).unwrap();
            if v > best.0 {
                best = (v, m);
            }
            if m == max_len - k {
                deepest = v;
            }
        }
        return Ok(LevelNorm {
            k,
            value: best.0,
            beta: Word::from_letters(&vec![1; k]),
            alpha: Word::from_letters(&vec![1; best.1]),
            deepest,
            certified,
        });
    }
    let weights = w.weight_table(max_len)?;
    let pow: Vec<usize> = (0..=max_len).map(|j| n.pow(j as u32)).collect();
    // each γ = βα with |β| = k contributes the product of its suffix weights
    // of lengths |α|+1 … |γ|
    let chain = |len: usize, v: usize| -> f64 {
        let mut p = 1.0;
        for j in len - k + 1..=len {
            p *= weights[level_offset(n, j) + v % pow[j]];
        }
        p
    };
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    for len in k..=max_len {
        let (v, arg) = (0..pow[len])
            .into_par_iter()
            .map(|v| (chain(len, v), v))
            .reduce(
                || (f64::NEG_INFINITY, usize::MAX),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        if v > best.0 {
            best = (v, len, arg);
        }
    }
    let deepest = (0..pow[max_len])
        .into_par_iter()
        .map(|v| chain(max_len, v))
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let gamma = crate::freeword::index_word(level_offset(n, best.1) + best.2, n);
    Ok(LevelNorm {
        k,
        value: best.0,
        beta: gamma.prefix(k),
        alpha: gamma.suffix(best.1 - k),
        deepest,
        certified,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusEstimate {
    pub max_len: usize,
    pub levels: Vec<LevelNorm>,
    /// `value_k^{1/k}` for `k = 1 … N`.
    pub roots: Vec<f64>,
    pub window: usize,
    /// Max of `roots` over the last `window` levels.
    pub estimate: f64,
    /// `min_k c_k^{1/k}` from closed-form level norms `c_k`; an upper bound for `r(W)`.
    pub certified_upper: Option<f64>,
    pub exact: Option<f64>,
}

pub const RADIUS_WINDOW: usize = 4;

pub fn joint_radius_estimate(w: &WeightSequence, max_len: usize) -> Result<RadiusEstimate> {
    if max_len < 2 {
        return Err(Error::InvalidParameter(
            "radius estimate needs N >= 2".into(),
        ));
    }
    let levels = (1..=max_len)
        .map(|k| level_row_norm(w, k, max_len))
        .collect::<Result<Vec<_>>>()?;
    let roots: Vec<f64> = levels
        .iter()
        .map(|l| l.value.powf(1.0 / l.k as f64))
        .collect();
    let window = RADIUS_WINDOW.min(roots.len());
    let estimate = roots[roots.len() - window..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let certified_upper = levels
        .iter()
        .map(|l| l.certified.map(|c| c.powf(1.0 / l.k as f64)))
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(f64::INFINITY, f64::min));
    Ok(RadiusEstimate {
        max_len,
        levels,
        roots,
        window,
        estimate,
        certified_upper,
        exact: w.family().certified_radius(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompactEvidence {
    pub generator: usize,
    /// `max_{|α|=j} μ_{g_iα}` for `j = 0 … N−1`.
    pub level_max: Vec<f64>,
    /// Level maxima nonincreasing over the last window and below the first level.
    pub decaying: bool,
    /// Cumulative `Σ_{|α|<j} μ_{g_iα}²` (Hilbert–Schmidt partial sums).
    pub l2_partial_sums: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub max_len: usize,
    pub injective: bool,
    pub row_contraction: bool,
    pub max_weight: f64,
    pub level_norms: Vec<f64>,
    pub bound: Option<f64>,
    pub power_bounded_within_scan: Option<bool>,
    pub compact: Vec<CompactEvidence>,
    /// Per generator and level `j`: `max_{|α|=j} |μ_{g_iα}² − μ_α²|`, with `μ_{g₀}` read as 0;
    /// the diagonal of `W_i*W_i − Σ_j W_jW_j*`.
    pub defect_by_level: Vec<Vec<f64>>,
}

pub fn classify(w: &WeightSequence, max_len: usize, bound: Option<f64>) -> Result<ClassifyReport> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("classify needs N >= 1".into()));
    }
    w.check_level(max_len)?;
    let n = w.n();
    let space = TruncatedFock::new(n, max_len)?;
    let weights = w.weight_table(max_len)?;
    let scanned = &weights[1..];
    let injective = scanned.iter().all(|&v| v > 0.0);
    let max_weight = scanned.iter().copied().fold(0.0, f64::max);
    let level_norms = (1..=max_len)
        .map(|k| level_row_norm(w, k, max_len).map(|l| l.value))
        .collect::<Result<Vec<_>>>()?;
    let top = level_norms.iter().copied().fold(0.0, f64::max);
    let mut compact = Vec::with_capacity(n);
    let mut defect_by_level = Vec::with_capacity(n);
    for i in 1..=n {
        let mut level_max = vec![0.0_f64; max_len];
        let mut level_sq = vec![0.0_f64; max_len];
        let mut defect = vec![0.0_f64; max_len];
        for (idx, a) in space.words().iter().enumerate() {
            if a.len() == max_len {
                continue;
            }
            let m = weights[space.index(&a.prepend(i)).unwrap()];
            let own = if a.is_empty() { 0.0 } else { weights[idx] };
            level_max[a.len()] = level_max[a.len()].max(m);
            level_sq[a.len()] += m * m;
            defect[a.len()] = defect[a.len()].max((m * m - own * own).abs());
        }
        let win = RADIUS_WINDOW.min(level_max.len());
        let tail = &level_max[level_max.len() - win..];
        let decaying = level_max.len() >= 2
            && tail.windows(2).all(|p| p[1] <= p[0])
            && level_max[level_max.len() - 1] < level_max[0];
        let l2_partial_sums = level_sq
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        compact.push(CompactEvidence {
            generator: i,
            level_max,
            decaying,
            l2_partial_sums,
        });
        defect_by_level.push(defect);
    }
    Ok(ClassifyReport {
        max_len,
        injective,
        row_contraction: scanned.iter().all(|&v| v <= 1.0),
        max_weight,
        level_norms,
        bound,
        power_bounded_within_scan: bound.map(|m| top <= m),
        compact,
        defect_by_level,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    InjectiveType,
    TruncatedType,
}

#[derive(Debug, Clone, Serialize)]
pub struct Component {
    /// The word `g₀` or a zero-weight word from which the component grows.
    pub root: Word,
    pub words: Vec<Word>,
    pub kind: ComponentKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub max_len: usize,
    pub valid_truncation: bool,
    pub components: Vec<Component>,
}

/// Connected components of the graph with edges `γ — g_iγ` whenever `μ_{g_iγ} ≠ 0`.
pub fn reduce_decompose(w: &WeightSequence, max_len: usize) -> Result<Decomposition> {
    w.check_level(max_len)?;
    let n = w.n();
    let space = TruncatedFock::new(n, max_len)?;
    let weights = w.weight_table(max_len)?;
    let dim = space.dim();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (idx, word) in space.words().iter().enumerate().skip(1) {
        if weights[idx] != 0.0 {
            let t = space.index(&word.tail()).unwrap();
            let (a, b) = (find(&mut parent, idx), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut valid_truncation = true;
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for idx in 0..dim {
        let r = find(&mut parent, idx);
        groups.entry(r).or_default().push(idx);
        let word = space.word(idx);
        if word.len() >= 2 && weights[idx] != 0.0 {
            let t = space.index(&word.tail()).unwrap();
            if weights[t] == 0.0 {
                valid_truncation = false;
            }
        }
    }
    let components = groups
        .into_values()
        .map(|members| {
            let truncated = members.iter().any(|&idx| {
                let a = space.word(idx);
                a.len() < max_len
                    && (1..=n).any(|i| weights[space.index(&a.prepend(i)).unwrap()] == 0.0)
            });
            Component {
                root: space.word(members[0]).clone(),
                words: members.iter().map(|&idx| space.word(idx).clone()).collect(),
                kind: if truncated {
                    ComponentKind::TruncatedType
                } else {
                    ComponentKind::InjectiveType
                },
            }
        })
        .collect();
    Ok(Decomposition {
        max_len,
        valid_truncation,
        components,
    })
}

/// Largest coefficient that `W_i` or `W_i*` moves out of a component's span.
pub fn component_leakage(w: &WeightSequence, dec: &Decomposition) -> Result<f64> {
    let n = w.n();
    let space = TruncatedFock::new(n, dec.max_len)?;
    let mut label = vec![usize::MAX; space.dim()];
    for (c, comp) in dec.components.iter().enumerate() {
        for word in &comp.words {
            label[space.index(word).unwrap()] = c;
        }
    }
    let shifts = shift_tuple(w, Side::Left, dec.max_len)?;
    let mut leak = 0.0_f64;
    for s in &shifts {
        for col in 0..space.dim() {
            let mut e = vec![C64::new(0.0, 0.0); space.dim()];
            e[col] = C64::new(1.0, 0.0);
            for img in [s.apply(&e)?, s.apply_adjoint(&e)?] {
                for (row, z) in img.iter().enumerate() {
                    if label[row] != label[col] {
                        leak = leak.max(z.norm());
                    }
                }
            }
        }
    }
    Ok(leak)
}
