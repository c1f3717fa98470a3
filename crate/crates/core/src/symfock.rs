//! The symmetric part of the weighted Fock space, realized on the lattice `ℕ₀ⁿ`.
//!
//! `y^(k) = ω_k⁻¹ Σ_{α∈Λ_k} μ(α,g₀)⁻¹ e_α` are orthogonal with `‖y^(k)‖² = 1/ω_k`,
//! so `u^(k) = √ω_k y^(k)` is an orthonormal basis and the compressed shifts act by
//! `B_i u^(k) = √(ω_k/ω_{k+e_i}) u^(k+e_i)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::TruncatedFock;
use crate::freeword::{
    checked_multinomial, log_multinomial, multi_indices_up_to, words_in_class, MultiIndex,
};
use crate::hardy::{point_membership, word_monomial, Membership, Symbol};
use crate::limits::max_dim;
use crate::linalg::{
    hermitian_eigenvalues, identity, is_exact_zero, op_norm, psd_norm, sqrt_pd, CMat, C64,
};
use crate::model::{ratio_verdict, OperatorTuple, RATIO_DELTA, STATS_WINDOW};
use crate::weights::WeightSequence;
use crate::Evidence;

/// `ω_k` for length-only weights: `multinomial(k) · b_{|k|}`; `None` on a zero level.
fn omega_length_only(w: &WeightSequence, k: &MultiIndex) -> Option<Option<f64>> {
    let a = w.family().length_norm(k.total())?;
    if a == 0.0 {
        return Some(None);
    }
    let b = 1.0 / (a * a);
    Some(Some(match checked_multinomial(k) {
        Some(m) if b.is_finite() => m as f64 * b,
        _ => (log_multinomial(k) - 2.0 * a.ln()).exp(),
    }))
}

/// `ω_k = Σ_{α∈Λ_k} 1/μ(α,g₀)²` by summing over the class.
pub fn omega_wordwise(w: &WeightSequence, k: &MultiIndex) -> Result<Option<f64>> {
    if k.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: k.n(),
        });
    }
    w.check_level(k.total())?;
    match checked_multinomial(k) {
        Some(m) if m <= max_dim() as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                dim: checked_multinomial(k).unwrap_or(u128::MAX),
                cap: max_dim(),
            })
        }
    }
    let mut s = 0.0;
    for a in words_in_class(k) {
        let m = w.mu_norm(&a);
        if m == 0.0 {
            return Ok(None);
        }
        s += 1.0 / (m * m);
    }
    Ok(Some(s))
}

/// `ω_k`, or `None` when a word of the class has zero norm.
pub fn omega_opt(w: &WeightSequence, k: &MultiIndex) -> Result<Option<f64>> {
    if k.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: k.n(),
        });
    }
    w.check_level(k.total())?;
    match omega_length_only(w, k) {
        Some(v) => Ok(v),
        None => omega_wordwise(w, k),
    }
}

/// `ln ω_k`, or `None` on a zero-norm word.
pub fn log_omega(w: &WeightSequence, k: &MultiIndex) -> Result<Option<f64>> {
    if w.is_length_only() {
        if let Some(a) = w.family().length_norm(k.total()) {
            if a == 0.0 {
                return Ok(None);
            }
            return Ok(Some(log_multinomial(k) - 2.0 * a.ln()));
        }
    }
    Ok(omega_opt(w, k)?.map(f64::ln))
}

pub fn omega(w: &WeightSequence, k: &MultiIndex) -> Result<f64> {
    omega_opt(w, k)?
        .ok_or_else(|| Error::Precondition(format!("a word of class ({k}) has zero weight norm")))
}

/// `y^(k)` in Fock coordinates on levels `≤ max_len`.
pub fn y_vector(w: &WeightSequence, k: &MultiIndex, max_len: usize) -> Result<Vec<C64>> {
    if k.total() > max_len {
        return Err(Error::InvalidParameter(format!(
            "|k| = {} exceeds truncation {max_len}",
            k.total()
        )));
    }
    let om = omega(w, k)?;
    let space = TruncatedFock::new(w.n(), max_len)?;
    let mut v = vec![C64::new(0.0, 0.0); space.dim()];
    for a in words_in_class(k) {
        let idx = space.index(&a).unwrap();
        v[idx] = C64::new(1.0 / (w.mu_norm(&a) * om), 0.0);
    }
    Ok(v)
}

/// Multi-indices of degree `≤ D` with their class weights.
#[derive(Debug, Clone)]
pub struct SymmetricBasis {
    n: usize,
    d_total: usize,
    indices: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
    omega: Vec<f64>,
}

impl SymmetricBasis {
    /// Lattice points only, without class weights.
    fn lattice(n: usize, d_total: usize) -> Self {
        let indices = multi_indices_up_to(n, d_total);
        let position = indices
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        SymmetricBasis {
            n,
            d_total,
            indices,
            position,
            omega: Vec::new(),
        }
    }

    pub fn new(w: &WeightSequence, d_total: usize) -> Result<Self> {
        let indices = multi_indices_up_to(w.n(), d_total);
        if indices.len() > max_dim() {
            return Err(Error::CapExceeded {
                dim: indices.len() as u128,
                cap: max_dim(),
            });
        }
        let omega = indices
            .iter()
            .map(|k| omega(w, k))
            .collect::<Result<Vec<_>>>()?;
        let position = indices
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        Ok(SymmetricBasis {
            n: w.n(),
            d_total,
            indices,
            position,
            omega,
        })
    }

    /// Largest `D ≤ d_total` whose classes all have finite `ω`.
    pub fn finite_degree(w: &WeightSequence, d_total: usize) -> Result<Option<usize>> {
        let mut last = None;
        for deg in 0..=d_total {
            for k in crate::freeword::multi_indices_of_degree(w.n(), deg) {
                if omega_opt(w, &k)?.is_none() {
                    return Ok(last);
                }
            }
            last = Some(deg);
        }
        Ok(last)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_total(&self) -> usize {
        self.d_total
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index(&self, k: &MultiIndex) -> Option<usize> {
        self.position.get(k).copied()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Positions with `|k| < d_total`.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&j| self.indices[j].total() < self.d_total)
    }
}

/// `B_i` on the orthonormal basis `u^(k)`: one entry per column, none at the cap.
#[derive(Debug, Clone)]
pub struct LatticeShift {
    pub generator: usize,
    pub columns: Vec<Option<(usize, f64)>>,
}

impl LatticeShift {
    pub fn to_dense(&self) -> CMat {
        let d = self.columns.len();
        let mut m = CMat::zeros(d, d);
        for (col, e) in self.columns.iter().enumerate() {
            if let Some((row, v)) = e {
                m[(*row, col)] = C64::new(*v, 0.0);
            }
        }
        m
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (col, e) in self.columns.iter().enumerate() {
            if let Some((row, val)) = e {
                out[col] += v[*row] * *val;
            }
        }
        out
    }
}

pub fn commuting_shift_matrix(basis: &SymmetricBasis, i: usize) -> Result<LatticeShift> {
    if i == 0 || i > basis.n {
        return Err(Error::LetterOutOfRange {
            letter: i,
            n: basis.n,
        });
    }
    let columns = (0..basis.dim())
        .map(|col| {
            let k = &basis.indices[col];
            if k.total() >= basis.d_total {
                return None;
            }
            let row = basis.index(&k.bump(i)).unwrap();
            Some((row, (basis.omega[col] / basis.omega[row]).sqrt()))
        })
        .collect();
    Ok(LatticeShift {
        generator: i,
        columns,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompressionCheck {
    pub generator: usize,
    pub d_total: usize,
    pub max_len: usize,
    /// `max |⟨W_i y^(k), y^(k')⟩ − ⟨B_i u^(k), u^(k')⟩/√(ω_k ω_k')|`.
    pub residual: f64,
    /// `max |⟨y^(k), y^(k')⟩ − δ_{kk'}/ω_k|`.
    pub gram_residual: f64,
}

/// Entries of `W_i` between the `y`-vectors, against the lattice matrix.
pub fn compression_check(
    w: &WeightSequence,
    i: usize,
    d_total: usize,
    max_len: usize,
) -> Result<CompressionCheck> {
    if max_len < d_total + 1 {
        return Err(Error::InvalidParameter(format!(
            "truncation N = {max_len} must be at least D + 1 = {}",
            d_total + 1
        )));
    }
    let basis = SymmetricBasis::new(w, d_total)?;
    let b = commuting_shift_matrix(&basis, i)?.to_dense();
    let shift = crate::fock::ShiftMatrix::build(w, i, crate::fock::Side::Left, max_len)?;
    let ys: Vec<Vec<C64>> = basis
        .indices()
        .iter()
        .map(|k| y_vector(w, k, max_len))
        .collect::<Result<_>>()?;
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x * y.conj()).sum() };
    let mut residual = 0.0_f64;
    let mut gram_residual = 0.0_f64;
    for (c, yc) in ys.iter().enumerate() {
        let wy = shift.apply(yc)?;
        for (r, yr) in ys.iter().enumerate() {
            let fock = dot(&wy, yr);
            let lattice = b[(r, c)] / (basis.omega[c] * basis.omega[r]).sqrt();
            residual = residual.max((fock - lattice).norm());
            let g = dot(yc, yr);
            let expect = if r == c { 1.0 / basis.omega[c] } else { 0.0 };
            gram_residual = gram_residual.max((g - C64::new(expect, 0.0)).norm());
        }
    }
    Ok(CompressionCheck {
        generator: i,
        d_total,
        max_len,
        residual,
        gram_residual,
    })
}

/// `z_λ = Σ_k λ̄^k √ω_k u^(k)` in the lattice basis.
pub fn symmetric_kernel_vector(basis: &SymmetricBasis, lambda: &[C64]) -> Vec<C64> {
    basis
        .indices
        .iter()
        .zip(&basis.omega)
        .map(|(k, om)| k.monomial(lambda).conj() * om.sqrt())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelValue {
    pub value: [f64; 2],
    /// Partial sums `Σ_{|k|≤j} ω_k ζ^k λ̄^k` by degree.
    pub partial_sums: Vec<[f64; 2]>,
    /// Same partial sums as `⟨z_λ, z_ζ⟩` over words, when the word space fits.
    pub wordwise: Option<Vec<[f64; 2]>>,
}

/// `κ(ζ, λ) = ⟨z_λ, z_ζ⟩ = Σ_k ω_k ζ^k λ̄^k`, truncated at `max_degree`.
pub fn h2_kernel(
    w: &WeightSequence,
    zeta: &[C64],
    lambda: &[C64],
    max_degree: usize,
) -> Result<KernelValue> {
    for p in [zeta, lambda] {
        if p.len() != w.n() {
            return Err(Error::DimensionMismatch {
                expected: w.n(),
                got: p.len(),
            });
        }
        if point_membership(w, p, max_degree.max(24))?.verdict != Membership::Member {
            return Err(Error::Precondition(format!(
                "{p:?} is not a bounded point evaluation"
            )));
        }
    }
    let mut partial_sums = Vec::with_capacity(max_degree + 1);
    let mut acc = C64::new(0.0, 0.0);
    for deg in 0..=max_degree {
        for k in crate::freeword::multi_indices_of_degree(w.n(), deg) {
            acc += k.monomial(zeta) * k.monomial(lambda).conj() * omega(w, &k)?;
        }
        partial_sums.push([acc.re, acc.im]);
    }
    let wordwise = match TruncatedFock::new(w.n(), max_degree) {
        Ok(space) => {
            let norms = w.norm_table(max_degree)?;
            let mut sums = vec![C64::new(0.0, 0.0); max_degree + 1];
            for (idx, a) in space.words().iter().enumerate() {
                sums[a.len()] += word_monomial(a, zeta) * word_monomial(a, lambda).conj()
                    / (norms[idx] * norms[idx]);
            }
            let mut acc = C64::new(0.0, 0.0);
            Some(
                sums.into_iter()
                    .map(|s| {
                        acc += s;
                        [acc.re, acc.im]
                    })
                    .collect(),
            )
        }
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(KernelValue {
        value: [acc.re, acc.im],
        partial_sums,
        wordwise,
    })
}

/// `T^k = T_1^{k_1} ⋯ T_n^{k_n}` for every lattice point, built by `T^{k+e_i} = T_i T^k`.
fn lattice_powers(t: &OperatorTuple, basis: &SymmetricBasis) -> Vec<CMat> {
    let mut out: Vec<CMat> = Vec::with_capacity(basis.dim());
    for (j, k) in basis.indices.iter().enumerate() {
        if j == 0 {
            out.push(identity(t.d()));
            continue;
        }
        let i = k.0.iter().position(|&e| e > 0).unwrap();
        let mut prev = k.clone();
        prev.0[i] -= 1;
        let p = t.get(i + 1) * &out[basis.index(&prev).unwrap()];
        out.push(p);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutativeCertificate {
    /// Degree cap actually used: the lattice stops below classes of infinite `ω`.
    pub d_total: usize,
    #[serde(skip)]
    pub k_matrix: CMat,
    /// `‖K T_i* − (B_i* ⊗ I) K‖` per generator.
    pub residuals: Vec<f64>,
    pub interior_residuals: Vec<f64>,
    /// `‖Σ_{|k|=j} ω_k T^k Q T^{k*}‖`.
    pub level_terms: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub cb_bound: f64,
    pub convergence: Evidence,
    pub commutator_defect: f64,
}

/// `K h = Σ_k √ω_k u^(k) ⊗ Q^{1/2} T^{k*} h` on `|k| ≤ D`.
pub fn commutative_model(
    t: &OperatorTuple,
    w: &WeightSequence,
    q: &CMat,
    d_total: usize,
) -> Result<CommutativeCertificate> {
    if t.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: t.n(),
        });
    }
    let scale = 1.0 + t.mats().iter().map(op_norm).fold(0.0, f64::max);
    let commutator_defect = t.commutator_defect();
    if commutator_defect > 1e-10 * scale * scale {
        return Err(Error::Precondition(format!(
            "tuple does not commute (defect {commutator_defect:e})"
        )));
    }
    let d = t.d();
    if q.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: q.nrows(),
        });
    }
    let q_half = sqrt_pd(q, 1e-12)?;
    let cap = SymmetricBasis::finite_degree(w, d_total)?
        .ok_or_else(|| Error::Precondition("omega is infinite at degree 0".into()))?;
    if cap < d_total {
        // classes of degree cap+1 have infinite ω: the tuple must vanish there
        let probe = SymmetricBasis::lattice(w.n(), cap + 1);
        let powers = lattice_powers(t, &probe);
        for (k, p) in probe.indices.iter().zip(&powers) {
            if k.total() == cap + 1 && !is_exact_zero(p) {
                return Err(Error::Precondition(format!(
                    "class ({k}) has infinite omega but T^k is nonzero"
                )));
            }
        }
    }
    let basis = SymmetricBasis::new(w, cap)?;
    let powers = lattice_powers(t, &basis);
    let blocks: Vec<CMat> = powers
        .iter()
        .zip(&basis.omega)
        .map(|(p, om)| &q_half * p.adjoint() * C64::new(om.sqrt(), 0.0))
        .collect();
    let dim = basis.dim();
    let mut k_matrix = CMat::zeros(dim * d, d);
    for (j, b) in blocks.iter().enumerate() {
        k_matrix.view_mut((j * d, 0), (d, d)).copy_from(b);
    }
    let mut level_terms = vec![0.0; cap + 1];
    let mut partial = CMat::zeros(d, d);
    for deg in 0..=cap {
        let mut s = CMat::zeros(d, d);
        for (j, k) in basis.indices.iter().enumerate() {
            if k.total() == deg {
                s += blocks[j].adjoint() * &blocks[j];
            }
        }
        level_terms[deg] = psd_norm(&s);
        partial += s;
    }
    let ev = hermitian_eigenvalues(&partial);
    let (lambda_min, lambda_max) = (ev[0], *ev.last().unwrap());

    let mut residuals = Vec::with_capacity(t.n());
    let mut interior_residuals = Vec::with_capacity(t.n());
    for i in 1..=t.n() {
        let b = commuting_shift_matrix(&basis, i)?;
        let ti_adj = t.get(i).adjoint();
        let (mut all, mut inner) = (CMat::zeros(d, d), CMat::zeros(d, d));
        for j in 0..dim {
            // row block k of (B_i* ⊗ I) K is b_{k+e_i,k} K_{k+e_i}
            let mut r = &blocks[j] * &ti_adj;
            if let Some((row, v)) = b.columns[j] {
                r -= &blocks[row] * C64::new(v, 0.0);
                inner += r.adjoint() * &r;
            }
            all += r.adjoint() * &r;
        }
        residuals.push(psd_norm(&all).sqrt());
        interior_residuals.push(psd_norm(&inner).sqrt());
    }
    let exact = cap < d_total || {
        let top = SymmetricBasis::lattice(w.n(), cap + 1);
        lattice_powers(t, &top)
            .iter()
            .zip(&top.indices)
            .all(|(p, k)| k.total() <= cap || is_exact_zero(p))
    };
    let convergence = if exact {
        Evidence::Certified
    } else {
        ratio_verdict(&level_terms, STATS_WINDOW, RATIO_DELTA)
    };
    if convergence == Evidence::Divergent {
        return Err(Error::Divergent(
            "level terms of the symmetric sum do not decay".into(),
        ));
    }
    Ok(CommutativeCertificate {
        d_total: cap,
        k_matrix,
        residuals,
        interior_residuals,
        level_terms,
        lambda_min,
        lambda_max,
        cb_bound: (lambda_max / lambda_min).sqrt(),
        convergence,
        commutator_defect,
    })
}

/// Polynomial in commuting variables, keyed by exponent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommSymbol {
    pub coeffs: BTreeMap<MultiIndex, C64>,
}

impl CommSymbol {
    /// `c_k = Σ_{α∈Λ_k} c_α`.
    pub fn abelianize(f: &Symbol, n: usize) -> Result<Self> {
        f.check(n)?;
        let mut out = CommSymbol::default();
        for (a, c) in f.terms() {
            *out.coeffs
                .entry(crate::freeword::abelianization(a, n))
                .or_insert(C64::new(0.0, 0.0)) += c;
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &CommSymbol) -> CommSymbol {
        let mut out = CommSymbol::default();
        for (a, c) in &self.coeffs {
            for (b, d) in &other.coeffs {
                *out.coeffs.entry(a.add(b)).or_insert(C64::new(0.0, 0.0)) += c * d;
            }
        }
        out
    }

    pub fn eval_point(&self, lambda: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(k, c)| c * k.monomial(lambda))
            .sum()
    }
}

fn power(t: &OperatorTuple, k: &MultiIndex) -> CMat {
    let mut p = identity(t.d());
    for (i, &e) in k.0.iter().enumerate() {
        for _ in 0..e {
            p = t.get(i + 1) * p;
        }
    }
    p
}

/// `Σ_{|k|≤N} (1 − |k|/(N+1)) c_k T^k`, or the plain sum with `fejer = false`.
pub fn commutative_cesaro(
    f: &CommSymbol,
    t: &OperatorTuple,
    big_n: usize,
    fejer: bool,
) -> Result<CMat> {
    let mut out = CMat::zeros(t.d(), t.d());
    for (k, c) in &f.coeffs {
        if k.n() != t.n() {
            return Err(Error::DimensionMismatch {
                expected: t.n(),
                got: k.n(),
            });
        }
        let weight = if fejer {
            if k.total() > big_n {
                continue;
            }
            1.0 - k.total() as f64 / (big_n as f64 + 1.0)
        } else {
            1.0
        };
        out += power(t, k) * (c * weight);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutativeCalculusReport {
    pub homomorphism_residual: f64,
    /// `‖Ψ_T(φ) − Ψ_T^{comm}(ab φ)‖`; zero for commuting `T`.
    pub abelianization_residual: f64,
    pub fejer_error: f64,
    pub fejer_envelope: f64,
}

pub fn commutative_calculus_certificates(
    phi: &Symbol,
    psi: &Symbol,
    t: &OperatorTuple,
    big_n: usize,
) -> Result<CommutativeCalculusReport> {
    let n = t.n();
    let (a, b) = (
        CommSymbol::abelianize(phi, n)?,
        CommSymbol::abelianize(psi, n)?,
    );
    let pa = commutative_cesaro(&a, t, big_n, false)?;
    let pb = commutative_cesaro(&b, t, big_n, false)?;
    let homomorphism_residual =
        op_norm(&(commutative_cesaro(&a.mul(&b), t, big_n, false)? - &pa * &pb));
    let nc = crate::hardy::cesaro_evaluate(phi, t, big_n, crate::hardy::CalculusMode::ExactPoly)?;
    let abelianization_residual = op_norm(&(nc - &pa));
    let fejer_error = op_norm(&(commutative_cesaro(&a, t, big_n, true)? - &pa));
    let mass: f64 = a
        .coeffs
        .iter()
        .map(|(k, c)| c.norm() * op_norm(&power(t, k)))
        .sum();
    let fejer_envelope = if big_n >= a.degree() {
        a.degree() as f64 / (big_n as f64 + 1.0) * mass
    } else {
        f64::INFINITY
    };
    Ok(CommutativeCalculusReport {
        homomorphism_residual,
        abelianization_residual,
        fejer_error,
        fejer_envelope,
    })
}
