//! Formal power series in `n` noncommuting variables: point evaluations,
//! kernel vectors and the Cesàro functional calculus on matrix tuples.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{shift_tuple, Side, TruncatedFock};
use crate::freeword::{multi_indices_of_degree, Word};
use crate::linalg::{identity, op_norm, spectral_radius, CMat, C64};
use crate::model::{nilpotent_index, ratio_verdict, tuple_stats, OperatorTuple, RATIO_DELTA};
use crate::symfock::log_omega;
use crate::weights::WeightSequence;
use crate::Evidence;

/// Finitely supported coefficients `c_α` of `Σ c_α Z_α`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Symbol {
    coeffs: BTreeMap<Word, C64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    pub coeffs: BTreeMap<String, [f64; 2]>,
}

impl Symbol {
    pub fn zero() -> Self {
        Symbol::default()
    }

    pub fn one() -> Self {
        Symbol::monomial(Word::empty(), C64::new(1.0, 0.0))
    }

    /// `Z_i`, 1-based.
    pub fn var(i: usize) -> Self {
        Symbol::monomial(Word::letter(i), C64::new(1.0, 0.0))
    }

    pub fn monomial(alpha: Word, c: C64) -> Self {
        let mut s = Symbol::zero();
        s.add_term(alpha, c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, C64)>) -> Self {
        let mut s = Symbol::zero();
        for (a, c) in terms {
            s.add_term(a, c);
        }
        s
    }

    pub fn add_term(&mut self, alpha: Word, c: C64) {
        let zero = C64::new(0.0, 0.0);
        let e = self.coeffs.entry(alpha.clone()).or_insert(zero);
        *e += c;
        if *e == zero {
            self.coeffs.remove(&alpha);
        }
    }

    pub fn coeff(&self, alpha: &Word) -> C64 {
        self.coeffs
            .get(alpha)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Longest supported word; 0 for constants and for the zero symbol.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Largest letter used.
    pub fn letters_used(&self) -> usize {
        self.coeffs
            .keys()
            .flat_map(|w| w.letters())
            .max()
            .unwrap_or(0)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        for w in self.coeffs.keys() {
            w.check(n)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &Symbol) -> Symbol {
        let mut s = self.clone();
        for (a, c) in &other.coeffs {
            s.add_term(a.clone(), *c);
        }
        s
    }

    pub fn scale(&self, z: C64) -> Symbol {
        Symbol::from_terms(self.coeffs.iter().map(|(a, c)| (a.clone(), c * z)))
    }

    /// Product in the free algebra: `(φψ)_γ = Σ_{αβ = γ} c_α d_β`.
    pub fn mul(&self, other: &Symbol) -> Symbol {
        let mut s = Symbol::zero();
        for (a, c) in &self.coeffs {
            for (b, d) in &other.coeffs {
                s.add_term(a.concat(b), c * d);
            }
        }
        s
    }

    /// `φ(r·)`: coefficients `r^{|α|} c_α`.
    pub fn dilate(&self, r: f64) -> Symbol {
        Symbol::from_terms(
            self.coeffs
                .iter()
                .map(|(a, c)| (a.clone(), c * r.powi(a.len() as i32))),
        )
    }

    /// `(Σ_{|α|=k} |c_α|²)^{1/2}` for `k = 0 … degree`.
    pub fn level_mass(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.degree() + 1];
        for (a, c) in &self.coeffs {
            m[a.len()] += c.norm_sqr();
        }
        m.into_iter().map(f64::sqrt).collect()
    }

    /// Window estimate of `limsup_k (Σ_{|α|=k}|c_α|²)^{1/2k}` over the top `window` levels.
    pub fn hol0_estimate(&self, window: usize) -> f64 {
        let mass = self.level_mass();
        let top = mass.len() - 1;
        let lo = (top + 1).saturating_sub(window).max(1);
        (lo..=top)
            .map(|k| mass[k].powf(1.0 / k as f64))
            .fold(0.0, f64::max)
    }

    /// `Σ c_α λ_α`.
    pub fn eval_point(&self, lambda: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(a, c)| c * word_monomial(a, lambda))
            .sum()
    }

    pub fn from_json(j: &SymbolJson) -> Result<Self> {
        let mut s = Symbol::zero();
        for (k, v) in &j.coeffs {
            let w: Word = k.parse()?;
            s.add_term(w, C64::new(v[0], v[1]));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> SymbolJson {
        SymbolJson {
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (a.to_string(), [c.re, c.im]))
                .collect(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(a, c)| format!("({}{:+}i)*Z[{a}]", c.re, c.im))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `λ_α = λ_{i₁} ⋯ λ_{i_k}`.
pub fn word_monomial(alpha: &Word, lambda: &[C64]) -> C64 {
    alpha.letters().map(|l| lambda[l - 1]).product()
}

fn check_lambda(w: &WeightSequence, lambda: &[C64]) -> Result<()> {
    if lambda.len() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: lambda.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    Undetermined,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatioTest {
    pub window: usize,
    pub delta: f64,
}

impl Default for RatioTest {
    fn default() -> Self {
        RatioTest {
            window: 5,
            delta: RATIO_DELTA,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointEvalResult {
    pub lambda: Vec<[f64; 2]>,
    pub verdict: Membership,
    pub evidence: Evidence,
    /// "closed_form", "finite" or "ratio_test".
    pub method: &'static str,
    /// `c_k(λ) = Σ_{|α|=k} |λ_α|²/μ(α,g₀)²`.
    pub level_terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub ratio_test: RatioTest,
    /// Verdict of the ratio test alone, for comparison with a closed form.
    pub ratio_verdict: Evidence,
}

/// `Σ_{|k'|=k} ω_{k'} |λ^{k'}|²` for `k = 0 … max_level`; infinite where a
/// zero-norm word meets a nonzero monomial.
pub fn kernel_level_terms(
    w: &WeightSequence,
    lambda: &[C64],
    max_level: usize,
) -> Result<Vec<f64>> {
    check_lambda(w, lambda)?;
    w.check_level(max_level)?;
    let log_abs: Vec<f64> = lambda.iter().map(|l| l.norm().ln()).collect();
    let mut out = Vec::with_capacity(max_level + 1);
    for k in 0..=max_level {
        let mut s = 0.0;
        for mi in multi_indices_of_degree(w.n(), k) {
            let lm: f64 =
                mi.0.iter()
                    .zip(&log_abs)
                    .map(|(&e, &l)| if e == 0 { 0.0 } else { 2.0 * e as f64 * l })
                    .sum();
            if lm == f64::NEG_INFINITY {
                continue;
            }
            match log_omega(w, &mi)? {
                Some(lo) => s += (lo + lm).exp(),
                None => s = f64::INFINITY,
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Same level sums computed word by word.
pub fn kernel_level_terms_wordwise(
    w: &WeightSequence,
    lambda: &[C64],
    max_level: usize,
) -> Result<Vec<f64>> {
    check_lambda(w, lambda)?;
    let space = TruncatedFock::new(w.n(), max_level)?;
    let norms = w.norm_table(max_level)?;
    let mut out = vec![0.0; max_level + 1];
    for (idx, a) in space.words().iter().enumerate() {
        let m = word_monomial(a, lambda).norm_sqr();
        if m == 0.0 {
            continue;
        }
        out[a.len()] += m / (norms[idx] * norms[idx]);
    }
    Ok(out)
}

fn partial_sums(terms: &[f64]) -> Vec<f64> {
    terms
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect()
}

/// Membership verdict from level terms alone.
fn scan_verdict(terms: &[f64], test: &RatioTest) -> (Membership, Evidence, &'static str) {
    if terms.iter().any(|t| t.is_infinite()) {
        return (Membership::NonMember, Evidence::Certified, "finite");
    }
    let ev = ratio_verdict(terms, test.window, test.delta);
    match ev {
        Evidence::Certified => (Membership::Member, ev, "finite"),
        Evidence::Convergent => (Membership::Member, ev, "ratio_test"),
        Evidence::Divergent => (Membership::NonMember, ev, "ratio_test"),
        Evidence::Undetermined => (Membership::Undetermined, ev, "ratio_test"),
    }
}

/// Whether `λ` is a bounded point evaluation: `Σ_α |λ_α|²/μ(α,g₀)² < ∞`.
pub fn point_membership(
    w: &WeightSequence,
    lambda: &[C64],
    max_level: usize,
) -> Result<PointEvalResult> {
    point_membership_with(w, lambda, max_level, RatioTest::default())
}

pub fn point_membership_with(
    w: &WeightSequence,
    lambda: &[C64],
    max_level: usize,
    test: RatioTest,
) -> Result<PointEvalResult> {
    let max_level = match w.family().level_cap() {
        Some(cap) => max_level.min(cap),
        None => max_level,
    };
    let level_terms = kernel_level_terms(w, lambda, max_level)?;
    let (mut verdict, mut evidence, mut method) = scan_verdict(&level_terms, &test);
    let ratio_ev = ratio_verdict(&level_terms, test.window, test.delta);
    let x: f64 = lambda.iter().map(|l| l.norm_sqr()).sum();
    if method != "finite" {
        if let Some(inside) = w.family().ball_membership(x) {
            verdict = if inside {
                Membership::Member
            } else {
                Membership::NonMember
            };
            evidence = Evidence::Certified;
            method = "closed_form";
        }
    }
    Ok(PointEvalResult {
        lambda: lambda.iter().map(|l| [l.re, l.im]).collect(),
        verdict,
        evidence,
        method,
        partial_sums: partial_sums(&level_terms),
        level_terms,
        ratio_test: test,
        ratio_verdict: ratio_ev,
    })
}

#[derive(Debug, Clone)]
pub struct KernelVector {
    pub max_len: usize,
    /// `λ̄_α / μ(α,g₀)` by graded index.
    pub coords: Vec<C64>,
}

impl KernelVector {
    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Truncated `z_λ`. With `require_member`, a point not certified or evidenced
/// as a member is rejected.
pub fn kernel_vector(
    w: &WeightSequence,
    lambda: &[C64],
    max_len: usize,
    require_member: bool,
) -> Result<KernelVector> {
    check_lambda(w, lambda)?;
    if require_member {
        let r = point_membership(w, lambda, max_len.max(24))?;
        if r.verdict != Membership::Member {
            return Err(Error::Precondition(format!(
                "lambda is not a bounded point evaluation ({:?}); request an explicit truncation",
                r.verdict
            )));
        }
    }
    let space = TruncatedFock::new(w.n(), max_len)?;
    let norms = w.norm_table(max_len)?;
    let mut coords = Vec::with_capacity(space.dim());
    for (idx, a) in space.words().iter().enumerate() {
        let m = word_monomial(a, lambda).conj();
        if m == C64::new(0.0, 0.0) {
            coords.push(m);
        } else if norms[idx] == 0.0 {
            return Err(Error::Precondition(format!(
                "lambda_alpha != 0 on the zero-norm word {a}"
            )));
        } else {
            coords.push(m / norms[idx]);
        }
    }
    Ok(KernelVector { max_len, coords })
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenResidual {
    /// `max_i ‖(W_i* − λ̄_i) z_λ‖` on levels below the top.
    pub interior: f64,
    /// Same on the top level, where the truncation cuts the chain.
    pub top: f64,
}

pub fn eigen_residual(
    w: &WeightSequence,
    lambda: &[C64],
    z: &KernelVector,
) -> Result<EigenResidual> {
    let shifts = shift_tuple(w, Side::Left, z.max_len)?;
    let space = TruncatedFock::new(w.n(), z.max_len)?;
    let top = space.level_range(z.max_len).start;
    let mut interior = 0.0_f64;
    let mut top_res = 0.0_f64;
    for (i, s) in shifts.iter().enumerate() {
        let wz = s.apply_adjoint(&z.coords)?;
        let (mut a, mut b) = (0.0, 0.0);
        for idx in 0..space.dim() {
            let r = (wz[idx] - lambda[i].conj() * z.coords[idx]).norm_sqr();
            if idx < top {
                a += r;
            } else {
                b += r;
            }
        }
        interior = interior.max(a.sqrt());
        top_res = top_res.max(b.sqrt());
    }
    Ok(EigenResidual {
        interior,
        top: top_res,
    })
}

/// Fock coordinates `c_α μ(α,g₀)` of a symbol on levels `≤ max_len`.
pub fn fock_vector(f: &Symbol, w: &WeightSequence, max_len: usize) -> Result<Vec<C64>> {
    f.check(w.n())?;
    if f.degree() > max_len {
        return Err(Error::InvalidParameter(format!(
            "symbol degree {} exceeds truncation {max_len}",
            f.degree()
        )));
    }
    let space = TruncatedFock::new(w.n(), max_len)?;
    let norms = w.norm_table(max_len)?;
    let mut v = vec![C64::new(0.0, 0.0); space.dim()];
    for (a, c) in f.terms() {
        let idx = space.index(a).unwrap();
        if norms[idx] == 0.0 {
            return Err(Error::Precondition(format!(
                "symbol has a coefficient on the zero-norm word {a}"
            )));
        }
        v[idx] = c * norms[idx];
    }
    Ok(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    /// `Σ c_α λ_α`.
    pub value: [f64; 2],
    /// `⟨f, z_λ⟩` in Fock coordinates.
    pub inner_product: [f64; 2],
    pub agreement: f64,
    /// `‖f‖` in `F²(μ)`.
    pub f_norm: f64,
    /// `‖z_λ‖` restricted to the levels carrying `f`.
    pub kernel_norm: f64,
    /// `|f(λ)| ≤ ‖f‖·‖P_D z_λ‖`.
    pub bound_holds: bool,
}

/// `f(λ)` two ways, with the Cauchy–Schwarz check. Symbols are polynomials, so
/// the kernel norm truncated at `deg f` is the sharp right-hand side.
pub fn evaluate_at_point(f: &Symbol, w: &WeightSequence, lambda: &[C64]) -> Result<EvalReport> {
    check_lambda(w, lambda)?;
    let deg = f.degree();
    let fv = fock_vector(f, w, deg)?;
    let z = kernel_vector(w, lambda, deg, false)?;
    let value = f.eval_point(lambda);
    let inner: C64 = fv.iter().zip(&z.coords).map(|(a, b)| a * b.conj()).sum();
    let f_norm = fv.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let kernel_norm = z.norm_sqr().sqrt();
    let agreement = (value - inner).norm();
    let bound_holds = value.norm() <= f_norm * kernel_norm * (1.0 + 1e-12) + 1e-300;
    Ok(EvalReport {
        value: [value.re, value.im],
        inner_product: [inner.re, inner.im],
        agreement,
        f_norm,
        kernel_norm,
        bound_holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainReport {
    pub verdict: Membership,
    pub evidence: Evidence,
    /// "length_only" or "word_wise".
    pub method: &'static str,
    /// `‖Σ_{|α|=k} T_αT_α*/μ(α,g₀)²‖`.
    pub level_terms: Vec<f64>,
    /// Largest eigenvalue of the partial sums.
    pub lambda_max: Vec<f64>,
}

/// Whether `Σ_α T_αT_α*/μ(α,g₀)²` converges.
pub fn tuple_domain_membership(
    w: &WeightSequence,
    t: &OperatorTuple,
    max_level: usize,
) -> Result<DomainReport> {
    if w.n() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: t.n(),
        });
    }
    let max_level = match w.family().level_cap() {
        Some(cap) => max_level.min(cap),
        None => max_level,
    };
    let d = t.d();
    let mut blocks: Vec<CMat> = Vec::with_capacity(max_level + 1);
    let method;
    if w.is_length_only() {
        method = "length_only";
        let mut x = identity(d);
        let mut log_scale = 0.0_f64;
        for k in 0..=max_level {
            if k > 0 {
                let y = t.phi(&x);
                let s = crate::linalg::psd_norm(&y);
                if s == 0.0 {
                    x = y;
                } else {
                    log_scale += s.ln();
                    x = y / C64::new(s, 0.0);
                }
            }
            let a = w.family().length_norm(k).unwrap();
            if crate::linalg::is_exact_zero(&x) {
                blocks.push(CMat::zeros(d, d));
            } else if a == 0.0 {
                blocks.push(CMat::from_element(d, d, C64::new(f64::INFINITY, 0.0)));
            } else {
                blocks.push(&x * C64::new((log_scale - 2.0 * a.ln()).exp(), 0.0));
            }
        }
    } else {
        method = "word_wise";
        let space = TruncatedFock::new(t.n(), max_level)?;
        let norms = w.norm_table(max_level)?;
        // R_α = T_α / μ(α,g₀), built from the tail
        let mut r: Vec<Option<CMat>> = Vec::with_capacity(space.dim());
        let mut infinite = vec![false; max_level + 1];
        r.push(Some(identity(d)));
        for idx in 1..space.dim() {
            let a = space.word(idx);
            let tail = space.index(&a.tail()).unwrap();
            let prod = r[tail].as_ref().map(|m| t.get(a.first().unwrap()) * m);
            let entry = match prod {
                Some(p) if crate::linalg::is_exact_zero(&p) => None,
                Some(_) if norms[idx] == 0.0 => {
                    infinite[a.len()] = true;
                    None
                }
                Some(p) => Some(p / C64::new(w.mu(a), 0.0)),
                None => None,
            };
            r.push(entry);
        }
        for k in 0..=max_level {
            let mut s = CMat::zeros(d, d);
            for idx in space.level_range(k) {
                if let Some(m) = &r[idx] {
                    s += m * m.adjoint();
                }
            }
            if infinite[k] {
                s = CMat::from_element(d, d, C64::new(f64::INFINITY, 0.0));
            }
            blocks.push(s);
        }
    }
    let level_terms: Vec<f64> = blocks
        .iter()
        .map(|b| {
            if b.iter().any(|v| v.re.is_infinite()) {
                f64::INFINITY
            } else {
                crate::linalg::psd_norm(b)
            }
        })
        .collect();
    let mut lambda_max = Vec::with_capacity(blocks.len());
    let mut partial = CMat::zeros(d, d);
    for (b, lt) in blocks.iter().zip(&level_terms) {
        if lt.is_infinite() || lambda_max.last().is_some_and(|v: &f64| v.is_infinite()) {
            lambda_max.push(f64::INFINITY);
            continue;
        }
        partial += b;
        lambda_max.push(crate::linalg::psd_norm(&partial));
    }
    let (verdict, evidence, _) = scan_verdict(&level_terms, &RatioTest::default());
    Ok(DomainReport {
        verdict,
        evidence,
        method,
        level_terms,
        lambda_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalculusMode {
    /// `Σ_{|α|≤N} (1 − |α|/(N+1)) c_α T_α`.
    Fejer,
    /// `Σ c_α T_α`.
    ExactPoly,
    /// Level blocks of a nilpotent tuple, summed until they vanish.
    Hol0,
}

impl std::str::FromStr for CalculusMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fejer" => Ok(CalculusMode::Fejer),
            "exact-poly" | "exact_poly" => Ok(CalculusMode::ExactPoly),
            "hol0" | "hol0-series" | "hol0_series" => Ok(CalculusMode::Hol0),
            other => Err(Error::Parse(format!("unknown calculus mode {other:?}"))),
        }
    }
}

/// `T_α` for every supported word, sharing prefixes.
fn word_products(f: &Symbol, t: &OperatorTuple) -> BTreeMap<Word, CMat> {
    let mut out: BTreeMap<Word, CMat> = BTreeMap::new();
    for (a, _) in f.terms() {
        if out.contains_key(a) {
            continue;
        }
        let mut p = identity(t.d());
        for j in 0..a.len() {
            let pre = a.prefix(j + 1);
            if let Some(m) = out.get(&pre) {
                p = m.clone();
            } else {
                p = &p * t.get(a.letters().nth(j).unwrap());
                out.insert(pre, p.clone());
            }
        }
        out.insert(a.clone(), p);
    }
    out
}

/// `Ψ_T(φ)` in the requested mode.
pub fn cesaro_evaluate(
    f: &Symbol,
    t: &OperatorTuple,
    big_n: usize,
    mode: CalculusMode,
) -> Result<CMat> {
    f.check(t.n())?;
    let d = t.d();
    let limit = match mode {
        CalculusMode::Fejer => big_n,
        CalculusMode::ExactPoly => usize::MAX,
        CalculusMode::Hol0 => {
            let m = nilpotent_index(t).ok_or_else(|| {
                Error::Divergent(
                    "hol0 calculus needs a nilpotent tuple; level blocks do not vanish".into(),
                )
            })?;
            m - 1
        }
    };
    let prods = word_products(f, t);
    let mut out = CMat::zeros(d, d);
    for (a, c) in f.terms() {
        if a.len() > limit {
            continue;
        }
        let weight = match mode {
            CalculusMode::Fejer => 1.0 - a.len() as f64 / (big_n as f64 + 1.0),
            _ => 1.0,
        };
        out += &prods[a] * (c * weight);
    }
    Ok(out)
}

/// `Σ c_α W_α` on the truncation `|α| ≤ N`, as a dense matrix.
pub fn symbol_of_shift(f: &Symbol, w: &WeightSequence, max_len: usize) -> Result<CMat> {
    f.check(w.n())?;
    let shifts: Vec<CMat> = shift_tuple(w, Side::Left, max_len)?
        .iter()
        .map(|s| s.to_dense())
        .collect();
    let tuple = OperatorTuple::new(shifts)?;
    cesaro_evaluate(f, &tuple, 0, CalculusMode::ExactPoly)
}

#[derive(Debug, Clone, Serialize)]
pub struct CalculusReport {
    pub homomorphism_residual: f64,
    pub linearity_residual: f64,
    /// Eigenvalue-based `r(φ(T))`.
    pub r_phi_t: f64,
    /// Eigenvalue-based `r` of the truncated `φ(W)`; a truncation value only.
    pub r_phi_w_truncation: f64,
    /// `‖Ψ_T^{Fejér,N}(φ) − Ψ_T(φ)‖`.
    pub fejer_error: f64,
    /// `(deg φ/(N+1)) Σ |c_α| ‖T_α‖`.
    pub fejer_envelope: f64,
    /// `‖φ(T)‖ / ‖φ(W)‖_N` when weights are supplied.
    pub model_ratio: Option<f64>,
}

pub fn calculus_certificates(
    phi: &Symbol,
    psi: &Symbol,
    t: &OperatorTuple,
    w: &WeightSequence,
    big_n: usize,
) -> Result<CalculusReport> {
    let exact = |s: &Symbol| cesaro_evaluate(s, t, big_n, CalculusMode::ExactPoly);
    let a = exact(phi)?;
    let b = exact(psi)?;
    let homomorphism_residual = op_norm(&(exact(&phi.mul(psi))? - &a * &b));
    let linearity_residual = op_norm(
        &(exact(&phi.add(&psi.scale(C64::new(0.0, 2.0))))? - (&a + &b * C64::new(0.0, 2.0))),
    );
    let r_phi_t = spectral_radius(&a);
    let max_len = big_n.max(phi.degree());
    let phi_w = symbol_of_shift(phi, w, max_len)?;
    let r_phi_w_truncation = spectral_radius(&phi_w);
    let fejer = cesaro_evaluate(phi, t, big_n, CalculusMode::Fejer)?;
    let fejer_error = op_norm(&(fejer - &a));
    let prods = word_products(phi, t);
    let mass: f64 = phi
        .terms()
        .map(|(al, c)| c.norm() * op_norm(&prods[al]))
        .sum();
    let fejer_envelope = if big_n >= phi.degree() {
        phi.degree() as f64 / (big_n as f64 + 1.0) * mass
    } else {
        f64::INFINITY
    };
    let wn = op_norm(&phi_w);
    let model_ratio = (wn > 0.0).then(|| op_norm(&a) / wn);
    Ok(CalculusReport {
        homomorphism_residual,
        linearity_residual,
        r_phi_t,
        r_phi_w_truncation,
        fejer_error,
        fejer_envelope,
        model_ratio,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SchwarzReport {
    pub max_len: usize,
    /// `‖φ(W)‖` on the truncation; `φ` is divided by it.
    pub scale: f64,
    pub r_phi_x: f64,
    /// Upper bound `min_k ‖φ_X^k(I)‖^{1/2k}` for the joint radius of `X`.
    pub r_x_upper: f64,
    pub r_x_estimate: f64,
    pub holds: bool,
    pub domain: Membership,
}

/// `r(φ(X)) ≤ r(X)` for `φ(0) = 0` scaled by the truncated `‖φ(W)‖`.
/// The truncated norm is a lower bound for the true one, so the scale is recorded.
pub fn schwarz_check(
    phi: &Symbol,
    w: &WeightSequence,
    x: &OperatorTuple,
    max_len: usize,
    kmax: usize,
) -> Result<SchwarzReport> {
    if phi.coeff(&Word::empty()) != C64::new(0.0, 0.0) {
        return Err(Error::Precondition("phi(0) must vanish".into()));
    }
    let phi_w = symbol_of_shift(phi, w, max_len.max(phi.degree()))?;
    let scale = op_norm(&phi_w);
    if scale == 0.0 {
        return Err(Error::Precondition(
            "phi(W) vanishes on the truncation".into(),
        ));
    }
    let scaled = phi.scale(C64::new(1.0 / scale, 0.0));
    let r_phi_x = spectral_radius(&cesaro_evaluate(&scaled, x, 0, CalculusMode::ExactPoly)?);
    let stats = tuple_stats(x, kmax);
    let domain = tuple_domain_membership(w, x, kmax)?.verdict;
    Ok(SchwarzReport {
        max_len,
        scale,
        r_phi_x,
        r_x_upper: stats.r_upper,
        r_x_estimate: stats.r_estimate,
        holds: r_phi_x <= stats.r_upper + 1e-8,
        domain,
    })
}

/// `Φ_i` with `(Φ_i)_γ = c_{g_iγ}`, so that `φ = Σ_i Z_i Φ_i`.
pub fn gleason_split(phi: &Symbol, n: usize) -> Result<Vec<Symbol>> {
    phi.check(n)?;
    if phi.coeff(&Word::empty()) != C64::new(0.0, 0.0) {
        return Err(Error::Precondition("phi(0) must vanish".into()));
    }
    let mut parts = vec![Symbol::zero(); n];
    for (a, c) in phi.terms() {
        parts[a.first().unwrap() - 1].add_term(a.tail(), *c);
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{make_family, WeightSpec};

    fn fam(n: usize, kind: &str, p: Option<f64>) -> WeightSequence {
        let mut s = WeightSpec::family(n, kind);
        s.p = p;
        make_family(&s).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn three_domains() {
        let unit = fam(2, "unit", None);
        let r = point_membership(&unit, &[c(0.6), c(0.0)], 30).unwrap();
        assert_eq!(r.verdict, Membership::Member);
        assert_eq!(r.ratio_verdict, Evidence::Convergent);
        let r = point_membership(&unit, &[c(1.0), c(0.0)], 30).unwrap();
        assert_eq!(r.verdict, Membership::NonMember);

        let closed = fam(2, "ratio_power", Some(2.0));
        let r = point_membership(&closed, &[c(1.0), c(0.0)], 30).unwrap();
        assert_eq!(r.verdict, Membership::Member);
        for (k, t) in r.level_terms.iter().enumerate() {
            assert!((t * ((k + 1) as f64).powi(4) - 1.0).abs() < 1e-12);
        }

        let point = fam(2, "inverse_power", Some(2.0));
        let r = point_membership(&point, &[c(0.1), c(0.0)], 20).unwrap();
        assert_eq!(r.verdict, Membership::NonMember);
        assert_eq!(r.ratio_verdict, Evidence::Divergent);
        assert_eq!(
            point_membership(&point, &[c(0.0), c(0.0)], 20)
                .unwrap()
                .verdict,
            Membership::Member
        );
    }

    #[test]
    fn level_identity_wordwise() {
        let besov = {
            let mut s = WeightSpec::family(2, "besov");
            s.s = Some(2.0);
            make_family(&s).unwrap()
        };
        let l = [C64::new(0.3, 0.1), C64::new(-0.2, 0.25)];
        let a = kernel_level_terms(&besov, &l, 6).unwrap();
        let b = kernel_level_terms_wordwise(&besov, &l, 6).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-14 * y.max(1.0));
        }
    }

    #[test]
    fn kernel_vector_examples() {
        let unit = fam(2, "unit", None);
        let z = kernel_vector(&unit, &[c(0.0), c(0.0)], 3, true).unwrap();
        assert_eq!(z.coords[0], c(1.0));
        assert!(z.coords[1..].iter().all(|v| *v == c(0.0)));
        let l = [C64::new(0.5, 0.0), C64::new(0.2, 0.0)];
        let z = kernel_vector(&unit, &l, 3, true).unwrap();
        let idx = crate::freeword::graded_index(&w("1.2"), 2).unwrap();
        assert!((z.coords[idx] - c(0.1)).norm() < 1e-16);
        let res = eigen_residual(&unit, &l, &z).unwrap();
        assert!(res.interior < 1e-12);
        assert!(res.top > 0.0);
        assert!(kernel_vector(&unit, &[c(1.0), c(0.0)], 3, true).is_err());
        assert!(kernel_vector(&unit, &[c(1.0), c(0.0)], 3, false).is_ok());
    }

    #[test]
    fn evaluation_examples() {
        let unit = fam(2, "unit", None);
        let l = [C64::new(0.3, 0.2), C64::new(-0.1, 0.4)];
        let r = evaluate_at_point(&Symbol::one(), &unit, &l).unwrap();
        assert_eq!(r.value, [1.0, 0.0]);
        let r = evaluate_at_point(&Symbol::var(1), &unit, &l).unwrap();
        assert_eq!(r.value, [0.3, 0.2]);
        assert!(r.agreement < 1e-15 && r.bound_holds);
        let p = Symbol::var(1).add(&Symbol::monomial(w("2.1"), C64::new(0.5, -1.0)));
        let q = Symbol::one().add(&Symbol::var(2).scale(c(3.0)));
        let pq = p.mul(&q).eval_point(&l);
        assert!((pq - p.eval_point(&l) * q.eval_point(&l)).norm() < 1e-15);
    }

    #[test]
    fn symbol_algebra() {
        let p = Symbol::var(1).mul(&Symbol::var(2));
        assert_eq!(p.coeff(&w("1.2")), c(1.0));
        assert_eq!(p.coeff(&w("2.1")), c(0.0));
        let z = p.add(&p.scale(c(-1.0)));
        assert!(z.is_zero());
        let j = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(j, r#"{"coeffs":{"1.2":[1.0,0.0]}}"#);
        let back = Symbol::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, p);
        let f = Symbol::from_terms([(w("1"), c(2.0)), (w("1.2.2"), c(0.5))]);
        assert!((f.dilate(0.5).hol0_estimate(3) - 0.5 * f.hol0_estimate(3)).abs() < 1e-15);
    }

    #[test]
    fn gleason_examples() {
        let parts = gleason_split(&Symbol::var(1).mul(&Symbol::var(2)), 2).unwrap();
        assert_eq!(parts[0], Symbol::var(2));
        assert!(parts[1].is_zero());
        let parts = gleason_split(&Symbol::var(1).add(&Symbol::var(2)), 2).unwrap();
        assert_eq!(parts, vec![Symbol::one(), Symbol::one()]);
        assert!(gleason_split(&Symbol::one(), 2).is_err());
    }

    #[test]
    fn calculus_examples() {
        let t = OperatorTuple::new(vec![
            CMat::from_fn(2, 2, |r, c2| C64::new((r + 2 * c2) as f64 * 0.1, 0.05)),
            CMat::from_fn(2, 2, |r, c2| C64::new(0.2 - (r * c2) as f64 * 0.1, 0.0)),
        ])
        .unwrap();
        for mode in [CalculusMode::Fejer, CalculusMode::ExactPoly] {
            assert_eq!(
                cesaro_evaluate(&Symbol::one(), &t, 4, mode).unwrap(),
                identity(2)
            );
        }
        let f = cesaro_evaluate(&Symbol::var(1), &t, 4, CalculusMode::Fejer).unwrap();
        assert!(op_norm(&(f - t.get(1) * c(0.8))) < 1e-15);
        assert!(cesaro_evaluate(&Symbol::var(1), &t, 4, CalculusMode::Hol0).is_err());
        let unit = fam(2, "unit", None);
        let rep = calculus_certificates(&Symbol::var(1), &Symbol::var(2), &t, &unit, 4).unwrap();
        assert!(rep.homomorphism_residual < 1e-15);
        assert!(rep.fejer_error <= rep.fejer_envelope + 1e-15);
    }

    #[test]
    fn hol0_on_nilpotent_pair() {
        let mut e12 = CMat::zeros(2, 2);
        e12[(0, 1)] = c(1.0);
        let t = OperatorTuple::new(vec![e12.clone(), CMat::zeros(2, 2)]).unwrap();
        let f = Symbol::from_terms([(w("e"), c(2.0)), (w("1"), c(3.0)), (w("1.1"), c(7.0))]);
        let v = cesaro_evaluate(&f, &t, 0, CalculusMode::Hol0).unwrap();
        assert_eq!(v, identity(2) * c(2.0) + e12 * c(3.0));
    }

    #[test]
    fn tuple_domain_examples() {
        let unit = fam(2, "unit", None);
        let r = tuple_domain_membership(&unit, &OperatorTuple::zeros(2, 2), 10).unwrap();
        assert_eq!(r.verdict, Membership::Member);
        assert_eq!(r.lambda_max[10], 1.0);
        let big = OperatorTuple::new(vec![identity(2), CMat::zeros(2, 2)]).unwrap();
        let r = tuple_domain_membership(&unit, &big, 10).unwrap();
        assert_eq!(r.verdict, Membership::NonMember);
        let diag = OperatorTuple::new(vec![
            CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.3), c(0.5)])),
            CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.4), c(0.1)])),
        ])
        .unwrap();
        let r = tuple_domain_membership(&unit, &diag, 30).unwrap();
        assert_eq!(r.verdict, Membership::Member);
    }
}
