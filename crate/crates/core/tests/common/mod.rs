#![allow(dead_code)]

use std::sync::Arc;

use fockshift::freeword::{enumerate_words, fock_dim};
use fockshift::hardy::Symbol;
use fockshift::linalg::CMat;
use fockshift::weights::{make_family, Tabulated, WeightSpec};
use fockshift::{OperatorTuple, WeightSequence, Word, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rand_c<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Word-dependent weights drawn uniformly from `[lo, hi]` up to level `cap`.
pub fn random_table<R: Rng>(rng: &mut R, n: usize, cap: usize, lo: f64, hi: f64) -> Vec<f64> {
    let dim = fock_dim(n, cap).unwrap();
    let mut t: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..=hi)).collect();
    t[0] = 1.0;
    t
}

pub fn tabulated(n: usize, cap: usize, table: Vec<f64>) -> WeightSequence {
    let fam = Tabulated::from_dense(n, cap, table, "tabulated").unwrap();
    WeightSequence::new(n, Arc::new(fam)).unwrap()
}

pub fn family(n: usize, kind: &str, s: Option<f64>, p: Option<f64>) -> WeightSequence {
    let mut spec = WeightSpec::family(n, kind);
    spec.s = s;
    spec.p = p;
    make_family(&spec).unwrap()
}

/// Power bounded weights `μ_σ = g(σ)/g(tail σ)` with `g ∈ [1, √M]`, so every
/// `μ(β, α) = g(βα)/g(α)` lies in `[1/√M, √M]`.
pub fn power_bounded_table<R: Rng>(rng: &mut R, n: usize, cap: usize, m: f64) -> Vec<f64> {
    let words = enumerate_words(n, cap).unwrap();
    let g: Vec<f64> = (0..words.len())
        .map(|i| {
            if i == 0 {
                1.0
            } else {
                rng.random_range(1.0..=m.sqrt())
            }
        })
        .collect();
    let mut table = vec![1.0; words.len()];
    for (idx, w) in words.iter().enumerate().skip(1) {
        let t = fockshift::freeword::graded_index(&w.tail(), n).unwrap();
        table[idx] = g[idx] / g[t];
    }
    table
}

pub fn random_matrix<R: Rng>(rng: &mut R, d: usize, scale: f64) -> CMat {
    CMat::from_fn(d, d, |_, _| rand_c(rng) * scale)
}

pub fn random_tuple<R: Rng>(rng: &mut R, n: usize, d: usize, scale: f64) -> OperatorTuple {
    OperatorTuple::new((0..n).map(|_| random_matrix(rng, d, scale)).collect()).unwrap()
}

pub fn strictly_upper<R: Rng>(rng: &mut R, d: usize) -> CMat {
    CMat::from_fn(d, d, |r, c| {
        if c > r {
            rand_c(rng)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Strictly upper triangular tuple: nilpotent of index at most `d`, usually not commuting.
pub fn nilpotent_tuple<R: Rng>(rng: &mut R, n: usize, d: usize) -> OperatorTuple {
    OperatorTuple::new((0..n).map(|_| strictly_upper(rng, d)).collect()).unwrap()
}

/// Polynomials without constant term in one strictly upper triangular matrix.
pub fn commuting_nilpotent_tuple<R: Rng>(rng: &mut R, n: usize, d: usize) -> OperatorTuple {
    let base = strictly_upper(rng, d);
    let mut powers = vec![base.clone()];
    for _ in 1..d {
        let next = powers.last().unwrap() * &base;
        powers.push(next);
    }
    let mats = (0..n)
        .map(|_| {
            let mut m = CMat::zeros(d, d);
            for p in &powers {
                m += p * rand_c(rng);
            }
            m
        })
        .collect();
    OperatorTuple::new(mats).unwrap()
}

/// Commuting diagonal tuple and its joint eigenvalues (one point per diagonal slot).
pub fn diagonal_tuple<R: Rng>(rng: &mut R, n: usize, d: usize) -> (OperatorTuple, Vec<Vec<C64>>) {
    let points: Vec<Vec<C64>> = (0..d)
        .map(|_| (0..n).map(|_| rand_c(rng) * 0.8).collect())
        .collect();
    let mats = (0..n)
        .map(|i| {
            CMat::from_fn(d, d, |r, c| {
                if r == c {
                    points[r][i]
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    (OperatorTuple::new(mats).unwrap(), points)
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> Word {
    let letters: Vec<usize> = (0..len).map(|_| rng.random_range(1..=n)).collect();
    Word::from_letters(&letters)
}

pub fn random_symbol<R: Rng>(
    rng: &mut R,
    n: usize,
    max_deg: usize,
    terms: usize,
    constant: bool,
) -> Symbol {
    let mut s = Symbol::zero();
    for _ in 0..terms {
        let len = rng.random_range(if constant { 0 } else { 1 }..=max_deg);
        s.add_term(random_word(rng, n, len), rand_c(rng));
    }
    if s.is_zero() {
        s = Symbol::var(1);
    }
    s
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<C64> {
    let p: Vec<C64> = (0..n).map(|_| rand_c(rng)).collect();
    let norm = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let r = radius * rng.random_range(0.0..1.0f64);
    p.into_iter().map(|z| z * (r / norm)).collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
