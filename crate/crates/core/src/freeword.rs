//! Words in the unital free semigroup on `n` generators.
//!
//! Letters are `1..=n`; the empty word is the identity `g₀`. Words are ordered
//! graded-lexicographically (shorter first, then letter by letter), and
//! [`graded_index`] is the matching bijection onto `0, 1, 2, …`, so the words
//! of length at most `N` occupy exactly the first [`fock_dim`] indices.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u8])
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| l as u8).collect())
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().map(|&l| l as usize)
    }

    /// The word with its first letter removed (`g_iγ ↦ γ`).
    pub fn tail(&self) -> Word {
        self.suffix(self.len().saturating_sub(1))
    }

    /// The suffix of the given length.
    pub fn suffix(&self, len: usize) -> Word {
        let len = len.min(self.len());
        Word(self.0[self.len() - len..].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.len())].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `g_i α`.
    pub fn prepend(&self, i: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(i as u8);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `α g_i`.
    pub fn append(&self, i: usize) -> Word {
        let mut v = self.0.clone();
        v.push(i as u8);
        Word(v)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        for l in self.letters() {
            if l == 0 || l > n {
                return Err(Error::LetterOutOfRange { letter: l, n });
            }
        }
        Ok(())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.letters().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut v = Vec::new();
        for part in s.split('.') {
            let l: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad word {s:?}")))?;
            if l == 0 || l > u8::MAX as usize {
                return Err(Error::Parse(format!("bad letter {l} in {s:?}")));
            }
            v.push(l as u8);
        }
        Ok(Word(v))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Σ_{k ≤ max_len} n^k`, checked against the process dimension cap.
pub fn fock_dim(n: usize, max_len: usize) -> Result<usize> {
    limits::check_dim(n, max_len)
}

/// Index of the first word of length `len`.
pub fn level_offset(n: usize, len: usize) -> usize {
    let mut total = 0usize;
    let mut p = 1usize;
    for _ in 0..len {
        total += p;
        p *= n;
    }
    total
}

pub fn enumerate_words(n: usize, max_len: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > u8::MAX as usize {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds 255")));
    }
    let dim = fock_dim(n, max_len)?;
    let mut out = Vec::with_capacity(dim);
    out.push(Word::empty());
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for idx in start..end {
            for i in 1..=n {
                let w = out[idx].append(i);
                out.push(w);
            }
        }
        start = end;
    }
    Ok(out)
}

pub fn graded_index(alpha: &Word, n: usize) -> Result<usize> {
    alpha.check(n)?;
    let mut v = 0usize;
    for l in alpha.letters() {
        v = v * n + (l - 1);
    }
    Ok(level_offset(n, alpha.len()) + v)
}

pub fn index_word(mut idx: usize, n: usize) -> Word {
    let mut len = 0;
    let mut p = 1usize;
    while idx >= p {
        idx -= p;
        p *= n;
        len += 1;
    }
    let mut letters = vec![0u8; len];
    for slot in letters.iter_mut().rev() {
        *slot = (idx % n + 1) as u8;
        idx /= n;
    }
    Word(letters)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `k + e_i` for a 1-based generator `i`.
    pub fn bump(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i - 1] += 1;
        MultiIndex(v)
    }

    /// `λ^k = Π λ_i^{k_i}`.
    pub fn monomial(&self, lambda: &[crate::C64]) -> crate::C64 {
        let mut p = crate::C64::new(1.0, 0.0);
        for (z, &k) in lambda.iter().zip(&self.0) {
            p *= z.powu(k);
        }
        p
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, k) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad multi-index {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn abelianization(alpha: &Word, n: usize) -> MultiIndex {
    let mut k = vec![0u32; n];
    for l in alpha.letters() {
        k[l - 1] += 1;
    }
    MultiIndex(k)
}

/// All words with abelianization `k`, in lexicographic order.
pub fn words_in_class(k: &MultiIndex) -> Vec<Word> {
    fn rec(counts: &mut [u32], cur: &mut Vec<u8>, left: usize, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(Word(cur.clone()));
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                cur.push(i as u8 + 1);
                rec(counts, cur, left - 1, out);
                cur.pop();
                counts[i] += 1;
            }
        }
    }
    let mut counts = k.0.clone();
    let mut out = Vec::new();
    rec(&mut counts, &mut Vec::new(), k.total(), &mut out);
    out
}

/// `|k|! / Π k_i!`, exact. Panics on `u128` overflow; see [`checked_multinomial`].
pub fn multinomial(k: &MultiIndex) -> u128 {
    checked_multinomial(k).expect("multinomial overflows u128")
}

pub fn checked_multinomial(k: &MultiIndex) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut seen: u128 = 0;
    for &ki in &k.0 {
        for j in 1..=ki as u128 {
            seen += 1;
            // integral at every step: the running value is a product of binomials
            acc = acc.checked_mul(seen)? / j;
        }
    }
    Some(acc)
}

/// `ln(|k|! / Π k_i!)`.
pub fn log_multinomial(k: &MultiIndex) -> f64 {
    let lf = |m: usize| (2..=m).map(|j| (j as f64).ln()).sum::<f64>();
    lf(k.total()) - k.0.iter().map(|&ki| lf(ki as usize)).sum::<f64>()
}

/// All multi-indices in `ℕ₀ⁿ` of total degree exactly `total`, lexicographically descending
/// in the first coordinate.
pub fn multi_indices_of_degree(n: usize, total: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(MultiIndex(cur.clone()));
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All multi-indices of total degree at most `max_total`, grouped by degree.
pub fn multi_indices_up_to(n: usize, max_total: usize) -> Vec<MultiIndex> {
    (0..=max_total)
        .flat_map(|t| multi_indices_of_degree(n, t))
        .collect()
}
