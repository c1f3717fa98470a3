//! Process-wide resource cap on truncation dimensions.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 50_000;

static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);

pub fn max_dim() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

pub fn set_max_dim(cap: usize) {
    MAX_DIM.store(cap, Ordering::Relaxed);
}

/// Number of words of length at most `max_len` over `n` letters, without overflow.
pub fn fock_dim_u128(n: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut p: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(p);
        p = p.saturating_mul(n as u128);
    }
    total
}

pub fn check_dim(n: usize, max_len: usize) -> Result<usize> {
    let dim = fock_dim_u128(n, max_len);
    let cap = max_dim();
    if dim > cap as u128 {
        return Err(Error::CapExceeded { dim, cap });
    }
    Ok(dim as usize)
}
