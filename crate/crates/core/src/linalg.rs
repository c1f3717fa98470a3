//! Small dense helpers over `nalgebra` complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = (m + m.adjoint()) * c(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0_f64, |a, &s| a.max(s))
}

/// Spectral radius. Triangular input is read off the diagonal; otherwise the
/// Schur form is used, with Gelfand's `‖M^{2^j}‖^{2^{-j}}` as a fallback when the
/// QR iteration stalls (defective, nearly nilpotent input).
pub fn spectral_radius(m: &CMat) -> f64 {
    let d = m.nrows();
    if d == 0 {
        return 0.0;
    }
    let zero = C64::new(0.0, 0.0);
    let lower = (0..d).all(|r| (r + 1..d).all(|c| m[(r, c)] == zero));
    let upper = (0..d).all(|r| (0..r).all(|c| m[(r, c)] == zero));
    if lower || upper {
        return (0..d).fold(0.0_f64, |a, i| a.max(m[(i, i)].norm()));
    }
    if let Some(schur) = m.clone().try_schur(f64::EPSILON, 100 * d.max(10)) {
        let (_, t) = schur.unpack();
        return (0..t.nrows()).fold(0.0_f64, |a, i| a.max(t[(i, i)].norm()));
    }
    gelfand_radius(m, 12)
}

/// `‖M^{2^j}‖^{2^{-j}}` after `steps` squarings, rescaled each step to stay finite.
fn gelfand_radius(m: &CMat, steps: u32) -> f64 {
    let mut p = m.clone();
    // r(M) = exp(log_scale) · ‖P‖^{2^{-j}} with P = M^{2^j} / exp(2^j log_scale)
    let mut log_scale = 0.0_f64;
    let mut power = 1.0_f64;
    for _ in 0..steps {
        let n = op_norm(&p);
        if n == 0.0 {
            return 0.0;
        }
        log_scale += n.ln() / power;
        p /= C64::new(n, 0.0);
        p = &p * &p;
        power *= 2.0;
    }
    let n = op_norm(&p);
    if n == 0.0 {
        0.0
    } else {
        (log_scale + n.ln() / power).exp()
    }
}

/// Square root of a positive definite matrix; rejects eigenvalues below `floor`.
pub fn sqrt_pd(q: &CMat, floor: f64) -> Result<CMat> {
    if q.nrows() != q.ncols() {
        return Err(Error::InvalidParameter("Q must be square".into()));
    }
    let herm_defect = op_norm(&(q - q.adjoint()));
    if herm_defect > 1e-12 * (1.0 + op_norm(q)) {
        return Err(Error::InvalidParameter("Q is not Hermitian".into()));
    }
    let h = (q + q.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if min < floor {
        return Err(Error::InvalidParameter(format!(
            "Q is not positive definite (smallest eigenvalue {min:e})"
        )));
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| c(v.sqrt())));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Operator norm of a Hermitian positive semidefinite matrix.
pub fn psd_norm(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
}

pub fn is_exact_zero(m: &CMat) -> bool {
    m.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
}

/// Parses "0.6", "-1e-3", "0.3+0.4i", "0.5-2i", "2i" into a complex number.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let err = || Error::Parse(format!("not a complex number: {s:?}"));
    if t.is_empty() {
        return Err(err());
    }
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let ch = bytes[idx];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re, im) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re: f64 = re.parse().map_err(|_| err())?;
        let im: f64 = im.parse().map_err(|_| err())?;
        Ok(C64::new(re, im))
    } else {
        Ok(c(t.parse().map_err(|_| err())?))
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    s.split(',').map(parse_complex).collect()
}
