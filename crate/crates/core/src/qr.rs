//! QR factorization kernels: Householder, Givens and Gram-Schmidt.
//!
//! All kernels return factors under the same normalization: the diagonal of
//! `R` is real and nonnegative, and entries below it are exact zeros. For a
//! nonsingular input this makes the factorization unique, so the kernels can
//! be compared entry by entry.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE, ZERO};

/// Relative column-norm threshold below which Gram-Schmidt gives up.
pub const GRAM_SCHMIDT_RANK_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct QRFactors {
    pub q: ComplexMatrix,
    pub r: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum QRMethod {
    #[default]
    Householder,
    Givens,
    GramSchmidtClassical,
    GramSchmidtModified,
}

impl QRMethod {
    pub const ALL: [QRMethod; 4] = [
        QRMethod::Householder,
        QRMethod::Givens,
        QRMethod::GramSchmidtClassical,
        QRMethod::GramSchmidtModified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QRMethod::Householder => "householder",
            QRMethod::Givens => "givens",
            QRMethod::GramSchmidtClassical => "cgs",
            QRMethod::GramSchmidtModified => "mgs",
        }
    }

    pub fn factor(self, a: &ComplexMatrix) -> Result<QRFactors> {
        match self {
            QRMethod::Householder => householder_qr(a),
            QRMethod::Givens => givens_qr(a),
            QRMethod::GramSchmidtClassical => gram_schmidt_qr(a, GramSchmidt::Classical),
            QRMethod::GramSchmidtModified => gram_schmidt_qr(a, GramSchmidt::Modified),
        }
    }
}

impl fmt::Display for QRMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QRMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "householder" => Ok(QRMethod::Householder),
            "givens" => Ok(QRMethod::Givens),
            "cgs" | "classical" => Ok(QRMethod::GramSchmidtClassical),
            "mgs" | "modified" => Ok(QRMethod::GramSchmidtModified),
            other => Err(Error::Usage(format!("unknown QR method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSchmidt {
    /// Projects against the original columns.
    Classical,
    /// Projects against the progressively updated column.
    Modified,
}

fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        ONE
    } else {
        z / r
    }
}

/// Rotates each row `k` of `R` (and column `k` of `Q`) by the phase of
/// `R[k][k]`, leaving a real nonnegative diagonal. Also writes exact zeros
/// below the diagonal.
fn normalize(mut q: ComplexMatrix, mut r: ComplexMatrix) -> QRFactors {
    let n = r.rows();
    for k in 0..n {
        let d = r[(k, k)];
        let modulus = d.norm();
        if d.im != 0.0 || d.re < 0.0 {
            let phase = unit_phase(d);
            let conj = phase.conj();
            for z in &mut r.row_mut(k)[k + 1..] {
                *z *= conj;
            }
            for i in 0..q.rows() {
                q[(i, k)] *= phase;
            }
        }
        r[(k, k)] = Complex64::new(modulus, 0.0);
        for z in &mut r.row_mut(k)[..k] {
            *z = ZERO;
        }
    }
    QRFactors { q, r }
}

pub fn householder_qr(a: &ComplexMatrix) -> Result<QRFactors> {
    let n = a.require_square()?;
    a.check_finite()?;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n)?;
    let mut v = vec![ZERO; n];

    for k in 0..n.saturating_sub(1) {
        let below: f64 = (k + 1..n).map(|i| r[(i, k)].norm_sqr()).sum();
        if below == 0.0 {
            // Already reduced (includes the all-zero column): identity reflector.
            continue;
        }
        let x0 = r[(k, k)];
        let norm_x = (x0.norm_sqr() + below).sqrt();
        // alpha = -phase(x0)·‖x‖ keeps v0 = x0 - alpha free of cancellation.
        let alpha = -unit_phase(x0) * norm_x;
        v[k] = x0 - alpha;
        for i in k + 1..n {
            v[i] = r[(i, k)];
        }
        let vnorm_sq = v[k].norm_sqr() + below;
        let tau = 2.0 / vnorm_sq;

        // R <- (I - tau v vᴴ) R on rows k.., columns k..
        for j in k..n {
            let dot: Complex64 = (k..n).map(|i| v[i].conj() * r[(i, j)]).sum();
            let s = dot * tau;
            for i in k..n {
                let vi = v[i];
                r[(i, j)] -= vi * s;
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..n {
            r[(i, k)] = ZERO;
        }

        // Q <- Q (I - tau v vᴴ) on columns k..
        for i in 0..n {
            let row = q.row_mut(i);
            let dot: Complex64 = (k..n).map(|l| row[l] * v[l]).sum();
            let s = dot * tau;
            for l in k..n {
                row[l] -= s * v[l].conj();
            }
        }
    }

    Ok(normalize(q, r))
}

pub fn givens_qr(a: &ComplexMatrix) -> Result<QRFactors> {
    let n = a.require_square()?;
    a.check_finite()?;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n)?;

    for j in 0..n.saturating_sub(1) {
        for i in j + 1..n {
            let b = r[(i, j)];
            if b == ZERO {
                continue;
            }
            let a_jj = r[(j, j)];
            let rho = a_jj.norm().hypot(b.norm());
            // G = [[c, s], [-conj(s), c]] with real c sends (a, b) to (phase(a)·rho, 0).
            let (c, s) = if a_jj == ZERO {
                (0.0, b.conj() / b.norm())
            } else {
                (a_jj.norm() / rho, unit_phase(a_jj) * b.conj() / rho)
            };
            for col in j..n {
                let x = r[(j, col)];
                let y = r[(i, col)];
                r[(j, col)] = x * c + s * y;
                r[(i, col)] = -s.conj() * x + y * c;
            }
            r[(i, j)] = ZERO;
            // Q <- Q Gᴴ
            for row in 0..n {
                let x = q[(row, j)];
                let y = q[(row, i)];
                q[(row, j)] = x * c + y * s.conj();
                q[(row, i)] = -x * s + y * c;
            }
        }
    }

    Ok(normalize(q, r))
}

pub fn gram_schmidt_qr(a: &ComplexMatrix, variant: GramSchmidt) -> Result<QRFactors> {
    let n = a.require_square()?;
    a.check_finite()?;
    let threshold = GRAM_SCHMIDT_RANK_TOL * a.frobenius_norm();
    let column = |k: usize| -> Vec<Complex64> { (0..n).map(|i| a[(i, k)]).collect() };
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
    };

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut r = ComplexMatrix::zeros(n, n)?;

    for k in 0..n {
        let original = column(k);
        let mut v = original.clone();
        for (j, qj) in basis.iter().enumerate() {
            let coeff = match variant {
                GramSchmidt::Classical => dot(qj, &original),
                GramSchmidt::Modified => dot(qj, &v),
            };
            r[(j, k)] = coeff;
            for (vi, qi) in v.iter_mut().zip(qj) {
                *vi -= coeff * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm < threshold || norm == 0.0 {
            return Err(Error::RankDeficient {
                column: k,
                norm,
                threshold,
            });
        }
        r[(k, k)] = Complex64::new(norm, 0.0);
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }

    let mut q = ComplexMatrix::zeros(n, n)?;
    for (k, qk) in basis.iter().enumerate() {
        for (i, &z) in qk.iter().enumerate() {
            q[(i, k)] = z;
        }
    }
    Ok(normalize(q, r))
}

/// `‖QR − A‖_F`.
pub fn reconstruction_residual(f: &QRFactors, a: &ComplexMatrix) -> Result<f64> {
    Ok(f.q.matmul(&f.r)?.sub(a)?.frobenius_norm())
}

/// `‖QᴴQ − I‖_F`.
pub fn orthogonality_residual(q: &ComplexMatrix) -> Result<f64> {
    let n = q.cols();
    Ok(q.conj_transpose()
        .matmul(q)?
        .sub(&ComplexMatrix::identity(n)?)?
        .frobenius_norm())
}
