//! Shift selection for shifted QR iteration.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ShiftStrategy {
    NoShift,
    Rayleigh,
    #[default]
    Wilkinson,
}

impl ShiftStrategy {
    pub fn name(self) -> &'static str {
        match self {
            ShiftStrategy::NoShift => "none",
            ShiftStrategy::Rayleigh => "rayleigh",
            ShiftStrategy::Wilkinson => "wilkinson",
        }
    }

    /// Shift for the active block `a` (square, n >= 1).
    pub fn compute(self, a: &ComplexMatrix) -> Result<Complex64> {
        match self {
            ShiftStrategy::NoShift => Ok(ZERO),
            ShiftStrategy::Rayleigh => rayleigh_shift(a),
            ShiftStrategy::Wilkinson => {
                if a.require_square()? < 2 {
                    rayleigh_shift(a)
                } else {
                    wilkinson_shift(&a.trailing_2x2()?)
                }
            }
        }
    }
}

impl fmt::Display for ShiftStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShiftStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "noshift" | "plain" => Ok(ShiftStrategy::NoShift),
            "rayleigh" => Ok(ShiftStrategy::Rayleigh),
            "wilkinson" => Ok(ShiftStrategy::Wilkinson),
            other => Err(Error::Usage(format!("unknown shift strategy '{other}'"))),
        }
    }
}

/// The four entries of a trailing 2x2 block, named by position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilkinsonInputs {
    pub a_prev: Complex64,
    pub b_super: Complex64,
    pub b_sub: Complex64,
    pub a_last: Complex64,
}

impl WilkinsonInputs {
    pub fn from_block(b: &ComplexMatrix) -> Result<Self> {
        if b.rows() != 2 || b.cols() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "Wilkinson shift needs a 2x2 block, got {}x{}",
                b.rows(),
                b.cols()
            )));
        }
        Ok(Self {
            a_prev: b[(0, 0)],
            b_super: b[(0, 1)],
            b_sub: b[(1, 0)],
            a_last: b[(1, 1)],
        })
    }

    /// Both eigenvalues, larger modulus first.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        let tr = self.a_prev + self.a_last;
        let det = self.a_prev * self.a_last - self.b_super * self.b_sub;
        // tr² − 4·det rewritten to avoid cancellation when the diagonal entries are close.
        let gap = self.a_prev - self.a_last;
        let disc = (gap * gap + 4.0 * self.b_super * self.b_sub).sqrt();
        let plus = tr + disc;
        let minus = tr - disc;
        let big = if plus.norm() >= minus.norm() { plus } else { minus } * 0.5;
        if big == ZERO {
            return (ZERO, ZERO);
        }
        (big, det / big)
    }
}

/// Eigenvalue of the 2x2 block `b` closest to its bottom-right entry.
///
/// Ties (equal distance) go to the root with the smaller real part, then the
/// smaller imaginary part. For a real symmetric block with equal diagonal
/// entries this coincides with the closed-form `a − sign(δ)·b²/(|δ| + √(δ²+b²))`
/// evaluated with `sign(0) = +1`.
pub fn wilkinson_shift(b: &ComplexMatrix) -> Result<Complex64> {
    let w = WilkinsonInputs::from_block(b)?;
    if w.b_super * w.b_sub == ZERO {
        // Triangular block: a_last is itself an eigenvalue at distance zero.
        return Ok(w.a_last);
    }
    let (l1, l2) = w.eigenvalues();
    let d1 = (l1 - w.a_last).norm();
    let d2 = (l2 - w.a_last).norm();
    let tie = (d1 - d2).abs() <= 4.0 * f64::EPSILON * d1.max(d2);
    Ok(if tie {
        let key = |z: Complex64| (z.re, z.im);
        if key(l1) <= key(l2) {
            l1
        } else {
            l2
        }
    } else if d1 < d2 {
        l1
    } else {
        l2
    })
}

/// The bottom-right entry of `a`.
pub fn rayleigh_shift(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.require_square()?;
    Ok(a[(n - 1, n - 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn wilkinson_examples() {
        assert_eq!(wilkinson_shift(&real(&[&[2.0, 0.0], &[0.0, 5.0]])).unwrap(), c(5.0, 0.0));
        assert_eq!(wilkinson_shift(&real(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap(), c(1.0, 0.0));

        let mu = wilkinson_shift(&real(&[&[3.0, 1.0], &[2.0, 0.0]])).unwrap();
        let expected = (3.0 - 17f64.sqrt()) / 2.0;
        assert!((mu - c(expected, 0.0)).norm() < 1e-15, "{mu}");

        let mu = wilkinson_shift(&real(&[&[0.0, -1.0], &[1.0, 0.0]])).unwrap();
        assert!((mu - c(0.0, -1.0)).norm() < 1e-15, "{mu}");
    }

    #[test]
    fn symmetric_tie_matches_closed_form() {
        // a = 4, b = 3, δ = 0: closed form gives 4 − 9/(0 + 3) = 1.
        let mu = wilkinson_shift(&real(&[&[4.0, 3.0], &[3.0, 4.0]])).unwrap();
        assert!((mu - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_wrong_shape() {
        assert!(wilkinson_shift(&ComplexMatrix::identity(3).unwrap()).is_err());
    }

    #[test]
    fn rayleigh_examples() {
        assert_eq!(rayleigh_shift(&ComplexMatrix::identity(3).unwrap()).unwrap(), c(1.0, 0.0));
        assert_eq!(rayleigh_shift(&real(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap(), c(4.0, 0.0));
        let d = ComplexMatrix::from_diagonal(&[c(7.0, 0.0), c(0.0, -2.0)]).unwrap();
        assert_eq!(rayleigh_shift(&d).unwrap(), c(0.0, -2.0));
    }

    #[test]
    fn strategy_dispatch() {
        let a = real(&[&[1.0, 2.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 1.0, 2.0]]);
        assert_eq!(ShiftStrategy::NoShift.compute(&a).unwrap(), ZERO);
        assert_eq!(ShiftStrategy::Rayleigh.compute(&a).unwrap(), c(2.0, 0.0));
        assert_eq!(ShiftStrategy::Wilkinson.compute(&a).unwrap(), c(1.0, 0.0));
        let one = real(&[&[3.0]]);
        assert_eq!(ShiftStrategy::Wilkinson.compute(&one).unwrap(), c(3.0, 0.0));
        assert_eq!("wilkinson".parse::<ShiftStrategy>().unwrap(), ShiftStrategy::Wilkinson);
    }
}
