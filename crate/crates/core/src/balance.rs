//! Diagonal similarity scaling by powers of two.
//!
//! Each index `i` is rescaled until the off-diagonal 1-norms of row `i` and
//! column `i` sit within a factor of two of each other. Scaling by a power of
//! two only touches exponents, so the balanced matrix carries no rounding
//! error relative to `D⁻¹ A D` and its diagonal is copied verbatim.

use crate::error::Result;
use crate::matrix::ComplexMatrix;

const RADIX: f64 = 2.0;
const RADIX_SQ: f64 = RADIX * RADIX;
/// A rescale is only kept when it shrinks `r + c` below this fraction.
const IMPROVEMENT: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceRecord {
    /// Diagonal of `D`; every entry is an exact power of two.
    pub scale_factors: Vec<f64>,
    /// `D⁻¹ · A · D`.
    pub matrix: ComplexMatrix,
}

impl BalanceRecord {
    pub fn is_identity(&self) -> bool {
        self.scale_factors.iter().all(|&s| s == 1.0)
    }
}

pub fn balance(a: &ComplexMatrix) -> Result<BalanceRecord> {
    let n = a.require_square()?;
    let mut m = a.clone();
    let mut scale = vec![1.0; n];

    loop {
        let mut changed = false;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                col += m[(j, i)].norm();
                row += m[(i, j)].norm();
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }

            let total = col + row;
            let mut f = 1.0;
            let mut c = col;
            let lower = row / RADIX;
            while c < lower {
                f *= RADIX;
                c *= RADIX_SQ;
            }
            let upper = row * RADIX;
            while c > upper {
                f /= RADIX;
                c /= RADIX_SQ;
            }

            if (c + row) / f < IMPROVEMENT * total {
                changed = true;
                scale[i] *= f;
                let g = 1.0 / f;
                for j in (0..n).filter(|&j| j != i) {
                    m[(i, j)] *= g;
                    m[(j, i)] *= f;
                }
            }
        }
        if !changed {
            break;
        }
    }

    Ok(BalanceRecord {
        scale_factors: scale,
        matrix: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn diagonal_is_untouched() {
        let d = ComplexMatrix::from_diagonal(&[
            Complex64::new(3.0, 1.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.5, 0.0),
        ])
        .unwrap();
        let rec = balance(&d).unwrap();
        assert!(rec.is_identity());
        assert_eq!(rec.matrix, d);
    }

    #[test]
    fn zero_matrix_balances_to_itself() {
        let z = ComplexMatrix::zeros(4, 4).unwrap();
        let rec = balance(&z).unwrap();
        assert!(rec.is_identity());
        assert_eq!(rec.matrix, z);
    }

    #[test]
    fn graded_two_by_two() {
        let p = 2f64.powi(10);
        let a = ComplexMatrix::from_real_rows(&[[1.0, p], [1.0 / p, 1.0]]).unwrap();
        let rec = balance(&a).unwrap();
        let ones = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(rec.matrix, ones);
        // D is only defined up to a common factor: the relative scale is what matters.
        assert_eq!(rec.scale_factors[1] / rec.scale_factors[0], 2f64.powi(-10));
        for s in &rec.scale_factors {
            assert_eq!(s.log2().fract(), 0.0);
        }
    }

    #[test]
    fn rejects_rectangular() {
        assert!(balance(&ComplexMatrix::zeros(2, 3).unwrap()).is_err());
    }

    #[test]
    fn balanced_equals_scaled_similarity() {
        let a = ComplexMatrix::from_real_rows(&[
            [1.0, 300.0, 0.001],
            [0.02, 4.0, 5000.0],
            [7.0, 1e-4, 9.0],
        ])
        .unwrap();
        let rec = balance(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected =
                    a[(i, j)] * (rec.scale_factors[j] / rec.scale_factors[i]);
                assert_eq!(rec.matrix[(i, j)], expected);
            }
        }
        assert_eq!(rec.matrix.trace().unwrap(), a.trace().unwrap());
        assert!(balance(&rec.matrix).unwrap().is_identity());
    }
}
