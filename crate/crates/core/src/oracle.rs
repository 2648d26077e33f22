//! Reference eigenvalues from the characteristic polynomial.
//!
//! Coefficients come from the Faddeev-LeVerrier recurrence and roots from
//! Durand-Kerner iteration. Nothing here calls into the QR kernels or the
//! matrix arithmetic used by the solvers; only the input entries are read.
//! Both steps are badly conditioned as the degree grows, so inputs are
//! capped at [`MAX_ORACLE_DIM`].

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub const MAX_ORACLE_DIM: usize = 12;
/// Up to this size `match_eigenvalues` is exact.
pub const EXACT_MATCH_MAX: usize = 8;

const DK_TOL: f64 = 1e-13;
const DK_MAX_SWEEPS: usize = 1000;

/// Monic polynomial `λⁿ + c_{n−1}λⁿ⁻¹ + … + c_0`; `coefficients[k]` is `c_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    pub coefficients: Vec<Complex64>,
}

impl PolySpec {
    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// Builds the monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        // coeffs[k] multiplies λ^k, leading 1 kept at the end.
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        coeffs.pop();
        Self { coefficients: coeffs }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `det A = (−1)ⁿ c_0` when this is the characteristic polynomial of `A`.
    pub fn determinant(&self) -> Complex64 {
        let c0 = self.coefficients.first().copied().unwrap_or(Complex64::new(1.0, 0.0));
        if self.degree().is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }
}

type Dense = Vec<Vec<Complex64>>;

fn dense(a: &ComplexMatrix) -> Dense {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

fn product(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Characteristic polynomial via Faddeev-LeVerrier:
/// `M_1 = A`, `c_{n−k} = −tr(M_k)/k`, `M_{k+1} = A (M_k + c_{n−k} I)`.
pub fn char_poly(a: &ComplexMatrix) -> Result<PolySpec> {
    let n = a.require_square()?;
    if n > MAX_ORACLE_DIM {
        return Err(Error::TooLarge {
            dim: n,
            max: MAX_ORACLE_DIM,
        });
    }
    let base = dense(a);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    let mut m = base.clone();
    for k in 1..=n {
        let tr: Complex64 = (0..n).map(|i| m[i][i]).sum();
        let c = -tr / k as f64;
        coeffs[n - k] = c;
        if k < n {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += c;
            }
            m = product(&base, &m);
        }
    }
    Ok(PolySpec { coefficients: coeffs })
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
///
/// Starts from `(0.4 + 0.9i)^k` and stops when no root moves by more than
/// `1e-13` relative to `max(1, |z|)`.
pub fn poly_roots(p: &PolySpec) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::DimensionMismatch("polynomial has degree 0".into()));
    }
    if n == 1 {
        return Ok(vec![-p.coefficients[0]]);
    }
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n as i32).map(|k| seed.powi(k)).collect();
    let mut last = f64::INFINITY;

    for _ in 0..DK_MAX_SWEEPS {
        last = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                denom *= z[i] - z[j];
            }
            if denom.norm() == 0.0 {
                // Coincident iterates: nudge apart and keep going.
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                last = f64::INFINITY;
                continue;
            }
            let delta = p.eval(z[i]) / denom;
            z[i] -= delta;
            last = last.max(delta.norm() / z[i].norm().max(1.0));
        }
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            break;
        }
        if last < DK_TOL {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        sweeps: DK_MAX_SWEEPS,
        last_update: last,
    })
}

/// Oracle eigenvalues of `a`.
pub fn oracle_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    poly_roots(&char_poly(a)?)
}

/// Largest pairwise distance under a matching of `computed` to `reference`.
///
/// Up to [`EXACT_MATCH_MAX`] values every assignment is tried and the
/// smallest maximum distance returned. Beyond that a greedy nearest-neighbour
/// matching is used, which gives an upper bound on the optimum.
pub fn match_eigenvalues(computed: &[Complex64], reference: &[Complex64]) -> Result<f64> {
    let n = computed.len();
    if n != reference.len() {
        return Err(Error::DimensionMismatch(format!(
            "cannot match {} values against {}",
            n,
            reference.len()
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    if n <= EXACT_MATCH_MAX {
        let mut best = f64::INFINITY;
        for perm in (0..n).permutations(n) {
            let mut worst = 0.0f64;
            for (i, &j) in perm.iter().enumerate() {
                worst = worst.max((computed[i] - reference[j]).norm());
                if worst >= best {
                    break;
                }
            }
            best = best.min(worst);
        }
        return Ok(best);
    }

    let mut remaining: Vec<Complex64> = reference.to_vec();
    let mut worst = 0.0f64;
    for &c in computed {
        let (idx, d) = remaining
            .iter()
            .enumerate()
            .map(|(k, &r)| (k, (c - r).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("remaining is non-empty while computed has items");
        worst = worst.max(d);
        remaining.swap_remove(idx);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_poly(coeffs: &[f64]) -> PolySpec {
        PolySpec {
            coefficients: coeffs.iter().map(|&x| c(x, 0.0)).collect(),
        }
    }

    #[test]
    fn char_poly_examples() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(char_poly(&i2).unwrap(), real_poly(&[1.0, -2.0]));

        let swap = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(char_poly(&swap).unwrap(), real_poly(&[-1.0, 0.0]));

        // Companion matrix of λ³ − 6λ² + 11λ − 6.
        let comp = ComplexMatrix::from_real_rows(&[
            [0.0, 0.0, 6.0],
            [1.0, 0.0, -11.0],
            [0.0, 1.0, 6.0],
        ])
        .unwrap();
        assert_eq!(char_poly(&comp).unwrap(), real_poly(&[-6.0, 11.0, -6.0]));
    }

    #[test]
    fn char_poly_rejects_large_input() {
        let big = ComplexMatrix::identity(13).unwrap();
        assert!(matches!(char_poly(&big), Err(Error::TooLarge { dim: 13, max: 12 })));
    }

    #[test]
    fn roots_examples() {
        let mut r = poly_roots(&real_poly(&[-1.0, 0.0])).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);

        let r = poly_roots(&real_poly(&[1.0, 0.0])).unwrap();
        assert!(match_eigenvalues(&r, &[c(0.0, 1.0), c(0.0, -1.0)]).unwrap() < 1e-12);

        let r = poly_roots(&real_poly(&[-6.0, 11.0, -6.0])).unwrap();
        let want = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        assert!(match_eigenvalues(&r, &want).unwrap() < 1e-10);
    }

    #[test]
    fn from_roots_round_trip() {
        let roots = [c(1.0, 2.0), c(-0.5, 0.0), c(3.0, -1.0)];
        let p = PolySpec::from_roots(&roots);
        for &r in &roots {
            assert!(p.eval(r).norm() < 1e-12);
        }
        let found = poly_roots(&p).unwrap();
        assert!(match_eigenvalues(&found, &roots).unwrap() < 1e-10);
    }

    #[test]
    fn determinant_from_constant_term() {
        let a = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [4.0, 5.0]]).unwrap();
        assert!((char_poly(&a).unwrap().determinant() - c(6.0, 0.0)).norm() < 1e-12);
        let b = ComplexMatrix::from_real_rows(&[[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 4.0]])
            .unwrap();
        assert!((char_poly(&b).unwrap().determinant() - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn match_examples() {
        let a = [c(1.0, 0.0), c(2.0, 0.0)];
        assert_eq!(match_eigenvalues(&a, &a).unwrap(), 0.0);
        let d = match_eigenvalues(&a, &[c(2.0000001, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((d - 1e-7).abs() < 1e-15);
        let x = [c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        let y = [c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0)];
        assert_eq!(match_eigenvalues(&x, &y).unwrap(), 0.0);
        assert!(match_eigenvalues(&x, &a).is_err());
    }

    #[test]
    fn greedy_match_for_large_sets() {
        let a: Vec<Complex64> = (0..10).map(|k| c(k as f64, 0.0)).collect();
        let mut b = a.clone();
        b.reverse();
        assert_eq!(match_eigenvalues(&a, &b).unwrap(), 0.0);
    }
}
