//! Seeded random matrix ensembles.
//!
//! Matrix `k` of an ensemble is drawn from a ChaCha8 stream seeded with the
//! ensemble seed and positioned on stream `k`, so any single matrix can be
//! regenerated without producing the ones before it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Distribution {
    /// Real entries drawn from N(0, 1).
    #[default]
    StandardNormalReal,
    /// Real and imaginary parts each uniform on [-1, 1].
    UniformComplex,
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::StandardNormalReal => "normal",
            Distribution::UniformComplex => "uniform-complex",
        })
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "standard-normal" | "gaussian" => Ok(Distribution::StandardNormalReal),
            "uniform" | "uniform-complex" => Ok(Distribution::UniformComplex),
            other => Err(Error::Usage(format!("unknown distribution '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dimension: usize,
    pub count: usize,
    pub seed: u64,
    pub distribution: Distribution,
}

impl EnsembleSpec {
    pub fn new(dimension: usize, count: usize, seed: u64) -> Self {
        Self {
            dimension,
            count,
            seed,
            distribution: Distribution::default(),
        }
    }

    pub fn with_distribution(mut self, distribution: Distribution) -> Self {
        self.distribution = distribution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Usage("ensemble count must be at least 1".into()));
        }
        if self.dimension < 2 {
            return Err(Error::Usage(format!(
                "ensemble dimension must be at least 2, got {}",
                self.dimension
            )));
        }
        Ok(())
    }

    /// The `index`-th matrix of the ensemble.
    pub fn matrix(&self, index: usize) -> Result<ComplexMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let n = self.dimension;
        let data = (0..n * n)
            .map(|_| match self.distribution {
                Distribution::StandardNormalReal => {
                    Complex64::new(rng.sample(StandardNormal), 0.0)
                }
                Distribution::UniformComplex => Complex64::new(
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                ),
            })
            .collect();
        ComplexMatrix::from_vec(n, n, data)
    }
}

pub fn generate_ensemble(spec: &EnsembleSpec) -> Result<Vec<ComplexMatrix>> {
    spec.validate()?;
    (0..spec.count).map(|k| spec.matrix(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = EnsembleSpec::new(3, 2, 42);
        let a = generate_ensemble(&spec).unwrap();
        let b = generate_ensemble(&spec).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        assert_eq!(spec.matrix(1).unwrap(), a[1]);
    }

    #[test]
    fn normal_moments() {
        let spec = EnsembleSpec::new(50, 1, 7);
        let m = &generate_ensemble(&spec).unwrap()[0];
        let xs: Vec<f64> = m.as_slice().iter().map(|z| z.re).collect();
        assert!(m.as_slice().iter().all(|z| z.im == 0.0));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!(mean.abs() < 0.1, "mean {mean}");
        assert!((var - 1.0).abs() < 0.15, "variance {var}");
    }

    #[test]
    fn uniform_complex_range() {
        let spec = EnsembleSpec::new(10, 3, 1).with_distribution(Distribution::UniformComplex);
        for m in generate_ensemble(&spec).unwrap() {
            for z in m.as_slice() {
                assert!(z.re.abs() <= 1.0 && z.im.abs() <= 1.0);
            }
            assert!(m.as_slice().iter().any(|z| z.im != 0.0));
        }
    }

    #[test]
    fn never_hermitian() {
        for seed in 0..20 {
            for dist in [Distribution::StandardNormalReal, Distribution::UniformComplex] {
                let spec = EnsembleSpec::new(4, 2, seed).with_distribution(dist);
                for m in generate_ensemble(&spec).unwrap() {
                    assert!(m.sub(&m.conj_transpose()).unwrap().frobenius_norm() > 1e-6);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate_ensemble(&EnsembleSpec::new(1, 1, 0)).is_err());
        assert!(generate_ensemble(&EnsembleSpec::new(3, 0, 0)).is_err());
    }
}
