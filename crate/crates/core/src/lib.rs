//! Eigenvalues of dense complex matrices by shifted QR iteration.
//!
//! The main entry point is [`enhanced_shifted_qr`]: Wilkinson-shifted QR
//! steps with a deflation sweep before every step and a powers-of-two
//! balancing pass up front. [`baseline_qr`] provides the non-deflating
//! iterations it is compared against, and [`oracle`] computes reference
//! eigenvalues through the characteristic polynomial for verification.
//!
//! ```
//! use eigqr::{enhanced_shifted_qr, ComplexMatrix, SolverConfig};
//!
//! let a = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
//! let report = enhanced_shifted_qr(&a, &SolverConfig::default()).unwrap();
//! assert!(report.converged);
//! assert_eq!(report.eigenvalues.len(), 2);
//! ```

pub mod balance;
pub mod bench;
pub mod engine;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod qr;
pub mod shift;

pub use balance::{balance, BalanceRecord};
pub use engine::{
    baseline_qr, deflation_sweep, enhanced_shifted_qr, qr_step, DeflationMode, EigenReport,
    IterationRecord, IterationTrace, SolverConfig, SolverKind,
};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use oracle::{char_poly, match_eigenvalues, oracle_eigenvalues, poly_roots, PolySpec};
pub use qr::{givens_qr, gram_schmidt_qr, householder_qr, GramSchmidt, QRFactors, QRMethod};
pub use shift::{rayleigh_shift, wilkinson_shift, ShiftStrategy, WilkinsonInputs};
