//! QR iteration drivers.
//!
//! [`enhanced_shifted_qr`] runs shifted QR with a deflation sweep at the top of
//! every outer iteration and an optional one-time balancing pass.
//! [`baseline_qr`] is the same iteration without deflation, used as the
//! comparison point. Both return an [`EigenReport`] with a per-iteration trace.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::balance::balance;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};
use crate::qr::QRMethod;
use crate::shift::ShiftStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum DeflationMode {
    /// Scan rows from the bottom up and deflate at the first small row.
    #[default]
    Paper,
    /// Only ever test the last row.
    TrailingOnly,
}

impl FromStr for DeflationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" | "full" => Ok(DeflationMode::Paper),
            "trailing" | "trailing-only" => Ok(DeflationMode::TrailingOnly),
            other => Err(Error::Usage(format!("unknown deflation mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub k_max: usize,
    /// Stop once the subdiagonal norm of the active block drops below this.
    pub eps: f64,
    /// A row whose left-of-diagonal norm is below this is deflated.
    pub deflation_tol: f64,
    pub shift: ShiftStrategy,
    pub qr_method: QRMethod,
    pub deflation_mode: DeflationMode,
    pub do_balance: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k_max: 1000,
            eps: 1e-10,
            deflation_tol: 1e-12,
            shift: ShiftStrategy::Wilkinson,
            qr_method: QRMethod::Householder,
            deflation_mode: DeflationMode::Paper,
            do_balance: true,
        }
    }
}

impl SolverConfig {
    /// Defaults for the non-deflating comparison runs: no balancing.
    pub fn baseline(shift: ShiftStrategy) -> Self {
        Self {
            shift,
            do_balance: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::InvalidConfig("k_max must be at least 1".into()));
        }
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(Error::InvalidConfig(format!("eps must be positive, got {}", self.eps)));
        }
        if !self.deflation_tol.is_finite() || self.deflation_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "deflation tolerance must be positive, got {}",
                self.deflation_tol
            )));
        }
        if self.deflation_tol > self.eps {
            return Err(Error::InvalidConfig(format!(
                "deflation tolerance {} exceeds eps {}",
                self.deflation_tol, self.eps
            )));
        }
        Ok(())
    }
}

/// One outer iteration of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Active dimension after this iteration.
    pub dimension: usize,
    /// Strictly-lower Frobenius norm of the active block after this iteration.
    pub subdiag_norm: f64,
    /// Strictly-upper Frobenius norm of the active block, kept for plotting
    /// the two-sided off-diagonal norm.
    pub superdiag_norm: f64,
    /// Shift applied by this iteration's QR step; `None` when no step ran.
    pub shift: Option<Complex64>,
    /// Eigenvalue split off by a deflation in this iteration.
    pub deflated: Option<Complex64>,
    /// Trace of the active block after this iteration.
    pub active_trace: Complex64,
}

impl IterationRecord {
    pub fn is_deflation(&self) -> bool {
        self.deflated.is_some()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Largest change, between consecutive records, of
    /// `trace(active block) + Σ deflated eigenvalues`, starting from `initial`.
    ///
    /// Every QR step is a similarity and every deflation moves a diagonal
    /// entry from the block into the extracted list, so this should only
    /// ever move by rounding.
    pub fn max_trace_drift(&self, initial: Complex64) -> f64 {
        let mut extracted = ZERO;
        let mut prev = initial;
        let mut worst = 0.0f64;
        for r in &self.records {
            if let Some(v) = r.deflated {
                extracted += v;
            }
            let total = extracted + r.active_trace;
            worst = worst.max((total - prev).norm());
            prev = total;
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    /// Extraction order: deflated values first, then the final diagonal.
    pub eigenvalues: Vec<Complex64>,
    /// Outer-loop passes (enhanced) or QR steps (baseline).
    pub iterations: usize,
    pub qr_steps: usize,
    pub deflations: usize,
    pub converged: bool,
    pub final_subdiag_norm: f64,
    pub trace: IterationTrace,
}

/// One shifted QR step: factor `A − μI = QR` and return `RQ + μI`.
pub fn qr_step(a: &ComplexMatrix, shift: Complex64, method: QRMethod) -> Result<ComplexMatrix> {
    let factors = method.factor(&a.add_identity(-shift)?)?;
    factors.r.matmul(&factors.q)?.add_identity(shift)
}

/// One deflation pass over `a`. Extracts at most one eigenvalue.
pub fn deflation_sweep(
    a: &ComplexMatrix,
    deflation_tol: f64,
    mode: DeflationMode,
) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    match find_deflation(a, deflation_tol, mode)? {
        Some(j) => Ok((a.remove_row_col(j)?, vec![a[(j, j)]])),
        None => Ok((a.clone(), Vec::new())),
    }
}

fn find_deflation(a: &ComplexMatrix, tol: f64, mode: DeflationMode) -> Result<Option<usize>> {
    let n = a.require_square()?;
    if n < 2 {
        return Ok(None);
    }
    let last = n - 1;
    let lowest = match mode {
        DeflationMode::Paper => 1,
        DeflationMode::TrailingOnly => last,
    };
    for j in (lowest..=last).rev() {
        if a.row_left_norm(j)? < tol {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

fn record(
    active: &ComplexMatrix,
    iteration: usize,
    shift: Option<Complex64>,
    deflated: Option<Complex64>,
) -> Result<IterationRecord> {
    Ok(IterationRecord {
        iteration,
        dimension: active.rows(),
        subdiag_norm: active.subdiagonal_norm()?,
        superdiag_norm: active.superdiagonal_norm()?,
        shift,
        deflated,
        active_trace: active.trace()?,
    })
}

fn step_checked(
    active: &ComplexMatrix,
    shift: Complex64,
    method: QRMethod,
    iteration: usize,
) -> Result<ComplexMatrix> {
    if !(shift.re.is_finite() && shift.im.is_finite()) {
        return Err(Error::Breakdown {
            iteration,
            reason: format!("non-finite shift {shift}"),
        });
    }
    let next = qr_step(active, shift, method).map_err(|e| match e {
        Error::NonFinite { row, col } => Error::Breakdown {
            iteration,
            reason: format!("non-finite entry at ({row}, {col})"),
        },
        other => other,
    })?;
    next.check_finite().map_err(|_| Error::Breakdown {
        iteration,
        reason: "iterate contains non-finite entries".into(),
    })?;
    Ok(next)
}

fn prepare(a: &ComplexMatrix, cfg: &SolverConfig) -> Result<ComplexMatrix> {
    cfg.validate()?;
    a.require_square()?;
    a.check_finite()?;
    if cfg.do_balance {
        Ok(balance(a)?.matrix)
    } else {
        Ok(a.clone())
    }
}

/// Shifted QR with per-iteration deflation and optional pre-balancing.
///
/// Each outer iteration first runs a deflation sweep. A successful deflation
/// ends the iteration (the next one restarts on the reduced block). When only
/// a 1x1 block remains its entry is taken as the last eigenvalue. Otherwise
/// one shifted QR step is applied, and if the whole active block is then
/// within `eps` of triangular its diagonal is accepted.
///
/// An exhausted iteration budget is not an error: the report is flagged
/// unconverged and carries the eigenvalues found so far plus the current
/// diagonal.
pub fn enhanced_shifted_qr(a: &ComplexMatrix, cfg: &SolverConfig) -> Result<EigenReport> {
    let mut active = prepare(a, cfg)?;
    let mut eigenvalues = Vec::with_capacity(a.rows());
    let mut trace = IterationTrace::default();
    let mut deflations = 0;
    let mut qr_steps = 0;
    let mut iterations = 0;
    let mut converged = false;

    for it in 1..=cfg.k_max {
        iterations = it;

        let (reduced, extracted) = deflation_sweep(&active, cfg.deflation_tol, cfg.deflation_mode)?;
        if let Some(&value) = extracted.first() {
            eigenvalues.push(value);
            deflations += 1;
            active = reduced;
            trace.records.push(record(&active, it, None, Some(value))?);
            continue;
        }

        if active.rows() == 1 {
            eigenvalues.push(active[(0, 0)]);
            trace.records.push(record(&active, it, None, None)?);
            converged = true;
            break;
        }

        let mu = cfg.shift.compute(&active)?;
        active = step_checked(&active, mu, cfg.qr_method, it)?;
        qr_steps += 1;
        let rec = record(&active, it, Some(mu), None)?;
        trace.records.push(rec);
        if rec.subdiag_norm < cfg.eps {
            eigenvalues.extend(active.diagonal());
            converged = true;
            break;
        }
    }

    if !converged {
        eigenvalues.extend(active.diagonal());
    }
    Ok(EigenReport {
        eigenvalues,
        iterations,
        qr_steps,
        deflations,
        converged,
        final_subdiag_norm: active.subdiagonal_norm()?,
        trace,
    })
}

/// Shifted (or unshifted) QR iteration on the full matrix, no deflation.
pub fn baseline_qr(a: &ComplexMatrix, cfg: &SolverConfig) -> Result<EigenReport> {
    let mut active = prepare(a, cfg)?;
    let mut trace = IterationTrace::default();
    let mut norm = active.subdiagonal_norm()?;
    let mut steps = 0;

    while norm >= cfg.eps && steps < cfg.k_max {
        steps += 1;
        let mu = cfg.shift.compute(&active)?;
        active = step_checked(&active, mu, cfg.qr_method, steps)?;
        let rec = record(&active, steps, Some(mu), None)?;
        norm = rec.subdiag_norm;
        trace.records.push(rec);
    }

    Ok(EigenReport {
        eigenvalues: active.diagonal(),
        iterations: steps,
        qr_steps: steps,
        deflations: 0,
        converged: norm < cfg.eps,
        final_subdiag_norm: norm,
        trace,
    })
}

/// The solver line-up used by comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SolverKind {
    Enhanced,
    WilkinsonNoDeflate,
    Rayleigh,
    Plain,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [
        SolverKind::Enhanced,
        SolverKind::WilkinsonNoDeflate,
        SolverKind::Rayleigh,
        SolverKind::Plain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Enhanced => "enhanced",
            SolverKind::WilkinsonNoDeflate => "wilkinson-nodeflate",
            SolverKind::Rayleigh => "rayleigh",
            SolverKind::Plain => "plain",
        }
    }

    /// Runs this solver with the tolerances and budget of `shared`; shift and
    /// balancing are fixed per solver.
    pub fn run(self, a: &ComplexMatrix, shared: &SolverConfig) -> Result<EigenReport> {
        let cfg = self.config(shared);
        match self {
            SolverKind::Enhanced => enhanced_shifted_qr(a, &cfg),
            _ => baseline_qr(a, &cfg),
        }
    }

    pub fn config(self, shared: &SolverConfig) -> SolverConfig {
        let (shift, do_balance) = match self {
            SolverKind::Enhanced => (ShiftStrategy::Wilkinson, shared.do_balance),
            SolverKind::WilkinsonNoDeflate => (ShiftStrategy::Wilkinson, false),
            SolverKind::Rayleigh => (ShiftStrategy::Rayleigh, false),
            SolverKind::Plain => (ShiftStrategy::NoShift, false),
        };
        SolverConfig {
            shift,
            do_balance,
            ..*shared
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Usage(format!("unknown solver '{s}'")))
    }
}
