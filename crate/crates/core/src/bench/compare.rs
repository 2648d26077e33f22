//! Side-by-side solver runs over a seeded ensemble.

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bench::ensemble::{generate_ensemble, EnsembleSpec};
use crate::engine::{EigenReport, IterationTrace, SolverConfig, SolverKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub matrix_index: usize,
    pub solver: SolverKind,
    /// `Err` holds the solver's error message; the rest of the run continues.
    pub outcome: std::result::Result<EigenReport, String>,
    pub wall_time: Duration,
}

impl ComparisonRow {
    pub fn report(&self) -> Option<&EigenReport> {
        self.outcome.as_ref().ok()
    }

    pub fn iterations(&self) -> Option<usize> {
        self.report().map(|r| r.iterations)
    }

    pub fn converged(&self) -> bool {
        self.report().is_some_and(|r| r.converged)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverSummary {
    pub solver: String,
    pub runs: usize,
    pub median_iterations: f64,
    pub min_iterations: usize,
    pub max_iterations: usize,
    pub convergence_rate: f64,
    pub errors: usize,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub spec: EnsembleSpec,
    pub config: SolverConfig,
    /// Sorted by (matrix index, solver name).
    pub rows: Vec<ComparisonRow>,
    pub summaries: Vec<SolverSummary>,
}

pub fn median(values: &mut [usize]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid] as f64
    } else {
        (values[mid - 1] + values[mid]) as f64 / 2.0
    }
}

/// Parses a comma separated solver list such as `enhanced,plain`.
pub fn parse_solver_list(list: &str) -> Result<Vec<SolverKind>> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind: SolverKind = name.parse()?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        return Err(Error::Usage("solver list is empty".into()));
    }
    Ok(out)
}

pub fn run_comparison(
    spec: &EnsembleSpec,
    solvers: &[SolverKind],
    cfg: &SolverConfig,
) -> Result<ComparisonReport> {
    if solvers.is_empty() {
        return Err(Error::Usage("at least one solver is required".into()));
    }
    cfg.validate()?;
    let matrices = generate_ensemble(spec)?;

    let cells: Vec<(usize, SolverKind)> = (0..matrices.len())
        .flat_map(|i| solvers.iter().map(move |&s| (i, s)))
        .collect();
    let mut rows: Vec<ComparisonRow> = cells
        .into_par_iter()
        .map(|(matrix_index, solver)| {
            let start = Instant::now();
            let outcome = solver.run(&matrices[matrix_index], cfg).map_err(|e| e.to_string());
            ComparisonRow {
                matrix_index,
                solver,
                outcome,
                wall_time: start.elapsed(),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.matrix_index, a.solver.name()).cmp(&(b.matrix_index, b.solver.name()))
    });

    let summaries = solvers.iter().map(|&s| summarize(s, &rows)).collect();
    Ok(ComparisonReport {
        spec: *spec,
        config: *cfg,
        rows,
        summaries,
    })
}

fn summarize(solver: SolverKind, rows: &[ComparisonRow]) -> SolverSummary {
    let mine: Vec<&ComparisonRow> = rows.iter().filter(|r| r.solver == solver).collect();
    let mut iters: Vec<usize> = mine.iter().filter_map(|r| r.iterations()).collect();
    let converged = mine.iter().filter(|r| r.converged()).count();
    SolverSummary {
        solver: solver.name().to_string(),
        runs: mine.len(),
        min_iterations: iters.iter().copied().min().unwrap_or(0),
        max_iterations: iters.iter().copied().max().unwrap_or(0),
        median_iterations: median(&mut iters),
        convergence_rate: converged as f64 / mine.len().max(1) as f64,
        errors: mine.len() - mine.iter().filter(|r| r.report().is_some()).count(),
    }
}

impl ComparisonReport {
    pub fn summary(&self, solver: SolverKind) -> Option<&SolverSummary> {
        self.summaries.iter().find(|s| s.solver == solver.name())
    }

    /// Traces in row order, labelled for [`crate::bench::write_trace_csv`].
    pub fn traces(&self) -> Vec<TraceRun<'_>> {
        self.rows
            .iter()
            .filter_map(|r| {
                r.report().map(|rep| TraceRun {
                    matrix_index: r.matrix_index,
                    solver: r.solver.name(),
                    trace: &rep.trace,
                })
            })
            .collect()
    }

    pub fn total_wall_time(&self) -> Duration {
        self.rows.iter().map(|r| r.wall_time).sum()
    }

    /// Per-run rows without timing, so the file is reproducible.
    pub fn write_summary_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            matrix_index: usize,
            solver: &'a str,
            iterations: Option<usize>,
            converged: bool,
            deflations: Option<usize>,
            final_subdiag_norm: Option<f64>,
            error: Option<&'a str>,
        }
        let mut w = csv::Writer::from_path(path)?;
        for r in &self.rows {
            let rep = r.report();
            w.serialize(Row {
                matrix_index: r.matrix_index,
                solver: r.solver.name(),
                iterations: rep.map(|x| x.iterations),
                converged: r.converged(),
                deflations: rep.map(|x| x.deflations),
                final_subdiag_norm: rep.map(|x| x.final_subdiag_norm),
                error: r.outcome.as_ref().err().map(String::as_str),
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceRun<'a> {
    pub matrix_index: usize,
    pub solver: &'a str,
    pub trace: &'a IterationTrace,
}
