//! Experiment harness: ensembles, matrix files, comparison runs and output.

pub mod compare;
pub mod ensemble;
pub mod io;
pub mod output;

pub use compare::{parse_solver_list, run_comparison, ComparisonReport, ComparisonRow, SolverSummary, TraceRun};
pub use ensemble::{generate_ensemble, Distribution, EnsembleSpec};
pub use io::{read_matrix, write_matrix, MatrixFormat};
pub use output::{
    emit_convergence_svg, emit_trace_csv, render_convergence_svg, write_trace_csv, PlotSeries,
    LOG_FLOOR, TRACE_CSV_HEADER,
};

use std::path::Path;

use crate::error::Result;

/// Environment variable consulted by `bench` when no seed is given.
pub const SEED_ENV: &str = "EIGQR_SEED";

/// Writes the trace CSV and, if requested, the SVG figure for a comparison.
///
/// The figure's bars show each solver's median iteration count; the curves
/// are the traces of matrix 0.
pub fn emit_comparison(report: &ComparisonReport, csv_path: &Path, svg_path: Option<&Path>) -> Result<()> {
    emit_trace_csv(&report.traces(), csv_path)?;
    if let Some(svg_path) = svg_path {
        let series: Vec<PlotSeries> = report
            .summaries
            .iter()
            .map(|s| {
                let first = report
                    .rows
                    .iter()
                    .find(|r| r.matrix_index == 0 && r.solver.name() == s.solver)
                    .and_then(|r| r.report());
                match first {
                    Some(rep) => PlotSeries::from_trace(&s.solver, s.median_iterations, &rep.trace),
                    None => PlotSeries {
                        label: s.solver.clone(),
                        iterations: s.median_iterations,
                        norms: Vec::new(),
                    },
                }
            })
            .collect();
        let title = format!(
            "{n}x{n} {dist}, {count} matrices, seed {seed}",
            n = report.spec.dimension,
            dist = report.spec.distribution,
            count = report.spec.count,
            seed = report.spec.seed
        );
        emit_convergence_svg(&series, &title, svg_path)?;
    }
    Ok(())
}
