use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eigqr::bench::{self, io::format_complex, Distribution, EnsembleSpec, TraceRun};
use eigqr::qr::{orthogonality_residual, reconstruction_residual};
use eigqr::{
    baseline_qr, enhanced_shifted_qr, match_eigenvalues, oracle_eigenvalues, DeflationMode,
    EigenReport, Error, QRMethod, Result, ShiftStrategy, SolverConfig,
};

const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Parser)]
#[command(name = "eigqr", version, about = "Shifted QR eigenvalue solvers and convergence benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a matrix and print the QR residuals.
    Factor {
        file: PathBuf,
        #[arg(long, default_value = "householder")]
        method: QRMethod,
    },
    /// Compute eigenvalues of a matrix.
    Eig {
        file: PathBuf,
        #[arg(long, default_value = "wilkinson")]
        shift: ShiftStrategy,
        /// Run the plain shifted iteration without deflation.
        #[arg(long)]
        no_deflate: bool,
        #[arg(long)]
        no_balance: bool,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        dtol: Option<f64>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value = "paper")]
        mode: DeflationMode,
        #[arg(long, default_value = "householder")]
        method: QRMethod,
        /// Write the iteration trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Exit with status 4 if the iteration budget runs out.
        #[arg(long)]
        strict: bool,
    },
    /// Run several solvers over a seeded random ensemble.
    Bench {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, env = bench::SEED_ENV)]
        seed: Option<u64>,
        #[arg(long, default_value = "normal")]
        dist: Distribution,
        #[arg(long, default_value = "enhanced,wilkinson-nodeflate,rayleigh,plain")]
        solvers: String,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        kmax: Option<usize>,
        /// Per-iteration trace CSV for every (matrix, solver) run.
        #[arg(long)]
        out: PathBuf,
        /// Per-run summary CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Reference eigenvalues from the characteristic polynomial (n <= 12).
    Oracle { file: PathBuf },
}

fn config(eps: Option<f64>, dtol: Option<f64>, kmax: Option<usize>) -> SolverConfig {
    let mut cfg = SolverConfig::default();
    if let Some(eps) = eps {
        cfg.eps = eps;
        // Keep the default deflation tolerance legal when only eps is loosened or tightened.
        cfg.deflation_tol = cfg.deflation_tol.min(eps);
    }
    if let Some(d) = dtol {
        cfg.deflation_tol = d;
    }
    if let Some(k) = kmax {
        cfg.k_max = k;
    }
    cfg
}

fn print_report(report: &EigenReport) {
    for (k, z) in report.eigenvalues.iter().enumerate() {
        println!("lambda[{k}] = {}", format_complex(*z));
    }
    println!(
        "converged={} iterations={} qr_steps={} deflations={} final_subdiag_norm={:e}",
        report.converged,
        report.iterations,
        report.qr_steps,
        report.deflations,
        report.final_subdiag_norm
    );
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Factor { file, method } => {
            let a = bench::read_matrix(&file)?;
            let f = method.factor(&a)?;
            println!("method={method} n={}", a.rows());
            println!("reconstruction ||QR - A||_F = {:e}", reconstruction_residual(&f, &a)?);
            println!("orthogonality  ||Q^H Q - I||_F = {:e}", orthogonality_residual(&f.q)?);
            Ok(0)
        }
        Command::Eig {
            file,
            shift,
            no_deflate,
            no_balance,
            eps,
            dtol,
            kmax,
            mode,
            method,
            trace,
            strict,
        } => {
            let a = bench::read_matrix(&file)?;
            let mut cfg = config(eps, dtol, kmax);
            cfg.shift = shift;
            cfg.deflation_mode = mode;
            cfg.qr_method = method;
            cfg.do_balance = !no_balance && !no_deflate;
            let (name, report) = if no_deflate {
                ("baseline", baseline_qr(&a, &cfg)?)
            } else {
                ("enhanced", enhanced_shifted_qr(&a, &cfg)?)
            };
            print_report(&report);
            if let Some(path) = trace {
                bench::emit_trace_csv(
                    &[TraceRun {
                        matrix_index: 0,
                        solver: name,
                        trace: &report.trace,
                    }],
                    path,
                )?;
            }
            Ok(if strict && !report.converged { EXIT_NOT_CONVERGED } else { 0 })
        }
        Command::Bench {
            dim,
            count,
            seed,
            dist,
            solvers,
            eps,
            kmax,
            out,
            summary,
            svg,
        } => {
            let spec = EnsembleSpec::new(dim, count, seed.unwrap_or(0)).with_distribution(dist);
            let solvers = bench::parse_solver_list(&solvers)?;
            let cfg = config(eps, None, kmax);
            let report = bench::run_comparison(&spec, &solvers, &cfg)?;
            bench::emit_comparison(&report, &out, svg.as_deref())?;
            if let Some(path) = summary {
                report.write_summary_csv(path)?;
            }
            println!(
                "{:<22} {:>6} {:>8} {:>6} {:>6} {:>10}",
                "solver", "runs", "median", "min", "max", "converged"
            );
            for s in &report.summaries {
                println!(
                    "{:<22} {:>6} {:>8.1} {:>6} {:>6} {:>9.1}%",
                    s.solver,
                    s.runs,
                    s.median_iterations,
                    s.min_iterations,
                    s.max_iterations,
                    100.0 * s.convergence_rate
                );
            }
            for r in report.rows.iter().filter(|r| r.report().is_none()) {
                if let Err(e) = &r.outcome {
                    eprintln!("matrix {} / {}: {e}", r.matrix_index, r.solver);
                }
            }
            eprintln!("total solver time: {:.3?}", report.total_wall_time());
            Ok(0)
        }
        Command::Oracle { file } => {
            let a = bench::read_matrix(&file)?;
            let reference = oracle_eigenvalues(&a)?;
            for (k, z) in reference.iter().enumerate() {
                println!("oracle[{k}] = {}", format_complex(*z));
            }
            let report = enhanced_shifted_qr(&a, &SolverConfig::default())?;
            let distance = match_eigenvalues(&report.eigenvalues, &reference)?;
            println!("enhanced converged={} match_distance={distance:e}", report.converged);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
