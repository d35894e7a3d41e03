//! Command-line front end: `validate`, `figure` and `optimize`.
//!
//! Exit codes: 0 success, 1 validation tolerance exceeded, 2 usage or
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use cfisac::experiments::{
    cmd_optimize, cmd_validate, figure, write_csv, CsvRow, FigureOptions, Problem, FIGURES,
};
use cfisac::optimizer::{Status, DEFAULT_TOL};
use cfisac::scenario::SystemParams;

#[derive(Parser)]
#[command(name = "cfisac", version, about = "Cell-free ISAC anti-malicious sensing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare every closed-form SINR term with the Monte-Carlo oracle.
    Validate {
        /// JSON config (keys = SystemParams fields); defaults to the reduced validation network.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Fading draws.
        #[arg(long, default_value_t = 20_000)]
        draws: usize,
        /// Tolerance in percent for the exact terms (the monitor gets 1.5×).
        #[arg(long, default_value_t = 2.0)]
        tol: f64,
        /// Optional CSV of per-term relative errors.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a figure sweep and write its CSV.
    Figure {
        /// One of fig3 … fig9.
        name: String,
        /// JSON config; defaults to the full-size network.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Outer network realizations per sweep point.
        #[arg(long, default_value_t = 200)]
        realizations: usize,
        /// Master seed (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
        /// Jamming budgets in W for the sweeps over P_pm.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 3.0])]
        p_pm: Vec<f64>,
        /// Fading draws for Monte-Carlo markers in fig3 (0 = none).
        #[arg(long, default_value_t = 0)]
        mc_draws: usize,
    },
    /// Optimize the jamming allocation of realization 0.
    Optimize {
        /// Problem to solve.
        problem: ProblemArg,
        /// JSON config; defaults to the full-size network.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Sensing cap in dB (required for p2).
        #[arg(long, allow_hyphen_values = true)]
        kappa_db: Option<f64>,
        /// Output CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    P1,
    P2,
}

fn load(config: Option<&PathBuf>, fallback: SystemParams) -> anyhow::Result<SystemParams> {
    Ok(match config {
        Some(path) => SystemParams::from_json_file(path)?,
        None => fallback,
    })
}

fn maybe_write(out: Option<&PathBuf>, rows: &[CsvRow]) -> anyhow::Result<()> {
    if let Some(path) = out {
        write_csv(path, rows)?;
        info!("wrote {} rows to {}", rows.len(), path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Validate { config, draws, tol, out } => {
            let params = load(config.as_ref(), SystemParams::reduced())?;
            let report = cmd_validate(&params, draws, tol)?;
            println!("{:<20} {:<8} {:<6} {:>13} {:>13} {:>9} {:>9}  verdict", "receiver", "alloc", "term", "closed", "monte_carlo", "rel_err", "rel_se");
            for c in &report.checks {
                let verdict = match (c.counted, c.pass()) {
                    (false, _) => "info",
                    (true, true) => "ok",
                    (true, false) => "FAIL",
                };
                println!(
                    "{:<20} {:<8} {:<6} {:>13.6e} {:>13.6e} {:>8.3}% {:>8.3}%  {verdict}",
                    c.receiver,
                    c.allocation,
                    c.term,
                    c.closed,
                    c.empirical,
                    100.0 * c.rel_err,
                    100.0 * c.rel_stderr
                );
            }
            let rows: Vec<CsvRow> = report
                .checks
                .iter()
                .map(|c| CsvRow {
                    sweep_variable: "term".into(),
                    sweep_value: report.draws as f64,
                    scheme: format!("{}@{}", c.allocation, c.receiver),
                    statistic: format!("rel_err_{}", c.term),
                    value: c.rel_err,
                    stderr: c.rel_stderr,
                })
                .collect();
            maybe_write(out.as_ref(), &rows)?;
            let ok = report.passed();
            println!("validation {}", if ok { "passed" } else { "FAILED" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Figure { name, config, out, realizations, seed, p_pm, mc_draws } => {
            if !FIGURES.contains(&name.as_str()) {
                anyhow::bail!(cfisac::experiments::ExperimentError::UnknownFigure(name));
            }
            let mut params = load(config.as_ref(), SystemParams::default())?;
            if let Some(s) = seed {
                params.seed = s;
            }
            let opts = FigureOptions { realizations, p_pm_list: p_pm, mc_draws, tol: DEFAULT_TOL };
            let rows = figure(&name, &params, &opts)?;
            write_csv(&out, &rows)?;
            println!("{name}: {} rows written to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize { problem, config, kappa_db, out } => {
            let params = load(config.as_ref(), SystemParams::default())?;
            let problem = match problem {
                ProblemArg::P1 => Problem::P1,
                ProblemArg::P2 => Problem::P2,
            };
            let report = cmd_optimize(&params, problem, kappa_db, DEFAULT_TOL)?;
            let status = match report.result.status {
                Status::Optimal => "optimal",
                Status::Infeasible => "infeasible",
            };
            println!("status: {status} ({} iterations)", report.result.iterations);
            println!("allocation: theta_t = {:.6e}, theta_1 = {:.6e}", report.result.allocation.theta_t, report.result.allocation.theta_1);
            for row in report.rows() {
                println!("{:<6} {:<16} {:.6e}", row.scheme, row.statistic, row.value);
            }
            maybe_write(out.as_ref(), &report.rows())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
