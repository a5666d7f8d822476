//! Experiment front end. All logic lives in the library; this binary only
//! parses flags, forwards to `oscint::runner`, prints summaries, and maps
//! outcomes to exit codes (0 ok, 1 input error, 2 contract/audit failure).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use oscint::runner::{self, AuditConfig, OdeConfig, OutputFormat, SweepConfig, WaveConfig};
use oscint::OscintError;

#[derive(Parser)]
#[command(
    name = "oscint",
    version,
    about = "Trigonometric-integrator experiments for oscillatory systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a linear system fixture and emit its energy series.
    Ode {
        /// System fixture: file path or inline JSON.
        #[arg(long)]
        system: String,
        #[arg(long, default_value = "deuflhard")]
        filter: String,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        steps: usize,
        /// Row recording stride (default: 1 for d <= 16, else 10).
        #[arg(long)]
        stride: Option<usize>,
        /// Seed for the initial state when the fixture has none.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Run the Klein-Gordon pipeline: certificate plus one series per step size.
    Wave {
        /// Problem file path or inline JSON (overrides --K/--rho/--potential).
        #[arg(long)]
        problem: Option<String>,
        #[arg(long = "K", alias = "k", default_value_t = 32)]
        big_k: usize,
        #[arg(long, default_value_t = 4.0)]
        rho: f64,
        /// Inline potential coefficients, e.g. '[{"j":0,"re":0.5},{"j":1,"re":0.2}]'.
        #[arg(long)]
        potential: Option<String>,
        #[arg(long, default_value = "hairer-lubich")]
        filter: String,
        /// Single step size (shortcut for a one-entry --h-list).
        #[arg(long)]
        h: Option<f64>,
        /// Comma-separated step sizes.
        #[arg(long, value_delimiter = ',')]
        h_list: Vec<f64>,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        stride: Option<usize>,
        /// Empirical estimate of the operator-bound constant c2.
        #[arg(long, default_value_t = 1.1)]
        c2: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Sweep random systems over filters and step sizes.
    Sweep {
        #[arg(long, default_value_t = 4)]
        systems: usize,
        #[arg(long, default_value_t = 6)]
        dim: usize,
        #[arg(long, default_value_t = 100.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 1.0)]
        coupling_norm: f64,
        /// Comma-separated filter names.
        #[arg(
            long = "filters",
            value_delimiter = ',',
            default_value = "deuflhard,hairer-lubich"
        )]
        filters: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        h_list: Vec<f64>,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Integrate and bundle the conservation/closeness/drift audits into a JSON report.
    Audit {
        /// System fixture: file path or inline JSON.
        #[arg(long, conflicts_with = "problem")]
        system: Option<String>,
        /// Wave problem: file path or inline JSON (audits the assembled system).
        #[arg(long)]
        problem: Option<String>,
        #[arg(long, default_value = "deuflhard")]
        filter: String,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the filter catalog with its certified constants.
    Filters,
}

fn main() -> ExitCode {
    // default SIGPIPE behavior so that piping into `head` ends the process
    // quietly instead of panicking mid-print
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                OscintError::NonFiniteState { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, OscintError> {
    s.parse()
}

fn dispatch(command: Command) -> Result<ExitCode, OscintError> {
    match command {
        Command::Ode {
            system,
            filter,
            h,
            steps,
            stride,
            seed,
            out,
            format,
        } => {
            let cfg = OdeConfig {
                system,
                filter,
                h,
                steps,
                stride,
                seed,
                out: out.clone(),
                format: parse_format(&format)?,
            };
            let artifacts = runner::run_ode(&cfg)?;
            for w in &artifacts.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(seed) = artifacts.drawn_seed {
                eprintln!("initial state seed: {seed}");
            }
            let s = &artifacts.series.summary;
            eprintln!(
                "steps {}  max |drift_H| {:.6e}  max |drift_H_mod| {:.6e}  per-step defect {:.6e}",
                s.steps,
                artifacts.series.max_abs_drift_energy(),
                s.max_abs_drift_modified,
                s.max_step_defect_modified
            );
            if let Some(text) = artifacts.rendered {
                print!("{text}");
            } else if let Some(path) = out {
                eprintln!("series written to {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Wave {
            problem,
            big_k,
            rho,
            potential,
            filter,
            h,
            mut h_list,
            steps,
            stride,
            c2,
            out_dir,
            format,
        } => {
            if let Some(h) = h {
                h_list.push(h);
            }
            let cfg = WaveConfig {
                problem,
                big_k,
                rho,
                potential,
                filter,
                h_list,
                steps,
                stride,
                c2_estimate: c2,
                out_dir,
                format: parse_format(&format)?,
            };
            let artifacts = runner::run_wave(&cfg)?;
            for w in &artifacts.warnings {
                eprintln!("warning: {w}");
            }
            let cert = &artifacts.certificate;
            println!("rho = {}, omega_min = {:.6}", cert.rho, cert.omega_min);
            println!("||A|| = {:.6e}, ||V||_H1 = {:.6e}", cert.a_norm, cert.v_h1);
            println!(
                "threshold with c2 estimate {}: {}",
                cert.c2_estimate, cert.estimate_condition
            );
            println!("threshold with computed ||A||: {}", cert.direct_condition);
            println!("regime: {}", cert.drift_regime());
            for entry in &artifacts.runs {
                let s = &entry.series.summary;
                println!(
                    "h = {:<10} max |drift_H| {:.6e}  max |drift_H_mod| {:.6e}",
                    entry.h,
                    entry.series.max_abs_drift_energy(),
                    s.max_abs_drift_modified
                );
                if let Some(path) = &entry.out_path {
                    eprintln!("series written to {}", path.display());
                } else if let Some(text) = &entry.rendered {
                    print!("{text}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            systems,
            dim,
            omega_max,
            coupling_norm,
            filters,
            h_list,
            steps,
            stride,
            seed,
            jobs,
            out_dir,
            format,
        } => {
            let cfg = SweepConfig {
                systems,
                dim,
                omega_max,
                coupling_norm,
                filters,
                h_list,
                steps,
                stride,
                seed,
                jobs,
                out_dir,
                format: parse_format(&format)?,
            };
            let artifacts = runner::run_sweep(&cfg)?;
            if artifacts.seed_was_drawn {
                eprintln!("seed: {} (drawn; pass --seed to reproduce)", artifacts.seed);
            }
            println!("system,filter,h,steps,max_drift_H,max_drift_H_mod,max_step_defect");
            for row in &artifacts.rows {
                println!(
                    "{},{},{},{},{:.6e},{:.6e},{:.6e}",
                    row.system,
                    row.filter,
                    row.h,
                    row.steps,
                    row.max_abs_drift_energy,
                    row.max_abs_drift_modified,
                    row.max_step_defect_modified
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit {
            system,
            problem,
            filter,
            h,
            steps,
            stride,
            seed,
            out,
        } => {
            let cfg = AuditConfig {
                system,
                problem,
                filter,
                h,
                steps,
                stride,
                seed,
                out,
            };
            let report = runner::run_audit(&cfg)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            if report.hard_failure {
                eprintln!("audit failure: at least one applicable contract violated");
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Filters => {
            println!(
                "{:<16} {:<8} {:<10} {:>6} {:>6}  compliant",
                "name", "phi", "psi1", "c0", "c1"
            );
            for (name, phi, psi1, c0, c1, compliant) in runner::filter_table() {
                println!("{name:<16} {phi:<8} {psi1:<10} {c0:>6} {c1:>6}  {compliant}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
