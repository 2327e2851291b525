use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qgv_core::report::Format;
use qgv_core::suite::{dump_curvature, normal_form_of, parse_point, run_suite, Algebra, Suite, SuiteConfig};
use qgv_core::Error;

#[derive(Parser)]
#[command(name = "qgv", version, about = "Exact verification of q-deformed calculi and the q-instanton")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite: tensor, sphere, espace, gauge, instanton, hspace or all.
    Verify {
        suite: String,
        /// Degree and word-length bound for the enumerated checks.
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        /// Specialize at this rational value of s (q = s^2).
        #[arg(long = "q", value_name = "S")]
        q: Option<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "text")]
        format: String,
        /// Print the instanton curvature components.
        #[arg(long = "dump-F")]
        dump_f: bool,
        /// Build the sphere with a corrupted rule (negative control).
        #[arg(long)]
        corrupt: bool,
    },
    /// Print the normal form of an expression.
    Nf {
        #[arg(long)]
        algebra: String,
        #[arg(long = "q", value_name = "S")]
        q: Option<String>,
        expr: String,
    },
}

fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn usage(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("qgv: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify { suite, max_deg, q, seed, format, dump_f, corrupt } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let format: Format = match format.parse() {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            let s0 = match q.as_deref().map(parse_point).transpose() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let cfg = SuiteConfig { suite, max_deg, s0, seed, format, dump_f, corrupt };
            let reports = match run_suite(&cfg) {
                Ok(r) => r,
                Err(e @ (Error::Config(_) | Error::ZeroSpecialization)) => return usage(e),
                Err(e) => {
                    eprintln!("qgv: {e}");
                    return ExitCode::from(1);
                }
            };
            for r in &reports {
                emit(&format!("{}\n", r.emit(format)));
            }
            if dump_f {
                match dump_curvature(&cfg) {
                    Ok(t) => emit(&t),
                    Err(e) => {
                        eprintln!("qgv: {e}");
                        return ExitCode::from(1);
                    }
                }
            }
            if reports.iter().all(|r| r.all_passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Nf { algebra, q, expr } => {
            let algebra: Algebra = match algebra.parse() {
                Ok(a) => a,
                Err(e) => return usage(e),
            };
            let s0 = match q.as_deref().map(parse_point).transpose() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            match normal_form_of(algebra, &expr, s0.as_ref()) {
                Ok(p) => {
                    emit(&format!("{p}\n"));
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            }
        }
    }
}
