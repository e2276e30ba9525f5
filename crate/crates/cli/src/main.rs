//! `qloop`: runs the symbolic and numeric checks and emits JSON reports.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! and 2 on usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qloop_core::catalog::{SecondSeriesForm, SpecializationPlan};
use qloop_core::factorization::{verify_determinant_arguments, verify_factorization_symbolic};
use qloop_core::qchar::{verify_grothendieck_with, CompareMode};
use qloop_core::report::{Timing, VerificationReport};
use qloop_core::BigRational;
use qloop_numeric::checks::run_numeric_check;
use qloop_numeric::params::NumericParams;

#[derive(Parser)]
#[command(name = "qloop", version, about = "Checks of l-weight identities and Q-operator factorization")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Also write the report to DIR/<check>.json.
    #[arg(long, global = true, env = "QLOOP_REPORT_DIR", value_name = "DIR")]
    json_out: Option<PathBuf>,
    /// Attach wall-clock timing to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Corrected,
    Literal,
}

#[derive(Subcommand)]
enum Command {
    /// Oscillator product character against the sum of shifted evaluation characters.
    VerifyGrothendieck {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        l: u8,
        #[arg(long)]
        depth: u32,
        /// Shape of the second series of the second oscillator family (l = 2).
        #[arg(long, value_enum, default_value = "corrected")]
        form: Form,
        /// Bind mu to these rationals instead of comparing symbolically, e.g. `--mu 1/2,-1/2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Option<Vec<BigRational>>,
    },
    /// Character identity plus resummation of the shift series against C_l.
    VerifyFactorization {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        l: u8,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        torder: u32,
    },
    /// Determinant arguments against the specialization points for every Weyl element.
    VerifyDeterminant {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        l: u8,
    },
    /// Finite-matrix factorization checks on a spin-1/2 chain.
    NumericCheck {
        /// TOML parameter file; command-line values override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        fock: Option<usize>,
        #[arg(long)]
        verma: Option<usize>,
        /// Seeds for the random spectral parameters; may be repeated.
        #[arg(long = "seed", default_values_t = [1u64, 2, 3])]
        seeds: Vec<u64>,
    },
}

enum Failure {
    Usage(String),
}

fn run(cmd: Command) -> Result<VerificationReport, Failure> {
    let usage = |e: &dyn std::fmt::Display| Failure::Usage(e.to_string());
    match cmd {
        Command::VerifyGrothendieck { l, depth, form, mu } => {
            let plan = SpecializationPlan::standard(l as usize).map_err(|e| usage(&e))?;
            let form = match form {
                Form::Corrected => SecondSeriesForm::CORRECTED,
                Form::Literal => SecondSeriesForm::LITERAL,
            };
            let mode = match mu {
                None => CompareMode::Symbolic,
                Some(m) if m.len() == l as usize + 1 => CompareMode::Numeric(m),
                Some(m) => return Err(Failure::Usage(format!("--mu needs {} values, got {}", l + 1, m.len()))),
            };
            verify_grothendieck_with(&plan, depth, &form, &mode).map_err(|e| usage(&e))
        }
        Command::VerifyFactorization { l, depth, torder } => {
            verify_factorization_symbolic(l as usize, depth, torder).map_err(|e| usage(&e))
        }
        Command::VerifyDeterminant { l } => verify_determinant_arguments(l as usize).map_err(|e| usage(&e)),
        Command::NumericCheck { config, sites, fock, verma, seeds } => {
            let mut p = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    NumericParams::from_toml_str(&text).map_err(|e| usage(&e))?
                }
                None => NumericParams::default(),
            };
            p.sites = sites.unwrap_or(p.sites);
            p.fock_cutoff = fock.unwrap_or(p.fock_cutoff);
            p.verma_cutoff = verma.unwrap_or(p.verma_cutoff);
            run_numeric_check(&p, &seeds).map_err(|e| usage(&e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    let clock = Instant::now();
    let mut report = match run(cli.command) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if cli.common.timing {
        report.timing = Some(Timing { started_unix_ms: started, wall_seconds: clock.elapsed().as_secs_f64() });
    }
    let json = report.to_json();
    println!("{json}");
    if let Some(dir) = cli.common.json_out {
        let path = dir.join(format!("{}.json", report.check));
        if let Err(e) = std::fs::create_dir_all(&dir).and_then(|_| std::fs::write(&path, format!("{json}\n"))) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
}
