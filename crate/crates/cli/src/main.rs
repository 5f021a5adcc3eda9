use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use eulerfit_cli::{cmd_charpoly, cmd_euler_check, cmd_selftest, cmd_theta, CliError, Outcome, EXIT_CONFIG};
use eulerfit_core::suites::Scale;

#[derive(Parser)]
#[command(name = "eulerfit", version, about = "Equivariant Euler factors of Drinfeld modules over finite fields")]
struct Cli {
    /// write the JSON document here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// indent the JSON document
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial of Frobenius, Newton data, unit-root factor
    Charpoly {
        config: PathBuf,
        /// also emit the unit-root factor modulo w0^N
        #[arg(long, value_name = "N")]
        unit_root: Option<usize>,
    },
    /// Both sides of the Euler-factor identities at one prime
    EulerCheck { config: PathBuf },
    /// Truncated equivariant Euler product
    Theta {
        config: PathBuf,
        /// compare against the monic Dirichlet sum (trivial group only)
        #[arg(long)]
        dirichlet_check: bool,
    },
    /// Randomized invariant suites
    Selftest {
        #[arg(value_enum, default_value = "quick")]
        scale: ScaleArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Quick,
    Full,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config { field: "<path>".into(), message: format!("{}: {e}", path.display()) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Charpoly { config, unit_root } => ("charpoly", Outcome::from_result(read(config).and_then(|t| cmd_charpoly(&t, *unit_root)))),
        Command::EulerCheck { config } => ("euler-check", Outcome::from_result(read(config).and_then(|t| cmd_euler_check(&t)))),
        Command::Theta { config, dirichlet_check } => ("theta", Outcome::from_result(read(config).and_then(|t| cmd_theta(&t, *dirichlet_check)))),
        Command::Selftest { scale, seed } => {
            let scale = match scale {
                ScaleArg::Quick => Scale::Quick,
                ScaleArg::Full => Scale::Full,
            };
            ("selftest", cmd_selftest(scale, *seed))
        }
    };
    if let eulerfit_cli::record::OutputRecord::Error(e) = &outcome.record {
        match &e.field {
            Some(f) => eprintln!("eulerfit {name}: {} in `{f}`: {}", e.kind, e.message),
            None => eprintln!("eulerfit {name}: {}: {}", e.kind, e.message),
        }
    }
    if let eulerfit_cli::record::OutputRecord::Selftest(s) = &outcome.record {
        for suite in &s.suites {
            eprintln!("{:<36} {:>4}/{:<4} {}", suite.name, suite.passed, suite.total, if suite.failures.is_empty() { "ok" } else { "FAILED" });
            for f in suite.failures.iter().take(3) {
                eprintln!("    {f}");
            }
        }
    }
    let mut doc = outcome.record.to_json(cli.pretty);
    doc.push('\n');
    let written = match &cli.out {
        Some(p) => std::fs::write(p, doc).map_err(|e| eprintln!("eulerfit: cannot write {}: {e}", p.display())),
        None => {
            print!("{doc}");
            Ok(())
        }
    };
    eprintln!("eulerfit {name}: {:.3}s", start.elapsed().as_secs_f64());
    if written.is_err() {
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
