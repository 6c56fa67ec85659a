use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hilbert_ortho_cli::commands::{self, CommandError, Outcome};

/// Reflection decompositions, invariant checks and sphere contractions.
///
/// Data documents (words, paths) go to `--out` or stdout; run reports go to
/// stderr, except for `verify` and `fibre` whose report is the document.
/// Exit status: 0 all checks pass, 1 a check failed, 2 usage or parse
/// error, 3 invalid input data.
#[derive(Debug, Parser)]
#[command(name = "hortho", version)]
struct Cli {
    /// Worker threads for sample sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor an orthogonal matrix `{"n": .., "rows": [[..]]}` into reflections.
    Decompose { file: PathBuf },
    /// Run a randomized invariant suite.
    Verify {
        /// reflections, group, normality, euclid, charts, frechet, homotopy, quotient or fibre
        suite: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample the path contracting the sphere from a start vector to e0.
    Contract {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Trivialize and rebuild random elements of O(dim + 1).
    Fibre {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(out: Option<&PathBuf>, document: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{document}\n")),
        None => writeln!(std::io::stdout().lock(), "{document}"),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CommandError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(usize::from(cli.jobs))
        .build()
        .map_err(|e| CommandError::Usage(format!("cannot start worker threads: {e}")))?;
    match &cli.command {
        Command::Decompose { file } => commands::decompose(file),
        Command::Verify { suite, samples, seed } => commands::verify(suite, *samples, *seed, &pool),
        Command::Contract { file, steps } => commands::contract(file, *steps),
        Command::Fibre { dim, samples, seed } => commands::fibre(*dim, *samples, *seed, &pool),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let written = match &outcome.data {
                Some(data) => {
                    eprintln!("{}", outcome.report.to_json());
                    emit(cli.out.as_ref(), data)
                }
                None => emit(cli.out.as_ref(), &outcome.report.to_json()),
            };
            if let Err(e) = written {
                eprintln!("hortho: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("hortho: {e}");
            if let CommandError::InvalidData { report, .. } = &e {
                eprintln!("{}", report.to_json());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
