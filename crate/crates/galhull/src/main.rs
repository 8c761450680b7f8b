use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use galhull::error::AppError;
use galhull::{run, Command, Options};

#[derive(Parser)]
#[command(name = "galhull", version, about = "Galois hulls of constacyclic codes over affine algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Job file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap every search budget at N.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    /// Best-known distance table (CSV with columns q,n,k,d).
    #[arg(long, global = true, value_name = "PATH")]
    reference_table: Option<PathBuf>,
    /// Run the command twice and require byte-identical output.
    #[arg(long, global = true)]
    seed_check: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Primitive idempotents of the algebra.
    Decompose,
    /// Factor a polynomial, or x^n - lambda into #-orbits.
    Factor,
    /// Hull dimension by the closed form and by two oracles.
    Hull,
    /// Self-dual, dual-containing, self-orthogonal and LCD tests.
    Classify,
    /// All achievable hull dimensions for the given n, lambda and k.
    Spectrum,
    /// Gray image and its dual and hull.
    Gray,
    /// EAQECC parameters from the Gray image.
    Eaqecc,
    /// Recompute the EAQECC table and diff it against the golden file.
    ReproduceTable1 {
        /// Golden file to compare against instead of the bundled one.
        #[arg(long, value_name = "PATH")]
        golden: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options {
        config: cli.config,
        json: cli.json,
        budget: cli.budget,
        reference_table: cli.reference_table,
        golden: None,
    };
    let cmd = match cli.command {
        Cmd::Decompose => Command::Decompose,
        Cmd::Factor => Command::Factor,
        Cmd::Hull => Command::Hull,
        Cmd::Classify => Command::Classify,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Gray => Command::Gray,
        Cmd::Eaqecc => Command::Eaqecc,
        Cmd::ReproduceTable1 { golden } => {
            opts.golden = golden;
            Command::ReproduceTable1
        }
    };
    let result = run(cmd, &opts).and_then(|first| {
        if !cli.seed_check {
            return Ok(first);
        }
        let second = run(cmd, &opts)?;
        if first.stdout != second.stdout {
            return Err(AppError::failure("seed-check", "two runs produced different output"));
        }
        eprintln!("seed-check: two runs produced identical output ({} bytes)", first.stdout.len());
        Ok(first)
    });
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
