use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maclane::cli::{run, Command, Flags, EXIT_PARSE};

#[derive(Parser)]
#[command(name = "maclane", version, about = "Inductive valuations, key polynomials and graded algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: FlagArgs,
}

#[derive(Args)]
struct FlagArgs {
    /// Scenario file (JSON); standard input when omitted.
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    verbose: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long = "stage-bound", global = true)]
    stage_bound: Option<usize>,
    /// Value bound for the semigroup check, e.g. 20 or 41/2.
    #[arg(long, global = true)]
    bound: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Value of a polynomial in the extension defined by f.
    Value { g: String },
    /// Chains of approximants and the invariants of the extension.
    Approximate,
    /// Keys over the local ring.
    Descend,
    /// Presentation of the graded algebra.
    Graded,
    /// Newton polygon of f at a stage of the tower.
    Polygon {
        #[arg(default_value_t = 1)]
        stage: usize,
    },
    /// Agreement with the resultant formula on random polynomials.
    Oracle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let src = match &cli.flags.input {
        Some(path) => fs::read_to_string(path),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let src = match src {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read scenario: {e}");
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let command = match cli.command {
        Cmd::Value { g } => Command::Value { g },
        Cmd::Approximate => Command::Approximate,
        Cmd::Descend => Command::Descend,
        Cmd::Graded => Command::Graded,
        Cmd::Polygon { stage } => Command::Polygon { stage },
        Cmd::Oracle => Command::Oracle,
    };
    let f = cli.flags;
    let flags = Flags {
        json: f.json,
        verbose: f.verbose,
        seed: f.seed,
        samples: f.samples,
        stage_bound: f.stage_bound,
        bound: f.bound,
    };
    let out = run(&command, &src, &flags);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = io::stdout().flush();
    ExitCode::from(out.code as u8)
}
