use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use vuln_factory::abundance::ExposureInputs;
use vuln_factory::commands::{self, Failure, Output};
use vuln_factory::workspace::Workspace;

/// Deterministic vulnerability factory. Never compiles or runs what it emits.
#[derive(Parser)]
#[command(name = "vuln-factory", version, about)]
struct Cli {
    /// Workspace root holding vuln_modules/ and vuln_counter.txt
    #[arg(long, global = true, default_value = ".")]
    root: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the next module(s) and advance the counter
    Generate {
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Count vulnerabilities produced so far
    Census,
    /// Refute AG(|V| <= C) with a counterexample trace
    Check {
        #[arg(long, value_parser = parse_biguint)]
        bound: BigUint,
    },
    /// Scan a generated module and recover its parameters
    Scan { file: PathBuf },
    /// Abundance table from a counts document
    Abundance {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exploitation exposure A * D * P
    Exposure {
        #[arg(long)]
        abundance: f64,
        #[arg(long)]
        deployment: f64,
        #[arg(long)]
        pexploit: f64,
    },
    /// Fewest exploits covering a target deployment share
    Saturate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        target: f64,
    },
    /// Run the Turing-machine model from a fresh counter tape
    TmRun {
        #[arg(long)]
        invocations: u64,
    },
    /// 2^N, the naive count of factories over N CWE classes
    Fermi {
        #[arg(long, default_value_t = 1447)]
        cwes: u32,
    },
    /// Remove generated modules and the counter
    Reset,
}

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("{s:?} is not a non-negative integer"))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let ws = Workspace::new(cli.root);
    let out = match cli.command {
        Command::Generate { count } => return commands::generate(&ws, count),
        Command::Census => commands::census(&ws),
        Command::Check { bound } => commands::check(&bound),
        Command::Scan { file } => commands::scan(&file),
        Command::Abundance { input } => commands::abundance(&input),
        Command::Exposure {
            abundance,
            deployment,
            pexploit,
        } => commands::exposure(ExposureInputs {
            abundance,
            deployment,
            p_exploit: pexploit,
        }),
        Command::Saturate { input, target } => commands::saturate(&input, target),
        Command::TmRun { invocations } => commands::tm_run(invocations),
        Command::Fermi { cwes } => commands::fermi(cwes),
        Command::Reset => commands::reset(&ws),
    };
    Ok(out?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", serde_json::to_string_pretty(&out.json).expect("serialisable"));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.error);
            println!("{}", failure.to_json());
            ExitCode::FAILURE
        }
    }
}
