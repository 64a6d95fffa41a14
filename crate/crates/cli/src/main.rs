use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use redei_cli::{
    cmd_bench, cmd_cf, cmd_digits, cmd_eval, cmd_newton, cmd_padic, cmd_pade, parse_root,
    CmdResult, Failure, Limits, Method, DEFAULT_EXPS, EXIT_INTERNAL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exact Rédei rational functions: real and p-adic approximations of √d.
#[derive(Debug, Parser)]
#[command(name = "redei", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, env = "REDEI_FORMAT", value_enum, default_value = "text")]
    format: Format,

    /// Lift the 2^30 index and 10^4 precision bounds.
    #[arg(long, global = true)]
    unsafe_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// N_n, D_n and Q_n(d, z) with the norm identity and a cross-method check.
    Eval {
        #[arg(long)]
        d: BigInt,
        #[arg(long)]
        z: BigInt,
        #[arg(long)]
        n: u64,
        /// binomial | recurrence | matrix
        #[arg(long, default_value = "matrix")]
        method: String,
    },
    /// The periodic continued fraction [z; period(2z/(d-z^2), 2z)] and its convergents.
    Cf {
        #[arg(long)]
        d: BigInt,
        #[arg(long)]
        z: BigInt,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Newton iterates from z, certified equal to Q_(2^n).
    Newton {
        #[arg(long)]
        d: BigInt,
        #[arg(long)]
        z: BigInt,
        #[arg(long, default_value_t = 4)]
        iters: usize,
    },
    /// Contact order of Q_(2r+1)(z^2 + t, z) with sqrt(z^2 + t).
    Pade {
        #[arg(long)]
        z: BigInt,
        /// r, giving the index 2r + 1
        #[arg(long)]
        order: u64,
    },
    /// Certified truncated decimal digits of sqrt(d).
    Digits {
        #[arg(long)]
        d: BigInt,
        /// Defaults to max(1, floor(sqrt d)).
        #[arg(long)]
        z: Option<BigInt>,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// p-adic digits, valuation table, congruence checks and periodic CF of sqrt(d).
    Padic {
        #[arg(long)]
        d: BigInt,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10)]
        prec: usize,
        /// smaller | larger | an explicit root z
        #[arg(long, default_value = "smaller")]
        root: String,
        /// Add the real error column.
        #[arg(long)]
        simultaneous: bool,
    },
    /// Sequential Newton against the doubling chain for n = 2^e.
    Bench {
        #[arg(long, default_value = "2")]
        d: BigInt,
        #[arg(long, default_value = "1")]
        z: BigInt,
        #[arg(long, value_delimiter = ',')]
        exps: Option<Vec<u32>>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

fn run(cli: &Cli) -> CmdResult {
    let limits = Limits {
        unsafe_large: cli.unsafe_large,
    };
    match &cli.command {
        Command::Eval { d, z, n, method } => cmd_eval(d, z, *n, Method::parse(method)?, limits),
        Command::Cf { d, z, terms } => cmd_cf(d, z, *terms, limits),
        Command::Newton { d, z, iters } => cmd_newton(d, z, *iters, limits),
        Command::Pade { z, order } => cmd_pade(z, *order),
        Command::Digits { d, z, count } => {
            let z = z.clone().unwrap_or_else(|| d.sqrt().max(BigInt::from(1)));
            cmd_digits(d, &z, *count, limits)
        }
        Command::Padic {
            d,
            p,
            prec,
            root,
            simultaneous,
        } => cmd_padic(d, *p, *prec, &parse_root(root)?, *simultaneous, limits),
        Command::Bench { d, z, exps, reps } => {
            let exps = exps.clone().unwrap_or_else(|| DEFAULT_EXPS.to_vec());
            cmd_bench(d, z, &exps, *reps)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text.clone(),
                Format::Json => {
                    serde_json::to_string_pretty(&report.output).expect("serializable output") + "\n"
                }
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            let failed = report.failed_certificates();
            // contact_exactly_2r is informational; the others are contracts
            if failed.iter().any(|c| *c != "contact_exactly_2r") {
                eprintln!("error: certificate(s) failed: {}", failed.join(", "));
                return ExitCode::from(EXIT_INTERNAL as u8);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let kind = match failure {
                Failure::Invalid(_) => "error",
                Failure::Internal(_) => "internal error",
            };
            eprintln!("{kind}: {}", failure.message());
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
