use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use det_cli::bench::{parse_range, run_bench, BenchConfig};
use det_cli::eval::{parse_position, parse_positions, run_eval, EvalRequest, Method, OutputFormat};
use det_cli::selftest::{parse_sizes, run_selftest, DEFAULT_SIZES};
use det_cli::{CliError, CliResult};
use detcore::chio::PivotPolicy;

#[derive(Parser)]
#[command(name = "det", version, about = "Exact determinants by condensation, pivotal reduction and cofactor expansion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    MaxMagnitude,
    FirstNonzero,
}

impl From<PolicyArg> for PivotPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::MaxMagnitude => PivotPolicy::MaxMagnitude,
            PolicyArg::FirstNonzero => PivotPolicy::FirstNonzero,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one matrix.
    Eval {
        /// Matrix file, or `-` for standard input.
        #[arg(long, conflicts_with = "text", required_unless_present = "text")]
        input: Option<PathBuf>,
        /// Matrix given inline; rows separated by newlines or `;`.
        #[arg(long, allow_hyphen_values = true)]
        text: Option<String>,
        #[arg(long, value_enum, default_value = "dodgson")]
        method: Method,
        /// Print every intermediate stage.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "max-magnitude")]
        pivot_policy: PolicyArg,
        /// Pivots for the leading stages, e.g. "2,1;4,4;2,2".
        #[arg(long)]
        forced_pivots: Option<String>,
        /// Replace entry I,J by e and condense symbolically.
        #[arg(long, value_name = "I,J")]
        symbolic_entry: Option<String>,
        /// Seed for perturbation coefficients.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cross-check against cofactor expansion for orders up to 7.
        #[arg(long)]
        verify: bool,
    },
    /// Count field operations on random matrices and write a CSV.
    Bench {
        /// Inclusive order range, e.g. 3..8.
        #[arg(long, default_value = "1..8")]
        orders: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Inclusive entry range, e.g. -9..9.
        #[arg(long, default_value = "-9..9", allow_hyphen_values = true)]
        entry_range: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the seeded identity suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Orders to test, e.g. "1..5" or "2,4,6".
        #[arg(long)]
        sizes: Option<String>,
    },
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    let read_err = |source| CliError::Read {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(read_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(read_err)
    }
}

/// Runs a command and returns its standard output and exit code.
fn execute(command: Command) -> CliResult<(String, u8)> {
    match command {
        Command::Eval {
            input,
            text,
            method,
            trace,
            json,
            pivot_policy,
            forced_pivots,
            symbolic_entry,
            seed,
            verify,
        } => {
            let matrix_text = match (input, text) {
                (Some(path), _) => read_input(&path)?,
                (None, Some(t)) => t.replace(';', "\n"),
                (None, None) => unreachable!("clap requires one input"),
            };
            let mut request = EvalRequest::new(matrix_text, method);
            request.trace = trace;
            request.output = if json { OutputFormat::Json } else { OutputFormat::Text };
            request.pivot_policy = pivot_policy.into();
            request.forced_pivots = forced_pivots.as_deref().map(parse_positions).transpose()?.unwrap_or_default();
            request.symbolic_entry = symbolic_entry.as_deref().map(parse_position).transpose()?;
            request.seed = seed;
            request.verify = verify;
            Ok((run_eval(&request)?, 0))
        }
        Command::Bench {
            orders,
            samples,
            entry_range,
            seed,
            out,
        } => {
            let (a, b) = parse_range::<usize>(&orders)?;
            let config = BenchConfig {
                orders: a..=b,
                samples,
                entry_range: parse_range::<i64>(&entry_range)?,
                seed,
                out,
            };
            Ok((run_bench(&config)?, 0))
        }
        Command::Selftest { seed, sizes } => {
            let sizes = match sizes {
                Some(s) => parse_sizes(&s)?,
                None => DEFAULT_SIZES.to_vec(),
            };
            let report = run_selftest(seed, &sizes)?;
            Ok((report.render(), if report.passed() { 0 } else { 3 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok((out, code)) => {
            let _ = io::stdout().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
