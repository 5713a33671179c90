//! `drh`: partial Euler products of L-functions, prime races, tau bias,
//! BSD products, and function-field verification from the command line.
//!
//! Exit codes: 0 success, 1 operational error, 2 a verification verdict
//! that came back negative.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use config::{parse_complex, parse_limit, ConfigFile};

#[derive(Parser)]
#[command(name = "drh", version, about = "Euler-product laboratory")]
struct Cli {
    /// Configuration file of `key = value` lines (flags override it)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (also DRH_THREADS); compute results are identical
    /// for any thread count
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Cache directory for prime/tau/a_p tables (also DRH_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Number of geometric checkpoints (default 64)
    #[arg(long, global = true)]
    checkpoints: Option<usize>,

    /// Verdict tolerance for verification commands (default 0.15)
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve primes up to a limit (cached when a cache dir is configured)
    Sieve {
        #[arg(long, value_parser = parse_limit)]
        limit: u64,
        /// Also write the cache file to this explicit path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checkpointed partial Euler product of a catalog L-function
    Product {
        /// "zeta", "dirichlet:q=4:idx=1", "delta", "ec:a=-1:b=0"
        #[arg(long)]
        label: String,
        /// Evaluation point, e.g. "0.5+14.1347i" (default 0.5)
        #[arg(long, default_value = "0.5", value_parser = parse_complex)]
        s: Complex64,
        #[arg(long, value_parser = parse_limit)]
        limit: u64,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalize a partial product against its predicted limit and report
    /// convergence (exit 2 when the verdict fails)
    DrhVerify {
        #[arg(long)]
        label: String,
        #[arg(long, default_value = "0.5", value_parser = parse_complex)]
        s: Complex64,
        #[arg(long, value_parser = parse_limit)]
        limit: u64,
        /// Order of vanishing at the evaluation point (caller-supplied)
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Override the independent target value (for labels without a
        /// built-in evaluator)
        #[arg(long)]
        target_re: Option<f64>,
        #[arg(long)]
        target_im: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted prime race pi_s(x;q,b) - pi_s(x;q,a) with log-log fit
    Race {
        #[arg(long)]
        q: u64,
        /// positively-counted class (the non-residue side)
        #[arg(long)]
        b: u64,
        /// negatively-counted class
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = 0.5)]
        weight: f64,
        #[arg(long, value_parser = parse_limit)]
        limit: u64,
        /// CSV output path
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON verdict path (stdout when omitted)
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Chebyshev bias series of the Ramanujan tau form
    TauBias {
        #[arg(long, value_parser = parse_limit)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Birch--Swinnerton-Dyer partial product and Goldfeld rank slope
    Bsd {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_parser = parse_limit)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Function-field DRH verification for a character mod A over F_q[T]
    FfVerify {
        #[arg(long)]
        q: u64,
        /// modulus A as comma-separated coefficients, e.g. "1,0,1" = T^2+1
        #[arg(long)]
        modulus: String,
        /// character index in canonical dual-group order
        #[arg(long = "char", default_value_t = 1)]
        char_index: usize,
        #[arg(long, default_value_t = 12)]
        dmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace-formula residual check for a character mod A over F_q[T]
    FfTrace {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        modulus: String,
        #[arg(long = "char", default_value_t = 1)]
        char_index: usize,
        #[arg(long, default_value_t = 12)]
        lmax: u32,
    },
    /// Validate a stored JSON report against the shipped schema and print
    /// a summary
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn run() -> drh_core::Result<i32> {
    // clap's own exit code for usage errors is 2, which this tool reserves
    // for failed verification verdicts; remap argument problems to 1
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return Ok(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return Ok(0);
        }
    };
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path).map_err(drh_core::DrhError::Argument)?,
        None => ConfigFile::default(),
    };
    let cfg = config::resolve(
        &file,
        cli.threads,
        cli.cache_dir.clone(),
        cli.checkpoints,
        cli.tolerance,
    )
    .map_err(drh_core::DrhError::Argument)?;
    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| drh_core::DrhError::Argument(format!("thread pool: {e}")))?;
    }

    match cli.command {
        Command::Sieve { limit, out } => commands::cmd_sieve(limit, out, &cfg),
        Command::Product { label, s, limit, out } => {
            commands::cmd_product(&label, s, limit, out, &cfg)
        }
        Command::DrhVerify { label, s, limit, r, target_re, target_im, out } => {
            let target = match (target_re, target_im) {
                (None, None) => None,
                (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
            };
            commands::cmd_drh_verify(&label, s, limit, r, target, out, &cfg)
        }
        Command::Race { q, b, a, weight, limit, out, json } => {
            commands::cmd_race(q, b, a, weight, limit, out, json, &cfg)
        }
        Command::TauBias { limit, out, json } => commands::cmd_tau_bias(limit, out, json, &cfg),
        Command::Bsd { a, b, limit, out, json } => {
            commands::cmd_bsd(a, b, limit, out, json, &cfg)
        }
        Command::FfVerify { q, modulus, char_index, dmax, out } => {
            commands::cmd_ff_verify(q, &modulus, char_index, dmax, out, &cfg)
        }
        Command::FfTrace { q, modulus, char_index, lmax } => {
            commands::cmd_ff_trace(q, &modulus, char_index, lmax)
        }
        Command::Report { input } => commands::cmd_report(&input),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
