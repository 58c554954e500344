//! Thin command-line front end: argument parsing only, with every command
//! implemented by the `cayleyq` library's `run` module.
//!
//! Exit codes: 0 success, 1 usage error, 2 verified mismatch, 3 budget
//! refusal. Machine reports go to `--out` or stdout; status lines to stderr.

use cayleyq::run::{self, Command, OutputFormat, RunConfig};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cayleyq",
    version,
    about = "Exact 8-dimensional Cayley algebras and their plane-covering designs",
    long_about = "Builds Cayley (octonion) algebras with exact arithmetic over the rationals, \
                  odd-prime fields, and rational-function fields; enumerates the 4-dimensional \
                  associative subalgebras; verifies the counting tables against closed-form \
                  polynomials; and cross-checks three independent block enumerations."
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
    /// Worker threads for the enumeration partitioner (0 = all cores); the
    /// OCTO_THREADS environment variable overrides this flag.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the report here instead of stdout (a directory for --format csv).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: json, csv (tables only), or text.
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Commands {
    /// Reproduce the plane/block counting tables at an odd prime q and
    /// verify every cell against the census polynomials.
    Tables {
        /// Field order: 3 runs by default, 5 needs --allow-slow.
        #[arg(long, default_value_t = 3)]
        q: u64,
        /// Structure parameters a,b,c as nonzero field elements.
        #[arg(long, default_value = "-1,-1,-1")]
        params: String,
        /// Opt in to the q = 5 enumeration (minutes, not seconds).
        #[arg(long)]
        allow_slow: bool,
    },
    /// Enumerate the blocks three independent ways (plane closures,
    /// exhaustive 3-subspace scan, wedge-coordinate criterion) and compare.
    Crosscheck {
        /// Field order: 3 runs by default, 5 needs --allow-slow.
        #[arg(long, default_value_t = 3)]
        q: u64,
        /// Structure parameters a,b,c as nonzero field elements.
        #[arg(long, default_value = "-1,-1,-1")]
        params: String,
        /// Opt in to the q = 5 enumeration.
        #[arg(long)]
        allow_slow: bool,
    },
    /// Draw random planes in a division Cayley algebra and verify each
    /// generates a 4-dimensional associative subalgebra with no nilpotents.
    FanoCheck {
        /// Base field: q (rationals, parameters -1,-1,-1) or ff:p (the
        /// rational-function field F_p(a,b,c) with symbolic parameters).
        #[arg(long, default_value = "q")]
        field: String,
        /// Number of random planes to draw.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// PRNG seed, echoed into the report.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify the plane spanned by two imaginary elements and report the
    /// subalgebra it generates.
    Classify {
        /// Base field: q (rationals), qf (Q(a,b,c)), a prime p, or ff:p.
        #[arg(long, default_value = "q")]
        field: String,
        /// Structure parameters a,b,c (ignored with --split).
        #[arg(long, default_value = "-1,-1,-1")]
        params: String,
        /// Use the split multiplication table (basis p1,p2,q1..q3,r1..r3).
        #[arg(long)]
        split: bool,
        /// First generator, e.g. "e0 + 2*e3" or "q1".
        #[arg(long)]
        u: String,
        /// Second generator.
        #[arg(long)]
        v: String,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

fn to_config(cli: Cli) -> Result<RunConfig, run::RunError> {
    let mut cfg = RunConfig::new(Command::Tables);
    cfg.out = cli.out;
    cfg.format = cli.format;
    cfg.threads = cli.threads;
    match cli.command {
        Commands::Tables { q, params, allow_slow } => {
            cfg.command = Command::Tables;
            cfg.q = q;
            cfg.params = run::split_params_arg(&params)?;
            cfg.allow_slow = allow_slow;
        }
        Commands::Crosscheck { q, params, allow_slow } => {
            cfg.command = Command::Crosscheck;
            cfg.q = q;
            cfg.params = run::split_params_arg(&params)?;
            cfg.allow_slow = allow_slow;
        }
        Commands::FanoCheck { field, samples, seed } => {
            cfg.command = Command::FanoCheck;
            cfg.field = field;
            cfg.samples = samples;
            cfg.seed = seed;
        }
        Commands::Classify { field, params, split, u, v } => {
            cfg.command = Command::Classify;
            cfg.field = field;
            cfg.params = run::split_params_arg(&params)?;
            cfg.split = split;
            cfg.u = Some(u);
            cfg.v = Some(v);
        }
    }
    Ok(cfg)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => run::EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match to_config(cli) {
        Ok(cfg) => std::process::exit(run::run(&cfg)),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
