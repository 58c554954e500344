//! Command entry points behind the `cayleyq` binary (and usable directly as
//! library calls): reproduce the counting tables at a chosen prime, cross-check
//! the three block-enumeration routes against each other, probe the division
//! property on random planes, and classify one user-supplied plane.
//!
//! Every command consumes a [`RunConfig`] and returns a process exit code:
//!
//! * `0` — the run completed and every verified quantity matched,
//! * `1` — usage error (malformed flags, parameters, or input elements),
//! * `2` — a verified quantity disagreed with its expectation (the offending
//!   cell or witness is printed), or the computation failed midway,
//! * `3` — budget refusal (field order outside the supported enumeration
//!   range, or a slow run without its opt-in flag).
//!
//! Stream discipline: machine output (the JSON report, or rendered text
//! tables) goes to `--out` when given, otherwise to stdout; human status
//! lines go to stderr so that piped stdout stays parseable. CSV output
//! writes one file per table into the `--out` directory (default: the
//! current directory). The classify command prints its one-line summary to
//! stdout — that line *is* its machine output.
//!
//! JSON reports share an envelope: `{"schema": 1, "config": …, "seed": …,
//! "wall_time_ms": …, "ok": …, "detail": …}` where `detail` is
//! command-specific.
//!
//! The expected table values are closed-form polynomials in the field order
//! `q` ([`expected_census`]); a tables run recomputes everything by exhaustive
//! enumeration and compares cell by cell.

use crate::algebra::{make_general_cayley, make_split_cayley, Algebra};
use crate::classify::{classify_plane, subalgebra_of_plane};
use crate::design::{
    counting_tables, enumerate_blocks, enumerate_blocks_bruteforce, sample_division_check,
    DesignError, DesignReport, DivisionSampleReport, BLOCK_ORDER, PLANE_ORDER,
};
use crate::field::{FieldDescriptor, FieldScalar};
use crate::linalg::Subspace;
use crate::wedge::{ass_matrix, blocks_via_plucker, build_fano, kernel_eta};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Which check to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Reproduce the plane/block counting tables at `q` and compare them with
    /// the census polynomials.
    Tables,
    /// Run the three independent block enumerations and compare the sets.
    Crosscheck,
    /// Sample random planes in a division Cayley algebra and check each
    /// generates a 4-dimensional associative subalgebra with no nilpotents.
    FanoCheck,
    /// Classify one plane given by two imaginary elements.
    Classify,
}

/// Serialization format for the delivered report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// One JSON document (the versioned envelope).
    #[default]
    Json,
    /// One CSV file per table (tables command only).
    Csv,
    /// Human-readable fixed-width rendering.
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(format!("unknown format {other:?}; expected json, csv, or text")),
        }
    }
}

/// Fully resolved invocation parameters for one command.
///
/// Invariants enforced at run time: `q` is an odd prime within the
/// enumeration budget, and the three structure parameters are nonzero after
/// parsing in their field.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// The command to dispatch.
    pub command: Command,
    /// Base-field spec: `"q"` for the rationals, a prime such as `"5"` for
    /// `F_p`, `"ff:p"` for the rational-function field `F_p(a, b, c)`, or
    /// `"qf"` for `Q(a, b, c)`. Used by `fano-check` and `classify`; the
    /// counting commands build their field from [`RunConfig::q`].
    pub field: String,
    /// The three structure parameters, as strings parsed in the field.
    pub params: [String; 3],
    /// Field order for the counting commands.
    pub q: u64,
    /// Number of random planes to draw (`fano-check`).
    pub samples: u64,
    /// PRNG seed, echoed into every report.
    pub seed: u64,
    /// Report destination; `None` means stdout (or, for CSV, the current
    /// directory).
    pub out: Option<PathBuf>,
    /// Report format.
    pub format: OutputFormat,
    /// Worker threads for the enumeration partitioner; `0` means automatic.
    /// The `OCTO_THREADS` environment variable overrides this field.
    pub threads: usize,
    /// Opt-in for runs beyond the default budget (`q = 5`).
    pub allow_slow: bool,
    /// Classify in the split multiplication table (basis `p1, p2, q1..q3,
    /// r1..r3`) instead of a parameter-built table.
    pub split: bool,
    /// First plane generator (`classify`).
    pub u: Option<String>,
    /// Second plane generator (`classify`).
    pub v: Option<String>,
}

impl RunConfig {
    /// A configuration with library defaults: rationals, parameters
    /// `(-1, -1, -1)`, `q = 3`, seed 0, JSON to stdout, automatic threads.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            field: "q".to_string(),
            params: ["-1".into(), "-1".into(), "-1".into()],
            q: 3,
            samples: 0,
            seed: 0,
            out: None,
            format: OutputFormat::Json,
            threads: 0,
            allow_slow: false,
            split: false,
            u: None,
            v: None,
        }
    }
}

/// Split a comma-separated `a,b,c` argument into the three parameter strings.
pub fn split_params_arg(text: &str) -> Result<[String; 3], RunError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
        return Err(RunError::Usage(format!(
            "--params expects three comma-separated values, got {text:?}"
        )));
    }
    Ok([parts[0].into(), parts[1].into(), parts[2].into()])
}

// ---------------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------------

/// Exit code for a fully successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code for malformed flags, parameters, or input elements.
pub const EXIT_USAGE: i32 = 1;
/// Exit code when a verified quantity disagreed with its expectation.
pub const EXIT_MISMATCH: i32 = 2;
/// Exit code for budget refusals (unsupported or slow-without-opt-in runs).
pub const EXIT_BUDGET: i32 = 3;

/// Operational failure of a command, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    /// Bad flags or inputs → exit 1.
    #[error("usage: {0}")]
    Usage(String),
    /// A verified mismatch with the expected value → exit 2.
    #[error("mismatch: {0}")]
    Mismatch(String),
    /// Outside the enumeration budget → exit 3.
    #[error("budget: {0}")]
    Budget(String),
    /// Computation failed after a valid configuration → exit 2, because the
    /// run ended without confirming its target.
    #[error("internal failure: {0}")]
    Internal(String),
}

impl RunError {
    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Mismatch(_) | RunError::Internal(_) => EXIT_MISMATCH,
            RunError::Budget(_) => EXIT_BUDGET,
        }
    }
}

fn internal<E: fmt::Display>(e: E) -> RunError {
    RunError::Internal(e.to_string())
}

// ---------------------------------------------------------------------------
// Census polynomials
// ---------------------------------------------------------------------------

/// `1 + q + … + q^{n−1}`, evaluated over `i128` so negative `q` works.
fn geometric(q: i128, n: u32) -> i128 {
    (0..n).map(|i| q.pow(i)).sum()
}

/// Number of 2-dimensional subspaces of an `n`-dimensional space over `F_q`.
fn gaussian_2(q: i128, n: u32) -> i128 {
    geometric(q, n) * geometric(q, n - 1) / (1 + q)
}

fn to_u64(value: i128, what: &str) -> u64 {
    u64::try_from(value).unwrap_or_else(|_| panic!("{what} = {value} does not fit in u64"))
}

/// Closed-form census at an odd prime `q`: plane counts by type, block counts
/// by kind, both incidence tables, coverage statistics, and the two
/// block-count bounds the report prints for context. All entries are
/// polynomials in `q`; an enumeration run must reproduce them exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedCensus {
    /// The field order the polynomials were evaluated at.
    pub q: u64,
    /// Expected number of planes of each type, keyed by type tag.
    pub theta: BTreeMap<String, u64>,
    /// Expected number of blocks of each kind, keyed by kind tag.
    pub n_blocks: BTreeMap<String, u64>,
    /// Expected number of blocks containing a fixed plane of each type.
    pub h_table: BTreeMap<String, BTreeMap<String, u64>>,
    /// Expected number of planes of each type inside a fixed block of each
    /// kind.
    pub t_table: BTreeMap<String, BTreeMap<String, u64>>,
    /// Expected covering-multiplicity histogram: planes of types U and Z lie
    /// in `q² + q + 1` blocks, all other planes in exactly one.
    pub cover_histogram: BTreeMap<u64, u64>,
    /// Expected number of nonzero nilpotent elements, `q⁶ − 1`.
    pub nilpotent_count: u64,
    /// Expected number of ordered pairs `(x, y)` with `x² = −1`-like square
    /// behavior in the anticommuting sense: `q¹¹ − q⁵`.
    pub special_pairs: u64,
    /// Total planes, the Gaussian count of 2-subspaces of a 7-space.
    pub total_planes: u64,
    /// Total blocks, the Gaussian count of 2-subspaces of a 6-space:
    /// `q⁸ + q⁷ + 2q⁶ + 2q⁵ + 3q⁴ + 2q³ + 2q² + q + 1`.
    pub total_blocks: u64,
    /// Blocks a hypothetical perfect 2-cover (every plane in exactly one
    /// block) would need: `q⁸ + q⁶ + q⁵ + q⁴ + q³ + q² + 1`.
    pub steiner_lower_bound: u64,
    /// Block count of a smaller covering known to exist by a different
    /// construction: `q⁸ + 2q⁶ + 3q⁴ + q³ + 2q² + q + 1`. Printed for
    /// context — the enumerated design is inclusion-minimal but not of
    /// minimum size.
    pub known_cover_upper_bound: u64,
}

/// Evaluate the census polynomials at an odd prime `q`.
///
/// Internal consistency is asserted: the double-counting identity
/// `theta[X] · h[X][Y] = t[X][Y] · n_blocks[Y]` for every cell, the theta
/// total against the Gaussian plane count, and the block total against its
/// closed form.
pub fn expected_census(q: u64) -> ExpectedCensus {
    assert!(q >= 3 && q % 2 == 1, "census polynomials assume an odd prime, got {q}");
    let qi = q as i128;

    // Plane counts by type, in PLANE_ORDER (Q, U, Dn, Ds, M, J, Z).
    let theta_vals: [i128; 7] = [
        (geometric(-qi, 11) - geometric(-qi, 5)) / 2,
        geometric(qi, 8) - geometric(qi, 2),
        (qi.pow(9) + qi.pow(8) - qi.pow(3) - qi.pow(2)) / 2,
        (qi.pow(9) + qi.pow(8) - qi.pow(3) - qi.pow(2)) / 2,
        (geometric(qi, 11) - geometric(qi, 5)) / 2,
        geometric(qi, 8) - geometric(qi, 2),
        geometric(qi, 6),
    ];
    // Block counts by kind, in BLOCK_ORDER (M4, F2J2, S2J2, F1J3).
    let n_vals: [i128; 4] = [
        qi.pow(8) + qi.pow(6) + qi.pow(4),
        (qi.pow(7) - qi) / 2,
        (qi.pow(7)
            + 2 * qi.pow(6)
            + 2 * qi.pow(5)
            + 2 * qi.pow(4)
            + 2 * qi.pow(3)
            + 2 * qi.pow(2)
            + qi)
            / 2,
        geometric(qi, 6),
    ];
    // Blocks of each kind through a fixed plane of each type.
    let h_vals: [[i128; 4]; 7] = [
        [1, 0, 0, 0],
        [qi * qi, 0, qi + 1, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, (qi * qi - qi) / 2, (qi * qi + qi) / 2, qi + 1],
    ];
    // Planes of each type inside a fixed block of each kind.
    let t_vals: [[i128; 4]; 7] = [
        [(qi * qi - qi) / 2, 0, 0, 0],
        [qi + 1, 0, 2 * qi, 0],
        [0, qi * qi + qi, 0, 0],
        [0, 0, qi * qi - qi, 0],
        [(qi * qi + qi) / 2, 0, 0, 0],
        [0, 0, 0, qi * qi],
        [0, 1, 1, qi + 1],
    ];

    // Double-counting: flags over (plane, block) incidences can be counted
    // from either side.
    for (x, &th) in theta_vals.iter().enumerate() {
        for (y, &n) in n_vals.iter().enumerate() {
            assert_eq!(
                th * h_vals[x][y],
                t_vals[x][y] * n,
                "incidence double-count fails at ({}, {})",
                PLANE_ORDER[x].tag(),
                BLOCK_ORDER[y].tag()
            );
        }
    }

    let total_planes = gaussian_2(qi, 7);
    assert_eq!(theta_vals.iter().sum::<i128>(), total_planes, "theta total");
    let total_blocks = qi.pow(8)
        + qi.pow(7)
        + 2 * qi.pow(6)
        + 2 * qi.pow(5)
        + 3 * qi.pow(4)
        + 2 * qi.pow(3)
        + 2 * qi.pow(2)
        + qi
        + 1;
    assert_eq!(n_vals.iter().sum::<i128>(), total_blocks, "block total");
    assert_eq!(gaussian_2(qi, 6), total_blocks, "block total vs Gaussian count");

    // Types U and Z lie in q² + q + 1 blocks each; every other type in one.
    let multi = geometric(qi, 3);
    let multi_planes = theta_vals[1] + theta_vals[6];
    let single_planes = total_planes - multi_planes;
    let mut cover_histogram = BTreeMap::new();
    cover_histogram.insert(1u64, to_u64(single_planes, "single-cover planes"));
    cover_histogram.insert(to_u64(multi, "multiplicity"), to_u64(multi_planes, "multi-cover planes"));

    let tags = |i: usize| PLANE_ORDER[i].tag().to_string();
    let ktags = |j: usize| BLOCK_ORDER[j].tag().to_string();
    let mut theta = BTreeMap::new();
    let mut n_blocks = BTreeMap::new();
    let mut h_table = BTreeMap::new();
    let mut t_table = BTreeMap::new();
    for i in 0..7 {
        theta.insert(tags(i), to_u64(theta_vals[i], "theta"));
        let mut hrow = BTreeMap::new();
        let mut trow = BTreeMap::new();
        for j in 0..4 {
            hrow.insert(ktags(j), to_u64(h_vals[i][j], "h entry"));
            trow.insert(ktags(j), to_u64(t_vals[i][j], "t entry"));
        }
        h_table.insert(tags(i), hrow);
        t_table.insert(tags(i), trow);
    }
    for j in 0..4 {
        n_blocks.insert(ktags(j), to_u64(n_vals[j], "block count"));
    }

    ExpectedCensus {
        q,
        theta,
        n_blocks,
        h_table,
        t_table,
        cover_histogram,
        nilpotent_count: to_u64(qi.pow(6) - 1, "nilpotent count"),
        special_pairs: to_u64(qi.pow(11) - qi.pow(5), "special pairs"),
        total_planes: to_u64(total_planes, "total planes"),
        total_blocks: to_u64(total_blocks, "total blocks"),
        steiner_lower_bound: to_u64(
            qi.pow(8) + qi.pow(6) + qi.pow(5) + qi.pow(4) + qi.pow(3) + qi.pow(2) + 1,
            "lower bound",
        ),
        known_cover_upper_bound: to_u64(
            qi.pow(8) + 2 * qi.pow(6) + 3 * qi.pow(4) + qi.pow(3) + 2 * qi.pow(2) + qi + 1,
            "upper bound",
        ),
    }
}

impl ExpectedCensus {
    /// Compare an enumerated report cell by cell against these polynomials.
    ///
    /// Returns `Err` describing the first offending cell: the tables in row
    /// order, then the histogram, the minimality and Fano flags, and the
    /// global element counts.
    pub fn verify(&self, report: &DesignReport) -> Result<(), String> {
        if report.q != self.q {
            return Err(format!("report is for q = {}, expected q = {}", report.q, self.q));
        }
        for t in PLANE_ORDER {
            let got = report.theta_of(t);
            let want = self.theta[t.tag()];
            if got != want {
                return Err(format!("theta[{}]: enumerated {got}, polynomial {want}", t.tag()));
            }
        }
        for k in BLOCK_ORDER {
            let got = report.blocks_of(k);
            let want = self.n_blocks[k.tag()];
            if got != want {
                return Err(format!("n_blocks[{}]: enumerated {got}, polynomial {want}", k.tag()));
            }
        }
        for x in PLANE_ORDER {
            for y in BLOCK_ORDER {
                let got = report.h(x, y);
                let want = self.h_table[x.tag()][y.tag()];
                if got != want {
                    return Err(format!(
                        "h[{}][{}]: enumerated {got}, polynomial {want}",
                        x.tag(),
                        y.tag()
                    ));
                }
                let got = report.t(x, y);
                let want = self.t_table[x.tag()][y.tag()];
                if got != want {
                    return Err(format!(
                        "t[{}][{}]: enumerated {got}, polynomial {want}",
                        x.tag(),
                        y.tag()
                    ));
                }
            }
        }
        if report.cover_histogram != self.cover_histogram {
            return Err(format!(
                "cover histogram: enumerated {:?}, polynomial {:?}",
                report.cover_histogram, self.cover_histogram
            ));
        }
        if !report.minimal {
            return Err("minimality flag: enumeration reports a removable block".into());
        }
        if report.fano {
            return Err("Fano flag: enumeration reports a perfect cover, impossible over a finite field".into());
        }
        if report.nilpotent_count != self.nilpotent_count {
            return Err(format!(
                "nilpotent count: enumerated {}, polynomial {}",
                report.nilpotent_count, self.nilpotent_count
            ));
        }
        if report.special_pairs != self.special_pairs {
            return Err(format!(
                "special pairs: enumerated {}, polynomial {}",
                report.special_pairs, self.special_pairs
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Gate a counting run on the supported field orders: `q = 3` runs by
/// default, `q = 5` requires the slow opt-in, and everything else is refused.
fn check_budget(q: u64, allow_slow: bool) -> Result<(), RunError> {
    if q < 3 || q % 2 == 0 {
        return Err(RunError::Usage(format!("q = {q}: the field order must be an odd prime")));
    }
    if !is_odd_prime(q) {
        return Err(RunError::Budget(format!("q = {q}: non-prime field orders are not supported")));
    }
    match q {
        3 => Ok(()),
        5 if allow_slow => Ok(()),
        5 => Err(RunError::Budget(
            "q = 5 exceeds the default budget; pass --allow-slow to run it".into(),
        )),
        _ => Err(RunError::Budget(format!(
            "q = {q} is beyond the enumeration budget (q = 3, or q = 5 with --allow-slow)"
        ))),
    }
}

/// Parse a base-field spec: `q` (rationals), a prime `p` (`F_p`), `ff:p`
/// (`F_p(a, b, c)`), or `qf` (`Q(a, b, c)`).
pub fn parse_field_spec(spec: &str) -> Result<FieldDescriptor, RunError> {
    let bad = |msg: String| RunError::Usage(msg);
    match spec {
        "q" | "Q" => Ok(FieldDescriptor::rational()),
        "qf" | "QF" => Ok(FieldDescriptor::function_over_rationals()),
        s => {
            if let Some(p_text) = s.strip_prefix("ff:") {
                let p: u64 = p_text
                    .parse()
                    .map_err(|_| bad(format!("field spec {spec:?}: {p_text:?} is not a number")))?;
                if !is_odd_prime(p) {
                    return Err(bad(format!("field spec {spec:?}: {p} is not an odd prime")));
                }
                FieldDescriptor::function_over_prime(p).map_err(|e| bad(e.to_string()))
            } else if let Ok(p) = s.parse::<u64>() {
                if !is_odd_prime(p) {
                    return Err(bad(format!("field spec {spec:?}: {p} is not an odd prime")));
                }
                FieldDescriptor::prime(p).map_err(|e| bad(e.to_string()))
            } else {
                Err(bad(format!(
                    "field spec {spec:?}: expected q, qf, a prime, or ff:<prime>"
                )))
            }
        }
    }
}

fn parse_params(
    field: FieldDescriptor,
    texts: &[String; 3],
) -> Result<[FieldScalar; 3], RunError> {
    let mut out = Vec::with_capacity(3);
    for t in texts {
        let s = FieldScalar::parse(field, t)
            .map_err(|e| RunError::Usage(format!("parameter {t:?}: {e}")))?;
        if s.is_zero() {
            return Err(RunError::Usage(format!(
                "parameter {t:?} is zero; the three structure parameters must be invertible"
            )));
        }
        out.push(s);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Resolve the worker-thread request: `OCTO_THREADS` overrides the
/// configured value; `0` means the default pool (available parallelism).
fn effective_threads(requested: usize) -> usize {
    std::env::var("OCTO_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(requested)
}

/// Run `f` on a dedicated pool of `threads` workers (`0` = the default pool).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match effective_threads(threads) {
        0 => f(),
        n => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                eprintln!("warning: could not build a {n}-thread pool ({e}); using the default pool");
                f()
            }
        },
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    config: &'a RunConfig,
    seed: u64,
    wall_time_ms: u128,
    ok: bool,
    detail: &'a T,
}

fn envelope_json<T: Serialize>(
    cfg: &RunConfig,
    ok: bool,
    wall_time_ms: u128,
    detail: &T,
) -> Result<String, RunError> {
    let env = Envelope { schema: 1, config: cfg, seed: cfg.seed, wall_time_ms, ok, detail };
    serde_json::to_string_pretty(&env).map_err(internal)
}

/// Deliver a rendered report body to `--out` or stdout.
fn deliver(cfg: &RunConfig, body: &str) -> Result<(), RunError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

/// Write the per-table CSV files into the `--out` directory (default `.`).
fn deliver_csv(cfg: &RunConfig, report: &DesignReport) -> Result<Vec<PathBuf>, RunError> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| RunError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (name, body) in report.csv_tables() {
        let path = dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

// ---------------------------------------------------------------------------
// tables
// ---------------------------------------------------------------------------

/// Detail payload of a tables run: the enumerated report, the polynomial
/// expectations, and the first mismatching cell if any.
#[derive(Debug, Clone, Serialize)]
pub struct TablesDetail {
    /// The enumerated counting report.
    pub report: DesignReport,
    /// The polynomial census it was compared against.
    pub expected: ExpectedCensus,
    /// Description of the first mismatching cell, when any.
    pub first_mismatch: Option<String>,
}

fn render_tables_text(d: &TablesDetail) -> String {
    let r = &d.report;
    let e = &d.expected;
    let mut s = String::new();
    s.push_str(&format!("counting tables at q = {}\n\n", r.q));
    s.push_str("planes by type:\n");
    for t in PLANE_ORDER {
        s.push_str(&format!("  {:<4} {:>12}\n", t.tag(), r.theta_of(t)));
    }
    s.push_str(&format!("  {:<4} {:>12}\n\n", "all", r.total_planes()));
    s.push_str("blocks by kind:\n");
    for k in BLOCK_ORDER {
        s.push_str(&format!("  {:<5} {:>11}\n", k.tag(), r.blocks_of(k)));
    }
    s.push_str(&format!("  {:<5} {:>11}\n\n", "all", r.total_blocks()));
    let header: Vec<String> = BLOCK_ORDER.iter().map(|k| format!("{:>8}", k.tag())).collect();
    s.push_str(&format!("blocks through a fixed plane (rows: plane type):\n  {:<4}{}\n", "", header.join("")));
    for x in PLANE_ORDER {
        let cells: Vec<String> = BLOCK_ORDER.iter().map(|&y| format!("{:>8}", r.h(x, y))).collect();
        s.push_str(&format!("  {:<4}{}\n", x.tag(), cells.join("")));
    }
    s.push_str(&format!("\nplanes inside a fixed block (rows: plane type):\n  {:<4}{}\n", "", header.join("")));
    for x in PLANE_ORDER {
        let cells: Vec<String> = BLOCK_ORDER.iter().map(|&y| format!("{:>8}", r.t(x, y))).collect();
        s.push_str(&format!("  {:<4}{}\n", x.tag(), cells.join("")));
    }
    let hist: Vec<String> =
        r.cover_histogram.iter().map(|(m, c)| format!("{c} planes in {m} block(s)")).collect();
    s.push_str(&format!("\ncoverage: {}\n", hist.join(", ")));
    s.push_str(&format!(
        "inclusion-minimal: {}; perfect cover: {}\n",
        r.minimal, r.fano
    ));
    s.push_str(&format!(
        "nonzero nilpotents: {}; special anticommuting pairs: {}\n",
        r.nilpotent_count, r.special_pairs
    ));
    s.push_str(&format!(
        "context: {} blocks enumerated; a perfect 2-cover would need {}; a smaller cover with {} blocks is known to exist, so inclusion-minimal does not mean smallest\n",
        r.total_blocks(),
        e.steiner_lower_bound,
        e.known_cover_upper_bound
    ));
    match &d.first_mismatch {
        None => s.push_str(&format!("PASS: all table entries match the census polynomials at q = {}\n", r.q)),
        Some(m) => s.push_str(&format!("MISMATCH: {m}\n")),
    }
    s
}

fn tables_run(cfg: &RunConfig) -> Result<i32, RunError> {
    check_budget(cfg.q, cfg.allow_slow)?;
    let field = FieldDescriptor::prime(cfg.q).map_err(|e| RunError::Usage(e.to_string()))?;
    let params = parse_params(field, &cfg.params)?;
    let alg = make_general_cayley(field, &params[0], &params[1], &params[2])
        .map_err(|e| RunError::Usage(format!("invalid parameters: {e}")))?;
    let start = Instant::now();
    let report = with_threads(cfg.threads, || counting_tables(&alg)).map_err(internal)?;
    let wall = start.elapsed().as_millis();
    let expected = expected_census(cfg.q);
    let first_mismatch = expected.verify(&report).err();
    let ok = first_mismatch.is_none();
    let detail = TablesDetail { report, expected, first_mismatch };

    match cfg.format {
        OutputFormat::Json => deliver(cfg, &envelope_json(cfg, ok, wall, &detail)?)?,
        OutputFormat::Csv => {
            let files = deliver_csv(cfg, &detail.report)?;
            let names: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
            eprintln!("wrote {}", names.join(", "));
        }
        OutputFormat::Text => deliver(cfg, &render_tables_text(&detail))?,
    }
    match &detail.first_mismatch {
        None => {
            eprintln!(
                "tables q={}: PASS — {} blocks, {} planes, {} ms",
                cfg.q,
                detail.report.total_blocks(),
                detail.report.total_planes(),
                wall
            );
            Ok(EXIT_OK)
        }
        Some(m) => {
            eprintln!("tables q={}: MISMATCH — {m}", cfg.q);
            Ok(EXIT_MISMATCH)
        }
    }
}

// ---------------------------------------------------------------------------
// crosscheck
// ---------------------------------------------------------------------------

/// Detail payload of a crosscheck run.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckDetail {
    /// Field order.
    pub q: u64,
    /// The parameters used, in canonical form.
    pub params: [String; 3],
    /// Blocks found by closing each plane and keeping the 4-dimensional
    /// associative results.
    pub closure_blocks: u64,
    /// Blocks found by testing every 3-subspace of the imaginary directions.
    pub bruteforce_blocks: u64,
    /// Blocks found by the linear criterion on wedge coordinates.
    pub plucker_blocks: u64,
    /// Whether the three block sets are identical.
    pub sets_equal: bool,
    /// Dimension of the joint kernel of the seven point functionals.
    pub eta_kernel_dim: usize,
    /// Dimension of the kernel of the associator map on wedge coordinates.
    pub associator_kernel_dim: usize,
    /// First block present in one set and missing from another, when any.
    pub first_difference: Option<String>,
}

fn render_crosscheck_text(d: &CrosscheckDetail) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "three-route block enumeration at q = {}, parameters ({}, {}, {})\n",
        d.q, d.params[0], d.params[1], d.params[2]
    ));
    s.push_str(&format!("  plane closures:      {:>8} blocks\n", d.closure_blocks));
    s.push_str(&format!("  exhaustive 3-spaces: {:>8} blocks\n", d.bruteforce_blocks));
    s.push_str(&format!("  wedge criterion:     {:>8} blocks\n", d.plucker_blocks));
    s.push_str(&format!("  sets equal: {}\n", d.sets_equal));
    s.push_str(&format!(
        "  kernel dimensions: point functionals {}, associator map {} (both expected 28)\n",
        d.eta_kernel_dim, d.associator_kernel_dim
    ));
    if let Some(diff) = &d.first_difference {
        s.push_str(&format!("  first difference: {diff}\n"));
    }
    s
}

fn first_set_difference(
    name_a: &str,
    a: &BTreeMap<String, Subspace>,
    name_b: &str,
    b: &BTreeMap<String, Subspace>,
) -> Option<String> {
    for key in a.keys() {
        if !b.contains_key(key) {
            return Some(format!("block in {name_a} but not {name_b}: {key}"));
        }
    }
    for key in b.keys() {
        if !a.contains_key(key) {
            return Some(format!("block in {name_b} but not {name_a}: {key}"));
        }
    }
    None
}

fn crosscheck_run(cfg: &RunConfig) -> Result<i32, RunError> {
    check_budget(cfg.q, cfg.allow_slow)?;
    let field = FieldDescriptor::prime(cfg.q).map_err(|e| RunError::Usage(e.to_string()))?;
    let params = parse_params(field, &cfg.params)?;
    let alg = make_general_cayley(field, &params[0], &params[1], &params[2])
        .map_err(|e| RunError::Usage(format!("invalid parameters: {e}")))?;
    let (fano, hsr) =
        build_fano(&params[0], &params[1], &params[2]).map_err(internal)?;

    let start = Instant::now();
    let (closure, brute, pluck, eta_dim, ass_dim) = with_threads(cfg.threads, || {
        let closure = enumerate_blocks(&alg).map_err(internal)?;
        let brute = enumerate_blocks_bruteforce(&alg).map_err(internal)?;
        let pluck = blocks_via_plucker(&fano, &hsr, &alg).map_err(internal)?;
        let eta_dim = kernel_eta(&fano, &hsr).map_err(internal)?.dim();
        let ass_dim = ass_matrix(&alg).map_err(internal)?.kernel().rows();
        Ok::<_, RunError>((closure, brute, pluck, eta_dim, ass_dim))
    })?;
    let wall = start.elapsed().as_millis();

    let first_difference = first_set_difference("closure", &closure, "bruteforce", &brute)
        .or_else(|| first_set_difference("closure", &closure, "plucker", &pluck));
    let sets_equal = first_difference.is_none() && closure == brute && closure == pluck;
    let ok = sets_equal && eta_dim == 28 && ass_dim == 28;
    let detail = CrosscheckDetail {
        q: cfg.q,
        params: [
            params[0].canonical_string(),
            params[1].canonical_string(),
            params[2].canonical_string(),
        ],
        closure_blocks: closure.len() as u64,
        bruteforce_blocks: brute.len() as u64,
        plucker_blocks: pluck.len() as u64,
        sets_equal,
        eta_kernel_dim: eta_dim,
        associator_kernel_dim: ass_dim,
        first_difference,
    };

    match cfg.format {
        OutputFormat::Csv => {
            return Err(RunError::Usage("csv output applies to the tables command only".into()))
        }
        OutputFormat::Json => deliver(cfg, &envelope_json(cfg, ok, wall, &detail)?)?,
        OutputFormat::Text => deliver(cfg, &render_crosscheck_text(&detail))?,
    }
    if ok {
        eprintln!(
            "crosscheck q={}: PASS — {} blocks by all three routes, kernels 28/28, {} ms",
            cfg.q, detail.closure_blocks, wall
        );
        Ok(EXIT_OK)
    } else {
        let why = detail
            .first_difference
            .clone()
            .unwrap_or_else(|| {
                format!(
                    "kernel dimensions {}/{} (expected 28/28)",
                    detail.eta_kernel_dim, detail.associator_kernel_dim
                )
            });
        eprintln!("crosscheck q={}: MISMATCH — {why}", cfg.q);
        Ok(EXIT_MISMATCH)
    }
}

// ---------------------------------------------------------------------------
// fano-check
// ---------------------------------------------------------------------------

/// Detail payload of a division-sampling run.
#[derive(Debug, Clone, Serialize)]
pub struct FanoCheckDetail {
    /// The resolved field, displayed.
    pub field: String,
    /// The structure parameters in canonical form.
    pub params: [String; 3],
    /// The sampling report when the run completed without a violation.
    pub report: Option<DivisionSampleReport>,
    /// The violating plane, when one was found.
    pub violation: Option<String>,
}

fn render_fano_text(d: &FanoCheckDetail) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "division sampling over {}, parameters ({}, {}, {})\n",
        d.field, d.params[0], d.params[1], d.params[2]
    ));
    match (&d.report, &d.violation) {
        (Some(r), _) => {
            s.push_str(&format!("  samples: {}, seed: {}\n", r.samples, r.seed));
            s.push_str(&format!(
                "  planes whose square class was undecidable (structural checks only): {}\n",
                r.undecided_square
            ));
            s.push_str(
                "  uniqueness: structural — any block containing a plane contains its closure\n",
            );
            s.push_str("  verdict: every sampled plane generated a 4-dimensional associative subalgebra with no nilpotents\n");
        }
        (None, Some(w)) => {
            s.push_str(&format!("  verdict: VIOLATION — {w}\n"));
        }
        (None, None) => s.push_str("  verdict: no data\n"),
    }
    s
}

fn fano_check_run(cfg: &RunConfig) -> Result<i32, RunError> {
    let (field, params) = match cfg.field.as_str() {
        "q" | "Q" => {
            let field = FieldDescriptor::rational();
            let m1 = FieldScalar::from_i64(field, -1);
            (field, [m1.clone(), m1.clone(), m1])
        }
        s => match s.strip_prefix("ff:") {
            Some(p_text) => {
                let p: u64 = p_text.parse().map_err(|_| {
                    RunError::Usage(format!("field spec {s:?}: {p_text:?} is not a number"))
                })?;
                if !is_odd_prime(p) {
                    return Err(RunError::Usage(format!(
                        "field spec {s:?}: {p} is not an odd prime"
                    )));
                }
                let field = FieldDescriptor::function_over_prime(p)
                    .map_err(|e| RunError::Usage(e.to_string()))?;
                let var = |i| FieldScalar::var(field, i).map_err(internal);
                (field, [var(0)?, var(1)?, var(2)?])
            }
            None => {
                return Err(RunError::Usage(format!(
                    "--field must be q (rationals) or ff:<prime> (rational functions), got {:?}",
                    cfg.field
                )))
            }
        },
    };
    let alg = make_general_cayley(field, &params[0], &params[1], &params[2])
        .map_err(internal)?;
    if cfg.samples == 0 {
        eprintln!("warning: 0 samples requested; the check passes vacuously");
    }

    let start = Instant::now();
    let outcome = with_threads(cfg.threads, || sample_division_check(&alg, cfg.samples, cfg.seed));
    let wall = start.elapsed().as_millis();

    let param_strings = [
        params[0].canonical_string(),
        params[1].canonical_string(),
        params[2].canonical_string(),
    ];
    let (ok, detail) = match outcome {
        Ok(report) => (
            true,
            FanoCheckDetail {
                field: field.to_string(),
                params: param_strings,
                report: Some(report),
                violation: None,
            },
        ),
        Err(DesignError::DivisionViolation(witness)) => (
            false,
            FanoCheckDetail {
                field: field.to_string(),
                params: param_strings,
                report: None,
                violation: Some(witness),
            },
        ),
        Err(e) => return Err(internal(e)),
    };

    match cfg.format {
        OutputFormat::Csv => {
            return Err(RunError::Usage("csv output applies to the tables command only".into()))
        }
        OutputFormat::Json => deliver(cfg, &envelope_json(cfg, ok, wall, &detail)?)?,
        OutputFormat::Text => deliver(cfg, &render_fano_text(&detail))?,
    }
    if ok {
        eprintln!(
            "fano-check over {}: PASS — {} samples, seed {}, {} ms",
            detail.field, cfg.samples, cfg.seed, wall
        );
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "fano-check over {}: VIOLATION — {}",
            detail.field,
            detail.violation.as_deref().unwrap_or("unknown")
        );
        Ok(EXIT_MISMATCH)
    }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

/// Detail payload of a classify run.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyDetail {
    /// Plane type tag.
    pub plane_type: String,
    /// Dimension of the generated subalgebra.
    pub closure_dim: usize,
    /// Kind tag of the generated subalgebra.
    pub subalgebra_kind: String,
    /// Dimension of its Jacobson radical.
    pub radical_dim: usize,
    /// The one-line summary printed to stdout.
    pub summary: String,
}

fn classify_compute(cfg: &RunConfig) -> Result<ClassifyDetail, RunError> {
    let field = parse_field_spec(&cfg.field)?;
    let alg: Algebra = if cfg.split {
        make_split_cayley(field)
    } else {
        let params = parse_params(field, &cfg.params)?;
        make_general_cayley(field, &params[0], &params[1], &params[2])
            .map_err(|e| RunError::Usage(format!("invalid parameters: {e}")))?
    };
    let u_text = cfg.u.as_deref().ok_or_else(|| RunError::Usage("--u is required".into()))?;
    let v_text = cfg.v.as_deref().ok_or_else(|| RunError::Usage("--v is required".into()))?;
    let u = alg
        .parse_element(u_text)
        .map_err(|e| RunError::Usage(format!("--u {u_text:?}: {e}")))?;
    let v = alg
        .parse_element(v_text)
        .map_err(|e| RunError::Usage(format!("--v {v_text:?}: {e}")))?;
    for (flag, el) in [("--u", &u), ("--v", &v)] {
        if !el.tau().is_zero() {
            return Err(RunError::Usage(format!(
                "{flag} is not imaginary (its trace part is nonzero)"
            )));
        }
    }
    let plane = Subspace::span(field, 7, &[u.im_coords(), v.im_coords()]).map_err(internal)?;
    if plane.dim() != 2 {
        return Err(RunError::Usage(format!(
            "--u and --v span a {}-dimensional space; an independent pair is required",
            plane.dim()
        )));
    }
    let plane_type = classify_plane(&alg, &plane).map_err(internal)?;
    let sub = subalgebra_of_plane(&alg, &plane).map_err(internal)?;
    let mut summary = format!("{}, dim{}", plane_type.tag(), sub.dim());
    if sub.dim() == 4 {
        summary.push_str(&format!(", {}", sub.kind().tag()));
    }
    Ok(ClassifyDetail {
        plane_type: plane_type.tag().to_string(),
        closure_dim: sub.dim(),
        subalgebra_kind: sub.kind().tag().to_string(),
        radical_dim: sub.radical().dim(),
        summary,
    })
}

fn classify_run(cfg: &RunConfig) -> Result<i32, RunError> {
    let start = Instant::now();
    let detail = classify_compute(cfg)?;
    let wall = start.elapsed().as_millis();
    println!("{}", detail.summary);
    println!(
        "subalgebra {}, radical dimension {}",
        detail.subalgebra_kind, detail.radical_dim
    );
    if cfg.out.is_some() {
        deliver(cfg, &envelope_json(cfg, true, wall, &detail)?)?;
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Run the configured command, printing reports and status, and return the
/// process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let outcome = match cfg.command {
        Command::Tables => tables_run(cfg),
        Command::Crosscheck => crosscheck_run(cfg),
        Command::FanoCheck => fano_check_run(cfg),
        Command::Classify => classify_run(cfg),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Classify a plane and return its detail record (library-facing variant of
/// the classify command; the command prints `detail.summary`).
pub fn classify_detail(cfg: &RunConfig) -> Result<ClassifyDetail, RunError> {
    classify_compute(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_polynomials_reproduce_reference_values_at_q3() {
        let c = expected_census(3);
        assert_eq!(c.theta["Q"], 22113);
        assert_eq!(c.theta["U"], 3276);
        assert_eq!(c.theta["Dn"], 13104);
        assert_eq!(c.theta["Ds"], 13104);
        assert_eq!(c.theta["M"], 44226);
        assert_eq!(c.theta["J"], 3276);
        assert_eq!(c.theta["Z"], 364);
        assert_eq!(c.total_planes, 99463);
        assert_eq!(c.n_blocks["M4"], 7371);
        assert_eq!(c.n_blocks["F2J2"], 1092);
        assert_eq!(c.n_blocks["S2J2"], 2184);
        assert_eq!(c.n_blocks["F1J3"], 364);
        assert_eq!(c.total_blocks, 11011);
        assert_eq!(c.cover_histogram, BTreeMap::from([(1, 95823), (13, 3640)]));
        assert_eq!(c.nilpotent_count, 728);
        assert_eq!(c.special_pairs, 176904);
        assert_eq!(c.steiner_lower_bound, 7651);
        assert_eq!(c.known_cover_upper_bound, 8311);
        // Spot-check table cells against the reference census.
        assert_eq!(c.h_table["U"]["M4"], 9);
        assert_eq!(c.h_table["U"]["S2J2"], 4);
        assert_eq!(c.h_table["Z"]["F2J2"], 3);
        assert_eq!(c.h_table["Z"]["S2J2"], 6);
        assert_eq!(c.h_table["Z"]["F1J3"], 4);
        assert_eq!(c.t_table["Q"]["M4"], 3);
        assert_eq!(c.t_table["M"]["M4"], 6);
        assert_eq!(c.t_table["Dn"]["F2J2"], 12);
        assert_eq!(c.t_table["Ds"]["S2J2"], 6);
        assert_eq!(c.t_table["J"]["F1J3"], 9);
        assert_eq!(c.t_table["U"]["S2J2"], 6);
        assert_eq!(c.t_table["Z"]["F1J3"], 4);
    }

    #[test]
    fn census_polynomials_are_consistent_at_q5() {
        // The constructor asserts the double-counting identity and both
        // Gaussian totals internally; evaluate and check the headline values.
        let c = expected_census(5);
        assert_eq!(c.total_planes, 12_714_681);
        assert_eq!(c.total_blocks, 508_431);
        assert_eq!(c.theta["Z"], 3906);
        assert_eq!(c.n_blocks["F1J3"], 3906);
        assert_eq!(c.cover_histogram[&1], 12_613_125);
        assert_eq!(c.cover_histogram[&31], 101_556);
    }

    /// A report whose every cell equals the polynomial expectation — lets the
    /// comparator be tested without re-running the enumeration.
    fn synthetic_report(c: &ExpectedCensus) -> DesignReport {
        DesignReport {
            q: c.q,
            theta: c.theta.clone(),
            n_blocks: c.n_blocks.clone(),
            h_table: c.h_table.clone(),
            t_table: c.t_table.clone(),
            cover_histogram: c.cover_histogram.clone(),
            minimal: true,
            fano: false,
            nilpotent_count: c.nilpotent_count,
            special_pairs: c.special_pairs,
        }
    }

    #[test]
    fn census_verify_pinpoints_a_corrupted_cell() {
        let census = expected_census(3);
        let good = synthetic_report(&census);
        assert_eq!(census.verify(&good), Ok(()));

        let mut bad = good.clone();
        *bad.theta.get_mut("Dn").unwrap() += 1;
        let msg = census.verify(&bad).unwrap_err();
        assert!(msg.contains("theta[Dn]"), "unexpected message: {msg}");

        let mut bad = good.clone();
        bad.fano = true;
        assert!(census.verify(&bad).unwrap_err().contains("Fano"));

        let mut bad = good;
        bad.cover_histogram.insert(2, 1);
        assert!(census.verify(&bad).unwrap_err().contains("histogram"));
    }

    #[test]
    fn budget_gate_accepts_3_and_gates_5_and_rejects_the_rest() {
        assert!(check_budget(3, false).is_ok());
        assert!(check_budget(5, true).is_ok());
        let gate5 = check_budget(5, false).unwrap_err();
        assert_eq!(gate5.exit_code(), EXIT_BUDGET);
        let composite = check_budget(9, true).unwrap_err();
        assert_eq!(composite.exit_code(), EXIT_BUDGET);
        let big_prime = check_budget(7, true).unwrap_err();
        assert_eq!(big_prime.exit_code(), EXIT_BUDGET);
        let even = check_budget(2, true).unwrap_err();
        assert_eq!(even.exit_code(), EXIT_USAGE);
        let one = check_budget(1, true).unwrap_err();
        assert_eq!(one.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn field_specs_parse_to_the_right_descriptors() {
        assert_eq!(parse_field_spec("q").unwrap(), FieldDescriptor::rational());
        assert_eq!(parse_field_spec("5").unwrap(), FieldDescriptor::prime(5).unwrap());
        assert_eq!(
            parse_field_spec("ff:5").unwrap(),
            FieldDescriptor::function_over_prime(5).unwrap()
        );
        assert_eq!(
            parse_field_spec("qf").unwrap(),
            FieldDescriptor::function_over_rationals()
        );
        for bad in ["9", "2", "ff:9", "ff:x", "fancy"] {
            assert_eq!(parse_field_spec(bad).unwrap_err().exit_code(), EXIT_USAGE, "{bad}");
        }
    }

    #[test]
    fn params_argument_splits_into_exactly_three_entries() {
        assert_eq!(
            split_params_arg("-1, 1, 2").unwrap(),
            ["-1".to_string(), "1".to_string(), "2".to_string()]
        );
        assert!(split_params_arg("1,2").is_err());
        assert!(split_params_arg("1,2,3,4").is_err());
        assert!(split_params_arg("1,,3").is_err());
    }

    #[test]
    fn zero_parameters_are_a_usage_error() {
        let mut cfg = RunConfig::new(Command::Tables);
        cfg.params = ["0".into(), "1".into(), "1".into()];
        assert_eq!(run(&cfg), EXIT_USAGE);
    }

    #[test]
    fn unsupported_orders_exit_with_the_budget_code() {
        let mut cfg = RunConfig::new(Command::Tables);
        cfg.q = 9;
        assert_eq!(run(&cfg), EXIT_BUDGET);
        cfg.q = 5;
        assert_eq!(run(&cfg), EXIT_BUDGET);
        let mut cfg = RunConfig::new(Command::Crosscheck);
        cfg.q = 7;
        assert_eq!(run(&cfg), EXIT_BUDGET);
    }

    #[test]
    fn classify_matches_the_reference_split_basis_examples() {
        let mut cfg = RunConfig::new(Command::Classify);
        cfg.split = true;
        cfg.u = Some("q1".into());
        cfg.v = Some("r2".into());
        let d = classify_detail(&cfg).unwrap();
        assert_eq!(d.summary, "Z, dim3");
        assert_eq!(d.subalgebra_kind, "DIM3_Z");
        assert_eq!(d.radical_dim, 2);

        cfg.v = Some("q2".into());
        let d = classify_detail(&cfg).unwrap();
        assert_eq!(d.summary, "J, dim4, F1J3");
        assert_eq!(d.radical_dim, 3);
    }

    #[test]
    fn classify_rejects_dependent_or_non_imaginary_input() {
        let mut cfg = RunConfig::new(Command::Classify);
        cfg.u = Some("e0".into());
        cfg.v = Some("e0".into());
        assert_eq!(run(&cfg), EXIT_USAGE);

        cfg.v = Some("1 + e1".into());
        let err = classify_detail(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.to_string().contains("imaginary"));

        cfg.u = Some("e0 - e0".into());
        cfg.v = Some("e1".into());
        let err = classify_detail(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn classify_handles_general_parameters_and_coordinates() {
        let mut cfg = RunConfig::new(Command::Classify);
        cfg.field = "3".into();
        cfg.params = ["-1".into(), "-1".into(), "-1".into()];
        cfg.u = Some("e0".into());
        cfg.v = Some("e1".into());
        let d = classify_detail(&cfg).unwrap();
        // Over F_3 with these parameters e0, e1 generate a quaternion block.
        assert_eq!(d.plane_type, "Q");
        assert_eq!(d.closure_dim, 4);
        assert_eq!(d.subalgebra_kind, "M4");
        assert_eq!(d.radical_dim, 0);
    }

    #[test]
    fn fano_check_rejects_unknown_field_specs_and_accepts_zero_samples() {
        let mut cfg = RunConfig::new(Command::FanoCheck);
        cfg.field = "5".into();
        assert_eq!(run(&cfg), EXIT_USAGE);
        cfg.field = "ff:9".into();
        assert_eq!(run(&cfg), EXIT_USAGE);

        let mut cfg = RunConfig::new(Command::FanoCheck);
        cfg.field = "q".into();
        cfg.samples = 0;
        cfg.out = Some(std::env::temp_dir().join("cayleyq-fano-vacuous.json"));
        assert_eq!(run(&cfg), EXIT_OK);
        let body = std::fs::read_to_string(cfg.out.as_ref().unwrap()).unwrap();
        assert!(body.contains("\"schema\": 1"));
        assert!(body.contains("\"ok\": true"));
    }

    #[test]
    fn fano_check_samples_over_the_rationals_and_reports_the_seed() {
        let mut cfg = RunConfig::new(Command::FanoCheck);
        cfg.field = "q".into();
        cfg.samples = 20;
        cfg.seed = 42;
        cfg.out = Some(std::env::temp_dir().join("cayleyq-fano-q20.json"));
        assert_eq!(run(&cfg), EXIT_OK);
        let body = std::fs::read_to_string(cfg.out.as_ref().unwrap()).unwrap();
        assert!(body.contains("\"seed\": 42"));
        assert!(body.contains("\"samples\": 20"));
        assert!(body.contains("\"uniqueness_structural\": true"));
    }

    #[test]
    fn thread_override_runs_the_closure_in_a_dedicated_pool() {
        let inside = with_threads(2, rayon::current_num_threads);
        assert_eq!(inside, 2);
        let default_pool = with_threads(0, rayon::current_num_threads);
        assert!(default_pool >= 1);
    }
}
