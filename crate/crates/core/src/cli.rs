//! The `gaplab` command line.
//!
//! Exit codes: 0 on success (and when a verified claim holds), 1 when a
//! verification finds violations, 2 on usage, configuration or runtime errors.
//! Results go to stdout (or `--out`); diagnostics go to stderr.

use std::fs;
use std::io::{self, Write};
use std::num::NonZeroU32;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{BoundKind, BoundValue};
use crate::gaps::{self, format_sig17, GapError, MeritKind, MeritScan, DEFAULT_ULTRA_EPSILONS};
use crate::scan::ScanConfig;
use crate::sieve::{DEFAULT_SEGMENT_SIZE, VALUE_LIMIT};
use crate::verifier::{self, Claim, VerificationReport, VerifyError};

/// Environment variable overriding `sieve.segment_size`.
pub const SEGMENT_SIZE_ENV: &str = "GAPLAB_SEGMENT_SIZE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {msg}")]
    Config { path: PathBuf, msg: String },
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Gap(#[from] GapError),
    #[error(transparent)]
    Bounds(#[from] crate::bounds::BoundsError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(name = "gaplab", version, about = "Prime gaps and exhaustive checks of prime-count bounds on (n, 2n)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default, Clone)]
pub struct GlobalOpts {
    /// Config file with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Candidates per sieve segment.
    #[arg(long, global = true, value_parser = parse_int)]
    pub segment_size: Option<u64>,
    /// Integers per work chunk.
    #[arg(long, global = true, value_parser = parse_int)]
    pub chunk_size: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub parallelism: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args, Clone)]
pub struct OutputOpts {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of primes strictly between A and B.
    Count {
        #[arg(value_parser = parse_int)]
        a: u64,
        #[arg(value_parser = parse_int)]
        b: u64,
    },
    /// Check a claim at every n (or every gap) of a range.
    Verify {
        /// trost | bertrand | cor2 | prop1:K[:N] | prop2:K[:N] | prop3[:C] | bhp | gap:KIND:BOUND
        claim: String,
        #[arg(long, default_value = "2", value_parser = parse_int)]
        from: u64,
        #[arg(long, value_parser = parse_int)]
        to: u64,
        /// Report wall_time_ms as 0 so that reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Last gap with √p_next − √p_prev ≥ 1/K, and N_K.
    Threshold {
        k: NonZeroU32,
        #[arg(long, value_parser = parse_int)]
        limit: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Largest gap merits and the running-record trace.
    Merits {
        /// sqrt | cramer | bhp | ultra
        #[arg(long)]
        kind: String,
        /// ε for ultra; defaults to scanning 0.1, 0.25 and 0.5.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_parser = parse_int)]
        limit: u64,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// All six bound values at one n.
    Bounds {
        #[arg(long, value_parser = parse_int)]
        n: u64,
        #[arg(long, default_value = "1")]
        k: NonZeroU32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Largest gap / ln²(p_next) and the smallest integer constant above it.
    Calibrate {
        #[arg(long, value_parser = parse_int)]
        limit: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Check that [x − ⌊x^0.525⌋, x] holds a prime for every x in a range.
    BhpScan {
        #[arg(long, default_value = "2", value_parser = parse_int)]
        from: u64,
        #[arg(long, value_parser = parse_int)]
        to: u64,
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
}

/// Integers written plainly, with `_` separators, as `10^7`, or as `1e7`.
pub fn parse_int(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    let pow = |base: &str, exp: &str| -> Option<u64> {
        let base: u64 = base.parse().ok()?;
        let exp: u32 = exp.parse().ok()?;
        base.checked_pow(exp)
    };
    let parsed = if let Some((b, e)) = s.split_once('^') {
        pow(b, e)
    } else if let Some((m, e)) = s.split_once(['e', 'E']) {
        pow("10", e).and_then(|p| m.parse::<u64>().ok()?.checked_mul(p))
    } else {
        s.parse().ok()
    };
    parsed.ok_or_else(|| format!("`{s}` is not a non-negative integer"))
}

/// Settings from an optional `key = value` file, the environment and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scan: ScanConfig,
    pub format: Option<Format>,
}

impl RunConfig {
    /// Precedence: flag, then environment, then config file, then default.
    pub fn resolve(global: &GlobalOpts) -> Result<RunConfig, CliError> {
        let mut segment_size = DEFAULT_SEGMENT_SIZE;
        let mut chunk_size = None;
        let mut parallelism = 0;
        let mut format = None;
        if let Some(path) = &global.config {
            let text = fs::read_to_string(path).map_err(|e| config_err(path, e.to_string()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| config_err(path, format!("line {}: expected key = value", lineno + 1)))?;
                let value = value.trim();
                let bad = |m: String| config_err(path, format!("line {}: {m}", lineno + 1));
                match key.trim() {
                    "sieve.segment_size" => segment_size = parse_int(value).map_err(bad)?,
                    "chunk_size" => chunk_size = Some(parse_int(value).map_err(bad)?),
                    "parallelism" => parallelism = value.parse().map_err(|_| bad(format!("bad parallelism `{value}`")))?,
                    "format" => {
                        format = Some(Format::from_str(value, true).map_err(|_| bad(format!("bad format `{value}`")))?)
                    }
                    other => return Err(bad(format!("unknown key `{other}`"))),
                }
            }
        }
        if let Ok(v) = std::env::var(SEGMENT_SIZE_ENV) {
            segment_size = parse_int(&v).map_err(|m| CliError::Usage(format!("{SEGMENT_SIZE_ENV}: {m}")))?;
        }
        segment_size = global.segment_size.unwrap_or(segment_size);
        parallelism = global.parallelism.unwrap_or(parallelism);
        let chunk_size = global.chunk_size.or(chunk_size).unwrap_or(segment_size);
        if segment_size < 64 {
            return Err(CliError::Usage(format!("segment size {segment_size} is below the minimum of 64")));
        }
        if chunk_size == 0 {
            return Err(CliError::Usage("chunk size must be positive".into()));
        }
        let scan = ScanConfig::default()
            .with_segment_size(segment_size)
            .with_chunk_size(chunk_size)
            .with_parallelism(parallelism);
        Ok(RunConfig { scan, format })
    }
}

fn config_err(path: &Path, msg: String) -> CliError {
    CliError::Config { path: path.to_path_buf(), msg }
}

/// Parses a claim string; `prop1:K` without `N` takes `N_K` from a threshold
/// scan up to `2·n_hi`.
pub fn parse_claim(text: &str, n_hi: u64, scan: &ScanConfig) -> Result<Claim, CliError> {
    let usage = || CliError::Usage(format!("unrecognized claim `{text}`"));
    let int = |s: &str| parse_int(s).map_err(CliError::Usage);
    let k_of = |s: &str| -> Result<NonZeroU32, CliError> {
        s.parse().map_err(|_| CliError::Usage(format!("k must be a positive integer, got `{s}`")))
    };
    if let Some(rest) = text.strip_prefix("gap:") {
        let (kind, bound) = rest.rsplit_once(':').ok_or_else(usage)?;
        let kind: MeritKind = kind.parse()?;
        let bound: f64 = bound.parse().map_err(|_| CliError::Usage(format!("bad gap bound `{bound}`")))?;
        return Ok(Claim::GapCondition { kind, bound });
    }
    let parts: Vec<&str> = text.split(':').collect();
    Ok(match parts.as_slice() {
        ["trost"] => Claim::Trost,
        ["bertrand"] => Claim::Bertrand,
        ["cor2"] => Claim::Cor2,
        ["bhp"] => Claim::BhpWindow,
        ["prop3"] => Claim::Prop3 { c: 0 },
        ["prop3", c] => Claim::Prop3 { c: int(c)? },
        ["prop2", k] => Claim::Prop2 { k: k_of(k)?, n: 2 },
        ["prop2", k, n] => Claim::Prop2 { k: k_of(k)?, n: int(n)? },
        ["prop1", k, n] => Claim::Prop1 { k: k_of(k)?, n_k: int(n)? },
        ["prop1", k] => {
            let k = k_of(k)?;
            let limit = n_hi.saturating_mul(2).clamp(3, VALUE_LIMIT - 1);
            let t = gaps::find_threshold_with(scan, k, limit)?;
            log::info!("prop1:{k}: N_{k} = {} from gaps up to {limit}", t.n_k);
            Claim::Prop1 { k, n_k: t.n_k }
        }
        _ => return Err(usage()),
    })
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    let scan = &cfg.scan;
    match &cli.command {
        Command::Count { a, b } => {
            if *b >= VALUE_LIMIT {
                return Err(CliError::Usage(format!("{b} is not below 2^63")));
            }
            if a > b {
                return Err(CliError::Usage(format!("need a ≤ b, got {a} > {b}")));
            }
            writeln!(stdout, "{}", scan.sieve.count_primes_open(*a, *b))?;
            Ok(0)
        }
        Command::Verify { claim, from, to, no_timing, output } => {
            if from > to || *from < 2 {
                return Err(CliError::Usage(format!("need 2 ≤ --from ≤ --to, got [{from}, {to}]")));
            }
            let claim = parse_claim(claim, *to, scan)?;
            let report = verifier::verify_claim_with(scan, claim, *from, *to)?;
            emit_report(report, *no_timing, output, cfg.format, stdout)
        }
        Command::BhpScan { from, to, no_timing, output } => {
            if from > to || *from < 2 {
                return Err(CliError::Usage(format!("need 2 ≤ --from ≤ --to, got [{from}, {to}]")));
            }
            let report = verifier::verify_claim_with(scan, Claim::BhpWindow, *from, *to)?;
            emit_report(report, *no_timing, output, cfg.format, stdout)
        }
        Command::Threshold { k, limit, output } => {
            let t = gaps::find_threshold_with(scan, *k, *limit)?;
            write_output(output, cfg.format.unwrap_or(Format::Table), stdout, |w, format| match format {
                Format::Json => json_line(w, &t),
                Format::Csv => {
                    let mut c = csv::Writer::from_writer(w);
                    c.write_record(["k", "p_prev", "p_next", "n_k", "scanned_up_to"])?;
                    let (a, b) = t.last_violation.map_or((String::new(), String::new()), |g| {
                        (g.p_prev.to_string(), g.p_next.to_string())
                    });
                    c.write_record([t.k.to_string(), a, b, t.n_k.to_string(), t.scanned_up_to.to_string()])?;
                    c.flush()?;
                    Ok(())
                }
                Format::Table => {
                    match t.last_violation {
                        Some(g) => writeln!(w, "N_{} = {}, last violation {}", t.k, t.n_k, g)?,
                        None => writeln!(w, "N_{} = {}, no violation", t.k, t.n_k)?,
                    }
                    writeln!(w, "scanned gaps with p_next <= {}", t.scanned_up_to)?;
                    Ok(())
                }
            })?;
            Ok(0)
        }
        Command::Merits { kind, epsilon, limit, top, output } => {
            let kinds = merit_kinds(kind, *epsilon)?;
            let scans = kinds
                .into_iter()
                .map(|k| gaps::merit_scan_with(scan, *limit, k, *top))
                .collect::<Result<Vec<_>, _>>()?;
            write_output(output, cfg.format.unwrap_or(Format::Table), stdout, |w, format| {
                write_merits(w, format, &scans)
            })?;
            Ok(0)
        }
        Command::Bounds { n, k, output } => {
            let rows = BoundKind::all(*k)
                .iter()
                .map(|b| Ok((b.name(), b.evaluate(*n)?)))
                .collect::<Result<Vec<(&str, BoundValue)>, CliError>>()?;
            write_output(output, cfg.format.unwrap_or(Format::Table), stdout, |w, format| match format {
                Format::Json => {
                    let mut map = serde_json::Map::new();
                    map.insert("n".into(), (*n).into());
                    map.insert("k".into(), k.get().into());
                    for (name, v) in &rows {
                        map.insert((*name).into(), serde_json::to_value(v)?);
                    }
                    json_line(w, &map)
                }
                Format::Csv => {
                    let mut c = csv::Writer::from_writer(w);
                    let mut head = vec!["n".to_string(), "k".to_string()];
                    head.extend(rows.iter().map(|(name, _)| name.to_string()));
                    c.write_record(&head)?;
                    let mut vals = vec![n.to_string(), k.to_string()];
                    vals.extend(rows.iter().map(|(_, v)| v.to_string()));
                    c.write_record(&vals)?;
                    c.flush()?;
                    Ok(())
                }
                Format::Table => {
                    writeln!(w, "n = {n}, k = {k}")?;
                    for (name, v) in &rows {
                        writeln!(w, "{name:<12} {v}")?;
                    }
                    Ok(())
                }
            })?;
            Ok(0)
        }
        Command::Calibrate { limit, output } => {
            let c = gaps::calibrate_cramer_with(scan, *limit)?;
            write_output(output, cfg.format.unwrap_or(Format::Table), stdout, |w, format| match format {
                Format::Json => json_line(w, &c),
                Format::Csv => {
                    let mut cw = csv::Writer::from_writer(w);
                    cw.write_record(["max_ratio", "min_integer_k", "p_prev", "p_next", "scanned_up_to"])?;
                    cw.write_record([
                        format_sig17(c.max_ratio),
                        c.min_integer_k.to_string(),
                        c.at.p_prev.to_string(),
                        c.at.p_next.to_string(),
                        c.scanned_up_to.to_string(),
                    ])?;
                    cw.flush()?;
                    Ok(())
                }
                Format::Table => {
                    writeln!(w, "max_ratio = {} at {}", format_sig17(c.max_ratio), c.at)?;
                    writeln!(w, "min_integer_k = {}", c.min_integer_k)?;
                    writeln!(w, "scanned gaps with p_next <= {}", c.scanned_up_to)?;
                    Ok(())
                }
            })?;
            Ok(0)
        }
    }
}

fn merit_kinds(kind: &str, epsilon: Option<f64>) -> Result<Vec<MeritKind>, CliError> {
    Ok(match (kind, epsilon) {
        ("ultra", Some(eps)) => vec![MeritKind::Ultra(eps).validate()?],
        ("ultra", None) => DEFAULT_ULTRA_EPSILONS.iter().map(|&e| MeritKind::Ultra(e)).collect(),
        (_, Some(_)) => return Err(CliError::Usage("--epsilon only applies to --kind ultra".into())),
        (other, None) => vec![other.parse()?],
    })
}

fn emit_report(
    mut report: VerificationReport,
    no_timing: bool,
    output: &OutputOpts,
    default_format: Option<Format>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    if no_timing {
        report.wall_time_ms = 0;
    }
    log::info!(
        "{}: {} rows, {} violations, {} out of premise",
        report.claim.name(),
        report.rows_checked,
        report.violations.len(),
        report.out_of_premise.len()
    );
    write_output(output, default_format.unwrap_or(Format::Json), stdout, |w, format| match format {
        Format::Json => json_line(w, &report),
        Format::Csv => Ok(report.write_csv(w)?),
        Format::Table => write_report_table(w, &report),
    })?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn write_report_table(w: &mut dyn Write, r: &VerificationReport) -> Result<(), CliError> {
    writeln!(w, "claim        {}", serde_json::to_string(&r.claim)?)?;
    writeln!(w, "range        [{}, {}]", r.range.0, r.range.1)?;
    writeln!(w, "rows checked {}", r.rows_checked)?;
    writeln!(w, "violations   {}", r.violations.len())?;
    writeln!(w, "out of premise {}", r.out_of_premise.len())?;
    match r.minimal_valid_n {
        Some(n) => writeln!(w, "minimal valid n {n}")?,
        None => writeln!(w, "minimal valid n -")?,
    }
    for (row, premise) in r.failing_rows() {
        let tag = if premise { "violation" } else { "out-of-premise" };
        match row.p_prev {
            Some(prev) => writeln!(
                w,
                "  {tag:<15} ({prev}, {}) gap {} merit {} bound {}",
                row.n,
                row.actual,
                format_sig17(row.merit.unwrap_or_default()),
                row.bound
            )?,
            None => writeln!(w, "  {tag:<15} n {} actual {} bound {}", row.n, row.actual, row.bound)?,
        }
    }
    Ok(())
}

fn write_merits(w: &mut dyn Write, format: Format, scans: &[MeritScan]) -> Result<(), CliError> {
    match format {
        Format::Json => json_line(w, &scans),
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["merit_kind", "section", "rank", "p_prev", "p_next", "gap", "value", "scanned_up_to"])?;
            for s in scans {
                let sections = [("top", &s.top), ("record", &s.records)];
                for (name, rows) in sections {
                    for (i, (g, v)) in rows.iter().enumerate() {
                        c.write_record([
                            s.merit_kind.to_string(),
                            name.to_string(),
                            (i + 1).to_string(),
                            g.p_prev.to_string(),
                            g.p_next.to_string(),
                            g.gap.to_string(),
                            format_sig17(*v),
                            s.scanned_up_to.to_string(),
                        ])?;
                    }
                }
            }
            c.flush()?;
            Ok(())
        }
        Format::Table => {
            for s in scans {
                writeln!(w, "# {} merit, gaps with p_next <= {}", s.merit_kind, s.scanned_up_to)?;
                writeln!(w, "{:>4} {:>20} {:>20} {:>6} {:>24}", "rank", "p_prev", "p_next", "gap", "value")?;
                for (i, (g, v)) in s.top.iter().enumerate() {
                    writeln!(w, "{:>4} {:>20} {:>20} {:>6} {:>24}", i + 1, g.p_prev, g.p_next, g.gap, format_sig17(*v))?;
                }
                writeln!(w, "# running records")?;
                for (g, v) in &s.records {
                    writeln!(w, "     {:>20} {:>20} {:>6} {:>24}", g.p_prev, g.p_next, g.gap, format_sig17(*v))?;
                }
            }
            Ok(())
        }
    }
}

fn json_line<T: Serialize + ?Sized>(w: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn write_output<F>(output: &OutputOpts, default: Format, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write, Format) -> Result<(), CliError>,
{
    let format = output.format.unwrap_or(default);
    match &output.out {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            body(&mut file, format)?;
            file.flush()?;
            Ok(())
        }
        None => body(stdout, format),
    }
}
