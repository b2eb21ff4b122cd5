use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use opme::selftest::{self, Scale, CRITERIA};
use opme::{corpus, OpIndex, ParamsBuilder, QueryResult};
use thiserror::Error;

/// Order-preserving pattern matching over a compact encoding index.
#[derive(Debug, Parser)]
#[command(name = "opme", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an index from a corpus and print its statistics.
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Exponent c as an integer, fraction (3/2) or decimal (1.5).
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        threshold: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Answer patterns against a saved index, one TSV line each.
    Query {
        index: PathBuf,
        /// Patterns as whitespace-separated integers ("2 3 1 2"). Read one per
        /// line from --patterns-file or stdin when absent.
        patterns: Vec<String>,
        #[arg(long)]
        patterns_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Locate)]
        mode: Mode,
    },
    /// Write a reproducible random corpus.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw pairwise distinct characters instead (needs sigma >= n).
        #[arg(long)]
        no_ties: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
        /// Run only these criteria (1-8).
        #[arg(long, value_delimiter = ',')]
        criterion: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Count,
    Locate,
    Scan,
    BothPaths,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io { .. } => 2,
            Failure::Format(_) => 3,
            Failure::Check(_) => 4,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |source| Failure::Io { path: path.display().to_string(), source }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let out = io::stdout();
    let mut out = out.lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("opme: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> CliResult<()> {
    match command {
        Command::Build { input, output, c, sample, threshold, ell, format } => {
            build(&input, &output, &c, sample, threshold, ell, format, out)
        }
        Command::Query { index, patterns, patterns_file, mode } => query(&index, patterns, patterns_file, mode, out),
        Command::Gen { n, sigma, seed, no_ties, output, format } => gen(n, sigma, seed, !no_ties, output, format, out),
        Command::Selftest { quick, full, criterion } => {
            let scale = if quick {
                Scale::Quick
            } else if full {
                Scale::Full
            } else {
                Scale::Standard
            };
            run_selftest(scale, &criterion, out)
        }
    }
    .or_else(|e| match e {
        // a closed pipe downstream is not our failure
        Failure::Io { ref source, .. } if source.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        e => Err(e),
    })
}

fn stdout_error(source: io::Error) -> Failure {
    Failure::Io { path: "stdout".into(), source }
}

/// `"2"`, `"3/2"` or `"1.5"` as a fraction.
fn parse_exponent(s: &str) -> CliResult<(u64, u64)> {
    let bad = || Failure::Usage(format!("--c {s:?} is not a positive number"));
    let (num, den) = if let Some((a, b)) = s.split_once('/') {
        (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
    } else if let Some((a, b)) = s.split_once('.') {
        if b.len() > 6 || !b.chars().all(|ch| ch.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(b.len() as u32);
        let whole: u64 = if a.is_empty() { 0 } else { a.parse().map_err(|_| bad())? };
        let frac: u64 = if b.is_empty() { 0 } else { b.parse().map_err(|_| bad())? };
        (whole * den + frac, den)
    } else {
        (s.trim().parse().map_err(|_| bad())?, 1)
    };
    if num == 0 || den == 0 {
        return Err(bad());
    }
    Ok((num, den))
}

/// Fingerprint seed from `OPME_SEED`, decimal or `0x` hexadecimal.
fn env_seed() -> CliResult<Option<u64>> {
    let Ok(raw) = std::env::var("OPME_SEED") else { return Ok(None) };
    let raw = raw.trim();
    let parsed = match raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => raw.replace('_', "").parse(),
    };
    parsed.map(Some).map_err(|_| Failure::Usage(format!("OPME_SEED={raw:?} is not a u64")))
}

fn read_corpus(path: &Path, format: Format) -> CliResult<Vec<u64>> {
    let bytes = fs::read(path).map_err(io_error(path))?;
    let parsed = match format {
        Format::Text => {
            let text =
                String::from_utf8(bytes).map_err(|_| Failure::Format(format!("{}: not UTF-8", path.display())))?;
            corpus::parse_text(&text)
        }
        Format::Binary => corpus::parse_binary(&bytes),
    };
    parsed.map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn build(
    input: &Path,
    output: &Path,
    c: &str,
    sample: Option<usize>,
    threshold: Option<usize>,
    ell: Option<usize>,
    format: Format,
    out: &mut impl Write,
) -> CliResult<()> {
    let (c_num, c_den) = parse_exponent(c)?;
    let seed = env_seed()?;
    let text = read_corpus(input, format)?;
    if text.len() < 2 {
        return Err(Failure::Format(format!("{}: {} characters, need at least 2", input.display(), text.len())));
    }
    let mut builder = ParamsBuilder::new().c(c_num, c_den);
    if let Some(s) = sample {
        builder = builder.sample(s);
    }
    if let Some(t) = threshold {
        builder = builder.occ_threshold(t);
    }
    if let Some(l) = ell {
        builder = builder.ell(l);
    }
    if let Some(s) = seed {
        builder = builder.seed(s);
    }
    let params = builder.build(text.len()).map_err(|e| Failure::Usage(e.to_string()))?;
    let start = Instant::now();
    let idx = OpIndex::build(&text, params).map_err(|e| Failure::Format(e.to_string()))?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    fs::write(output, idx.to_bytes()).map_err(io_error(output))?;

    let stats = idx.stats();
    let sampled = idx.sampled_positions();
    let mut report =
        format!("c\t{c_num}/{c_den}\nseed\t{:#x}\nmax_pattern_len\t{}\n", params.seed, params.max_pattern_len());
    report.push_str(&format!("{stats}\n"));
    if sampled.len() <= 64 {
        let list: Vec<String> = sampled.iter().map(usize::to_string).collect();
        report.push_str(&format!("sampled_positions\t{}\n", list.join(" ")));
    }
    report.push_str(&format!("build_ms\t{build_ms:.1}\n"));
    out.write_all(report.as_bytes()).map_err(stdout_error)
}

fn load_index(path: &Path) -> CliResult<OpIndex> {
    let bytes = fs::read(path).map_err(io_error(path))?;
    OpIndex::from_bytes(&bytes).map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
}

fn query(
    index: &Path,
    patterns: Vec<String>,
    patterns_file: Option<PathBuf>,
    mode: Mode,
    out: &mut impl Write,
) -> CliResult<()> {
    let idx = load_index(index)?;
    let lines: Vec<String> = if let Some(path) = &patterns_file {
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        text.lines().map(str::to_owned).collect()
    } else if patterns.is_empty() {
        io::stdin().lock().lines().collect::<io::Result<_>>().map_err(io_error(Path::new("stdin")))?
    } else {
        patterns
    };
    writeln!(out, "pattern\tcount\tposition\tns").map_err(stdout_error)?;
    for line in lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let pattern = corpus::parse_text(line).map_err(|e| {
            let msg = format!("pattern {line:?}: {e}");
            if patterns_file.is_some() {
                Failure::Format(msg)
            } else {
                Failure::Usage(msg)
            }
        })?;
        let shown = line.split_whitespace().collect::<Vec<_>>().join(" ");
        let start = Instant::now();
        let answer = answer(&idx, &pattern, mode);
        let ns = start.elapsed().as_nanos();
        match answer {
            Ok((count, position)) => writeln!(out, "{shown}\t{count}\t{position}\t{ns}"),
            Err(Answer::Rejected(e)) => writeln!(out, "{shown}\tERROR\t{e}\t{ns}"),
            Err(Answer::Disagree(msg)) => {
                writeln!(out, "{shown}\tMISMATCH\t{msg}\t{ns}").map_err(stdout_error)?;
                return Err(Failure::Check(format!("fast and slow paths disagree on {shown:?}: {msg}")));
            }
        }
        .map_err(stdout_error)?;
    }
    Ok(())
}

enum Answer {
    Rejected(opme::Error),
    Disagree(String),
}

fn position(r: &QueryResult) -> String {
    r.position.map_or_else(|| "-".into(), |p| p.to_string())
}

/// (count, position column) in the requested mode.
fn answer(idx: &OpIndex, pattern: &[u64], mode: Mode) -> Result<(usize, String), Answer> {
    match mode {
        Mode::Count => idx.count(pattern).map(|c| (c, "-".into())).map_err(Answer::Rejected),
        Mode::Locate => idx.query_fast(pattern).map(|r| (r.count, position(&r))).map_err(Answer::Rejected),
        Mode::Scan => idx
            .scan_all(pattern)
            .map(|hits| {
                let list = if hits.is_empty() {
                    "-".into()
                } else {
                    hits.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                };
                (hits.len(), list)
            })
            .map_err(Answer::Rejected),
        Mode::BothPaths => {
            let fast = idx.query_fast(pattern).map_err(Answer::Rejected)?;
            let slow = idx.query_slow(pattern).map_err(Answer::Rejected)?;
            // positions may differ; each must be a real occurrence
            let verified = |r: &QueryResult| {
                r.position.map_or(r.count == 0, |p| idx.scan_all(pattern).is_ok_and(|hits| hits.contains(&p)))
            };
            if fast.count != slow.count || !verified(&fast) || !verified(&slow) {
                return Err(Answer::Disagree(format!(
                    "fast {}@{}, slow {}@{}",
                    fast.count,
                    position(&fast),
                    slow.count,
                    position(&slow)
                )));
            }
            Ok((fast.count, position(&fast)))
        }
    }
}

fn gen(
    n: usize,
    sigma: u64,
    seed: u64,
    ties: bool,
    output: Option<PathBuf>,
    format: Format,
    out: &mut impl Write,
) -> CliResult<()> {
    let text = corpus::generate(n, sigma, seed, ties).map_err(|e| Failure::Usage(e.to_string()))?;
    let bytes = match format {
        Format::Text => corpus::to_text(&text).into_bytes(),
        Format::Binary => corpus::to_binary(&text),
    };
    match output {
        Some(path) => fs::write(&path, bytes).map_err(io_error(&path)),
        None => out.write_all(&bytes).map_err(stdout_error),
    }
}

fn run_selftest(scale: Scale, only: &[usize], out: &mut impl Write) -> CliResult<()> {
    let ids: Vec<usize> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    let mut failed = 0;
    for &id in &ids {
        let outcome = selftest::run(id, scale).ok_or_else(|| Failure::Usage(format!("no criterion {id}")))?;
        writeln!(out, "{outcome}").map_err(stdout_error)?;
        out.flush().map_err(stdout_error)?;
        failed += usize::from(!outcome.passed);
    }
    writeln!(out, "{} of {} criteria passed", ids.len() - failed, ids.len()).map_err(stdout_error)?;
    if failed > 0 {
        return Err(Failure::Check(format!("{failed} criteria failed")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        assert_eq!(parse_exponent("1").unwrap(), (1, 1));
        assert_eq!(parse_exponent("3/2").unwrap(), (3, 2));
        assert_eq!(parse_exponent("1.5").unwrap(), (15, 10));
        assert_eq!(parse_exponent("2.").unwrap(), (2, 1));
        for bad in ["0", "x", "1/0", "-1", "1.x", ""] {
            assert!(parse_exponent(bad).is_err(), "{bad}");
        }
    }
}
