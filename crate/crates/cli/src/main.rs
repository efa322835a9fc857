//! `rule150` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 arithmetic overflow. Every failure prints one line on stderr:
//! `error: kind=<kind> code=<code> <message>`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rule150::bench::{self, measure_scaling, ScalingPoint};
use rule150::blocks::{self, block_sum, detrend_offset, fibonacci};
use rule150::eca::{RuleNumber, SpaceTimeGrid};
use rule150::replication::parse_rule;
use rule150::spin::{activity_closed_form_with, chi_closed};
use rule150::verify::{cross_check, VerifyConfig};
use rule150::{Error, Method};

/// Largest number of values `rule` will materialise.
const MAX_RULE_OUTPUT: usize = 1 << 26;
/// `at` with a series-based method builds all of `X(0..=t)`.
const MAX_SERIES_AT: u64 = 1 << 26;
/// Largest `max-n` accepted with `blocksums --detrend`.
const MAX_DETREND_N: u32 = 24;

#[derive(Parser, Debug)]
#[command(
    name = "rule150",
    version,
    about = "Total activity of the single-seeded Rule 150 automaton"
)]
struct Cli {
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Computation route: iteration, closed or simulate.
    #[arg(long, global = true, default_value = "iteration", value_parser = parse_method)]
    method: Method,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// X(0), …, X(count−1) as CSV `t,x`.
    Series {
        #[arg(long)]
        count: usize,
    },
    /// X(t) for a single time index.
    At { t: u64 },
    /// Cross-check iteration, closed form and simulation.
    Verify(VerifyArgs),
    /// Block sums S_n, F_{n+2} and offsets N_n as CSV `n,S,F,N`.
    Blocksums {
        #[arg(long)]
        max_n: u32,
        /// Emit the detrended series for t < 2^max-n instead.
        #[arg(long)]
        detrend: bool,
    },
    /// Run a replication rule such as "a,b -> a,b,3a,2a+b".
    Rule {
        text: String,
        /// One seed per identifier, comma separated; elements of a longer
        /// seed are joined with `:`.
        #[arg(long, allow_hyphen_values = true)]
        seeds: String,
        #[arg(long, default_value_t = 0)]
        gens: u32,
    },
    /// Space-time diagram as a plain PBM image.
    Render {
        #[arg(long, default_value_t = 150)]
        rule: u8,
        #[arg(long)]
        rows: usize,
    },
    /// Time the routes at several sizes and check their doubling ratios.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    max_t: u64,
    /// Defaults to min(max-t, 8192).
    #[arg(long)]
    oracle_max_t: Option<u64>,
    /// Replace χ(n) by a wrong value, as `n=value`.
    #[arg(long, hide = true, value_parser = parse_injection)]
    inject_chi: Option<(u32, u64)>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Sizes for iteration and closed form, powers of two.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Sizes for the simulation; defaults to --sizes.
    #[arg(long, value_delimiter = ',')]
    sim_sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 7)]
    reps: usize,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_injection(s: &str) -> Result<(u32, u64), String> {
    let (n, v) = s.split_once('=').ok_or("expected n=value")?;
    Ok((
        n.trim().parse().map_err(|e| format!("{e}"))?,
        v.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            kind,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(2, "usage", message)
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let (code, kind) = match err {
            Error::Overflow(_) => (3, "overflow"),
            Error::Domain(_) => (2, "domain"),
            Error::Rule(_) => (2, "rule"),
        };
        Failure::new(code, kind, err.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::new(2, "io", err.to_string())
    }
}

type CmdResult = Result<String, Failure>;

fn csv_series<T: std::fmt::Display>(values: &[T]) -> String {
    let mut out = String::from("t,x\n");
    for (t, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{t},{v}");
    }
    out
}

fn cmd_series(method: Method, count: usize) -> CmdResult {
    if count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    Ok(csv_series(&method.series(count)?))
}

fn cmd_at(method: Method, t: u64) -> CmdResult {
    if method != Method::Closed && t >= MAX_SERIES_AT {
        return Err(Failure::new(
            2,
            "domain",
            format!("--method {method} supports t < {MAX_SERIES_AT}; use --method closed"),
        ));
    }
    Ok(format!("t,x\n{t},{}\n", method.at(t)?))
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let oracle = args.oracle_max_t.unwrap_or(args.max_t.min(8192));
    let config = VerifyConfig::new(args.max_t, oracle)?;
    let injected = args.inject_chi;
    let closed = |t| {
        activity_closed_form_with(t, |n| match injected {
            Some((bad_n, value)) if bad_n == n => Ok(value),
            _ => chi_closed(n),
        })
    };
    match cross_check(config, closed)? {
        None => Ok(format!(
            "ok max_t={} oracle_max_t={}\n",
            config.max_t, config.oracle_max_t
        )),
        Some(mismatch) => Err(Failure::new(1, "mismatch", mismatch.to_string())),
    }
}

fn cmd_blocksums(max_n: u32, detrend: bool) -> CmdResult {
    if detrend {
        if max_n > MAX_DETREND_N {
            return Err(Failure::new(
                2,
                "domain",
                format!("--detrend supports max-n up to {MAX_DETREND_N}"),
            ));
        }
        let count = 1usize << max_n;
        let x = Method::Iteration.series(count)?;
        let detrended = blocks::detrended_series(count)?;
        let mut out = String::from("t,x,detrended\n");
        for (t, (x, d)) in x.iter().zip(&detrended).enumerate() {
            let _ = writeln!(out, "{t},{x},{d}");
        }
        return Ok(out);
    }
    let mut out = String::from("n,S,F,N\n");
    for n in 0..=max_n {
        let s = block_sum(n)?;
        let f = fibonacci(n + 2)?;
        let offset = detrend_offset(n)?;
        let _ = writeln!(out, "{n},{s},{f},{offset}");
    }
    Ok(out)
}

fn parse_seeds(text: &str) -> Result<Vec<Vec<i64>>, Failure> {
    text.split(',')
        .map(|seed| {
            seed.split(':')
                .map(|v| {
                    v.trim()
                        .parse::<i64>()
                        .map_err(|e| Failure::usage(format!("bad seed value `{v}`: {e}")))
                })
                .collect()
        })
        .collect()
}

fn cmd_rule(text: &str, seeds: &str, gens: u32) -> CmdResult {
    let rule = parse_rule(text, &parse_seeds(seeds)?).map_err(Error::from)?;
    let seed_total: usize = rule.seeds().iter().map(Vec::len).sum();
    let too_long = 1usize
        .checked_shl(gens)
        .and_then(|g| g.checked_mul(seed_total))
        .is_none_or(|n| n > MAX_RULE_OUTPUT);
    if too_long {
        return Err(Failure::new(
            2,
            "domain",
            format!("{gens} generations exceed the output limit of {MAX_RULE_OUTPUT} values"),
        ));
    }
    Ok(csv_series(&rule.run(gens)?.concatenated()))
}

fn cmd_render(rule: u8, rows: usize) -> CmdResult {
    if rows == 0 {
        return Err(Failure::usage("--rows must be at least 1"));
    }
    Ok(SpaceTimeGrid::new(RuleNumber::new(rule)?, rows)?.to_pbm())
}

fn cmd_bench(
    args: &BenchArgs,
    out: &mut dyn FnMut(&str) -> Result<(), Failure>,
) -> Result<(), Failure> {
    let sim_sizes = args.sim_sizes.as_deref().unwrap_or(&args.sizes);
    bench::validate_sizes(&args.sizes)?;
    bench::validate_sizes(sim_sizes)?;
    if args.reps == 0 {
        return Err(Failure::usage("--reps must be at least 1"));
    }

    let runs = [
        (Method::Iteration, args.sizes.as_slice()),
        (Method::Closed, args.sizes.as_slice()),
        (Method::Simulate, sim_sizes),
    ];
    let mut csv = String::from("method,size,median_ns,doubling_ratio\n");
    let mut violations = Vec::new();
    for (method, sizes) in runs {
        let points = measure_scaling(method, sizes, args.reps)?;
        for p in &points {
            let ratio = p
                .doubling_ratio
                .map(|r| format!("{r:.3}"))
                .unwrap_or_default();
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                method,
                p.size,
                p.median.as_nanos(),
                ratio
            );
        }
        if let Some(violation) = check_band(method, &points) {
            violations.push(violation);
        }
    }
    out(&csv)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(1, "bench", violations.join("; ")))
    }
}

fn check_band(method: Method, points: &[ScalingPoint]) -> Option<String> {
    let band = bench::ratio_band(method)?;
    let last = points.last()?;
    let ratio = last.doubling_ratio?;
    (!band.contains(&ratio)).then(|| {
        format!(
            "{method} doubling ratio {ratio:.3} at size {} outside [{}, {}]",
            last.size,
            band.start(),
            band.end()
        )
    })
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(2, "io", format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let output = cli.output.as_ref();
    let text = match &cli.command {
        Command::Series { count } => cmd_series(cli.method, *count)?,
        Command::At { t } => cmd_at(cli.method, *t)?,
        Command::Verify(args) => cmd_verify(args)?,
        Command::Blocksums { max_n, detrend } => cmd_blocksums(*max_n, *detrend)?,
        Command::Rule { text, seeds, gens } => cmd_rule(text, seeds, *gens)?,
        Command::Render { rule, rows } => cmd_render(*rule, *rows)?,
        Command::Bench(args) => return cmd_bench(args, &mut |csv| emit(output, csv)),
    };
    emit(output, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let rendered = err.to_string();
            let summary = rendered
                .split("\n\n")
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let first = summary.split_whitespace().collect::<Vec<_>>().join(" ");
            eprintln!("error: kind=usage code=2 {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let message = failure.message.replace('\n', " ");
            eprintln!(
                "error: kind={} code={} {message}",
                failure.kind, failure.code
            );
            ExitCode::from(failure.code)
        }
    }
}
