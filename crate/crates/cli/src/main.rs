use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use tirp::{
    generate_synthetic, mine, Constraints, Database, GeneratorParams, MiningConfig, MiningStats,
    Mode, QueryEventSequence, STirpResult, Strategies, TimePoint,
};

/// Targeted mining of time-interval related patterns.
#[derive(Parser)]
#[command(name = "tirp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine the frequent patterns that contain a query event sequence.
    Mine(MineArgs),
    /// Run several algorithm variants on one input and compare them.
    Bench(BenchArgs),
    /// Write a uniformly random database.
    Gen(GenArgs),
}

#[derive(Args)]
struct MiningArgs {
    /// Database file, one sequence per line: `SID|EVENT,START,END ...`.
    #[arg(long)]
    input: PathBuf,
    /// Query events, comma separated (e.g. `A,C`).
    #[arg(long)]
    qes: Option<String>,
    /// Minimum support as a fraction of the database size, in (0, 1].
    #[arg(long)]
    min_sup: f64,
    /// Tolerance for comparing time points.
    #[arg(long, default_value_t = 0)]
    epsilon: TimePoint,
    #[arg(long, default_value_t = 0)]
    min_gap: TimePoint,
    /// Largest gap for a "before" relation; `none` disables the bound.
    #[arg(long, default_value = "30", value_parser = parse_bound)]
    max_gap: Bound,
    #[arg(long, default_value_t = 0)]
    min_dura: TimePoint,
    /// Largest pattern duration; `none` disables the bound.
    #[arg(long, default_value = "2000", value_parser = parse_bound)]
    max_dura: Bound,
    /// Largest number of events per pattern.
    #[arg(long)]
    max_length: Option<usize>,
    /// Worker threads for the pattern search.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    mining: MiningArgs,
    #[arg(long, default_value = "targeted")]
    mode: Mode,
    /// Disable the sequence filter on query containment.
    #[arg(long)]
    no_usfp: bool,
    /// Disable query-aware extension pruning.
    #[arg(long)]
    no_uqpp: bool,
    /// Disable pair-support extension pruning.
    #[arg(long)]
    no_uepp: bool,
    /// Result file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Statistics file; `-` writes to standard error.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    mining: MiningArgs,
    /// Comma-separated variant names.
    #[arg(long, default_value = "fasttirp,fasttirp-post,tatirp1,tatirp2,tatirp12")]
    variants: String,
    /// Comparison table; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1000)]
    sequences: usize,
    #[arg(long, default_value_t = 20)]
    intervals: usize,
    #[arg(long, default_value_t = 100)]
    alphabet: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Interval starts are drawn below this value.
    #[arg(long, default_value_t = 1000)]
    max_time: u64,
    /// Interval durations are drawn from 1 up to this value.
    #[arg(long, default_value_t = 100)]
    max_duration: u64,
    /// Database file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

type Bound = Option<TimePoint>;

fn parse_bound(text: &str) -> Result<Bound, String> {
    match text {
        "none" | "inf" => Ok(None),
        _ => text.parse().map(Some).map_err(|e| format!("{e}; expected an integer or `none`")),
    }
}

impl MiningArgs {
    fn config(&self) -> MiningConfig {
        let constraints = Constraints {
            epsilon: self.epsilon,
            min_gap: self.min_gap,
            max_gap: self.max_gap,
            min_dura: self.min_dura,
            max_dura: self.max_dura,
        };
        MiningConfig {
            max_pattern_length: self.max_length,
            threads: self.threads,
            ..MiningConfig::new(self.min_sup, constraints)
        }
    }

    fn query(&self) -> Result<Option<QueryEventSequence>> {
        self.qes
            .as_deref()
            .map(|q| q.parse().with_context(|| format!("invalid --qes {q:?}")))
            .transpose()
    }

    fn load(&self) -> Result<Database> {
        let file = File::open(&self.input)
            .with_context(|| format!("cannot open --input {}", self.input.display()))?;
        let db = Database::parse(BufReader::new(file))
            .with_context(|| format!("cannot parse --input {}", self.input.display()))?;
        info!(
            "loaded {} sequences, {} intervals, {} events",
            db.len(),
            db.interval_count(),
            db.alphabet().len()
        );
        Ok(db)
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_results(out: &mut dyn Write, results: &[STirpResult]) -> io::Result<()> {
    for r in results {
        writeln!(out, "{}", r.to_line())?;
    }
    out.flush()
}

/// Peak resident set size in kB, read from procfs where available.
fn peak_rss_kb() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn log_peak_rss() {
    match peak_rss_kb() {
        Some(kb) => info!("peak RSS {kb} kB"),
        None => info!("peak RSS unavailable on this platform"),
    }
}

fn run_mine(args: &MineArgs) -> Result<()> {
    let cfg = MiningConfig {
        mode: args.mode,
        strategies: Strategies { usfp: !args.no_usfp, uqpp: !args.no_uqpp, uepp: !args.no_uepp },
        ..args.mining.config()
    };
    cfg.validate()?;
    let query = args.mining.query()?;
    if query.is_none() && cfg.mode != Mode::Full {
        bail!("--qes is required in mode {}", cfg.mode);
    }
    let db = args.mining.load()?;
    let (results, stats) = mine(&db, query.as_ref(), &cfg)?;
    info!("{} patterns in {} ms", results.len(), stats.elapsed.as_millis());
    log_peak_rss();

    write_results(&mut *open_output(args.output.as_deref())?, &results)?;
    match args.stats.as_deref() {
        Some(p) if p == Path::new("-") => eprint!("{}", stats.to_key_values()),
        Some(p) => fs::write(p, stats.to_key_values())
            .with_context(|| format!("cannot write --stats {}", p.display()))?,
        None => {}
    }
    Ok(())
}

fn variant(name: &str) -> Result<(Mode, Strategies)> {
    let uepp_only = Strategies { usfp: false, uqpp: false, uepp: true };
    Ok(match name {
        "fasttirp" => (Mode::Full, uepp_only),
        "fasttirp-post" => (Mode::FullPostFilter, uepp_only),
        "tatirp1" => (Mode::Targeted, Strategies { usfp: true, uqpp: false, uepp: true }),
        "tatirp2" => (Mode::Targeted, Strategies { usfp: false, uqpp: true, uepp: true }),
        "tatirp12" => (Mode::Targeted, Strategies::ALL),
        other => bail!(
            "unknown variant {other:?} in --variants; expected fasttirp, fasttirp-post, tatirp1, tatirp2 or tatirp12"
        ),
    })
}

fn run_bench(args: &BenchArgs) -> Result<()> {
    let names: Vec<&str> = args.variants.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        bail!("--variants names no variant");
    }
    let variants = names
        .iter()
        .map(|n| variant(n).map(|v| (*n, v)))
        .collect::<Result<Vec<_>>>()?;
    let base = args.mining.config();
    base.validate()?;
    let query = args.mining.query()?.context("--qes is required for bench")?;
    let db = args.mining.load()?;

    let mut rows: Vec<(&str, MiningStats)> = Vec::new();
    let mut reference: Option<(&str, Vec<STirpResult>)> = None;
    let mut mismatches = Vec::new();
    for (name, (mode, strategies)) in variants {
        let cfg = MiningConfig { mode, strategies, ..base.clone() };
        let (results, stats) = mine(&db, Some(&query), &cfg)?;
        info!("{name}: {} patterns, {} joins", results.len(), stats.join_operations);
        if mode != Mode::Full {
            match &reference {
                None => reference = Some((name, results)),
                Some((first, expected)) if *expected != results => {
                    mismatches.push(format!("{name} differs from {first}"));
                }
                Some(_) => {}
            }
        }
        rows.push((name, stats));
    }
    log_peak_rss();

    let mut out = open_output(args.output.as_deref())?;
    writeln!(out, "variant\tpatterns\tjoin_operations\telapsed_ms")?;
    for (name, stats) in &rows {
        writeln!(
            out,
            "{name}\t{}\t{}\t{}",
            stats.patterns_output,
            stats.join_operations,
            stats.elapsed.as_millis()
        )?;
    }
    out.flush()?;
    if !mismatches.is_empty() {
        bail!("targeted outputs disagree: {}", mismatches.join("; "));
    }
    Ok(())
}

fn run_gen(args: &GenArgs) -> Result<()> {
    let params = GeneratorParams {
        num_sequences: args.sequences,
        intervals_per_sequence: args.intervals,
        alphabet_size: args.alphabet,
        max_time: args.max_time,
        max_duration: args.max_duration,
        seed: args.seed,
    };
    let db: Database = generate_synthetic(&params).context("invalid generator parameters")?;
    let mut out = open_output(args.output.as_deref())?;
    write!(out, "{db}")?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Mine(args) => run_mine(args),
        Command::Bench(args) => run_bench(args),
        Command::Gen(args) => run_gen(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
