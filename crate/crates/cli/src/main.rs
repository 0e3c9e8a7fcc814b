//! `lzvernam` command-line front end.
//!
//! Exit status: 0 success, 1 usage or I/O error, 2 malformed or corrupt
//! container, 3 key error, 4 not enough data for a statistical test.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lzvernam::codec::{savings_per_mille, Decoder, Encoder, Header};
use lzvernam::stats::{chi_square_uniform, fips_battery, FipsReport, Histogram256, FIPS_BITS};
use lzvernam::{CodecError, CodecParams, GeneratorKind, Key, KeyError, ResetPolicy, StatsError};

const CHUNK: usize = 64 * 1024;

#[derive(Parser)]
#[command(name = "lzvernam", version, about = "One-pass LZW compression with a Vernam-enciphered pointer stream")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress and encipher a file or standard input.
    Encode(EncodeArgs),
    /// Decipher and decompress a container.
    Decode(DecodeArgs),
    /// Chi-squared and FIPS 140-1 report on a container payload or raw file.
    Analyze(AnalyzeArgs),
    /// Byte histogram as CSV (byte,count,probability).
    Hist(HistArgs),
}

#[derive(Args)]
struct Io {
    /// Input path; standard input when omitted or "-".
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output path; standard output when omitted or "-".
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[group(multiple = false)]
struct KeySource {
    /// Key given literally (visible in process listings; prefer a file or variable).
    #[arg(long)]
    key: Option<String>,
    /// Read the key bytes from a file; one trailing newline is dropped.
    #[arg(long)]
    key_file: Option<PathBuf>,
    /// Read the key from an environment variable.
    #[arg(long)]
    key_env: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Prbs {
    Lfsr32,
    Rc4,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Ratio,
    AtLimit,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    key: KeySource,
    /// Keystream generator.
    #[arg(long, value_enum, default_value = "rc4")]
    prbs: Prbs,
    /// Largest pointer width in bits (10..=20).
    #[arg(long, default_value_t = 12)]
    max_width: u32,
    /// What to do once the dictionary is full.
    #[arg(long, value_enum, default_value = "ratio")]
    reset_policy: Policy,
    /// Plaintext bytes per ratio-monitor window.
    #[arg(long, default_value_t = 4096)]
    window: u32,
    /// Reset when a window saves less than this many per-mille.
    #[arg(long, default_value_t = 50)]
    threshold: u16,
    /// Start from a key-derived permutation of the 256 byte entries.
    #[arg(long)]
    permute: bool,
    /// Allow the all-zero keystream (output is not enciphered).
    #[arg(long)]
    insecure: bool,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    key: KeySource,
    /// Allow decoding containers made with the all-zero keystream.
    #[arg(long)]
    insecure: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input path; standard input when omitted or "-".
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Treat the input as raw bytes instead of a container.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct HistArgs {
    #[command(flatten)]
    io: Io,
    /// Treat the input as raw bytes instead of a container.
    #[arg(long)]
    raw: bool,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_status(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CodecError>() {
            return match e {
                CodecError::Key(_) => 3,
                e if e.is_corrupt_stream() => 2,
                _ => 1,
            };
        }
        if cause.is::<KeyError>() {
            return 3;
        }
        if cause.is::<StatsError>() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Encode(args) => encode(args),
        Command::Decode(args) => decode(args),
        Command::Analyze(args) => analyze(args),
        Command::Hist(args) => hist(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("lzvernam: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}

fn is_stdio(path: &Option<PathBuf>) -> bool {
    path.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn Read>> {
    if is_stdio(path) {
        return Ok(Box::new(io::stdin().lock()));
    }
    let path = path.as_deref().unwrap();
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Box::new(file))
}

/// Input plus its exact length. Standard input is spooled to an anonymous
/// temporary file first because the header records the length.
fn open_sized_input(path: &Option<PathBuf>) -> Result<(File, u64)> {
    if is_stdio(path) {
        let mut spool = tempfile::tempfile().context("creating spool file")?;
        let len = io::copy(&mut io::stdin().lock(), &mut spool).context("spooling stdin")?;
        spool.seek(SeekFrom::Start(0))?;
        return Ok((spool, len));
    }
    let path = path.as_deref().unwrap();
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let len = file.metadata()?.len();
    Ok((file, len))
}

fn open_output(path: &Option<PathBuf>) -> Result<BufWriter<Box<dyn Write>>> {
    let sink: Box<dyn Write> = if is_stdio(path) {
        Box::new(io::stdout().lock())
    } else {
        let path = path.as_deref().unwrap();
        Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)
    };
    Ok(BufWriter::with_capacity(CHUNK, sink))
}

fn read_key(source: &KeySource) -> Result<Option<Key>> {
    let bytes = if let Some(k) = &source.key {
        k.clone().into_bytes()
    } else if let Some(path) = &source.key_file {
        let mut bytes =
            std::fs::read(path).with_context(|| format!("reading key file {}", path.display()))?;
        if bytes.last() == Some(&b'\n') {
            bytes.pop();
            if bytes.last() == Some(&b'\r') {
                bytes.pop();
            }
        }
        bytes
    } else if let Some(var) = &source.key_env {
        std::env::var_os(var)
            .ok_or_else(|| usage(format!("environment variable {var} is not set")))?
            .into_encoded_bytes()
    } else {
        return Ok(None);
    };
    Ok(Some(Key::new(bytes)?))
}

/// Resolves the key for `kind`; the zero keystream needs `--insecure` and
/// then no key at all.
fn key_for(kind: GeneratorKind, source: &KeySource, insecure: bool) -> Result<Key> {
    if kind == GeneratorKind::Zero {
        if !insecure {
            return Err(usage(
                "the zero keystream leaves pointers unenciphered; pass --insecure to allow it",
            ));
        }
        return Ok(read_key(source)?.unwrap_or_else(|| Key::new(vec![0]).unwrap()));
    }
    read_key(source)?.ok_or_else(|| usage("a key is required (--key, --key-file or --key-env)"))
}

fn encode(args: EncodeArgs) -> Result<()> {
    let params = CodecParams {
        max_width: args.max_width,
        reset_policy: match args.reset_policy {
            Policy::Ratio => ResetPolicy::RatioMonitor,
            Policy::AtLimit => ResetPolicy::ResetAtLimit,
        },
        ratio_window: args.window,
        savings_threshold: args.threshold,
        permute_initial: args.permute,
        generator: match args.prbs {
            Prbs::Lfsr32 => GeneratorKind::Lfsr32,
            Prbs::Rc4 => GeneratorKind::Rc4,
            Prbs::Zero => GeneratorKind::Zero,
        },
    };
    if let Err(e) = params.validate() {
        return Err(usage(e.to_string()));
    }
    let key = key_for(params.generator, &args.key, args.insecure)?;
    let (mut input, len) = open_sized_input(&args.io.input)?;
    let out = open_output(&args.io.output)?;

    let start = Instant::now();
    let mut encoder = Encoder::new(out, &key, &params, len)?;
    let mut buf = vec![0u8; CHUNK];
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e).context("reading input"),
        };
        encoder.update(&buf[..n])?;
    }
    let (out, summary) = encoder.finish()?;
    out.into_inner().map_err(|e| e.into_error())?.flush()?;
    let secs = start.elapsed().as_secs_f64();

    eprintln!(
        "bytes in: {}  payload bits: {}  savings: {} per-mille  pointers: {}  resets: {}  throughput: {:.2} MiB/s",
        summary.plaintext_bytes,
        summary.payload_bits,
        savings_per_mille(summary.plaintext_bytes, summary.payload_bits),
        summary.codes,
        summary.resets.len(),
        summary.plaintext_bytes as f64 / (1024.0 * 1024.0) / secs.max(1e-9),
    );
    Ok(())
}

fn decode(args: DecodeArgs) -> Result<()> {
    let mut input = BufReader::with_capacity(CHUNK, open_input(&args.io.input)?);
    let header = Header::read_from(&mut input)?;
    let key = key_for(header.params.generator, &args.key, args.insecure)?;
    let decoder = Decoder::with_header(header, input, &key)?;
    let mut out = open_output(&args.io.output)?;
    let start = Instant::now();
    let summary = decoder.decode_to(&mut out)?;
    out.flush()?;
    eprintln!(
        "bytes out: {}  pointers: {}  throughput: {:.2} MiB/s",
        summary.plaintext_bytes,
        summary.codes,
        summary.plaintext_bytes as f64 / (1024.0 * 1024.0) / start.elapsed().as_secs_f64().max(1e-9),
    );
    Ok(())
}

/// Streams the bytes under analysis: the payload of a container, or the
/// whole input with `raw`. Returns the histogram and the leading bytes the
/// FIPS battery needs.
fn scan(path: &Option<PathBuf>, raw: bool) -> Result<(Histogram256, Vec<u8>, &'static str)> {
    let mut input = BufReader::with_capacity(CHUNK, open_input(path)?);
    let source = if raw {
        "raw input"
    } else {
        Header::read_from(&mut input)?;
        "container payload"
    };
    let mut hist = Histogram256::new();
    let mut head = Vec::with_capacity(FIPS_BITS / 8);
    let mut buf = vec![0u8; CHUNK];
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e).context("reading input"),
        };
        hist.add(&buf[..n]);
        let want = (FIPS_BITS / 8).saturating_sub(head.len()).min(n);
        head.extend_from_slice(&buf[..want]);
    }
    Ok((hist, head, source))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn print_fips(out: &mut impl Write, r: &FipsReport) -> io::Result<()> {
    writeln!(out, "fips140-1 (first {FIPS_BITS} bits):")?;
    writeln!(out, "  monobit: ones={} {}", r.monobit.ones, verdict(r.monobit.pass))?;
    writeln!(out, "  poker: statistic={:.4} {}", r.poker.statistic, verdict(r.poker.pass))?;
    writeln!(
        out,
        "  runs: zeros={:?} ones={:?} {}",
        r.runs.zero_runs,
        r.runs.one_runs,
        verdict(r.runs.pass())
    )?;
    writeln!(out, "  long_run: longest={} {}", r.long_run.longest, verdict(r.long_run.pass))?;
    writeln!(out, "  overall: {}", verdict(r.overall))
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let (hist, head, source) = scan(&args.input, args.raw)?;
    let mut out = io::stdout().lock();
    writeln!(out, "source: {source}")?;
    writeln!(out, "bytes: {}", hist.total())?;

    let mut shortfall: Option<StatsError> = None;
    match chi_square_uniform(&hist) {
        Ok(r) => writeln!(
            out,
            "chi_square: statistic={:.4} dof={} p_value={:.6e}",
            r.statistic, r.degrees_of_freedom, r.p_value
        )?,
        Err(e) => {
            writeln!(out, "chi_square: {e}")?;
            shortfall = Some(e);
        }
    }
    match fips_battery(&head) {
        Ok(r) => print_fips(&mut out, &r)?,
        Err(e) => {
            writeln!(out, "fips140-1: {e}")?;
            shortfall.get_or_insert(e);
        }
    }
    out.flush()?;
    match shortfall {
        Some(e) => Err(anyhow!(e).context("analysis incomplete")),
        None => Ok(()),
    }
}

fn hist(args: HistArgs) -> Result<()> {
    let (hist, _, _) = scan(&args.io.input, args.raw)?;
    hist.frequency(0)?;
    let mut out = open_output(&args.io.output)?;
    hist.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}
