//! `rlefeat`: convert between PBM and RLE1, extract features from RLE1
//! files, check them against the bitmap references and time both paths.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 I/O or format error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::TypedValueParser;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rlefeat::bench::{self, BenchConfig, BenchFeature, Mode};
use rlefeat::entropy::{self, EntropyResult, LogBase};
use rlefeat::histograms::{self, RunHistogram, DEFAULT_LOG_BINS, MAX_LOG_BINS};
use rlefeat::profiles::{self, Profile};
use rlefeat::{verify, RleDocument};

const LOG_BASE_ENV: &str = "RLEFEAT_LOG_BASE";

#[derive(Parser)]
#[command(
    name = "rlefeat",
    version,
    about = "Features straight from run-length compressed bitonal images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a PBM (P1 or P4) image into an RLE1 file.
    Encode {
        /// Input PBM, or `-` for stdin.
        input: PathBuf,
        /// Output RLE1 file, or `-` for stdout.
        output: PathBuf,
    },
    /// Expand an RLE1 file into a raw (P4) PBM image.
    Decode {
        /// Input RLE1 file, or `-` for stdin.
        input: PathBuf,
        /// Output PBM, or `-` for stdout.
        output: PathBuf,
    },
    /// Extract one feature from an RLE1 file without decompressing it.
    Features {
        /// Input RLE1 file, or `-` for stdin.
        input: PathBuf,
        /// Output file, or `-` for stdout.
        #[arg(default_value = "-")]
        output: PathBuf,
        #[arg(long, value_enum)]
        feature: Feature,
        /// Logarithm base for entropy features.
        #[arg(long, env = LOG_BASE_ENV, default_value = "2", value_parser = parse_log_base)]
        log_base: LogBase,
        /// Number of logarithmic bins for `log-hist`.
        #[arg(long, default_value_t = DEFAULT_LOG_BINS,
              value_parser = clap::value_parser!(u32).range(2..=MAX_LOG_BINS as i64).map(|v| v as usize))]
        bins: usize,
        /// Which runs `log-hist` rebins.
        #[arg(long, value_enum, default_value_t = HistKind::Combined)]
        kind: HistKind,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compute every feature from both the compressed and the decoded image
    /// and compare them.
    Verify {
        /// Input RLE1 file, or `-` for stdin.
        input: PathBuf,
        /// Logarithm base for entropy features.
        #[arg(long, env = LOG_BASE_ENV, default_value = "2", value_parser = parse_log_base)]
        log_base: LogBase,
    },
    /// Time compressed-domain extraction against decompress-then-extract over
    /// a directory of .rle files.
    Bench {
        /// Directory containing .rle files.
        corpus_dir: PathBuf,
        /// Comma-separated features to time.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "row-profile,column-profile,run-histogram,ceq,seq"
        )]
        features: Vec<BenchFeature>,
        /// Timed repetitions per document (best is kept).
        #[arg(long, default_value_t = bench::DEFAULT_REPETITIONS,
              value_parser = clap::value_parser!(u32).range(1..).map(|v| v as usize))]
        reps: usize,
        /// Time documents concurrently (throughput mode).
        #[arg(long)]
        parallel: bool,
        /// Logarithm base for entropy features.
        #[arg(long, env = LOG_BASE_ENV, default_value = "2", value_parser = parse_log_base)]
        log_base: LogBase,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file, or `-` for stdout.
        #[arg(long, short, default_value = "-")]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Feature {
    RowProfile,
    ColumnProfile,
    BlackHist,
    WhiteHist,
    CombinedHist,
    LogHist,
    BlankLines,
    CeqH,
    SeqH,
    CeqV,
    SeqV,
}

#[derive(Clone, Copy, ValueEnum)]
enum HistKind {
    Black,
    White,
    Combined,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_log_base(s: &str) -> Result<LogBase, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    LogBase::new(v).map_err(|e| e.to_string())
}

enum Failure {
    Mismatch(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    if is_stdio(path) {
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
    } else {
        buf = fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(buf)
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if is_stdio(path) {
        let mut out = io::stdout().lock();
        out.write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| Failure::Io(format!("stdout: {e}")))
    } else {
        fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

/// Refuses to overwrite an input file.
fn check_distinct(input: &Path, output: &Path) -> Result<(), Failure> {
    if is_stdio(input) || is_stdio(output) {
        return Ok(());
    }
    let same = match (fs::canonicalize(input), fs::canonicalize(output)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    if same {
        return Err(Failure::Usage(format!(
            "output {} would overwrite the input",
            output.display()
        )));
    }
    Ok(())
}

fn load_rle(path: &Path) -> Result<RleDocument, Failure> {
    let bytes = read_input(path)?;
    rlefeat::read_rle_file(&bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn histogram_json(h: &RunHistogram) -> serde_json::Value {
    let counts: Vec<_> = h
        .counts
        .iter()
        .map(|(l, f)| json!({"run_length": l, "frequency": f}))
        .collect();
    json!({"kind": h.kind, "counts": counts})
}

fn entropy_json(r: &EntropyResult) -> serde_json::Value {
    json!({
        "quantifier": r.quantifier,
        "axis": r.axis,
        "log_base": r.log_base.value(),
        "document_total": r.document_total,
        "degenerate_lines": r.degenerate_lines,
    })
}

fn render_json(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json values always serialize");
    s.push('\n');
    s
}

fn render_features(
    doc: &RleDocument,
    feature: Feature,
    log_base: LogBase,
    bins: usize,
    kind: HistKind,
    format: Format,
) -> Result<String, Failure> {
    let profile = |p: Profile| match format {
        Format::Csv => p.to_csv(),
        Format::Json => render_json(json!(p)),
    };
    let hist = |h: RunHistogram| match format {
        Format::Csv => h.to_csv(),
        Format::Json => render_json(histogram_json(&h)),
    };
    let ent = |r: EntropyResult| match format {
        Format::Csv => r.to_csv(),
        Format::Json => render_json(entropy_json(&r)),
    };
    Ok(match feature {
        Feature::RowProfile => profile(profiles::row_profile_compressed(doc)),
        Feature::ColumnProfile => profile(profiles::column_profile_compressed(doc)),
        Feature::BlackHist => hist(histograms::black_run_histogram(doc)),
        Feature::WhiteHist => hist(histograms::white_run_histogram(doc)),
        Feature::CombinedHist => hist(histograms::combined_run_histogram(doc)),
        Feature::LogHist => {
            let source = match kind {
                HistKind::Black => histograms::black_run_histogram(doc),
                HistKind::White => histograms::white_run_histogram(doc),
                HistKind::Combined => histograms::combined_run_histogram(doc),
            };
            let log = histograms::log_scale_histogram(&source, bins)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            match format {
                Format::Csv => log.to_csv(),
                Format::Json => render_json(json!(log)),
            }
        }
        Feature::BlankLines => {
            let n = histograms::blank_line_count(doc);
            match format {
                Format::Csv => format!("blank_lines\n{n}\n"),
                Format::Json => render_json(json!({ "blank_lines": n })),
            }
        }
        Feature::CeqH => ent(entropy::ceq_horizontal(doc, log_base)),
        Feature::SeqH => ent(entropy::seq_horizontal(doc, log_base)),
        Feature::CeqV => ent(entropy::ceq_vertical(doc, log_base)),
        Feature::SeqV => ent(entropy::seq_vertical(doc, log_base)),
    })
}

fn cmd_verify(input: &Path, log_base: LogBase) -> Result<(), Failure> {
    let doc = load_rle(input)?;
    let checks = verify::verify_document(&doc, log_base)
        .map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
    let mut report = String::new();
    let mut failed = Vec::new();
    for c in &checks {
        match &c.result {
            Ok(()) => report.push_str(&format!("{:<20}PASS\n", c.feature)),
            Err(m) => {
                report.push_str(&format!("{:<20}FAIL  {m}\n", c.feature));
                failed.push(format!("{} ({m})", c.feature));
            }
        }
    }
    write_output(Path::new("-"), report.as_bytes())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "mismatch in {}",
            failed.join(", ")
        )))
    }
}

fn load_corpus(dir: &Path) -> Result<(Vec<String>, Vec<RleDocument>), Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?
            .path();
        if path.is_file() && path.extension().is_some_and(|e| e == "rle") {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Io(format!(
            "{}: no .rle files in corpus",
            dir.display()
        )));
    }
    let mut names = Vec::with_capacity(paths.len());
    let mut docs = Vec::with_capacity(paths.len());
    for p in paths {
        docs.push(load_rle(&p)?);
        names.push(
            p.file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned(),
        );
    }
    Ok((names, docs))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Encode { input, output } => {
            check_distinct(&input, &output)?;
            let bytes = read_input(&input)?;
            let image = rlefeat::read_pbm(&bytes)
                .map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
            write_output(
                &output,
                &rlefeat::write_rle_file(&rlefeat::encode_rle(&image)),
            )
        }
        Command::Decode { input, output } => {
            check_distinct(&input, &output)?;
            let doc = load_rle(&input)?;
            let image = rlefeat::decode_rle(&doc)
                .map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
            write_output(&output, &rlefeat::write_pbm(&image))
        }
        Command::Features {
            input,
            output,
            feature,
            log_base,
            bins,
            kind,
            format,
        } => {
            check_distinct(&input, &output)?;
            let doc = load_rle(&input)?;
            let text = render_features(&doc, feature, log_base, bins, kind, format)?;
            write_output(&output, text.as_bytes())
        }
        Command::Verify { input, log_base } => cmd_verify(&input, log_base),
        Command::Bench {
            corpus_dir,
            features,
            reps,
            parallel,
            log_base,
            format,
            output,
        } => {
            let (names, corpus) = load_corpus(&corpus_dir)?;
            let config = BenchConfig {
                repetitions: reps,
                mode: if parallel {
                    Mode::Parallel
                } else {
                    Mode::Sequential
                },
                log_base,
            };
            let reports =
                bench::run_benchmark(&corpus, &features, &config).map_err(|e| match e {
                    bench::BenchError::MismatchDetected {
                        feature,
                        document,
                        mismatch,
                    } => Failure::Mismatch(format!(
                        "{feature}: {} differs from the bitmap reference: {mismatch}",
                        names[document]
                    )),
                    bench::BenchError::InvalidRepetitions => Failure::Usage(e.to_string()),
                    other => Failure::Io(other.to_string()),
                })?;
            let text = match format {
                Format::Csv => bench::reports_to_csv(&reports),
                Format::Json => render_json(json!({
                    "documents": names,
                    "reports": reports,
                })),
            };
            write_output(&output, text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rlefeat: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
