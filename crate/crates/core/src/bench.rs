//! Timing of the two extraction paths.
//!
//! For each feature and corpus:
//!
//! - `T2`: compressed-domain extraction time,
//! - `D`: decompression time,
//! - `T1`: `D` plus bitmap-domain extraction time,
//! - time saved: `(T1 - T2) / T1 * 100`. Negative means the compressed path
//!   was slower.
//!
//! A warm-up pass runs first and is not timed; it also compares both paths
//! and aborts on any disagreement. Each document is then timed
//! `repetitions` times and the fastest observation per document is kept.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{decode_rle, BitonalImage, CodecError, RleDocument};
use crate::entropy::{ceq_horizontal, horizontal_oracle, seq_horizontal, LogBase, Quantifier};
use crate::histograms::{
    black_run_histogram, combined_run_histogram, run_histogram_oracle, white_run_histogram, RunKind,
};
use crate::profiles::{
    column_profile_compressed, column_profile_oracle, row_profile_compressed, row_profile_oracle,
};
use crate::verify::{self, Mismatch};

pub const DEFAULT_REPETITIONS: usize = 5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("benchmark corpus is empty")]
    CorpusEmpty,
    #[error("repetitions must be at least 1")]
    InvalidRepetitions,
    #[error("baseline time must be positive, got {0}")]
    NonPositiveBaseline(f64),
    #[error("{feature}: compressed and bitmap outputs differ on document {document}: {mismatch}")]
    MismatchDetected {
        feature: BenchFeature,
        document: usize,
        mismatch: Mismatch,
    },
    #[error("invalid report: {0}")]
    InvalidReport(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// `(t1 - t2) / t1 * 100`.
pub fn time_saved_percent(t1: f64, t2: f64) -> Result<f64, BenchError> {
    if t1.is_nan() || t1 <= 0.0 {
        return Err(BenchError::NonPositiveBaseline(t1));
    }
    Ok((t1 - t2) / t1 * 100.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchFeature {
    RowProfile,
    ColumnProfile,
    RunHistogram,
    Ceq,
    Seq,
}

impl BenchFeature {
    pub const ALL: [BenchFeature; 5] = [
        BenchFeature::RowProfile,
        BenchFeature::ColumnProfile,
        BenchFeature::RunHistogram,
        BenchFeature::Ceq,
        BenchFeature::Seq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchFeature::RowProfile => "row-profile",
            BenchFeature::ColumnProfile => "column-profile",
            BenchFeature::RunHistogram => "run-histogram",
            BenchFeature::Ceq => "ceq",
            BenchFeature::Seq => "seq",
        }
    }

    fn compressed(self, doc: &RleDocument, base: LogBase) -> Output {
        match self {
            BenchFeature::RowProfile => Output::Profile(row_profile_compressed(doc)),
            BenchFeature::ColumnProfile => Output::Profile(column_profile_compressed(doc)),
            BenchFeature::RunHistogram => Output::Histograms([
                black_run_histogram(doc),
                white_run_histogram(doc),
                combined_run_histogram(doc),
            ]),
            BenchFeature::Ceq => Output::Entropy(ceq_horizontal(doc, base)),
            BenchFeature::Seq => Output::Entropy(seq_horizontal(doc, base)),
        }
    }

    fn oracle(self, image: &BitonalImage, base: LogBase) -> Output {
        match self {
            BenchFeature::RowProfile => Output::Profile(row_profile_oracle(image)),
            BenchFeature::ColumnProfile => Output::Profile(column_profile_oracle(image)),
            BenchFeature::RunHistogram => Output::Histograms([
                run_histogram_oracle(image, RunKind::Black),
                run_histogram_oracle(image, RunKind::White),
                run_histogram_oracle(image, RunKind::Combined),
            ]),
            BenchFeature::Ceq => Output::Entropy(horizontal_oracle(image, Quantifier::Ceq, base)),
            BenchFeature::Seq => Output::Entropy(horizontal_oracle(image, Quantifier::Seq, base)),
        }
    }
}

impl fmt::Display for BenchFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchFeature {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown benchmark feature `{s}`"))
    }
}

enum Output {
    Profile(crate::profiles::Profile),
    Histograms([crate::histograms::RunHistogram; 3]),
    Entropy(crate::entropy::EntropyResult),
}

fn compare(a: &Output, b: &Output) -> Result<(), Mismatch> {
    match (a, b) {
        (Output::Profile(a), Output::Profile(b)) => verify::compare_profiles(a, b),
        (Output::Histograms(a), Output::Histograms(b)) => a
            .iter()
            .zip(b)
            .try_for_each(|(x, y)| verify::compare_histograms(x, y)),
        (Output::Entropy(a), Output::Entropy(b)) => verify::compare_entropy(a, b),
        _ => unreachable!("both paths of a feature produce the same output kind"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequential,
    /// Documents timed concurrently; sums are then total CPU time, not
    /// elapsed time.
    Parallel,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub repetitions: usize,
    pub mode: Mode,
    pub log_base: LogBase,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            repetitions: DEFAULT_REPETITIONS,
            mode: Mode::Sequential,
            log_base: LogBase::TWO,
        }
    }
}

/// Best-of-repetitions timings of one document, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DocumentTiming {
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
}

/// One feature's timings over a corpus, in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReport")]
pub struct BenchReport {
    pub feature: BenchFeature,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    pub time_saved_percent: f64,
    pub repetitions: usize,
    pub corpus_size: usize,
    pub mode: Mode,
    pub documents: Vec<DocumentTiming>,
}

#[derive(Deserialize)]
struct RawReport {
    feature: BenchFeature,
    #[serde(rename = "T2")]
    t2: f64,
    #[serde(rename = "D")]
    d: f64,
    #[serde(rename = "T1")]
    t1: f64,
    repetitions: usize,
    corpus_size: usize,
    mode: Mode,
    #[serde(default)]
    documents: Vec<DocumentTiming>,
}

impl TryFrom<RawReport> for BenchReport {
    type Error = BenchError;
    fn try_from(raw: RawReport) -> Result<Self, Self::Error> {
        BenchReport::new(
            raw.feature,
            raw.t2,
            raw.d,
            raw.t1,
            raw.repetitions,
            raw.corpus_size,
            raw.mode,
            raw.documents,
        )
    }
}

impl BenchReport {
    /// Checks the timing invariants and derives `time_saved_percent`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        feature: BenchFeature,
        t2: f64,
        d: f64,
        t1: f64,
        repetitions: usize,
        corpus_size: usize,
        mode: Mode,
        documents: Vec<DocumentTiming>,
    ) -> Result<Self, BenchError> {
        if !(d >= 0.0 && t1 >= d && t2 >= 0.0) {
            return Err(BenchError::InvalidReport(format!(
                "need T1 >= D >= 0 and T2 >= 0, got T1={t1} D={d} T2={t2}"
            )));
        }
        if repetitions == 0 {
            return Err(BenchError::InvalidRepetitions);
        }
        Ok(Self {
            feature,
            t2,
            d,
            t1,
            time_saved_percent: time_saved_percent(t1, t2)?,
            repetitions,
            corpus_size,
            mode,
            documents,
        })
    }

    pub const CSV_HEADER: &'static str =
        "feature,T2,D,T1,time_saved_percent,repetitions,corpus_size";

    /// One CSV line without newline. Floats print in shortest round-trip
    /// form so the percentage recomputes exactly from the printed times.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.feature,
            self.t2,
            self.d,
            self.t1,
            self.time_saved_percent,
            self.repetitions,
            self.corpus_size
        )
    }
}

pub fn reports_to_csv(reports: &[BenchReport]) -> String {
    let mut out = String::from(BenchReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = black_box(f());
    (out, start.elapsed())
}

fn time_document(
    feature: BenchFeature,
    doc: &RleDocument,
    base: LogBase,
) -> Result<(Duration, Duration, Duration), CodecError> {
    let (out, t2) = timed(|| feature.compressed(doc, base));
    drop(out);
    let (image, d) = timed(|| decode_rle(doc));
    let image = image?;
    let (out, extract) = timed(|| feature.oracle(&image, base));
    drop(out);
    Ok((t2, d, extract))
}

/// Times every feature in `features` over `corpus`.
pub fn run_benchmark(
    corpus: &[RleDocument],
    features: &[BenchFeature],
    config: &BenchConfig,
) -> Result<Vec<BenchReport>, BenchError> {
    if corpus.is_empty() {
        return Err(BenchError::CorpusEmpty);
    }
    if config.repetitions == 0 {
        return Err(BenchError::InvalidRepetitions);
    }
    let base = config.log_base;
    let mut reports = Vec::with_capacity(features.len());
    for &feature in features {
        // warm-up and correctness gate
        for (i, doc) in corpus.iter().enumerate() {
            let image = decode_rle(doc)?;
            compare(
                &feature.compressed(doc, base),
                &feature.oracle(&image, base),
            )
            .map_err(|mismatch| BenchError::MismatchDetected {
                feature,
                document: i,
                mismatch,
            })?;
        }

        let mut best = vec![(Duration::MAX, Duration::MAX, Duration::MAX); corpus.len()];
        for _ in 0..config.repetitions {
            let round: Vec<_> = match config.mode {
                Mode::Sequential => corpus
                    .iter()
                    .map(|doc| time_document(feature, doc, base))
                    .collect::<Result<_, _>>()?,
                Mode::Parallel => corpus
                    .par_iter()
                    .map(|doc| time_document(feature, doc, base))
                    .collect::<Result<_, _>>()?,
            };
            for (b, r) in best.iter_mut().zip(round) {
                *b = (b.0.min(r.0), b.1.min(r.1), b.2.min(r.2));
            }
        }

        let documents: Vec<DocumentTiming> = best
            .iter()
            .map(|&(t2, d, extract)| DocumentTiming {
                t2: t2.as_secs_f64(),
                d: d.as_secs_f64(),
                t1: (d + extract).as_secs_f64(),
            })
            .collect();
        let t2: Duration = best.iter().map(|b| b.0).sum();
        let d: Duration = best.iter().map(|b| b.1).sum();
        let extract: Duration = best.iter().map(|b| b.2).sum();
        reports.push(BenchReport::new(
            feature,
            t2.as_secs_f64(),
            d.as_secs_f64(),
            (d + extract).as_secs_f64(),
            config.repetitions,
            corpus.len(),
            config.mode,
            documents,
        )?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_rows() {
        let vpp = time_saved_percent(2.012, 0.043).unwrap();
        assert!((vpp - 97.86).abs() < 0.005, "{vpp}");
        let hist = time_saved_percent(13.11, 3.50).unwrap();
        assert!((hist - 73.30).abs() < 0.005, "{hist}");
        assert_eq!(time_saved_percent(1.5, 1.5).unwrap(), 0.0);
        assert!(time_saved_percent(1.0, 2.0).unwrap() < 0.0);
    }

    #[test]
    fn baseline_must_be_positive() {
        assert_eq!(
            time_saved_percent(0.0, 1.0),
            Err(BenchError::NonPositiveBaseline(0.0))
        );
        assert!(time_saved_percent(-1.0, 0.0).is_err());
        assert!(time_saved_percent(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn report_invariants() {
        assert!(BenchReport::new(
            BenchFeature::Ceq,
            0.1,
            0.5,
            0.4,
            1,
            1,
            Mode::Sequential,
            vec![]
        )
        .is_err());
        assert!(BenchReport::new(
            BenchFeature::Ceq,
            0.1,
            0.5,
            0.6,
            0,
            1,
            Mode::Sequential,
            vec![]
        )
        .is_err());
        let r = BenchReport::new(
            BenchFeature::Ceq,
            0.1,
            0.5,
            0.6,
            1,
            1,
            Mode::Sequential,
            vec![],
        )
        .unwrap();
        assert_eq!(r.time_saved_percent, (0.6 - 0.1) / 0.6 * 100.0);
    }

    #[test]
    fn json_load_recomputes_percentage() {
        let json = r#"{"feature":"row-profile","T2":0.043,"D":1.8,"T1":2.012,
            "time_saved_percent":12.0,"repetitions":5,"corpus_size":10,"mode":"sequential"}"#;
        let r: BenchReport = serde_json::from_str(json).unwrap();
        assert_eq!(
            r.time_saved_percent,
            time_saved_percent(2.012, 0.043).unwrap()
        );
        let bad = r#"{"feature":"ceq","T2":1,"D":3,"T1":2,"repetitions":1,"corpus_size":1,"mode":"sequential"}"#;
        assert!(serde_json::from_str::<BenchReport>(bad).is_err());
    }

    #[test]
    fn runs_and_gates() {
        let doc = RleDocument::from_runs(8, vec![vec![8], vec![1, 3, 4], vec![0, 8]]).unwrap();
        let corpus = vec![doc; 3];
        let config = BenchConfig {
            repetitions: 2,
            ..Default::default()
        };
        let reports = run_benchmark(&corpus, &BenchFeature::ALL, &config).unwrap();
        assert_eq!(reports.len(), 5);
        for r in &reports {
            assert_eq!(r.corpus_size, 3);
            assert_eq!(r.documents.len(), 3);
            assert!(r.t1 >= r.d && r.d >= 0.0 && r.t2 >= 0.0);
            assert_eq!(r.time_saved_percent, (r.t1 - r.t2) / r.t1 * 100.0);
        }
        let par = BenchConfig {
            mode: Mode::Parallel,
            ..config
        };
        assert_eq!(
            run_benchmark(&corpus, &[BenchFeature::Seq], &par).unwrap()[0].mode,
            Mode::Parallel
        );
        assert_eq!(
            run_benchmark(&[], &BenchFeature::ALL, &config),
            Err(BenchError::CorpusEmpty)
        );
        let zero = BenchConfig {
            repetitions: 0,
            ..config
        };
        assert_eq!(
            run_benchmark(&corpus, &BenchFeature::ALL, &zero),
            Err(BenchError::InvalidRepetitions)
        );
    }

    #[test]
    fn feature_names_parse() {
        for f in BenchFeature::ALL {
            assert_eq!(f.name().parse::<BenchFeature>().unwrap(), f);
        }
        assert!("vpp".parse::<BenchFeature>().is_err());
    }
}
