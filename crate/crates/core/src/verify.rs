//! Side-by-side comparison of compressed-domain features with their bitmap
//! references.
//!
//! Integer features must match exactly. Entropy values must agree within
//! [`ENTROPY_REL_TOLERANCE`] relative error, per line and in total.

use std::collections::BTreeSet;
use std::fmt;

use crate::codec::{decode_rle, BitonalImage, CodecError, RleDocument};
use crate::entropy::{
    ceq_horizontal, ceq_vertical, column_transitions, horizontal_oracle, row_transitions,
    seq_horizontal, seq_vertical, vertical_oracle, EntropyResult, LogBase, Quantifier,
    TransitionSummary,
};
use crate::histograms::{
    black_run_histogram, blank_line_count, blank_line_count_oracle, combined_run_histogram,
    log_scale_histogram, run_histogram_oracle, white_run_histogram, LogHistogram, RunHistogram,
    RunKind, DEFAULT_LOG_BINS,
};
use crate::profiles::{
    column_profile_compressed, column_profile_oracle, row_profile_compressed, row_profile_oracle,
    Profile,
};

pub const ENTROPY_REL_TOLERANCE: f64 = 1e-12;

/// Where two feature outputs first disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// What `index` counts: "index", "run length", "bin", "line".
    pub unit: &'static str,
    /// 1-based line/bin/index, or the run length for histograms.
    pub index: usize,
    pub detail: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "first difference at {} {}: {}",
            self.unit, self.index, self.detail
        )
    }
}

pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

pub fn compare_profiles(compressed: &Profile, oracle: &Profile) -> Result<(), Mismatch> {
    compare_slices(&compressed.values, &oracle.values, "index")
}

fn compare_slices<T: PartialEq + fmt::Debug>(
    a: &[T],
    b: &[T],
    unit: &'static str,
) -> Result<(), Mismatch> {
    if let Some(i) = a.iter().zip(b).position(|(x, y)| x != y) {
        return Err(Mismatch {
            unit,
            index: i + 1,
            detail: format!("{:?} != {:?}", a[i], b[i]),
        });
    }
    if a.len() != b.len() {
        return Err(Mismatch {
            unit,
            index: a.len().min(b.len()) + 1,
            detail: format!("lengths differ: {} != {}", a.len(), b.len()),
        });
    }
    Ok(())
}

pub fn compare_histograms(
    compressed: &RunHistogram,
    oracle: &RunHistogram,
) -> Result<(), Mismatch> {
    let keys: BTreeSet<usize> = compressed
        .counts
        .keys()
        .chain(oracle.counts.keys())
        .copied()
        .collect();
    for k in keys {
        let a = compressed.counts.get(&k).copied().unwrap_or(0);
        let b = oracle.counts.get(&k).copied().unwrap_or(0);
        if a != b {
            return Err(Mismatch {
                unit: "run length",
                index: k,
                detail: format!("frequency {a} != {b}"),
            });
        }
    }
    Ok(())
}

pub fn compare_log_histograms(
    compressed: &LogHistogram,
    oracle: &LogHistogram,
) -> Result<(), Mismatch> {
    compare_slices(&compressed.bins, &oracle.bins, "bin")
}

pub fn compare_transitions(
    compressed: &[TransitionSummary],
    oracle: &[TransitionSummary],
) -> Result<(), Mismatch> {
    compare_slices(compressed, oracle, "line")
}

pub fn compare_entropy(compressed: &EntropyResult, oracle: &EntropyResult) -> Result<(), Mismatch> {
    let tol = ENTROPY_REL_TOLERANCE;
    for (i, (a, b)) in compressed.per_line.iter().zip(&oracle.per_line).enumerate() {
        if !(relative_close(a.positive_part, b.positive_part, tol)
            && relative_close(a.negative_part, b.negative_part, tol)
            && relative_close(a.total, b.total, tol))
        {
            return Err(Mismatch {
                unit: "line",
                index: i + 1,
                detail: format!("{a:?} != {b:?}"),
            });
        }
    }
    if compressed.per_line.len() != oracle.per_line.len() {
        return Err(Mismatch {
            unit: "line",
            index: compressed.per_line.len().min(oracle.per_line.len()) + 1,
            detail: "line counts differ".into(),
        });
    }
    if !relative_close(compressed.document_total, oracle.document_total, tol) {
        return Err(Mismatch {
            unit: "line",
            index: 0,
            detail: format!(
                "document total {} != {}",
                compressed.document_total, oracle.document_total
            ),
        });
    }
    if compressed.degenerate_lines != oracle.degenerate_lines {
        return Err(Mismatch {
            unit: "line",
            index: 0,
            detail: "degenerate line sets differ".into(),
        });
    }
    Ok(())
}

/// Outcome of one feature comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureCheck {
    pub feature: &'static str,
    pub result: Result<(), Mismatch>,
}

impl FeatureCheck {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

/// Every feature, compressed path against bitmap path, for an already
/// decoded pair.
pub fn check_all(doc: &RleDocument, image: &BitonalImage, base: LogBase) -> Vec<FeatureCheck> {
    let mut checks = Vec::new();
    let mut push = |feature, result| checks.push(FeatureCheck { feature, result });

    push(
        "row-profile",
        compare_profiles(&row_profile_compressed(doc), &row_profile_oracle(image)),
    );
    push(
        "column-profile",
        compare_profiles(
            &column_profile_compressed(doc),
            &column_profile_oracle(image),
        ),
    );

    let black = black_run_histogram(doc);
    let white = white_run_histogram(doc);
    let combined = combined_run_histogram(doc);
    let black_ref = run_histogram_oracle(image, RunKind::Black);
    let white_ref = run_histogram_oracle(image, RunKind::White);
    let combined_ref = run_histogram_oracle(image, RunKind::Combined);
    push("black-hist", compare_histograms(&black, &black_ref));
    push("white-hist", compare_histograms(&white, &white_ref));
    push(
        "combined-hist",
        compare_histograms(&combined, &combined_ref),
    );
    let log_check = [
        (&black, &black_ref),
        (&white, &white_ref),
        (&combined, &combined_ref),
    ]
    .into_iter()
    .try_for_each(|(c, o)| {
        let c = log_scale_histogram(c, DEFAULT_LOG_BINS).expect("default bin count");
        let o = log_scale_histogram(o, DEFAULT_LOG_BINS).expect("default bin count");
        compare_log_histograms(&c, &o)
    });
    push("log-hist", log_check);

    let blank = blank_line_count(doc);
    let blank_ref = blank_line_count_oracle(image);
    push(
        "blank-lines",
        if blank == blank_ref {
            Ok(())
        } else {
            Err(Mismatch {
                unit: "index",
                index: 1,
                detail: format!("{blank} != {blank_ref}"),
            })
        },
    );

    let rows: Vec<_> = doc
        .rows()
        .iter()
        .map(|r| row_transitions(r, doc.width()))
        .collect();
    let rows_ref: Vec<_> = image.rows().map(TransitionSummary::from_pixels).collect();
    push("row-transitions", compare_transitions(&rows, &rows_ref));
    let transposed = image.transpose();
    let cols_ref: Vec<_> = transposed
        .rows()
        .map(TransitionSummary::from_pixels)
        .collect();
    push(
        "column-transitions",
        compare_transitions(&column_transitions(doc), &cols_ref),
    );

    push(
        "ceq-h",
        compare_entropy(
            &ceq_horizontal(doc, base),
            &horizontal_oracle(image, Quantifier::Ceq, base),
        ),
    );
    push(
        "seq-h",
        compare_entropy(
            &seq_horizontal(doc, base),
            &horizontal_oracle(image, Quantifier::Seq, base),
        ),
    );
    push(
        "ceq-v",
        compare_entropy(
            &ceq_vertical(doc, base),
            &vertical_oracle(image, Quantifier::Ceq, base),
        ),
    );
    push(
        "seq-v",
        compare_entropy(
            &seq_vertical(doc, base),
            &vertical_oracle(image, Quantifier::Seq, base),
        ),
    );
    checks
}

/// Decodes `doc` once and runs [`check_all`].
pub fn verify_document(doc: &RleDocument, base: LogBase) -> Result<Vec<FeatureCheck>, CodecError> {
    let image = decode_rle(doc)?;
    Ok(check_all(doc, &image, base))
}
