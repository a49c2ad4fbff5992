//! Transition extraction and the CEQ / SEQ entropy quantifiers.
//!
//! A transition is a colour change between adjacent pixels of a line. Its
//! position is the 1-based index of the pixel after the change; a line that
//! starts black has a 0->1 transition at position 1. In run form, every black
//! run starts a 0->1 transition and every white run after the first starts a
//! 1->0 transition, each at (sum of preceding runs) + 1.
//!
//! CEQ is the binary entropy of the per-line transition rate, computed
//! separately for 0->1 and 1->0 transitions:
//!
//! ```text
//! E(t) = p log(1/p) + (1 - p) log(1/(1 - p)),   p = count / (line_length - 1)
//! ```
//!
//! SEQ sums, for every transition position `pos` in line `r` of `m` lines of
//! length `n`:
//!
//! ```text
//! (r/m) * ((pos/n) log(n/pos) + (m - pos/n) log(m/(m + n - pos)))
//! ```
//!
//! The SEQ expression is evaluated as written above. Vertical entropy applies
//! the same formulas to columns, with the roles of `m` and `n` swapped.

use serde::{Deserialize, Serialize};

use crate::codec::{BitonalImage, RleDocument, RunRow};
use crate::profiles::stream_columns;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error("line of length {line_length} has no possible transitions")]
    DegenerateLine { line_length: usize },
    #[error("log base must be finite, positive and not 1, got {0}")]
    InvalidLogBase(f64),
}

/// Logarithm base for all entropy values. Base 2 is the default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LogBase {
    base: f64,
    ln_base: f64,
}

impl LogBase {
    pub const TWO: LogBase = LogBase {
        base: 2.0,
        ln_base: std::f64::consts::LN_2,
    };

    pub fn new(base: f64) -> Result<Self, EntropyError> {
        if !base.is_finite() || base <= 0.0 || base == 1.0 {
            return Err(EntropyError::InvalidLogBase(base));
        }
        Ok(Self {
            base,
            ln_base: base.ln(),
        })
    }

    pub fn value(self) -> f64 {
        self.base
    }

    pub fn log(self, x: f64) -> f64 {
        x.ln() / self.ln_base
    }
}

impl Default for LogBase {
    fn default() -> Self {
        Self::TWO
    }
}

impl TryFrom<f64> for LogBase {
    type Error = EntropyError;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<LogBase> for f64 {
    fn from(b: LogBase) -> f64 {
        b.base
    }
}

/// Transitions of one row or column.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TransitionSummary {
    /// 1-based positions of 0->1 transitions, ascending.
    pub pos_positions: Vec<usize>,
    /// 1-based positions of 1->0 transitions, ascending.
    pub neg_positions: Vec<usize>,
    pub line_length: usize,
}

impl TransitionSummary {
    pub fn pos_count(&self) -> usize {
        self.pos_positions.len()
    }

    pub fn neg_count(&self) -> usize {
        self.neg_positions.len()
    }

    /// Scans a pixel line directly. A leading black pixel counts as a 0->1
    /// transition at position 1.
    pub fn from_pixels(line: &[u8]) -> Self {
        let mut summary = TransitionSummary {
            line_length: line.len(),
            ..Default::default()
        };
        let mut prev = 0u8;
        for (i, &p) in line.iter().enumerate() {
            if p != prev {
                if p == 1 {
                    summary.pos_positions.push(i + 1);
                } else {
                    summary.neg_positions.push(i + 1);
                }
                prev = p;
            }
        }
        summary
    }
}

/// Transitions read straight off a run list.
pub fn row_transitions(row: &RunRow, width: usize) -> TransitionSummary {
    let mut summary = TransitionSummary {
        line_length: width,
        ..Default::default()
    };
    let mut prefix = 0usize;
    for (i, &run) in row.runs().iter().enumerate() {
        if i % 2 == 1 {
            summary.pos_positions.push(prefix + 1);
        } else if i > 0 {
            summary.neg_positions.push(prefix + 1);
        }
        prefix += run;
    }
    summary
}

/// Binary entropy `p log(1/p) + (1-p) log(1/(1-p))` with `0 log(1/0) = 0`.
fn binary_entropy(p: f64, base: LogBase) -> f64 {
    let term = |q: f64| {
        if q <= 0.0 {
            0.0
        } else {
            q * base.log(1.0 / q)
        }
    };
    term(p) + term(1.0 - p)
}

/// CEQ `(positive_part, negative_part)` of one line.
pub fn ceq_line(summary: &TransitionSummary, base: LogBase) -> Result<(f64, f64), EntropyError> {
    if summary.line_length < 2 {
        return Err(EntropyError::DegenerateLine {
            line_length: summary.line_length,
        });
    }
    let possible = (summary.line_length - 1) as f64;
    let p_pos = summary.pos_count() as f64 / possible;
    let p_neg = summary.neg_count() as f64 / possible;
    Ok((binary_entropy(p_pos, base), binary_entropy(p_neg, base)))
}

/// SEQ `(positive_part, negative_part)` of line `line_index` (1-based) out of
/// `line_count` lines, each `line_length` pixels long.
pub fn seq_line(
    summary: &TransitionSummary,
    line_count: usize,
    line_length: usize,
    line_index: usize,
    base: LogBase,
) -> (f64, f64) {
    let m = line_count as f64;
    let n = line_length as f64;
    let weight = line_index as f64 / m;
    let term = |pos: usize| {
        let pos = pos as f64;
        weight * ((pos / n) * base.log(n / pos) + (m - pos / n) * base.log(m / (m + n - pos)))
    };
    let positive = summary.pos_positions.iter().map(|&p| term(p)).sum();
    let negative = summary.neg_positions.iter().map(|&p| term(p)).sum();
    (positive, negative)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Quantifier {
    Ceq,
    Seq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// One line per row.
    Horizontal,
    /// One line per column.
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineEntropy {
    pub positive_part: f64,
    pub negative_part: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub quantifier: Quantifier,
    pub axis: Direction,
    pub log_base: LogBase,
    pub per_line: Vec<LineEntropy>,
    /// Sum of the per-line totals in ascending line order.
    pub document_total: f64,
    /// 1-based indices of lines too short to have transitions (scored 0).
    pub degenerate_lines: Vec<usize>,
}

impl EntropyResult {
    /// `line_index,positive_part,negative_part,total` CSV, 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("line_index,positive_part,negative_part,total\n");
        for (i, l) in self.per_line.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                l.positive_part,
                l.negative_part,
                l.total
            ));
        }
        out
    }
}

/// Scores a sequence of lines. `line_count` and `line_length` are the
/// dimensions the formulas see.
pub fn score_lines<'a, I>(
    lines: I,
    quantifier: Quantifier,
    axis: Direction,
    line_count: usize,
    base: LogBase,
) -> EntropyResult
where
    I: IntoIterator<Item = &'a TransitionSummary>,
{
    let mut per_line = Vec::with_capacity(line_count);
    let mut degenerate_lines = Vec::new();
    for (i, summary) in lines.into_iter().enumerate() {
        let (positive_part, negative_part) = match quantifier {
            Quantifier::Ceq => ceq_line(summary, base).unwrap_or_else(|_| {
                degenerate_lines.push(i + 1);
                (0.0, 0.0)
            }),
            Quantifier::Seq => seq_line(summary, line_count, summary.line_length, i + 1, base),
        };
        per_line.push(LineEntropy {
            positive_part,
            negative_part,
            total: positive_part + negative_part,
        });
    }
    let document_total = per_line.iter().fold(0.0, |acc, l| acc + l.total);
    EntropyResult {
        quantifier,
        axis,
        log_base: base,
        per_line,
        document_total,
        degenerate_lines,
    }
}

fn horizontal(doc: &RleDocument, quantifier: Quantifier, base: LogBase) -> EntropyResult {
    let summaries: Vec<TransitionSummary> = doc
        .rows()
        .iter()
        .map(|row| row_transitions(row, doc.width()))
        .collect();
    score_lines(
        &summaries,
        quantifier,
        Direction::Horizontal,
        doc.height(),
        base,
    )
}

fn vertical(doc: &RleDocument, quantifier: Quantifier, base: LogBase) -> EntropyResult {
    let summaries = column_transitions(doc);
    score_lines(
        &summaries,
        quantifier,
        Direction::Vertical,
        doc.width(),
        base,
    )
}

pub fn ceq_horizontal(doc: &RleDocument, base: LogBase) -> EntropyResult {
    horizontal(doc, Quantifier::Ceq, base)
}

pub fn seq_horizontal(doc: &RleDocument, base: LogBase) -> EntropyResult {
    horizontal(doc, Quantifier::Seq, base)
}

pub fn ceq_vertical(doc: &RleDocument, base: LogBase) -> EntropyResult {
    vertical(doc, Quantifier::Ceq, base)
}

pub fn seq_vertical(doc: &RleDocument, base: LogBase) -> EntropyResult {
    vertical(doc, Quantifier::Seq, base)
}

/// Per-column transitions, produced from the column stream.
pub fn column_transitions(doc: &RleDocument) -> Vec<TransitionSummary> {
    let mut out = Vec::with_capacity(doc.width());
    stream_columns(doc, |_, bits| {
        out.push(TransitionSummary::from_pixels(bits))
    });
    out
}

/// Reference horizontal entropy from a bitmap's pixel-pair scan.
pub fn horizontal_oracle(
    image: &BitonalImage,
    quantifier: Quantifier,
    base: LogBase,
) -> EntropyResult {
    let summaries: Vec<TransitionSummary> =
        image.rows().map(TransitionSummary::from_pixels).collect();
    score_lines(
        &summaries,
        quantifier,
        Direction::Horizontal,
        image.height(),
        base,
    )
}

/// Reference vertical entropy: the horizontal oracle on the transposed bitmap.
pub fn vertical_oracle(
    image: &BitonalImage,
    quantifier: Quantifier,
    base: LogBase,
) -> EntropyResult {
    let mut result = horizontal_oracle(&image.transpose(), quantifier, base);
    result.axis = Direction::Vertical;
    result
}
