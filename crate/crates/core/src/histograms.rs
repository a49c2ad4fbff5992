//! Run-length histograms.
//!
//! Black runs sit at even positions of a [`RunRow`](crate::codec::RunRow),
//! white runs at odd positions. The empty leading white run of a row that
//! starts black is phase information only and is never counted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::codec::{BitonalImage, RleDocument};

/// Number of logarithmic bins used when none is requested: `[1]`, `[2]`,
/// `[3-4]`, ..., `[65-128]`, `[129-]`.
pub const DEFAULT_LOG_BINS: usize = 9;

/// Largest bin count whose edges fit in a `u64`.
pub const MAX_LOG_BINS: usize = 65;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HistogramError {
    #[error("bin count must be between 2 and {MAX_LOG_BINS}, got {0}")]
    InvalidBinCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunKind {
    Black,
    White,
    Combined,
}

/// Frequency of each run length. Keys are always >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunHistogram {
    pub kind: RunKind,
    pub counts: BTreeMap<usize, u64>,
}

impl RunHistogram {
    pub fn new(kind: RunKind) -> Self {
        Self {
            kind,
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, run: usize) {
        if run > 0 {
            *self.counts.entry(run).or_insert(0) += 1;
        }
    }

    /// Total number of runs tallied.
    pub fn frequency_total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Total number of pixels covered by the tallied runs.
    pub fn pixel_total(&self) -> u128 {
        self.counts
            .iter()
            .map(|(&len, &f)| len as u128 * f as u128)
            .sum()
    }

    /// Pointwise sum; the result has `kind`.
    pub fn merged(&self, other: &RunHistogram, kind: RunKind) -> RunHistogram {
        let mut counts = self.counts.clone();
        for (&len, &f) in &other.counts {
            *counts.entry(len).or_insert(0) += f;
        }
        RunHistogram { kind, counts }
    }

    /// `run_length,frequency` CSV in ascending run length.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("run_length,frequency\n");
        for (len, f) in &self.counts {
            out.push_str(&format!("{len},{f}\n"));
        }
        out
    }
}

/// One dyadic bin. `upper == None` marks the open-ended last bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogBin {
    pub lower: u64,
    pub upper: Option<u64>,
    pub frequency: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogHistogram {
    pub kind: RunKind,
    pub bins: Vec<LogBin>,
}

impl LogHistogram {
    pub fn frequencies(&self) -> Vec<u64> {
        self.bins.iter().map(|b| b.frequency).collect()
    }

    /// `bin_lower,bin_upper,frequency` CSV; the open edge prints as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lower,bin_upper,frequency\n");
        for b in &self.bins {
            match b.upper {
                Some(u) => out.push_str(&format!("{},{},{}\n", b.lower, u, b.frequency)),
                None => out.push_str(&format!("{},inf,{}\n", b.lower, b.frequency)),
            }
        }
        out
    }
}

fn tally(doc: &RleDocument, kind: RunKind) -> RunHistogram {
    let mut hist = RunHistogram::new(kind);
    for row in doc.rows() {
        match kind {
            RunKind::Black => row.black_runs().for_each(|r| hist.add(r)),
            RunKind::White => row.white_runs().for_each(|r| hist.add(r)),
            RunKind::Combined => row.runs().iter().for_each(|&r| hist.add(r)),
        }
    }
    hist
}

pub fn black_run_histogram(doc: &RleDocument) -> RunHistogram {
    tally(doc, RunKind::Black)
}

pub fn white_run_histogram(doc: &RleDocument) -> RunHistogram {
    tally(doc, RunKind::White)
}

/// Black and white runs together; equal to the pointwise sum of
/// [`black_run_histogram`] and [`white_run_histogram`].
pub fn combined_run_histogram(doc: &RleDocument) -> RunHistogram {
    tally(doc, RunKind::Combined)
}

/// Zero-based bin index of a run length `>= 1`, before clamping.
fn dyadic_index(run: u64) -> usize {
    (u64::BITS - (run - 1).leading_zeros()) as usize
}

/// Edges of the `bin_count` logarithmic bins.
pub fn log_bin_edges(bin_count: usize) -> Result<Vec<(u64, Option<u64>)>, HistogramError> {
    if !(2..=MAX_LOG_BINS).contains(&bin_count) {
        return Err(HistogramError::InvalidBinCount(bin_count));
    }
    let mut edges = vec![(1, Some(1))];
    for i in 1..bin_count - 1 {
        edges.push(((1u64 << (i - 1)) + 1, Some(1u64 << i)));
    }
    edges.push(((1u64 << (bin_count - 2)) + 1, None));
    Ok(edges)
}

/// Rebins `hist` into `bin_count` dyadic bins: bin 1 is `[1]`, bin `i` covers
/// `[2^(i-2)+1, 2^(i-1)]`, and the last bin is open-ended.
pub fn log_scale_histogram(
    hist: &RunHistogram,
    bin_count: usize,
) -> Result<LogHistogram, HistogramError> {
    let edges = log_bin_edges(bin_count)?;
    let mut bins: Vec<LogBin> = edges
        .into_iter()
        .map(|(lower, upper)| LogBin {
            lower,
            upper,
            frequency: 0,
        })
        .collect();
    for (&len, &f) in &hist.counts {
        let idx = dyadic_index(len as u64).min(bin_count - 1);
        bins[idx].frequency += f;
    }
    Ok(LogHistogram {
        kind: hist.kind,
        bins,
    })
}

/// Rows that are a single white run of the full width.
pub fn blank_line_count(doc: &RleDocument) -> usize {
    doc.rows().iter().filter(|r| r.is_blank()).count()
}

/// Reference histogram built by scanning pixel rows for maximal runs.
pub fn run_histogram_oracle(image: &BitonalImage, kind: RunKind) -> RunHistogram {
    let mut hist = RunHistogram::new(kind);
    for row in image.rows() {
        let mut start = 0;
        while start < row.len() {
            let color = row[start];
            let mut end = start;
            while end < row.len() && row[end] == color {
                end += 1;
            }
            let wanted = match kind {
                RunKind::Black => color == 1,
                RunKind::White => color == 0,
                RunKind::Combined => true,
            };
            if wanted {
                hist.add(end - start);
            }
            start = end;
        }
    }
    hist
}

/// Reference blank-line count: rows without black pixels.
pub fn blank_line_count_oracle(image: &BitonalImage) -> usize {
    image.rows().filter(|r| r.iter().all(|&p| p == 0)).count()
}
