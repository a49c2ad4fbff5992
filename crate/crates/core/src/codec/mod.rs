//! Bitonal images and their run-length compressed form.
//!
//! A [`BitonalImage`] is the plain `m x n` pixel grid (1 = black ink,
//! 0 = white background). An [`RleDocument`] stores each pixel row as a
//! [`RunRow`]: alternating run lengths that always start with a white run.
//! When a row begins with a black pixel that first white run has length 0,
//! so `10000000000000` encodes as `[0, 1, 13]`.
//!
//! Rows are stored ragged. The zero-padded rectangular table that is often
//! used to present run-length data is available through
//! [`RleDocument::padded_matrix`], but padding never participates in any
//! computation.

mod pbm;
mod rle_file;

pub use pbm::{read_pbm, write_pbm};
pub use rle_file::{read_rle_file, write_rle_file, RLE_MAGIC};

use std::fmt;

/// Errors produced while constructing, converting or parsing images.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("row {row}: runs sum to {sum}, expected width {width}{}", at(.offset))]
    InvalidRunSum {
        row: usize,
        sum: u128,
        width: usize,
        offset: Option<usize>,
    },
    #[error("row {row}: zero-length run at position {position}{}", at(.offset))]
    NonAlternatingZero {
        row: usize,
        position: usize,
        offset: Option<usize>,
    },
    #[error("dimension mismatch{}: {detail}", at(.offset))]
    DimensionMismatch {
        detail: String,
        offset: Option<usize>,
    },
    #[error("bad magic at byte 0: expected `RLE1`")]
    BadMagic,
    #[error("unsupported magic {found:?} at byte 0")]
    UnsupportedMagic { found: String },
    #[error("malformed header at byte {offset}: {detail}")]
    MalformedHeader { offset: usize, detail: String },
    #[error("truncated payload at byte {offset}: {detail}")]
    TruncatedPayload { offset: usize, detail: String },
}

fn at(offset: &Option<usize>) -> String {
    match offset {
        Some(o) => format!(" at byte {o}"),
        None => String::new(),
    }
}

impl CodecError {
    /// Byte offset into the parsed input, when the error came from a parser.
    pub fn offset(&self) -> Option<usize> {
        match self {
            CodecError::InvalidRunSum { offset, .. }
            | CodecError::NonAlternatingZero { offset, .. }
            | CodecError::DimensionMismatch { offset, .. } => *offset,
            CodecError::BadMagic | CodecError::UnsupportedMagic { .. } => Some(0),
            CodecError::MalformedHeader { offset, .. }
            | CodecError::TruncatedPayload { offset, .. } => Some(*offset),
        }
    }

    pub(crate) fn with_offset(self, at: usize) -> Self {
        match self {
            CodecError::InvalidRunSum {
                row, sum, width, ..
            } => CodecError::InvalidRunSum {
                row,
                sum,
                width,
                offset: Some(at),
            },
            CodecError::NonAlternatingZero { row, position, .. } => {
                CodecError::NonAlternatingZero {
                    row,
                    position,
                    offset: Some(at),
                }
            }
            CodecError::DimensionMismatch { detail, .. } => CodecError::DimensionMismatch {
                detail,
                offset: Some(at),
            },
            other => other,
        }
    }
}

/// Uncompressed `height x width` binary pixel grid, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitonalImage {
    height: usize,
    width: usize,
    pixels: Vec<u8>,
}

impl BitonalImage {
    /// Builds an image from row-major pixels. Any non-zero byte is black.
    pub fn new(height: usize, width: usize, pixels: Vec<u8>) -> Result<Self, CodecError> {
        if height == 0 || width == 0 {
            return Err(CodecError::DimensionMismatch {
                detail: format!("image must be at least 1x1, got {height}x{width}"),
                offset: None,
            });
        }
        if height.checked_mul(width) != Some(pixels.len()) {
            return Err(CodecError::DimensionMismatch {
                detail: format!(
                    "{} pixels supplied for a {height}x{width} image",
                    pixels.len()
                ),
                offset: None,
            });
        }
        let pixels = pixels.into_iter().map(|p| u8::from(p != 0)).collect();
        Ok(Self {
            height,
            width,
            pixels,
        })
    }

    /// All-white image.
    pub fn blank(height: usize, width: usize) -> Result<Self, CodecError> {
        Self::new(height, width, vec![0; height.saturating_mul(width)])
    }

    /// Parses rows of `0`/`1` characters, e.g. `["0110", "1000"]`.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self, CodecError> {
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut pixels = Vec::with_capacity(rows.len() * width);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != width {
                return Err(CodecError::DimensionMismatch {
                    detail: format!("row {r} has {} pixels, expected {width}", row.len()),
                    offset: None,
                });
            }
            for c in row.bytes() {
                match c {
                    b'0' => pixels.push(0),
                    b'1' => pixels.push(1),
                    _ => {
                        return Err(CodecError::DimensionMismatch {
                            detail: format!("row {r} contains {:?}", c as char),
                            offset: None,
                        })
                    }
                }
            }
        }
        Self::new(rows.len(), width, pixels)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Pixel at zero-based `(row, col)`; 1 is black.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u8]> {
        self.pixels.chunks_exact(self.width)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn black_pixel_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 1).count()
    }

    pub fn transpose(&self) -> Self {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for c in 0..self.width {
            for r in 0..self.height {
                pixels.push(self.get(r, c));
            }
        }
        Self {
            height: self.width,
            width: self.height,
            pixels,
        }
    }

    /// Swaps black and white.
    pub fn complement(&self) -> Self {
        Self {
            height: self.height,
            width: self.width,
            pixels: self.pixels.iter().map(|p| p ^ 1).collect(),
        }
    }
}

impl fmt::Debug for BitonalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitonalImage {}x{}", self.height, self.width)?;
        for row in self.rows() {
            let s: String = row
                .iter()
                .map(|&p| if p == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// One compressed pixel row: white-first alternating run lengths.
///
/// Position 1 (index 0) is white and may be 0. Every later run is at least
/// 1 pixel long, odd indices are black and even indices are white.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunRow {
    runs: Vec<usize>,
}

impl RunRow {
    /// Validates the alternation rule. The width check happens in
    /// [`RleDocument::new`], which knows the document width.
    pub fn new(runs: Vec<usize>) -> Result<Self, CodecError> {
        if runs.is_empty() {
            return Err(CodecError::InvalidRunSum {
                row: 0,
                sum: 0,
                width: 0,
                offset: None,
            });
        }
        if let Some(i) = runs.iter().skip(1).position(|&r| r == 0) {
            return Err(CodecError::NonAlternatingZero {
                row: 0,
                position: i + 2,
                offset: None,
            });
        }
        Ok(Self { runs })
    }

    /// Maximal-run decomposition of one pixel row.
    pub fn encode(pixels: &[u8]) -> Self {
        let mut runs = Vec::new();
        let mut color = 0u8;
        let mut len = 0usize;
        for &p in pixels {
            if p == color {
                len += 1;
            } else {
                runs.push(len);
                color = p;
                len = 1;
            }
        }
        runs.push(len);
        Self { runs }
    }

    pub fn runs(&self) -> &[usize] {
        &self.runs
    }

    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Runs at even positions (1-based), i.e. the black runs.
    pub fn black_runs(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.iter().skip(1).step_by(2).copied()
    }

    /// Runs at odd positions (1-based) with non-zero length.
    pub fn white_runs(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.iter().step_by(2).copied().filter(|&r| r > 0)
    }

    /// Pixel count represented by the row.
    pub fn pixel_sum(&self) -> u128 {
        self.runs.iter().map(|&r| r as u128).sum()
    }

    /// True when the row is a single white run.
    pub fn is_blank(&self) -> bool {
        self.runs.len() == 1
    }

    /// Appends the expanded pixels of this row to `out`.
    pub fn expand_into(&self, out: &mut Vec<u8>) {
        for (i, &len) in self.runs.iter().enumerate() {
            let bit = (i % 2) as u8;
            out.extend(std::iter::repeat_n(bit, len));
        }
    }
}

/// Run-length compressed document: `height` rows of [`RunRow`], each
/// summing to `width` pixels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RleDocument {
    height: usize,
    width: usize,
    rows: Vec<RunRow>,
}

impl RleDocument {
    pub fn new(width: usize, rows: Vec<RunRow>) -> Result<Self, CodecError> {
        if rows.is_empty() || width == 0 {
            return Err(CodecError::DimensionMismatch {
                detail: format!("document must be at least 1x1, got {}x{width}", rows.len()),
                offset: None,
            });
        }
        for (r, row) in rows.iter().enumerate() {
            let sum = row.pixel_sum();
            if sum != width as u128 {
                return Err(CodecError::InvalidRunSum {
                    row: r,
                    sum,
                    width,
                    offset: None,
                });
            }
        }
        Ok(Self {
            height: rows.len(),
            width,
            rows,
        })
    }

    /// Convenience constructor from raw run lists.
    pub fn from_runs(width: usize, rows: Vec<Vec<usize>>) -> Result<Self, CodecError> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(r, runs)| {
                RunRow::new(runs).map_err(|e| match e {
                    CodecError::NonAlternatingZero { position, .. } => {
                        CodecError::NonAlternatingZero {
                            row: r,
                            position,
                            offset: None,
                        }
                    }
                    CodecError::InvalidRunSum { .. } => CodecError::InvalidRunSum {
                        row: r,
                        sum: 0,
                        width,
                        offset: None,
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(width, rows)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[RunRow] {
        &self.rows
    }

    /// Maximum run count over all rows (the padded column count `n'`).
    pub fn padded_width(&self) -> usize {
        self.rows.iter().map(RunRow::len).max().unwrap_or(0)
    }

    pub fn total_runs(&self) -> usize {
        self.rows.iter().map(RunRow::len).sum()
    }

    /// Rectangular `height x padded_width` view, rows right-padded with 0.
    pub fn padded_matrix(&self) -> Vec<Vec<usize>> {
        let cols = self.padded_width();
        self.rows
            .iter()
            .map(|row| {
                let mut v = row.runs.clone();
                v.resize(cols, 0);
                v
            })
            .collect()
    }
}

/// Compresses an image row by row.
pub fn encode_rle(image: &BitonalImage) -> RleDocument {
    RleDocument {
        height: image.height(),
        width: image.width(),
        rows: image.rows().map(RunRow::encode).collect(),
    }
}

/// Expands every row back into pixels.
pub fn decode_rle(doc: &RleDocument) -> Result<BitonalImage, CodecError> {
    let mut pixels = Vec::with_capacity(doc.height * doc.width);
    for (r, row) in doc.rows.iter().enumerate() {
        let sum = row.pixel_sum();
        if sum != doc.width as u128 {
            return Err(CodecError::InvalidRunSum {
                row: r,
                sum,
                width: doc.width,
                offset: None,
            });
        }
        row.expand_into(&mut pixels);
    }
    Ok(BitonalImage {
        height: doc.height,
        width: doc.width,
        pixels,
    })
}

/// Same as [`RleDocument::padded_matrix`].
pub fn padded_matrix_view(doc: &RleDocument) -> Vec<Vec<usize>> {
    doc.padded_matrix()
}
