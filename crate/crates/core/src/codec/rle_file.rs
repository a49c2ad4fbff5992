//! `RLE1` text container.
//!
//! ```text
//! RLE1
//! <m> <n>
//! <runs of row 1>
//! ...
//! <runs of row m>
//! ```
//!
//! Runs are white-first decimal lengths separated by a single space. Every
//! line, including the last, ends with LF. The reader only accepts the exact
//! form the writer produces, so `write(read(bytes)) == bytes` for any input
//! that parses.

use super::{CodecError, RleDocument, RunRow};

pub const RLE_MAGIC: &str = "RLE1";

struct Lines<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Lines<'a> {
    /// Next LF-terminated line and its starting offset.
    fn next_line(&mut self) -> Option<Result<(usize, &'a [u8]), CodecError>> {
        if self.pos >= self.data.len() {
            return None;
        }
        let start = self.pos;
        let rest = &self.data[start..];
        Some(match rest.iter().position(|&b| b == b'\n') {
            Some(end) => {
                self.pos = start + end + 1;
                Ok((start, &rest[..end]))
            }
            None => {
                self.pos = self.data.len();
                Err(CodecError::TruncatedPayload {
                    offset: self.data.len(),
                    detail: "missing final line feed".into(),
                })
            }
        })
    }
}

/// Iterates `(offset, value)` for each space-separated decimal in a line.
fn numbers(
    line: &[u8],
    line_offset: usize,
) -> impl Iterator<Item = Result<(usize, usize), CodecError>> + '_ {
    let mut start = 0usize;
    std::iter::from_fn(move || {
        if start > line.len() {
            return None;
        }
        let end = line[start..]
            .iter()
            .position(|&b| b == b' ')
            .map_or(line.len(), |p| start + p);
        let token = &line[start..end];
        let offset = line_offset + start;
        start = end + 1;
        Some(parse_decimal(token, offset).map(|v| (offset, v)))
    })
}

fn parse_decimal(token: &[u8], offset: usize) -> Result<usize, CodecError> {
    let malformed = |detail: &str| CodecError::MalformedHeader {
        offset,
        detail: detail.to_string(),
    };
    if token.is_empty() {
        return Err(malformed("expected a decimal number"));
    }
    if token.len() > 1 && token[0] == b'0' {
        return Err(malformed("leading zero in number"));
    }
    let mut value: usize = 0;
    for &c in token {
        if !c.is_ascii_digit() {
            return Err(malformed(&format!("unexpected byte {:?}", c as char)));
        }
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(usize::from(c - b'0')))
            .ok_or_else(|| malformed("number overflows"))?;
    }
    Ok(value)
}

/// Parses an `RLE1` container.
pub fn read_rle_file(bytes: &[u8]) -> Result<RleDocument, CodecError> {
    let mut lines = Lines {
        data: bytes,
        pos: 0,
    };

    match lines.next_line() {
        Some(Ok((_, l))) if l == RLE_MAGIC.as_bytes() => {}
        Some(Err(e)) if bytes == RLE_MAGIC.as_bytes() => return Err(e),
        _ => return Err(CodecError::BadMagic),
    }

    let (dims_offset, dims) = match lines.next_line() {
        Some(l) => l?,
        None => {
            return Err(CodecError::TruncatedPayload {
                offset: bytes.len(),
                detail: "missing dimensions line".into(),
            })
        }
    };
    let dims: Vec<(usize, usize)> = numbers(dims, dims_offset).collect::<Result<_, _>>()?;
    let (height, width) = match dims[..] {
        [(_, m), (_, n)] => (m, n),
        _ => {
            return Err(CodecError::MalformedHeader {
                offset: dims_offset,
                detail: "dimensions line must be `<m> <n>`".into(),
            })
        }
    };
    if height == 0 || width == 0 {
        return Err(CodecError::DimensionMismatch {
            detail: format!("document must be at least 1x1, got {height}x{width}"),
            offset: Some(dims_offset),
        });
    }

    let mut rows = Vec::new();
    for r in 0..height {
        let (line_offset, line) = match lines.next_line() {
            Some(l) => l?,
            None => {
                return Err(CodecError::DimensionMismatch {
                    detail: format!("header declares {height} rows, found {r}"),
                    offset: Some(bytes.len()),
                })
            }
        };
        let mut runs = Vec::new();
        let mut sum: u128 = 0;
        for item in numbers(line, line_offset) {
            let (offset, run) = item?;
            if run == 0 && !runs.is_empty() {
                return Err(CodecError::NonAlternatingZero {
                    row: r,
                    position: runs.len() + 1,
                    offset: Some(offset),
                });
            }
            sum += run as u128;
            // a row never needs more than width + 1 runs
            if sum > width as u128 || runs.len() > width {
                break;
            }
            runs.push(run);
        }
        if sum != width as u128 {
            return Err(CodecError::InvalidRunSum {
                row: r,
                sum,
                width,
                offset: Some(line_offset),
            });
        }
        rows.push(RunRow { runs });
    }

    if lines.pos < bytes.len() {
        return Err(CodecError::DimensionMismatch {
            detail: format!("data after the {height} declared rows"),
            offset: Some(lines.pos),
        });
    }

    RleDocument::new(width, rows).map_err(|e| e.with_offset(0))
}

/// Serializes a document in the `RLE1` container format.
pub fn write_rle_file(doc: &RleDocument) -> Vec<u8> {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "{RLE_MAGIC}");
    let _ = writeln!(out, "{} {}", doc.height(), doc.width());
    for row in doc.rows() {
        let mut first = true;
        for run in row.runs() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{run}");
        }
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "RLE1\n3 5\n1 2 2\n0 2 2 1\n5\n";

    #[test]
    fn reads_and_writes_exactly() {
        let doc = read_rle_file(SMALL.as_bytes()).unwrap();
        assert_eq!(doc.height(), 3);
        assert_eq!(doc.width(), 5);
        assert_eq!(doc.rows()[1].runs(), &[0, 2, 2, 1]);
        assert_eq!(write_rle_file(&doc), SMALL.as_bytes());
    }

    fn err(s: &str) -> CodecError {
        read_rle_file(s.as_bytes()).unwrap_err()
    }

    #[test]
    fn header_errors() {
        assert_eq!(err(""), CodecError::BadMagic);
        assert_eq!(err("RLE2\n1 1\n1\n"), CodecError::BadMagic);
        assert!(matches!(err("RLE1"), CodecError::TruncatedPayload { .. }));
        assert!(matches!(err("RLE1\n"), CodecError::TruncatedPayload { .. }));
        assert!(matches!(
            err("RLE1\n0 5\n"),
            CodecError::DimensionMismatch { .. }
        ));
        assert!(matches!(
            err("RLE1\n1  5\n5\n"),
            CodecError::MalformedHeader { offset: 7, .. }
        ));
        assert!(matches!(
            err("RLE1\n1 5 3\n5\n"),
            CodecError::MalformedHeader { .. }
        ));
        assert!(matches!(
            err("RLE1\n01 5\n5\n"),
            CodecError::MalformedHeader { .. }
        ));
    }

    #[test]
    fn row_errors() {
        assert!(matches!(
            err("RLE1\n2 5\n5\n"),
            CodecError::DimensionMismatch { .. }
        ));
        assert!(matches!(
            err("RLE1\n1 5\n5\n5\n"),
            CodecError::DimensionMismatch {
                offset: Some(11),
                ..
            }
        ));
        assert!(matches!(
            err("RLE1\n1 5\n1 2 1\n"),
            CodecError::InvalidRunSum {
                row: 0,
                sum: 4,
                offset: Some(9),
                ..
            }
        ));
        assert!(matches!(
            err("RLE1\n1 5\n2 0 3\n"),
            CodecError::NonAlternatingZero {
                row: 0,
                position: 2,
                offset: Some(11),
            }
        ));
        assert!(matches!(
            err("RLE1\n1 5\n5"),
            CodecError::TruncatedPayload { .. }
        ));
        assert!(matches!(
            err("RLE1\n1 5\n\n"),
            CodecError::MalformedHeader { .. }
        ));
        assert!(matches!(
            err("RLE1\n1 5\n5 \n"),
            CodecError::MalformedHeader { .. }
        ));
        assert!(matches!(
            err("RLE1\n1 5\n5\r\n"),
            CodecError::MalformedHeader { .. }
        ));
        assert!(matches!(
            err("RLE1\n1 2\n99999999999999999999999 1\n"),
            CodecError::MalformedHeader { .. }
        ));
    }
}
