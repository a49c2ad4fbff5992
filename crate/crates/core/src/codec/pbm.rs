//! Netpbm PBM reading (plain `P1` and raw `P4`) and `P4` writing.
//!
//! PBM already uses 1 for black, so pixel bits map straight through.

use super::{BitonalImage, CodecError};

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.data.get(self.pos).copied()
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_blank(&mut self) {
        while let Some(c) = self.peek() {
            if c == b'#' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn header_number(&mut self, what: &str) -> Result<usize, CodecError> {
        self.skip_blank();
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(usize::from(c - b'0')))
                .ok_or_else(|| CodecError::MalformedHeader {
                    offset: start,
                    detail: format!("{what} overflows"),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(match self.peek() {
                None => CodecError::TruncatedPayload {
                    offset: start,
                    detail: format!("missing {what}"),
                },
                Some(_) => CodecError::MalformedHeader {
                    offset: start,
                    detail: format!("expected decimal {what}"),
                },
            });
        }
        if value == 0 {
            return Err(CodecError::MalformedHeader {
                offset: start,
                detail: format!("{what} must be at least 1"),
            });
        }
        Ok(value)
    }
}

/// Parses a plain (`P1`) or raw (`P4`) PBM image.
pub fn read_pbm(bytes: &[u8]) -> Result<BitonalImage, CodecError> {
    let magic = match bytes.get(..2) {
        Some(m) => m,
        None => {
            return Err(CodecError::TruncatedPayload {
                offset: bytes.len(),
                detail: "missing magic number".into(),
            })
        }
    };
    let raw = match magic {
        b"P1" => false,
        b"P4" => true,
        other => {
            return Err(CodecError::UnsupportedMagic {
                found: String::from_utf8_lossy(other).into_owned(),
            })
        }
    };
    let mut cur = Cursor {
        data: bytes,
        pos: 2,
    };
    // the magic must be followed by whitespace or a comment
    match cur.peek() {
        Some(c) if c.is_ascii_whitespace() || c == b'#' => {}
        None => {
            return Err(CodecError::TruncatedPayload {
                offset: 2,
                detail: "missing width".into(),
            })
        }
        Some(_) => {
            return Err(CodecError::MalformedHeader {
                offset: 2,
                detail: "expected whitespace after magic".into(),
            })
        }
    }
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let area = width
        .checked_mul(height)
        .ok_or_else(|| CodecError::MalformedHeader {
            offset: cur.pos,
            detail: "image dimensions overflow".into(),
        })?;

    if raw {
        match cur.peek() {
            Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
            None => {
                return Err(CodecError::TruncatedPayload {
                    offset: cur.pos,
                    detail: "missing raster".into(),
                })
            }
            Some(_) => {
                return Err(CodecError::MalformedHeader {
                    offset: cur.pos,
                    detail: "expected single whitespace before raster".into(),
                })
            }
        }
        let stride = width.div_ceil(8);
        let start = cur.pos;
        let needed = stride.checked_mul(height);
        let available = bytes.len() - start;
        match needed {
            Some(n) if n <= available => {}
            _ => {
                return Err(CodecError::TruncatedPayload {
                    offset: bytes.len(),
                    detail: format!(
                        "raster needs {height} rows of {stride} bytes, {available} bytes present"
                    ),
                })
            }
        }
        let mut pixels = Vec::with_capacity(area);
        for row in bytes[start..].chunks_exact(stride).take(height) {
            for c in 0..width {
                pixels.push((row[c / 8] >> (7 - c % 8)) & 1);
            }
        }
        BitonalImage::new(height, width, pixels)
    } else {
        // every plain pixel takes at least one byte
        if area > bytes.len() - cur.pos {
            return Err(CodecError::TruncatedPayload {
                offset: bytes.len(),
                detail: format!("raster needs {area} pixels"),
            });
        }
        let mut pixels = Vec::with_capacity(area);
        for _ in 0..area {
            cur.skip_blank();
            match cur.peek() {
                Some(b'0') => pixels.push(0),
                Some(b'1') => pixels.push(1),
                None => {
                    return Err(CodecError::TruncatedPayload {
                        offset: cur.pos,
                        detail: format!("raster ended after {} of {area} pixels", pixels.len()),
                    })
                }
                Some(c) => {
                    return Err(CodecError::MalformedHeader {
                        offset: cur.pos,
                        detail: format!("invalid plain PBM pixel {:?}", c as char),
                    })
                }
            }
            cur.pos += 1;
        }
        BitonalImage::new(height, width, pixels)
    }
}

/// Serializes as raw `P4` with MSB-first, byte-padded rows.
pub fn write_pbm(image: &BitonalImage) -> Vec<u8> {
    let stride = image.width().div_ceil(8);
    let header = format!("P4\n{} {}\n", image.width(), image.height());
    let mut out = Vec::with_capacity(header.len() + stride * image.height());
    out.extend_from_slice(header.as_bytes());
    for row in image.rows() {
        for chunk in row.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &p)| acc | (p << (7 - i)));
            out.push(byte);
        }
    }
    out
}
