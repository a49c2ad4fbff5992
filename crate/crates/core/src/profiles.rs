//! Projection profiles.
//!
//! The row profile (black pixels per row) comes straight from the run lists
//! by summing every black run. The column profile (black pixels per column)
//! needs vertical information the run lists do not carry directly, so it is
//! computed by streaming the document column by column through one cursor per
//! row, without ever materializing the bitmap.
//!
//! Naming note: the row profile is what the document-analysis literature
//! usually calls VPP when derived from run summation, and the column profile
//! is its HPP counterpart.

use serde::{Deserialize, Serialize};

use crate::codec::{BitonalImage, RleDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// One value per row (length `m`).
    Row,
    /// One value per column (length `n`).
    Column,
}

/// Black-pixel counts along one axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub axis: Axis,
    pub values: Vec<usize>,
}

impl Profile {
    pub fn total(&self) -> usize {
        self.values.iter().sum()
    }

    /// `index,count` CSV with 1-based indices.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,count\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, v));
        }
        out
    }
}

/// Black pixels per row, from the run lists.
pub fn row_profile_compressed(doc: &RleDocument) -> Profile {
    row_profile_counted(doc).0
}

/// Same as [`row_profile_compressed`], also returning how many runs were read.
pub(crate) fn row_profile_counted(doc: &RleDocument) -> (Profile, usize) {
    let mut touches = 0usize;
    let values = doc
        .rows()
        .iter()
        .map(|row| {
            let mut black = 0;
            for (i, &run) in row.runs().iter().enumerate() {
                touches += 1;
                if i % 2 == 1 {
                    black += run;
                }
            }
            black
        })
        .collect();
    (
        Profile {
            axis: Axis::Row,
            values,
        },
        touches,
    )
}

#[derive(Debug, Clone, Copy)]
struct RowCursor {
    /// Index of the current run.
    run: usize,
    /// Pixels left in the current run.
    remaining: usize,
}

/// Column-ordered reader over a compressed document.
///
/// Keeps one [`RowCursor`] per row plus one `m`-bit column buffer; memory
/// use does not depend on the document width.
pub struct ColumnStream<'a> {
    doc: &'a RleDocument,
    cursors: Vec<RowCursor>,
    column: Vec<u8>,
    next: usize,
}

impl<'a> ColumnStream<'a> {
    pub fn new(doc: &'a RleDocument) -> Self {
        let cursors = doc
            .rows()
            .iter()
            .map(|row| RowCursor {
                run: 0,
                remaining: row.runs()[0],
            })
            .collect();
        Self {
            doc,
            cursors,
            column: vec![0; doc.height()],
            next: 0,
        }
    }

    /// Bits of the next column (top to bottom), or `None` past the last one.
    pub fn next_column(&mut self) -> Option<&[u8]> {
        if self.next >= self.doc.width() {
            return None;
        }
        for ((cursor, row), bit) in self
            .cursors
            .iter_mut()
            .zip(self.doc.rows())
            .zip(self.column.iter_mut())
        {
            // only the leading white run can be empty
            while cursor.remaining == 0 {
                cursor.run += 1;
                cursor.remaining = row.runs()[cursor.run];
            }
            cursor.remaining -= 1;
            *bit = (cursor.run % 2) as u8;
        }
        self.next += 1;
        Some(&self.column)
    }

    /// Number of per-row cursors held.
    pub fn cursor_count(&self) -> usize {
        self.cursors.len()
    }

    pub fn column_buffer_len(&self) -> usize {
        self.column.len()
    }
}

/// Calls `visitor(column_index, bits)` for every column in ascending order.
/// `column_index` is zero-based.
pub fn stream_columns<F>(doc: &RleDocument, mut visitor: F)
where
    F: FnMut(usize, &[u8]),
{
    let mut stream = ColumnStream::new(doc);
    let mut c = 0;
    while let Some(bits) = stream.next_column() {
        visitor(c, bits);
        c += 1;
    }
}

/// Black pixels per column, via [`stream_columns`].
pub fn column_profile_compressed(doc: &RleDocument) -> Profile {
    let mut values = Vec::with_capacity(doc.width());
    stream_columns(doc, |_, bits| {
        values.push(bits.iter().map(|&b| usize::from(b)).sum());
    });
    Profile {
        axis: Axis::Column,
        values,
    }
}

/// Reference row profile counted on the bitmap.
pub fn row_profile_oracle(image: &BitonalImage) -> Profile {
    Profile {
        axis: Axis::Row,
        values: image
            .rows()
            .map(|r| r.iter().filter(|&&p| p == 1).count())
            .collect(),
    }
}

/// Reference column profile counted on the bitmap.
pub fn column_profile_oracle(image: &BitonalImage) -> Profile {
    let mut values = vec![0usize; image.width()];
    for row in image.rows() {
        for (v, &p) in values.iter_mut().zip(row) {
            *v += usize::from(p);
        }
    }
    Profile {
        axis: Axis::Column,
        values,
    }
}
