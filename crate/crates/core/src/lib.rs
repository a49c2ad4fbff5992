//! Document-image features computed directly on run-length compressed
//! bitonal images: projection profiles, run-length histograms and the CEQ /
//! SEQ transition entropies.
//!
//! Every compressed-domain extractor has an uncompressed reference next to
//! it (`*_oracle`), and [`verify`] checks that the two agree exactly.
//! [`bench`] times both paths.

pub mod bench;
pub mod codec;
pub mod entropy;
pub mod histograms;
pub mod profiles;
pub mod verify;

pub use codec::{
    decode_rle, encode_rle, padded_matrix_view, read_pbm, read_rle_file, write_pbm, write_rle_file,
    BitonalImage, CodecError, RleDocument, RunRow,
};
pub use entropy::LogBase;
