#![no_main]

use libfuzzer_sys::fuzz_target;
use rlefeat::{read_rle_file, write_rle_file};

fuzz_target!(|data: &[u8]| {
    if let Ok(doc) = read_rle_file(data) {
        // the reader only accepts the canonical form
        assert_eq!(write_rle_file(&doc), data);
    }
});
