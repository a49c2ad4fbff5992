#![no_main]

use libfuzzer_sys::fuzz_target;
use rlefeat::verify::check_all;
use rlefeat::{decode_rle, read_rle_file, LogBase};

// Keeps decoded bitmaps small enough for the fuzzer's memory limit.
const MAX_PIXELS: usize = 1 << 20;

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = read_rle_file(data) else {
        return;
    };
    if doc.height().saturating_mul(doc.width()) > MAX_PIXELS {
        return;
    }
    let image = decode_rle(&doc).unwrap();
    for check in check_all(&doc, &image, LogBase::TWO) {
        assert!(check.passed(), "{}: {:?}", check.feature, check.result);
    }
});
