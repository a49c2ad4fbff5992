#![no_main]

use libfuzzer_sys::fuzz_target;
use rlefeat::{decode_rle, encode_rle, read_pbm, write_pbm};

fuzz_target!(|data: &[u8]| {
    // must never panic; anything that parses must survive a round trip
    if let Ok(image) = read_pbm(data) {
        let doc = encode_rle(&image);
        assert_eq!(decode_rle(&doc).unwrap(), image);
        assert_eq!(read_pbm(&write_pbm(&image)).unwrap(), image);
    }
});
