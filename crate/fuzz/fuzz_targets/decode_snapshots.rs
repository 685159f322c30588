#![no_main]

use jetmodes::io::{decode_snapshots, encode_snapshots};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = decode_snapshots(data) {
        assert_eq!(encode_snapshots(&s), data);
    }
});
