#![no_main]

use jetmodes::io::parse_spectrum_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_spectrum_csv(data);
});
