#![no_main]

use growthlab::poly::parse_polynomial;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = parse_polynomial(s) {
            // printing must round-trip
            assert_eq!(parse_polynomial(&f.to_string()).ok(), Some(f));
        }
    }
});
