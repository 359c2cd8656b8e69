#![no_main]

use libfuzzer_sys::fuzz_target;
use poset_dist::formats::{parse_histogram_csv, write_histogram_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(h) = parse_histogram_csv(text, None) {
        let again = parse_histogram_csv(&write_histogram_csv(&h), Some(h.len())).expect("written histogram parses");
        assert_eq!(again.counts(), h.counts());
    }
});
