#![no_main]

use libfuzzer_sys::fuzz_target;
use poset_dist::formats::{parse_distribution, write_distribution};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_distribution(text) {
        let again = parse_distribution(&write_distribution(&p)).expect("written distribution parses");
        assert_eq!(again.probs(), p.probs());
    }
});
