#![no_main]

use libfuzzer_sys::fuzz_target;
use poset_dist::formats::{parse_poset, write_poset};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_poset(text) {
        let again = parse_poset(&write_poset(&g)).expect("written poset parses");
        assert_eq!(again.n(), g.n());
        assert_eq!(again.kind(), g.kind());
    }
});
