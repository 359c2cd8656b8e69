#![no_main]

use std::path::Path;

use libfuzzer_sys::fuzz_target;
use poset_dist_cli::suite::parse_manifest;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for row in parse_manifest(text, Path::new("m")) {
        assert!(row.starts_with("m") || row.is_absolute());
    }
});
