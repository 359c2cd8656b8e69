#![no_main]

use libfuzzer_sys::fuzz_target;
use poset_dist_cli::inputs::{is_file_reference, load_dist};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if !is_file_reference(text) {
        let _ = load_dist(text);
    }
});
