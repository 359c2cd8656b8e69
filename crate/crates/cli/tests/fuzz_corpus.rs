//! Replays the checked-in fuzz seeds through the parsers they target.

use std::path::{Path, PathBuf};

use poset_dist::formats::{
    parse_distribution, parse_histogram_csv, parse_poset, write_distribution, write_histogram_csv, write_poset,
};
use poset_dist_cli::config::ExperimentConfig;
use poset_dist_cli::inputs::{is_file_reference, load_dist};
use poset_dist_cli::suite::parse_manifest;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(PathBuf, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn poset_seeds() {
    let mut ok = 0;
    for (_, text) in seeds("parse_poset") {
        if let Ok(g) = parse_poset(&text) {
            let again = parse_poset(&write_poset(&g)).unwrap();
            assert_eq!((again.n(), again.kind()), (g.n(), g.kind()));
            ok += 1;
        }
    }
    assert!(ok >= 5);
}

#[test]
fn distribution_seeds() {
    for (p, text) in seeds("parse_distribution") {
        match parse_distribution(&text) {
            Ok(d) => assert_eq!(parse_distribution(&write_distribution(&d)).unwrap().probs(), d.probs()),
            Err(_) => assert!(p.ends_with("bad_sum")),
        }
    }
}

#[test]
fn histogram_seeds() {
    for (p, text) in seeds("parse_histogram_csv") {
        match parse_histogram_csv(&text, None) {
            Ok(h) => {
                let again = parse_histogram_csv(&write_histogram_csv(&h), Some(h.len())).unwrap();
                assert_eq!(again.counts(), h.counts());
            }
            Err(_) => assert!(p.ends_with("overflow") || p.ends_with("duplicate"), "{}", p.display()),
        }
    }
}

#[test]
fn config_seeds() {
    for (p, text) in seeds("parse_config") {
        match ExperimentConfig::parse(&text) {
            Ok(c) => assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c),
            Err(_) => assert!(p.ends_with("repeated")),
        }
    }
}

#[test]
fn manifest_seeds() {
    for (_, text) in seeds("parse_manifest") {
        for row in parse_manifest(&text, Path::new("m")) {
            assert!(row.starts_with("m") || row.is_absolute());
        }
    }
}

#[test]
fn inline_dist_seeds() {
    for (p, text) in seeds("load_inline_dist") {
        assert!(!is_file_reference(&text));
        let ok = load_dist(&text).is_ok();
        assert_eq!(ok, p.ends_with("pair") || p.ends_with("point"), "{}", p.display());
    }
}
