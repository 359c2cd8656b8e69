//! Manifest runner: one config path per line, run in parallel.

use std::path::{Path, PathBuf};

use poset_dist::par::par_map;

use crate::commands::execute;
use crate::config::{ExperimentConfig, Verb};
use crate::csv::{Table, Word};
use crate::error::{read, Result, EXIT_OK};

/// Config paths listed by a manifest, resolved against its directory.
pub fn parse_manifest(text: &str, dir: &Path) -> Vec<PathBuf> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| dir.join(l))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowOutcome {
    pub criterion: u32,
    pub exit: i32,
    pub pass: bool,
}

fn run_row(path: &Path, seed: u64) -> RowOutcome {
    let loaded = read(path).and_then(|t| ExperimentConfig::parse(&t));
    let mut cfg = match loaded {
        Ok(c) => c,
        Err(e) => {
            return RowOutcome {
                criterion: 0,
                exit: e.exit_code(),
                pass: false,
            }
        }
    };
    cfg.rebase(path.parent().unwrap_or(Path::new(".")));
    cfg.seed ^= seed;
    let criterion = if cfg.verb == Verb::Criterion { cfg.criterion.unwrap_or(0) } else { 0 };
    match execute(&cfg) {
        Ok(csv) => RowOutcome {
            criterion,
            exit: EXIT_OK,
            pass: cfg.verb != Verb::Criterion || csv.lines().nth(1).is_some_and(|l| l.split(',').nth(1) == Some("pass")),
        },
        Err(e) => RowOutcome {
            criterion,
            exit: e.exit_code(),
            pass: false,
        },
    }
}

/// Runs every row; row `i` gets seed `master ^ i` mixed into its own.
pub fn run_suite(manifest: &Path, master: u64) -> Result<(String, Vec<RowOutcome>)> {
    let dir = manifest.parent().unwrap_or(Path::new("."));
    let rows = parse_manifest(&read(manifest)?, dir);
    let outcomes = par_map(rows.len(), |i| run_row(&rows[i], master ^ i as u64));
    let mut t = Table::new(&["row", "criterion", "exit", "result"]);
    for (i, o) in outcomes.iter().enumerate() {
        t.push(vec![
            i.into(),
            u64::from(o.criterion).into(),
            u64::from(o.exit.unsigned_abs()).into(),
            Word::verdict(o.pass).into(),
        ])?;
    }
    Ok((t.render(), outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lines() {
        let rows = parse_manifest("# header\n\na.conf\n  b.conf # note\n", Path::new("m"));
        assert_eq!(rows, vec![PathBuf::from("m/a.conf"), PathBuf::from("m/b.conf")]);
    }

    #[test]
    fn failing_rows_are_marked() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("ok.conf"), "verb = oracle\nposet = line2\ndist = (0.5,0.5)\n").unwrap();
        std::fs::write(dir.path().join("bad.conf"), "verb = oracle\nposet = line2\n").unwrap();
        std::fs::write(dir.path().join("m.manifest"), "ok.conf\nbad.conf\nmissing.conf\n").unwrap();
        let (csv, rows) = run_suite(&dir.path().join("m.manifest"), 7).unwrap();
        assert_eq!(csv, "row,criterion,exit,result\n0,0,0,pass\n1,0,2,fail\n2,0,2,fail\n");
        assert_eq!(rows.len(), 3);
        std::fs::write(dir.path().join("e.manifest"), "# nothing\n").unwrap();
        assert_eq!(run_suite(&dir.path().join("e.manifest"), 0).unwrap().0, "row,criterion,exit,result\n");
    }
}
