//! Poset and distribution arguments: a file path, a builtin name, or an
//! inline list.

use std::path::Path;

use poset_dist::formats::{parse_distribution, parse_poset, MAX_PARSED_DOMAIN};
use poset_dist::poset::{make_hypercube, make_line, make_matching};
use poset_dist::{Distribution, Poset};

use crate::error::{invalid, read, Result};

fn builtin(s: &str) -> Option<(&'static str, usize)> {
    for prefix in ["line", "matching", "hypercube"] {
        if let Some(rest) = s.strip_prefix(prefix) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return rest.parse().ok().map(|k| (prefix, k));
            }
        }
    }
    None
}

fn inline(s: &str) -> Option<&str> {
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')'))
}

/// Whether the argument names a file rather than a builtin or inline value.
pub fn is_file_reference(s: &str) -> bool {
    builtin(s).is_none() && inline(s).is_none()
}

/// `lineN`, `matchingK` (K pairs), `hypercubeD`, or a poset file.
pub fn load_poset(spec: &str) -> Result<Poset> {
    if let Some((kind, k)) = builtin(spec) {
        if k == 0 || k > MAX_PARSED_DOMAIN {
            return Err(invalid(format!("builtin poset size {k} out of range")));
        }
        return Ok(match kind {
            "line" => make_line(k)?,
            "matching" => make_matching(k)?,
            _ => make_hypercube(u32::try_from(k).map_err(|_| invalid("hypercube dimension too large"))?)?,
        });
    }
    Ok(parse_poset(&read(Path::new(spec))?)?)
}

/// `(p1,p2,...)` or a distribution file.
pub fn load_dist(spec: &str) -> Result<Distribution> {
    if let Some(body) = inline(spec) {
        let probs = body
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| invalid(format!("`{}` is not a finite number", x.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Distribution::new(probs)?);
    }
    if builtin(spec).is_some() {
        return Err(invalid(format!("`{spec}` is a poset name, not a distribution")));
    }
    Ok(parse_distribution(&read(Path::new(spec))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use poset_dist::PosetKind;

    #[test]
    fn builtins_and_inline() {
        assert_eq!(load_poset("line3").unwrap().kind(), PosetKind::Line);
        assert_eq!(load_poset("matching4").unwrap().n(), 8);
        assert_eq!(load_poset("hypercube3").unwrap().n(), 8);
        assert!(load_poset("line0").is_err());
        assert!(load_poset("hypercube99").is_err());
        assert_eq!(load_dist("(0.5, 0.3,0.2)").unwrap().probs(), &[0.5, 0.3, 0.2]);
        assert!(load_dist("(0.5,0.4)").is_err());
        assert!(load_dist("(0.5,x)").is_err());
        assert!(load_dist("line3").is_err());
        assert!(is_file_reference("dir/p.txt"));
        assert!(!is_file_reference("(1)"));
        assert!(load_poset("/nonexistent/file").is_err());
    }
}
