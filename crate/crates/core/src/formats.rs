//! Text formats for posets, distributions and sample histograms.
//!
//! Poset file: a header `n m kind`, then `m` lines `u v` (0-based), and for
//! bipartite posets a final `bottom: i1 i2 …` line. Distribution file: one
//! probability per line. Histogram CSV: `index,count` rows under an
//! optional header.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::poset::{make_hypercube, make_line, Poset, PosetKind};
use crate::prob::{Distribution, SampleHistogram};

/// Largest vertex count or histogram domain accepted from text.
pub const MAX_PARSED_DOMAIN: usize = 1 << 22;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with `#` comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| perr(line, format!("{what} `{tok}` is not a nonnegative integer")))
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header `n m kind`"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(perr(hl, "header must be `n m kind`"));
    }
    let n = parse_usize(hl, toks[0], "n")?;
    let m = parse_usize(hl, toks[1], "m")?;
    let kind = PosetKind::parse(toks[2]).ok_or_else(|| perr(hl, format!("unknown kind `{}`", toks[2])))?;
    if n == 0 || n > MAX_PARSED_DOMAIN {
        return Err(perr(hl, format!("n must lie in 1..={MAX_PARSED_DOMAIN}")));
    }
    let mut edges = Vec::with_capacity(m.min(1 << 20));
    for k in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| perr(hl, format!("expected {m} edges, found {k}")))?;
        let mut it = l.split_whitespace();
        let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(perr(ln, "edge line must be `u v`"));
        };
        let u = parse_usize(ln, u, "vertex")?;
        let v = parse_usize(ln, v, "vertex")?;
        if u >= n || v >= n {
            return Err(perr(ln, format!("vertex out of range for n = {n}")));
        }
        edges.push((u, v));
    }
    let poset = match kind {
        PosetKind::General => Poset::general(n, edges)?,
        PosetKind::Matching => Poset::matching(n, edges)?,
        PosetKind::Bipartite => {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| perr(hl, "bipartite poset needs a `bottom:` line"))?;
            let rest = l
                .strip_prefix("bottom:")
                .ok_or_else(|| perr(ln, "expected `bottom: i1 i2 …`"))?;
            let bottoms = rest
                .split_whitespace()
                .map(|t| parse_usize(ln, t, "bottom vertex"))
                .collect::<Result<Vec<_>>>()?;
            Poset::bipartite(n, edges, bottoms)?
        }
        PosetKind::Line => {
            let g = make_line(n)?;
            if sorted(&edges) != sorted(g.edges()) {
                return Err(perr(hl, "edges do not form the line 0 → 1 → … → n−1"));
            }
            g
        }
        PosetKind::Hypercube => {
            if !n.is_power_of_two() || n < 2 {
                return Err(perr(hl, format!("hypercube size {n} is not 2^d with d ≥ 1")));
            }
            let g = make_hypercube(n.trailing_zeros())?;
            if sorted(&edges) != sorted(g.edges()) {
                return Err(perr(hl, "edges are not the single-bit upward flips"));
            }
            g
        }
    };
    if let Some((ln, _)) = lines.next() {
        return Err(perr(ln, "unexpected trailing content"));
    }
    Ok(poset)
}

fn sorted(e: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut v = e.to_vec();
    v.sort_unstable();
    v
}

pub fn write_poset(g: &Poset) -> String {
    let mut out = format!("{} {} {}\n", g.n(), g.edges().len(), g.kind());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    if g.kind() == PosetKind::Bipartite {
        out.push_str("bottom:");
        for b in g.bottoms() {
            let _ = write!(out, " {b}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_distribution(text: &str) -> Result<Distribution> {
    let probs = content_lines(text)
        .map(|(ln, l)| {
            l.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| perr(ln, format!("`{l}` is not a finite decimal")))
        })
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(probs)
}

pub fn write_distribution(p: &Distribution) -> String {
    let mut out = String::new();
    for x in p.probs() {
        let _ = writeln!(out, "{x}");
    }
    out
}

/// Parses `index,count` rows; `n` is one past the largest index unless a
/// larger domain is given.
pub fn parse_histogram_csv(text: &str, domain: Option<usize>) -> Result<SampleHistogram> {
    let mut rows = Vec::new();
    for (k, (ln, l)) in content_lines(text).enumerate() {
        if k == 0 && l.replace(' ', "") == "index,count" {
            continue;
        }
        let (i, c) = l
            .split_once(',')
            .ok_or_else(|| perr(ln, "expected `index,count`"))?;
        let i = parse_usize(ln, i.trim(), "index")?;
        if i >= MAX_PARSED_DOMAIN {
            return Err(perr(ln, format!("index {i} is too large")));
        }
        let c = c
            .trim()
            .parse::<u64>()
            .map_err(|_| perr(ln, format!("count `{}` is not a nonnegative integer", c.trim())))?;
        rows.push((ln, i, c));
    }
    let n = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0).max(domain.unwrap_or(0));
    if let Some(d) = domain {
        if n > d {
            return Err(perr(0, format!("index {} outside domain of size {d}", n - 1)));
        }
    }
    if n > MAX_PARSED_DOMAIN {
        return Err(perr(0, format!("domain of size {n} is too large")));
    }
    rows.iter()
        .try_fold(0u64, |acc, r| acc.checked_add(r.2))
        .ok_or_else(|| perr(0, "total count overflows"))?;
    let mut h = SampleHistogram::zeros(n);
    let mut seen = vec![false; n];
    for (ln, i, c) in rows {
        if seen[i] {
            return Err(perr(ln, format!("index {i} listed twice")));
        }
        seen[i] = true;
        h.add(i, c);
    }
    Ok(h)
}

pub fn write_histogram_csv(h: &SampleHistogram) -> String {
    let mut out = String::from("index,count\n");
    for (i, c) in h.counts().iter().enumerate() {
        let _ = writeln!(out, "{i},{c}");
    }
    out
}
