use super::{check_eps, checked_samples, Rule, SampleSource, Verdict};
use crate::error::{Error, Result};
use crate::matching::{max_cardinality_bipartite, max_weight_bipartite};
use crate::poset::{Poset, PosetKind};
use crate::prob::Rng;

/// Largest vertex count for which subset pairs are enumerated.
pub const ENUM_MAX_VERTICES: usize = 16;
/// Overall failure probability split across subset pairs.
pub const FAILURE_PROB: f64 = 0.1;

fn sides(g: &Poset) -> Result<(&[usize], &[usize])> {
    match g.kind() {
        PosetKind::Bipartite | PosetKind::Matching => Ok((g.bottoms(), g.tops())),
        k => Err(Error::WrongKind {
            expected: "bipartite",
            found: k.name(),
        }),
    }
}

fn positions(g: &Poset, side: &[usize]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in side.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// `max ŵ(S_b) − ŵ(S_t)` over bottom/top subsets joined by a perfect
/// matching, as a maximum-weight matching with weights `ŵ_b − ŵ_t`.
pub fn all_matchings_gap(g: &Poset, w: &[f64]) -> Result<f64> {
    let (bottoms, tops) = sides(g)?;
    crate::error::check_len(g.n(), w.len())?;
    let (pb, pt) = (positions(g, bottoms), positions(g, tops));
    let edges: Vec<(usize, usize, f64)> = g.edges().iter().map(|&(b, t)| (pb[b], pt[t], w[b] - w[t])).collect();
    let chosen = max_weight_bipartite(bottoms.len(), tops.len(), &edges);
    Ok(chosen.iter().map(|&k| edges[k].2).sum::<f64>().max(0.0))
}

/// The same gap by enumerating every matchable pair; also returns the
/// number of such pairs, the empty pair included.
pub fn all_matchings_gap_enumerated(g: &Poset, w: &[f64]) -> Result<(f64, u64)> {
    let (bottoms, tops) = sides(g)?;
    crate::error::check_len(g.n(), w.len())?;
    if g.n() > ENUM_MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "subset enumeration vertex count",
            size: g.n(),
            cap: ENUM_MAX_VERTICES,
        });
    }
    let (pb, pt) = (positions(g, bottoms), positions(g, tops));
    let mut adj = vec![Vec::new(); bottoms.len()];
    for &(b, t) in g.edges() {
        adj[pb[b]].push(pt[t]);
    }
    let mass = |mask: u32, side: &[usize]| -> f64 {
        side.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| w[v]).sum()
    };
    let (mut best, mut count) = (0.0f64, 0u64);
    for sb in 0u32..1 << bottoms.len() {
        let k = sb.count_ones();
        let mb = mass(sb, bottoms);
        for st in 0u32..1 << tops.len() {
            if st.count_ones() != k {
                continue;
            }
            let sub: Vec<Vec<usize>> = (0..bottoms.len())
                .filter(|i| sb >> i & 1 == 1)
                .map(|i| adj[i].iter().copied().filter(|&j| st >> j & 1 == 1).collect())
                .collect();
            if max_cardinality_bipartite(tops.len(), &sub) == k as usize {
                count += 1;
                best = best.max(mb - mass(st, tops));
            }
        }
    }
    Ok((best, count))
}

/// Rejects iff some matchable pair has estimated top mass below its bottom
/// mass by more than `ε/2`.
pub fn all_matchings_test<S: SampleSource + ?Sized>(g: &Poset, src: &S, eps: f64, rng: &mut Rng) -> Result<Verdict> {
    check_eps(eps)?;
    let n = g.n();
    if src.domain() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: src.domain(),
        });
    }
    let zeros = vec![0.0; n];
    let ln_m = if n <= ENUM_MAX_VERTICES {
        (all_matchings_gap_enumerated(g, &zeros)?.1 as f64).ln()
    } else {
        n as f64 * std::f64::consts::LN_2
    };
    let s = checked_samples(32.0 * (ln_m + (2.0 / FAILURE_PROB).ln()) / (eps * eps))?;
    let h = src.histogram(s, rng)?;
    let w: Vec<f64> = h.counts().iter().map(|&c| c as f64 / s as f64).collect();
    let gap = if n <= ENUM_MAX_VERTICES {
        all_matchings_gap_enumerated(g, &w)?.0
    } else {
        all_matchings_gap(g, &w)?
    };
    Ok(Verdict::new(gap, eps / 2.0, Rule::AtMost, s, vec![("ln_pairs", ln_m)]))
}
