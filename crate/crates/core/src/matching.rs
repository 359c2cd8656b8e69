//! Exact matchings: subset DP for small general graphs, the Hungarian
//! method for bipartite graphs, and augmenting paths for cardinality.

use crate::error::{Error, Result};

/// Largest vertex count accepted by [`max_weight_matching_dp`].
pub const DP_MAX_VERTICES: usize = 24;

const TIE_TOL: f64 = 1e-12;

/// Maximum-weight matching of an undirected graph on `n ≤ 24` vertices.
///
/// Returns indices into `edges`. Only positive-weight edges are used. Among
/// optimal matchings, reconstruction leaves the lowest free vertex unmatched
/// when that is still optimal and otherwise pairs it with its lowest-index
/// optimal partner.
pub fn max_weight_matching_dp(n: usize, edges: &[(usize, usize, f64)]) -> Result<Vec<usize>> {
    if n > DP_MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "general matching vertex count",
            size: n,
            cap: DP_MAX_VERTICES,
        });
    }
    // best weight and edge index per unordered vertex pair
    let mut adj: Vec<Vec<(usize, f64, usize)>> = vec![Vec::new(); n];
    for (k, &(u, v, w)) in edges.iter().enumerate() {
        if w <= 0.0 || u == v {
            continue;
        }
        let (a, b) = (u.min(v), u.max(v));
        match adj[a].iter_mut().find(|e| e.0 == b) {
            Some(e) if e.1 >= w => {}
            Some(e) => *e = (b, w, k),
            None => adj[a].push((b, w, k)),
        }
    }
    for list in &mut adj {
        list.sort_by_key(|e| e.0);
    }
    let full = (1usize << n) - 1;
    let mut f = vec![0.0f64; 1 << n];
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = f[rest];
        for &(j, w, _) in &adj[i] {
            if rest >> j & 1 == 1 {
                best = best.max(w + f[rest & !(1 << j)]);
            }
        }
        f[mask] = best;
    }
    let mut chosen = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let target = f[mask];
        let tol = TIE_TOL * (1.0 + target.abs());
        if f[rest] >= target - tol {
            mask = rest;
            continue;
        }
        let (j, _, k) = *adj[i]
            .iter()
            .find(|&&(j, w, _)| rest >> j & 1 == 1 && w + f[rest & !(1 << j)] >= target - tol)
            .expect("some option attains the optimum");
        chosen.push(k);
        mask = rest & !(1 << j);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Maximum-weight bipartite matching between `0..n_left` and `0..n_right`.
///
/// Returns indices into `edges` of the matched positive-weight edges.
pub fn max_weight_bipartite(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize, f64)],
) -> Vec<usize> {
    let size = n_left.max(n_right);
    if size == 0 {
        return Vec::new();
    }
    let mut best: Vec<Option<(f64, usize)>> = vec![None; size * size];
    for (k, &(l, r, w)) in edges.iter().enumerate() {
        if w > 0.0 {
            let cell = &mut best[l * size + r];
            if cell.is_none_or(|(bw, _)| w > bw) {
                *cell = Some((w, k));
            }
        }
    }
    if best.iter().all(Option::is_none) {
        return Vec::new();
    }
    let cost: Vec<f64> = best
        .iter()
        .map(|c| c.map_or(0.0, |(w, _)| -w))
        .collect();
    let assign = hungarian(size, &cost);
    let mut out: Vec<usize> = assign
        .iter()
        .enumerate()
        .filter_map(|(l, &r)| best[l * size + r].map(|(_, k)| k))
        .collect();
    out.sort_unstable();
    out
}

/// Minimum-cost perfect assignment on a dense `size × size` matrix;
/// returns the column assigned to each row.
fn hungarian(size: usize, cost: &[f64]) -> Vec<usize> {
    let n = size;
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    assign
}

/// Size of a maximum-cardinality matching; `adj[l]` lists right neighbours.
pub fn max_cardinality_bipartite(n_right: usize, adj: &[Vec<usize>]) -> usize {
    let mut match_r = vec![usize::MAX; n_right];
    let mut size = 0;
    for l in 0..adj.len() {
        let mut seen = vec![false; n_right];
        if augment(l, adj, &mut match_r, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(l: usize, adj: &[Vec<usize>], match_r: &mut [usize], seen: &mut [bool]) -> bool {
    for &r in &adj[l] {
        if !seen[r] {
            seen[r] = true;
            if match_r[r] == usize::MAX || augment(match_r[r], adj, match_r, seen) {
                match_r[r] = l;
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weight(edges: &[(usize, usize, f64)], chosen: &[usize]) -> f64 {
        chosen.iter().map(|&k| edges[k].2).sum()
    }

    fn is_matching(edges: &[(usize, usize, f64)], chosen: &[usize]) -> bool {
        let mut used = std::collections::HashSet::new();
        chosen.iter().all(|&k| used.insert(edges[k].0) && used.insert(edges[k].1))
    }

    /// Exhaustive search over edge subsets.
    fn brute_force(edges: &[(usize, usize, f64)]) -> f64 {
        let m = edges.len();
        let mut best = 0.0f64;
        for mask in 0u32..(1 << m) {
            let chosen: Vec<usize> = (0..m).filter(|&k| mask >> k & 1 == 1).collect();
            if is_matching(edges, &chosen) {
                best = best.max(chosen.iter().map(|&k| edges[k].2.max(0.0)).sum());
            }
        }
        best
    }

    #[test]
    fn line_three_prefers_single_edge() {
        // closure of the line 0→1→2 with p = (0.5, 0.3, 0.2)
        let edges = [(0, 1, 0.2), (0, 2, 0.3), (1, 2, 0.1)];
        let chosen = max_weight_matching_dp(3, &edges).unwrap();
        assert_eq!(chosen, vec![1]);
    }

    #[test]
    fn dp_cap() {
        assert!(max_weight_matching_dp(25, &[]).is_err());
        assert!(max_weight_matching_dp(0, &[]).unwrap().is_empty());
    }

    #[test]
    fn hungarian_small() {
        let edges = [(0, 0, 1.0), (0, 1, 3.0), (1, 0, 3.0), (1, 1, 1.0), (2, 1, 5.0)];
        let chosen = max_weight_bipartite(3, 2, &edges);
        assert!(is_matching(&edges.map(|(l, r, w)| (l, r + 10, w)), &chosen));
        assert_eq!(weight(&edges, &chosen), 8.0);
    }

    #[test]
    fn cardinality() {
        let adj = vec![vec![0, 1], vec![0], vec![0]];
        assert_eq!(max_cardinality_bipartite(2, &adj), 2);
        assert_eq!(max_cardinality_bipartite(0, &[]), 0);
    }

    fn general_edges() -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>)> {
        (2usize..8).prop_flat_map(|n| {
            let e = proptest::collection::vec((0..n, 0..n, 0u32..10), 0..10).prop_map(|v| {
                let mut seen = std::collections::HashSet::new();
                v.into_iter()
                    .filter(|&(a, b, _)| a != b && seen.insert((a.min(b), a.max(b))))
                    .map(|(a, b, w)| (a, b, w as f64 / 10.0))
                    .collect::<Vec<_>>()
            });
            (Just(n), e)
        })
    }

    proptest! {
        #[test]
        fn dp_matches_brute_force((n, edges) in general_edges()) {
            let chosen = max_weight_matching_dp(n, &edges).unwrap();
            prop_assert!(is_matching(&edges, &chosen));
            prop_assert!((weight(&edges, &chosen) - brute_force(&edges)).abs() < 1e-12);
        }

        #[test]
        fn hungarian_matches_dp(nl in 1usize..5, nr in 1usize..5, raw in proptest::collection::vec((0usize..5, 0usize..5, 0u32..10), 0..12)) {
            let mut seen = std::collections::HashSet::new();
            let edges: Vec<(usize, usize, f64)> = raw
                .into_iter()
                .filter(|&(l, r, _)| l < nl && r < nr && seen.insert((l, r)))
                .map(|(l, r, w)| (l, r, w as f64 / 10.0))
                .collect();
            let chosen = max_weight_bipartite(nl, nr, &edges);
            let relabeled: Vec<(usize, usize, f64)> = edges.iter().map(|&(l, r, w)| (l, nl + r, w)).collect();
            prop_assert!(is_matching(&relabeled, &chosen));
            let dp = max_weight_matching_dp(nl + nr, &relabeled).unwrap();
            prop_assert!((weight(&edges, &chosen) - weight(&relabeled, &dp)).abs() < 1e-9);
        }
    }
}
