//! Posets as DAGs, the canonical families, and transitive closures.
//!
//! An edge `(u, v)` means `u ⪯ v`; a distribution is monotone when mass does
//! not decrease along edges.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{check_len, Error, Result};

/// Tolerance for `p(u) ≤ p(v)` comparisons.
pub const MONOTONE_TOL: f64 = 1e-12;
/// Largest hypercube dimension that is materialised.
pub const MAX_HYPERCUBE_DIM: u32 = 16;
/// Dense bitset closures are used up to this many vertices.
pub const DENSE_CLOSURE_MAX: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PosetKind {
    General,
    Line,
    Matching,
    Bipartite,
    Hypercube,
}

impl PosetKind {
    pub fn name(self) -> &'static str {
        match self {
            PosetKind::General => "general",
            PosetKind::Line => "line",
            PosetKind::Matching => "matching",
            PosetKind::Bipartite => "bipartite",
            PosetKind::Hypercube => "hypercube",
        }
    }

    pub fn parse(s: &str) -> Option<PosetKind> {
        Some(match s {
            "general" => PosetKind::General,
            "line" => PosetKind::Line,
            "matching" => PosetKind::Matching,
            "bipartite" => PosetKind::Bipartite,
            "hypercube" => PosetKind::Hypercube,
            _ => return None,
        })
    }
}

impl fmt::Display for PosetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct Poset {
    n: usize,
    edges: Vec<(usize, usize)>,
    kind: PosetKind,
    bottoms: Vec<usize>,
    tops: Vec<usize>,
    dim: Option<u32>,
    closure: OnceLock<TransitiveClosure>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.kind == other.kind
            && self.bottoms == other.bottoms
            && self.tops == other.tops
            && self.dim == other.dim
    }
}

fn check_edges(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::InvalidPoset(format!(
                "edge ({u}, {v}) out of range for n = {n}"
            )));
        }
        if u == v {
            return Err(Error::InvalidPoset(format!("self-loop at {u}")));
        }
        if !seen.insert((u, v)) {
            return Err(Error::InvalidPoset(format!("duplicate edge ({u}, {v})")));
        }
    }
    if topological_order(n, edges).is_none() {
        return Err(Error::InvalidPoset("edge relation has a cycle".into()));
    }
    Ok(())
}

/// Kahn's algorithm; `None` when the relation is cyclic.
fn topological_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(u, v) in edges {
        indeg[v] += 1;
        out[u].push(v);
    }
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = stack.pop() {
        order.push(u);
        for &v in &out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

impl Poset {
    fn build(
        n: usize,
        edges: Vec<(usize, usize)>,
        kind: PosetKind,
        bottoms: Vec<usize>,
        tops: Vec<usize>,
        dim: Option<u32>,
    ) -> Poset {
        Poset {
            n,
            edges,
            kind,
            bottoms,
            tops,
            dim,
            closure: OnceLock::new(),
        }
    }

    /// Arbitrary acyclic relation.
    pub fn general(n: usize, edges: Vec<(usize, usize)>) -> Result<Poset> {
        if n == 0 {
            return Err(Error::InvalidPoset("n must be positive".into()));
        }
        check_edges(n, &edges)?;
        Ok(Poset::build(n, edges, PosetKind::General, vec![], vec![], None))
    }

    /// Vertex-disjoint edges; bottoms are edge tails, tops edge heads.
    pub fn matching(n: usize, edges: Vec<(usize, usize)>) -> Result<Poset> {
        if n == 0 {
            return Err(Error::InvalidPoset("n must be positive".into()));
        }
        check_edges(n, &edges)?;
        let mut used = vec![false; n];
        for &(u, v) in &edges {
            if used[u] || used[v] {
                return Err(Error::InvalidPoset(format!(
                    "edge ({u}, {v}) shares an endpoint with another edge"
                )));
            }
            used[u] = true;
            used[v] = true;
        }
        let bottoms = edges.iter().map(|e| e.0).collect();
        let tops = edges.iter().map(|e| e.1).collect();
        Ok(Poset::build(n, edges, PosetKind::Matching, bottoms, tops, None))
    }

    /// Every edge goes from `bottoms` to the complementary top set.
    pub fn bipartite(n: usize, edges: Vec<(usize, usize)>, bottoms: Vec<usize>) -> Result<Poset> {
        if n == 0 {
            return Err(Error::InvalidPoset("n must be positive".into()));
        }
        check_edges(n, &edges)?;
        let mut is_bottom = vec![false; n];
        for &b in &bottoms {
            if b >= n {
                return Err(Error::InvalidPoset(format!("bottom vertex {b} out of range")));
            }
            if is_bottom[b] {
                return Err(Error::InvalidPoset(format!("bottom vertex {b} listed twice")));
            }
            is_bottom[b] = true;
        }
        for &(u, v) in &edges {
            if !is_bottom[u] || is_bottom[v] {
                return Err(Error::InvalidPoset(format!(
                    "edge ({u}, {v}) does not go from the bottom set to the top set"
                )));
            }
        }
        let mut bottoms = bottoms;
        bottoms.sort_unstable();
        let tops = (0..n).filter(|&v| !is_bottom[v]).collect();
        Ok(Poset::build(n, edges, PosetKind::Bipartite, bottoms, tops, None))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> PosetKind {
        self.kind
    }

    /// Bottom set for matching and bipartite posets, empty otherwise.
    pub fn bottoms(&self) -> &[usize] {
        &self.bottoms
    }

    /// Top set for matching and bipartite posets, empty otherwise.
    pub fn tops(&self) -> &[usize] {
        &self.tops
    }

    pub fn dimension(&self) -> Option<u32> {
        self.dim
    }

    /// Largest total (in + out) degree.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn out_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            out[u].push(v);
        }
        out
    }

    /// Matching edges as `(bottom, top)` pairs when every vertex is matched.
    pub fn perfect_matching_pairs(&self) -> Result<&[(usize, usize)]> {
        if self.kind != PosetKind::Matching {
            return Err(Error::WrongKind {
                expected: "matching",
                found: self.kind.name(),
            });
        }
        if 2 * self.edges.len() != self.n {
            return Err(Error::InvalidPoset(format!(
                "matching leaves {} of {} vertices unmatched",
                self.n - 2 * self.edges.len(),
                self.n
            )));
        }
        Ok(&self.edges)
    }

    /// Cached transitive closure.
    pub fn closure(&self) -> &TransitiveClosure {
        self.closure.get_or_init(|| transitive_closure(self))
    }
}

/// Path `0 → 1 → … → n−1`.
pub fn make_line(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(Error::InvalidPoset("line needs n >= 1".into()));
    }
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Poset::build(n, edges, PosetKind::Line, vec![], vec![], None))
}

/// `n_pairs` disjoint edges `(i, n_pairs + i)`: bottoms `0..n_pairs`, tops after.
pub fn make_matching(n_pairs: usize) -> Result<Poset> {
    if n_pairs == 0 {
        return Err(Error::InvalidPoset("matching needs n_pairs >= 1".into()));
    }
    let edges = (0..n_pairs).map(|i| (i, n_pairs + i)).collect();
    Ok(Poset::build(
        2 * n_pairs,
        edges,
        PosetKind::Matching,
        (0..n_pairs).collect(),
        (n_pairs..2 * n_pairs).collect(),
        None,
    ))
}

/// Boolean cube on `2^d` bitstrings with an edge for each 0→1 bit flip.
pub fn make_hypercube(d: u32) -> Result<Poset> {
    if d == 0 {
        return Err(Error::InvalidPoset("hypercube needs d >= 1".into()));
    }
    if d > MAX_HYPERCUBE_DIM {
        return Err(Error::CapExceeded {
            what: "hypercube dimension",
            size: d as usize,
            cap: MAX_HYPERCUBE_DIM as usize,
        });
    }
    let n = 1usize << d;
    let mut edges = Vec::with_capacity(d as usize * n / 2);
    for u in 0..n {
        for b in 0..d {
            if u & (1 << b) == 0 {
                edges.push((u, u | (1 << b)));
            }
        }
    }
    Ok(Poset::build(n, edges, PosetKind::Hypercube, vec![], vec![], Some(d)))
}

/// Irreflexive reachability relation of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitiveClosure {
    n: usize,
    repr: ClosureRepr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum ClosureRepr {
    Dense { words: usize, bits: Vec<u64> },
    Sparse(Vec<Vec<u32>>),
}

/// DFS from every source over the edge relation.
pub fn transitive_closure(g: &Poset) -> TransitiveClosure {
    let n = g.n;
    let out = g.out_neighbors();
    let mut stack = Vec::new();
    let mut seen = vec![usize::MAX; n];
    if n <= DENSE_CLOSURE_MAX {
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for s in 0..n {
            stack.clear();
            stack.extend(out[s].iter().copied());
            while let Some(v) = stack.pop() {
                if seen[v] == s {
                    continue;
                }
                seen[v] = s;
                bits[s * words + v / 64] |= 1 << (v % 64);
                stack.extend(out[v].iter().copied().filter(|&w| seen[w] != s));
            }
        }
        TransitiveClosure {
            n,
            repr: ClosureRepr::Dense { words, bits },
        }
    } else {
        let mut rows = Vec::with_capacity(n);
        for s in 0..n {
            let mut row = Vec::new();
            stack.clear();
            stack.extend(out[s].iter().copied());
            while let Some(v) = stack.pop() {
                if seen[v] == s {
                    continue;
                }
                seen[v] = s;
                row.push(v as u32);
                stack.extend(out[v].iter().copied().filter(|&w| seen[w] != s));
            }
            row.sort_unstable();
            rows.push(row);
        }
        TransitiveClosure {
            n,
            repr: ClosureRepr::Sparse(rows),
        }
    }
}

impl TransitiveClosure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reaches(&self, u: usize, v: usize) -> bool {
        match &self.repr {
            ClosureRepr::Dense { words, bits } => bits[u * words + v / 64] >> (v % 64) & 1 == 1,
            ClosureRepr::Sparse(rows) => rows[u].binary_search(&(v as u32)).is_ok(),
        }
    }

    /// Vertices reachable from `u`, ascending.
    pub fn successors(&self, u: usize) -> Vec<usize> {
        match &self.repr {
            ClosureRepr::Dense { words, bits } => {
                let row = &bits[u * words..(u + 1) * words];
                let mut out = Vec::new();
                for (w, &word) in row.iter().enumerate() {
                    let mut x = word;
                    while x != 0 {
                        let b = x.trailing_zeros() as usize;
                        out.push(w * 64 + b);
                        x &= x - 1;
                    }
                }
                out
            }
            ClosureRepr::Sparse(rows) => rows[u].iter().map(|&v| v as usize).collect(),
        }
    }

    /// All pairs `(u, v)` with `u` reaching `v`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.successors(u).into_iter().map(move |v| (u, v)))
            .collect()
    }
}

/// `p(u) ≤ p(v) + 1e-12` on every edge.
pub fn is_monotone(g: &Poset, p: &[f64]) -> Result<bool> {
    check_len(g.n, p.len())?;
    Ok(g.edges.iter().all(|&(u, v)| p[u] <= p[v] + MONOTONE_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn line_examples() {
        assert!(make_line(0).is_err());
        assert!(make_line(1).unwrap().edges().is_empty());
        assert_eq!(make_line(3).unwrap().edges(), &[(0, 1), (1, 2)]);
        let g = make_line(5).unwrap();
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.closure().pairs().len(), 10);
    }

    #[test]
    fn line_closure_adds_transitive_pair() {
        let g = make_line(3).unwrap();
        assert_eq!(g.closure().pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn matching_examples() {
        let g = make_matching(1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        let g = make_matching(3).unwrap();
        assert_eq!(g.bottoms(), &[0, 1, 2]);
        assert_eq!(g.tops(), &[3, 4, 5]);
        assert_eq!(g.closure().pairs(), g.edges().to_vec());
        assert!(Poset::matching(4, vec![(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn hypercube_examples() {
        assert_eq!(make_hypercube(1).unwrap().edges(), &[(0, 1)]);
        let g = make_hypercube(2).unwrap();
        let mut e = g.edges().to_vec();
        e.sort();
        assert_eq!(e, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        let extra: Vec<_> = g
            .closure()
            .pairs()
            .into_iter()
            .filter(|p| !e.contains(p))
            .collect();
        assert_eq!(extra, vec![(0, 3)]);
        for d in 1..=8u32 {
            assert_eq!(make_hypercube(d).unwrap().edges().len(), d as usize * (1 << (d - 1)));
        }
        assert!(matches!(make_hypercube(40), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn hypercube_closure_is_bitwise_subset() {
        let g = make_hypercube(4).unwrap();
        let tc = g.closure();
        for u in 0..16 {
            for v in 0..16 {
                assert_eq!(tc.reaches(u, v), u != v && u & !v == 0);
            }
        }
    }

    #[test]
    fn sparse_closure_agrees_with_dense() {
        let g = make_line(DENSE_CLOSURE_MAX + 3).unwrap();
        let tc = g.closure();
        assert!(tc.reaches(0, DENSE_CLOSURE_MAX + 2));
        assert!(!tc.reaches(5, 4));
        assert_eq!(tc.successors(DENSE_CLOSURE_MAX), vec![DENSE_CLOSURE_MAX + 1, DENSE_CLOSURE_MAX + 2]);
    }

    #[test]
    fn validation() {
        assert!(Poset::general(3, vec![(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Poset::general(2, vec![(0, 0)]).is_err());
        assert!(Poset::general(2, vec![(0, 5)]).is_err());
        assert!(Poset::general(2, vec![(0, 1), (0, 1)]).is_err());
        assert!(Poset::bipartite(3, vec![(1, 0)], vec![0]).is_err());
        let g = Poset::bipartite(3, vec![(0, 1), (0, 2)], vec![0]).unwrap();
        assert_eq!(g.tops(), &[1, 2]);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn monotone_examples() {
        let m = make_matching(1).unwrap();
        assert!(is_monotone(&m, &[0.5, 0.5]).unwrap());
        assert!(!is_monotone(&m, &[0.75, 0.25]).unwrap());
        let l = make_line(3).unwrap();
        assert!(is_monotone(&l, &[0.2, 0.3, 0.5]).unwrap());
        assert!(is_monotone(&l, &[0.2, 0.3]).is_err());
    }

    pub(crate) fn dag_strategy(max_n: usize) -> impl Strategy<Value = Poset> {
        (1..=max_n)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
            .prop_map(|(n, mask)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if mask[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Poset::general(n, edges).unwrap()
            })
    }

    proptest! {
        #[test]
        fn closure_is_idempotent(g in dag_strategy(9)) {
            let tc = g.closure();
            let h = Poset::general(g.n(), tc.pairs()).unwrap();
            prop_assert_eq!(h.closure().pairs(), tc.pairs());
            for (u, v) in tc.pairs() {
                prop_assert!(!tc.reaches(v, u));
            }
        }

        #[test]
        fn monotone_iff_monotone_on_closure(g in dag_strategy(8), raw in proptest::collection::vec(0u32..4, 8)) {
            let p: Vec<f64> = raw[..g.n()].iter().map(|&x| x as f64).collect();
            let tc = Poset::general(g.n(), g.closure().pairs()).unwrap();
            prop_assert_eq!(is_monotone(&g, &p).unwrap(), is_monotone(&tc, &p).unwrap());
        }
    }
}
