//! Structural reductions between testing problems.
//!
//! Each reduction maps a source distribution to a target distribution and
//! lifts a single source sample to a single target sample.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_len, Error, Result};
use crate::poset::{make_matching, Poset, PosetKind, MAX_HYPERCUBE_DIM};
use crate::prob::{uniform_index, Distribution, Rng};

/// How target distances relate to source distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contract {
    pub preserves_monotone: bool,
    /// An ε-far source maps to a `far_factor·ε`-far target.
    pub far_factor: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    GeneralToBipartite,
    BipartiteToMatching { delta: usize },
}

/// A poset-to-poset reduction with its sample lifter.
#[derive(Clone, Debug)]
pub struct Reduction {
    kind: ReductionKind,
    source: Poset,
    target: Poset,
    /// `lifts[w]`: target vertices a sample `w` maps to, chosen uniformly.
    lifts: Vec<Vec<usize>>,
    contract: Contract,
}

impl Reduction {
    pub fn kind(&self) -> ReductionKind {
        self.kind
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn contract(&self) -> Contract {
        self.contract
    }

    pub fn lift_choices(&self, w: usize) -> &[usize] {
        &self.lifts[w]
    }

    /// One target sample from one source sample.
    pub fn lift(&self, w: usize, rng: &mut Rng) -> usize {
        let c = &self.lifts[w];
        c[uniform_index(c.len(), rng)]
    }

    /// Exact law of lifted samples when source samples follow `p`.
    pub fn lifted_law(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_len(self.source.n(), p.len())?;
        let mut q = vec![0.0; self.target.n()];
        for (w, choices) in self.lifts.iter().enumerate() {
            let share = p[w] / choices.len() as f64;
            for &t in choices {
                q[t] += share;
            }
        }
        Ok(q)
    }

    /// The target distribution `p′`.
    pub fn map_distribution(&self, p: &Distribution) -> Result<Distribution> {
        check_len(self.source.n(), p.len())?;
        let n = self.source.n();
        let q = match self.kind {
            ReductionKind::GeneralToBipartite => {
                let mut q = vec![0.0; 2 * n];
                for (v, &pv) in p.probs().iter().enumerate() {
                    q[v] = pv / 2.0;
                    q[n + v] = pv / 2.0;
                }
                q
            }
            ReductionKind::BipartiteToMatching { delta } => {
                let mut q = vec![0.0; self.target.n()];
                for (w, &pw) in p.probs().iter().enumerate() {
                    for i in 0..delta {
                        q[w * delta + i] = pw / delta as f64;
                    }
                }
                q
            }
        };
        Distribution::new(q)
    }
}

/// Bipartite double cover of the closure: `v⁻ = v`, `v⁺ = n + v`, and an
/// edge `(u⁻, v⁺)` whenever `u` reaches `v`.
pub fn general_to_bipartite(g: &Poset) -> Result<Reduction> {
    let n = g.n();
    let edges = g.closure().pairs().into_iter().map(|(u, v)| (u, n + v)).collect();
    let target = Poset::bipartite(2 * n, edges, (0..n).collect())?;
    Ok(Reduction {
        kind: ReductionKind::GeneralToBipartite,
        source: g.clone(),
        target,
        lifts: (0..n).map(|v| vec![v, n + v]).collect(),
        contract: Contract {
            preserves_monotone: true,
            far_factor: 0.25,
        },
    })
}

/// Splits every vertex into `delta` copies so the edges become a matching.
///
/// Copy `i` of `w` is vertex `w·delta + i`; unmatched copies become tops
/// paired with zero-mass dummy bottoms numbered after all copies.
pub fn bipartite_to_matching(g: &Poset, delta: usize) -> Result<Reduction> {
    if !matches!(g.kind(), PosetKind::Bipartite | PosetKind::Matching) {
        return Err(Error::WrongKind {
            expected: "bipartite",
            found: g.kind().name(),
        });
    }
    if delta == 0 {
        return Err(Error::InvalidParameter("delta must be at least 1".into()));
    }
    let degree = g.max_degree();
    if degree > delta {
        return Err(Error::InvalidParameter(format!(
            "max degree {degree} exceeds delta = {delta}"
        )));
    }
    let n = g.n();
    let mut next = vec![0usize; n];
    let mut used = vec![false; n * delta];
    let mut edges = Vec::with_capacity(n * delta);
    for &(b, t) in g.edges() {
        let cb = b * delta + next[b];
        let ct = t * delta + next[t];
        next[b] += 1;
        next[t] += 1;
        used[cb] = true;
        used[ct] = true;
        edges.push((cb, ct));
    }
    let mut dummy = n * delta;
    for c in 0..n * delta {
        if !used[c] {
            edges.push((dummy, c));
            dummy += 1;
        }
    }
    let target = Poset::matching(dummy, edges)?;
    Ok(Reduction {
        kind: ReductionKind::BipartiteToMatching { delta },
        source: g.clone(),
        target,
        lifts: (0..n).map(|w| (w * delta..(w + 1) * delta).collect()).collect(),
        contract: Contract {
            preserves_monotone: true,
            far_factor: 1.0 / (2.0 * delta as f64),
        },
    })
}

/// Metadata of [`bigness_to_matching`].
#[derive(Clone, Debug)]
pub struct BignessMatching {
    /// Matching on `2n` vertices: `v_i = i` (bottom), `u_i = n + i` (top).
    pub poset: Poset,
    /// Normaliser `1 + nT`.
    pub scale: f64,
    pub contract: Contract,
}

/// `q(u_i) = p(i)/(1+nT)`, `q(v_i) = T/(1+nT)` on a matching of `n` pairs.
pub fn bigness_to_matching(p: &Distribution, t: f64) -> Result<(Distribution, BignessMatching)> {
    let n = p.len();
    if !(t > 0.0) || t > (1.0 / n as f64) * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "bigness threshold {t} must lie in (0, 1/n] with n = {n}"
        )));
    }
    let scale = 1.0 + n as f64 * t;
    let mut q = vec![t / scale; 2 * n];
    for (i, &pi) in p.probs().iter().enumerate() {
        q[n + i] = pi / scale;
    }
    let q = Distribution::new(q)?;
    Ok((
        q,
        BignessMatching {
            poset: make_matching(n)?,
            scale,
            contract: Contract {
                preserves_monotone: true,
                far_factor: 1.0 / (2.0 * scale),
            },
        },
    ))
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_cube(d: u32, ell: u32) -> Result<()> {
    if d == 0 || d > MAX_HYPERCUBE_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} outside 1..={MAX_HYPERCUBE_DIM}"
        )));
    }
    if ell == 0 || ell > d {
        return Err(Error::InvalidParameter(format!("level {ell} outside 1..={d}")));
    }
    Ok(())
}

/// Embedded pairs `(lower, upper)`: `lower` has `ell − 1` ones among the
/// high `d − 1` bits and a zero low bit, `upper = lower | 1`. Sorted by
/// `lower`.
pub fn hypercube_embedding(d: u32, ell: u32) -> Result<Vec<(usize, usize)>> {
    check_cube(d, ell)?;
    Ok((0..1usize << (d - 1))
        .filter(|x| x.count_ones() == ell - 1)
        .map(|x| (x << 1, x << 1 | 1))
        .collect())
}

/// Vertices at level `≥ ell` that are not upper endpoints of the embedding.
pub fn hypercube_filler(d: u32, ell: u32) -> Result<Vec<usize>> {
    check_cube(d, ell)?;
    Ok((0..1usize << d)
        .filter(|&v| {
            let level = v.count_ones();
            let upper = v & 1 == 1 && level == ell;
            level >= ell && !upper
        })
        .collect())
}

/// `Σ_{i=ℓ}^{d} C(d, i) − C(d−1, ℓ−1)`, exactly.
pub fn hypercube_filler_count(d: u32, ell: u32) -> BigUint {
    let above: BigUint = (ell..=d).map(|i| binomial_big(d as u64, i as u64)).sum();
    above - binomial_big(d as u64 - 1, ell as u64 - 1)
}

/// Normaliser `1 + p_max·filler_count`.
pub fn hypercube_normalizer(d: u32, ell: u32, p_max: f64) -> f64 {
    let count = hypercube_filler_count(d, ell).to_f64().unwrap_or(f64::INFINITY);
    1.0 + p_max * count
}

/// Embeds a distribution on `make_matching(C(d−1, ℓ−1))` into the
/// `d`-cube, filling the remaining upper levels with `p_max`.
pub fn matching_to_hypercube(d: u32, ell: u32, p: &Distribution, p_max: f64) -> Result<Distribution> {
    let pairs = hypercube_embedding(d, ell)?;
    check_len(2 * pairs.len(), p.len())?;
    if !(p_max > 0.0) || !p_max.is_finite() {
        return Err(Error::InvalidParameter(format!("p_max = {p_max}")));
    }
    if let Some((i, &x)) = p
        .probs()
        .iter()
        .enumerate()
        .find(|(_, &x)| x > p_max * (1.0 + 1e-12))
    {
        return Err(Error::InvalidParameter(format!(
            "p[{i}] = {x} exceeds p_max = {p_max}"
        )));
    }
    let k = pairs.len();
    let w = hypercube_normalizer(d, ell, p_max);
    let mut q = vec![0.0; 1 << d];
    for (i, &(lo, hi)) in pairs.iter().enumerate() {
        q[lo] = p.probs()[i] / w;
        q[hi] = p.probs()[k + i] / w;
    }
    for v in hypercube_filler(d, ell)? {
        q[v] = p_max / w;
    }
    Distribution::new(q)
}
