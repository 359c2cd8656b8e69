//! Seeded random instances for sweeps and operating-characteristic runs.

use rand::Rng as _;

use poset_dist::oracle::{closest_monotone_on_matching, dist_to_bigness, max_violation_matching};
use poset_dist::poset::make_matching;
use poset_dist::prob::tv_distance;
use poset_dist::{Distribution, Poset, Result, Rng};

/// Random DAG whose edges follow a random linear order.
pub fn random_dag(n: usize, density: f64, rng: &mut Rng) -> Result<Poset> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                edges.push((order[i], order[j]));
            }
        }
    }
    Poset::general(n, edges)
}

/// Bottoms `0..nb`, tops `nb..nb+nt`, each possible edge kept with `density`.
pub fn random_bipartite(nb: usize, nt: usize, density: f64, rng: &mut Rng) -> Result<Poset> {
    let mut edges = Vec::new();
    for b in 0..nb {
        for t in 0..nt {
            if rng.random::<f64>() < density {
                edges.push((b, nb + t));
            }
        }
    }
    Poset::bipartite(nb + nt, edges, (0..nb).collect())
}

/// `k` bottoms and `k` tops: the perfect matching `(i, k+i)` plus random
/// extra edges keeping every degree at most `max_deg`.
pub fn matched_bipartite(k: usize, max_deg: usize, rng: &mut Rng) -> Result<Poset> {
    let mut deg = vec![1usize; 2 * k];
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, k + i)).collect();
    for b in 0..k {
        for _ in 0..max_deg.saturating_sub(1) {
            let t = k + rng.random_range(0..k);
            if deg[b] < max_deg && deg[t] < max_deg && !edges.contains(&(b, t)) {
                edges.push((b, t));
                deg[b] += 1;
                deg[t] += 1;
            }
        }
    }
    Poset::bipartite(2 * k, edges, (0..k).collect())
}

pub fn random_weights(n: usize, rng: &mut Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Random distribution; an all-zero draw falls back to uniform.
pub fn random_distribution(n: usize, rng: &mut Rng) -> Result<Distribution> {
    let w = random_weights(n, rng);
    if w.iter().sum::<f64>() > 0.0 {
        Distribution::normalized(w)
    } else {
        Ok(Distribution::uniform(n))
    }
}

/// Topological order of `g` (Kahn).
pub fn topological_order(g: &Poset) -> Vec<usize> {
    let n = g.n();
    let mut indeg = vec![0usize; n];
    for &(_, v) in g.edges() {
        indeg[v] += 1;
    }
    let out = g.out_neighbors();
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
    order
}

/// Random monotone distribution: each vertex gets at least the largest
/// value among its predecessors.
pub fn random_monotone(g: &Poset, rng: &mut Rng) -> Result<Distribution> {
    let n = g.n();
    let mut preds = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        preds[v].push(u);
    }
    let mut x = vec![0.0; n];
    for v in topological_order(g) {
        let base = preds[v].iter().map(|&u| x[u]).fold(0.0, f64::max);
        x[v] = base + rng.random::<f64>() + 0.01;
    }
    Distribution::normalized(x)
}

/// Instance kind for operating-characteristic runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// Has the property.
    Yes,
    /// Verified `ε`-far.
    Far,
}

/// Bigness instance on `n` elements with threshold `1/(2n)`.
pub fn bigness_instance(n: usize, eps: f64, case: Case, rng: &mut Rng) -> Result<(Distribution, f64)> {
    let t = 1.0 / (2.0 * n as f64);
    let mut w: Vec<f64> = (0..n).map(|_| 1.0 + rng.random::<f64>()).collect();
    if case == Case::Far {
        let zeros = ((2.0 * eps * n as f64).ceil() as usize).min(n - 1);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..zeros {
            idx.swap(i, rng.random_range(i..n));
            w[idx[i]] = 0.0;
        }
    }
    Ok((Distribution::normalized(w)?, t))
}

/// Distance of `p` from bigness, for certification.
pub fn bigness_distance(p: &Distribution, t: f64) -> Result<f64> {
    dist_to_bigness(p.probs(), t)
}

/// Matching on `n` vertices; far instances put three times the top mass
/// on each bottom.
pub fn matching_instance(n: usize, case: Case, rng: &mut Rng) -> Result<(Poset, Distribution)> {
    let k = n / 2;
    let g = make_matching(k)?;
    let mut w = vec![0.0; 2 * k];
    for i in 0..k {
        let base = 1.0 + rng.random::<f64>();
        match case {
            Case::Yes => {
                w[i] = base;
                w[k + i] = base + rng.random::<f64>();
            }
            Case::Far => {
                w[k + i] = base;
                w[i] = 3.0 * base;
            }
        }
    }
    Ok((g, Distribution::normalized(w)?))
}

/// Exact distance to monotone on a matching.
pub fn matching_distance(g: &Poset, p: &Distribution) -> Result<f64> {
    tv_distance(p, &closest_monotone_on_matching(g, p)?)
}

/// Bipartite graph of maximum degree `max_deg` on `n` vertices with
/// tops heavier than bottoms, or bottoms three times heavier.
pub fn bipartite_instance(n: usize, max_deg: usize, case: Case, rng: &mut Rng) -> Result<(Poset, Distribution)> {
    let k = n / 2;
    let g = matched_bipartite(k, max_deg, rng)?;
    let w: Vec<f64> = (0..2 * k)
        .map(|v| {
            let u = rng.random::<f64>();
            match (case, v < k) {
                (Case::Yes, true) => 1.0 + u,
                (Case::Yes, false) => 2.0 + u,
                (Case::Far, true) => 3.0,
                (Case::Far, false) => 1.0 + 0.1 * u,
            }
        })
        .collect();
    Ok((g, Distribution::normalized(w)?))
}

/// Uniform on all tops plus a random half of the bottoms, or uniform on
/// the bottoms only.
pub fn uniform_subset_instance(n: usize, max_deg: usize, case: Case, rng: &mut Rng) -> Result<(Poset, Distribution, usize)> {
    let k = n / 2;
    let g = matched_bipartite(k, max_deg, rng)?;
    let w: Vec<f64> = (0..2 * k)
        .map(|v| match (case, v < k) {
            (Case::Yes, true) => f64::from(u8::from(rng.random::<bool>())),
            (Case::Yes, false) => 1.0,
            (Case::Far, true) => 1.0,
            (Case::Far, false) => 0.0,
        })
        .collect();
    let r = w.iter().filter(|&&x| x > 0.0).count();
    Ok((g, Distribution::normalized(w)?, r))
}

/// Lower bound `W/2` on the distance to monotone.
pub fn certified_far_lower(g: &Poset, p: &Distribution) -> Result<f64> {
    Ok(max_violation_matching(g, p.probs())?.total / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use poset_dist::oracle::exact_dtv_to_monotone;
    use poset_dist::poset::is_monotone;
    use proptest::prelude::*;
    use super::Rng;

    proptest! {
        #[test]
        fn generated_monotone_is_monotone(seed in any::<u64>(), n in 1usize..9) {
            let mut rng = Rng::new(seed, 0);
            let g = random_dag(n, 0.4, &mut rng).unwrap();
            let p = random_monotone(&g, &mut rng).unwrap();
            prop_assert!(is_monotone(&g, p.probs()).unwrap());
            prop_assert_eq!(topological_order(&g).len(), n);
        }

        #[test]
        fn far_instances_are_far(seed in any::<u64>()) {
            let mut rng = Rng::new(seed, 1);
            let (g, p) = matching_instance(12, Case::Far, &mut rng).unwrap();
            prop_assert!(matching_distance(&g, &p).unwrap() >= 0.2);
            prop_assert!((matching_distance(&g, &p).unwrap() - exact_dtv_to_monotone(&g, p.probs()).unwrap()).abs() < 1e-9);
            let (g, p) = bipartite_instance(12, 3, Case::Far, &mut rng).unwrap();
            prop_assert!(g.max_degree() <= 3);
            prop_assert!(certified_far_lower(&g, &p).unwrap() >= 0.2);
            let (p, t) = bigness_instance(12, 0.2, Case::Far, &mut rng).unwrap();
            prop_assert!(bigness_distance(&p, t).unwrap() >= 0.2);
        }

        #[test]
        fn yes_instances_have_the_property(seed in any::<u64>()) {
            let mut rng = Rng::new(seed, 2);
            let (g, p) = bipartite_instance(12, 3, Case::Yes, &mut rng).unwrap();
            prop_assert!(is_monotone(&g, p.probs()).unwrap());
            let (g, p, r) = uniform_subset_instance(12, 3, Case::Yes, &mut rng).unwrap();
            prop_assert!(is_monotone(&g, p.probs()).unwrap());
            prop_assert_eq!(r, p.probs().iter().filter(|&&x| x > 0.0).count());
            let (p, t) = bigness_instance(12, 0.2, Case::Yes, &mut rng).unwrap();
            prop_assert_eq!(bigness_distance(&p, t).unwrap(), 0.0);
        }
    }
}
