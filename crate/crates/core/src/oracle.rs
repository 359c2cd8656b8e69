//! Ground-truth distances: to bigness, to monotonicity (exact LP and the
//! violation-matching characterisation), and pair-histogram transport.

use crate::error::{check_len, Error, Result};
use crate::lp::{Cmp, LinearProgram};
use crate::matching::{max_weight_bipartite, max_weight_matching_dp, DP_MAX_VERTICES};
use crate::poset::{Poset, PosetKind};
use crate::prob::{Distribution, PairHistogram};

/// Default vertex cap for the LP oracles.
pub const LP_CAP: usize = 64;
/// Largest grid accepted by [`MinWMode::Lp`].
pub const GRID_CAP: usize = 5000;
/// Largest histogram support accepted by [`MinWMode::Lp`].
pub const GRID_SUPPORT_CAP: usize = 64;
/// Largest domain accepted by [`min_perm_l1`].
pub const PERM_CAP: usize = 9;

/// Total variation distance from `p` to the `t`-big distributions,
/// `Σ max(0, t − p_i)`. Requires `0 < t ≤ 1/n`.
pub fn dist_to_bigness(p: &[f64], t: f64) -> Result<f64> {
    let n = p.len();
    if n == 0 {
        return Err(Error::InvalidDistribution("empty domain".into()));
    }
    if !(t > 0.0) || t > (1.0 / n as f64) * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "bigness threshold {t} must lie in (0, 1/n] with n = {n}"
        )));
    }
    Ok(p.iter().map(|&x| (t - x).max(0.0)).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    /// Per-vertex perturbation; `p + x` is monotone.
    pub x: Vec<f64>,
    /// The objective equals the weight of a violation matching, which
    /// bounds every feasible point from below.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedMatching {
    pub edges: Vec<((usize, usize), f64)>,
    pub total: f64,
}

fn check_lp_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded {
            what: "LP vertex count",
            size: n,
            cap,
        })
    } else {
        Ok(())
    }
}

/// Smallest `‖x‖₁` such that `p + x` is monotone on `g`.
pub fn func_dist_to_monotone(g: &Poset, p: &[f64]) -> Result<(f64, LpSolution)> {
    func_dist_to_monotone_capped(g, p, LP_CAP)
}

pub fn func_dist_to_monotone_capped(g: &Poset, p: &[f64], cap: usize) -> Result<(f64, LpSolution)> {
    check_len(g.n(), p.len())?;
    check_lp_cap(g.n(), cap)?;
    let n = g.n();
    // x(v) = x⁺(v) − x⁻(v), variables [x⁺ | x⁻]
    let mut lp = LinearProgram::new(2 * n);
    for j in 0..2 * n {
        lp.set_cost(j, 1.0);
    }
    for &(u, v) in g.edges() {
        lp.add_row(
            vec![(v, 1.0), (n + v, -1.0), (u, -1.0), (n + u, 1.0)],
            Cmp::Ge,
            p[u] - p[v],
        );
    }
    let r = lp.solve()?;
    let x: Vec<f64> = (0..n).map(|v| r.x[v] - r.x[n + v]).collect();
    let certified = match max_violation_matching(g, p) {
        Ok(m) => (m.total - r.objective).abs() <= 1e-7,
        Err(_) => false,
    };
    Ok((
        r.objective,
        LpSolution {
            objective: r.objective,
            x,
            certified,
        },
    ))
}

/// Maximum-weight matching on the transitive closure with weights
/// `max(0, p(u) − p(v))`.
pub fn max_violation_matching(g: &Poset, p: &[f64]) -> Result<WeightedMatching> {
    check_len(g.n(), p.len())?;
    let viol = |u: usize, v: usize| p[u] - p[v];
    let chosen: Vec<(usize, usize)> = match g.kind() {
        PosetKind::Matching => g
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| viol(u, v) > 0.0)
            .collect(),
        PosetKind::Bipartite => {
            // no directed 2-paths, so the closure is the edge set
            let mut left = vec![usize::MAX; g.n()];
            let mut right = vec![usize::MAX; g.n()];
            for (i, &b) in g.bottoms().iter().enumerate() {
                left[b] = i;
            }
            for (i, &t) in g.tops().iter().enumerate() {
                right[t] = i;
            }
            let edges: Vec<(usize, usize, f64)> = g
                .edges()
                .iter()
                .map(|&(u, v)| (left[u], right[v], viol(u, v)))
                .collect();
            max_weight_bipartite(g.bottoms().len(), g.tops().len(), &edges)
                .into_iter()
                .map(|k| g.edges()[k])
                .collect()
        }
        _ => {
            if g.n() > DP_MAX_VERTICES {
                return Err(Error::CapExceeded {
                    what: "general matching vertex count",
                    size: g.n(),
                    cap: DP_MAX_VERTICES,
                });
            }
            let pairs = g.closure().pairs();
            let edges: Vec<(usize, usize, f64)> =
                pairs.iter().map(|&(u, v)| (u, v, viol(u, v))).collect();
            max_weight_matching_dp(g.n(), &edges)?
                .into_iter()
                .map(|k| pairs[k])
                .collect()
        }
    };
    let mut edges: Vec<((usize, usize), f64)> =
        chosen.into_iter().map(|(u, v)| ((u, v), viol(u, v))).collect();
    edges.sort_by(|a, b| a.0.cmp(&b.0));
    let total = edges.iter().map(|e| e.1).sum();
    Ok(WeightedMatching { edges, total })
}

/// `min_{q monotone} d_TV(p, q)` by linear programming.
pub fn exact_dtv_to_monotone(g: &Poset, p: &[f64]) -> Result<f64> {
    exact_dtv_to_monotone_capped(g, p, LP_CAP)
}

pub fn exact_dtv_to_monotone_capped(g: &Poset, p: &[f64], cap: usize) -> Result<f64> {
    check_len(g.n(), p.len())?;
    check_lp_cap(g.n(), cap)?;
    let n = g.n();
    // variables [q | t], t_i ≥ |q_i − p_i|
    let mut lp = LinearProgram::new(2 * n);
    for i in 0..n {
        lp.set_cost(n + i, 0.5);
        lp.add_row(vec![(n + i, 1.0), (i, -1.0)], Cmp::Ge, -p[i]);
        lp.add_row(vec![(n + i, 1.0), (i, 1.0)], Cmp::Ge, p[i]);
    }
    lp.add_row((0..n).map(|i| (i, 1.0)).collect(), Cmp::Eq, 1.0);
    for &(u, v) in g.edges() {
        lp.add_row(vec![(v, 1.0), (u, -1.0)], Cmp::Ge, 0.0);
    }
    Ok(lp.solve()?.objective.max(0.0))
}

/// Replaces both endpoints of every violated matching edge by their average.
pub fn closest_monotone_on_matching(g: &Poset, p: &Distribution) -> Result<Distribution> {
    if g.kind() != PosetKind::Matching {
        return Err(Error::WrongKind {
            expected: "matching",
            found: g.kind().name(),
        });
    }
    check_len(g.n(), p.len())?;
    let mut q = p.probs().to_vec();
    for &(v, u) in g.edges() {
        if q[v] > q[u] {
            let m = 0.5 * (q[v] + q[u]);
            q[v] = m;
            q[u] = m;
        }
    }
    Distribution::new(q)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MinWMode {
    /// Transport LP onto monotone histograms supported on the grid of
    /// half-multiples of `step`.
    Lp { step: f64 },
    /// Moves each violating key `(x, y)` to its midpoint.
    Midpoint,
}

/// Closest monotone pair histogram to `g` (keys read as `(bottom, top)`
/// masses) and its transport distance.
pub fn min_w_to_monotone_pairhist(g: &PairHistogram, mode: MinWMode) -> Result<(f64, PairHistogram)> {
    if g.is_empty() {
        return Ok((0.0, PairHistogram::empty()));
    }
    match mode {
        MinWMode::Midpoint => {
            let mut w = 0.0;
            let fixed = g.support().iter().map(|&((x, y), c)| {
                if x > y {
                    w += c * (x - y);
                    let m = 0.5 * (x + y);
                    ((m, m), c)
                } else {
                    ((x, y), c)
                }
            });
            let fixed = PairHistogram::from_entries(fixed.collect::<Vec<_>>())?;
            Ok((w, fixed))
        }
        MinWMode::Lp { step } => min_w_grid_lp(g, step),
    }
}

fn min_w_grid_lp(g: &PairHistogram, step: f64) -> Result<(f64, PairHistogram)> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter(format!("grid step {step}")));
    }
    let src = g.support();
    if src.len() > GRID_SUPPORT_CAP {
        return Err(Error::InfeasibleGrid(format!(
            "support of {} keys exceeds {GRID_SUPPORT_CAP}",
            src.len()
        )));
    }
    let h = step / 2.0;
    let max_coord = src.iter().map(|((x, y), _)| x.max(*y)).fold(0.0f64, f64::max);
    let k = (max_coord / h - 1e-9).ceil().max(0.0) as usize;
    let points = (k + 1) * (k + 2) / 2 - 1;
    if points > GRID_CAP {
        return Err(Error::InfeasibleGrid(format!(
            "{points} grid points exceed {GRID_CAP}; use a coarser step or midpoint mode"
        )));
    }
    let mut grid = Vec::with_capacity(points);
    for a in 0..=k {
        for b in a..=k {
            if b > 0 {
                grid.push((a as f64 * h, b as f64 * h));
            }
        }
    }
    let ns = src.len();
    let gl = grid.len();
    // columns: f(s, z) for s in sources ∪ {origin}, z in grid; then f(s, origin)
    let col = |s: usize, z: usize| s * gl + z;
    let to_origin = |s: usize| (ns + 1) * gl + s;
    let mut lp = LinearProgram::new((ns + 1) * gl + ns);
    for (s, &((x, y), _)) in src.iter().enumerate() {
        for (z, &(a, b)) in grid.iter().enumerate() {
            lp.set_cost(col(s, z), (x - a).abs() + (y - b).abs());
        }
        lp.set_cost(to_origin(s), x + y);
    }
    for (z, &(a, b)) in grid.iter().enumerate() {
        lp.set_cost(col(ns, z), a + b);
    }
    for (s, &(_, c)) in src.iter().enumerate() {
        let mut row: Vec<(usize, f64)> = (0..gl).map(|z| (col(s, z), 1.0)).collect();
        row.push((to_origin(s), 1.0));
        lp.add_row(row, Cmp::Eq, c);
    }
    let mass_row = (0..=ns)
        .flat_map(|s| grid.iter().enumerate().map(move |(z, &(a, b))| (col(s, z), a + b)))
        .collect();
    lp.add_row(mass_row, Cmp::Eq, g.mass());
    let r = lp.solve()?;
    let target = grid.iter().enumerate().map(|(z, &key)| {
        let c: f64 = (0..=ns).map(|s| r.x[col(s, z)]).sum();
        (key, c)
    });
    let target = PairHistogram::from_entries(target.filter(|e| e.1 > 1e-12).collect::<Vec<_>>())?;
    Ok((r.objective.max(0.0), target))
}

/// `min_π ‖p1 − q1∘π‖₁ + ‖p2 − q2∘π‖₁` by enumerating permutations.
pub fn min_perm_l1(p1: &[f64], p2: &[f64], q1: &[f64], q2: &[f64]) -> Result<f64> {
    let n = p1.len();
    for len in [p2.len(), q1.len(), q2.len()] {
        check_len(n, len)?;
    }
    if n > PERM_CAP {
        return Err(Error::CapExceeded {
            what: "permutation domain",
            size: n,
            cap: PERM_CAP,
        });
    }
    let cost: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (p1[i] - q1[j]).abs() + (p2[i] - q2[j]).abs()
        })
        .collect();
    let eval = |perm: &[usize]| -> f64 { perm.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum() };
    // Heap's algorithm
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = eval(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(eval(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{is_monotone, make_hypercube, make_line, make_matching};
    use crate::prob::{pair_histogram, Distribution};
    use crate::transport::w_distance;
    use proptest::prelude::*;

    /// Distance to `Big(n, t)` by direct LP over the polytope.
    fn bigness_lp(p: &[f64], t: f64) -> f64 {
        let n = p.len();
        let mut lp = LinearProgram::new(2 * n);
        for i in 0..n {
            lp.set_cost(n + i, 0.5);
            lp.add_row(vec![(n + i, 1.0), (i, -1.0)], Cmp::Ge, -p[i]);
            lp.add_row(vec![(n + i, 1.0), (i, 1.0)], Cmp::Ge, p[i]);
            lp.add_row(vec![(i, 1.0)], Cmp::Ge, t);
        }
        lp.add_row((0..n).map(|i| (i, 1.0)).collect(), Cmp::Eq, 1.0);
        lp.solve().unwrap().objective
    }

    #[test]
    fn bigness_examples() {
        assert_eq!(dist_to_bigness(&[0.25; 4], 0.25).unwrap(), 0.0);
        let p = [0.1, 0.25, 0.25, 0.4];
        assert!((dist_to_bigness(&p, 0.25).unwrap() - 0.15).abs() < 1e-15);
        assert!((bigness_lp(&p, 0.25) - 0.15).abs() < 1e-9);
        let p = [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        assert!((dist_to_bigness(&p, 0.25).unwrap() - 0.25).abs() < 1e-15);
        assert!((bigness_lp(&p, 0.25) - 0.25).abs() < 1e-9);
        assert!(dist_to_bigness(&p, 0.3).is_err());
        assert!(dist_to_bigness(&p, 0.0).is_err());
    }

    #[test]
    fn lp3_examples() {
        let m = make_matching(1).unwrap();
        let (d, sol) = func_dist_to_monotone(&m, &[0.75, 0.25]).unwrap();
        assert!((d - 0.5).abs() < 1e-9);
        assert!(sol.certified);
        assert!(is_monotone(&m, &[0.75 + sol.x[0], 0.25 + sol.x[1]]).unwrap());
        let l = make_line(3).unwrap();
        let (d, sol) = func_dist_to_monotone(&l, &[0.5, 0.3, 0.2]).unwrap();
        assert!((d - 0.3).abs() < 1e-9);
        assert!(sol.certified);
        let (d, _) = func_dist_to_monotone(&l, &[0.2, 0.3, 0.5]).unwrap();
        assert!(d.abs() < 1e-12);
        let big = make_line(65).unwrap();
        assert!(matches!(
            func_dist_to_monotone(&big, &[1.0 / 65.0; 65]),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn violation_matching_examples() {
        let l = make_line(3).unwrap();
        let m = max_violation_matching(&l, &[0.5, 0.3, 0.2]).unwrap();
        assert_eq!(m.edges, vec![((0, 2), 0.3)]);
        assert!((m.total - 0.3).abs() < 1e-15);
        let m = max_violation_matching(&l, &[0.2, 0.3, 0.5]).unwrap();
        assert!(m.edges.is_empty());
        let mm = make_matching(1).unwrap();
        assert!((max_violation_matching(&mm, &[0.75, 0.25]).unwrap().total - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_dtv_examples() {
        let m = make_matching(1).unwrap();
        assert!((exact_dtv_to_monotone(&m, &[0.75, 0.25]).unwrap() - 0.25).abs() < 1e-9);
        assert!(exact_dtv_to_monotone(&m, &[0.25, 0.75]).unwrap().abs() < 1e-12);
        let h = make_hypercube(3).unwrap();
        let p: Vec<f64> = (0..8).map(|i| (8 - i) as f64 / 36.0).collect();
        let d = exact_dtv_to_monotone(&h, &p).unwrap();
        let w = max_violation_matching(&h, &p).unwrap().total;
        assert!(w / 2.0 <= d + 1e-9 && d <= w + 1e-9);
    }

    #[test]
    fn midpoint_examples() {
        let m = make_matching(1).unwrap();
        let p = Distribution::new(vec![0.75, 0.25]).unwrap();
        let q = closest_monotone_on_matching(&m, &p).unwrap();
        assert_eq!(q.probs(), &[0.5, 0.5]);
        let q2 = Distribution::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(closest_monotone_on_matching(&m, &q2).unwrap(), q2);
        assert!(closest_monotone_on_matching(&make_line(2).unwrap(), &q2).is_err());
    }

    #[test]
    fn min_w_examples() {
        let g = PairHistogram::from_entries([((0.75, 0.25), 1.0)]).unwrap();
        let (lp, target) = min_w_to_monotone_pairhist(&g, MinWMode::Lp { step: 0.25 }).unwrap();
        assert!((lp - 0.5).abs() < 1e-9);
        assert!((target.mass() - 1.0).abs() < 1e-9);
        let (mid, fixed) = min_w_to_monotone_pairhist(&g, MinWMode::Midpoint).unwrap();
        assert!((mid - 0.5).abs() < 1e-15);
        assert_eq!(fixed.support(), &[((0.5, 0.5), 1.0)]);
        let mono = PairHistogram::from_entries([((0.25, 0.75), 1.0)]).unwrap();
        assert_eq!(min_w_to_monotone_pairhist(&mono, MinWMode::Midpoint).unwrap().0, 0.0);
        assert!(min_w_to_monotone_pairhist(&mono, MinWMode::Lp { step: 0.25 }).unwrap().0.abs() < 1e-9);
        assert_eq!(min_w_to_monotone_pairhist(&PairHistogram::empty(), MinWMode::Midpoint).unwrap().0, 0.0);
        assert!(matches!(
            min_w_to_monotone_pairhist(&g, MinWMode::Lp { step: 1e-4 }),
            Err(Error::InfeasibleGrid(_))
        ));
    }

    #[test]
    fn midpoint_cost_is_its_transport_distance() {
        let g = PairHistogram::from_entries([((0.3, 0.1), 2.0), ((0.1, 0.2), 1.0), ((0.4, 0.0), 1.0)]).unwrap();
        let (w, fixed) = min_w_to_monotone_pairhist(&g, MinWMode::Midpoint).unwrap();
        assert!((w - w_distance(&g, &fixed).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn perm_examples() {
        let p1 = [0.1, 0.2, 0.3];
        let p2 = [0.3, 0.0, 0.4];
        assert_eq!(min_perm_l1(&p1, &p2, &p1, &p2).unwrap(), 0.0);
        let q1 = [0.3, 0.1, 0.2];
        let q2 = [0.4, 0.3, 0.0];
        assert!(min_perm_l1(&p1, &p2, &q1, &q2).unwrap().abs() < 1e-15);
        assert!(min_perm_l1(&[0.0; 10], &[0.0; 10], &[0.0; 10], &[0.0; 10]).is_err());
    }

    fn grid_hist() -> impl Strategy<Value = PairHistogram> {
        proptest::collection::vec(((0u32..5, 0u32..5), 1u32..3), 1..4).prop_map(|v| {
            PairHistogram::from_entries(
                v.into_iter()
                    .map(|((x, y), c)| ((x as f64 / 10.0, y as f64 / 10.0), c as f64)),
            )
            .unwrap()
        })
    }

    fn dist(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0u32..6, n).prop_filter_map("nonzero", |v| {
            let s: u32 = v.iter().sum();
            (s > 0).then(|| v.into_iter().map(|x| x as f64 / s as f64).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn midpoint_bounds_lp(g in grid_hist()) {
            let (mid, _) = min_w_to_monotone_pairhist(&g, MinWMode::Midpoint).unwrap();
            let (lp, _) = min_w_to_monotone_pairhist(&g, MinWMode::Lp { step: 0.1 }).unwrap();
            prop_assert!(mid >= lp - 1e-9);
            prop_assert!((mid - lp).abs() < 1e-7);
        }

        #[test]
        fn midpoint_attains_exact_distance(k in 1usize..4, raw in dist(6)) {
            let g = make_matching(k).unwrap();
            let p = Distribution::normalized(raw[..2 * k].iter().map(|x| x + 0.01).collect()).unwrap();
            let q = closest_monotone_on_matching(&g, &p).unwrap();
            prop_assert!(is_monotone(&g, q.probs()).unwrap());
            let cost = crate::prob::tv_distance(&p, &q).unwrap();
            prop_assert!((cost - exact_dtv_to_monotone(&g, p.probs()).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn bigness_formula_matches_lp(raw in dist(6), frac in 0.1f64..1.0) {
            let t = frac / 6.0;
            prop_assert!((dist_to_bigness(&raw, t).unwrap() - bigness_lp(&raw, t)).abs() < 1e-9);
        }

        #[test]
        fn w_dominates_permutation_l1(a in dist(5), b in dist(5), c in dist(5), d in dist(5)) {
            let w = w_distance(&pair_histogram(&a, &b).unwrap(), &pair_histogram(&c, &d).unwrap()).unwrap();
            prop_assert!(w >= min_perm_l1(&a, &b, &c, &d).unwrap() - 1e-9);
        }
    }
}
