//! Empirical distinguishing advantage between the two histogram ensembles.
//!
//! For each trial one `V` and one `V′` vector are drawn, conditioned on the
//! prior-side event clauses, and their Poisson histograms are grown along the
//! sweep of sample sizes with independent increments. A lower-level histogram
//! is a binomial thinning of a higher-level one, so the statistics of every
//! level up to the current one form a valid classifier family at that level.
//! The advantage reported is the best Kolmogorov-Smirnov separation in that
//! family, a lower estimate of total variation only.

use rand_distr::{Distribution as _, Poisson};

use crate::error::{Error, Result};
use crate::lowerbound::instance::{count_clause, mean_clause, zero_clause, PriorSampler};
use crate::lowerbound::priors::{Measure, MomentPriors};
use crate::par::par_map;
use crate::prob::Rng;

pub const Z95: f64 = 1.959_963_984_540_054;
/// Rejection-sampling attempts allowed per conditioned prior draw.
pub const MAX_ATTEMPTS: usize = 10_000;
/// Statistics per level: unseen, seen once, seen twice, total count.
pub const STATS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeRow {
    pub s: f64,
    pub advantage: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Fraction of draws, over both ensembles, meeting `Σh > s(1−ν)/2`.
    pub event_rate: f64,
}

/// Wilson interval for a proportion `acc` observed over `n` trials.
pub fn wilson(acc: f64, n: f64, z: f64) -> (f64, f64) {
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (acc + z2 / (2.0 * n)) / denom;
    let half = z / denom * (acc * (1.0 - acc) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// `sup_t |F_a(t) − F_b(t)|`.
pub fn ks_distance(a: &[u64], b: &[u64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort_unstable();
    b.sort_unstable();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut best) = (0, 0, 0.0f64);
    while i < a.len() || j < b.len() {
        let t = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < a.len() && a[i] == t {
            i += 1;
        }
        while j < b.len() && b[j] == t {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}

struct Trajectory {
    stats: Vec<[u64; STATS]>,
    counted: Vec<bool>,
}

fn conditioned_atoms(
    sampler: &PriorSampler,
    atoms: &[f64],
    n: usize,
    priors: &MomentPriors,
    need_zeros: bool,
    rng: &mut Rng,
) -> Result<Vec<usize>> {
    for _ in 0..MAX_ATTEMPTS {
        let idx: Vec<usize> = (0..n).map(|_| sampler.index(rng)).collect();
        let v: Vec<f64> = idx.iter().map(|&k| atoms[k]).collect();
        if !mean_clause(&v, priors.nu) {
            continue;
        }
        if need_zeros {
            let r = v.iter().filter(|&&x| x == 0.0).count();
            if !zero_clause(r, priors.beta, n, priors.d) {
                continue;
            }
        }
        return Ok(idx);
    }
    Err(Error::Infeasible(format!(
        "event clauses not met in {MAX_ATTEMPTS} prior draws at n = {n}"
    )))
}

fn trajectory(
    measure: &Measure,
    n: usize,
    increments: &[Vec<Option<Poisson<f64>>>],
    levels: &[f64],
    priors: &MomentPriors,
    need_zeros: bool,
    rng: &mut Rng,
) -> Result<Trajectory> {
    let sampler = PriorSampler::new(measure)?;
    let atoms: Vec<f64> = measure.iter().map(|e| e.0).collect();
    let idx = conditioned_atoms(&sampler, &atoms, n, priors, need_zeros, rng)?;
    let mut counts = vec![0u64; n];
    let mut total = 0u64;
    let mut stats = Vec::with_capacity(levels.len());
    let mut counted = Vec::with_capacity(levels.len());
    for (lvl, &s) in levels.iter().enumerate() {
        for (c, &k) in counts.iter_mut().zip(&idx) {
            if let Some(p) = &increments[lvl][k] {
                let x = p.sample(rng) as u64;
                *c += x;
                total += x;
            }
        }
        let mut st = [0u64; STATS];
        for &c in &counts {
            if c < 3 {
                st[c as usize] += 1;
            }
        }
        st[3] = total;
        stats.push(st);
        counted.push(count_clause(total, s, priors.nu));
    }
    Ok(Trajectory { stats, counted })
}

fn increment_laws(measure: &Measure, n: usize, levels: &[f64]) -> Result<Vec<Vec<Option<Poisson<f64>>>>> {
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(levels.len());
    for &s in levels {
        let ds = s - prev;
        prev = s;
        let row = measure
            .iter()
            .map(|&(a, _)| {
                let rate = ds * a / n as f64;
                if rate > 0.0 {
                    Poisson::new(rate)
                        .map(Some)
                        .map_err(|e| Error::InvalidParameter(format!("Poisson rate {rate}: {e}")))
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(row);
    }
    Ok(out)
}

/// Best empirical advantage per sample size; `s_values` must be
/// nondecreasing.
pub fn indistinguishability_probe(
    priors: &MomentPriors,
    n: usize,
    s_values: &[f64],
    trials: usize,
    rng: &Rng,
) -> Result<Vec<ProbeRow>> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidParameter("n and trials must be positive".into()));
    }
    if s_values.iter().any(|s| !(s.is_finite() && *s >= 0.0)) || s_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "sample sizes must be finite, nonnegative and nondecreasing".into(),
        ));
    }
    let inc_v = increment_laws(&priors.v, n, s_values)?;
    let inc_vp = increment_laws(&priors.v_prime, n, s_values)?;
    let runs = par_map(trials, |t| -> Result<(Trajectory, Trajectory)> {
        let mut r_plus = rng.fork(2 * t as u64);
        let mut r_minus = rng.fork(2 * t as u64 + 1);
        Ok((
            trajectory(&priors.v, n, &inc_v, s_values, priors, false, &mut r_plus)?,
            trajectory(&priors.v_prime, n, &inc_vp, s_values, priors, true, &mut r_minus)?,
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let big_n = 2.0 * trials as f64;
    let mut best = 0.0f64;
    let mut rows = Vec::with_capacity(s_values.len());
    for (lvl, &s) in s_values.iter().enumerate() {
        for j in 0..STATS {
            let a: Vec<u64> = runs.iter().map(|r| r.0.stats[lvl][j]).collect();
            let b: Vec<u64> = runs.iter().map(|r| r.1.stats[lvl][j]).collect();
            best = best.max(ks_distance(&a, &b));
        }
        let (lo, hi) = wilson((1.0 + best) / 2.0, big_n, Z95);
        let hits = runs
            .iter()
            .map(|r| r.0.counted[lvl] as usize + r.1.counted[lvl] as usize)
            .sum::<usize>();
        rows.push(ProbeRow {
            s,
            advantage: best,
            ci_low: 2.0 * lo - 1.0,
            ci_high: 2.0 * hi - 1.0,
            event_rate: hits as f64 / big_n,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowerbound::priors::build_priors;
    use proptest::prelude::*;
    use super::Rng;

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&[1, 2, 3], &[1, 2, 3]), 0.0);
        assert_eq!(ks_distance(&[0, 0], &[5, 5]), 1.0);
        assert!((ks_distance(&[0, 1], &[1, 1]) - 0.5).abs() < 1e-15);
        assert_eq!(ks_distance(&[], &[1]), 0.0);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson(0.5, 2000.0, Z95);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((hi - lo - 2.0 * 0.0219).abs() < 1e-3);
        assert!((wilson(1.0, 10.0, Z95).1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_sweep_has_no_advantage_and_large_sweep_separates() {
        let pr = build_priors(0.5, 6.0, 4, 200).unwrap();
        let n = 200;
        let big = 50.0 * pr.beta * n as f64 * pr.lambda;
        let rows = indistinguishability_probe(&pr, n, &[0.0, big], 40, &Rng::new(3, 0)).unwrap();
        assert_eq!(rows[0].advantage, 0.0);
        assert_eq!(rows[0].event_rate, 0.0);
        assert!(rows[1].advantage > 0.95, "{:?}", rows[1]);
        assert!(rows[0].ci_low <= rows[0].advantage && rows[0].advantage <= rows[0].ci_high);
    }

    #[test]
    fn rejects_unsorted_sweep() {
        let pr = build_priors(0.5, 6.0, 4, 200).unwrap();
        assert!(indistinguishability_probe(&pr, 10, &[2.0, 1.0], 5, &Rng::new(0, 0)).is_err());
        assert!(indistinguishability_probe(&pr, 10, &[1.0], 0, &Rng::new(0, 0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]
        #[test]
        fn advantage_nondecreasing_and_reproducible(seed in any::<u64>()) {
            let pr = build_priors(0.5, 6.0, 4, 200).unwrap();
            let s = [0.0, 20.0, 80.0, 320.0];
            let a = indistinguishability_probe(&pr, 300, &s, 30, &Rng::new(seed, 1)).unwrap();
            let b = indistinguishability_probe(&pr, 300, &s, 30, &Rng::new(seed, 1)).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(a.windows(2).all(|w| w[0].advantage <= w[1].advantage));
        }

        #[test]
        fn ks_is_symmetric_and_bounded(a in proptest::collection::vec(0u64..20, 1..30), b in proptest::collection::vec(0u64..20, 1..30)) {
            let d = ks_distance(&a, &b);
            prop_assert_eq!(d, ks_distance(&b, &a));
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }
}
