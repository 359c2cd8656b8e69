//! Raw metrics behind the acceptance checks, and their pass rules.

use std::time::Instant;

use rand::Rng as _;

use poset_dist::lowerbound::{
    assign_parameters, build_priors, eps_for_lambda, generate_instance, indistinguishability_probe, opt_value,
    solve_lp2_discretized, ProbeRow, DEFAULT_GRID,
};
use poset_dist::oracle::{
    dist_to_bigness, exact_dtv_to_monotone, func_dist_to_monotone, max_violation_matching, min_perm_l1,
};
use poset_dist::par::par_map;
use poset_dist::poset::{is_monotone, make_hypercube, make_matching};
use poset_dist::prob::pair_histogram;
use poset_dist::reductions::{
    bigness_to_matching, bipartite_to_matching, general_to_bipartite, hypercube_embedding, hypercube_filler,
    hypercube_filler_count, hypercube_normalizer, matching_to_hypercube,
};
use poset_dist::testers::{
    all_matchings_test, bigness_test, bipartite_bounded_degree_test, matching_monotonicity_test,
    uniform_subset_test, DistSource, LearnerSpec,
};
use poset_dist::transport::w_distance;
use poset_dist::{Distribution, Rng};

use crate::config::TesterAlg;
use crate::error::{invalid, Result};
use crate::instances::{
    bigness_distance, bigness_instance, bipartite_instance, certified_far_lower, matching_distance,
    matching_instance, random_bipartite, random_dag, random_distribution, random_monotone, random_weights,
    uniform_subset_instance, Case,
};

pub const CRITERIA: u32 = 10;

/// Criteria 1 and 2.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub instances: usize,
    /// `max |LP − matching weight|`.
    pub max_gap: f64,
    /// `min (d_TV − W/2)`.
    pub min_lower_slack: f64,
    /// `min (W − d_TV)`.
    pub min_upper_slack: f64,
    pub uncertified: usize,
    pub seconds: f64,
}

pub fn duality_sweep(seed: u64, instances: usize, max_n: usize) -> Result<DualityReport> {
    let start = Instant::now();
    let base = Rng::new(seed, 1);
    let rows = par_map(instances, |k| -> Result<(f64, f64, f64, bool)> {
        let mut rng = base.fork(k as u64);
        let n = rng.random_range(1..=max_n);
        let density = rng.random::<f64>() * 0.6;
        let g = random_dag(n, density, &mut rng)?;
        let p = random_distribution(n, &mut rng)?;
        let (lp, sol) = func_dist_to_monotone(&g, p.probs())?;
        let w = max_violation_matching(&g, p.probs())?.total;
        let dtv = exact_dtv_to_monotone(&g, p.probs())?;
        Ok(((lp - w).abs(), dtv - w / 2.0, w - dtv, sol.certified))
    });
    let mut r = DualityReport {
        instances,
        max_gap: 0.0,
        min_lower_slack: f64::INFINITY,
        min_upper_slack: f64::INFINITY,
        uncertified: 0,
        seconds: 0.0,
    };
    for row in rows {
        let (gap, lo, hi, cert) = row?;
        r.max_gap = r.max_gap.max(gap);
        r.min_lower_slack = r.min_lower_slack.min(lo);
        r.min_upper_slack = r.min_upper_slack.min(hi);
        r.uncertified += usize::from(!cert);
    }
    r.seconds = start.elapsed().as_secs_f64();
    Ok(r)
}

/// Criterion 3.
#[derive(Clone, Debug, PartialEq)]
pub struct LpGridReport {
    /// `(λ, L, closed form, LP objective)`.
    pub cells: Vec<(f64, usize, f64, f64)>,
    pub max_err: f64,
    pub seconds: f64,
}

pub const LAMBDAS: [f64; 3] = [4.0, 6.0, 9.0];
pub const LS: [usize; 3] = [3, 4, 5];

pub fn lp_grid(grid: usize) -> Result<LpGridReport> {
    let start = Instant::now();
    let mut cells = Vec::new();
    let mut max_err = 0.0f64;
    for &lambda in &LAMBDAS {
        for &l in &LS {
            let exact = opt_value(0.5, lambda, l)?;
            let lp = solve_lp2_discretized(0.5, lambda, l, grid)?.objective;
            max_err = max_err.max((exact - lp).abs());
            cells.push((lambda, l, exact, lp));
        }
    }
    Ok(LpGridReport {
        cells,
        max_err,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Criterion 4.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub priors: usize,
    pub max_moment_err: f64,
    pub max_mean_err: f64,
    pub max_mass_err: f64,
    pub support_violations: usize,
    pub beta_violations: usize,
}

pub fn moment_sweep(grid: usize) -> Result<MomentReport> {
    let mut r = MomentReport {
        priors: 0,
        max_moment_err: 0.0,
        max_mean_err: 0.0,
        max_mass_err: 0.0,
        support_violations: 0,
        beta_violations: 0,
    };
    for &lambda in &LAMBDAS {
        for l in 2..=6 {
            let rep = build_priors(0.5, lambda, l, grid)?.report();
            r.priors += 1;
            r.max_moment_err = r.max_moment_err.max(rep.moment_rel_err);
            r.max_mean_err = r.max_mean_err.max(rep.mean_err);
            r.max_mass_err = r.max_mass_err.max(rep.mass_err);
            r.support_violations += usize::from(!rep.support_ok);
            r.beta_violations += usize::from(!rep.beta_ok);
        }
    }
    Ok(r)
}

/// Criterion 5.
#[derive(Clone, Debug, PartialEq)]
pub struct EventReport {
    pub instances: usize,
    pub e_rate: f64,
    pub e_prime_rate: f64,
    /// E-flagged instances whose normalised `p` is not `1/(βn)`-big.
    pub bigness_violations: usize,
    /// E′-flagged instances with distance below `d/2`.
    pub far_violations: usize,
    /// Instances with `p_max > λ/(n(1−ν))`.
    pub pmax_violations: usize,
}

pub fn event_sweep(seed: u64, n: usize, instances: usize) -> Result<EventReport> {
    let params = assign_parameters(n, eps_for_lambda(6.0, 4), 4)?;
    let priors = build_priors(params.nu, params.lambda, 4, DEFAULT_GRID)?;
    let base = Rng::new(seed, 5);
    let rows = par_map(instances, |k| -> Result<(bool, bool, bool, bool, bool)> {
        let inst = generate_instance(&priors, n, params.s as f64, &mut base.fork(k as u64))?;
        let t = inst.threshold();
        let big_bad = inst.e && inst.p_norm.iter().any(|&x| x < t - 1e-12);
        let pmax_bad = inst.p_max() > inst.lambda / (n as f64 * (1.0 - inst.nu));
        let far_bad = inst.e_prime && dist_to_bigness(&inst.p_prime_norm, t)? < inst.d / 2.0;
        Ok((inst.e, inst.e_prime, big_bad, far_bad, pmax_bad))
    });
    let mut r = EventReport {
        instances,
        e_rate: 0.0,
        e_prime_rate: 0.0,
        bigness_violations: 0,
        far_violations: 0,
        pmax_violations: 0,
    };
    for row in rows {
        let (e, ep, b, f, m) = row?;
        r.e_rate += f64::from(u8::from(e));
        r.e_prime_rate += f64::from(u8::from(ep));
        r.bigness_violations += usize::from(b);
        r.far_violations += usize::from(f);
        r.pmax_violations += usize::from(m);
    }
    r.e_rate /= instances as f64;
    r.e_prime_rate /= instances as f64;
    Ok(r)
}

/// Criterion 6, one row per reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractReport {
    pub reduction: &'static str,
    pub instances: usize,
    /// `min (target distance − factor · source distance)`.
    pub min_slack: f64,
    pub monotone_failures: usize,
}

fn fold_contract(reduction: &'static str, rows: Vec<Result<(f64, bool)>>) -> Result<ContractReport> {
    let mut r = ContractReport {
        reduction,
        instances: rows.len(),
        min_slack: f64::INFINITY,
        monotone_failures: 0,
    };
    for row in rows {
        let (slack, mono_ok) = row?;
        r.min_slack = r.min_slack.min(slack);
        r.monotone_failures += usize::from(!mono_ok);
    }
    Ok(r)
}

pub fn contract_sweep(seed: u64, per_kind: usize) -> Result<Vec<ContractReport>> {
    let base = Rng::new(seed, 6);
    let g2b = par_map(per_kind, |k| -> Result<(f64, bool)> {
        let mut rng = base.fork(k as u64);
        let n = rng.random_range(1..=6);
        let g = random_dag(n, rng.random::<f64>() * 0.7, &mut rng)?;
        let red = general_to_bipartite(&g)?;
        let p = random_distribution(n, &mut rng)?;
        let src = exact_dtv_to_monotone(&g, p.probs())?;
        let tgt = exact_dtv_to_monotone(red.target(), red.map_distribution(&p)?.probs())?;
        let m = random_monotone(&g, &mut rng)?;
        let mono = is_monotone(red.target(), red.map_distribution(&m)?.probs())?;
        Ok((tgt - red.contract().far_factor * src, mono))
    });
    let b2m = par_map(per_kind, |k| -> Result<(f64, bool)> {
        let mut rng = base.fork(1 << 32 | k as u64);
        let nb = rng.random_range(1..=3);
        let nt = rng.random_range(1..=3);
        let g = random_bipartite(nb, nt, 0.3 + 0.7 * rng.random::<f64>(), &mut rng)?;
        let delta = g.max_degree().max(1);
        let red = bipartite_to_matching(&g, delta)?;
        let p = random_distribution(nb + nt, &mut rng)?;
        let src = exact_dtv_to_monotone(&g, p.probs())?;
        let tgt = exact_dtv_to_monotone(red.target(), red.map_distribution(&p)?.probs())?;
        let m = random_monotone(&g, &mut rng)?;
        let mono = is_monotone(red.target(), red.map_distribution(&m)?.probs())?;
        Ok((tgt - src / (2.0 * delta as f64), mono))
    });
    let big2m = par_map(per_kind, |k| -> Result<(f64, bool)> {
        let mut rng = base.fork(2 << 32 | k as u64);
        let n = rng.random_range(1..=6);
        let t = (0.05 + 0.95 * rng.random::<f64>()) / n as f64;
        let p = random_distribution(n, &mut rng)?;
        let src = dist_to_bigness(p.probs(), t)?;
        let (q, meta) = bigness_to_matching(&p, t)?;
        let tgt = exact_dtv_to_monotone(&meta.poset, q.probs())?;
        let w = random_weights(n, &mut rng);
        let s: f64 = w.iter().sum();
        let big: Vec<f64> = w
            .iter()
            .map(|x| t + (1.0 - n as f64 * t) * if s > 0.0 { x / s } else { 1.0 / n as f64 })
            .collect();
        let (qb, meta_b) = bigness_to_matching(&Distribution::new(big)?, t)?;
        let mono = is_monotone(&meta_b.poset, qb.probs())?;
        Ok((tgt - src / (2.0 * meta.scale), mono))
    });
    let cube = make_hypercube(4)?;
    let m2hyp = par_map(per_kind, |k| -> Result<(f64, bool)> {
        let mut rng = base.fork(3 << 32 | k as u64);
        let ell = rng.random_range(1..=4u32);
        let pairs = hypercube_embedding(4, ell)?.len();
        let g = make_matching(pairs)?;
        let p = random_distribution(2 * pairs, &mut rng)?;
        let pmax = p.probs().iter().copied().fold(0.0, f64::max);
        let q = matching_to_hypercube(4, ell, &p, pmax)?;
        let src = exact_dtv_to_monotone(&g, p.probs())?;
        let tgt = exact_dtv_to_monotone(&cube, q.probs())?;
        let w = hypercube_normalizer(4, ell, pmax);
        let m = random_monotone(&g, &mut rng)?;
        let mmax = m.probs().iter().copied().fold(0.0, f64::max);
        let mono = is_monotone(&cube, matching_to_hypercube(4, ell, &m, mmax)?.probs())?;
        Ok((tgt - src / w, mono))
    });
    Ok(vec![
        fold_contract("g2b", g2b)?,
        fold_contract("b2m", b2m)?,
        fold_contract("big2m", big2m)?,
        fold_contract("m2hyp", m2hyp)?,
    ])
}

/// Criterion 7.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingReport {
    pub cases: usize,
    pub comparable_pairs: usize,
    pub filler_mismatches: usize,
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn embedding_sweep(max_d: u32) -> Result<EmbeddingReport> {
    let mut r = EmbeddingReport {
        cases: 0,
        comparable_pairs: 0,
        filler_mismatches: 0,
    };
    let below = |a: usize, b: usize| a & !b == 0;
    for d in 1..=max_d {
        for ell in 1..=d {
            r.cases += 1;
            let pairs = hypercube_embedding(d, ell)?;
            for (i, &(a0, a1)) in pairs.iter().enumerate() {
                for &(b0, b1) in &pairs[i + 1..] {
                    let comparable = [a0, a1]
                        .iter()
                        .any(|&x| [b0, b1].iter().any(|&y| below(x, y) || below(y, x)));
                    r.comparable_pairs += usize::from(comparable);
                }
            }
            let expected = (ell as u64..=d as u64).map(|i| choose(d as u64, i)).sum::<u64>()
                - choose(d as u64 - 1, ell as u64 - 1);
            let listed = hypercube_filler(d, ell)?.len() as u64;
            let counted = hypercube_filler_count(d, ell);
            if listed != expected || counted.to_string() != expected.to_string() {
                r.filler_mismatches += 1;
            }
        }
    }
    Ok(r)
}

/// Criterion 8, one row per (tester, n, case).
#[derive(Clone, Debug, PartialEq)]
pub struct TesterReport {
    pub alg: TesterAlg,
    pub n: usize,
    pub case: Case,
    pub trials: usize,
    pub errors: usize,
    /// Smallest certified distance among far instances, zero for yes.
    pub min_certified: f64,
    pub max_seconds: f64,
}

impl TesterReport {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }
}

pub const TESTER_EPS: f64 = 0.2;
pub const TESTER_DEGREE: usize = 3;

fn tester_trial(alg: TesterAlg, n: usize, case: Case, rng: &mut Rng) -> Result<(bool, f64, f64)> {
    let eps = TESTER_EPS;
    let spec = LearnerSpec::default();
    let (verdict, certified, seconds) = match alg {
        TesterAlg::Bigness => {
            let (p, t) = bigness_instance(n, eps, case, rng)?;
            let cert = bigness_distance(&p, t)?;
            let start = Instant::now();
            let v = bigness_test(&DistSource(p), t, eps, &spec, rng)?;
            (v, cert, start.elapsed().as_secs_f64())
        }
        TesterAlg::Matching => {
            let (g, p) = matching_instance(n, case, rng)?;
            let cert = matching_distance(&g, &p)?;
            let start = Instant::now();
            let v = matching_monotonicity_test(&g, &DistSource(p), eps, &spec, rng)?;
            (v, cert, start.elapsed().as_secs_f64())
        }
        TesterAlg::Bipartite | TesterAlg::AllMatchings => {
            let (g, p) = bipartite_instance(n, TESTER_DEGREE, case, rng)?;
            let cert = certified_far_lower(&g, &p)?;
            let start = Instant::now();
            let v = if alg == TesterAlg::Bipartite {
                bipartite_bounded_degree_test(&g, TESTER_DEGREE, &DistSource(p), eps, &spec, rng)?
            } else {
                all_matchings_test(&g, &DistSource(p), eps, rng)?
            };
            (v, cert, start.elapsed().as_secs_f64())
        }
        TesterAlg::UniformSubset => {
            let (g, p, r) = uniform_subset_instance(n, TESTER_DEGREE, case, rng)?;
            let cert = certified_far_lower(&g, &p)?;
            let start = Instant::now();
            let v = uniform_subset_test(&g, r, &DistSource(p), eps, rng)?;
            (v, cert, start.elapsed().as_secs_f64())
        }
    };
    let wrong = match case {
        Case::Yes => !verdict.is_accept(),
        Case::Far => verdict.is_accept(),
    };
    Ok((wrong, certified, seconds))
}

pub fn tester_sweep(seed: u64, ns: &[usize], trials: usize) -> Result<Vec<TesterReport>> {
    let mut out = Vec::new();
    for (ai, &alg) in TesterAlg::ALL.iter().enumerate() {
        for &n in ns {
            for (ci, case) in [Case::Yes, Case::Far].into_iter().enumerate() {
                let base = Rng::new(seed, (ai * 1000 + n * 2 + ci) as u64 + 100);
                let rows = par_map(trials, |k| tester_trial(alg, n, case, &mut base.fork(k as u64)));
                let mut r = TesterReport {
                    alg,
                    n,
                    case,
                    trials,
                    errors: 0,
                    min_certified: f64::INFINITY,
                    max_seconds: 0.0,
                };
                for row in rows {
                    let (wrong, cert, secs) = row?;
                    r.errors += usize::from(wrong);
                    r.min_certified = r.min_certified.min(cert);
                    r.max_seconds = r.max_seconds.max(secs);
                }
                if case == Case::Yes {
                    r.min_certified = 0.0;
                }
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Criterion 9.
#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub instances: usize,
    /// `max |W(h,g) − W(g,h)|`.
    pub max_asymmetry: f64,
    /// `min (W(h,g) + W(g,k) − W(h,k))`.
    pub min_triangle_slack: f64,
    /// `min (W(h,g) − min_π ℓ1)`.
    pub min_tv_slack: f64,
}

pub fn law_sweep(seed: u64, instances: usize, max_n: usize) -> Result<LawReport> {
    let base = Rng::new(seed, 9);
    let rows = par_map(instances, |k| -> Result<(f64, f64, f64)> {
        let mut rng = base.fork(k as u64);
        let n = rng.random_range(1..=max_n);
        let v: Vec<Vec<f64>> = (0..6).map(|_| random_weights(n, &mut rng).iter().map(|x| x / n as f64).collect()).collect();
        let h = pair_histogram(&v[0], &v[1])?;
        let g = pair_histogram(&v[2], &v[3])?;
        let kk = pair_histogram(&v[4], &v[5])?;
        let hg = w_distance(&h, &g)?;
        let gh = w_distance(&g, &h)?;
        let gk = w_distance(&g, &kk)?;
        let hk = w_distance(&h, &kk)?;
        let perm = min_perm_l1(&v[0], &v[1], &v[2], &v[3])?;
        Ok(((hg - gh).abs(), hg + gk - hk, hg - perm))
    });
    let mut r = LawReport {
        instances,
        max_asymmetry: 0.0,
        min_triangle_slack: f64::INFINITY,
        min_tv_slack: f64::INFINITY,
    };
    for row in rows {
        let (a, t, p) = row?;
        r.max_asymmetry = r.max_asymmetry.max(a);
        r.min_triangle_slack = r.min_triangle_slack.min(t);
        r.min_tv_slack = r.min_tv_slack.min(p);
    }
    Ok(r)
}

/// Criterion 10.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    /// Index of `⌊Ln/(2eλ)⌋` in `rows`.
    pub reference_index: usize,
    pub s_reference: u64,
}

/// Multiples of the lower-bound sample size swept by the probe.
pub const PROBE_MULTIPLES: [f64; 7] = [0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0];

pub fn probe_sweep(seed: u64, n: usize, trials: usize) -> Result<ProbeReport> {
    let params = assign_parameters(n, eps_for_lambda(6.0, 4), 4)?;
    let priors = build_priors(params.nu, params.lambda, 4, DEFAULT_GRID)?;
    let s: Vec<f64> = PROBE_MULTIPLES.iter().map(|m| (m * params.s as f64).floor()).collect();
    let rows = indistinguishability_probe(&priors, n, &s, trials, &Rng::new(seed, 10))?;
    let reference_index = PROBE_MULTIPLES.iter().position(|&m| m == 1.0).unwrap_or(0);
    Ok(ProbeReport {
        rows,
        reference_index,
        s_reference: params.s,
    })
}

/// Metrics and verdict of one criterion as reported by the suite.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub pass: bool,
    pub metrics: Vec<(String, f64)>,
}

fn outcome(id: u32, pass: bool, metrics: Vec<(&str, f64)>) -> CriterionOutcome {
    CriterionOutcome {
        id,
        pass,
        metrics: metrics.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    }
}

/// Runs criterion `id` at its full size.
pub fn evaluate(id: u32, seed: u64) -> Result<CriterionOutcome> {
    Ok(match id {
        1 | 2 => {
            let r = duality_sweep(seed, 500, 10)?;
            if id == 1 {
                outcome(
                    1,
                    r.max_gap <= 1e-7 && r.seconds < 30.0,
                    vec![("max_gap", r.max_gap), ("seconds", r.seconds)],
                )
            } else {
                outcome(
                    2,
                    r.min_lower_slack >= -1e-9 && r.min_upper_slack >= -1e-9,
                    vec![("min_lower_slack", r.min_lower_slack), ("min_upper_slack", r.min_upper_slack)],
                )
            }
        }
        3 => {
            let r = lp_grid(DEFAULT_GRID)?;
            let reference = r
                .cells
                .iter()
                .find(|c| c.0 == 6.0 && c.1 == 4)
                .map_or(f64::INFINITY, |c| (c.3 - 1.0 / 54.0).abs());
            outcome(
                3,
                r.max_err <= 1e-3 && reference <= 1e-3 && r.seconds < 60.0,
                vec![("max_err", r.max_err), ("reference_err", reference), ("seconds", r.seconds)],
            )
        }
        4 => {
            let r = moment_sweep(DEFAULT_GRID)?;
            outcome(
                4,
                r.max_moment_err <= 1e-8 && r.max_mean_err <= 1e-8 && r.support_violations == 0,
                vec![
                    ("max_moment_err", r.max_moment_err),
                    ("max_mean_err", r.max_mean_err),
                    ("support_violations", r.support_violations as f64),
                ],
            )
        }
        5 => {
            let r = event_sweep(seed, 10_000, 1000)?;
            outcome(
                5,
                r.e_rate >= 0.95 && r.bigness_violations == 0 && r.far_violations == 0 && r.pmax_violations == 0,
                vec![
                    ("e_rate", r.e_rate),
                    ("bigness_violations", r.bigness_violations as f64),
                    ("far_violations", r.far_violations as f64),
                    ("pmax_violations", r.pmax_violations as f64),
                ],
            )
        }
        6 => {
            let rows = contract_sweep(seed, 200)?;
            let slack = rows.iter().map(|r| r.min_slack).fold(f64::INFINITY, f64::min);
            let mono = rows.iter().map(|r| r.monotone_failures).sum::<usize>();
            outcome(6, slack >= -1e-9 && mono == 0, vec![("min_slack", slack), ("monotone_failures", mono as f64)])
        }
        7 => {
            let r = embedding_sweep(10)?;
            outcome(
                7,
                r.comparable_pairs == 0 && r.filler_mismatches == 0,
                vec![("comparable_pairs", r.comparable_pairs as f64), ("filler_mismatches", r.filler_mismatches as f64)],
            )
        }
        8 => {
            let rows = tester_sweep(seed, &[50, 200], 100)?;
            let worst = rows.iter().map(TesterReport::error_rate).fold(0.0, f64::max);
            let secs = rows.iter().map(|r| r.max_seconds).fold(0.0, f64::max);
            let cert = rows
                .iter()
                .filter(|r| r.case == Case::Far)
                .map(|r| r.min_certified)
                .fold(f64::INFINITY, f64::min);
            outcome(
                8,
                worst <= 1.0 / 3.0 && secs < 10.0 && cert >= TESTER_EPS,
                vec![("worst_error_rate", worst), ("max_trial_seconds", secs), ("min_certified_distance", cert)],
            )
        }
        9 => {
            let r = law_sweep(seed, 100, 7)?;
            outcome(
                9,
                r.max_asymmetry <= 1e-9 && r.min_triangle_slack >= -1e-9 && r.min_tv_slack >= -1e-9,
                vec![
                    ("max_asymmetry", r.max_asymmetry),
                    ("min_triangle_slack", r.min_triangle_slack),
                    ("min_tv_slack", r.min_tv_slack),
                ],
            )
        }
        10 => {
            let r = probe_sweep(seed, 10_000, 1000)?;
            let mono = r.rows.windows(2).all(|w| w[0].advantage <= w[1].advantage);
            let at = r.rows[r.reference_index];
            let bound = 0.1 + (at.ci_high - at.advantage);
            outcome(
                10,
                mono && at.advantage <= bound,
                vec![("advantage_at_s", at.advantage), ("bound", bound), ("nondecreasing", f64::from(u8::from(mono)))],
            )
        }
        _ => return Err(invalid(format!("criterion {id} outside 1..={CRITERIA}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_run() {
        let d = duality_sweep(1, 20, 6).unwrap();
        assert!(d.max_gap <= 1e-7 && d.min_lower_slack >= -1e-9 && d.min_upper_slack >= -1e-9);
        let e = embedding_sweep(5).unwrap();
        assert_eq!(e.cases, 15);
        assert_eq!((e.comparable_pairs, e.filler_mismatches), (0, 0));
        let l = law_sweep(2, 10, 5).unwrap();
        assert!(l.max_asymmetry <= 1e-9 && l.min_triangle_slack >= -1e-9);
        for row in contract_sweep(3, 10).unwrap() {
            assert!(row.min_slack >= -1e-9, "{row:?}");
            assert_eq!(row.monotone_failures, 0);
        }
        assert!(evaluate(11, 0).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(choose(4, 2), 6);
        assert_eq!(choose(10, 5), 252);
        assert_eq!(choose(3, 4), 0);
    }
}
