//! One function per verb, each returning the CSV it produced.

use std::path::{Path, PathBuf};

use poset_dist::formats::{write_distribution, write_histogram_csv, write_poset};
use poset_dist::lowerbound::{
    assign_parameters, build_priors, eps_for_lambda, generate_instance, indistinguishability_probe,
    solve_lp2_discretized, LbParameters, MomentPriors, DEFAULT_GRID,
};
use poset_dist::oracle::{
    closest_monotone_on_matching, exact_dtv_to_monotone, func_dist_to_monotone, max_violation_matching, LP_CAP,
};
use poset_dist::poset::make_hypercube;
use poset_dist::prob::tv_distance;
use poset_dist::reductions::{
    bigness_to_matching, bipartite_to_matching, general_to_bipartite, hypercube_normalizer, matching_to_hypercube,
};
use poset_dist::testers::{
    all_matchings_test, bigness_test, bipartite_bounded_degree_test, matching_monotonicity_test,
    uniform_subset_test, DistSource, LearnerSpec, Verdict,
};
use poset_dist::{Distribution, Poset, PosetKind, Rng};

use crate::config::{ExperimentConfig, ReduceKind, TesterAlg, Verb};
use crate::criteria::{evaluate, PROBE_MULTIPLES};
use crate::csv::{Cell, Table, Word};
use crate::error::{invalid, write, Result};
use crate::inputs::{load_dist, load_poset};

pub const DEFAULT_LB_N: usize = 10_000;
pub const DEFAULT_L: usize = 4;
pub const DEFAULT_LAMBDA: f64 = 6.0;
pub const DEFAULT_PROBE_TRIALS: usize = 200;

fn need<'a, T>(v: &'a Option<T>, key: &str, verb: Verb) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| invalid(format!("`{}` needs `{key}`", verb.name())))
}

/// Runs `cfg`, writes the CSV and its `.run` sidecar when `out` is set,
/// and returns the CSV.
pub fn execute(cfg: &ExperimentConfig) -> Result<String> {
    let csv = run(cfg)?;
    if let Some(out) = &cfg.out {
        write(out, &csv)?;
        write(&sidecar_path(out), &cfg.to_text())?;
    }
    Ok(csv)
}

/// `<out>.run`, holding the resolved config of the run that wrote `out`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".run");
    PathBuf::from(s)
}

pub fn run(cfg: &ExperimentConfig) -> Result<String> {
    let table = match cfg.verb {
        Verb::Oracle => oracle(cfg)?,
        Verb::Test => test(cfg)?,
        Verb::Reduce => reduce(cfg)?,
        Verb::LbSolve => lb_solve(cfg)?,
        Verb::LbGen => lb_gen(cfg)?,
        Verb::LbProbe => lb_probe(cfg)?,
        Verb::Criterion => criterion(cfg)?,
    };
    Ok(table.render())
}

fn oracle(cfg: &ExperimentConfig) -> Result<Table> {
    let g = load_poset(need(&cfg.poset, "poset", cfg.verb)?)?;
    let p = load_dist(need(&cfg.dist, "dist", cfg.verb)?)?;
    let n = g.n();
    let w = max_violation_matching(&g, p.probs())?.total;
    if n <= LP_CAP {
        let dtv = exact_dtv_to_monotone(&g, p.probs())?;
        let (lp, sol) = func_dist_to_monotone(&g, p.probs())?;
        let mut t = Table::new(&["n", "dtv", "w", "lp", "certified"]);
        t.push(vec![n.into(), dtv.into(), w.into(), lp.into(), sol.certified.into()])?;
        return Ok(t);
    }
    if g.kind() == PosetKind::Matching {
        let dtv = tv_distance(&p, &closest_monotone_on_matching(&g, &p)?)?;
        let mut t = Table::new(&["n", "dtv", "w"]);
        t.push(vec![n.into(), dtv.into(), w.into()])?;
        return Ok(t);
    }
    let mut t = Table::new(&["n", "dtv_lower", "dtv_upper"]);
    t.push(vec![n.into(), (w / 2.0).into(), w.min(1.0).into()])?;
    Ok(t)
}

fn one_test(cfg: &ExperimentConfig, alg: TesterAlg, g: Option<&Poset>, p: &Distribution, rng: &mut Rng) -> Result<Verdict> {
    let eps = *need(&cfg.eps, "eps", cfg.verb)?;
    let spec = cfg.multiplier.map_or_else(LearnerSpec::default, LearnerSpec::with_multiplier);
    let src = DistSource(p.clone());
    let graph = || g.ok_or_else(|| invalid(format!("tester `{}` needs `poset`", alg.name())));
    Ok(match alg {
        TesterAlg::Bigness => {
            let t = cfg.t.unwrap_or(1.0 / p.len() as f64);
            bigness_test(&src, t, eps, &spec, rng)?
        }
        TesterAlg::Matching => matching_monotonicity_test(graph()?, &src, eps, &spec, rng)?,
        TesterAlg::Bipartite => {
            let g = graph()?;
            let delta = cfg.delta.unwrap_or_else(|| g.max_degree().max(1));
            bipartite_bounded_degree_test(g, delta, &src, eps, &spec, rng)?
        }
        TesterAlg::UniformSubset => {
            let r = cfg
                .support
                .unwrap_or_else(|| p.probs().iter().filter(|&&x| x > 0.0).count());
            uniform_subset_test(graph()?, r, &src, eps, rng)?
        }
        TesterAlg::AllMatchings => all_matchings_test(graph()?, &src, eps, rng)?,
    })
}

fn test(cfg: &ExperimentConfig) -> Result<Table> {
    let alg = *need(&cfg.alg, "alg", cfg.verb)?;
    let p = load_dist(need(&cfg.dist, "dist", cfg.verb)?)?;
    let g = cfg.poset.as_deref().map(load_poset).transpose()?;
    if let Some(g) = &g {
        if g.n() != p.len() {
            return Err(invalid(format!("poset has {} vertices, distribution {}", g.n(), p.len())));
        }
    }
    let trials = cfg.trials.unwrap_or(1);
    let base = Rng::new(cfg.seed, 0);
    let verdicts = poset_dist::par::par_map(trials, |k| one_test(cfg, alg, g.as_ref(), &p, &mut base.fork(k as u64)));
    let mut t = Table::new(&["trial", "decision", "stat", "threshold", "samples"]);
    for (k, v) in verdicts.into_iter().enumerate() {
        let v = v?;
        let word = if v.is_accept() { Word::Accept } else { Word::Reject };
        t.push(vec![k.into(), word.into(), v.stat.into(), v.threshold.into(), v.samples.into()])?;
    }
    Ok(t)
}

fn write_outputs(cfg: &ExperimentConfig, g: &Poset, q: &Distribution) -> Result<()> {
    if let Some(path) = &cfg.out_poset {
        write(path, &write_poset(g))?;
    }
    if let Some(path) = &cfg.out_dist {
        write(path, &write_distribution(q))?;
    }
    Ok(())
}

fn reduce(cfg: &ExperimentConfig) -> Result<Table> {
    let kind = *need(&cfg.kind, "kind", cfg.verb)?;
    let p = load_dist(need(&cfg.dist, "dist", cfg.verb)?)?;
    let (g, q, factor) = match kind {
        ReduceKind::G2b | ReduceKind::B2m => {
            let src = load_poset(need(&cfg.poset, "poset", cfg.verb)?)?;
            let red = if kind == ReduceKind::G2b {
                general_to_bipartite(&src)?
            } else {
                bipartite_to_matching(&src, cfg.delta.unwrap_or_else(|| src.max_degree().max(1)))?
            };
            let q = red.map_distribution(&p)?;
            (red.target().clone(), q, red.contract().far_factor)
        }
        ReduceKind::Big2m => {
            let t = cfg.t.unwrap_or(1.0 / p.len() as f64);
            let (q, meta) = bigness_to_matching(&p, t)?;
            (meta.poset, q, meta.contract.far_factor)
        }
        ReduceKind::M2hyp => {
            let d = *need(&cfg.d, "d", cfg.verb)?;
            let ell = *need(&cfg.ell, "ell", cfg.verb)?;
            let pmax = cfg
                .pmax
                .unwrap_or_else(|| p.probs().iter().copied().fold(0.0, f64::max));
            let q = matching_to_hypercube(d, ell, &p, pmax)?;
            (make_hypercube(d)?, q, 1.0 / hypercube_normalizer(d, ell, pmax))
        }
    };
    write_outputs(cfg, &g, &q)?;
    let mut t = Table::new(&["source_n", "target_n", "far_factor"]);
    t.push(vec![p.len().into(), g.n().into(), factor.into()])?;
    Ok(t)
}

fn lb_solve(cfg: &ExperimentConfig) -> Result<Table> {
    let nu = cfg.nu.unwrap_or(0.5);
    let lambda = cfg.lambda.unwrap_or(DEFAULT_LAMBDA);
    let l = cfg.l.unwrap_or(DEFAULT_L);
    let grid = cfg.grid.unwrap_or(DEFAULT_GRID);
    let objective = solve_lp2_discretized(nu, lambda, l, grid)?.objective;
    let pr = build_priors(nu, lambda, l, grid)?;
    let mut t = Table::new(&["measure", "atom", "mass", "objective", "d", "beta"]);
    for (id, m) in [&pr.v, &pr.v_prime].into_iter().enumerate() {
        for &(x, mass) in m {
            t.push(vec![id.into(), x.into(), mass.into(), objective.into(), pr.d.into(), pr.beta.into()])?;
        }
    }
    Ok(t)
}

fn lb_setup(cfg: &ExperimentConfig) -> Result<(LbParameters, MomentPriors)> {
    let n = cfg.n.unwrap_or(DEFAULT_LB_N);
    let l = cfg.l.unwrap_or(DEFAULT_L);
    let eps = match (cfg.eps, cfg.lambda) {
        (Some(e), _) => e,
        (None, lambda) => eps_for_lambda(lambda.unwrap_or(DEFAULT_LAMBDA), l),
    };
    let params = assign_parameters(n, eps, l)?;
    let priors = build_priors(params.nu, params.lambda, l, cfg.grid.unwrap_or(DEFAULT_GRID))?;
    Ok((params, priors))
}

fn lb_gen(cfg: &ExperimentConfig) -> Result<Table> {
    let (params, priors) = lb_setup(cfg)?;
    let mut rng = Rng::new(cfg.seed, 0);
    let inst = generate_instance(&priors, params.n, params.s as f64, &mut rng)?;
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir).map_err(|source| crate::error::CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        write(&dir.join("p.dist"), &write_distribution(&Distribution::new(inst.p_norm.clone())?))?;
        write(&dir.join("p_prime.dist"), &write_distribution(&Distribution::new(inst.p_prime_norm.clone())?))?;
        write(&dir.join("h.csv"), &write_histogram_csv(&inst.h))?;
        write(&dir.join("h_prime.csv"), &write_histogram_csv(&inst.h_prime))?;
    }
    let mut t = Table::new(&["n", "s", "beta", "d", "r", "e", "e_prime"]);
    t.push(vec![
        inst.n.into(),
        inst.s.into(),
        inst.beta.into(),
        inst.d.into(),
        inst.r.into(),
        inst.e.into(),
        inst.e_prime.into(),
    ])?;
    Ok(t)
}

fn lb_probe(cfg: &ExperimentConfig) -> Result<Table> {
    let (params, priors) = lb_setup(cfg)?;
    let s_values = cfg.s_values.clone().unwrap_or_else(|| {
        PROBE_MULTIPLES
            .iter()
            .map(|m| (m * params.s as f64).floor())
            .collect()
    });
    let trials = cfg.trials.unwrap_or(DEFAULT_PROBE_TRIALS);
    let rows = indistinguishability_probe(&priors, params.n, &s_values, trials, &Rng::new(cfg.seed, 0))?;
    let mut t = Table::new(&["s", "advantage", "ci_low", "ci_high", "event_rate"]);
    for r in rows {
        t.push(vec![r.s.into(), r.advantage.into(), r.ci_low.into(), r.ci_high.into(), r.event_rate.into()])?;
    }
    Ok(t)
}

fn criterion(cfg: &ExperimentConfig) -> Result<Table> {
    let id = *need(&cfg.criterion, "criterion", cfg.verb)?;
    let o = evaluate(id, cfg.seed)?;
    let mut header = vec!["criterion".to_string(), "result".to_string()];
    header.extend(o.metrics.iter().map(|(k, _)| k.clone()));
    let mut row: Vec<Cell> = vec![u64::from(o.id).into(), Word::verdict(o.pass).into()];
    row.extend(o.metrics.iter().map(|&(_, v)| Cell::from(v)));
    let mut t = Table::new(&header);
    t.push(row)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csv::cells_well_formed;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::parse(text).unwrap()
    }

    #[test]
    fn oracle_on_a_line() {
        let out = run(&cfg("verb = oracle\nposet = line2\ndist = (0.75,0.25)")).unwrap();
        assert_eq!(out, "n,dtv,w,lp,certified\n2,0.25,0.5,0.5,1\n");
    }

    #[test]
    fn tests_are_seeded() {
        let text = "verb = test\nalg = matching\nposet = matching2\ndist = (0.1,0.2,0.3,0.4)\neps = 0.3\ntrials = 3\nseed = 4";
        let a = run(&cfg(text)).unwrap();
        assert_eq!(a, run(&cfg(text)).unwrap());
        assert!(cells_well_formed(&a));
        assert_eq!(a.lines().count(), 4);
        let missing = run(&cfg("verb = test\nalg = matching\ndist = (0.5,0.5)\neps = 0.3"));
        assert!(missing.is_err());
    }

    #[test]
    fn lb_solve_lists_both_measures() {
        let out = run(&cfg("verb = lb-solve\nlambda = 4\nL = 3\ngrid = 100")).unwrap();
        assert!(cells_well_formed(&out));
        assert!(out.lines().skip(1).any(|l| l.starts_with("0,")));
        assert!(out.lines().skip(1).any(|l| l.starts_with("1,")));
    }

    #[test]
    fn reduce_bigness() {
        let out = run(&cfg("verb = reduce\nkind = big2m\ndist = (0.5,0.5)\nt = 0.25")).unwrap();
        assert_eq!(out, "source_n,target_n,far_factor\n2,4,0.3333333333333333\n");
    }

    #[test]
    fn infeasible_lb_parameters() {
        let e = run(&cfg("verb = lb-gen\nn = 1000\neps = 0.0001\nL = 3")).unwrap_err();
        assert_eq!(e.exit_code(), crate::error::EXIT_INFEASIBLE);
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.run"));
    }
}
