use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use poset_dist_cli::commands::execute;
use poset_dist_cli::config::{ExperimentConfig, Verb};
use poset_dist_cli::error::{read, EXIT_OK};
use poset_dist_cli::suite::run_suite;
use poset_dist_cli::{CliError, Result};

#[derive(Parser)]
#[command(name = "poset-dist", version, about = "Distance oracles, testers and lower-bound instances for distributions over posets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; a `.run` file with the resolved config is written beside it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact distance to monotone of a distribution on a poset.
    Oracle {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        dist: String,
        #[command(flatten)]
        common: Common,
    },
    /// Runs a tester.
    Test {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        dist: String,
        #[arg(long)]
        poset: Option<String>,
        #[arg(long)]
        eps: f64,
        #[arg(long, alias = "T")]
        t: Option<f64>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        support: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        multiplier: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Applies a reduction and writes the target instance.
    Reduce {
        #[arg(long)]
        kind: String,
        /// Source poset.
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        dist: String,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, alias = "T")]
        t: Option<f64>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        pmax: Option<f64>,
        #[arg(long)]
        out_poset: Option<PathBuf>,
        #[arg(long)]
        out_dist: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Lower-bound priors and instances.
    Lb {
        #[command(subcommand)]
        cmd: LbCmd,
    },
    /// Evaluates one acceptance criterion.
    Criterion {
        #[arg(long)]
        id: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Runs a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Runs every config listed in a manifest.
    Suite {
        manifest: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct LbArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum LbCmd {
    /// Solves the moment LP and prints both priors.
    Solve {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Draws one instance pair.
    Gen {
        #[command(flatten)]
        lb: LbArgs,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimates the distinguishing advantage over a sweep of sample sizes.
    Probe {
        #[command(flatten)]
        lb: LbArgs,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        s_values: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
}

fn base(verb: Verb, common: Common) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(verb);
    cfg.seed = common.seed;
    cfg.out = common.out;
    cfg
}

fn set<T: ToString>(cfg: &mut ExperimentConfig, key: &str, v: Option<T>) -> Result<()> {
    match v {
        Some(v) => cfg.set(key, &v.to_string()),
        None => Ok(()),
    }
}

fn lb_args(cfg: &mut ExperimentConfig, lb: LbArgs) -> Result<()> {
    set(cfg, "n", lb.n)?;
    set(cfg, "eps", lb.eps)?;
    set(cfg, "lambda", lb.lambda)?;
    set(cfg, "L", lb.l)?;
    set(cfg, "grid", lb.grid)
}

fn config(cmd: Cmd) -> Result<ExperimentConfig> {
    Ok(match cmd {
        Cmd::Oracle { poset, dist, common } => {
            let mut c = base(Verb::Oracle, common);
            c.poset = Some(poset);
            c.dist = Some(dist);
            c
        }
        Cmd::Test {
            alg,
            dist,
            poset,
            eps,
            t,
            delta,
            support,
            trials,
            multiplier,
            common,
        } => {
            let mut c = base(Verb::Test, common);
            c.set("alg", &alg)?;
            c.dist = Some(dist);
            c.poset = poset;
            set(&mut c, "eps", Some(eps))?;
            set(&mut c, "t", t)?;
            c.delta = delta;
            c.support = support;
            c.trials = trials;
            set(&mut c, "multiplier", multiplier)?;
            c
        }
        Cmd::Reduce {
            kind,
            from,
            dist,
            delta,
            t,
            d,
            ell,
            pmax,
            out_poset,
            out_dist,
            common,
        } => {
            let mut c = base(Verb::Reduce, common);
            c.set("kind", &kind)?;
            c.poset = from;
            c.dist = Some(dist);
            c.delta = delta;
            set(&mut c, "t", t)?;
            c.d = d;
            c.ell = ell;
            set(&mut c, "pmax", pmax)?;
            c.out_poset = out_poset;
            c.out_dist = out_dist;
            c
        }
        Cmd::Lb { cmd } => match cmd {
            LbCmd::Solve {
                nu,
                lambda,
                l,
                grid,
                common,
            } => {
                let mut c = base(Verb::LbSolve, common);
                set(&mut c, "nu", nu)?;
                set(&mut c, "lambda", lambda)?;
                c.l = l;
                c.grid = grid;
                c
            }
            LbCmd::Gen { lb, out_dir, common } => {
                let mut c = base(Verb::LbGen, common);
                lb_args(&mut c, lb)?;
                c.out_dir = out_dir;
                c
            }
            LbCmd::Probe {
                lb,
                trials,
                s_values,
                common,
            } => {
                let mut c = base(Verb::LbProbe, common);
                lb_args(&mut c, lb)?;
                c.trials = trials;
                if let Some(s) = s_values {
                    let text = s.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
                    c.set("s_values", &text)?;
                }
                c
            }
        },
        Cmd::Criterion { id, common } => {
            let mut c = base(Verb::Criterion, common);
            c.criterion = Some(id);
            c
        }
        Cmd::Run { config, seed } => {
            let mut c = ExperimentConfig::parse(&read(&config)?)?;
            c.rebase(config.parent().unwrap_or(std::path::Path::new(".")));
            if let Some(s) = seed {
                c.seed = s;
            }
            c
        }
        Cmd::Suite { .. } => unreachable!("suite has no single config"),
    })
}

fn main_inner(cli: Cli) -> Result<()> {
    if let Cmd::Suite { manifest, common } = cli.cmd {
        let (csv, _) = run_suite(&manifest, common.seed)?;
        match common.out {
            Some(out) => std::fs::write(&out, &csv).map_err(|source| CliError::Io {
                path: out.display().to_string(),
                source,
            })?,
            None => print!("{csv}"),
        }
        return Ok(());
    }
    let cfg = config(cli.cmd)?;
    let csv = execute(&cfg)?;
    if cfg.out.is_none() {
        print!("{csv}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
