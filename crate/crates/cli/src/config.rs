//! Flat `key = value` experiment configs with `#` comments.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Oracle,
    Test,
    Reduce,
    LbSolve,
    LbGen,
    LbProbe,
    Criterion,
}

impl Verb {
    pub const ALL: [Verb; 7] = [
        Verb::Oracle,
        Verb::Test,
        Verb::Reduce,
        Verb::LbSolve,
        Verb::LbGen,
        Verb::LbProbe,
        Verb::Criterion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Oracle => "oracle",
            Verb::Test => "test",
            Verb::Reduce => "reduce",
            Verb::LbSolve => "lb-solve",
            Verb::LbGen => "lb-gen",
            Verb::LbProbe => "lb-probe",
            Verb::Criterion => "criterion",
        }
    }

    pub fn parse(s: &str) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TesterAlg {
    Bigness,
    Matching,
    Bipartite,
    UniformSubset,
    AllMatchings,
}

impl TesterAlg {
    pub const ALL: [TesterAlg; 5] = [
        TesterAlg::Bigness,
        TesterAlg::Matching,
        TesterAlg::Bipartite,
        TesterAlg::UniformSubset,
        TesterAlg::AllMatchings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TesterAlg::Bigness => "bigness",
            TesterAlg::Matching => "matching",
            TesterAlg::Bipartite => "bipartite",
            TesterAlg::UniformSubset => "uniform-subset",
            TesterAlg::AllMatchings => "all-matchings",
        }
    }

    pub fn parse(s: &str) -> Option<TesterAlg> {
        TesterAlg::ALL.into_iter().find(|v| v.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceKind {
    G2b,
    B2m,
    Big2m,
    M2hyp,
}

impl ReduceKind {
    pub const ALL: [ReduceKind; 4] = [ReduceKind::G2b, ReduceKind::B2m, ReduceKind::Big2m, ReduceKind::M2hyp];

    pub fn name(self) -> &'static str {
        match self {
            ReduceKind::G2b => "g2b",
            ReduceKind::B2m => "b2m",
            ReduceKind::Big2m => "big2m",
            ReduceKind::M2hyp => "m2hyp",
        }
    }

    pub fn parse(s: &str) -> Option<ReduceKind> {
        ReduceKind::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// Every knob of a single run. Unset options take per-verb defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub verb: Verb,
    pub seed: u64,
    /// Poset file or builtin `lineN`, `matchingK`, `hypercubeD`.
    pub poset: Option<String>,
    /// Distribution file or inline `(p1,p2,...)`.
    pub dist: Option<String>,
    pub out: Option<PathBuf>,
    pub out_poset: Option<PathBuf>,
    pub out_dist: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub alg: Option<TesterAlg>,
    pub kind: Option<ReduceKind>,
    pub eps: Option<f64>,
    pub t: Option<f64>,
    pub delta: Option<usize>,
    pub d: Option<u32>,
    pub ell: Option<u32>,
    pub pmax: Option<f64>,
    pub nu: Option<f64>,
    pub lambda: Option<f64>,
    pub l: Option<usize>,
    pub n: Option<usize>,
    pub grid: Option<usize>,
    pub trials: Option<usize>,
    /// Learner budget multiplier.
    pub multiplier: Option<f64>,
    /// Promised support size for the uniform-subset tester.
    pub support: Option<usize>,
    pub s_values: Option<Vec<f64>>,
    pub criterion: Option<u32>,
}

impl ExperimentConfig {
    pub fn new(verb: Verb) -> Self {
        ExperimentConfig {
            verb,
            seed: 0,
            poset: None,
            dist: None,
            out: None,
            out_poset: None,
            out_dist: None,
            out_dir: None,
            alg: None,
            kind: None,
            eps: None,
            t: None,
            delta: None,
            d: None,
            ell: None,
            pmax: None,
            nu: None,
            lambda: None,
            l: None,
            n: None,
            grid: None,
            trials: None,
            multiplier: None,
            support: None,
            s_values: None,
            criterion: None,
        }
    }

    /// Parses config text; relative paths are kept as written.
    pub fn parse(text: &str) -> Result<Self> {
        let mut verb = None;
        let mut pending = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k.to_string()) {
                return Err(invalid(format!("line {}: key `{k}` repeated", i + 1)));
            }
            if k == "verb" {
                verb = Some(Verb::parse(v).ok_or_else(|| invalid(format!("unknown verb `{v}`")))?);
            } else {
                pending.push((i + 1, k.to_string(), v.to_string()));
            }
        }
        let mut cfg = ExperimentConfig::new(verb.ok_or_else(|| invalid("config has no `verb`"))?);
        for (line, k, v) in pending {
            cfg.set(&k, &v).map_err(|e| invalid(format!("line {line}: {e}")))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse::<T>().map_err(|_| invalid(format!("`{key}` value `{v}` is malformed")))
        }
        fn real(key: &str, v: &str) -> Result<f64> {
            let x: f64 = num(key, v)?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(invalid(format!("`{key}` must be finite")))
            }
        }
        match key {
            "seed" => self.seed = num(key, v)?,
            "poset" => self.poset = Some(v.to_string()),
            "dist" => self.dist = Some(v.to_string()),
            "out" => self.out = Some(v.into()),
            "out_poset" => self.out_poset = Some(v.into()),
            "out_dist" => self.out_dist = Some(v.into()),
            "out_dir" => self.out_dir = Some(v.into()),
            "alg" => self.alg = Some(TesterAlg::parse(v).ok_or_else(|| invalid(format!("unknown alg `{v}`")))?),
            "kind" => {
                self.kind = Some(ReduceKind::parse(v).ok_or_else(|| invalid(format!("unknown reduction `{v}`")))?)
            }
            "eps" => self.eps = Some(real(key, v)?),
            "t" => self.t = Some(real(key, v)?),
            "delta" => self.delta = Some(num(key, v)?),
            "d" => self.d = Some(num(key, v)?),
            "ell" => self.ell = Some(num(key, v)?),
            "pmax" => self.pmax = Some(real(key, v)?),
            "nu" => self.nu = Some(real(key, v)?),
            "lambda" => self.lambda = Some(real(key, v)?),
            "L" => self.l = Some(num(key, v)?),
            "n" => self.n = Some(num(key, v)?),
            "grid" => self.grid = Some(num(key, v)?),
            "trials" => self.trials = Some(num(key, v)?),
            "multiplier" => self.multiplier = Some(real(key, v)?),
            "support" => self.support = Some(num(key, v)?),
            "s_values" => {
                self.s_values = Some(
                    v.split(',')
                        .map(|x| real(key, x.trim()))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "criterion" => self.criterion = Some(num(key, v)?),
            "learner" => {
                if v != "empirical_plugin" {
                    return Err(invalid(format!("learner `{v}` is not available from a config")));
                }
            }
            _ => return Err(invalid(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Canonical text listing every set key; parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verb = {}", self.verb.name());
        let _ = writeln!(out, "seed = {}", self.seed);
        let mut kv = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(out, "{k} = {v}");
            }
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        kv("poset", self.poset.clone());
        kv("dist", self.dist.clone());
        kv("out", path(&self.out));
        kv("out_poset", path(&self.out_poset));
        kv("out_dist", path(&self.out_dist));
        kv("out_dir", path(&self.out_dir));
        kv("alg", self.alg.map(|a| a.name().to_string()));
        kv("kind", self.kind.map(|k| k.name().to_string()));
        kv("eps", self.eps.map(|x| x.to_string()));
        kv("t", self.t.map(|x| x.to_string()));
        kv("delta", self.delta.map(|x| x.to_string()));
        kv("d", self.d.map(|x| x.to_string()));
        kv("ell", self.ell.map(|x| x.to_string()));
        kv("pmax", self.pmax.map(|x| x.to_string()));
        kv("nu", self.nu.map(|x| x.to_string()));
        kv("lambda", self.lambda.map(|x| x.to_string()));
        kv("L", self.l.map(|x| x.to_string()));
        kv("n", self.n.map(|x| x.to_string()));
        kv("grid", self.grid.map(|x| x.to_string()));
        kv("trials", self.trials.map(|x| x.to_string()));
        kv("multiplier", self.multiplier.map(|x| x.to_string()));
        kv("support", self.support.map(|x| x.to_string()));
        kv(
            "s_values",
            self.s_values
                .as_ref()
                .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        );
        kv("criterion", self.criterion.map(|x| x.to_string()));
        out
    }

    /// Rebases relative input and output paths onto `dir`.
    pub fn rebase(&mut self, dir: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(x) = p {
                if x.is_relative() {
                    *x = dir.join(&*x);
                }
            }
        };
        fix(&mut self.out);
        fix(&mut self.out_poset);
        fix(&mut self.out_dist);
        fix(&mut self.out_dir);
        for s in [&mut self.poset, &mut self.dist].into_iter().flatten() {
            if crate::inputs::is_file_reference(s) && Path::new(s.as_str()).is_relative() {
                *s = dir.join(s.as_str()).display().to_string();
            }
        }
    }
}
