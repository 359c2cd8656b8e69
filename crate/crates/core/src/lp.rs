//! Dense two-phase simplex with Bland's pivoting rule.
//!
//! Minimises `cᵀx` subject to row constraints and `x ≥ 0`. Sized for the
//! small LPs used by the oracles (a few hundred rows and columns).

use crate::error::{Error, Result};

/// Feasibility and pivot tolerance.
pub const LP_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<(usize, f64)>,
    cmp: Cmp,
    rhs: f64,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    n_vars: usize,
    objective: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub objective: f64,
    pub x: Vec<f64>,
}

impl LinearProgram {
    /// Program over `n_vars` nonnegative variables with zero objective.
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_cost(&mut self, var: usize, c: f64) {
        self.objective[var] = c;
    }

    /// Adds `Σ a_j x_j (cmp) rhs`; repeated indices are summed.
    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) {
        debug_assert!(coeffs.iter().all(|&(j, _)| j < self.n_vars));
        self.rows.push(Row { coeffs, cmp, rhs });
    }

    pub fn solve(&self) -> Result<LpResult> {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    m: usize,
    n_struct: usize,
    n_art_start: usize,
    width: usize,
    a: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.rows.len();
        let n_struct = lp.n_vars;
        // Normalise to rhs ≥ 0 so the slack/artificial basis is feasible.
        let rows: Vec<(Vec<(usize, f64)>, Cmp, f64)> = lp
            .rows
            .iter()
            .map(|r| {
                if r.rhs < 0.0 {
                    let cmp = match r.cmp {
                        Cmp::Le => Cmp::Ge,
                        Cmp::Ge => Cmp::Le,
                        Cmp::Eq => Cmp::Eq,
                    };
                    (r.coeffs.iter().map(|&(j, c)| (j, -c)).collect(), cmp, -r.rhs)
                } else {
                    (r.coeffs.clone(), r.cmp, r.rhs)
                }
            })
            .collect();
        let n_slack = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Cmp::Le).count();
        let n_art_start = n_struct + n_slack;
        let width = n_art_start + n_art + 1;
        let mut a = vec![0.0; m * width];
        let mut basis = vec![0; m];
        let (mut slack, mut art) = (n_struct, n_art_start);
        for (i, (coeffs, cmp, rhs)) in rows.iter().enumerate() {
            let row = &mut a[i * width..(i + 1) * width];
            for &(j, c) in coeffs {
                row[j] += c;
            }
            row[width - 1] = *rhs;
            match cmp {
                Cmp::Le => {
                    row[slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Cmp::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Tableau {
            m,
            n_struct,
            n_art_start,
            width,
            a,
            basis,
        }
    }

    fn rhs(&self, i: usize) -> f64 {
        self.a[i * self.width + self.width - 1]
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [f64]) {
        let w = self.width;
        let inv = 1.0 / self.a[r * w + c];
        for x in &mut self.a[r * w..(r + 1) * w] {
            *x *= inv;
        }
        let pivot_row: Vec<f64> = self.a[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * w + c];
            if f != 0.0 {
                for (x, p) in self.a[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
                self.a[i * w + c] = 0.0;
            }
        }
        let f = cost[c];
        if f != 0.0 {
            for (x, p) in cost.iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
            cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on reduced-cost row `cost` over columns `< limit`.
    fn optimise(&mut self, cost: &mut [f64], limit: usize) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(c) = (0..limit).find(|&j| cost[j] < -COST_TOL) else {
                return Ok(());
            };
            let w = self.width;
            // Harris two-pass ratio test: the bound allows a small primal slack,
            // then the largest pivot within the bound is taken.
            let mut bound = f64::INFINITY;
            for i in 0..self.m {
                let aic = self.a[i * w + c];
                if aic > LP_TOL {
                    bound = bound.min((self.rhs(i).max(0.0) + LP_TOL) / aic);
                }
            }
            if bound == f64::INFINITY {
                return Err(Error::LpUnbounded);
            }
            let mut best: Option<usize> = None;
            for i in 0..self.m {
                let aic = self.a[i * w + c];
                if aic > LP_TOL && self.rhs(i).max(0.0) / aic <= bound {
                    best = match best {
                        Some(bi) if self.a[bi * w + c] > aic || (self.a[bi * w + c] == aic && self.basis[bi] < self.basis[i]) => Some(bi),
                        _ => Some(i),
                    };
                }
            }
            let Some(r) = best else {
                return Err(Error::LpUnbounded);
            };
            self.pivot(r, c, cost);
        }
        Err(Error::LpIterationLimit)
    }

    fn solve(mut self, objective: &[f64]) -> Result<LpResult> {
        let w = self.width;
        let scale = 1.0
            + (0..self.m)
                .map(|i| self.rhs(i).abs())
                .fold(0.0f64, f64::max);
        // Phase 1: minimise the sum of artificials.
        let mut cost = vec![0.0; w];
        for j in self.n_art_start..w - 1 {
            cost[j] = 1.0;
        }
        for i in 0..self.m {
            if self.basis[i] >= self.n_art_start {
                for j in 0..w {
                    cost[j] -= self.a[i * w + j];
                }
            }
        }
        self.optimise(&mut cost, w - 1)?;
        if -cost[w - 1] > LP_TOL * scale {
            return Err(Error::LpInfeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.m {
            if self.basis[i] >= self.n_art_start {
                let col = (0..self.n_art_start)
                    .filter(|&j| self.a[i * w + j].abs() > LP_TOL)
                    .max_by(|&j, &k| self.a[i * w + j].abs().total_cmp(&self.a[i * w + k].abs()));
                match col {
                    Some(c) => {
                        let mut dummy = vec![0.0; w];
                        self.pivot(i, c, &mut dummy);
                        i += 1;
                    }
                    None => {
                        self.a.drain(i * w..(i + 1) * w);
                        self.basis.remove(i);
                        self.m -= 1;
                    }
                }
            } else {
                i += 1;
            }
        }
        // Phase 2 over structural and slack columns only.
        let mut cost = vec![0.0; w];
        cost[..self.n_struct].copy_from_slice(objective);
        for i in 0..self.m {
            let cb = if self.basis[i] < self.n_struct {
                objective[self.basis[i]]
            } else {
                0.0
            };
            if cb != 0.0 {
                for j in 0..w {
                    cost[j] -= cb * self.a[i * w + j];
                }
            }
        }
        self.optimise(&mut cost, self.n_art_start)?;
        let mut x = vec![0.0; self.n_struct];
        for i in 0..self.m {
            if self.basis[i] < self.n_struct {
                x[self.basis[i]] = self.rhs(i).max(0.0);
            }
        }
        let objective = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpResult { objective, x })
    }
}
