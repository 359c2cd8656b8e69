//! Moment-matched priors: the closed-form optimum, the discretised LP, and
//! the change of measure from the LP measures `X, X′` to `V, V′`.

use crate::error::{Error, Result};
use crate::lp::{Cmp, LinearProgram};

/// Atoms lighter than this are dropped after solving.
pub const PRUNE_MASS: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 400;

/// A discrete measure as `(atom, mass)` pairs.
pub type Measure = Vec<(f64, f64)>;

fn check_range(nu: f64, lambda: f64, l: usize) -> Result<()> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::InvalidParameter(format!("nu = {nu} must be positive")));
    }
    if !(lambda > 1.0 + nu) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} must exceed 1 + nu = {}",
            1.0 + nu
        )));
    }
    if l < 2 {
        return Err(Error::InvalidParameter(format!("L = {l} must be at least 2")));
    }
    Ok(())
}

/// `(1/√(1+ν) − 1/√λ)² · ((√ρ − 1)/(√ρ + 1))^{L−2}` with `ρ = λ/(1+ν)`.
pub fn opt_value(nu: f64, lambda: f64, l: usize) -> Result<f64> {
    check_range(nu, lambda, l)?;
    let a = 1.0 + nu;
    let r = (lambda / a).sqrt();
    let base = (1.0 / a.sqrt() - 1.0 / lambda.sqrt()).powi(2);
    Ok(base * ((r - 1.0) / (r + 1.0)).powi(l as i32 - 2))
}

/// Chebyshev extrema mapped onto `[a, b]`, ascending, endpoints exact.
pub fn chebyshev_grid(a: f64, b: f64, size: usize) -> Vec<f64> {
    if size == 1 {
        return vec![a];
    }
    let m = (size - 1) as f64;
    (0..size)
        .map(|k| {
            let c = (std::f64::consts::PI * k as f64 / m).cos();
            (a + (b - a) * (1.0 - c) / 2.0).clamp(a, b)
        })
        .collect()
}

/// `T_0(t), …, T_{deg}(t)`.
fn chebyshev_values(t: f64, deg: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(deg + 1);
    v.push(1.0);
    if deg >= 1 {
        v.push(t);
    }
    for j in 2..=deg {
        let next = 2.0 * t * v[j - 1] - v[j - 2];
        v.push(next);
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lp2Solution {
    /// `E[1/X] − E[1/X′]`.
    pub objective: f64,
    pub x: Measure,
    pub x_prime: Measure,
}

/// Maximises `E[1/X] − E[1/X′]` over measures on a Chebyshev grid in
/// `[1+ν, λ]` whose moments of order `1..L−1` agree.
pub fn solve_lp2_discretized(nu: f64, lambda: f64, l: usize, grid_size: usize) -> Result<Lp2Solution> {
    check_range(nu, lambda, l)?;
    if grid_size < 2 * l + 2 {
        return Err(Error::InvalidParameter(format!(
            "grid size {grid_size} must be at least 2L + 2 = {}",
            2 * l + 2
        )));
    }
    let (a, b) = (1.0 + nu, lambda);
    let grid = chebyshev_grid(a, b, grid_size);
    let basis: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| chebyshev_values((2.0 * x - a - b) / (b - a), l - 1))
        .collect();
    let n = grid.len();
    let mut lp = LinearProgram::new(2 * n);
    for (i, &x) in grid.iter().enumerate() {
        lp.set_cost(i, -1.0 / x);
        lp.set_cost(n + i, 1.0 / x);
    }
    lp.add_row((0..n).map(|i| (i, 1.0)).collect(), Cmp::Eq, 1.0);
    lp.add_row((0..n).map(|i| (n + i, 1.0)).collect(), Cmp::Eq, 1.0);
    for j in 1..l {
        let row = (0..n)
            .flat_map(|i| [(i, basis[i][j]), (n + i, -basis[i][j])])
            .collect();
        lp.add_row(row, Cmp::Eq, 0.0);
    }
    let r = lp.solve()?;
    let collect = |off: usize| -> Vec<(usize, f64)> {
        (0..n)
            .filter(|&i| r.x[off + i] > PRUNE_MASS)
            .map(|i| (i, r.x[off + i]))
            .collect()
    };
    let mut xs = collect(0);
    let mut ys = collect(n);
    normalise(&mut xs);
    normalise(&mut ys);
    polish(&mut xs, &mut ys, &basis, l);
    let x: Measure = xs.iter().map(|&(i, m)| (grid[i], m)).collect();
    let x_prime: Measure = ys.iter().map(|&(i, m)| (grid[i], m)).collect();
    let objective = inv_mean(&x) - inv_mean(&x_prime);
    Ok(Lp2Solution {
        objective,
        x,
        x_prime,
    })
}

fn normalise(v: &mut [(usize, f64)]) {
    let s: f64 = v.iter().map(|e| e.1).sum();
    if s > 0.0 {
        for e in v.iter_mut() {
            e.1 /= s;
        }
    }
}

/// Least-squares projection of the support masses back onto the equality
/// constraints; skipped if it would create a negative mass.
fn polish(xs: &mut [(usize, f64)], ys: &mut [(usize, f64)], basis: &[Vec<f64>], l: usize) {
    let cols = xs.len() + ys.len();
    let rows = l + 1;
    if cols == 0 {
        return;
    }
    for _ in 0..2 {
        // A (rows × cols) and residual r = b − A m
        let mut a = vec![0.0; rows * cols];
        for (c, &(i, _)) in xs.iter().enumerate() {
            a[c] = 1.0;
            for j in 1..l {
                a[(j + 1) * cols + c] = basis[i][j];
            }
        }
        for (k, &(i, _)) in ys.iter().enumerate() {
            let c = xs.len() + k;
            a[cols + c] = 1.0;
            for j in 1..l {
                a[(j + 1) * cols + c] = -basis[i][j];
            }
        }
        let m: Vec<f64> = xs.iter().chain(ys.iter()).map(|e| e.1).collect();
        let mut r = vec![0.0; rows];
        r[0] = 1.0;
        r[1] = 1.0;
        for (i, ri) in r.iter_mut().enumerate() {
            *ri -= (0..cols).map(|c| a[i * cols + c] * m[c]).sum::<f64>();
        }
        // minimum-norm correction δ = Aᵀ (A Aᵀ)⁻¹ r, with dependent rows removed
        let mut gram = vec![0.0; rows * rows];
        for i in 0..rows {
            for k in 0..rows {
                gram[i * rows + k] = (0..cols).map(|c| a[i * cols + c] * a[k * cols + c]).sum();
            }
        }
        let Some(y) = solve_spd(&gram, &r, rows) else {
            return;
        };
        let delta: Vec<f64> = (0..cols)
            .map(|c| (0..rows).map(|i| a[i * cols + c] * y[i]).sum())
            .collect();
        if m.iter().zip(&delta).any(|(mi, di)| mi + di < 0.0) {
            return;
        }
        for (c, d) in delta.iter().enumerate() {
            if c < xs.len() {
                xs[c].1 += d;
            } else {
                ys[c - xs.len()].1 += d;
            }
        }
    }
}

/// Gaussian elimination with partial pivoting; rows with a vanishing pivot
/// are treated as dependent and given a zero multiplier.
fn solve_spd(g: &[f64], r: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m: Vec<f64> = g.to_vec();
    let mut b: Vec<f64> = r.to_vec();
    let scale = (0..n).map(|i| m[i * n + i].abs()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut pivots = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let p = (row..n).max_by(|&i, &k| m[i * n + col].abs().total_cmp(&m[k * n + col].abs()))?;
        if m[p * n + col].abs() <= 1e-13 * scale {
            continue;
        }
        for k in 0..n {
            m.swap(row * n + k, p * n + k);
        }
        b.swap(row, p);
        for i in 0..n {
            if i != row {
                let f = m[i * n + col] / m[row * n + col];
                if f != 0.0 {
                    for k in 0..n {
                        m[i * n + k] -= f * m[row * n + k];
                    }
                    b[i] -= f * b[row];
                }
            }
        }
        pivots[row] = col;
        row += 1;
        if row == n {
            break;
        }
    }
    let mut y = vec![0.0; n];
    for (i, &col) in pivots.iter().enumerate() {
        if col != usize::MAX {
            y[col] = b[i] / m[i * n + col];
        }
    }
    Some(y)
}

fn inv_mean(m: &[(f64, f64)]) -> f64 {
    m.iter().map(|&(x, w)| w / x).sum()
}

/// Priors `V, V′` with matched moments, plus the parameters they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentPriors {
    pub v: Measure,
    /// Includes the atom at zero when it carries mass.
    pub v_prime: Measure,
    pub beta: f64,
    pub nu: f64,
    pub lambda: f64,
    pub l: usize,
    /// `(1/β)·Pr[V′ = 0]`.
    pub d: f64,
}

/// Maps `x ↦ x/β` with mass `m·β/x`, where `β = 1/E[1/X]`, and puts the
/// missing `V′` mass at zero.
pub fn priors_from_measures(nu: f64, lambda: f64, l: usize, x: &[(f64, f64)], x_prime: &[(f64, f64)]) -> Result<MomentPriors> {
    check_range(nu, lambda, l)?;
    let ex = inv_mean(x);
    if !(ex > 0.0) {
        return Err(Error::InvalidParameter("X has no mass".into()));
    }
    let beta = 1.0 / ex;
    let map = |m: &[(f64, f64)]| -> Measure { m.iter().map(|&(a, w)| (a / beta, w * beta / a)).collect() };
    let v = map(x);
    let mut v_prime = map(x_prime);
    let zero = 1.0 - beta * inv_mean(x_prime);
    if zero < -1e-9 {
        return Err(Error::InvalidParameter(format!(
            "V′ would carry negative mass {zero} at zero (E[1/X′] > E[1/X])"
        )));
    }
    let zero = zero.max(0.0);
    if zero > 0.0 {
        v_prime.insert(0, (0.0, zero));
    }
    Ok(MomentPriors {
        v,
        v_prime,
        beta,
        nu,
        lambda,
        l,
        d: zero / beta,
    })
}

/// Solves the discretised LP and transforms its optimum into priors.
pub fn build_priors(nu: f64, lambda: f64, l: usize, grid_size: usize) -> Result<MomentPriors> {
    let sol = solve_lp2_discretized(nu, lambda, l, grid_size)?;
    priors_from_measures(nu, lambda, l, &sol.x, &sol.x_prime)
}

/// Residuals of the prior invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorReport {
    /// `max_j |E[V^j] − E[V′^j]| / max(1, E[V^j])` over `j = 1..L`.
    pub moment_rel_err: f64,
    /// `max(|E[V] − 1|, |E[V′] − 1|)`.
    pub mean_err: f64,
    /// `max(|ΣV − 1|, |ΣV′ − 1|)`.
    pub mass_err: f64,
    /// Every nonzero atom lies in `[(1+ν)/β, λ/β]`.
    pub support_ok: bool,
    /// `β ∈ [1+ν, min(λ, 1/d)]`.
    pub beta_ok: bool,
}

impl MomentPriors {
    pub fn moment(measure: &[(f64, f64)], j: i32) -> f64 {
        measure.iter().map(|&(a, w)| w * a.powi(j)).sum()
    }

    /// `Pr[V′ = 0]`.
    pub fn zero_mass(&self) -> f64 {
        self.v_prime
            .iter()
            .filter(|e| e.0 == 0.0)
            .map(|e| e.1)
            .sum()
    }

    pub fn report(&self) -> PriorReport {
        let mut moment_rel_err = 0.0f64;
        for j in 1..=self.l as i32 {
            let a = Self::moment(&self.v, j);
            let b = Self::moment(&self.v_prime, j);
            moment_rel_err = moment_rel_err.max((a - b).abs() / a.abs().max(1.0));
        }
        let mean_err = (Self::moment(&self.v, 1) - 1.0)
            .abs()
            .max((Self::moment(&self.v_prime, 1) - 1.0).abs());
        let mass = |m: &[(f64, f64)]| m.iter().map(|e| e.1).sum::<f64>();
        let mass_err = (mass(&self.v) - 1.0).abs().max((mass(&self.v_prime) - 1.0).abs());
        let (lo, hi) = ((1.0 + self.nu) / self.beta, self.lambda / self.beta);
        let inside = |&(a, _): &(f64, f64)| a >= lo && a <= hi;
        let support_ok = self.v.iter().all(inside)
            && self.v_prime.iter().all(|e| e.0 == 0.0 || inside(e));
        let cap = if self.d > 0.0 { self.lambda.min(1.0 / self.d) } else { self.lambda };
        let beta_ok = self.beta >= 1.0 + self.nu - 1e-12 && self.beta <= cap + 1e-9;
        PriorReport {
            moment_rel_err,
            mean_err,
            mass_err,
            support_ok,
            beta_ok,
        }
    }
}
