use crate::error::{Error, Result};
use crate::lowerbound::priors::opt_value;

pub const NU: f64 = 0.5;
/// Smallest admissible `ρ = √(λ/(1+ν))`.
pub const RHO_MIN: f64 = 1.5;

/// Parameters of the hard bigness instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LbParameters {
    pub n: usize,
    pub eps: f64,
    pub l: usize,
    pub nu: f64,
    pub lambda: f64,
    pub rho: f64,
    /// Poisson sample size `⌊Ln/(2eλ)⌋`.
    pub s: u64,
    /// Optimum of the moment program at `(ν, λ, L)`.
    pub d: f64,
}

pub fn sample_size(n: usize, l: usize, lambda: f64) -> u64 {
    (l as f64 * n as f64 / (2.0 * std::f64::consts::E * lambda)).floor() as u64
}

/// `ν = 1/2`, `λ = (1+ν)·ρ²` with `ρ = 4(L−2)/ln(1/(27ε)) − 1`.
pub fn assign_parameters(n: usize, eps: f64, l: usize) -> Result<LbParameters> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(eps > 0.0 && eps < 1.0 / 27.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1/27)")));
    }
    let nu = NU;
    let rho = 4.0 * (l as f64 - 2.0) / (1.0 / (27.0 * eps)).ln() - 1.0;
    if !(rho >= RHO_MIN) {
        return Err(Error::Infeasible(format!("rho = {rho} is below {RHO_MIN}")));
    }
    let lambda = (1.0 + nu) * rho * rho;
    let s = sample_size(n, l, lambda);
    if s == 0 {
        return Err(Error::Infeasible(format!("sample size is zero for n = {n}")));
    }
    let d = opt_value(nu, lambda, l)?;
    if d < 2.0 * eps {
        return Err(Error::Infeasible(format!("d = {d} is below 2·eps = {}", 2.0 * eps)));
    }
    Ok(LbParameters {
        n,
        eps,
        l,
        nu,
        lambda,
        rho,
        s,
        d,
    })
}

/// The `ε` at which `λ` comes out as `lambda` for the given `L`.
pub fn eps_for_lambda(lambda: f64, l: usize) -> f64 {
    let rho = (lambda / (1.0 + NU)).sqrt();
    let log = 4.0 * (l as f64 - 2.0) / (rho + 1.0);
    (-log).exp() / 27.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_setting() {
        let eps = (-8.0f64 / 3.0).exp() / 27.0;
        assert!((eps - 0.002573).abs() < 1e-6);
        assert!((eps_for_lambda(6.0, 4) - eps).abs() < 1e-15);
        let p = assign_parameters(10_000, eps, 4).unwrap();
        assert!((p.lambda - 6.0).abs() < 1e-9);
        assert!((p.rho - 2.0).abs() < 1e-9);
        assert!((p.d - 1.0 / 54.0).abs() < 1e-9);
        assert_eq!(p.s, (4.0e4 / (2.0 * std::f64::consts::E * p.lambda)).floor() as u64);
        assert_eq!(p.s, 1226);
    }

    #[test]
    fn guard_reports_rho() {
        match assign_parameters(1000, 1e-4, 3) {
            Err(Error::Infeasible(m)) => assert!(m.contains("rho")),
            other => panic!("{other:?}"),
        }
        assert!(assign_parameters(1000, 0.0, 4).is_err());
        assert!(assign_parameters(1000, 0.5, 4).is_err());
        assert!(assign_parameters(0, 0.002, 4).is_err());
    }

    proptest! {
        #[test]
        fn emitted_tuples_have_d_at_least_two_eps(n in 100usize..100_000, eps in 1e-9f64..0.037, l in 2usize..12) {
            if let Ok(p) = assign_parameters(n, eps, l) {
                prop_assert!(p.d >= 2.0 * p.eps);
                prop_assert!(p.rho >= RHO_MIN);
                prop_assert_eq!(p.s, sample_size(n, l, p.lambda));
            }
        }
    }
}
