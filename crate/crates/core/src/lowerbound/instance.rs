use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution as _;

use crate::error::{Error, Result};
use crate::lowerbound::priors::{Measure, MomentPriors};
use crate::prob::{poissonized_histogram, Rng, SampleHistogram};

/// Draws i.i.d. atoms from a discrete measure.
#[derive(Clone, Debug)]
pub struct PriorSampler {
    atoms: Vec<f64>,
    alias: WeightedAliasIndex<f64>,
}

impl PriorSampler {
    pub fn new(m: &Measure) -> Result<Self> {
        let alias = WeightedAliasIndex::new(m.iter().map(|e| e.1).collect())
            .map_err(|e| Error::InvalidDistribution(format!("prior: {e}")))?;
        Ok(PriorSampler {
            atoms: m.iter().map(|e| e.0).collect(),
            alias,
        })
    }

    /// Index of the drawn atom in the measure.
    pub fn index(&self, rng: &mut Rng) -> usize {
        self.alias.sample(rng)
    }

    pub fn draw(&self, rng: &mut Rng) -> f64 {
        self.atoms[self.index(rng)]
    }

    pub fn draw_vec(&self, n: usize, rng: &mut Rng) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// `|ΣV_i/n − 1| ≤ ν`.
pub fn mean_clause(v: &[f64], nu: f64) -> bool {
    (v.iter().sum::<f64>() / v.len() as f64 - 1.0).abs() <= nu
}

/// `Σh_i > s(1−ν)/2`.
pub fn count_clause(total: u64, s: f64, nu: f64) -> bool {
    total as f64 > s * (1.0 - nu) / 2.0
}

/// `r ≥ βnd/2`.
pub fn zero_clause(r: usize, beta: f64, n: usize, d: f64) -> bool {
    r as f64 >= beta * n as f64 * d / 2.0
}

/// One draw of the paired hard instances.
#[derive(Clone, Debug)]
pub struct LbInstance {
    pub n: usize,
    pub s: f64,
    pub beta: f64,
    pub d: f64,
    pub nu: f64,
    pub lambda: f64,
    /// `(V_1, …, V_n)/n`.
    pub p: Vec<f64>,
    pub p_prime: Vec<f64>,
    /// Number of zero entries of `p′`.
    pub r: usize,
    pub p_norm: Vec<f64>,
    /// All zeros when `p′` has no mass.
    pub p_prime_norm: Vec<f64>,
    pub h: SampleHistogram,
    pub h_prime: SampleHistogram,
    pub e: bool,
    pub e_prime: bool,
}

fn normalised(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter().map(|x| x / s).collect()
    } else {
        vec![0.0; v.len()]
    }
}

impl LbInstance {
    /// Bigness threshold `1/(βn)`.
    pub fn threshold(&self) -> f64 {
        1.0 / (self.beta * self.n as f64)
    }

    /// Largest entry of the normalised `p`.
    pub fn p_max(&self) -> f64 {
        self.p_norm.iter().copied().fold(0.0, f64::max)
    }
}

pub fn generate_instance(priors: &MomentPriors, n: usize, s: f64, rng: &mut Rng) -> Result<LbInstance> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("sample size {s} must be finite and nonnegative")));
    }
    let v = PriorSampler::new(&priors.v)?.draw_vec(n, rng);
    let vp = PriorSampler::new(&priors.v_prime)?.draw_vec(n, rng);
    let nf = n as f64;
    let p: Vec<f64> = v.iter().map(|x| x / nf).collect();
    let p_prime: Vec<f64> = vp.iter().map(|x| x / nf).collect();
    let h = poissonized_histogram(&p, s, rng)?;
    let h_prime = poissonized_histogram(&p_prime, s, rng)?;
    let r = vp.iter().filter(|&&x| x == 0.0).count();
    let e = mean_clause(&v, priors.nu) && count_clause(h.total(), s, priors.nu);
    let e_prime = mean_clause(&vp, priors.nu)
        && count_clause(h_prime.total(), s, priors.nu)
        && zero_clause(r, priors.beta, n, priors.d);
    Ok(LbInstance {
        n,
        s,
        beta: priors.beta,
        d: priors.d,
        nu: priors.nu,
        lambda: priors.lambda,
        p_norm: normalised(&p),
        p_prime_norm: normalised(&p_prime),
        p,
        p_prime,
        r,
        h,
        h_prime,
        e,
        e_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowerbound::priors::build_priors;
    use crate::oracle::dist_to_bigness;
    use proptest::prelude::*;
    use super::Rng;

    fn point_prior() -> MomentPriors {
        MomentPriors {
            v: vec![(1.0, 1.0)],
            v_prime: vec![(1.0, 1.0)],
            beta: 1.5,
            nu: 0.5,
            lambda: 6.0,
            l: 2,
            d: 0.0,
        }
    }

    #[test]
    fn point_prior_is_uniform() {
        let mut rng = Rng::new(1, 0);
        let inst = generate_instance(&point_prior(), 50, 100.0, &mut rng).unwrap();
        assert!(inst.p.iter().all(|&x| x == 1.0 / 50.0));
        assert_eq!(inst.r, 0);
        assert_eq!(inst.e, inst.h.total() as f64 > 25.0);
    }

    #[test]
    fn zero_samples_never_satisfy_count_clause() {
        let mut rng = Rng::new(1, 0);
        let inst = generate_instance(&point_prior(), 10, 0.0, &mut rng).unwrap();
        assert_eq!(inst.h.total(), 0);
        assert!(!inst.e);
    }

    #[test]
    fn deterministic() {
        let pr = build_priors(0.5, 6.0, 4, 200).unwrap();
        let a = generate_instance(&pr, 300, 60.0, &mut Rng::new(9, 2)).unwrap();
        let b = generate_instance(&pr, 300, 60.0, &mut Rng::new(9, 2)).unwrap();
        assert_eq!(a.h, b.h);
        assert_eq!(a.p_prime, b.p_prime);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn flagged_instances_have_bigness_structure(seed in any::<u64>()) {
            let pr = build_priors(0.5, 6.0, 4, 200).unwrap();
            let n = 2000;
            let inst = generate_instance(&pr, n, 200.0, &mut Rng::new(seed, 0)).unwrap();
            let t = inst.threshold();
            if inst.e {
                prop_assert!(inst.p_norm.iter().all(|&x| x >= t - 1e-12));
                prop_assert!(inst.p_max() <= inst.lambda / (n as f64 * (1.0 - inst.nu)));
            }
            if inst.e_prime {
                prop_assert!(dist_to_bigness(&inst.p_prime_norm, t).unwrap() >= inst.d / 2.0);
            }
        }
    }
}
