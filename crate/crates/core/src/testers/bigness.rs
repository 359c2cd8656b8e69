use super::{check_eps, Learner, LearnerSpec, Rule, SampleSource, Verdict};
use crate::error::Result;
use crate::oracle::dist_to_bigness;
use crate::prob::{Rng, SampleHistogram};

/// Decision from an already drawn histogram.
pub fn bigness_decide(h: &SampleHistogram, t: f64, eps: f64, learner: &dyn Learner) -> Result<Verdict> {
    check_eps(eps)?;
    let q = learner.distribution(h)?;
    let stat = dist_to_bigness(&q, t)?;
    let eps_prime = eps / 3.0;
    Ok(Verdict::new(stat, eps_prime, Rule::AtMost, h.total(), vec![("eps_prime", eps_prime), ("t", t)]))
}

/// Accepts iff the learned distribution is within `ε/3` of `T`-bigness.
pub fn bigness_test<S: SampleSource + ?Sized>(
    src: &S,
    t: f64,
    eps: f64,
    learner: &LearnerSpec,
    rng: &mut Rng,
) -> Result<Verdict> {
    check_eps(eps)?;
    let n = src.domain();
    dist_to_bigness(&vec![0.0; n], t)?;
    let s = learner.budget(n, eps / 3.0)?;
    let h = src.histogram(s, rng)?;
    bigness_decide(&h, t, eps, learner.learner())
}
