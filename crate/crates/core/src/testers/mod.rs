//! Sublinear testers for bigness and monotonicity.
//!
//! Testers draw samples through a [`SampleSource`] as count histograms, so a
//! budget of millions of draws costs `O(n)` per call.

mod all_matchings;
mod bigness;
mod bipartite;
mod matching;
mod uniform_subset;

use std::fmt;
use std::sync::Arc;

pub use all_matchings::{all_matchings_gap, all_matchings_gap_enumerated, all_matchings_test, ENUM_MAX_VERTICES};
pub use bigness::{bigness_decide, bigness_test};
pub use bipartite::bipartite_bounded_degree_test;
pub use matching::{matching_decide, matching_monotonicity_test, MASS_SAMPLES_CONST};
pub use uniform_subset::{uniform_subset_budgets, uniform_subset_test};

use crate::error::{Error, Result};
use crate::prob::{binomial, multinomial_histogram, Distribution, PairHistogram, Rng, SampleHistogram};
use crate::reductions::Reduction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `stat` is compared with `threshold`; both comparisons are inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Accept iff `stat ≤ threshold`.
    AtMost,
    /// Accept iff `stat ≥ threshold`.
    AtLeast,
}

impl Rule {
    pub fn decide(self, stat: f64, threshold: f64) -> Decision {
        let ok = match self {
            Rule::AtMost => stat <= threshold,
            Rule::AtLeast => stat >= threshold,
        };
        if ok {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub decision: Decision,
    pub stat: f64,
    pub threshold: f64,
    pub rule: Rule,
    /// Total draws from the sample source.
    pub samples: u64,
    pub details: Vec<(&'static str, f64)>,
}

impl Verdict {
    pub fn new(stat: f64, threshold: f64, rule: Rule, samples: u64, details: Vec<(&'static str, f64)>) -> Self {
        Verdict {
            decision: rule.decide(stat, threshold),
            stat,
            threshold,
            rule,
            samples,
            details,
        }
    }

    /// The decision implied by the recorded statistic.
    pub fn recomputed(&self) -> Decision {
        self.rule.decide(self.stat, self.threshold)
    }

    pub fn is_accept(&self) -> bool {
        self.decision == Decision::Accept
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|d| d.0 == key).map(|d| d.1)
    }
}

/// Turns sample histograms into estimates.
pub trait Learner: Send + Sync + fmt::Debug {
    /// Estimate of the sampled distribution.
    fn distribution(&self, h: &SampleHistogram) -> Result<Vec<f64>>;

    /// Pair histogram of the side-normalised vectors, keyed
    /// `(bottom_i, top_i)` for the `i`-th matched pair.
    fn pair_histogram(&self, bottom: &[u64], top: &[u64]) -> Result<PairHistogram>;
}

/// Empirical frequencies.
#[derive(Clone, Copy, Debug, Default)]
pub struct PluginLearner;

fn frequencies(c: &[u64]) -> Vec<f64> {
    let t: u64 = c.iter().sum();
    if t == 0 {
        return vec![0.0; c.len()];
    }
    c.iter().map(|&x| x as f64 / t as f64).collect()
}

impl Learner for PluginLearner {
    fn distribution(&self, h: &SampleHistogram) -> Result<Vec<f64>> {
        Ok(frequencies(h.counts()))
    }

    fn pair_histogram(&self, bottom: &[u64], top: &[u64]) -> Result<PairHistogram> {
        crate::prob::pair_histogram(&frequencies(bottom), &frequencies(top))
    }
}

#[derive(Clone, Debug)]
pub enum LearnerKind {
    EmpiricalPlugin,
    External(Arc<dyn Learner>),
}

#[derive(Clone, Debug)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    /// Budget multiplier; `None` means `20·ln n`.
    pub multiplier: Option<f64>,
}

impl Default for LearnerSpec {
    fn default() -> Self {
        LearnerSpec {
            kind: LearnerKind::EmpiricalPlugin,
            multiplier: None,
        }
    }
}

/// Largest sample count a tester will request.
pub const MAX_SAMPLES: u64 = 1 << 50;

impl LearnerSpec {
    pub fn with_multiplier(multiplier: f64) -> Self {
        LearnerSpec {
            multiplier: Some(multiplier),
            ..Default::default()
        }
    }

    pub fn learner(&self) -> &dyn Learner {
        match &self.kind {
            LearnerKind::EmpiricalPlugin => &PluginLearner,
            LearnerKind::External(l) => l.as_ref(),
        }
    }

    /// `⌈mult·n / (ε′² ln n)⌉`, with `ln n` floored at 1.
    pub fn budget(&self, n: usize, eps_prime: f64) -> Result<u64> {
        let ln = (n as f64).ln().max(1.0);
        let mult = self.multiplier.unwrap_or(20.0 * ln);
        if !(mult > 0.0) || !mult.is_finite() {
            return Err(Error::InvalidParameter(format!("budget multiplier {mult} must be positive")));
        }
        checked_samples(mult * n as f64 / (eps_prime * eps_prime * ln))
    }
}

pub(crate) fn checked_samples(x: f64) -> Result<u64> {
    let s = x.ceil();
    if !(s >= 1.0) || s > MAX_SAMPLES as f64 {
        return Err(Error::InvalidParameter(format!(
            "sample budget {x} outside 1..={MAX_SAMPLES}"
        )));
    }
    Ok(s as u64)
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1]")))
    }
}

/// Sample access to an unknown distribution.
pub trait SampleSource: Sync {
    fn domain(&self) -> usize;

    /// Histogram of `s` i.i.d. draws.
    fn histogram(&self, s: u64, rng: &mut Rng) -> Result<SampleHistogram>;
}

/// Draws from an explicit distribution.
#[derive(Clone, Debug)]
pub struct DistSource(pub Distribution);

impl SampleSource for DistSource {
    fn domain(&self) -> usize {
        self.0.len()
    }

    fn histogram(&self, s: u64, rng: &mut Rng) -> Result<SampleHistogram> {
        Ok(multinomial_histogram(self.0.probs(), s, rng))
    }
}

/// Each draw comes from the inner source or from the uniform distribution,
/// with probability 1/2 each.
pub struct Mixture<'a, S: SampleSource + ?Sized>(pub &'a S);

impl<S: SampleSource + ?Sized> SampleSource for Mixture<'_, S> {
    fn domain(&self) -> usize {
        self.0.domain()
    }

    fn histogram(&self, s: u64, rng: &mut Rng) -> Result<SampleHistogram> {
        let n = self.domain();
        let k = binomial(s, 0.5, rng);
        let mut h = self.0.histogram(k, rng)?;
        h.merge(&multinomial_histogram(&vec![1.0 / n as f64; n], s - k, rng))?;
        Ok(h)
    }
}

/// Draws from the source of a reduction, lifted to its target.
pub struct Lifted<'a, S: SampleSource + ?Sized> {
    pub inner: &'a S,
    pub reduction: &'a Reduction,
}

impl<S: SampleSource + ?Sized> SampleSource for Lifted<'_, S> {
    fn domain(&self) -> usize {
        self.reduction.target().n()
    }

    fn histogram(&self, s: u64, rng: &mut Rng) -> Result<SampleHistogram> {
        let src = self.inner.histogram(s, rng)?;
        if src.len() != self.reduction.source().n() {
            return Err(Error::LengthMismatch {
                expected: self.reduction.source().n(),
                got: src.len(),
            });
        }
        let mut out = SampleHistogram::zeros(self.domain());
        for (w, &c) in src.counts().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let choices = self.reduction.lift_choices(w);
            let split = multinomial_histogram(&vec![1.0 / choices.len() as f64; choices.len()], c, rng);
            for (&t, &k) in choices.iter().zip(split.counts()) {
                out.add(t, k);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::bipartite_to_matching;
    use crate::Poset;

    #[test]
    fn rules_are_inclusive() {
        assert_eq!(Rule::AtMost.decide(0.1, 0.1), Decision::Accept);
        assert_eq!(Rule::AtLeast.decide(0.1, 0.1), Decision::Accept);
        assert_eq!(Rule::AtMost.decide(0.2, 0.1), Decision::Reject);
        assert_eq!(Rule::AtLeast.decide(0.0, 0.1), Decision::Reject);
    }

    #[test]
    fn default_budget() {
        let spec = LearnerSpec::default();
        let n = 100usize;
        assert_eq!(spec.budget(n, 0.1).unwrap(), (20.0 * n as f64 / 0.01f64).ceil() as u64);
        assert!(spec.budget(n, 0.0).is_err());
        assert!(LearnerSpec::with_multiplier(-1.0).budget(n, 0.1).is_err());
    }

    #[test]
    fn mixture_and_lift_preserve_totals() {
        let p = DistSource(Distribution::point_mass(4, 0));
        let mut rng = Rng::new(5, 0);
        let h = Mixture(&p).histogram(10_000, &mut rng).unwrap();
        assert_eq!(h.total(), 10_000);
        let f = h.counts()[0] as f64 / 1e4;
        assert!((f - 0.625).abs() < 0.03, "{f}");

        let g = Poset::bipartite(3, vec![(0, 1), (0, 2)], vec![0]).unwrap();
        let red = bipartite_to_matching(&g, 2).unwrap();
        let src = DistSource(Distribution::new(vec![0.5, 0.25, 0.25]).unwrap());
        let lifted = Lifted {
            inner: &src,
            reduction: &red,
        };
        let h = lifted.histogram(1000, &mut rng).unwrap();
        assert_eq!(h.total(), 1000);
        assert_eq!(h.len(), red.target().n());
    }
}
