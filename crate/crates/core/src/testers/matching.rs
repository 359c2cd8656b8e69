use super::{check_eps, checked_samples, Learner, LearnerSpec, Mixture, Rule, SampleSource, Verdict};
use crate::error::{Error, Result};
use crate::oracle::{min_w_to_monotone_pairhist, MinWMode};
use crate::poset::Poset;
use crate::prob::{Rng, SampleHistogram};

/// Bottom-mass estimate uses `⌈MASS_SAMPLES_CONST/ε′²⌉` draws.
pub const MASS_SAMPLES_CONST: f64 = 32.0;

/// Decision from a histogram of mixed samples and a bottom-mass estimate.
pub fn matching_decide(
    pairs: &[(usize, usize)],
    h: &SampleHistogram,
    w_bottom: f64,
    eps: f64,
    learner: &dyn Learner,
) -> Result<Verdict> {
    check_eps(eps)?;
    if !(0.0..=1.0).contains(&w_bottom) {
        return Err(Error::InvalidParameter(format!("bottom mass {w_bottom} outside [0, 1]")));
    }
    let c = h.counts();
    if let Some(&(b, t)) = pairs.iter().find(|&&(b, t)| b >= c.len() || t >= c.len()) {
        return Err(Error::InvalidParameter(format!("pair ({b}, {t}) outside histogram of length {}", c.len())));
    }
    let bottom: Vec<u64> = pairs.iter().map(|&(b, _)| c[b]).collect();
    let top: Vec<u64> = pairs.iter().map(|&(_, t)| c[t]).collect();
    let g = learner.pair_histogram(&bottom, &top)?.scale_keys(w_bottom, 1.0 - w_bottom)?;
    let (w, _) = min_w_to_monotone_pairhist(&g, MinWMode::Midpoint)?;
    let eps_prime = eps / 14.0;
    Ok(Verdict::new(
        w,
        3.0 * eps_prime,
        Rule::AtMost,
        h.total(),
        vec![("eps_prime", eps_prime), ("w_bottom", w_bottom)],
    ))
}

/// Monotonicity tester on a perfect matching; samples are mixed half and
/// half with the uniform distribution.
pub fn matching_monotonicity_test<S: SampleSource + ?Sized>(
    g: &Poset,
    src: &S,
    eps: f64,
    learner: &LearnerSpec,
    rng: &mut Rng,
) -> Result<Verdict> {
    check_eps(eps)?;
    let pairs = g.perfect_matching_pairs()?;
    let n = g.n();
    if src.domain() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: src.domain(),
        });
    }
    let eps_prime = eps / 14.0;
    let mix = Mixture(src);
    let s = learner.budget(n, eps_prime)?;
    let h = mix.histogram(s, rng)?;
    let m = checked_samples(MASS_SAMPLES_CONST / (eps_prime * eps_prime))?;
    let hm = mix.histogram(m, rng)?;
    let w_bottom = pairs.iter().map(|&(b, _)| hm.counts()[b]).sum::<u64>() as f64 / m as f64;
    let mut v = matching_decide(pairs, &h, w_bottom, eps, learner.learner())?;
    v.samples = s + m;
    v.details.push(("mass_samples", m as f64));
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_dtv_to_monotone;
    use crate::poset::{is_monotone, make_matching};
    use crate::prob::Distribution;
    use crate::testers::{Decision, DistSource, PluginLearner};
    use proptest::prelude::*;
    use super::Rng;

    fn rate(g: &Poset, p: &Distribution, want: Decision) -> f64 {
        let src = DistSource(p.clone());
        (0..100)
            .filter(|&k| {
                let v = matching_monotonicity_test(g, &src, 0.2, &LearnerSpec::default(), &mut Rng::new(k, 7)).unwrap();
                v.decision == want
            })
            .count() as f64
            / 100.0
    }

    /// Bottoms carry `(1+δ)/(2k)`, tops `(1−δ)/(2k)`.
    fn violated(k: usize, delta: f64) -> Distribution {
        let mut w = vec![(1.0 + delta) / (2 * k) as f64; 2 * k];
        w[k..].fill((1.0 - delta) / (2 * k) as f64);
        Distribution::new(w).unwrap()
    }

    #[test]
    fn monotone_accepted() {
        let g = make_matching(25).unwrap();
        let mut w: Vec<f64> = (0..50).map(|i| 1.0 + (i % 25) as f64 / 25.0).collect();
        for i in 0..25 {
            w[25 + i] += 0.3;
        }
        let p = Distribution::normalized(w).unwrap();
        assert!(is_monotone(&g, p.probs()).unwrap());
        assert!(rate(&g, &p, Decision::Accept) >= 0.9);
    }

    #[test]
    fn violated_rejected() {
        let g = make_matching(25).unwrap();
        let p = violated(25, 0.4);
        assert!(exact_dtv_to_monotone(&g, p.probs()).unwrap() >= 0.2 - 1e-9);
        assert!(rate(&g, &p, Decision::Reject) >= 0.9);
    }

    #[test]
    fn midpoint_statistic_by_hand() {
        // pairs (0,2), (1,3); frequencies bottom (3/4, 1/4), top (1/2, 1/2)
        let h = SampleHistogram::from_counts(vec![3, 1, 2, 2]);
        let v = matching_decide(&[(0, 2), (1, 3)], &h, 0.5, 0.7, &PluginLearner).unwrap();
        assert!((v.stat - 0.125).abs() < 1e-15);
        assert!((v.threshold - 0.15).abs() < 1e-15);
        assert!(v.is_accept());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = make_matching(2).unwrap();
        let src = DistSource(Distribution::uniform(3));
        let spec = LearnerSpec::default();
        assert!(matching_monotonicity_test(&g, &src, 0.2, &spec, &mut Rng::new(0, 0)).is_err());
        let line = crate::poset::make_line(4).unwrap();
        let src = DistSource(Distribution::uniform(4));
        assert!(matching_monotonicity_test(&line, &src, 0.2, &spec, &mut Rng::new(0, 0)).is_err());
    }

    proptest! {
        #[test]
        fn mixing_keeps_monotone(w in proptest::collection::vec((0.01f64..1.0, 0.0f64..1.0), 1..8)) {
            let k = w.len();
            let mut raw = vec![0.0; 2 * k];
            for (i, &(b, extra)) in w.iter().enumerate() {
                raw[i] = b;
                raw[k + i] = b + extra;
            }
            let p = Distribution::normalized(raw).unwrap();
            let g = make_matching(k).unwrap();
            let mixed: Vec<f64> = p.probs().iter().map(|x| x / 2.0 + 1.0 / (4 * k) as f64).collect();
            prop_assert!(is_monotone(&g, &mixed).unwrap());
        }

        #[test]
        fn diagnostics_reproduce_decision(seed in any::<u64>(), delta in 0.0f64..0.9) {
            let g = make_matching(6).unwrap();
            let src = DistSource(violated(6, delta));
            let v = matching_monotonicity_test(&g, &src, 0.5, &LearnerSpec::with_multiplier(2.0), &mut Rng::new(seed, 0)).unwrap();
            prop_assert_eq!(v.decision, v.recomputed());
        }
    }
}
