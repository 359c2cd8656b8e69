use super::{matching_monotonicity_test, LearnerSpec, Lifted, SampleSource, Verdict};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::prob::Rng;
use crate::reductions::bipartite_to_matching;

/// Lifts samples onto the copy matching of `g` and runs the matching tester
/// with `ε/(2Δ)`.
pub fn bipartite_bounded_degree_test<S: SampleSource + ?Sized>(
    g: &Poset,
    delta: usize,
    src: &S,
    eps: f64,
    learner: &LearnerSpec,
    rng: &mut Rng,
) -> Result<Verdict> {
    super::check_eps(eps)?;
    if src.domain() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: src.domain(),
        });
    }
    let red = bipartite_to_matching(g, delta)?;
    let lifted = Lifted {
        inner: src,
        reduction: &red,
    };
    let mut v = matching_monotonicity_test(red.target(), &lifted, eps / (2.0 * delta as f64), learner, rng)?;
    v.details.push(("delta", delta as f64));
    Ok(v)
}
