use super::{check_eps, checked_samples, Rule, SampleSource, Verdict};
use crate::error::{Error, Result};
use crate::poset::{Poset, PosetKind};
use crate::prob::Rng;

/// `(s₁, s₂) = (⌈2n^{2/3}/ε⌉, ⌈8n^{2/3}⌉)`.
pub fn uniform_subset_budgets(n: usize, eps: f64) -> Result<(u64, u64)> {
    check_eps(eps)?;
    let c = (n as f64).powf(2.0 / 3.0);
    Ok((checked_samples(2.0 * c / eps)?, checked_samples(8.0 * c)?))
}

/// Tester for distributions promised uniform on an unknown subset of size
/// `r_size`. The promise is not checked.
pub fn uniform_subset_test<S: SampleSource + ?Sized>(
    g: &Poset,
    r_size: usize,
    src: &S,
    eps: f64,
    rng: &mut Rng,
) -> Result<Verdict> {
    if !matches!(g.kind(), PosetKind::Bipartite | PosetKind::Matching) {
        return Err(Error::WrongKind {
            expected: "bipartite",
            found: g.kind().name(),
        });
    }
    let n = g.n();
    if src.domain() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: src.domain(),
        });
    }
    if r_size == 0 || r_size > n {
        return Err(Error::InvalidParameter(format!("support size {r_size} outside 1..={n}")));
    }
    let (s1, s2) = uniform_subset_budgets(n, eps)?;
    let h1 = src.histogram(s1, rng)?;
    let out = g.out_neighbors();
    let mut in_t = vec![false; n];
    for &b in g.bottoms() {
        if h1.counts()[b] > 0 {
            for &t in &out[b] {
                in_t[t] = true;
            }
        }
    }
    let t_size = in_t.iter().filter(|&&x| x).count();
    let early = eps * s1 as f64 / 2.0;
    if t_size as f64 <= early {
        return Ok(Verdict::new(
            t_size as f64,
            early,
            Rule::AtMost,
            s1,
            vec![("t_size", t_size as f64), ("stage", 1.0)],
        ));
    }
    let h2 = src.histogram(s2, rng)?;
    let y: u64 = h2.counts().iter().zip(&in_t).filter(|e| *e.1).map(|e| *e.0).sum();
    let eps_prime = eps * s1 as f64 / (2.0 * t_size as f64);
    let threshold = s2 as f64 * (1.0 - eps_prime / 2.0) * t_size as f64 / r_size as f64;
    Ok(Verdict::new(
        y as f64,
        threshold,
        Rule::AtLeast,
        s1 + s2,
        vec![("t_size", t_size as f64), ("stage", 2.0), ("eps_prime", eps_prime)],
    ))
}
