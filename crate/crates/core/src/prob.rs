//! Distributions, seeded sampling, histograms and pair histograms.

use std::cmp::Ordering;

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Binomial, Distribution as _, Poisson};

use crate::error::{check_len, Error, Result};

/// Tolerance on `Σ p = 1` accepted by [`Distribution::new`].
pub const SUM_TOL: f64 = 1e-9;

/// Seeded random source. Identical `(seed, stream)` pairs replay identical
/// sequences.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Independent child stream `k` under the same master seed.
    pub fn fork(&self, k: u64) -> Rng {
        Rng::new(self.seed, splitmix64(self.stream ^ splitmix64(k.wrapping_add(1))))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// A probability vector over `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty domain".into()));
        }
        if let Some(i) = probs.iter().position(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {} (must be finite and nonnegative)",
                probs[i]
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(Distribution { probs })
    }

    /// Rescales nonnegative weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}; cannot normalize"
            )));
        }
        Distribution::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs n >= 1");
        Distribution {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut probs = vec![0.0; n];
        probs[i] = 1.0;
        Distribution { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn mass(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.probs[i]).sum()
    }

    /// Walker alias sampler over this distribution.
    pub fn sampler(&self) -> Sampler {
        Sampler::new(self.clone())
    }
}

/// Draws i.i.d. samples from a fixed distribution.
#[derive(Clone, Debug)]
pub struct Sampler {
    dist: Distribution,
    alias: WeightedAliasIndex<f64>,
}

impl Sampler {
    pub fn new(dist: Distribution) -> Self {
        let alias = WeightedAliasIndex::new(dist.probs.clone())
            .expect("a validated distribution has positive total weight");
        Sampler { dist, alias }
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    pub fn draw(&self, rng: &mut Rng) -> usize {
        self.alias.sample(rng)
    }
}

/// `s` i.i.d. draws from `p`.
pub fn sample(p: &Distribution, s: usize, rng: &mut Rng) -> Vec<usize> {
    if s == 0 {
        return Vec::new();
    }
    let sampler = p.sampler();
    (0..s).map(|_| sampler.draw(rng)).collect()
}

/// Per-element counts of observed samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl SampleHistogram {
    pub fn zeros(n: usize) -> Self {
        SampleHistogram {
            counts: vec![0; n],
            total: 0,
        }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        SampleHistogram { counts, total }
    }

    pub fn from_samples(n: usize, samples: &[usize]) -> Self {
        let mut counts = vec![0u64; n];
        for &x in samples {
            counts[x] += 1;
        }
        SampleHistogram::from_counts(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn add(&mut self, i: usize, c: u64) {
        self.counts[i] += c;
        self.total += c;
    }

    pub fn merge(&mut self, other: &SampleHistogram) -> Result<()> {
        check_len(self.len(), other.len())?;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        Ok(())
    }

    /// Empirical frequencies `h_i / Σ h`; all zeros for an empty histogram.
    pub fn empirical(&self) -> Vec<f64> {
        if self.total == 0 {
            return vec![0.0; self.counts.len()];
        }
        let t = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }

    /// Number of elements observed exactly `k` times.
    pub fn fingerprint(&self, k: u64) -> u64 {
        self.counts.iter().filter(|&&c| c == k).count() as u64
    }
}

/// Counts of `s` i.i.d. draws from `p`, drawn exactly through conditional
/// binomials in O(n) time regardless of `s`.
pub fn multinomial_histogram(p: &[f64], s: u64, rng: &mut Rng) -> SampleHistogram {
    let mut counts = vec![0u64; p.len()];
    let mut left = s;
    let mut rest: f64 = p.iter().sum();
    let Some(last) = p.iter().rposition(|&x| x > 0.0) else {
        return SampleHistogram::from_counts(counts);
    };
    for (i, &pi) in p.iter().enumerate().take(last + 1) {
        if left == 0 {
            break;
        }
        if i == last {
            counts[i] = left;
            break;
        }
        let q = if rest > 0.0 { (pi / rest).clamp(0.0, 1.0) } else { 0.0 };
        let c = binomial(left, q, rng);
        counts[i] = c;
        left -= c;
        rest -= pi;
    }
    SampleHistogram::from_counts(counts)
}

/// One Binomial(n, q) variate; degenerate `q` is handled without sampling.
pub fn binomial(n: u64, q: f64, rng: &mut Rng) -> u64 {
    if n == 0 || q <= 0.0 {
        0
    } else if q >= 1.0 {
        n
    } else {
        Binomial::new(n, q).expect("q in (0,1)").sample(rng)
    }
}

/// One Poisson(rate) variate; rate zero yields zero.
pub fn poisson(rate: f64, rng: &mut Rng) -> Result<u64> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::InvalidParameter(format!("Poisson rate {rate}")));
    }
    if rate == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(rate)
        .map_err(|e| Error::InvalidParameter(format!("Poisson rate {rate}: {e}")))?;
    let x: f64 = d.sample(rng);
    Ok(x as u64)
}

/// Independent `h_i ~ Poisson(s·p_i)` counts. `p` need not sum to one.
pub fn poissonized_histogram(p: &[f64], s: f64, rng: &mut Rng) -> Result<SampleHistogram> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::InvalidParameter(format!("negative rate s = {s}")));
    }
    if let Some(i) = p.iter().position(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidParameter(format!("p[{i}] = {}", p[i])));
    }
    let counts = p
        .iter()
        .map(|&pi| poisson(s * pi, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleHistogram::from_counts(counts))
}

/// Uniform draw from `0..k`.
pub fn uniform_index(k: usize, rng: &mut Rng) -> usize {
    rng.random_range(0..k)
}

/// Finite-support map `(x, y) -> count`, sorted by key, without `(0, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairHistogram {
    support: Vec<((f64, f64), f64)>,
}

fn key_cmp(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

impl PairHistogram {
    pub fn empty() -> Self {
        PairHistogram {
            support: Vec::new(),
        }
    }

    /// Builds a histogram, merging equal keys (by bit pattern) and dropping
    /// `(0, 0)` and nonpositive counts.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((f64, f64), f64)>,
    {
        let mut v: Vec<((f64, f64), f64)> = Vec::new();
        for ((x, y), c) in entries {
            if !(x.is_finite() && y.is_finite() && c.is_finite()) || x < 0.0 || y < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "pair histogram entry (({x}, {y}), {c})"
                )));
            }
            if c < 0.0 {
                return Err(Error::InvalidParameter(format!("negative count {c}")));
            }
            // -0.0 and 0.0 must key identically
            let (x, y) = (x + 0.0, y + 0.0);
            if (x == 0.0 && y == 0.0) || c == 0.0 {
                continue;
            }
            v.push(((x, y), c));
        }
        v.sort_by(|a, b| key_cmp(&a.0, &b.0));
        let mut support: Vec<((f64, f64), f64)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match support.last_mut() {
                Some((lk, lc)) if key_cmp(lk, &k) == Ordering::Equal => *lc += c,
                _ => support.push((k, c)),
            }
        }
        Ok(PairHistogram { support })
    }

    pub fn support(&self) -> &[((f64, f64), f64)] {
        &self.support
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn count(&self, key: (f64, f64)) -> f64 {
        self.support
            .binary_search_by(|(k, _)| key_cmp(k, &key))
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    /// Total count `Σ c`.
    pub fn total(&self) -> f64 {
        self.support.iter().map(|(_, c)| c).sum()
    }

    /// Total probability mass `Σ c·(x + y)`.
    pub fn mass(&self) -> f64 {
        self.support.iter().map(|((x, y), c)| c * (x + y)).sum()
    }

    /// Rounds every coordinate to the nearest multiple of `step`.
    pub fn quantized(&self, step: f64) -> PairHistogram {
        PairHistogram::from_entries(
            self.support
                .iter()
                .map(|&((x, y), c)| ((quantize(x, step), quantize(y, step)), c)),
        )
        .expect("quantizing valid keys keeps them valid")
    }

    /// Maps each key `(x, y)` to `(a·x, b·y)`.
    pub fn scale_keys(&self, a: f64, b: f64) -> Result<PairHistogram> {
        PairHistogram::from_entries(self.support.iter().map(|&((x, y), c)| ((a * x, b * y), c)))
    }
}

/// Nearest multiple of `step`.
pub fn quantize(x: f64, step: f64) -> f64 {
    if step > 0.0 {
        (x / step).round() * step
    } else {
        x
    }
}

/// Counts domain elements by their `(p1(a), p2(a))` value pair.
pub fn pair_histogram(p1: &[f64], p2: &[f64]) -> Result<PairHistogram> {
    check_len(p1.len(), p2.len())?;
    PairHistogram::from_entries(p1.iter().zip(p2).map(|(&x, &y)| ((x, y), 1.0)))
}

pub fn tv_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_len(p.len(), q.len())?;
    Ok(0.5 * l1(p.probs(), q.probs()))
}

pub(crate) fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Fraction of `s` i.i.d. draws from `p` that land in `set`.
pub fn mass_of_set(p: &Distribution, set: &[usize], s: u64, rng: &mut Rng) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidParameter("mass_of_set needs s >= 1".into()));
    }
    let mut member = vec![false; p.len()];
    for &i in set {
        if i >= p.len() {
            return Err(Error::InvalidParameter(format!(
                "set element {i} outside domain of size {}",
                p.len()
            )));
        }
        member[i] = true;
    }
    let w: f64 = member
        .iter()
        .zip(p.probs())
        .filter(|(m, _)| **m)
        .map(|(_, x)| x)
        .sum();
    let hits = if member.iter().all(|&m| m) {
        s
    } else {
        binomial(s, w, rng)
    };
    Ok(hits as f64 / s as f64)
}
