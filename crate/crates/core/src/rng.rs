//! Seedable random streams with per-sample substreams.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Deterministic random source.
///
/// [`RngStream::for_sample`] keys a stream on `(seed, index)` using the ChaCha
/// stream id, so a sample's draws never depend on which worker runs it or in
/// what order. [`RngStream::fork`] splits off an independent child stream so a
/// pipeline stage can consume a variable number of draws without shifting the
/// draws of later stages.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn for_sample(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    pub fn fork(&mut self) -> Self {
        Self::new(self.rng.next_u64())
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Always consumes exactly one uniform draw.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform over `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(mut s: RngStream) -> Vec<u64> {
        (0..8).map(|_| s.index(1 << 30) as u64).collect()
    }

    #[test]
    fn same_key_same_sequence() {
        assert_eq!(draws(RngStream::for_sample(7, 3)), draws(RngStream::for_sample(7, 3)));
    }

    #[test]
    fn distinct_indices_diverge() {
        assert_ne!(draws(RngStream::for_sample(7, 3)), draws(RngStream::for_sample(7, 4)));
        assert_ne!(draws(RngStream::for_sample(7, 3)), draws(RngStream::for_sample(8, 3)));
    }

    #[test]
    fn fork_is_reproducible() {
        let mut a = RngStream::new(1);
        let mut b = RngStream::new(1);
        assert_eq!(draws(a.fork()), draws(b.fork()));
        assert_eq!(draws(a), draws(b));
    }

    #[test]
    fn bernoulli_extremes() {
        let mut s = RngStream::new(5);
        assert!((0..1000).all(|_| s.bernoulli(1.0)));
        assert!((0..1000).all(|_| !s.bernoulli(0.0)));
    }
}
