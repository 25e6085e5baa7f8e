use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Seedable deterministic generator; the sole source of randomness for every
/// sampler in the crate.
///
/// The generator is SplitMix64 (Steele, Lea & Flood), seeded with the raw
/// 64-bit seed as its initial state. A unit draw takes the top 53 bits of one
/// 64-bit output, so `unit() = (x >> 11) * 2^-53` lies in `[0, 1)`. Both
/// choices are fixed so traces can be reproduced in other languages.
///
/// A `RandomSource` is not meant to be shared between threads; use
/// [`RandomSource::split`] to derive independent streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
    inner: SplitMix64,
}

const UNIT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    /// The seed this generator was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// One unit draw in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIT_SCALE
    }

    /// Uniform index in `0..n` from one unit draw, as `floor(U * n)`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index() needs a nonempty range");
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    /// A new generator seeded from one output of this one.
    pub fn split(&mut self) -> RandomSource {
        RandomSource::new(self.next_u64())
    }

    /// `count` derived generators, consuming `count` outputs.
    pub fn split_n(&mut self, count: usize) -> Vec<RandomSource> {
        (0..count).map(|_| self.split()).collect()
    }
}
