//! Seeded sampling algorithms.
//!
//! Every routine takes an explicit [`RandomSource`] and consumes a fixed,
//! documented number of unit draws per call, so runs are reproducible from
//! the seed alone. Acceptance tests compare a unit draw `U` in `[0, 1)`
//! strictly against the acceptance probability (`U < a`).

mod gibbs;
mod metropolis;
mod random;

pub use gibbs::{gibbs_random_scan_matrix, gibbs_sweep, Scan};
pub use metropolis::{
    metropolis_matrix, metropolis_step, ChainMetropolis, GraphWalkMetropolis, MetropolisSpec,
};
pub use random::RandomSource;

use crate::chain::DistributionVector;
use crate::{Error, Result};

/// Stick-breaking selection: the first `k` with `Σ_{i<k} p_i < u ≤ Σ_{i≤k} p_i`.
///
/// States with zero mass are never returned. If rounding leaves the total
/// just below `u`, the last state with positive mass is returned.
pub fn stick_break(probs: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    let mut last_positive = None;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        cumulative += p;
        last_positive = Some(k);
        if u <= cumulative {
            return k;
        }
    }
    last_positive.expect("stick_break needs at least one positive probability")
}

/// One draw from a finite distribution; consumes one unit draw.
pub fn sample_discrete(pi: &DistributionVector, rng: &mut RandomSource) -> usize {
    stick_break(pi.as_slice(), rng.unit())
}

/// `F^{-1}(U)` for one unit draw `U`.
pub fn inverse_cdf_sample<F>(f_inv: F, rng: &mut RandomSource) -> f64
where
    F: FnOnce(f64) -> f64,
{
    f_inv(rng.unit())
}

/// Outcome of one rejection-sampling call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionDraw<T> {
    pub value: T,
    /// Number of proposals drawn, including the accepted one.
    pub proposals: u64,
}

/// Rejection sampler for a target density (or mass function) dominated by
/// `bound * base`.
///
/// Each proposal consumes whatever the base sampler draws followed by one
/// unit draw `U`; the proposal `y` is accepted when
/// `U < target(y) / (bound * base(y))`.
pub struct RejectionSampler<T, Ft, Fb, S> {
    target: Ft,
    base: Fb,
    base_sampler: S,
    bound: f64,
    max_proposals: u64,
    _value: std::marker::PhantomData<T>,
}

impl<T, Ft, Fb, S> RejectionSampler<T, Ft, Fb, S>
where
    T: Copy + std::fmt::Debug,
    Ft: Fn(T) -> f64,
    Fb: Fn(T) -> f64,
    S: FnMut(&mut RandomSource) -> T,
{
    pub const DEFAULT_MAX_PROPOSALS: u64 = 1_000_000;

    pub fn new(target: Ft, base: Fb, base_sampler: S, bound: f64) -> Result<Self> {
        if !(bound >= 1.0) || !bound.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rejection bound must be >= 1, got {bound}"
            )));
        }
        Ok(RejectionSampler {
            target,
            base,
            base_sampler,
            bound,
            max_proposals: Self::DEFAULT_MAX_PROPOSALS,
            _value: std::marker::PhantomData,
        })
    }

    pub fn max_proposals(mut self, cap: u64) -> Self {
        self.max_proposals = cap;
        self
    }

    pub fn sample(&mut self, rng: &mut RandomSource) -> Result<RejectionDraw<T>> {
        for proposals in 1..=self.max_proposals {
            let y = (self.base_sampler)(rng);
            let base = (self.base)(y);
            let ratio = if base > 0.0 {
                (self.target)(y) / (self.bound * base)
            } else {
                0.0
            };
            if ratio > 1.0 + 1e-12 {
                return Err(Error::RatioExceedsOne {
                    at: format!("{y:?}"),
                    ratio,
                });
            }
            if rng.unit() < ratio {
                return Ok(RejectionDraw {
                    value: y,
                    proposals,
                });
            }
        }
        Err(Error::MaxProposalsExceeded(self.max_proposals))
    }
}

/// Random-transposition shuffle step: draws positions `I` and `J`
/// independently and uniformly (two unit draws) and swaps them when they
/// differ.
pub fn random_transposition_step(perm: &mut [usize], rng: &mut RandomSource) {
    let n = perm.len();
    if n == 0 {
        return;
    }
    let i = rng.index(n);
    let j = rng.index(n);
    perm.swap(i, j);
}

/// Runs `burn_in + steps` transitions of `kernel` from `x0` and keeps every
/// `thinning`-th state after burn-in. `x0` itself is never recorded.
pub fn run_chain<S, K>(
    mut kernel: K,
    x0: S,
    steps: usize,
    burn_in: usize,
    thinning: usize,
    rng: &mut RandomSource,
) -> Result<Vec<S>>
where
    S: Clone,
    K: FnMut(&S, &mut RandomSource) -> S,
{
    if thinning == 0 {
        return Err(Error::InvalidThinning);
    }
    let mut x = x0;
    for _ in 0..burn_in {
        x = kernel(&x, rng);
    }
    let mut out = Vec::with_capacity(steps / thinning);
    for t in 1..=steps {
        x = kernel(&x, rng);
        if t % thinning == 0 {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Empirical pmf of `samples` over `0..n`.
pub fn empirical_pmf(samples: &[usize], n: usize) -> Vec<f64> {
    let mut counts = vec![0.0; n];
    for &s in samples {
        counts[s] += 1.0;
    }
    let total = samples.len().max(1) as f64;
    counts.iter_mut().for_each(|c| *c /= total);
    counts
}
