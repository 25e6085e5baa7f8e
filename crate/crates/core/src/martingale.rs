//! Martingales built from a chain: eigen-martingales, exact one-step
//! verification of space-time harmonic functions, and Monte-Carlo checks of
//! optional sampling.

use rayon::prelude::*;

use crate::chain::TransitionMatrix;
use crate::models::{polya_step, PolyaState};
use crate::samplers::RandomSource;
use crate::{Error, Result};

/// Largest horizon accepted by [`check_space_time_harmonic`].
pub const MAX_CHECK_STEPS: u64 = 200;
/// Per-trial step cap in [`optional_sampling_estimate`].
pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

/// `λ^{−n} v(x)`, with the power taken in log space.
pub fn eigen_martingale_value(lambda: f64, v: &[f64], n: u64, x: usize) -> Result<f64> {
    if lambda == 0.0 {
        return Err(Error::ZeroEigenvalue);
    }
    let vx = *v.get(x).ok_or(Error::StateOutOfRange {
        state: x,
        n: v.len(),
    })?;
    let sign = if lambda < 0.0 && n % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    Ok(sign * vx * (-(n as f64) * lambda.abs().ln()).exp())
}

/// `e^{αx} / cosh(α)^n`, the exponential martingale of the simple symmetric
/// walk on ℤ.
pub fn exponential_martingale_value(alpha: f64, n: u64, x: i64) -> f64 {
    (alpha * x as f64 - n as f64 * alpha.cosh().ln()).exp()
}

/// Result of [`check_space_time_harmonic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicCheck {
    pub holds: bool,
    /// Largest `|Σ_y P(x,y) f(n+1,y) − f(n,x)| / max(1, |f(n,x)|)`.
    pub worst_violation: f64,
    /// `(n, x)` where the worst violation occurs.
    pub worst: Option<(u64, usize)>,
}

/// Checks `Σ_y P(x,y) f(n+1, y) = f(n, x)` for `n < steps` and every `x` in
/// `states` (all states when `None`). Violations are measured relative to
/// `max(1, |f(n,x)|)` so that growing factors such as `λ^{−n}` can be
/// checked with one tolerance.
pub fn check_space_time_harmonic<F>(
    p: &TransitionMatrix,
    f: F,
    steps: u64,
    tol: f64,
    states: Option<&[usize]>,
) -> Result<HarmonicCheck>
where
    F: Fn(u64, usize) -> f64,
{
    if steps > MAX_CHECK_STEPS {
        return Err(Error::InvalidParameter(format!(
            "harmonic checks are limited to {MAX_CHECK_STEPS} steps, got {steps}"
        )));
    }
    let all: Vec<usize>;
    let xs = match states {
        Some(s) => {
            for &x in s {
                p.check_state(x)?;
            }
            s
        }
        None => {
            all = (0..p.n()).collect();
            &all
        }
    };
    let mut worst_violation = 0.0;
    let mut worst = None;
    for n in 0..steps {
        let next: Vec<f64> = (0..p.n()).map(|y| f(n + 1, y)).collect();
        for &x in xs {
            let avg: f64 = p
                .row(x)
                .iter()
                .zip(&next)
                .filter(|(w, _)| **w != 0.0)
                .map(|(w, v)| w * v)
                .sum();
            let here = f(n, x);
            let violation = (avg - here).abs() / here.abs().max(1.0);
            if !(violation <= worst_violation) {
                worst_violation = violation;
                worst = Some((n, x));
            }
        }
    }
    Ok(HarmonicCheck {
        holds: worst_violation <= tol,
        worst_violation,
        worst,
    })
}

/// Monte-Carlo estimate of `E f(τ, X_τ)` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: usize,
}

impl SamplingEstimate {
    fn from_values(values: &[f64]) -> Self {
        let t = values.len() as f64;
        let mean = values.iter().sum::<f64>() / t;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1.0)
        } else {
            0.0
        };
        SamplingEstimate {
            mean,
            std_err: (var / t).sqrt(),
            trials: values.len(),
        }
    }
}

/// Runs the chain from `x0` until it first enters `boundary` and averages
/// `f(τ, X_τ)` over `trials` independent runs, each seeded from `rng`.
pub fn optional_sampling_estimate<F>(
    p: &TransitionMatrix,
    f: F,
    boundary: &[usize],
    x0: usize,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<SamplingEstimate>
where
    F: Fn(u64, usize) -> f64 + Sync,
{
    optional_sampling_capped(p, f, boundary, x0, trials, DEFAULT_STEP_CAP, rng)
}

/// [`optional_sampling_estimate`] with an explicit per-trial step cap.
pub fn optional_sampling_capped<F>(
    p: &TransitionMatrix,
    f: F,
    boundary: &[usize],
    x0: usize,
    trials: usize,
    step_cap: u64,
    rng: &mut RandomSource,
) -> Result<SamplingEstimate>
where
    F: Fn(u64, usize) -> f64 + Sync,
{
    p.check_state(x0)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mask = p.boundary_mask(boundary)?;
    let reach = p.reachable(&[x0], false);
    if !(0..p.n()).any(|y| mask[y] && reach[y]) {
        return Err(Error::BoundaryUnreachable(x0));
    }
    let values: Vec<f64> = rng
        .split_n(trials)
        .into_par_iter()
        .map(|mut r| {
            let (mut x, mut t) = (x0, 0u64);
            while !mask[x] {
                if t == step_cap {
                    return Err(Error::StepCapExceeded(step_cap));
                }
                x = p.step(x, &mut r);
                t += 1;
            }
            Ok(f(t, x))
        })
        .collect::<Result<_>>()?;
    Ok(SamplingEstimate::from_values(&values))
}

/// Simulated `E(Y_n)` for the Pólya proportion `Y_n = X_n / (n + a + b)`,
/// `n = 0..=n_max`, each with its standard error.
pub fn polya_proportion_means(
    a: u64,
    b: u64,
    n_max: u64,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<Vec<SamplingEstimate>> {
    let start = PolyaState::new(a, b)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let paths: Vec<Vec<f64>> = rng
        .split_n(trials)
        .into_par_iter()
        .map(|mut r| {
            let mut s = start;
            let mut out = Vec::with_capacity(n_max as usize + 1);
            out.push(s.proportion());
            for _ in 0..n_max {
                s = polya_step(s, &mut r);
                out.push(s.proportion());
            }
            out
        })
        .collect();
    Ok((0..=n_max as usize)
        .map(|n| {
            let column: Vec<f64> = paths.iter().map(|p| p[n]).collect();
            SamplingEstimate::from_values(&column)
        })
        .collect())
}
