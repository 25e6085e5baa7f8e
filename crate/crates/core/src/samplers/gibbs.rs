use std::collections::HashMap;

use super::RandomSource;
use crate::chain::TransitionMatrix;
use crate::{Error, Result};

/// Coordinate order for a Gibbs update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scan {
    /// Resample one uniformly chosen coordinate (one extra unit draw).
    Random,
    /// Resample every coordinate once, left to right.
    Systematic,
}

/// One Gibbs update of `x` in place.
///
/// `conditionals[i](x, rng)` must draw coordinate `i` from its full
/// conditional given the other coordinates of `x`.
pub fn gibbs_sweep<T, F>(conditionals: &[F], x: &mut [T], scan: Scan, rng: &mut RandomSource)
where
    F: Fn(&[T], &mut RandomSource) -> T,
{
    assert_eq!(
        conditionals.len(),
        x.len(),
        "one conditional per coordinate"
    );
    match scan {
        Scan::Random => {
            let i = rng.index(x.len());
            x[i] = conditionals[i](x, rng);
        }
        Scan::Systematic => {
            for (i, cond) in conditionals.iter().enumerate() {
                x[i] = cond(x, rng);
            }
        }
    }
}

/// Exact random-scan Gibbs transition matrix over an enumerated state space.
///
/// `conditional(i, s)` lists `(value, probability)` pairs of coordinate `i`
/// given the rest of `s`. Every resulting state must appear in `states`.
pub fn gibbs_random_scan_matrix<F>(
    states: &[Vec<usize>],
    conditional: F,
) -> Result<TransitionMatrix>
where
    F: Fn(usize, &[usize]) -> Vec<(usize, f64)>,
{
    let n = states.len();
    if n == 0 {
        return Err(Error::SizeTooSmall("empty state space".into()));
    }
    let index: HashMap<&[usize], usize> = states
        .iter()
        .enumerate()
        .map(|(k, s)| (s.as_slice(), k))
        .collect();
    let mut data = vec![0.0; n * n];
    for (from, s) in states.iter().enumerate() {
        let d = s.len() as f64;
        for i in 0..s.len() {
            for (value, prob) in conditional(i, s) {
                let mut t = s.clone();
                t[i] = value;
                let to = *index.get(t.as_slice()).ok_or_else(|| {
                    Error::InvalidParameter(format!("conditional leaves the state space at {t:?}"))
                })?;
                data[from * n + to] += prob / d;
            }
        }
    }
    TransitionMatrix::from_data(n, data)
}
