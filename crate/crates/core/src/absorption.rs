//! Hitting times, absorption probabilities and harmonic extension through
//! the fundamental matrix `M = (I − Q)⁻¹`.

use std::collections::BTreeMap;

use crate::chain::TransitionMatrix;
use crate::linalg;
use crate::{Error, Result};

/// Fundamental-matrix analysis of a chain stopped on a boundary set.
///
/// Rows and columns follow the ascending order of `interior` and `boundary`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionAnalysis {
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
    /// `|D| x |D|` row-major; entry `(i, j)` is the expected number of visits
    /// to `interior[j]` before absorption when starting at `interior[i]`.
    pub fundamental: Vec<f64>,
    /// Expected hitting time of the boundary from each interior state.
    pub hit_times: Vec<f64>,
    /// `|D| x |D^c|` row-major; absorption probabilities `M R`.
    pub hit_probs: Vec<f64>,
}

impl AbsorptionAnalysis {
    pub fn fundamental_entry(&self, i: usize, j: usize) -> f64 {
        self.fundamental[i * self.interior.len() + j]
    }

    /// `E_x(τ_A)` for any state; zero on the boundary.
    pub fn hit_time(&self, state: usize) -> f64 {
        match self.interior.binary_search(&state) {
            Ok(i) => self.hit_times[i],
            Err(_) => 0.0,
        }
    }

    /// `P_x(X_τ = b)` for any state `x` and boundary state `b`.
    pub fn hit_prob(&self, state: usize, target: usize) -> f64 {
        let Ok(b) = self.boundary.binary_search(&target) else {
            return 0.0;
        };
        match self.interior.binary_search(&state) {
            Ok(i) => self.hit_probs[i * self.boundary.len() + b],
            Err(_) => f64::from(u8::from(state == target)),
        }
    }
}

/// Splits the states into sorted interior and boundary lists and checks that
/// every interior state can reach the boundary.
fn split_states(p: &TransitionMatrix, boundary: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mask = p.boundary_mask(boundary)?;
    let bnd: Vec<usize> = (0..p.n()).filter(|&x| mask[x]).collect();
    let interior: Vec<usize> = (0..p.n()).filter(|&x| !mask[x]).collect();
    let reaches = p.reachable(&bnd, true);
    if let Some(&x) = interior.iter().find(|&&x| !reaches[x]) {
        return Err(Error::BoundaryUnreachable(x));
    }
    Ok((interior, bnd))
}

fn i_minus_q(p: &TransitionMatrix, interior: &[usize]) -> Vec<f64> {
    let m = interior.len();
    let mut a = vec![0.0; m * m];
    for (i, &x) in interior.iter().enumerate() {
        for (j, &y) in interior.iter().enumerate() {
            a[i * m + j] = f64::from(u8::from(i == j)) - p.get(x, y);
        }
    }
    a
}

pub fn analyze(p: &TransitionMatrix, boundary: &[usize]) -> Result<AbsorptionAnalysis> {
    let (interior, bnd) = split_states(p, boundary)?;
    let m = interior.len();
    let k = bnd.len();
    let fundamental = linalg::solve(i_minus_q(p, &interior), m, linalg::identity(m), m)
        .ok_or(Error::BoundaryUnreachable(interior[0]))?;
    let hit_times = fundamental.chunks(m).map(|row| row.iter().sum()).collect();
    let mut r = vec![0.0; m * k];
    for (i, &x) in interior.iter().enumerate() {
        for (j, &b) in bnd.iter().enumerate() {
            r[i * k + j] = p.get(x, b);
        }
    }
    let hit_probs = linalg::matmul(&fundamental, &r, m, m, k);
    Ok(AbsorptionAnalysis {
        interior,
        boundary: bnd,
        fundamental,
        hit_times,
        hit_probs,
    })
}

/// Mean return time `E_x(τ_x^+) = 1 + Σ_{y≠x} P(x,y) E_y(τ_x)`.
pub fn expected_return_time(p: &TransitionMatrix, x: usize) -> Result<f64> {
    p.check_state(x)?;
    if !p.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    if p.n() == 1 {
        return Ok(1.0);
    }
    let a = analyze(p, &[x])?;
    let tail: f64 = a
        .interior
        .iter()
        .zip(&a.hit_times)
        .map(|(&y, &t)| p.get(x, y) * t)
        .sum();
    Ok(1.0 + tail)
}

/// The unique `h` that is harmonic for `P` on `interior` and equals the
/// given values on the complement, i.e. `h(x) = E_x f(X_τ)`.
pub fn harmonic_extend(
    p: &TransitionMatrix,
    interior: &[usize],
    boundary_values: &BTreeMap<usize, f64>,
) -> Result<Vec<f64>> {
    let n = p.n();
    let mut is_interior = vec![false; n];
    for &x in interior {
        p.check_state(x)?;
        is_interior[x] = true;
    }
    for (x, &inside) in is_interior.iter().enumerate() {
        if inside == boundary_values.contains_key(&x) {
            return Err(Error::InvalidParameter(format!(
                "state {x} must be either interior or carry a boundary value, not both or neither"
            )));
        }
    }
    if let Some((&x, _)) = boundary_values.iter().find(|(&x, _)| x >= n) {
        return Err(Error::StateOutOfRange { state: x, n });
    }
    let mut h = vec![0.0; n];
    for (&x, &v) in boundary_values {
        h[x] = v;
    }
    if interior.is_empty() {
        return Ok(h);
    }
    let boundary: Vec<usize> = boundary_values.keys().copied().collect();
    let (inner, _) = split_states(p, &boundary)?;
    let m = inner.len();
    let rhs: Vec<f64> = inner
        .iter()
        .map(|&x| boundary.iter().map(|&b| p.get(x, b) * h[b]).sum())
        .collect();
    let solved = linalg::solve(i_minus_q(p, &inner), m, rhs, 1)
        .ok_or(Error::BoundaryUnreachable(inner[0]))?;
    for (&x, v) in inner.iter().zip(solved) {
        h[x] = v;
    }
    Ok(h)
}

/// Nearest-neighbour walk on `{0..n}` stepping up with probability `p`,
/// absorbed at `0` and `n`.
pub fn gamblers_ruin_chain(n: usize, p: f64) -> Result<TransitionMatrix> {
    if n < 1 {
        return Err(Error::SizeTooSmall("gambler's ruin needs n >= 1".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let mut up = vec![p; n + 1];
    let mut down = vec![1.0 - p; n + 1];
    let mut hold = vec![0.0; n + 1];
    for end in [0, n] {
        up[end] = 0.0;
        down[end] = 0.0;
        hold[end] = 1.0;
    }
    TransitionMatrix::birth_death(&up, &down, &hold)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuinOutcome {
    /// Probability of reaching `n` before `0`.
    pub hit_prob_right: f64,
    /// Expected time until either end is reached.
    pub expected_time: f64,
}

/// Gambler's ruin on `{0..n}` from `k`.
///
/// The fair case uses `k/n` and `k(n−k)`. The biased case uses
/// `((q/p)^k − 1)/((q/p)^n − 1)` for the probability and solves the
/// absorbing chain numerically for the expected time.
pub fn gamblers_ruin(n: usize, k: usize, p: f64) -> Result<RuinOutcome> {
    if n < 1 {
        return Err(Error::SizeTooSmall("gambler's ruin needs n >= 1".into()));
    }
    if k > n {
        return Err(Error::StartOutOfRange { k, n });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let (kf, nf) = (k as f64, n as f64);
    if k == 0 || k == n {
        return Ok(RuinOutcome {
            hit_prob_right: f64::from(u8::from(k == n)),
            expected_time: 0.0,
        });
    }
    if p == 0.5 {
        return Ok(RuinOutcome {
            hit_prob_right: kf / nf,
            expected_time: kf * (nf - kf),
        });
    }
    let rho = (1.0 - p) / p;
    let hit_prob_right = (rho.powi(k as i32) - 1.0) / (rho.powi(n as i32) - 1.0);
    let a = analyze(&gamblers_ruin_chain(n, p)?, &[0, n])?;
    Ok(RuinOutcome {
        hit_prob_right,
        expected_time: a.hit_time(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn srw(g: &Graph) -> TransitionMatrix {
        TransitionMatrix::srw_from_graph(g).unwrap()
    }

    #[test]
    fn four_vertex_example() {
        // square 0-1-2-3 with chord 0-2; boundary {2, 3}
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let a = analyze(&srw(&g), &[2, 3]).unwrap();
        let expected = [6.0 / 5.0, 2.0 / 5.0, 3.0 / 5.0, 6.0 / 5.0];
        for (m, e) in a.fundamental.iter().zip(expected) {
            assert!((m - e).abs() < 1e-12);
        }
        assert!((a.hit_times[0] - 1.6).abs() < 1e-12);
        assert!((a.hit_times[1] - 1.8).abs() < 1e-12);
        for row in a.hit_probs.chunks(2) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn complete_graph_hitting_time() {
        // Oracle: Σ_ℓ ℓ (2/3)^{ℓ−1} (1/3), truncated far past convergence.
        let series: f64 = (1..2000)
            .map(|l| l as f64 * (2.0f64 / 3.0).powi(l - 1) / 3.0)
            .sum();
        let a = analyze(&srw(&Graph::complete(4).unwrap()), &[0]).unwrap();
        for &t in &a.hit_times {
            assert!((t - series).abs() < 1e-12);
            assert!((t - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_step_interior() {
        let p = TransitionMatrix::srw_from_graph(&Graph::star(3).unwrap()).unwrap();
        let a = analyze(&p, &[1, 2, 3]).unwrap();
        assert_eq!(a.hit_times, vec![1.0]);
    }

    #[test]
    fn unreachable_boundary() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(analyze(&srw(&g), &[3]), Err(Error::BoundaryUnreachable(0)));
    }

    #[test]
    fn return_times() {
        let hex = srw(&Graph::cycle(6).unwrap());
        for x in 0..6 {
            assert!((expected_return_time(&hex, x).unwrap() - 6.0).abs() < 1e-12);
        }
        let star = TransitionMatrix::star_chain(10, 0.2).unwrap();
        assert!((expected_return_time(&star, 0).unwrap() - 6.0).abs() < 1e-12);
        assert!((expected_return_time(&star, 4).unwrap() - 12.0).abs() < 1e-12);
        let flip = TransitionMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(expected_return_time(&flip, 1).unwrap(), 2.0);
        assert_eq!(
            expected_return_time(&TransitionMatrix::identity(2), 0),
            Err(Error::NotIrreducible)
        );
    }

    #[test]
    fn harmonic_on_four_cycle() {
        // labels 1..4 -> 0..3; interior {0, 1}, f(2) = 1, f(3) = 0
        let p = srw(&Graph::cycle(4).unwrap());
        let f = BTreeMap::from([(2, 1.0), (3, 0.0)]);
        let h = harmonic_extend(&p, &[0, 1], &f).unwrap();
        assert!((h[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((h[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_on_seven_vertex_graph() {
        // a..e = 0..4, the two marked vertices "0" and "1" are 5 and 6
        let g = Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (3, 6)]).unwrap();
        let f = BTreeMap::from([(5, 0.0), (6, 1.0)]);
        let h = harmonic_extend(&srw(&g), &[0, 1, 2, 3, 4], &f).unwrap();
        let expected = [0.25, 0.25, 0.5, 0.75, 0.75, 0.0, 1.0];
        for (a, b) in h.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constants_are_harmonic() {
        let p = srw(&Graph::hypercube(3).unwrap());
        let f = BTreeMap::from([(0, 2.5), (7, 2.5)]);
        let h = harmonic_extend(&p, &[1, 2, 3, 4, 5, 6], &f).unwrap();
        assert!(h.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn harmonic_key_validation() {
        let p = srw(&Graph::cycle(4).unwrap());
        let f = BTreeMap::from([(2, 1.0)]);
        assert!(matches!(
            harmonic_extend(&p, &[0, 1], &f),
            Err(Error::InvalidParameter(_))
        ));
        let f = BTreeMap::from([(1, 1.0), (2, 1.0), (3, 0.0)]);
        assert!(harmonic_extend(&p, &[0, 1], &f).is_err());
    }

    #[test]
    fn ruin_fair() {
        let r = gamblers_ruin(10, 3, 0.5).unwrap();
        assert!((r.hit_prob_right - 0.3).abs() < 1e-15);
        assert_eq!(r.expected_time, 21.0);
        assert_eq!(
            gamblers_ruin(10, 0, 0.5).unwrap(),
            RuinOutcome {
                hit_prob_right: 0.0,
                expected_time: 0.0
            }
        );
        assert_eq!(
            gamblers_ruin(10, 10, 0.3).unwrap(),
            RuinOutcome {
                hit_prob_right: 1.0,
                expected_time: 0.0
            }
        );
        assert_eq!(
            gamblers_ruin(10, 11, 0.5),
            Err(Error::StartOutOfRange { k: 11, n: 10 })
        );
    }

    #[test]
    fn ruin_biased_limit() {
        for p in [0.5 - 1e-6, 0.5 + 1e-6] {
            let r = gamblers_ruin(10, 3, p).unwrap();
            assert!((r.hit_prob_right - 0.3).abs() < 1e-4);
            assert!((r.expected_time - 21.0).abs() < 1e-3);
        }
    }

    #[test]
    fn ruin_biased_matches_chain() {
        let chain = gamblers_ruin_chain(12, 0.6).unwrap();
        let a = analyze(&chain, &[0, 12]).unwrap();
        for k in 1..12 {
            let r = gamblers_ruin(12, k, 0.6).unwrap();
            assert!((a.hit_prob(k, 12) - r.hit_prob_right).abs() < 1e-12);
        }
    }

    #[test]
    fn relabelling_invariance() {
        // rotate the labels of a ruin chain by `shift`; hitting data follow the states
        let n = 8;
        let base = gamblers_ruin_chain(n, 0.35).unwrap();
        let size = n + 1;
        for shift in [1, 4, 7] {
            let perm = |x: usize| (x + shift) % size;
            let mut rows = vec![vec![0.0; size]; size];
            for x in 0..size {
                for y in 0..size {
                    rows[perm(x)][perm(y)] = base.get(x, y);
                }
            }
            let moved = TransitionMatrix::from_rows(rows).unwrap();
            let a = analyze(&base, &[0, n]).unwrap();
            let b = analyze(&moved, &[perm(0), perm(n)]).unwrap();
            for x in 0..size {
                assert!((a.hit_time(x) - b.hit_time(perm(x))).abs() < 1e-10);
                assert!((a.hit_prob(x, n) - b.hit_prob(perm(x), perm(n))).abs() < 1e-10);
            }
        }
    }
}
