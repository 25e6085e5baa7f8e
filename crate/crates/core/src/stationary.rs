//! Stationary distributions, detailed balance and time reversal.

use crate::chain::{DistributionVector, TransitionMatrix};
use crate::graph::Graph;
use crate::linalg;
use crate::{Error, Result};

/// Default absolute tolerance for detailed-balance checks.
pub const DBE_TOL: f64 = 1e-9;

/// Tolerance on `‖πP − π‖_∞` accepted by [`reverse`].
pub const STATIONARY_TOL: f64 = 1e-9;

/// Outcome of checking `π(x)P(x,y) = π(y)P(y,x)` over all ordered pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibilityReport {
    pub reversible: bool,
    pub max_violation: f64,
    pub worst_pair: (usize, usize),
}

/// The unique stationary distribution of an irreducible chain.
///
/// Solves `(Pᵀ − I)π = 0` with the last equation replaced by `Σπ = 1`.
pub fn solve_stationary(p: &TransitionMatrix) -> Result<DistributionVector> {
    if !p.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let all: Vec<usize> = (0..p.n()).collect();
    let pi = stationary_on(p, &all).ok_or(Error::NotIrreducible)?;
    Ok(DistributionVector::from_raw(pi))
}

/// A stationary distribution that exists for any chain, without uniqueness.
///
/// Starting from state 0, the search moves to a state that cannot return
/// until it reaches a closed communicating class; the result is the
/// stationary distribution supported on that class, zero elsewhere. For an
/// irreducible chain this coincides with [`solve_stationary`].
pub fn solve_stationary_any(p: &TransitionMatrix) -> Result<DistributionVector> {
    let n = p.n();
    let mut x = 0;
    let class = loop {
        let forward = p.reachable(&[x], false);
        let backward = p.reachable(&[x], true);
        match (0..n).find(|&y| forward[y] && !backward[y]) {
            Some(y) => x = y,
            None => break (0..n).filter(|&y| forward[y]).collect::<Vec<_>>(),
        }
    };
    let restricted = stationary_on(p, &class).ok_or(Error::NotIrreducible)?;
    let mut pi = vec![0.0; n];
    for (&s, v) in class.iter().zip(restricted) {
        pi[s] = v;
    }
    Ok(DistributionVector::from_raw(pi))
}

/// Stationary vector of `P` restricted to a closed, irreducible set of states.
fn stationary_on(p: &TransitionMatrix, states: &[usize]) -> Option<Vec<f64>> {
    let m = states.len();
    let mut a = vec![0.0; m * m];
    for (i, &si) in states.iter().enumerate() {
        for (j, &sj) in states.iter().enumerate() {
            // row i of (Pᵀ − I) restricted
            a[i * m + j] = if i == j {
                // −(1 − P(x,x)) from the off-diagonal mass keeps precision
                // when P(x,x) is close to 1
                -(0..p.n())
                    .filter(|&y| y != si)
                    .map(|y| p.get(si, y))
                    .sum::<f64>()
            } else {
                p.get(sj, si)
            };
        }
    }
    a[(m - 1) * m..].fill(1.0);
    let mut b = vec![0.0; m];
    b[m - 1] = 1.0;
    let mut pi = linalg::solve(a, m, b, 1)?;
    pi.iter_mut().for_each(|v| *v = v.max(0.0));
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|v| *v /= total);
    Some(pi)
}

/// `π(v) = deg(v) / 2|E|` for the simple random walk on a connected graph.
pub fn srw_stationary(g: &Graph) -> Result<DistributionVector> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some((u, _)) = g.edges().find(|&(u, v)| u == v) {
        return Err(Error::LoopUnsupported(u));
    }
    if g.n_edges() == 0 {
        return Err(Error::IsolatedVertex(0));
    }
    let two_e = 2.0 * g.n_edges() as f64;
    Ok(DistributionVector::from_raw(
        (0..g.n_vertices())
            .map(|v| g.degree(v) as f64 / two_e)
            .collect(),
    ))
}

pub fn check_reversible(
    p: &TransitionMatrix,
    pi: &DistributionVector,
    tol: f64,
) -> Result<ReversibilityReport> {
    let n = p.n();
    if pi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: pi.len(),
        });
    }
    let mut max_violation = 0.0;
    let mut worst_pair = (0, 0);
    for x in 0..n {
        for y in 0..n {
            let v = (pi[x] * p.get(x, y) - pi[y] * p.get(y, x)).abs();
            if v > max_violation {
                max_violation = v;
                worst_pair = (x, y);
            }
        }
    }
    Ok(ReversibilityReport {
        reversible: max_violation <= tol,
        max_violation,
        worst_pair,
    })
}

/// `‖πP − π‖_∞`.
pub fn stationarity_residual(p: &TransitionMatrix, pi: &DistributionVector) -> f64 {
    p.step_distribution(pi.as_slice())
        .iter()
        .zip(pi.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Time reversal `P̂(y, x) = P(x, y) π(x) / π(y)`.
pub fn reverse(p: &TransitionMatrix, pi: &DistributionVector) -> Result<TransitionMatrix> {
    let n = p.n();
    if pi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: pi.len(),
        });
    }
    if let Some(x) = (0..n).find(|&x| !(pi[x] > 0.0)) {
        return Err(Error::NonPositivePi(x));
    }
    let residual = stationarity_residual(p, pi);
    if residual > STATIONARY_TOL {
        return Err(Error::NotStationary(residual));
    }
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            data[y * n + x] = p.get(x, y) * pi[x] / pi[y];
        }
    }
    Ok(TransitionMatrix::normalized(n, data))
}

/// Stationary law of a birth-death chain, `π_k ∝ (p_0⋯p_{k−1}) / (q_1⋯q_k)`,
/// accumulated in log space.
pub fn birth_death_stationary(p: &[f64], q: &[f64]) -> Result<DistributionVector> {
    let len = p.len();
    if q.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: q.len(),
        });
    }
    if len == 0 {
        return Err(Error::SizeTooSmall(
            "birth-death chain needs a state".into(),
        ));
    }
    if p[..len - 1].iter().any(|&v| !(v > 0.0)) || q[1..].iter().any(|&v| !(v > 0.0)) {
        return Err(Error::NotIrreducible);
    }
    let mut log_w = Vec::with_capacity(len);
    log_w.push(0.0);
    for k in 1..len {
        let prev = log_w[k - 1];
        log_w.push(prev + p[k - 1].ln() - q[k].ln());
    }
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    Ok(DistributionVector::from_raw(
        w.into_iter().map(|v| v / total).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{bernoulli_laplace_rates, ehrenfest_rates, queue_rates};

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    fn fig1() -> Graph {
        Graph::new(5, [(0, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn fig1_stationary() {
        let p = TransitionMatrix::srw_from_graph(&fig1()).unwrap();
        let pi = solve_stationary(&p).unwrap();
        close(
            pi.as_slice(),
            &[1.0 / 12.0, 0.25, 0.25, 0.25, 1.0 / 6.0],
            1e-12,
        );
        close(
            srw_stationary(&fig1()).unwrap().as_slice(),
            pi.as_slice(),
            1e-12,
        );
    }

    #[test]
    fn regular_graphs_uniform() {
        let p = TransitionMatrix::srw_from_graph(&Graph::cycle(6).unwrap()).unwrap();
        close(
            solve_stationary(&p).unwrap().as_slice(),
            &[1.0 / 6.0; 6],
            1e-12,
        );
        close(
            srw_stationary(&Graph::cycle(6).unwrap())
                .unwrap()
                .as_slice(),
            &[2.0 / 12.0; 6],
            1e-15,
        );
        close(
            srw_stationary(&Graph::complete(4).unwrap())
                .unwrap()
                .as_slice(),
            &[0.25; 4],
            1e-15,
        );
    }

    #[test]
    fn star_example() {
        let p = TransitionMatrix::star_chain(10, 0.2).unwrap();
        let pi = solve_stationary(&p).unwrap();
        let mut expected = vec![1.0 / 12.0; 11];
        expected[0] = 1.0 / 6.0;
        close(pi.as_slice(), &expected, 1e-12);
    }

    #[test]
    fn biased_cycle_is_uniform() {
        for p in [0.1, 0.37, 0.8, 0.99] {
            let m = TransitionMatrix::biased_cycle(7, p).unwrap();
            close(
                solve_stationary(&m).unwrap().as_slice(),
                &[1.0 / 7.0; 7],
                1e-12,
            );
        }
    }

    #[test]
    fn reducible_rejected_and_any_solution() {
        // two disjoint edges
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let p = TransitionMatrix::srw_from_graph(&g).unwrap();
        assert_eq!(solve_stationary(&p), Err(Error::NotIrreducible));
        let pi = solve_stationary_any(&p).unwrap();
        close(pi.as_slice(), &[0.5, 0.5, 0.0, 0.0], 1e-15);
        assert!(stationarity_residual(&p, &pi) < 1e-15);

        // transient state 0 drains into the absorbing state 2
        let p = TransitionMatrix::from_rows(vec![
            vec![0.5, 0.25, 0.25],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        close(
            solve_stationary_any(&p).unwrap().as_slice(),
            &[0.0, 0.0, 1.0],
            1e-15,
        );
    }

    #[test]
    fn srw_stationary_errors() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(srw_stationary(&g), Err(Error::Disconnected));
    }

    #[test]
    fn reversibility_reports() {
        let g = fig1();
        let p = TransitionMatrix::srw_from_graph(&g).unwrap();
        assert!(
            check_reversible(&p, &srw_stationary(&g).unwrap(), DBE_TOL)
                .unwrap()
                .reversible
        );

        let sym = TransitionMatrix::from_rows(vec![
            vec![0.2, 0.5, 0.3],
            vec![0.5, 0.1, 0.4],
            vec![0.3, 0.4, 0.3],
        ])
        .unwrap();
        assert!(
            check_reversible(&sym, &DistributionVector::uniform(3), DBE_TOL)
                .unwrap()
                .reversible
        );

        let biased = TransitionMatrix::biased_cycle(5, 0.8).unwrap();
        let r = check_reversible(&biased, &DistributionVector::uniform(5), DBE_TOL).unwrap();
        assert!(!r.reversible);
        assert!((r.max_violation - 0.6 / 5.0).abs() < 1e-15);
        assert!(check_reversible(&biased, &DistributionVector::uniform(4), DBE_TOL).is_err());
    }

    #[test]
    fn reversal_of_biased_cycle() {
        let p = TransitionMatrix::biased_cycle(5, 0.8).unwrap();
        let pi = DistributionVector::uniform(5);
        let r = reverse(&p, &pi).unwrap();
        let expected = TransitionMatrix::biased_cycle(5, 0.2).unwrap();
        close(r.as_slice(), expected.as_slice(), 1e-15);
        close(reverse(&r, &pi).unwrap().as_slice(), p.as_slice(), 1e-12);
    }

    #[test]
    fn reversal_of_reversible_is_identity() {
        let g = fig1();
        let p = TransitionMatrix::srw_from_graph(&g).unwrap();
        let r = reverse(&p, &srw_stationary(&g).unwrap()).unwrap();
        close(r.as_slice(), p.as_slice(), 1e-14);
    }

    #[test]
    fn reversal_errors() {
        let p = TransitionMatrix::biased_cycle(5, 0.8).unwrap();
        assert_eq!(
            reverse(&p, &DistributionVector::point_mass(5, 0)),
            Err(Error::NonPositivePi(1))
        );
        let skew = DistributionVector::new(vec![0.3, 0.2, 0.2, 0.2, 0.1]).unwrap();
        assert!(matches!(reverse(&p, &skew), Err(Error::NotStationary(_))));
    }

    #[test]
    fn birth_death_closed_forms() {
        // constant p, q: π_k ∝ (p/q)^k
        let (up, down, hold) = queue_rates(6, 0.7).unwrap();
        let pi = birth_death_stationary(&up, &down).unwrap();
        let ratio: f64 = 0.7 / 0.3;
        let z: f64 = (0..=6).map(|j| ratio.powi(j)).sum();
        let expected: Vec<f64> = (0..=6).map(|k| ratio.powi(k) / z).collect();
        close(pi.as_slice(), &expected, 1e-12);
        let solved =
            solve_stationary(&TransitionMatrix::birth_death(&up, &down, &hold).unwrap()).unwrap();
        close(solved.as_slice(), &expected, 1e-10);

        let (up, down, _) = queue_rates(5, 0.5).unwrap();
        close(
            birth_death_stationary(&up, &down).unwrap().as_slice(),
            &[1.0 / 6.0; 6],
            1e-15,
        );

        for balls in 1..=12u64 {
            let (up, down, _) = ehrenfest_rates(balls as usize).unwrap();
            let pi = birth_death_stationary(&up, &down).unwrap();
            let expected: Vec<f64> = (0..=balls)
                .map(|k| binom(balls, k) / 2f64.powi(balls as i32))
                .collect();
            close(pi.as_slice(), &expected, 1e-12);
        }

        for n in 1..=8u64 {
            let (up, down, _) = bernoulli_laplace_rates(n as usize).unwrap();
            let pi = birth_death_stationary(&up, &down).unwrap();
            let expected: Vec<f64> = (0..=n)
                .map(|k| binom(n, k).powi(2) / binom(2 * n, n))
                .collect();
            close(pi.as_slice(), &expected, 1e-12);
        }
    }

    #[test]
    fn birth_death_log_space_survives_overflow() {
        let n = 2000;
        let mut up = vec![0.9; n + 1];
        let mut down = vec![0.1; n + 1];
        up[n] = 0.0;
        down[0] = 0.0;
        let pi = birth_death_stationary(&up, &down).unwrap();
        assert!(pi.as_slice().iter().all(|v| v.is_finite()));
        assert!((pi[n] - (1.0 - 1.0 / 9.0)).abs() < 1e-12);
    }

    #[test]
    fn birth_death_requires_irreducible() {
        assert_eq!(
            birth_death_stationary(&[0.5, 0.0, 0.0], &[0.0, 0.5, 0.5]),
            Err(Error::NotIrreducible)
        );
    }
}
