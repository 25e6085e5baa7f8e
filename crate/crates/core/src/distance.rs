//! Total variation distance, convergence to stationarity and mixing times.

use crate::chain::{DistributionVector, TransitionMatrix};
use crate::{Error, Result};

/// `½ Σ |p_k − q_k|`.
pub fn tv_distance(p: &DistributionVector, q: &DistributionVector) -> Result<f64> {
    tv_slices(p.as_slice(), q.as_slice())
}

/// [`tv_distance`] on raw slices. Both the half-L1 form and the one-sided
/// form `Σ_{p_k ≥ q_k} (p_k − q_k)` are computed and checked against each
/// other; the first is returned.
pub fn tv_slices(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    let half_l1 = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let one_sided: f64 = p
        .iter()
        .zip(q)
        .filter(|(a, b)| a >= b)
        .map(|(a, b)| a - b)
        .sum();
    let mass_gap = (p.iter().sum::<f64>() - q.iter().sum::<f64>()).abs();
    debug_assert!(
        (half_l1 - one_sided).abs() <= 1e-12 + mass_gap,
        "tv forms disagree: {half_l1} vs {one_sided}"
    );
    Ok(half_l1)
}

/// `‖δ_{x0} P^n − π‖_TV` for `n = 0..=n_max`, by repeated vector products.
pub fn convergence_curve(
    p: &TransitionMatrix,
    x0: usize,
    pi: &DistributionVector,
    n_max: usize,
) -> Result<Vec<f64>> {
    if pi.len() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: pi.len(),
        });
    }
    p.check_state(x0)?;
    let mut mu = vec![0.0; p.n()];
    mu[x0] = 1.0;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(tv_slices(&mu, pi.as_slice())?);
    for _ in 0..n_max {
        mu = p.step_distribution(&mu);
        out.push(tv_slices(&mu, pi.as_slice())?);
    }
    Ok(out)
}

/// Outcome of [`empirical_mixing_time`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingTime {
    Reached(usize),
    /// No `n ≤ cap` brought every start within `ε`.
    NotReached(usize),
}

impl MixingTime {
    pub fn steps(self) -> Option<usize> {
        match self {
            MixingTime::Reached(n) => Some(n),
            MixingTime::NotReached(_) => None,
        }
    }
}

/// Worst-start distance `max_x ‖δ_x P^n − π‖_TV`.
pub fn worst_case_distance(pn: &TransitionMatrix, pi: &DistributionVector) -> f64 {
    (0..pn.n())
        .map(|x| tv_slices(pn.row(x), pi.as_slice()).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Least `n` with `max_x ‖δ_x P^n − π‖_TV ≤ ε`, searching `n = 0..=n_cap`.
pub fn empirical_mixing_time(
    p: &TransitionMatrix,
    pi: &DistributionVector,
    eps: f64,
    n_cap: usize,
) -> Result<MixingTime> {
    if pi.len() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: pi.len(),
        });
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in [0, 1), got {eps}"
        )));
    }
    let n = p.n();
    // rows of P^t, advanced one step at a time
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let mut r = vec![0.0; n];
            r[x] = 1.0;
            r
        })
        .collect();
    for t in 0..=n_cap {
        let worst = rows
            .iter()
            .map(|r| tv_slices(r, pi.as_slice()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        if worst <= eps {
            return Ok(MixingTime::Reached(t));
        }
        if t < n_cap {
            for r in rows.iter_mut() {
                *r = p.step_distribution(r);
            }
        }
    }
    Ok(MixingTime::NotReached(n_cap))
}

/// Shared-uniform coupling bound `1 − (1 − |a − b|)^n` on
/// `‖Bin(n, a) − Bin(n, b)‖_TV`.
pub fn binomial_coupling_bound(n: u64, a: f64, b: f64) -> Result<f64> {
    for v in [a, b] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability(v));
        }
    }
    Ok(1.0 - (1.0 - (a - b).abs()).powf(n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::samplers::RandomSource;
    use proptest::prelude::*;

    fn srw(g: Graph) -> TransitionMatrix {
        TransitionMatrix::srw_from_graph(&g).unwrap()
    }

    #[test]
    fn five_cycle_anchors() {
        let p = srw(Graph::cycle(5).unwrap());
        let curve = convergence_curve(&p, 0, &DistributionVector::uniform(5), 30).unwrap();
        assert!((curve[3] - 0.35).abs() < 1e-12);
        assert!(curve[30] <= 0.002);
        assert!((curve[30] - 0.0011).abs() < 1e-4);
    }

    #[test]
    fn trivial_values() {
        let p = DistributionVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        let d0 = DistributionVector::point_mass(3, 0);
        let d1 = DistributionVector::point_mass(3, 1);
        assert_eq!(tv_distance(&d0, &d1).unwrap(), 1.0);
        assert!(matches!(
            tv_distance(&d0, &DistributionVector::uniform(2)),
            Err(Error::DimensionMismatch { .. })
        ));
        let q = srw(Graph::cycle(4).unwrap());
        let c = convergence_curve(&q, 2, &DistributionVector::point_mass(4, 2), 0).unwrap();
        assert_eq!(c, vec![0.0]);
    }

    #[test]
    fn four_cycle_never_mixes() {
        let p = srw(Graph::cycle(4).unwrap());
        let pi = DistributionVector::uniform(4);
        let curve = convergence_curve(&p, 0, &pi, 50).unwrap();
        assert!(curve.iter().step_by(2).all(|&v| v >= 0.5 - 1e-12));
        assert_eq!(
            empirical_mixing_time(&p, &pi, 0.49, 200).unwrap(),
            MixingTime::NotReached(200)
        );
    }

    #[test]
    fn uniform_jump_mixes_in_one_step() {
        for n in 2..8 {
            let p = TransitionMatrix::uniform_jump(n).unwrap();
            let eps = 0.99 * (1.0 - 1.0 / n as f64);
            let t = empirical_mixing_time(&p, &DistributionVector::uniform(n), eps, 10).unwrap();
            assert_eq!(t, MixingTime::Reached(1));
        }
    }

    #[test]
    fn shift_register_refreshes_fully() {
        for dim in 1..=6 {
            let p = TransitionMatrix::cyclic_shift_hypercube(dim).unwrap();
            let pi = DistributionVector::uniform(1 << dim);
            let t = empirical_mixing_time(&p, &pi, 0.0, 20).unwrap();
            assert_eq!(t, MixingTime::Reached(dim as usize));
        }
    }

    #[test]
    fn lazy_cycle_curve_nonincreasing() {
        let p = srw(Graph::cycle(6).unwrap()).lazy();
        let curve = convergence_curve(&p, 0, &DistributionVector::uniform(6), 100).unwrap();
        assert!(curve.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
        // Pascal-style recursion, independent of any closed form
        let mut pmf = vec![1.0];
        for _ in 0..n {
            let mut next = vec![0.0; pmf.len() + 1];
            for (k, &v) in pmf.iter().enumerate() {
                next[k] += v * (1.0 - p);
                next[k + 1] += v * p;
            }
            pmf = next;
        }
        pmf
    }

    #[test]
    fn coupling_bound() {
        for n in 0..20u64 {
            let b = binomial_coupling_bound(n, 0.5, 1.0 / 3.0).unwrap();
            assert!((b - (1.0 - (5.0f64 / 6.0).powi(n as i32))).abs() < 1e-14);
        }
        assert_eq!(binomial_coupling_bound(7, 0.4, 0.4).unwrap(), 0.0);
        let exact = tv_slices(&binomial_pmf(10, 0.5), &binomial_pmf(10, 1.0 / 3.0)).unwrap();
        assert!(exact <= binomial_coupling_bound(10, 0.5, 1.0 / 3.0).unwrap());
        assert!(exact > 0.3);
        assert!(matches!(
            binomial_coupling_bound(3, 1.5, 0.2),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn event_bound() {
        let mut rng = RandomSource::new(7);
        for _ in 0..100 {
            let n = 2 + rng.index(8);
            let w1: Vec<f64> = (0..n).map(|_| rng.unit()).collect();
            let w2: Vec<f64> = (0..n).map(|_| rng.unit()).collect();
            let p = DistributionVector::from_weights(&w1).unwrap();
            let q = DistributionVector::from_weights(&w2).unwrap();
            let tv = tv_distance(&p, &q).unwrap();
            for _ in 0..100 {
                let mask: Vec<bool> = (0..n).map(|_| rng.unit() < 0.5).collect();
                let pa: f64 = (0..n).filter(|&k| mask[k]).map(|k| p[k]).sum();
                let qa: f64 = (0..n).filter(|&k| mask[k]).map(|k| q[k]).sum();
                assert!((pa - qa).abs() <= tv + 1e-12);
            }
        }
    }

    fn dist(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01f64..1.0, len).prop_map(|w| {
            let s: f64 = w.iter().sum();
            w.into_iter().map(|v| v / s).collect()
        })
    }

    proptest! {
        #[test]
        fn tv_metric_properties((p, q, r) in (1usize..10).prop_flat_map(|n| (dist(n), dist(n), dist(n)))) {
            let pq = tv_slices(&p, &q).unwrap();
            let qp = tv_slices(&q, &p).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&pq));
            prop_assert_eq!(pq, qp);
            let pr = tv_slices(&p, &r).unwrap();
            let rq = tv_slices(&r, &q).unwrap();
            prop_assert!(pq <= pr + rq + 1e-12);
            let overlap: f64 = p.iter().zip(&q).map(|(a, b)| a.min(*b)).sum();
            prop_assert!((1.0 - pq - overlap).abs() < 1e-12);
        }
    }
}
