use super::{stick_break, RandomSource};
use crate::chain::{DistributionVector, TransitionMatrix};
use crate::graph::Graph;
use crate::{Error, Result};

/// A Metropolis-Hastings kernel: a base proposal plus the two ratios that
/// enter the acceptance probability `min(1, π(y)q(y,x) / (π(x)q(x,y)))`.
///
/// Only ratios of the target appear, so unnormalised targets work as-is.
pub trait MetropolisSpec {
    type State: Clone;

    /// Draws a proposal `y ~ q(x, ·)`.
    fn propose(&self, x: &Self::State, rng: &mut RandomSource) -> Self::State;

    /// `q(y, x) / q(x, y)`; identically one for symmetric proposals.
    fn base_ratio(&self, x: &Self::State, y: &Self::State) -> f64;

    /// `π(y) / π(x)`.
    fn target_ratio(&self, x: &Self::State, y: &Self::State) -> f64;

    fn acceptance(&self, x: &Self::State, y: &Self::State) -> f64 {
        (self.target_ratio(x, y) * self.base_ratio(x, y)).min(1.0)
    }
}

/// One Metropolis-Hastings transition: the proposal's draws, then one unit
/// draw `U`; the proposal is kept when `U < a(x, y)`.
pub fn metropolis_step<M: MetropolisSpec>(
    spec: &M,
    x: &M::State,
    rng: &mut RandomSource,
) -> M::State {
    let y = spec.propose(x, rng);
    let a = spec.acceptance(x, &y);
    if rng.unit() < a {
        y
    } else {
        x.clone()
    }
}

/// Metropolis over a simple random walk on a graph: propose a uniform
/// neighbour (one draw), so `q(y,x)/q(x,y) = deg(x)/deg(y)`.
pub struct GraphWalkMetropolis<'g, F> {
    graph: &'g Graph,
    target_ratio: F,
}

impl<'g, F> GraphWalkMetropolis<'g, F>
where
    F: Fn(usize, usize) -> f64,
{
    /// `target_ratio(x, y)` must return `π(y)/π(x)`.
    pub fn new(graph: &'g Graph, target_ratio: F) -> Result<Self> {
        if let Some(v) = (0..graph.n_vertices()).find(|&v| graph.degree(v) == 0) {
            return Err(Error::IsolatedVertex(v));
        }
        Ok(GraphWalkMetropolis {
            graph,
            target_ratio,
        })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }
}

impl<F> MetropolisSpec for GraphWalkMetropolis<'_, F>
where
    F: Fn(usize, usize) -> f64,
{
    type State = usize;

    fn propose(&self, x: &usize, rng: &mut RandomSource) -> usize {
        let nbrs = self.graph.neighbors(*x);
        nbrs[rng.index(nbrs.len())]
    }

    fn base_ratio(&self, x: &usize, y: &usize) -> f64 {
        self.graph.degree(*x) as f64 / self.graph.degree(*y) as f64
    }

    fn target_ratio(&self, x: &usize, y: &usize) -> f64 {
        (self.target_ratio)(*x, *y)
    }
}

/// Metropolis over an arbitrary base chain and unnormalised target weights.
/// Proposals use one unit draw by stick-breaking over the base row.
pub struct ChainMetropolis<'q> {
    base: &'q TransitionMatrix,
    weights: Vec<f64>,
}

impl<'q> ChainMetropolis<'q> {
    pub fn new(base: &'q TransitionMatrix, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != base.n() {
            return Err(Error::DimensionMismatch {
                expected: base.n(),
                found: weights.len(),
            });
        }
        if let Some(x) = weights.iter().position(|w| !(*w > 0.0)) {
            return Err(Error::NonPositivePi(x));
        }
        Ok(ChainMetropolis { base, weights })
    }
}

impl MetropolisSpec for ChainMetropolis<'_> {
    type State = usize;

    fn propose(&self, x: &usize, rng: &mut RandomSource) -> usize {
        stick_break(self.base.row(*x), rng.unit())
    }

    fn base_ratio(&self, x: &usize, y: &usize) -> f64 {
        self.base.get(*y, *x) / self.base.get(*x, *y)
    }

    fn target_ratio(&self, x: &usize, y: &usize) -> f64 {
        self.weights[*y] / self.weights[*x]
    }
}

/// Exact Metropolis transition matrix for base chain `q` and target `π`:
/// `p(x,y) = q(x,y) a(x,y)` off the diagonal, with the rejected mass kept
/// on the diagonal.
pub fn metropolis_matrix(
    q: &TransitionMatrix,
    pi: &DistributionVector,
) -> Result<TransitionMatrix> {
    let n = q.n();
    if pi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: pi.len(),
        });
    }
    if let Some(x) = (0..n).find(|&x| !(pi[x] > 0.0)) {
        return Err(Error::NonPositivePi(x));
    }
    if !q.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        let mut moved = 0.0;
        for y in 0..n {
            let qxy = q.get(x, y);
            if y == x || qxy == 0.0 {
                continue;
            }
            let a = (pi[y] * q.get(y, x) / (pi[x] * qxy)).min(1.0);
            data[x * n + y] = qxy * a;
            moved += qxy * a;
        }
        data[x * n + x] = (1.0 - moved).max(0.0);
    }
    TransitionMatrix::from_data(n, data)
}
