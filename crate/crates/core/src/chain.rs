//! Row-stochastic transition matrices and the distributions they act on.

use std::collections::VecDeque;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::linalg;
use crate::samplers::{stick_break, RandomSource};
use crate::{Error, Result, STOCHASTIC_TOL};

/// Dense `n x n` transition matrix, stored row-major. Every entry is
/// nonnegative and every row sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainJson", into = "ChainJson")]
pub struct TransitionMatrix {
    n: usize,
    data: Vec<f64>,
    labels: Option<Vec<String>>,
}

/// Wire format: `{"states": ["a", ...], "matrix": [[...], ...]}` with
/// `states` optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ChainJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<Vec<String>>,
    matrix: Vec<Vec<f64>>,
}

impl TryFrom<ChainJson> for TransitionMatrix {
    type Error = Error;

    fn try_from(raw: ChainJson) -> Result<Self> {
        let p = TransitionMatrix::from_rows(raw.matrix)?;
        match raw.states {
            Some(labels) => p.with_labels(labels),
            None => Ok(p),
        }
    }
}

impl From<TransitionMatrix> for ChainJson {
    fn from(p: TransitionMatrix) -> Self {
        ChainJson {
            matrix: p.to_rows(),
            states: p.labels,
        }
    }
}

/// A probability vector over the states of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionVector(Vec<f64>);

impl DistributionVector {
    /// Validates nonnegativity and a unit sum within `1e-10`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for &v in &probs {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidProbability(v));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidDistribution(sum));
        }
        Ok(DistributionVector(probs))
    }

    /// Normalises nonnegative weights with a positive total.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if let Some(&bad) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight {bad} is not a nonnegative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution(total));
        }
        Ok(DistributionVector(
            weights.iter().map(|w| w / total).collect(),
        ))
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        DistributionVector(probs)
    }

    pub fn uniform(n: usize) -> Self {
        DistributionVector(vec![1.0 / n as f64; n])
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut v = vec![0.0; n];
        v[x] = 1.0;
        DistributionVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl Index<usize> for DistributionVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A sampled path together with the seed of the generator that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<usize>,
    pub seed: u64,
}

impl TransitionMatrix {
    /// Validates a square, nonnegative matrix whose rows sum to one within
    /// `1e-10`, then divides each row by its sum.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::SizeTooSmall(
                "transition matrix needs at least one state".into(),
            ));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            data.extend(row);
        }
        Self::from_data(n, data)
    }

    /// Row-major constructor with the same validation as [`from_rows`](Self::from_rows).
    pub(crate) fn from_data(n: usize, mut data: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(data.len(), n * n);
        for i in 0..n {
            let row = &mut data[i * n..(i + 1) * n];
            for (j, &v) in row.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::RowSumInvalid { row: i, sum });
            }
            row.iter_mut().for_each(|v| *v /= sum);
        }
        Ok(TransitionMatrix {
            n,
            data,
            labels: None,
        })
    }

    /// Rescales each row to sum to one without the ingest tolerance check.
    /// Rows must already be nonnegative with a positive sum.
    pub(crate) fn normalized(n: usize, mut data: Vec<f64>) -> Self {
        for row in data.chunks_mut(n) {
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= sum);
        }
        TransitionMatrix {
            n,
            data,
            labels: None,
        }
    }

    /// Attaches one label per state.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of state `x`, or its index when the chain is unlabelled.
    pub fn state_name(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn identity(n: usize) -> Self {
        TransitionMatrix {
            n,
            data: linalg::identity(n),
            labels: None,
        }
    }

    /// Simple random walk: `P(x, y) = 1/deg(x)` for every neighbour `y`.
    pub fn srw_from_graph(g: &Graph) -> Result<Self> {
        let n = g.n_vertices();
        if let Some((u, _)) = g.edges().find(|&(u, v)| u == v) {
            return Err(Error::LoopUnsupported(u));
        }
        let mut data = vec![0.0; n * n];
        for x in 0..n {
            let nbrs = g.neighbors(x);
            if nbrs.is_empty() {
                return Err(Error::IsolatedVertex(x));
            }
            let w = 1.0 / nbrs.len() as f64;
            for &y in nbrs {
                data[x * n + y] = w;
            }
        }
        Self::from_data(n, data)
    }

    /// `[[1-p, p], [q, 1-q]]`.
    pub fn two_state(p: f64, q: f64) -> Result<Self> {
        for v in [p, q] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability(v));
            }
        }
        Self::from_data(2, vec![1.0 - p, p, q, 1.0 - q])
    }

    /// Walk on the `n`-cycle stepping `+1` with probability `p` and `-1`
    /// otherwise.
    pub fn biased_cycle(n: usize, p: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::SizeTooSmall(format!("cycle needs n >= 3, got {n}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let mut data = vec![0.0; n * n];
        for x in 0..n {
            data[x * n + (x + 1) % n] += p;
            data[x * n + (x + n - 1) % n] += 1.0 - p;
        }
        Self::from_data(n, data)
    }

    /// Star with centre 0 and `leaves` leaves: the centre jumps to a uniform
    /// leaf, a leaf returns to the centre with probability `p` and otherwise
    /// stays put.
    pub fn star_chain(leaves: usize, p: f64) -> Result<Self> {
        if leaves < 1 {
            return Err(Error::SizeTooSmall("star needs at least one leaf".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let n = leaves + 1;
        let mut data = vec![0.0; n * n];
        for j in 1..n {
            data[j] = 1.0 / leaves as f64;
            data[j * n] = p;
            data[j * n + j] = 1.0 - p;
        }
        Self::from_data(n, data)
    }

    /// Complete graph with loops: every row is uniform, `P = (1/n) 1ᵀ1`.
    pub fn uniform_jump(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::SizeTooSmall(
                "uniform jump chain needs n >= 1".into(),
            ));
        }
        Self::from_data(n, vec![1.0 / n as f64; n * n])
    }

    /// Shift register on `{0,1}^dim`: drop the last coordinate, shift the
    /// rest right by one and insert a fair random bit in front. State `i`
    /// holds coordinate `w_{k+1}` in bit `k`.
    pub fn cyclic_shift_hypercube(dim: u32) -> Result<Self> {
        if dim < 1 {
            return Err(Error::SizeTooSmall("hypercube needs dimension >= 1".into()));
        }
        if dim > 12 {
            return Err(Error::StateSpaceTooLarge(1 << dim.min(63)));
        }
        let n = 1usize << dim;
        let mask = n - 1;
        let mut data = vec![0.0; n * n];
        for w in 0..n {
            let shifted = (w << 1) & mask;
            data[w * n + shifted] += 0.5;
            data[w * n + (shifted | 1)] += 0.5;
        }
        Self::from_data(n, data)
    }

    /// `½(I + P)`.
    pub fn lazy(&self) -> Self {
        let n = self.n;
        let mut data: Vec<f64> = self.data.iter().map(|v| 0.5 * v).collect();
        for i in 0..n {
            data[i * n + i] += 0.5;
        }
        TransitionMatrix {
            n,
            data,
            labels: self.labels.clone(),
        }
    }

    /// Replaces the rows of `boundary` by identity rows, giving the chain
    /// stopped on first entry to the boundary.
    pub fn absorb(&self, boundary: &[usize]) -> Result<Self> {
        let mask = self.boundary_mask(boundary)?;
        let n = self.n;
        let mut data = self.data.clone();
        for (x, _) in mask.iter().enumerate().filter(|(_, &b)| b) {
            let row = &mut data[x * n..(x + 1) * n];
            row.fill(0.0);
            row[x] = 1.0;
        }
        Ok(TransitionMatrix {
            n,
            data,
            labels: self.labels.clone(),
        })
    }

    pub(crate) fn boundary_mask(&self, boundary: &[usize]) -> Result<Vec<bool>> {
        if boundary.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        let mut mask = vec![false; self.n];
        for &b in boundary {
            self.check_state(b)?;
            mask[b] = true;
        }
        if mask.iter().all(|&b| b) {
            return Err(Error::BoundaryIsEverything);
        }
        Ok(mask)
    }

    /// Tridiagonal chain on `{0..n}` with up, down and hold probabilities
    /// `p`, `q`, `r`.
    pub fn birth_death(p: &[f64], q: &[f64], r: &[f64]) -> Result<Self> {
        let n = p.len();
        if n == 0 {
            return Err(Error::SizeTooSmall(
                "birth-death chain needs a state".into(),
            ));
        }
        for other in [q.len(), r.len()] {
            if other != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: other,
                });
            }
        }
        for k in 0..n {
            for v in [p[k], q[k], r[k]] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidProbability(v));
                }
            }
            let sum = p[k] + q[k] + r[k];
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::ProbabilitySumInvalid { state: k, sum });
            }
        }
        if q[0] != 0.0 || p[n - 1] != 0.0 {
            return Err(Error::BoundaryLeak);
        }
        let mut data = vec![0.0; n * n];
        for k in 0..n {
            data[k * n + k] = r[k];
            if k + 1 < n {
                data[k * n + k + 1] = p[k];
            }
            if k > 0 {
                data[k * n + k - 1] = q[k];
            }
        }
        Self::from_data(n, data)
    }

    /// Ehrenfest urn with `balls` balls: from `k`, up with `(N-k)/N`, down with `k/N`.
    pub fn ehrenfest(balls: usize) -> Result<Self> {
        let (p, q, r) = ehrenfest_rates(balls)?;
        Self::birth_death(&p, &q, &r)
    }

    /// Queue of capacity `n`: arrivals with probability `p`, services with
    /// `1-p`; the empty queue holds with `1-p` and the full one with `p`.
    pub fn queue(n: usize, p: f64) -> Result<Self> {
        let (up, down, hold) = queue_rates(n, p)?;
        Self::birth_death(&up, &down, &hold)
    }

    /// Bernoulli-Laplace diffusion with `n` red and `n` blue balls split
    /// evenly between two urns; each step swaps one uniformly chosen ball from
    /// each urn. State `k` is the number of red balls in the first urn.
    pub fn bernoulli_laplace(n: usize) -> Result<Self> {
        let (p, q, r) = bernoulli_laplace_rates(n)?;
        Self::birth_death(&p, &q, &r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.n..(x + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for row in self.data.chunks(self.n) {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    pub(crate) fn check_state(&self, x: usize) -> Result<()> {
        if x >= self.n {
            Err(Error::StateOutOfRange {
                state: x,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.n {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: len,
            })
        } else {
            Ok(())
        }
    }

    /// One vector-matrix product `μ P`.
    pub fn step_distribution(&self, mu: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (x, &m) in mu.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.row(x)) {
                *o += m * p;
            }
        }
        out
    }

    /// `μ_0 P^k` by `k` successive vector-matrix products.
    pub fn evolve(&self, mu0: &DistributionVector, k: usize) -> Result<DistributionVector> {
        self.check_dim(mu0.len())?;
        let mut mu = mu0.as_slice().to_vec();
        for _ in 0..k {
            mu = self.step_distribution(&mu);
        }
        Ok(DistributionVector::from_raw(mu))
    }

    /// `P^k`; repeated squaring when `k > 8`, plain products otherwise.
    /// The result is not renormalised.
    pub fn matrix_power(&self, k: usize) -> TransitionMatrix {
        let n = self.n;
        let data = if k <= 8 {
            let mut acc = linalg::identity(n);
            for _ in 0..k {
                acc = linalg::matmul(&acc, &self.data, n, n, n);
            }
            acc
        } else {
            let mut acc = linalg::identity(n);
            let mut base = self.data.clone();
            let mut e = k;
            while e > 0 {
                if e & 1 == 1 {
                    acc = linalg::matmul(&acc, &base, n, n, n);
                }
                e >>= 1;
                if e > 0 {
                    base = linalg::matmul(&base, &base, n, n, n);
                }
            }
            acc
        };
        TransitionMatrix {
            n,
            data,
            labels: self.labels.clone(),
        }
    }

    /// Strictly positive successors of `x`.
    pub(crate) fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(x)
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(y, _)| y)
    }

    /// States reachable from `start` along positive entries (of `Pᵀ` when
    /// `transposed`).
    pub(crate) fn reachable(&self, start: &[usize], transposed: bool) -> Vec<bool> {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &s in start {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for (v, seen_v) in seen.iter_mut().enumerate() {
                let w = if transposed {
                    self.get(v, u)
                } else {
                    self.get(u, v)
                };
                if w > 0.0 && !*seen_v {
                    *seen_v = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Forward and backward search from state 0 both reach every state.
    pub fn is_irreducible(&self) -> bool {
        self.reachable(&[0], false).iter().all(|&b| b)
            && self.reachable(&[0], true).iter().all(|&b| b)
    }

    /// Period of an irreducible chain: the gcd, over positive entries
    /// `u -> v`, of `level(u) + 1 - level(v)` where `level` is BFS distance
    /// from state 0.
    pub fn period(&self) -> Result<usize> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let n = self.n;
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for v in self.successors(u) {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g = 0usize;
        for u in 0..n {
            for v in self.successors(u) {
                let diff = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs() as usize;
                g = gcd(g, diff);
            }
        }
        Ok(g)
    }

    /// One transition from `x` using a single unit draw.
    pub fn step(&self, x: usize, rng: &mut RandomSource) -> usize {
        stick_break(self.row(x), rng.unit())
    }

    /// Path of `steps` transitions from `x0`; consumes exactly `steps` draws.
    pub fn simulate(&self, x0: usize, steps: usize, rng: &mut RandomSource) -> Result<Trajectory> {
        self.check_state(x0)?;
        let mut states = Vec::with_capacity(steps + 1);
        states.push(x0);
        let mut x = x0;
        for _ in 0..steps {
            x = self.step(x, rng);
            states.push(x);
        }
        Ok(Trajectory {
            states,
            seed: rng.seed(),
        })
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

type Rates = (Vec<f64>, Vec<f64>, Vec<f64>);

pub(crate) fn ehrenfest_rates(balls: usize) -> Result<Rates> {
    if balls < 1 {
        return Err(Error::SizeTooSmall(
            "Ehrenfest urn needs at least one ball".into(),
        ));
    }
    let b = balls as f64;
    let p: Vec<f64> = (0..=balls).map(|k| (balls - k) as f64 / b).collect();
    let q: Vec<f64> = (0..=balls).map(|k| k as f64 / b).collect();
    let r = vec![0.0; balls + 1];
    Ok((p, q, r))
}

pub(crate) fn queue_rates(n: usize, p: f64) -> Result<Rates> {
    if n < 1 {
        return Err(Error::SizeTooSmall("queue needs capacity >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let q = 1.0 - p;
    let mut up = vec![p; n + 1];
    let mut down = vec![q; n + 1];
    let mut hold = vec![0.0; n + 1];
    up[n] = 0.0;
    down[0] = 0.0;
    hold[0] = q;
    hold[n] = p;
    Ok((up, down, hold))
}

pub(crate) fn bernoulli_laplace_rates(n: usize) -> Result<Rates> {
    if n < 1 {
        return Err(Error::SizeTooSmall("Bernoulli-Laplace needs n >= 1".into()));
    }
    let nn = (n * n) as f64;
    let p: Vec<f64> = (0..=n).map(|k| ((n - k) * (n - k)) as f64 / nn).collect();
    let q: Vec<f64> = (0..=n).map(|k| (k * k) as f64 / nn).collect();
    let r: Vec<f64> = (0..=n).map(|k| (2 * k * (n - k)) as f64 / nn).collect();
    Ok((p, q, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_graph() -> Graph {
        Graph::new(5, [(0, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    fn assert_rows_close(p: &TransitionMatrix, expected: &[Vec<f64>], tol: f64) {
        for (x, row) in expected.iter().enumerate() {
            for (y, &e) in row.iter().enumerate() {
                assert!(
                    (p.get(x, y) - e).abs() < tol,
                    "({x},{y}): {} vs {e}",
                    p.get(x, y)
                );
            }
        }
    }

    #[test]
    fn from_rows_validation() {
        assert!(TransitionMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_ok());
        let (p, q) = (0.3, 0.3);
        assert!(TransitionMatrix::from_rows(vec![vec![p, 1.0 - p], vec![q, 1.0 - q]]).is_ok());
        assert!(matches!(
            TransitionMatrix::from_rows(vec![vec![0.5, 0.6], vec![0.5, 0.5]]),
            Err(Error::RowSumInvalid { row: 0, .. })
        ));
        assert!(matches!(
            TransitionMatrix::from_rows(vec![vec![1.0], vec![0.5, 0.5]]),
            Err(Error::NotSquare { row: 0, .. })
        ));
        assert!(matches!(
            TransitionMatrix::from_rows(vec![vec![1.5, -0.5], vec![0.5, 0.5]]),
            Err(Error::NegativeEntry { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn renormalises_within_tolerance() {
        let p = TransitionMatrix::from_rows(vec![vec![0.5, 0.5 + 5e-11], vec![1.0, 0.0]]).unwrap();
        let s: f64 = p.row(0).iter().sum();
        assert!((s - 1.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn srw_on_fig1_graph() {
        let p = TransitionMatrix::srw_from_graph(&fig1_graph()).unwrap();
        let t = 1.0 / 3.0;
        let expected = vec![
            vec![0.0, 1.0, 0.0, 0.0, 0.0],
            vec![t, 0.0, t, t, 0.0],
            vec![0.0, t, 0.0, t, t],
            vec![0.0, t, t, 0.0, t],
            vec![0.0, 0.0, 0.5, 0.5, 0.0],
        ];
        assert_rows_close(&p, &expected, 1e-15);
    }

    #[test]
    fn srw_on_hexagon_and_path() {
        let p = TransitionMatrix::srw_from_graph(&Graph::cycle(6).unwrap()).unwrap();
        assert_eq!(p.get(0, 1), 0.5);
        assert_eq!(p.get(0, 5), 0.5);
        assert_eq!(p.get(0, 2), 0.0);
        let p = TransitionMatrix::srw_from_graph(&Graph::path(2).unwrap()).unwrap();
        assert_eq!(p.to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn srw_rejects_isolated_and_loops() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(
            TransitionMatrix::srw_from_graph(&g),
            Err(Error::IsolatedVertex(2))
        );
        let g = Graph::new(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(
            TransitionMatrix::srw_from_graph(&g),
            Err(Error::LoopUnsupported(1))
        );
    }

    #[test]
    fn lazy_hexagon() {
        let p = TransitionMatrix::srw_from_graph(&Graph::cycle(6).unwrap())
            .unwrap()
            .lazy();
        assert_eq!(p.get(3, 3), 0.5);
        assert_eq!(p.get(3, 2), 0.25);
        assert_eq!(p.get(3, 4), 0.25);
        assert_eq!(
            TransitionMatrix::identity(3).lazy(),
            TransitionMatrix::identity(3)
        );
    }

    #[test]
    fn absorbing_barriers() {
        let p = TransitionMatrix::srw_from_graph(&Graph::path(6).unwrap()).unwrap();
        let a = p.absorb(&[0, 5]).unwrap();
        assert_eq!(a.row(0), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.row(5), &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(a.row(2), p.row(2));
        assert_eq!(a.absorb(&[0, 5]).unwrap(), a);

        let b = p.absorb(&[0, 1, 2, 3, 5]).unwrap();
        assert_eq!(b.row(4), p.row(4));
        assert_eq!(p.absorb(&[]), Err(Error::EmptyBoundary));
        assert_eq!(
            p.absorb(&[0, 1, 2, 3, 4, 5]),
            Err(Error::BoundaryIsEverything)
        );
    }

    #[test]
    fn ehrenfest_five() {
        let p = TransitionMatrix::ehrenfest(5).unwrap();
        assert_eq!(p.n(), 6);
        let row1 = p.row(1);
        let expected = [0.2, 0.0, 0.8, 0.0, 0.0, 0.0];
        for (a, b) in row1.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(p.get(0, 1), 1.0);
        assert_eq!(p.get(5, 4), 1.0);
    }

    #[test]
    fn queue_holds_at_ends() {
        let p = TransitionMatrix::queue(3, 0.5).unwrap();
        assert_eq!(p.get(0, 0), 0.5);
        assert_eq!(p.get(3, 3), 0.5);
        assert_eq!(p.get(1, 2), 0.5);
        assert_eq!(p.get(1, 0), 0.5);
        assert_eq!(p.get(1, 1), 0.0);
    }

    #[test]
    fn birth_death_validation() {
        let z = vec![0.0; 3];
        let one = vec![1.0; 3];
        assert_eq!(
            TransitionMatrix::birth_death(&z, &z, &one).unwrap(),
            TransitionMatrix::identity(3)
        );
        assert!(matches!(
            TransitionMatrix::birth_death(&[0.5, 0.5, 0.0], &[0.0, 0.5, 0.5], &[0.5, 0.5, 0.5]),
            Err(Error::ProbabilitySumInvalid { state: 1, .. })
        ));
        assert_eq!(
            TransitionMatrix::birth_death(&[0.5, 0.5, 0.5], &[0.0, 0.5, 0.5], &[0.5, 0.0, 0.0]),
            Err(Error::BoundaryLeak)
        );
    }

    #[test]
    fn bernoulli_laplace_rows() {
        let p = TransitionMatrix::bernoulli_laplace(3).unwrap();
        assert!((p.get(1, 2) - 4.0 / 9.0).abs() < 1e-15);
        assert!((p.get(1, 0) - 1.0 / 9.0).abs() < 1e-15);
        assert!((p.get(1, 1) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn evolve_hexagon_and_pentagon() {
        let p = TransitionMatrix::srw_from_graph(&Graph::cycle(6).unwrap()).unwrap();
        let mu = p.evolve(&DistributionVector::point_mass(6, 0), 50).unwrap();
        let expected = [1.0 / 3.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 3.0, 0.0];
        for (a, b) in mu.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-3);
        }

        let p = TransitionMatrix::srw_from_graph(&Graph::cycle(5).unwrap()).unwrap();
        let mu = p.evolve(&DistributionVector::point_mass(5, 0), 3).unwrap();
        let expected = [0.0, 0.375, 0.125, 0.125, 0.375];
        for (a, b) in mu.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }

        let mu0 = DistributionVector::new(vec![0.2, 0.3, 0.1, 0.1, 0.3]).unwrap();
        assert_eq!(p.evolve(&mu0, 0).unwrap(), mu0);
        assert!(matches!(
            p.evolve(&DistributionVector::uniform(3), 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matrix_power_agrees_with_products() {
        let p = TransitionMatrix::srw_from_graph(&fig1_graph()).unwrap();
        for k in [0, 1, 5, 9, 17, 64] {
            let pk = p.matrix_power(k);
            for x in 0..5 {
                let direct = p.evolve(&DistributionVector::point_mass(5, x), k).unwrap();
                for y in 0..5 {
                    assert!((pk.get(x, y) - direct[y]).abs() < 1e-12);
                }
                let s: f64 = pk.row(x).iter().sum();
                assert!((s - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn irreducibility() {
        let hex = TransitionMatrix::srw_from_graph(&Graph::cycle(6).unwrap()).unwrap();
        assert!(hex.is_irreducible());
        let mut edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.push((6, 7));
        let g = Graph::new(8, edges).unwrap();
        assert!(!TransitionMatrix::srw_from_graph(&g)
            .unwrap()
            .is_irreducible());
        assert!(!TransitionMatrix::identity(2).is_irreducible());
        // one-way flow: 0 -> 1 but never back
        let p = TransitionMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(!p.is_irreducible());
    }

    #[test]
    fn periods() {
        let srw = |n| TransitionMatrix::srw_from_graph(&Graph::cycle(n).unwrap()).unwrap();
        assert_eq!(srw(4).period().unwrap(), 2);
        assert_eq!(srw(5).period().unwrap(), 1);
        assert_eq!(srw(6).lazy().period().unwrap(), 1);
        assert_eq!(
            TransitionMatrix::star_chain(10, 0.2)
                .unwrap()
                .period()
                .unwrap(),
            1
        );
        let shift3 = TransitionMatrix::from_rows(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(shift3.period().unwrap(), 3);
        assert_eq!(
            TransitionMatrix::identity(2).period(),
            Err(Error::NotIrreducible)
        );
        assert_eq!(TransitionMatrix::identity(1).period().unwrap(), 1);
    }

    #[test]
    fn simulate_basics() {
        let p = TransitionMatrix::srw_from_graph(&Graph::cycle(6).unwrap()).unwrap();
        let mut rng = RandomSource::new(1);
        assert_eq!(p.simulate(3, 0, &mut rng).unwrap().states, vec![3]);
        let a = p.simulate(0, 100, &mut RandomSource::new(8)).unwrap();
        let b = p.simulate(0, 100, &mut RandomSource::new(8)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, 8);
        for w in a.states.windows(2) {
            assert!(p.get(w[0], w[1]) > 0.0);
        }
        assert_eq!(
            p.simulate(6, 1, &mut rng),
            Err(Error::StateOutOfRange { state: 6, n: 6 })
        );
    }

    #[test]
    fn simulate_consumes_one_draw_per_step() {
        let p = TransitionMatrix::srw_from_graph(&Graph::cycle(6).unwrap()).unwrap();
        let mut a = RandomSource::new(4);
        let mut b = a.clone();
        p.simulate(0, 37, &mut a).unwrap();
        for _ in 0..37 {
            b.unit();
        }
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let p: TransitionMatrix =
            serde_json::from_str(r#"{"states":["a","b"],"matrix":[[0.5,0.5],[1,0]]}"#).unwrap();
        assert_eq!(p.state_name(1), "b");
        let text = serde_json::to_string(&p).unwrap();
        let q: TransitionMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(p, q);
        assert!(
            serde_json::from_str::<TransitionMatrix>(r#"{"matrix":[[0.5,0.4],[1,0]]}"#).is_err()
        );
    }
}
