//! Gibbs distributions over graph vertices and Metropolis-based minimisation.

use std::fmt;

use rayon::prelude::*;

use crate::chain::{DistributionVector, TransitionMatrix};
use crate::graph::Graph;
use crate::samplers::{metropolis_step, GraphWalkMetropolis, RandomSource};
use crate::{Error, Result};

/// A real objective on the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveOnGraph {
    graph: Graph,
    values: Vec<f64>,
}

impl ObjectiveOnGraph {
    pub fn new(graph: Graph, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.n_vertices() {
            return Err(Error::DimensionMismatch {
                expected: graph.n_vertices(),
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().position(|f| !f.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "objective is not finite at vertex {v}"
            )));
        }
        Ok(ObjectiveOnGraph { graph, values })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn f(&self, v: usize) -> f64 {
        self.values[v]
    }

    /// Vertex with the smallest value (lowest index on ties).
    pub fn argmin(&self) -> usize {
        (0..self.values.len())
            .min_by(|&a, &b| self.values[a].total_cmp(&self.values[b]))
            .unwrap_or(0)
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        let n = self.graph.n_vertices();
        if x >= n {
            Err(Error::StateOutOfRange { state: x, n })
        } else {
            Ok(())
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "lambda must be nonnegative, got {lambda}"
        )))
    }
}

/// `π_λ(i) ∝ e^{−λ f(i)}`, shifted by `min f` before exponentiating.
pub fn gibbs_distribution(obj: &ObjectiveOnGraph, lambda: f64) -> Result<DistributionVector> {
    check_lambda(lambda)?;
    let fmin = obj.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = obj
        .values
        .iter()
        .map(|f| (-lambda * (f - fmin)).exp())
        .collect();
    DistributionVector::from_weights(&w)
}

fn hill_climb_spec(
    obj: &ObjectiveOnGraph,
    lambda: f64,
) -> Result<GraphWalkMetropolis<'_, impl Fn(usize, usize) -> f64 + '_>> {
    GraphWalkMetropolis::new(&obj.graph, move |x, y| {
        (-lambda * (obj.f(y) - obj.f(x))).exp()
    })
}

/// One hill-climb move at inverse temperature `lambda`: a uniform neighbour
/// `y` of `x` is proposed and accepted with probability
/// `min(1, deg(x)/deg(y) · e^{−λ(f(y) − f(x))})`. Two unit draws.
pub fn hill_climb_step(
    obj: &ObjectiveOnGraph,
    lambda: f64,
    x: usize,
    rng: &mut RandomSource,
) -> Result<usize> {
    check_lambda(lambda)?;
    obj.check_vertex(x)?;
    let spec = hill_climb_spec(obj, lambda)?;
    Ok(metropolis_step(&spec, &x, rng))
}

/// Exact transition matrix of [`hill_climb_step`] at fixed `lambda`.
pub fn hill_climb_matrix(obj: &ObjectiveOnGraph, lambda: f64) -> Result<TransitionMatrix> {
    check_lambda(lambda)?;
    let g = &obj.graph;
    let n = g.n_vertices();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        let dx = g.degree(x) as f64;
        let mut moved = 0.0;
        for &y in g.neighbors(x) {
            if y == x {
                continue;
            }
            let a = (dx / g.degree(y) as f64 * (-lambda * (obj.f(y) - obj.f(x))).exp()).min(1.0);
            data[x * n + y] = a / dx;
            moved += a / dx;
        }
        data[x * n + x] = 1.0 - moved;
    }
    TransitionMatrix::from_data(n, data)
}

/// Inverse-temperature schedule `t ↦ λ(t)`.
pub struct AnnealSchedule {
    lambda: Box<dyn Fn(u64) -> f64 + Send + Sync>,
    label: String,
}

impl fmt::Debug for AnnealSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnnealSchedule")
            .field("label", &self.label)
            .finish()
    }
}

impl AnnealSchedule {
    /// A custom schedule; it must be nonnegative and nondecreasing, which is
    /// checked at `t = 0` and at powers of two up to `2^40`.
    pub fn custom<F>(label: impl Into<String>, lambda: F) -> Result<Self>
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        let mut prev = lambda(0);
        if !(prev >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "schedule is negative at t=0: {prev}"
            )));
        }
        for k in 0..=40 {
            let t = 1u64 << k;
            let v = lambda(t);
            if !(v >= prev) {
                return Err(Error::InvalidParameter(format!(
                    "schedule decreases or is NaN at t={t}"
                )));
            }
            prev = v;
        }
        Ok(AnnealSchedule {
            lambda: Box::new(lambda),
            label: label.into(),
        })
    }

    /// `λ(t) = c · ln(1 + t)`.
    pub fn logarithmic(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "log schedule scale must be positive, got {c}"
            )));
        }
        Self::custom(format!("log(c={c})"), move |t| c * (t as f64).ln_1p())
    }

    /// `λ(t) = ln(1 + t) / (max f − min f)`: a log schedule in units of the
    /// objective's range. Falls back to `c = 1` for a constant objective.
    pub fn range_scaled(obj: &ObjectiveOnGraph) -> Result<Self> {
        let fmax = obj.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let fmin = obj.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let range = fmax - fmin;
        Self::logarithmic(if range > 0.0 { 1.0 / range } else { 1.0 })
    }

    /// `λ(t) = λ₀` for every `t`.
    pub fn constant(lambda0: f64) -> Result<Self> {
        check_lambda(lambda0)?;
        Self::custom(format!("constant({lambda0})"), move |_| lambda0)
    }

    pub fn at(&self, t: u64) -> f64 {
        (self.lambda)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl Default for AnnealSchedule {
    /// `λ(t) = ln(1 + t)`.
    fn default() -> Self {
        Self::custom("log(c=1)", |t| (t as f64).ln_1p()).expect("log schedule is monotone")
    }
}

/// State of the walk after step `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: u64,
    /// Inverse temperature used to reach this state (`λ(0)` for the start).
    pub lambda: f64,
    pub vertex: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOutcome {
    /// Best vertex visited; the earliest visit wins ties.
    pub best_vertex: usize,
    pub best_value: f64,
    /// `steps + 1` points, starting with the initial state.
    pub trace: Vec<TracePoint>,
}

/// Simulated annealing: step `t` (`t = 1..=steps`) is a hill-climb move at
/// `λ(t − 1)`.
pub fn simulated_annealing(
    obj: &ObjectiveOnGraph,
    schedule: &AnnealSchedule,
    steps: u64,
    x0: usize,
    rng: &mut RandomSource,
) -> Result<AnnealOutcome> {
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "annealing needs at least one step".into(),
        ));
    }
    obj.check_vertex(x0)?;
    let mut x = x0;
    let (mut best_vertex, mut best_value) = (x0, obj.f(x0));
    let mut trace = Vec::with_capacity(steps as usize + 1);
    trace.push(TracePoint {
        t: 0,
        lambda: schedule.at(0),
        vertex: x0,
        value: best_value,
    });
    for t in 1..=steps {
        let lambda = schedule.at(t - 1);
        let spec = hill_climb_spec(obj, lambda)?;
        x = metropolis_step(&spec, &x, rng);
        let value = obj.f(x);
        if value < best_value {
            best_value = value;
            best_vertex = x;
        }
        trace.push(TracePoint {
            t,
            lambda,
            vertex: x,
            value,
        });
    }
    Ok(AnnealOutcome {
        best_vertex,
        best_value,
        trace,
    })
}

/// Independent annealing runs, one per seed, in parallel.
pub fn anneal_restarts(
    obj: &ObjectiveOnGraph,
    schedule: &AnnealSchedule,
    steps: u64,
    x0: usize,
    seeds: &[u64],
) -> Result<Vec<AnnealOutcome>> {
    seeds
        .par_iter()
        .map(|&s| simulated_annealing(obj, schedule, steps, x0, &mut RandomSource::new(s)))
        .collect()
}
