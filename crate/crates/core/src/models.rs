//! Classical chains with special structure: the Pólya urn, the simple walk on
//! ℤ, the exclusion process on a cycle, the triangle random-graph model, the
//! uniform triangle region used as a Gibbs target, and cover times.

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::chain::{DistributionVector, TransitionMatrix};
use crate::graph::Graph;
use crate::samplers::RandomSource;
use crate::{Error, Result};

/// Largest exclusion-process state space that will be materialised.
pub const MAX_EXCLUSION_STATES: usize = 10_000;
/// Largest vertex count accepted by the exact triangle-model enumeration.
pub const MAX_TRIANGLE_VERTICES: usize = 7;

// ---------------------------------------------------------------- Pólya urn

/// Urn contents after `step` draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolyaState {
    pub black: u64,
    pub red: u64,
    pub step: u64,
}

impl PolyaState {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidParameter(format!(
                "urn needs at least one ball of each colour, got a={a}, b={b}"
            )));
        }
        Ok(PolyaState {
            black: a,
            red: b,
            step: 0,
        })
    }

    pub fn total(&self) -> u64 {
        self.black + self.red
    }

    /// Fraction of black balls.
    pub fn proportion(&self) -> f64 {
        self.black as f64 / self.total() as f64
    }
}

/// One draw: with probability `black/(black+red)` (unit draw `U` below that
/// value) a black ball is added, otherwise a red one.
pub fn polya_step(s: PolyaState, rng: &mut RandomSource) -> PolyaState {
    let draw_black = rng.unit() < s.proportion();
    PolyaState {
        black: s.black + draw_black as u64,
        red: s.red + (!draw_black) as u64,
        step: s.step + 1,
    }
}

/// Exact law of the black count after `n` draws, indexed by black count
/// (entries below `a` are zero, length `a + n + 1`).
pub fn polya_pmf_exact(a: u64, b: u64, n: u64) -> Result<DistributionVector> {
    PolyaState::new(a, b)?;
    let len = (a + n + 1) as usize;
    let mut pmf = vec![0.0; len];
    pmf[a as usize] = 1.0;
    for m in 0..n {
        let total = (m + a + b) as f64;
        let mut next = vec![0.0; len];
        for k in a as usize..=(a + m) as usize {
            let v = pmf[k];
            if v == 0.0 {
                continue;
            }
            let up = k as f64 / total;
            next[k] += v * (1.0 - up);
            next[k + 1] += v * up;
        }
        pmf = next;
    }
    Ok(DistributionVector::from_raw(pmf))
}

/// Empirical law of the black count after `n` draws over `trials`
/// independent urns, each with its own seed derived from `rng`.
pub fn polya_pmf_empirical(
    a: u64,
    b: u64,
    n: u64,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    let start = PolyaState::new(a, b)?;
    let finals: Vec<u64> = rng
        .split_n(trials)
        .into_par_iter()
        .map(|mut r| {
            let mut s = start;
            for _ in 0..n {
                s = polya_step(s, &mut r);
            }
            s.black
        })
        .collect();
    let mut counts = vec![0.0; (a + n + 1) as usize];
    for k in finals {
        counts[k as usize] += 1.0;
    }
    let t = trials.max(1) as f64;
    Ok(counts.into_iter().map(|c| c / t).collect())
}

// ------------------------------------------------------- simple walk on ℤ

/// `P(X_n = k)` for the simple symmetric walk on ℤ started at 0.
pub fn srw_z_pmf(n: u64, k: i64) -> f64 {
    let dist = k.unsigned_abs();
    if dist > n || !(n + dist).is_multiple_of(2) {
        return 0.0;
    }
    let r = (n + dist) / 2;
    if n <= 50 {
        let mut c = 1.0f64;
        for i in 0..r.min(n - r) {
            c = c * (n - i) as f64 / (i + 1) as f64;
        }
        c / 2f64.powi(n as i32)
    } else {
        let nf = n as f64;
        (ln_gamma(nf + 1.0)
            - ln_gamma(r as f64 + 1.0)
            - ln_gamma((n - r) as f64 + 1.0)
            - nf * std::f64::consts::LN_2)
            .exp()
    }
}

// -------------------------------------------------------- exclusion process

/// Particle configuration on the `n`-cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExclusionState {
    occupancy: Vec<bool>,
}

impl ExclusionState {
    pub fn new(occupancy: Vec<bool>, k: usize) -> Result<Self> {
        let ones = occupancy.iter().filter(|&&b| b).count();
        if ones != k {
            return Err(Error::InvalidParameter(format!(
                "expected {k} particles, found {ones}"
            )));
        }
        Ok(ExclusionState { occupancy })
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    fn from_mask(mask: u64, n: usize) -> Self {
        ExclusionState {
            occupancy: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }
}

/// Direction a chosen particle tries to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// Site `i` to `i − 1 (mod n)`.
    CounterClockwise,
    /// Site `i` to `i + 1 (mod n)`.
    Clockwise,
}

fn choose(n: usize, k: usize) -> Option<usize> {
    let mut c: usize = 1;
    for i in 0..k.min(n - k) {
        c = c.checked_mul(n - i)? / (i + 1);
    }
    Some(c)
}

fn exclusion_masks(n: usize, k: usize) -> Result<Vec<u64>> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::SizeTooSmall(format!(
            "exclusion process needs 1 <= k < n, got n={n}, k={k}"
        )));
    }
    let count = if n < 64 { choose(n, k) } else { None };
    match count {
        Some(c) if c <= MAX_EXCLUSION_STATES => {}
        Some(c) => return Err(Error::StateSpaceTooLarge(c)),
        None => return Err(Error::StateSpaceTooLarge(usize::MAX)),
    }
    Ok((0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .collect())
}

/// States of the exclusion chain in the order used by [`exclusion_chain`]:
/// increasing value of the bit mask whose bit `i` marks site `i`.
pub fn exclusion_states(n: usize, k: usize) -> Result<Vec<ExclusionState>> {
    Ok(exclusion_masks(n, k)?
        .into_iter()
        .map(|m| ExclusionState::from_mask(m, n))
        .collect())
}

/// `k` particles on the `n`-cycle: pick a particle uniformly and move it one
/// site counter-clockwise, or leave it if the target site is occupied.
pub fn exclusion_chain(n: usize, k: usize) -> Result<TransitionMatrix> {
    exclusion_chain_directed(n, k, Rotation::CounterClockwise)
}

pub fn exclusion_chain_directed(n: usize, k: usize, dir: Rotation) -> Result<TransitionMatrix> {
    let masks = exclusion_masks(n, k)?;
    let size = masks.len();
    let index: std::collections::HashMap<u64, usize> =
        masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let w = 1.0 / k as f64;
    let mut data = vec![0.0; size * size];
    for (from, &m) in masks.iter().enumerate() {
        for site in (0..n).filter(|&i| m >> i & 1 == 1) {
            let target = match dir {
                Rotation::CounterClockwise => (site + n - 1) % n,
                Rotation::Clockwise => (site + 1) % n,
            };
            let to = if m >> target & 1 == 1 {
                from
            } else {
                index[&(m & !(1 << site) | 1 << target)]
            };
            data[from * size + to] += w;
        }
    }
    TransitionMatrix::from_data(size, data)
}

// ------------------------------------------------------ triangle model

/// Number of triangles in `g`, by enumerating vertex triples.
pub fn triangle_count(g: &Graph) -> usize {
    let n = g.n_vertices();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn common_neighbours(g: &Graph, u: usize, v: usize) -> usize {
    (0..g.n_vertices())
        .filter(|&w| w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w))
        .count()
}

/// `π_β(G′)/π_β(G) = exp(β (Δ(G′) − Δ(G)))` where `G′` is `g` with `edge`
/// toggled and `π_β(G) ∝ e^{βΔ(G)}`.
pub fn triangle_gibbs_ratio(g: &Graph, edge: (usize, usize), beta: f64) -> Result<f64> {
    let (u, v) = edge;
    let n = g.n_vertices();
    if u >= n || v >= n || u == v {
        return Err(Error::InvalidEdge(u, v));
    }
    let delta = common_neighbours(g, u, v) as f64;
    let sign = if g.has_edge(u, v) { -1.0 } else { 1.0 };
    Ok((beta * sign * delta).exp())
}

/// Metropolis edge-toggle step for the triangle model: one draw picks a
/// vertex pair uniformly, a second decides acceptance.
pub fn triangle_metropolis_step(g: &Graph, beta: f64, rng: &mut RandomSource) -> Result<Graph> {
    let n = g.n_vertices();
    if n < 2 {
        return Err(Error::SizeTooSmall(
            "triangle model needs at least two vertices".into(),
        ));
    }
    let pair = rng.index(n * (n - 1) / 2);
    let (u, v) = pair_from_index(n, pair);
    let a = triangle_gibbs_ratio(g, (u, v), beta)?.min(1.0);
    if rng.unit() < a {
        g.with_edge_toggled(u, v)
    } else {
        Ok(g.clone())
    }
}

/// The `idx`-th pair `u < v` in lexicographic order.
fn pair_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    for u in 0..n {
        let row = n - 1 - u;
        if idx < row {
            return (u, u + 1 + idx);
        }
        idx -= row;
    }
    unreachable!("pair index out of range")
}

/// Exact `E_π(Δ)` under `π_β(G) ∝ e^{βΔ(G)}` over all simple graphs on `n`
/// labelled vertices.
pub fn triangle_exact_mean(n: usize, beta: f64) -> Result<f64> {
    if !(2..=MAX_TRIANGLE_VERTICES).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "exact enumeration supports 2..={MAX_TRIANGLE_VERTICES} vertices, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    let (mut z, mut first) = (0.0, 0.0);
    let mut adj = vec![0u32; n];
    for mask in 0u32..1 << m {
        adj.iter_mut().for_each(|a| *a = 0);
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let mut tri = 0u32;
        for &(u, v) in &pairs {
            if adj[u] >> v & 1 == 1 {
                // count w > v adjacent to both
                tri += (adj[u] & adj[v] & !((2u32 << v) - 1)).count_ones();
            }
        }
        let w = (beta * tri as f64).exp();
        z += w;
        first += w * tri as f64;
    }
    Ok(first / z)
}

// ---------------------------------------------------- triangle region S_N

/// Lattice points `(m, k)` with `m, k ≥ 1` and `m + k ≤ N`, ordered by `m`
/// then `k`.
pub fn triangle_region(n: usize) -> Result<Vec<Vec<usize>>> {
    if n < 2 {
        return Err(Error::SizeTooSmall(format!("region needs N >= 2, got {n}")));
    }
    Ok((1..n)
        .flat_map(|m| (1..=n - m).map(move |k| vec![m, k]))
        .collect())
}

/// Full conditionals of the uniform law on the region: coordinate `i` given
/// the other coordinate `j` is uniform on `{1, …, N − j}`.
pub fn triangle_region_conditional(n: usize, i: usize, s: &[usize]) -> Vec<(usize, f64)> {
    let other = s[1 - i];
    let top = n - other;
    (1..=top).map(|v| (v, 1.0 / top as f64)).collect()
}

/// Sampler form of [`triangle_region_conditional`] for use with
/// [`crate::samplers::gibbs_sweep`]; one draw per call.
pub fn triangle_region_sampler(
    n: usize,
    i: usize,
) -> impl Fn(&[usize], &mut RandomSource) -> usize {
    move |s, rng| 1 + rng.index(n - s[1 - i])
}

// --------------------------------------------------------------- cover time

/// One cover run of the simple random walk: the number of steps until every
/// vertex has been visited, and the last vertex to be reached.
pub fn cover_run(g: &Graph, x0: usize, rng: &mut RandomSource) -> Result<(u64, usize)> {
    let n = g.n_vertices();
    if x0 >= n {
        return Err(Error::StateOutOfRange { state: x0, n });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut seen = vec![false; n];
    seen[x0] = true;
    let (mut remaining, mut x, mut t, mut last) = (n - 1, x0, 0u64, x0);
    while remaining > 0 {
        let nb = g.neighbors(x);
        x = nb[rng.index(nb.len())];
        t += 1;
        if !seen[x] {
            seen[x] = true;
            remaining -= 1;
            last = x;
        }
    }
    Ok((t, last))
}

fn cover_runs(
    g: &Graph,
    x0: usize,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<Vec<(u64, usize)>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    cover_run(g, x0, &mut rng.clone())?;
    rng.split_n(trials)
        .into_par_iter()
        .map(|mut r| cover_run(g, x0, &mut r))
        .collect()
}

/// Monte-Carlo mean cover time from `x0`.
pub fn cover_time_mean(g: &Graph, x0: usize, trials: usize, rng: &mut RandomSource) -> Result<f64> {
    let runs = cover_runs(g, x0, trials, rng)?;
    Ok(runs.iter().map(|&(t, _)| t as f64).sum::<f64>() / trials as f64)
}

/// Monte-Carlo law of the last vertex to be visited.
pub fn last_vertex_pmf(
    g: &Graph,
    x0: usize,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    let runs = cover_runs(g, x0, trials, rng)?;
    let mut pmf = vec![0.0; g.n_vertices()];
    for (_, last) in runs {
        pmf[last] += 1.0 / trials as f64;
    }
    Ok(pmf)
}
