//! Undirected graphs on `0..n` on which random walks are built.

use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::samplers::RandomSource;
use crate::{Error, Result};

/// The named graph families understood by [`Graph::generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// Dimension of the hypercube `{0,1}^N`.
    Hypercube(u32),
    /// Number of leaves around vertex 0.
    Star(usize),
}

/// An undirected graph. Edges are stored as sorted pairs `(u, v)` with
/// `u <= v`; a pair `(u, u)` is a loop and adds one to the degree of `u`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: OnceLock<Vec<Vec<usize>>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// Wire format: `{"vertices": n, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Self> {
        Graph::new(raw.vertices, raw.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            vertices: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Builds a graph, rejecting out-of-range endpoints and repeated edges.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v));
            }
            if !set.insert(ordered(u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        Ok(Self::from_set(n, set))
    }

    fn from_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        Graph {
            n,
            edges,
            adjacency: OnceLock::new(),
        }
    }

    pub fn generate(kind: GraphKind) -> Result<Self> {
        match kind {
            GraphKind::Cycle(n) => Self::cycle(n),
            GraphKind::Path(n) => Self::path(n),
            GraphKind::Complete(n) => Self::complete(n),
            GraphKind::CompleteBipartite(a, b) => Self::complete_bipartite(a, b),
            GraphKind::Hypercube(d) => Self::hypercube(d),
            GraphKind::Star(leaves) => Self::star(leaves),
        }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::SizeTooSmall(format!("cycle needs n >= 3, got {n}")));
        }
        Ok(Self::from_set(
            n,
            (0..n).map(|i| ordered(i, (i + 1) % n)).collect(),
        ))
    }

    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::SizeTooSmall(format!("path needs n >= 2, got {n}")));
        }
        Ok(Self::from_set(n, (0..n - 1).map(|i| (i, i + 1)).collect()))
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::SizeTooSmall("complete graph needs n >= 1".into()));
        }
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Ok(Self::from_set(n, edges))
    }

    /// Parts `0..a` and `a..a+b`, with every cross pair joined.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        if a < 1 || b < 1 {
            return Err(Error::SizeTooSmall(format!(
                "complete bipartite needs both parts nonempty, got ({a}, {b})"
            )));
        }
        let edges = (0..a)
            .flat_map(|i| (a..a + b).map(move |j| (i, j)))
            .collect();
        Ok(Self::from_set(a + b, edges))
    }

    /// Vertex `i` has the binary digits of `i` as coordinates; neighbours
    /// differ in exactly one bit.
    pub fn hypercube(dim: u32) -> Result<Self> {
        if dim < 1 {
            return Err(Error::SizeTooSmall("hypercube needs dimension >= 1".into()));
        }
        if dim > 20 {
            return Err(Error::StateSpaceTooLarge(1 << dim.min(63)));
        }
        let n = 1usize << dim;
        let edges = (0..n)
            .flat_map(|i| (0..dim).map(move |b| (i, i ^ (1 << b))))
            .filter(|&(i, j)| i < j)
            .collect();
        Ok(Self::from_set(n, edges))
    }

    /// Centre 0 joined to leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Result<Self> {
        if leaves < 1 {
            return Err(Error::SizeTooSmall("star needs at least one leaf".into()));
        }
        Ok(Self::from_set(
            leaves + 1,
            (1..=leaves).map(|j| (0, j)).collect(),
        ))
    }

    /// G(n, p): each pair `i < j`, in lexicographic order, consumes one unit
    /// draw `U` and is kept when `U < p`.
    pub fn erdos_renyi(n: usize, p: f64, rng: &mut RandomSource) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if n < 1 {
            return Err(Error::SizeTooSmall("G(n, p) needs n >= 1".into()));
        }
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.unit() < p {
                    edges.insert((i, j));
                }
            }
        }
        Ok(Self::from_set(n, edges))
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&ordered(u, v))
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// Sorted neighbour list; a loop lists the vertex itself once.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency()[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    fn adjacency(&self) -> &Vec<Vec<usize>> {
        self.adjacency.get_or_init(|| {
            let mut adj = vec![Vec::new(); self.n];
            for &(u, v) in &self.edges {
                adj[u].push(v);
                if u != v {
                    adj[v].push(u);
                }
            }
            for list in &mut adj {
                list.sort_unstable();
            }
            adj
        })
    }

    /// True iff every vertex is reachable from vertex 0. The empty graph and
    /// a single vertex both count as connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Copy of this graph with the edge `{u, v}` added if absent, removed if present.
    pub fn with_edge_toggled(&self, u: usize, v: usize) -> Result<Self> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidEdge(u, v));
        }
        let mut edges = self.edges.clone();
        let e = ordered(u, v);
        if !edges.remove(&e) {
            edges.insert(e);
        }
        Ok(Self::from_set(self.n, edges))
    }
}
