//! Simple undirected graphs, the fixtures both algorithms run on.
//!
//! Neighbor lists are kept in ascending vertex order, so the ordered
//! neighborhood `B(v) = (v, v_1, ..., v_d)` is reproducible across runs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LmcError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on vertices `0..n`. Rejects self-loops, parallel edges
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(LmcError::VertexOutOfRange { vertex: a.max(b), n });
            }
            if a == b {
                return Err(LmcError::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(LmcError::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v` in ascending order. Panics if `v >= n`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// The common degree if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Returns the degree, or the first vertex that breaks regularity.
    pub fn require_regular(&self) -> Result<usize> {
        let Some(first) = self.adjacency.first() else {
            return Err(LmcError::InvalidGraph("empty graph".into()));
        };
        let d = first.len();
        match self.adjacency.iter().position(|a| a.len() != d) {
            None => Ok(d),
            Some(vertex) => Err(LmcError::NotRegular {
                vertex,
                degree: self.adjacency[vertex].len(),
                expected: d,
            }),
        }
    }

    /// `B(v)`: `v` followed by its neighbors in ascending order.
    pub fn neighborhood(&self, v: usize) -> Result<Vec<usize>> {
        if v >= self.n {
            return Err(LmcError::VertexOutOfRange { vertex: v, n: self.n });
        }
        let mut out = Vec::with_capacity(self.adjacency[v].len() + 1);
        out.push(v);
        out.extend_from_slice(&self.adjacency[v]);
        Ok(out)
    }

    /// Length of the shortest cycle, `None` for forests.
    ///
    /// BFS from every vertex; a non-tree edge `(x, w)` met from root `r`
    /// closes a closed walk of length `dist(x) + dist(w) + 1` through `r`,
    /// and the minimum over all roots is exactly the girth.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[x] >= b {
                        break;
                    }
                }
                for &w in &self.adjacency[x] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[x] + 1;
                        parent[w] = x;
                        queue.push_back(w);
                    } else if parent[x] != w {
                        let len = dist[x] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// One `u v` line per edge, sorted, trailing newline.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 8);
        for &(a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    /// Parses `u v` lines (0-based). Blank lines and `#` comments are
    /// skipped; the vertex count is one more than the largest id seen.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        let mut n = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| LmcError::EdgeList {
                line: line_no,
                reason,
            };
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(format!("expected two vertex ids, got `{line}`")));
            };
            let a: usize = a.parse().map_err(|_| err(format!("bad vertex id `{a}`")))?;
            let b: usize = b.parse().map_err(|_| err(format!("bad vertex id `{b}`")))?;
            if a == b {
                return Err(err(format!("self-loop at vertex {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(err(format!("duplicate edge {a}-{b}")));
            }
            n = n.max(a + 1).max(b + 1);
            edges.push((a, b));
        }
        Graph::from_edges(n, &edges)
    }
}

/// The cycle `C_n`, vertices joined `i -- i+1 (mod n)`.
pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(LmcError::InvalidGraph(format!(
            "a cycle needs at least 3 vertices, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Named cubic fixtures, stored as literal edge lists.
///
/// | name     | n  | edges | girth | labeling                                   |
/// |----------|----|-------|-------|--------------------------------------------|
/// | K4       | 4  | 6     | 3     | complete graph                             |
/// | CUBE     | 8  | 12    | 4     | `i ~ j` iff `i ^ j` is a power of two      |
/// | K33      | 6  | 9     | 4     | parts `{0,1,2}` and `{3,4,5}`              |
/// | PETERSEN | 10 | 15    | 5     | outer 5-cycle 0..4, spokes `i ~ i+5`, inner pentagram |
/// | HEAWOOD  | 14 | 21    | 6     | Hamiltonian cycle 0..13, LCF `[5,-5]^7`    |
/// | MCGEE    | 24 | 36    | 7     | Hamiltonian cycle 0..23, LCF `[12,7,-7]^8` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedGraph {
    K4,
    Cube,
    K33,
    Petersen,
    Heawood,
    McGee,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 6] = [
        NamedGraph::K4,
        NamedGraph::Cube,
        NamedGraph::K33,
        NamedGraph::Petersen,
        NamedGraph::Heawood,
        NamedGraph::McGee,
    ];

    fn data(self) -> (usize, &'static [(usize, usize)]) {
        match self {
            NamedGraph::K4 => (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            NamedGraph::Cube => (
                8,
                &[
                    (0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3),
                    (2, 6), (3, 7), (4, 5), (4, 6), (5, 7), (6, 7),
                ],
            ),
            NamedGraph::K33 => (
                6,
                &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
            ),
            NamedGraph::Petersen => (
                10,
                &[
                    (0, 1), (0, 4), (0, 5), (1, 2), (1, 6), (2, 3), (2, 7), (3, 4),
                    (3, 8), (4, 9), (5, 7), (5, 8), (6, 8), (6, 9), (7, 9),
                ],
            ),
            NamedGraph::Heawood => (
                14,
                &[
                    (0, 1), (0, 5), (0, 13), (1, 2), (1, 10), (2, 3), (2, 7),
                    (3, 4), (3, 12), (4, 5), (4, 9), (5, 6), (6, 7), (6, 11),
                    (7, 8), (8, 9), (8, 13), (9, 10), (10, 11), (11, 12), (12, 13),
                ],
            ),
            NamedGraph::McGee => (
                24,
                &[
                    (0, 1), (0, 12), (0, 23), (1, 2), (1, 8), (2, 3), (2, 19),
                    (3, 4), (3, 15), (4, 5), (4, 11), (5, 6), (5, 22), (6, 7),
                    (6, 18), (7, 8), (7, 14), (8, 9), (9, 10), (9, 21), (10, 11),
                    (10, 17), (11, 12), (12, 13), (13, 14), (13, 20), (14, 15),
                    (15, 16), (16, 17), (16, 23), (17, 18), (18, 19), (19, 20),
                    (20, 21), (21, 22), (22, 23),
                ],
            ),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedGraph::K4 => "k4",
            NamedGraph::Cube => "cube",
            NamedGraph::K33 => "k33",
            NamedGraph::Petersen => "petersen",
            NamedGraph::Heawood => "heawood",
            NamedGraph::McGee => "mcgee",
        }
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedGraph {
    type Err = LmcError;

    fn from_str(s: &str) -> Result<Self> {
        NamedGraph::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LmcError::UnknownGraph(s.to_string()))
    }
}

pub fn make_named(name: NamedGraph) -> Graph {
    let (n, edges) = name.data();
    Graph::from_edges(n, edges).expect("named graph literals are valid")
}

/// A random `d`-regular graph with girth at least `min_girth`.
///
/// Pairing (configuration) model: `n·d` half-edges are shuffled and matched
/// one at a time. A candidate partner is rejected when the new edge would be
/// a loop, a parallel edge, or close a cycle shorter than `min_girth`; an
/// attempt that runs out of candidates is discarded and restarted. The
/// output is a deterministic function of `(n, d, min_girth, seed)`.
pub fn make_random_regular(
    n: usize,
    d: usize,
    min_girth: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Graph> {
    if d < 2 {
        return Err(LmcError::InvalidParams(format!("degree must be >= 2, got {d}")));
    }
    if n <= d {
        return Err(LmcError::InvalidParams(format!(
            "a {d}-regular simple graph needs more than {d} vertices, got {n}"
        )));
    }
    if (n * d) % 2 != 0 {
        return Err(LmcError::InvalidParams(format!("n·d = {} is odd", n * d)));
    }
    const CANDIDATE_TRIES: usize = 64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut search = BoundedBfs::new(n);
    for _ in 0..max_attempts {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        stubs.shuffle(&mut rng);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut ok = true;
        while let Some(u) = stubs.pop() {
            let mut matched = false;
            for _ in 0..CANDIDATE_TRIES {
                let j = rng.gen_range(0..stubs.len());
                let v = stubs[j];
                if v == u || adjacency[u].contains(&v) {
                    continue;
                }
                if min_girth > 2 && search.within(&adjacency, u, v, min_girth - 2) {
                    continue;
                }
                stubs.swap_remove(j);
                adjacency[u].push(v);
                adjacency[v].push(u);
                edges.push((u, v));
                matched = true;
                break;
            }
            if !matched {
                ok = false;
                break;
            }
        }
        if ok {
            let g = Graph::from_edges(n, &edges)?;
            debug_assert_eq!(g.regular_degree(), Some(d));
            return Ok(g);
        }
    }
    Err(LmcError::GenerationFailed {
        n,
        d,
        min_girth,
        attempts: max_attempts,
    })
}

/// Reusable depth-limited BFS used by the generator's girth rejection.
struct BoundedBfs {
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<(usize, usize)>,
}

impl BoundedBfs {
    fn new(n: usize) -> Self {
        BoundedBfs {
            stamp: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
        }
    }

    /// True if `target` is at distance `<= radius` from `source`.
    fn within(&mut self, adjacency: &[Vec<usize>], source: usize, target: usize, radius: usize) -> bool {
        self.epoch += 1;
        let epoch = self.epoch;
        self.frontier.clear();
        self.frontier.push((source, 0));
        self.stamp[source] = epoch;
        let mut head = 0;
        while head < self.frontier.len() {
            let (x, dist) = self.frontier[head];
            head += 1;
            if x == target {
                return true;
            }
            if dist == radius {
                continue;
            }
            for &w in &adjacency[x] {
                if self.stamp[w] != epoch {
                    self.stamp[w] = epoch;
                    self.frontier.push((w, dist + 1));
                }
            }
        }
        false
    }
}
