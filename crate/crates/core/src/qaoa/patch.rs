//! Truncated regular-tree neighborhoods carrying exactly the terms that can
//! influence one `⟨Z_K⟩` on a graph of girth at least 7.
//!
//! A term of `O(L)`, `L ⊆ K`, must meet `K`. Edge terms meeting `K` have an
//! endpoint in `K`; ball (or pair) terms meeting `K` are centered within
//! distance 1 of `K`. So the patch grows the tree until every vertex within
//! distance 1 of `K` has full degree, which places leaves at distance 2.
//! Every patch edge gets weight `−1/2` and every full-degree vertex `w` gets
//! `+1/4·Z_{B(w)}` (d = 3) or `−1/4·Z_{w1 w2}` (d = 2).

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{LmcError, Result};
use crate::hamiltonian::DiagonalHamiltonian;
use crate::subset::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchKind {
    /// `K = {u, v}` for an edge.
    Edge,
    /// `K = {w1, w2}`, the two neighbors of a degree-2 vertex `w`.
    Pair,
    /// `K = B(u)` in a cubic graph.
    Ball,
}

impl fmt::Display for PatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatchKind::Edge => "edge",
            PatchKind::Pair => "pair",
            PatchKind::Ball => "ball",
        })
    }
}

impl FromStr for PatchKind {
    type Err = LmcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edge" => Ok(PatchKind::Edge),
            "pair" => Ok(PatchKind::Pair),
            "ball" => Ok(PatchKind::Ball),
            _ => Err(LmcError::InvalidParams(format!("unknown patch kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreePatch {
    pub hamiltonian: DiagonalHamiltonian,
    pub k: VertexSet,
    /// Human-readable name per vertex: core vertices use `u`, `v`, `w`,
    /// `w1`, ...; grown vertices append `.i` to their parent's name.
    pub labels: Vec<String>,
}

impl TreePatch {
    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

struct Builder {
    labels: Vec<String>,
    depth: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl Builder {
    fn add(&mut self, label: &str, depth: usize) -> usize {
        self.labels.push(label.to_string());
        self.depth.push(depth);
        self.adj.push(Vec::new());
        self.labels.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }
}

/// Build the patch for `(d, kind)`. Valid combinations are `(2, Edge)`,
/// `(2, Pair)`, `(3, Edge)` and `(3, Ball)`.
pub fn tree_patch(d: usize, kind: PatchKind) -> Result<TreePatch> {
    let mut b = Builder {
        labels: Vec::new(),
        depth: Vec::new(),
        adj: Vec::new(),
    };
    let k: Vec<usize> = match (d, kind) {
        (2, PatchKind::Edge) | (3, PatchKind::Edge) => {
            let u = b.add("u", 0);
            let v = b.add("v", 0);
            b.link(u, v);
            vec![u, v]
        }
        (2, PatchKind::Pair) => {
            let w1 = b.add("w1", 0);
            let w2 = b.add("w2", 0);
            let w = b.add("w", 1);
            b.link(w1, w);
            b.link(w, w2);
            vec![w1, w2]
        }
        (3, PatchKind::Ball) => {
            let u = b.add("u", 0);
            let mut k = vec![u];
            for i in 1..=3 {
                let ui = b.add(&format!("u{i}"), 0);
                b.link(u, ui);
                k.push(ui);
            }
            k
        }
        _ => {
            return Err(LmcError::InvalidParams(format!(
                "no tree patch for degree {d} and kind {kind}"
            )))
        }
    };

    let mut next = 0;
    while next < b.labels.len() {
        let x = next;
        next += 1;
        if b.depth[x] >= 2 {
            continue;
        }
        let missing = d - b.adj[x].len();
        for i in 1..=missing {
            let label = format!("{}.{i}", b.labels[x]);
            let c = b.add(&label, b.depth[x] + 1);
            b.link(x, c);
        }
    }

    let n = b.labels.len();
    let mut h = DiagonalHamiltonian::new(n)?;
    for x in 0..n {
        for &y in &b.adj[x] {
            if x < y {
                h.add_term(VertexSet::from_vertices([x, y]), -0.5)?;
            }
        }
        if b.adj[x].len() == d {
            let nbrs = VertexSet::from_vertices(b.adj[x].iter().copied());
            match d {
                3 => h.add_term(nbrs.union(VertexSet::singleton(x)), 0.25)?,
                _ => h.add_term(nbrs, -0.25)?,
            }
        }
    }
    Ok(TreePatch {
        hamiltonian: h,
        k: VertexSet::from_vertices(k),
        labels: b.labels,
    })
}
