//! Finite simple digraphs and the dipath / dicycle witnesses that live in them.
//!
//! Vertices carry arbitrary non-negative ids. Internally every vertex also has
//! a dense index, assigned in increasing id order, so "lowest index" and
//! "lowest id" always coincide. All tie-breaking in this crate relies on that.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::Rejection;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

/// Finite simple digraph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Digraph {
    /// Builds a digraph from an explicit vertex set and edge list.
    ///
    /// Every edge endpoint must be declared. Loops and repeated edges are
    /// rejected rather than silently dropped.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let set: BTreeSet<VertexId> = vertices.into_iter().collect();
        let ids: Vec<VertexId> = set.into_iter().collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out_adj = vec![Vec::new(); ids.len()];
        let mut in_adj = vec![Vec::new(); ids.len()];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u == v {
                return Err(Error::Loop(u));
            }
            let ui = *index.get(&u).ok_or(Error::UnknownVertex(u))?;
            let vi = *index.get(&v).ok_or(Error::UnknownVertex(v))?;
            out_adj[ui].push(vi);
            in_adj[vi].push(ui);
            edge_count += 1;
        }
        for (ui, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::ParallelEdge(ids[ui], ids[w[0]]));
            }
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Digraph { ids, index, out_adj, in_adj, edge_count })
    }

    /// Builds a digraph whose vertex set is exactly the set of edge endpoints.
    pub fn from_edges<E>(edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let vertices: Vec<VertexId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        Digraph::new(vertices, edges)
    }

    /// Convenience constructor over raw `u32` ids, mostly for tests.
    pub fn from_pairs(vertices: &[u32], edges: &[(u32, u32)]) -> Result<Self> {
        Digraph::new(
            vertices.iter().copied().chain(edges.iter().flat_map(|&(u, v)| [u, v])).map(VertexId),
            edges.iter().map(|&(u, v)| (VertexId(u), VertexId(v))),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ids.iter().copied()
    }

    /// Edges in lexicographic (tail, head) order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_adj.iter().enumerate().flat_map(move |(u, list)| list.iter().map(move |&v| (self.ids[u], self.ids[v])))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match (self.index.get(&u), self.index.get(&v)) {
            (Some(&ui), Some(&vi)) => self.out_adj[ui].binary_search(&vi).is_ok(),
            _ => false,
        }
    }

    pub fn out_neighbors(&self, v: VertexId) -> Result<impl Iterator<Item = VertexId> + '_> {
        let i = self.require(v)?;
        Ok(self.out_adj[i].iter().map(move |&w| self.ids[w]))
    }

    pub fn in_neighbors(&self, v: VertexId) -> Result<impl Iterator<Item = VertexId> + '_> {
        let i = self.require(v)?;
        Ok(self.in_adj[i].iter().map(move |&w| self.ids[w]))
    }

    pub fn out_degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.out_adj[self.require(v)?].len())
    }

    pub fn in_degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.in_adj[self.require(v)?].len())
    }

    /// Subdigraph induced by `keep` (ids not in the digraph are ignored).
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Digraph {
        let vertices: Vec<VertexId> = self.vertices().filter(|v| keep.contains(v)).collect();
        let edges: Vec<_> = self.edges().filter(|(u, v)| keep.contains(u) && keep.contains(v)).collect();
        Digraph::new(vertices, edges).expect("induced subdigraph of a simple digraph is simple")
    }

    pub(crate) fn require(&self, v: VertexId) -> Result<usize> {
        self.index.get(&v).copied().ok_or(Error::UnknownVertex(v))
    }

    pub(crate) fn idx(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub(crate) fn id(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub(crate) fn out_idx(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    pub(crate) fn in_idx(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    pub(crate) fn has_edge_idx(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }
}

/// A vertex-simple directed path, stored as its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dipath(Vec<VertexId>);

impl Dipath {
    /// Wraps a vertex sequence. Only non-emptiness is enforced here; use
    /// [`Dipath::check`] to validate against a digraph.
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter("a dipath needs at least one vertex".into()));
        }
        Ok(Dipath(vertices))
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        assert!(!ids.is_empty(), "a dipath needs at least one vertex");
        Dipath(ids.iter().copied().map(VertexId).collect())
    }

    pub(crate) fn from_vec(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        Dipath(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    pub fn first(&self) -> VertexId {
        self.0[0]
    }

    pub fn last(&self) -> VertexId {
        self.0[self.0.len() - 1]
    }

    /// Vertices strictly between the endpoints.
    pub fn interior(&self) -> &[VertexId] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn into_vertices(self) -> Vec<VertexId> {
        self.0
    }

    /// Distinct vertices and every consecutive pair an edge of `d`.
    pub fn check(&self, d: &Digraph) -> std::result::Result<(), Rejection> {
        check_distinct_in(d, &self.0)?;
        for w in self.0.windows(2) {
            if !d.has_edge(w[0], w[1]) {
                return Err(Rejection::MissingEdge { tail: w[0], head: w[1] });
            }
        }
        Ok(())
    }
}

/// A vertex-simple directed cycle; the closing edge `last -> first` is implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dicycle(Vec<VertexId>);

impl Dicycle {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidParameter("a dicycle needs at least two vertices".into()));
        }
        Ok(Dicycle(vertices))
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        assert!(ids.len() >= 2, "a dicycle needs at least two vertices");
        Dicycle(ids.iter().copied().map(VertexId).collect())
    }

    pub(crate) fn from_vec(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.len() >= 2);
        Dicycle(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of vertices, which equals the number of edges.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, d: &Digraph) -> std::result::Result<(), Rejection> {
        if self.0.len() < 2 {
            return Err(Rejection::TooFewVertices { found: self.0.len() });
        }
        check_distinct_in(d, &self.0)?;
        for w in self.0.windows(2) {
            if !d.has_edge(w[0], w[1]) {
                return Err(Rejection::MissingEdge { tail: w[0], head: w[1] });
            }
        }
        let (first, last) = (self.0[0], self.0[self.0.len() - 1]);
        if !d.has_edge(last, first) {
            return Err(Rejection::MissingClosingEdge { tail: last, head: first });
        }
        Ok(())
    }
}

fn check_distinct_in(d: &Digraph, vertices: &[VertexId]) -> std::result::Result<(), Rejection> {
    let mut seen = BTreeSet::new();
    for &v in vertices {
        if !d.contains(v) {
            return Err(Rejection::UnknownVertex(v));
        }
        if !seen.insert(v) {
            return Err(Rejection::RepeatedVertex(v));
        }
    }
    Ok(())
}
