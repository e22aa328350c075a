//! Vertex-disjoint dipath systems and minimum vertex separators.
//!
//! Vertex capacities are modelled by splitting every vertex `v` into
//! `v_in -> v_out` with capacity one; digraph edges and the arcs leaving the
//! virtual super-source get unbounded capacity, so every finite cut consists
//! of split arcs and reads off directly as a vertex separator. Augmenting
//! paths are found breadth-first over arcs inserted in id order, which makes
//! the whole computation deterministic.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Dipath, VertexId};
use crate::search::index_mask;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointPathResult {
    /// Paths ordered by their first vertex.
    pub paths: Vec<Dipath>,
    /// A minimum separator matching `paths` (Menger duality).
    pub separator: BTreeSet<VertexId>,
    /// Set by [`max_internally_disjoint`] when the edge `x -> y` exists. The
    /// direct edge is then the first path and no separator can cut it, so
    /// `separator` refers to the instance without that edge.
    pub direct_edge: bool,
}

/// Maximum family of dipaths from distinct `sources` to `sink`, pairwise
/// disjoint except at `sink` and avoiding `excluded`, plus a minimum vertex
/// set outside `excluded ∪ {sink}` that meets every source-sink dipath of
/// `D - excluded`.
pub fn max_disjoint_paths(
    d: &Digraph,
    sources: &BTreeSet<VertexId>,
    sink: VertexId,
    excluded: &BTreeSet<VertexId>,
) -> Result<DisjointPathResult> {
    if sources.is_empty() {
        return Err(Error::Precondition("source set is empty".into()));
    }
    let t = d.require(sink)?;
    let mut src = Vec::with_capacity(sources.len());
    for &s in sources {
        src.push(d.require(s)?);
    }
    for &x in excluded {
        d.require(x)?;
    }
    if sources.contains(&sink) {
        return Err(Error::Precondition(format!("sink {sink} is also a source")));
    }
    if let Some(x) = excluded.iter().find(|x| sources.contains(x) || **x == sink) {
        return Err(Error::Precondition(format!("excluded vertex {x} is a terminal")));
    }
    let blocked = index_mask(d, excluded);
    let alive: Vec<bool> = blocked.iter().map(|b| !b).collect();
    let out = disjoint_paths_idx(d, &alive, &src, t);
    Ok(DisjointPathResult {
        paths: out.paths.iter().map(|p| crate::search::to_dipath(d, p)).collect(),
        separator: out.separator.into_iter().map(|i| d.id(i)).collect(),
        direct_edge: false,
    })
}

/// Maximum family of internally disjoint `x`-`y` dipaths.
pub fn max_internally_disjoint(d: &Digraph, x: VertexId, y: VertexId) -> Result<DisjointPathResult> {
    let (xi, yi) = (d.require(x)?, d.require(y)?);
    if x == y {
        return Err(Error::InvalidParameter(
            "x = y asks for dicycles through x, not internally disjoint dipaths".into(),
        ));
    }
    let direct_edge = d.has_edge_idx(xi, yi);
    let sources: Vec<usize> = d.out_idx(xi).iter().copied().filter(|&w| w != yi).collect();
    let mut alive = vec![true; d.vertex_count()];
    alive[xi] = false;
    let out = disjoint_paths_idx(d, &alive, &sources, yi);
    let mut paths = Vec::with_capacity(out.paths.len() + 1);
    if direct_edge {
        paths.push(Dipath::from_vec(vec![x, y]));
    }
    for p in &out.paths {
        let mut verts = vec![x];
        verts.extend(p.iter().map(|&i| d.id(i)));
        paths.push(Dipath::from_vec(verts));
    }
    Ok(DisjointPathResult { paths, separator: out.separator.into_iter().map(|i| d.id(i)).collect(), direct_edge })
}

pub(crate) struct FlowOutcome {
    pub paths: Vec<Vec<usize>>,
    pub separator: Vec<usize>,
}

const UNBOUNDED: u32 = u32::MAX / 2;

struct Arc {
    to: usize,
    cap: u32,
    flow_cap: u32,
    rev: usize,
    edge: bool,
}

struct Network {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network { arcs: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: u32, edge: bool) {
        let a = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow_cap: cap, rev: a + 1, edge });
        self.arcs.push(Arc { to: from, cap: 0, flow_cap: 0, rev: a, edge: false });
        self.adj[from].push(a);
        self.adj[to].push(a + 1);
    }

    fn flow(&self, a: usize) -> u32 {
        self.arcs[a].flow_cap - self.arcs[a].cap
    }

    /// Residual reachability from `s`, with the arc used to enter each node.
    fn residual_bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut via = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    via[arc.to] = Some(a);
                    queue.push_back(arc.to);
                }
            }
        }
        via[s] = Some(usize::MAX);
        via
    }
}

/// Disjoint paths over `alive` vertices; `sink` must be alive and not a
/// source. Paths are returned as index sequences ending in `sink`.
pub(crate) fn disjoint_paths_idx(d: &Digraph, alive: &[bool], sources: &[usize], sink: usize) -> FlowOutcome {
    let n = d.vertex_count();
    let (vin, vout) = (|v: usize| 2 * v, |v: usize| 2 * v + 1);
    let super_source = 2 * n;
    let mut net = Network::new(2 * n + 1);
    for v in (0..n).filter(|&v| alive[v] && v != sink) {
        net.add(vin(v), vout(v), 1, false);
    }
    for u in 0..n {
        if !alive[u] || u == sink {
            continue;
        }
        for &w in d.out_idx(u) {
            if alive[w] {
                net.add(vout(u), vin(w), UNBOUNDED, true);
            }
        }
    }
    let mut srcs: Vec<usize> = sources.iter().copied().filter(|&s| alive[s] && s != sink).collect();
    srcs.sort_unstable();
    srcs.dedup();
    for &s in &srcs {
        net.add(super_source, vin(s), UNBOUNDED, false);
    }
    let target = vin(sink);
    let mut value = 0usize;
    loop {
        let via = net.residual_bfs(super_source);
        if via[target].is_none() {
            break;
        }
        let mut node = target;
        while node != super_source {
            let a = via[node].unwrap();
            net.arcs[a].cap -= 1;
            let r = net.arcs[a].rev;
            net.arcs[r].cap += 1;
            node = net.arcs[r].to;
        }
        value += 1;
    }

    let mut paths = Vec::with_capacity(value);
    for &a in &net.adj[super_source] {
        if net.flow(a) == 0 {
            continue;
        }
        let mut node = net.arcs[a].to;
        let mut path = vec![node / 2];
        while node != target {
            // node is some v_in with one unit through it; hop to v_out, then
            // along the unique edge arc carrying flow.
            let split = net.adj[node]
                .iter()
                .copied()
                .find(|&b| net.arcs[b].to == node + 1 && net.arcs[b].flow_cap == 1)
                .expect("split arc");
            debug_assert_eq!(net.flow(split), 1);
            let out_node = node + 1;
            let next = net.adj[out_node]
                .iter()
                .copied()
                .find(|&b| net.arcs[b].edge && net.flow(b) > 0)
                .expect("flow leaves every saturated split arc");
            node = net.arcs[next].to;
            path.push(node / 2);
        }
        paths.push(path);
    }
    paths.sort();

    let via = net.residual_bfs(super_source);
    let separator =
        (0..n).filter(|&v| alive[v] && v != sink && via[vin(v)].is_some() && via[vout(v)].is_none()).collect();
    FlowOutcome { paths, separator }
}
