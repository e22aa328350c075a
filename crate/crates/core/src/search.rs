//! Reachability, BFS layering and the constrained shortest-path primitives
//! every extractor is built from.
//!
//! Path searches break ties toward the lexicographically smallest vertex-id
//! sequence: a reverse search from the target yields exact distances, then a
//! forward greedy walk always steps to the smallest-id neighbour that stays on
//! an optimal route. Because every edge has positive weight in the ordering
//! used, the walk strictly decreases the remaining distance and cannot loop.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Dipath, VertexId};

/// Breadth-first layering from a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsLayering {
    pub root: VertexId,
    /// `layers[i]` holds the vertices at distance exactly `i`, sorted by id.
    pub layers: Vec<Vec<VertexId>>,
    /// BFS-tree parent of every reached vertex other than the root: the
    /// lowest-id in-neighbour in the previous layer.
    pub parent: BTreeMap<VertexId, VertexId>,
}

impl BfsLayering {
    /// Largest distance from the root to a reached vertex.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn reached(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// The tree path from the root to `v`, which is a shortest dipath.
    pub fn path_to(&self, v: VertexId) -> Option<Dipath> {
        let mut rev = vec![v];
        let mut cur = v;
        while cur != self.root {
            cur = *self.parent.get(&cur)?;
            rev.push(cur);
        }
        rev.reverse();
        Some(Dipath::from_vec(rev))
    }
}

pub fn is_strong(d: &Digraph) -> bool {
    let n = d.vertex_count();
    if n <= 1 {
        return true;
    }
    fn reaches_all<'a>(n: usize, adj: impl Fn(usize) -> &'a [usize]) -> bool {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in adj(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
    reaches_all(n, |u| d.out_idx(u)) && reaches_all(n, |u| d.in_idx(u))
}

/// Strongly connected components, each sorted by id, ordered by smallest id.
pub fn strong_components(d: &Digraph) -> Vec<Vec<VertexId>> {
    let n = d.vertex_count();
    // Kosaraju: finishing order on D, then sweep the reverse digraph.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if let Some(&w) = d.out_idx(u).get(*next) {
                *next += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(u);
                stack.pop();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in d.in_idx(u) {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    let mut groups = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        groups[c].push(d.id(v));
    }
    groups.sort();
    groups
}

pub fn bfs_layers(d: &Digraph, root: VertexId) -> Result<BfsLayering> {
    let r = d.require(root)?;
    let (layers, parent) = bfs_idx(d, r, |_| true);
    Ok(BfsLayering {
        root,
        layers: layers.into_iter().map(|l| l.into_iter().map(|i| d.id(i)).collect()).collect(),
        parent: parent.into_iter().enumerate().filter_map(|(v, p)| p.map(|p| (d.id(v), d.id(p)))).collect(),
    })
}

/// Layered BFS over the vertices accepted by `alive`. Layers are sorted, and
/// each layer is expanded in increasing index order, so the first discoverer
/// of a vertex is its lowest-index in-neighbour in the previous layer.
pub(crate) fn bfs_idx(
    d: &Digraph,
    root: usize,
    alive: impl Fn(usize) -> bool,
) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
    let n = d.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut layers = vec![vec![root]];
    loop {
        let mut next = Vec::new();
        for &u in layers.last().unwrap() {
            for &w in d.out_idx(u) {
                if !seen[w] && alive(w) {
                    seen[w] = true;
                    parent[w] = Some(u);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next);
    }
    (layers, parent)
}

fn check_ids(d: &Digraph, ids: impl IntoIterator<Item = VertexId>) -> Result<()> {
    for v in ids {
        d.require(v)?;
    }
    Ok(())
}

pub fn shortest_dipath(
    d: &Digraph,
    s: VertexId,
    t: VertexId,
    forbidden_interior: &BTreeSet<VertexId>,
) -> Result<Option<Dipath>> {
    let (si, ti) = (d.require(s)?, d.require(t)?);
    let blocked = index_mask(d, forbidden_interior);
    let path = shortest_path_idx(d, si, ti, |u| !blocked[u]);
    Ok(path.map(|p| to_dipath(d, &p)))
}

/// Minimum-edge-count `s`-`t` path whose interior stays in `interior_ok`,
/// lexicographically smallest among those.
pub(crate) fn shortest_path_idx(
    d: &Digraph,
    s: usize,
    t: usize,
    interior_ok: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    if s == t {
        return Some(vec![s]);
    }
    let n = d.vertex_count();
    let passable = |u: usize| u != s && u != t && interior_ok(u);
    let mut dist = vec![usize::MAX; n];
    dist[t] = 0;
    let mut queue = VecDeque::from([t]);
    while let Some(w) = queue.pop_front() {
        for &u in d.in_idx(w) {
            if dist[u] != usize::MAX {
                continue;
            }
            if u == s {
                dist[u] = dist[w] + 1;
            } else if passable(u) {
                dist[u] = dist[w] + 1;
                queue.push_back(u);
            }
        }
    }
    if dist[s] == usize::MAX {
        return None;
    }
    let mut path = vec![s];
    let mut cur = s;
    while cur != t {
        let next = d
            .out_idx(cur)
            .iter()
            .copied()
            .find(|&w| dist[w] != usize::MAX && dist[w] + 1 == dist[cur] && (w == t || passable(w)))
            .expect("distance labels admit a greedy descent");
        path.push(next);
        cur = next;
    }
    Some(path)
}

/// Result of [`min_exterior_cost_dipath`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostedDipath {
    pub path: Dipath,
    pub target: VertexId,
    /// Number of path edges not in the free edge set.
    pub exterior_cost: usize,
}

/// Among dipaths from `s` whose interior avoids `forbidden_interior`, picks
/// the first target of `targets` (caller priority order) that any such
/// dipath reaches; for that target minimises the number of edges outside
/// `free_edges`, then the length, then the vertex sequence.
pub fn min_exterior_cost_dipath(
    d: &Digraph,
    s: VertexId,
    targets: &[VertexId],
    forbidden_interior: &BTreeSet<VertexId>,
    free_edges: &BTreeSet<(VertexId, VertexId)>,
) -> Result<Option<CostedDipath>> {
    let si = d.require(s)?;
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    check_ids(d, targets.iter().copied())?;
    let blocked = index_mask(d, forbidden_interior);
    let target_idx: Vec<usize> = targets.iter().map(|&t| d.idx(t).unwrap()).collect();
    let free = |u: usize, w: usize| free_edges.contains(&(d.id(u), d.id(w)));
    Ok(min_cost_to_first_target(d, si, &target_idx, |u| !blocked[u], free).map(|(path, target, cost)| CostedDipath {
        path: to_dipath(d, &path),
        target: d.id(target),
        exterior_cost: cost,
    }))
}

pub(crate) fn min_cost_to_first_target(
    d: &Digraph,
    s: usize,
    targets: &[usize],
    interior_ok: impl Fn(usize) -> bool,
    free: impl Fn(usize, usize) -> bool,
) -> Option<(Vec<usize>, usize, usize)> {
    let n = d.vertex_count();
    // Forward reachability through permitted interiors decides which target
    // wins; the weighted search then only runs for that one.
    let mut reach = vec![false; n];
    reach[s] = true;
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        if u != s && !interior_ok(u) {
            continue;
        }
        for &w in d.out_idx(u) {
            if !reach[w] {
                reach[w] = true;
                stack.push(w);
            }
        }
    }
    let &t = targets.iter().find(|&&t| t != s && reach[t])?;
    let (path, cost) = min_cost_path_idx(d, s, t, &interior_ok, &free)?;
    Some((path, t, cost))
}

/// Lexicographically smallest path minimising (exterior cost, length).
pub(crate) fn min_cost_path_idx(
    d: &Digraph,
    s: usize,
    t: usize,
    interior_ok: impl Fn(usize) -> bool,
    free: impl Fn(usize, usize) -> bool,
) -> Option<(Vec<usize>, usize)> {
    let n = d.vertex_count();
    let passable = |u: usize| u != s && u != t && interior_ok(u);
    let weight = |u: usize, w: usize| (usize::from(!free(u, w)), 1usize);
    let add = |a: (usize, usize), b: (usize, usize)| (a.0 + b.0, a.1 + b.1);
    let mut dist: Vec<Option<(usize, usize)>> = vec![None; n];
    dist[t] = Some((0, 0));
    let mut heap = BinaryHeap::from([Reverse(((0usize, 0usize), t))]);
    while let Some(Reverse((dw, w))) = heap.pop() {
        if dist[w] != Some(dw) || (w != t && w != s && !passable(w)) {
            continue;
        }
        if w == s {
            continue;
        }
        for &u in d.in_idx(w) {
            if u != s && !passable(u) {
                continue;
            }
            let cand = add(weight(u, w), dw);
            if dist[u].is_none_or(|cur| cand < cur) {
                dist[u] = Some(cand);
                heap.push(Reverse((cand, u)));
            }
        }
    }
    let total = dist[s]?;
    let mut path = vec![s];
    let mut cur = s;
    while cur != t {
        let here = dist[cur].unwrap();
        let next = d
            .out_idx(cur)
            .iter()
            .copied()
            .find(|&w| (w == t || passable(w)) && dist[w].is_some_and(|dw| add(weight(cur, w), dw) == here))
            .expect("distance labels admit a greedy descent");
        path.push(next);
        cur = next;
    }
    Some((path, total.0))
}

pub(crate) fn index_mask(d: &Digraph, set: &BTreeSet<VertexId>) -> Vec<bool> {
    let mut mask = vec![false; d.vertex_count()];
    for v in set {
        if let Some(i) = d.idx(*v) {
            mask[i] = true;
        }
    }
    mask
}

pub(crate) fn to_dipath(d: &Digraph, path: &[usize]) -> Dipath {
    Dipath::from_vec(path.iter().map(|&i| d.id(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn set(ids: &[u32]) -> BTreeSet<VertexId> {
        ids.iter().copied().map(VertexId).collect()
    }

    fn cycle(n: u32) -> Digraph {
        Digraph::from_pairs(&[], &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn two_triangles() -> Digraph {
        Digraph::from_pairs(&[], &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
    }

    // flower: x=0, y=1, petals 2..
    fn flower(m: u32) -> Digraph {
        let mut e = vec![(1, 0)];
        for i in 0..m {
            e.push((0, i + 2));
            e.push((i + 2, 1));
        }
        Digraph::from_pairs(&[], &e).unwrap()
    }

    #[test]
    fn strongness_examples() {
        assert!(is_strong(&cycle(3)));
        assert!(!is_strong(&Digraph::from_pairs(&[], &[(0, 1)]).unwrap()));
        assert!(is_strong(&two_triangles()));
        assert!(is_strong(&Digraph::from_pairs(&[4], &[]).unwrap()));
    }

    #[test]
    fn layers_on_cycle_and_star() {
        let l = bfs_layers(&cycle(5), v(0)).unwrap();
        assert_eq!(l.layers, (0..5).map(|i| vec![v(i)]).collect::<Vec<_>>());
        let star = Digraph::from_pairs(&[], &[(0, 1), (1, 0), (0, 2), (2, 0), (0, 3), (3, 0)]).unwrap();
        let l = bfs_layers(&star, v(0)).unwrap();
        assert_eq!(l.layers, vec![vec![v(0)], vec![v(1), v(2), v(3)]]);
        assert_eq!(bfs_layers(&two_triangles(), v(0)).unwrap().layers.len(), 3);
        assert_eq!(bfs_layers(&star, v(9)), Err(Error::UnknownVertex(v(9))));
    }

    #[test]
    fn parent_is_lowest_in_neighbour() {
        // 0 -> {1, 2} -> 3 ; 3 reached from both, parent must be 1.
        let d = Digraph::from_pairs(&[], &[(0, 2), (0, 1), (2, 3), (1, 3), (3, 0)]).unwrap();
        let l = bfs_layers(&d, v(0)).unwrap();
        assert_eq!(l.parent[&v(3)], v(1));
        assert_eq!(l.path_to(v(3)), Some(Dipath::from_ids(&[0, 1, 3])));
    }

    #[test]
    fn shortest_dipath_examples() {
        let c5 = cycle(5);
        assert_eq!(shortest_dipath(&c5, v(0), v(3), &set(&[])).unwrap(), Some(Dipath::from_ids(&[0, 1, 2, 3])));
        assert_eq!(shortest_dipath(&c5, v(0), v(3), &set(&[2])).unwrap(), None);
        // endpoints in the forbidden set are ignored
        assert!(shortest_dipath(&c5, v(0), v(3), &set(&[0, 3])).unwrap().is_some());
        assert_eq!(shortest_dipath(&flower(3), v(1), v(3), &set(&[])).unwrap(), Some(Dipath::from_ids(&[1, 0, 3])));
    }

    #[test]
    fn shortest_dipath_lexicographic_tie_break() {
        // 0->2->5 and 0->3->5 tie on length
        let d = Digraph::from_pairs(&[], &[(0, 3), (3, 5), (0, 2), (2, 5)]).unwrap();
        assert_eq!(shortest_dipath(&d, v(0), v(5), &set(&[])).unwrap(), Some(Dipath::from_ids(&[0, 2, 5])));
    }

    #[test]
    fn exterior_cost_examples() {
        let c5 = cycle(5);
        let r = min_exterior_cost_dipath(&c5, v(4), &[v(0), v(1)], &set(&[2, 3]), &BTreeSet::new()).unwrap().unwrap();
        assert_eq!(r.path, Dipath::from_ids(&[4, 0]));
        assert_eq!(r.target, v(0));

        // P = 0->1->2->3, chord 3->1, detour 3->a->0 with a = 9
        let d = Digraph::from_pairs(&[], &[(0, 1), (1, 2), (2, 3), (3, 1), (3, 9), (9, 0)]).unwrap();
        let free: BTreeSet<_> = [(0, 1), (1, 2), (2, 3)].iter().map(|&(a, b)| (v(a), v(b))).collect();
        let forb = set(&[0, 1, 2, 3]);
        let r = min_exterior_cost_dipath(&d, v(3), &[v(0), v(1)], &forb, &free).unwrap().unwrap();
        assert_eq!((r.path, r.target, r.exterior_cost), (Dipath::from_ids(&[3, 9, 0]), v(0), 2));
        let r = min_exterior_cost_dipath(&d, v(3), &[v(1)], &forb, &free).unwrap().unwrap();
        assert_eq!((r.path, r.target, r.exterior_cost), (Dipath::from_ids(&[3, 1]), v(1), 1));
    }

    #[test]
    fn exterior_cost_prefers_free_edges() {
        // 0->5 and 0->1->5 cost 1 each; the longer 0->1->2->5 runs on free edges only.
        let d = Digraph::from_pairs(&[], &[(0, 1), (1, 2), (2, 5), (0, 5), (1, 5)]).unwrap();
        let free: BTreeSet<_> = [(0, 1), (1, 2), (2, 5)].iter().map(|&(a, b)| (v(a), v(b))).collect();
        let r = min_exterior_cost_dipath(&d, v(0), &[v(5)], &BTreeSet::new(), &free).unwrap().unwrap();
        assert_eq!((r.path, r.exterior_cost), (Dipath::from_ids(&[0, 1, 2, 5]), 0));
    }

    #[test]
    fn exterior_cost_errors() {
        let c5 = cycle(5);
        assert_eq!(
            min_exterior_cost_dipath(&c5, v(0), &[], &BTreeSet::new(), &BTreeSet::new()),
            Err(Error::EmptyTargets)
        );
        assert_eq!(
            min_exterior_cost_dipath(&c5, v(0), &[v(8)], &BTreeSet::new(), &BTreeSet::new()),
            Err(Error::UnknownVertex(v(8)))
        );
    }

    #[test]
    fn components_of_two_cycles_joined_one_way() {
        let d = Digraph::from_pairs(&[], &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]).unwrap();
        assert_eq!(strong_components(&d), vec![vec![v(0), v(1)], vec![v(2), v(3)]]);
    }
}
