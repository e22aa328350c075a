use log::debug;

use super::{Fan, FanWitness, WeakWitness};
use crate::cancel::CancelToken;
use crate::error::{Error, Result};
use crate::flow::disjoint_paths_idx;
use crate::graph::{Digraph, Dipath};
use crate::search::{bfs_idx, is_strong, shortest_path_idx, to_dipath};
use crate::thresholds::{fan_degree, geometric_bound, n_weak};

const LONG_PATH_BUDGET: usize = 2_000_000;

/// A dipath of length at least `n`, a vertex of out-degree at least
/// `degree`, or the guarantee `|V| <= sum_{i<n} degree^i`.
pub fn long_dipath_or_out_star(d: &Digraph, n: usize, degree: usize) -> Result<WeakWitness> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if degree < 1 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    if let Some(path) = bfs_long_path(d, n) {
        return Ok(WeakWitness::LongDipath { path: to_dipath(d, &path) });
    }
    if let Some(center) = (0..d.vertex_count()).find(|&v| d.out_idx(v).len() >= degree) {
        return Ok(WeakWitness::OutStar {
            center: d.id(center),
            out_neighbors: d.out_idx(center).iter().map(|&w| d.id(w)).collect(),
        });
    }
    let bound = geometric_bound(degree as u64, n);
    if d.vertex_count() as u64 > bound {
        return Err(Error::ProofInvariantViolation(format!(
            "{} vertices with BFS depth below {n} and out-degree below {degree}",
            d.vertex_count()
        )));
    }
    Ok(WeakWitness::BelowThreshold { bound })
}

/// BFS path to the lowest-id vertex at distance `n` from the first root
/// (in id order) whose BFS tree is that deep.
fn bfs_long_path(d: &Digraph, n: usize) -> Option<Vec<usize>> {
    (0..d.vertex_count()).find_map(|root| {
        let (layers, parent) = bfs_idx(d, root, |_| true);
        let end = *layers.get(n)?.first()?;
        let mut path = vec![end];
        while let Some(p) = parent[*path.last().unwrap()] {
            path.push(p);
        }
        path.reverse();
        Some(path)
    })
}

/// A dipath of length at least `n`, or `n` internally disjoint dipaths
/// between two vertices (dicycles through one vertex), or the guarantee
/// `|V| <= n_weak(n)`.
pub fn dipath_or_fan(d: &Digraph, n: usize) -> Result<FanWitness> {
    dipath_or_fan_with(d, n, &CancelToken::new())
}

pub fn dipath_or_fan_with(d: &Digraph, n: usize, cancel: &CancelToken) -> Result<FanWitness> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let degree = usize::try_from(fan_degree(n)).unwrap_or(usize::MAX);
    let first = match long_dipath_or_out_star(d, n, degree)? {
        WeakWitness::LongDipath { path } => return Ok(FanWitness::LongDipath { path }),
        WeakWitness::OutStar { center, .. } => Some(d.idx(center).unwrap()),
        WeakWitness::BelowThreshold { .. } => None,
    };
    let wide: Vec<usize> = (0..d.vertex_count()).filter(|&v| d.out_idx(v).len() >= n).collect();
    let centers = first.into_iter().chain(wide.iter().copied().filter(|&v| Some(v) != first));
    for center in centers {
        for petal in [false, true] {
            if let Some(found) = fan_search(d, center, n, petal, cancel)? {
                return Ok(found);
            }
        }
        if first == Some(center) {
            debug!("fan search from out-star centre {} failed", d.id(center));
        }
    }
    if let Some(fan) = pair_fans(d, n, &wide, cancel)? {
        return Ok(FanWitness::Fan(fan));
    }
    let bound = n_weak(n);
    if d.vertex_count() as u64 > bound {
        if let Some(path) = long_dipath_search(d, n, LONG_PATH_BUDGET) {
            return Ok(FanWitness::LongDipath { path: to_dipath(d, &path) });
        }
        return Err(Error::ProofInvariantViolation(format!(
            "neither a dipath of length {n} nor a fan found on {} vertices",
            d.vertex_count()
        )));
    }
    Ok(FanWitness::BelowThreshold { bound })
}

/// Repeated Menger rounds from the out-neighbours of `center`.
///
/// Each failed round keeps the shortest source paths that first meet the
/// busiest separator vertex, cut at that vertex, and retargets the flow
/// there. The longest kept path shrinks every round, so the loop ends.
/// In petal mode the first target is `center` itself, so a success is a
/// fan of dicycles.
fn fan_search(d: &Digraph, center: usize, n: usize, petal: bool, cancel: &CancelToken) -> Result<Option<FanWitness>> {
    let count = d.vertex_count();
    let mut is_out = vec![false; count];
    for &w in d.out_idx(center) {
        is_out[w] = true;
    }
    let mut sink = if petal {
        center
    } else {
        match (0..count).find(|&u| u != center && !is_out[u]) {
            Some(z) => z,
            None => return Ok(None),
        }
    };
    let mut alive = vec![true; count];
    if !petal {
        alive[center] = false;
    }
    let mut sources: Vec<usize> = d.out_idx(center).to_vec();
    for _ in 0..=count {
        cancel.check()?;
        let direct = sink != center && is_out[sink];
        sources.retain(|&w| w != sink && alive[w]);
        if sources.len() + usize::from(direct) < n {
            return Ok(None);
        }
        let flow = disjoint_paths_idx(d, &alive, &sources, sink);
        if flow.paths.len() + usize::from(direct) >= n {
            return Ok(Some(FanWitness::Fan(assemble_fan(d, center, sink, direct, &flow.paths))));
        }

        let mut routes = Vec::new();
        for &w in &sources {
            let Some(p) = shortest_path_idx(d, w, sink, |u| alive[u]) else { continue };
            let mut candidate = vec![center];
            candidate.extend_from_slice(if sink == center { &p[..p.len() - 1] } else { &p });
            if candidate.len() > n {
                return Ok(Some(FanWitness::LongDipath { path: to_dipath(d, &candidate) }));
            }
            routes.push(p);
        }
        if routes.is_empty() {
            return Ok(None);
        }

        let mut in_separator = vec![false; count];
        for &s in &flow.separator {
            in_separator[s] = true;
        }
        let mut hits = vec![0usize; count];
        let mut first_hit = Vec::with_capacity(routes.len());
        for p in &routes {
            let Some(pos) = p.iter().position(|&u| in_separator[u]) else {
                return Err(Error::ProofInvariantViolation(format!(
                    "shortest dipath from {} to {} avoids the separator",
                    d.id(p[0]),
                    d.id(sink)
                )));
            };
            hits[p[pos]] += 1;
            first_hit.push(pos);
        }
        let busiest = (0..count).max_by_key(|&s| (hits[s], std::cmp::Reverse(s))).unwrap();

        let mut kept = vec![false; count];
        sources.clear();
        for (p, &pos) in routes.iter().zip(&first_hit) {
            if p[pos] == busiest {
                for &u in &p[..=pos] {
                    kept[u] = true;
                }
                sources.push(p[0]);
            }
        }
        alive = kept;
        sink = busiest;
    }
    Err(Error::ProofInvariantViolation("fan search did not terminate".into()))
}

fn assemble_fan(d: &Digraph, center: usize, sink: usize, direct: bool, paths: &[Vec<usize>]) -> Fan {
    let mut fan_paths: Vec<Dipath> = Vec::with_capacity(paths.len() + 1);
    if direct {
        fan_paths.push(to_dipath(d, &[center, sink]));
    }
    for p in paths {
        let mut full = vec![center];
        full.extend_from_slice(if sink == center { &p[..p.len() - 1] } else { p });
        fan_paths.push(to_dipath(d, &full));
    }
    fan_paths.sort();
    Fan { x: d.id(center), y: d.id(sink), paths: fan_paths }
}

/// Internally disjoint dipath counts over all pairs of a wide tail and a
/// wide head.
fn pair_fans(d: &Digraph, n: usize, wide_tails: &[usize], cancel: &CancelToken) -> Result<Option<Fan>> {
    let count = d.vertex_count();
    for &x in wide_tails {
        let mut alive = vec![true; count];
        alive[x] = false;
        for y in (0..count).filter(|&y| y != x && d.in_idx(y).len() >= n) {
            cancel.check()?;
            let direct = d.has_edge_idx(x, y);
            let sources: Vec<usize> = d.out_idx(x).iter().copied().filter(|&w| w != y).collect();
            if sources.len() + usize::from(direct) < n {
                continue;
            }
            let flow = disjoint_paths_idx(d, &alive, &sources, y);
            if flow.paths.len() + usize::from(direct) >= n {
                return Ok(Some(assemble_fan(d, x, y, direct, &flow.paths)));
            }
        }
    }
    Ok(None)
}

/// Depth-first search for any dipath with `n` edges, abandoned after
/// `budget` extensions.
fn long_dipath_search(d: &Digraph, n: usize, budget: usize) -> Option<Vec<usize>> {
    let count = d.vertex_count();
    let mut spent = 0usize;
    for start in 0..count {
        let mut on_path = vec![false; count];
        let mut path = vec![start];
        let mut cursor = vec![0usize];
        on_path[start] = true;
        while let Some(&top) = path.last() {
            if path.len() > n {
                return Some(path);
            }
            let at = cursor.last_mut().unwrap();
            let next = d.out_idx(top)[*at..].iter().position(|&w| !on_path[w]);
            match next {
                Some(offset) => {
                    let w = d.out_idx(top)[*at + offset];
                    *at += offset + 1;
                    spent += 1;
                    if spent > budget {
                        return None;
                    }
                    on_path[w] = true;
                    path.push(w);
                    cursor.push(0);
                }
                None => {
                    on_path[top] = false;
                    path.pop();
                    cursor.pop();
                }
            }
        }
    }
    None
}
