//! Exhaustive searches that decide, on very small digraphs, what the
//! extractors only promise above a size bound. Exponential time; every
//! entry point enforces a size guard.

use std::collections::BTreeSet;

use crate::certificate::required_forward;
use crate::error::{Error, Result};
use crate::graph::{Dicycle, Digraph};

pub const LONGEST_DICYCLE_LIMIT: usize = 14;
pub const CERTIFICATE_VERTEX_LIMIT: usize = 10;
pub const CERTIFICATE_N_LIMIT: usize = 4;
pub const CERTIFICATE_K_LIMIT: usize = 3;

fn guard(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::GuardExceeded { what, actual, limit });
    }
    Ok(())
}

/// A dicycle with the most vertices, or `None` for an acyclic digraph.
/// Among longest dicycles the first one found in lexicographic search order
/// is returned, rotated to start at its lowest id.
pub fn oracle_longest_dicycle(d: &Digraph) -> Result<Option<Dicycle>> {
    guard("vertex count", d.vertex_count(), LONGEST_DICYCLE_LIMIT)?;
    let mut best: Option<Vec<usize>> = None;
    let full = d.vertex_count();
    for_each_cycle(d, &mut |cycle| {
        if best.as_ref().is_none_or(|b| cycle.len() > b.len()) {
            best = Some(cycle.to_vec());
        }
        best.as_ref().is_some_and(|b| b.len() == full)
    });
    Ok(best.map(|c| Dicycle::from_vec(c.into_iter().map(|i| d.id(i)).collect())))
}

/// Calls `visit` on every simple dicycle exactly once, as an index sequence
/// starting at its lowest index. Stops as soon as `visit` returns true.
fn for_each_cycle(d: &Digraph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let count = d.vertex_count();
    for start in 0..count {
        let mut on_path = vec![false; count];
        let mut path = vec![start];
        let mut cursor = vec![0usize];
        on_path[start] = true;
        while let Some(&top) = path.last() {
            let at = cursor.last_mut().unwrap();
            let Some(&w) = d.out_idx(top).get(*at) else {
                on_path[top] = false;
                path.pop();
                cursor.pop();
                continue;
            };
            *at += 1;
            if w == start && path.len() >= 2 {
                if visit(&path) {
                    return;
                }
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                cursor.push(0);
            }
        }
    }
}

/// Simple `s`-`t` dipaths on at most `max_vertices` vertices, `s != t`.
fn short_paths(d: &Digraph, s: usize, t: usize, max_vertices: usize) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let mut path = vec![s];
    let mut on_path = vec![false; d.vertex_count()];
    on_path[s] = true;
    extend_paths(d, t, max_vertices, &mut path, &mut on_path, &mut found);
    found
}

fn extend_paths(
    d: &Digraph,
    t: usize,
    max_vertices: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut Vec<Vec<usize>>,
) {
    let top = *path.last().unwrap();
    for &w in d.out_idx(top) {
        if w == t && path.len() < max_vertices {
            let mut done = path.clone();
            done.push(t);
            found.push(done);
        } else if w != t && !on_path[w] && path.len() + 1 < max_vertices {
            on_path[w] = true;
            path.push(w);
            extend_paths(d, t, max_vertices, path, on_path, found);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Whether `d` contains a dicycle on at least `n` vertices, an `n`-narrow
/// semi-chain of `k` distinct dicycles, or an `n`-short `(m, 1)`-system
/// with `m = (k-1)n + 3`.
pub fn oracle_has_certificate(d: &Digraph, n: usize, k: usize) -> Result<bool> {
    guard("vertex count", d.vertex_count(), CERTIFICATE_VERTEX_LIMIT)?;
    guard("n", n, CERTIFICATE_N_LIMIT)?;
    guard("k", k, CERTIFICATE_K_LIMIT)?;
    if n < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and k >= 1, got n = {n}, k = {k}")));
    }
    let mut short = Vec::new();
    let mut long = false;
    for_each_cycle(d, &mut |cycle| {
        if cycle.len() >= n {
            long = true;
            return true;
        }
        short.push(cycle.iter().copied().collect::<BTreeSet<usize>>());
        false
    });
    if long {
        return Ok(true);
    }
    if has_semi_chain(&short, k, &mut Vec::new()) {
        return Ok(true);
    }
    Ok(has_short_system(d, n, required_forward(n, k)))
}

/// Extends `chain` (indices into `cycles`) to length `k`.
fn has_semi_chain(cycles: &[BTreeSet<usize>], k: usize, chain: &mut Vec<usize>) -> bool {
    if chain.len() == k {
        return true;
    }
    for c in 0..cycles.len() {
        if chain.contains(&c) {
            continue;
        }
        let fits = chain.iter().enumerate().all(|(pos, &other)| {
            let meets = !cycles[c].is_disjoint(&cycles[other]);
            meets == (pos + 1 == chain.len())
        });
        if fits {
            chain.push(c);
            if has_semi_chain(cycles, k, chain) {
                return true;
            }
            chain.pop();
        }
    }
    false
}

fn has_short_system(d: &Digraph, n: usize, m: usize) -> bool {
    let count = d.vertex_count();
    for x in 0..count {
        // dicycles through x on fewer than n vertices, keyed by their other vertices
        let petals: Vec<BTreeSet<usize>> = d
            .out_idx(x)
            .iter()
            .flat_map(|&first| short_paths(d, first, x, n - 1))
            .map(|p| p[..p.len() - 1].iter().copied().collect())
            .collect();
        if max_packing(&petals, m + 1) {
            return true;
        }
        for y in (0..count).filter(|&y| y != x) {
            for back in short_paths(d, y, x, n.saturating_sub(1)) {
                let back_inner: BTreeSet<usize> = back[1..back.len() - 1].iter().copied().collect();
                let budget = n - 1 + 2 - back.len();
                let forward: Vec<BTreeSet<usize>> = short_paths(d, x, y, budget)
                    .into_iter()
                    .map(|p| p[1..p.len() - 1].iter().copied().collect::<BTreeSet<usize>>())
                    .filter(|inner| inner.is_disjoint(&back_inner))
                    .collect();
                if max_packing(&forward, m) {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether `need` of the given interiors are pairwise disjoint. Distinct
/// members with empty interiors (the direct edge) can only be used once,
/// which the enumeration already guarantees.
fn max_packing(interiors: &[BTreeSet<usize>], need: usize) -> bool {
    fn go(interiors: &[BTreeSet<usize>], from: usize, need: usize, used: &mut BTreeSet<usize>) -> bool {
        if need == 0 {
            return true;
        }
        if interiors.len() - from < need {
            return false;
        }
        for i in from..interiors.len() {
            if interiors[i].is_disjoint(used) {
                used.extend(interiors[i].iter().copied());
                let ok = go(interiors, i + 1, need - 1, used);
                for v in &interiors[i] {
                    used.remove(v);
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    go(interiors, 0, need, &mut BTreeSet::new())
}
