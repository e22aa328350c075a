use crate::cancel::CancelToken;
use crate::certificate::{check_semi_chain_pattern, Certificate, SemiChain};
use crate::error::{Error, Result};
use crate::graph::{Dicycle, Digraph, Dipath};
use crate::search::{is_strong, min_cost_to_first_target};

/// Dicycles built backwards along a dipath, or the first one that turned
/// out long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleConstruction {
    LongDicycle(Dicycle),
    Cycles(Vec<Dicycle>),
}

/// Result of [`semi_chain_along_with`]: the certificate plus every dicycle
/// constructed on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainOutcome {
    pub certificate: Certificate,
    pub constructed: Vec<Dicycle>,
}

/// Walks `path` from its last vertex back to its first. Each step leaves
/// the current vertex along a dipath whose interior avoids the part of
/// `path` not yet covered, landing on the earliest reachable vertex of
/// `path` and using as few edges outside `path` as possible. Returns early
/// with the first dicycle on at least `n` vertices.
pub fn construct_cycles_along(d: &Digraph, path: &Dipath, n: usize) -> Result<CycleConstruction> {
    path.check(d).map_err(Error::NotADipath)?;
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    construct_cycles_idx(d, path, n, &CancelToken::new())
}

pub(crate) fn construct_cycles_idx(
    d: &Digraph,
    path: &Dipath,
    n: usize,
    cancel: &CancelToken,
) -> Result<CycleConstruction> {
    let count = d.vertex_count();
    let seq: Vec<usize> = path.vertices().iter().map(|&v| d.idx(v).unwrap()).collect();
    let mut position = vec![usize::MAX; count];
    for (i, &u) in seq.iter().enumerate() {
        position[u] = i;
    }
    let on_path_edge = |u: usize, w: usize| position[u] != usize::MAX && position[w] == position[u] + 1;

    let mut cycles = Vec::new();
    let mut cur = seq.len() - 1;
    while cur > 0 {
        cancel.check()?;
        let targets = &seq[..cur];
        let interior_ok = |u: usize| position[u] == usize::MAX || position[u] > cur;
        let Some((back, target, _)) = min_cost_to_first_target(d, seq[cur], targets, interior_ok, on_path_edge) else {
            return Err(Error::ProofInvariantViolation(format!(
                "no dipath from {} back to the uncovered part of the path",
                d.id(seq[cur])
            )));
        };
        let start = position[target];
        let mut vertices: Vec<_> = seq[start..=cur].iter().map(|&u| d.id(u)).collect();
        vertices.extend(back[1..back.len() - 1].iter().map(|&u| d.id(u)));
        let cycle = Dicycle::from_vec(vertices);
        if cycle.len() >= n {
            return Ok(CycleConstruction::LongDicycle(cycle));
        }
        cycles.push(cycle);
        cur = start;
    }
    Ok(CycleConstruction::Cycles(cycles))
}

/// Given a dipath of length at least `n k`, returns a dicycle on at least
/// `n` vertices or an `n`-narrow semi-chain of `k` dicycles.
pub fn semi_chain_along(d: &Digraph, path: &Dipath, n: usize, k: usize) -> Result<Certificate> {
    semi_chain_along_with(d, path, n, k, &CancelToken::new()).map(|o| o.certificate)
}

pub fn semi_chain_along_with(
    d: &Digraph,
    path: &Dipath,
    n: usize,
    k: usize,
    cancel: &CancelToken,
) -> Result<ChainOutcome> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and k >= 1, got n = {n}, k = {k}")));
    }
    path.check(d).map_err(Error::NotADipath)?;
    let required = n.saturating_mul(k);
    if path.len() < required {
        return Err(Error::PathTooShort { length: path.len(), required });
    }
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    let cycles = match construct_cycles_idx(d, path, n, cancel)? {
        CycleConstruction::LongDicycle(c) => {
            return Ok(ChainOutcome { constructed: vec![c.clone()], certificate: Certificate::LongDicycle(c) })
        }
        CycleConstruction::Cycles(cycles) => cycles,
    };
    if let Err(reason) = check_semi_chain_pattern(&cycles) {
        return Err(Error::ProofInvariantViolation(format!("constructed dicycles are not a semi-chain: {reason}")));
    }
    if cycles.len() < k {
        return Err(Error::ProofInvariantViolation(format!(
            "only {} dicycles cover a dipath of length {}",
            cycles.len(),
            path.len()
        )));
    }
    let chain = SemiChain { cycles: cycles[..k].to_vec() };
    Ok(ChainOutcome { certificate: Certificate::NarrowSemiChain(chain), constructed: cycles })
}
