//! Constructive extraction of unavoidable substructures from strong
//! digraphs.
//!
//! [`long_dipath_or_out_star`] finds a long dipath or a high out-degree
//! vertex, [`dipath_or_fan`] upgrades the latter to a fan of internally
//! disjoint dipaths, and [`unavoidable`] turns either into a certificate:
//! a long dicycle, a narrow semi-chain, or a short path system.

mod chain;
mod system;
mod weak;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cancel::CancelToken;
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Dipath, VertexId};
use crate::search::{bfs_idx, is_strong, to_dipath};
use crate::thresholds::n_impl;

pub use chain::{construct_cycles_along, semi_chain_along, semi_chain_along_with, ChainOutcome, CycleConstruction};
pub use system::{system_from_fan, system_from_fan_detailed, SystemOutcome};
pub use weak::{dipath_or_fan, dipath_or_fan_with, long_dipath_or_out_star};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeakWitness {
    LongDipath { path: Dipath },
    OutStar { center: VertexId, out_neighbors: BTreeSet<VertexId> },
    BelowThreshold { bound: u64 },
}

/// Internally disjoint `x`-`y` dipaths. When `x == y` each path starts at
/// `x` and stands for the dicycle closed by its last edge back to `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub x: VertexId,
    pub y: VertexId,
    pub paths: Vec<Dipath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FanWitness {
    LongDipath { path: Dipath },
    Fan(Fan),
    BelowThreshold { bound: u64 },
}

/// Extracts a dicycle on at least `n` vertices, an `n`-narrow semi-chain of
/// `k` dicycles, or an `n`-short `((k-1)n+3, 1)`-system. Gives up with
/// `BelowThreshold` only on digraphs with at most `n_impl(n, k)` vertices.
pub fn unavoidable(d: &Digraph, n: usize, k: usize) -> Result<Certificate> {
    unavoidable_with(d, n, k, &CancelToken::new())
}

pub fn unavoidable_with(d: &Digraph, n: usize, k: usize, cancel: &CancelToken) -> Result<Certificate> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    let span = n.checked_mul(k).ok_or_else(|| Error::InvalidParameter("n * k overflows".into()))?;
    let bound = n_impl(n, k);
    match dipath_or_fan_with(d, span, cancel)? {
        FanWitness::LongDipath { path } => Ok(semi_chain_along_with(d, &path, n, k, cancel)?.certificate),
        FanWitness::Fan(fan) => {
            let outcome = system_from_fan_detailed(d, &fan, n, k)?;
            if !outcome.shortfall {
                return Ok(outcome.certificate);
            }
            if d.vertex_count() as u64 > bound {
                return Err(Error::ProofInvariantViolation(format!(
                    "dicycle fan at {} yields only {} forward dicycles",
                    fan.x,
                    fan.paths.len().saturating_sub(1)
                )));
            }
            below_threshold(d, n, k, bound, cancel)
        }
        FanWitness::BelowThreshold { .. } => below_threshold(d, n, k, bound, cancel),
    }
}

/// Below the bound nothing is promised, but a chain built along the deepest
/// BFS path often still yields a long dicycle or a semi-chain.
fn below_threshold(d: &Digraph, n: usize, k: usize, bound: u64, cancel: &CancelToken) -> Result<Certificate> {
    if d.vertex_count() as u64 > bound {
        return Err(Error::ProofInvariantViolation(format!(
            "no structure found on {} vertices, above the bound {bound}",
            d.vertex_count()
        )));
    }
    if let Some(path) = deepest_bfs_path(d) {
        match chain::construct_cycles_idx(d, &path, n, cancel)? {
            CycleConstruction::LongDicycle(c) => return Ok(Certificate::LongDicycle(c)),
            CycleConstruction::Cycles(cycles) if cycles.len() >= k => {
                if crate::certificate::check_semi_chain_pattern(&cycles).is_ok() {
                    let cycles = cycles.into_iter().take(k).collect();
                    return Ok(Certificate::NarrowSemiChain(crate::certificate::SemiChain { cycles }));
                }
            }
            CycleConstruction::Cycles(_) => {}
        }
    }
    Ok(Certificate::BelowThreshold { bound })
}

/// Shortest dipath of maximum length over all BFS roots; lowest-id root and
/// endpoint among ties. `None` when the digraph has no edge.
fn deepest_bfs_path(d: &Digraph) -> Option<Dipath> {
    let mut best: Option<Vec<usize>> = None;
    for root in 0..d.vertex_count() {
        let (layers, parent) = bfs_idx(d, root, |_| true);
        let depth = layers.len() - 1;
        if depth == 0 || best.as_ref().is_some_and(|b| b.len() > depth) {
            continue;
        }
        let mut path = vec![layers[depth][0]];
        while let Some(p) = parent[*path.last().unwrap()] {
            path.push(p);
        }
        path.reverse();
        best = Some(path);
    }
    best.map(|p| to_dipath(d, &p))
}
