use std::collections::BTreeSet;

use super::Fan;
use crate::certificate::{required_forward, Certificate, PathSystem, SemiChain};
use crate::error::{Error, Result};
use crate::graph::{Dicycle, Digraph, Dipath, VertexId};
use crate::search::shortest_dipath;

/// Result of [`system_from_fan_detailed`]. `shortfall` marks a system built
/// from a dicycle fan that has fewer forward members than `(k-1)n+3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemOutcome {
    pub certificate: Certificate,
    pub shortfall: bool,
}

/// Turns a fan of at least `n k` internally disjoint dipaths into a dicycle
/// on at least `n` vertices or an `n`-short system.
pub fn system_from_fan(d: &Digraph, fan: &Fan, n: usize, k: usize) -> Result<Certificate> {
    system_from_fan_detailed(d, fan, n, k).map(|o| o.certificate)
}

pub fn system_from_fan_detailed(d: &Digraph, fan: &Fan, n: usize, k: usize) -> Result<SystemOutcome> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and k >= 1, got n = {n}, k = {k}")));
    }
    check_fan(d, fan)?;
    let required = n.saturating_mul(k);
    if fan.paths.len() < required {
        return Err(Error::Precondition(format!("fan has {} dipaths, at least {required} required", fan.paths.len())));
    }
    if fan.x == fan.y {
        dicycle_fan(d, fan, n, k)
    } else {
        path_fan(d, fan, n, k).map(|certificate| SystemOutcome { certificate, shortfall: false })
    }
}

fn check_fan(d: &Digraph, fan: &Fan) -> Result<()> {
    for v in [fan.x, fan.y] {
        d.require(v)?;
    }
    let mut used = BTreeSet::new();
    for p in &fan.paths {
        if fan.x == fan.y {
            if p.first() != fan.x || p.vertices().len() < 2 {
                return Err(Error::Precondition("fan dicycle does not start at its centre".into()));
            }
            Dicycle::from_vec(p.vertices().to_vec()).check(d).map_err(Error::NotADipath)?;
        } else {
            if p.first() != fan.x || p.last() != fan.y {
                return Err(Error::Precondition("fan dipath has wrong endpoints".into()));
            }
            p.check(d).map_err(Error::NotADipath)?;
        }
        let inner = if fan.x == fan.y { &p.vertices()[1..] } else { p.interior() };
        if p.vertices().len() == 2 && fan.x != fan.y && !used.insert(fan.y) {
            return Err(Error::Precondition("direct edge listed twice".into()));
        }
        for &v in inner {
            if !used.insert(v) {
                return Err(Error::Precondition(format!("fan members share vertex {v}")));
            }
        }
    }
    Ok(())
}

fn path_fan(d: &Digraph, fan: &Fan, n: usize, k: usize) -> Result<Certificate> {
    let back = shortest_dipath(d, fan.y, fan.x, &BTreeSet::new())?
        .ok_or_else(|| Error::ProofInvariantViolation(format!("no dipath from {} to {}", fan.y, fan.x)))?;
    let back_inner: BTreeSet<VertexId> = back.interior().iter().copied().collect();
    let avoids_back = |p: &Dipath| p.interior().iter().all(|v| !back_inner.contains(v));

    let mut forward = Vec::new();
    for p in fan.paths.iter().filter(|p| avoids_back(p)) {
        if p.vertices().len() + back.vertices().len() - 2 >= n {
            return Ok(Certificate::LongDicycle(close(p, &back)));
        }
        forward.push(p.clone());
    }
    if forward.is_empty() {
        return Err(Error::ProofInvariantViolation(format!(
            "every fan dipath meets the shortest dipath from {} to {}",
            fan.y, fan.x
        )));
    }
    let needed = required_forward(n, k);
    if forward.len() < needed {
        return Err(Error::ProofInvariantViolation(format!(
            "{} forward dipaths survive, {needed} required",
            forward.len()
        )));
    }
    Ok(Certificate::ShortSystem(PathSystem { x: fan.x, y: fan.y, forward, backward: vec![back] }))
}

/// `forward` followed by the interior of `back`.
fn close(forward: &Dipath, back: &Dipath) -> Dicycle {
    let mut vertices = forward.vertices().to_vec();
    vertices.extend_from_slice(back.interior());
    Dicycle::from_vec(vertices)
}

fn dicycle_fan(d: &Digraph, fan: &Fan, n: usize, k: usize) -> Result<SystemOutcome> {
    let done = |certificate| Ok(SystemOutcome { certificate, shortfall: false });
    let as_cycle = |p: &Dipath| Dicycle::from_vec(p.vertices().to_vec());
    if n <= 2 {
        return done(Certificate::LongDicycle(as_cycle(&fan.paths[0])));
    }
    if let Some(long) = fan.paths.iter().find(|p| p.vertices().len() >= n) {
        return done(Certificate::LongDicycle(as_cycle(long)));
    }
    let needed = required_forward(n, k);
    let system = |mut members: Vec<Dipath>| {
        let back = members.pop().unwrap();
        PathSystem { x: fan.x, y: fan.y, forward: members, backward: vec![back] }
    };
    if fan.paths.len() > needed {
        return done(Certificate::ShortSystem(system(fan.paths.clone())));
    }

    // Only n = 3 gets here, where every fan dicycle is a 2-cycle.
    let x = d.require(fan.x)?;
    let twins: Vec<Dipath> = d
        .out_idx(x)
        .iter()
        .filter(|&&u| d.has_edge_idx(u, x))
        .map(|&u| Dipath::from_vec(vec![fan.x, d.id(u)]))
        .collect();
    if twins.len() > needed {
        return done(Certificate::ShortSystem(system(twins)));
    }
    if let Some(&u) = d.out_idx(x).iter().find(|&&u| !d.has_edge_idx(u, x)) {
        let back = shortest_dipath(d, d.id(u), fan.x, &BTreeSet::new())?
            .ok_or_else(|| Error::ProofInvariantViolation(format!("no dipath from {} to {}", d.id(u), fan.x)))?;
        let mut vertices = vec![fan.x];
        vertices.extend_from_slice(&back.vertices()[..back.vertices().len() - 1]);
        return done(Certificate::LongDicycle(Dicycle::from_vec(vertices)));
    }
    if k == 1 {
        let cycles = vec![as_cycle(&twins[0])];
        return done(Certificate::NarrowSemiChain(SemiChain { cycles }));
    }
    Ok(SystemOutcome { certificate: Certificate::ShortSystem(system(twins)), shortfall: true })
}
