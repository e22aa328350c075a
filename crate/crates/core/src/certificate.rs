//! Certificates for the three unavoidable substructures, their stand-alone
//! verifiers, and the versioned JSON encoding.
//!
//! The verifiers look only at the digraph and the certificate. They never
//! call into the extractors, so a bug there cannot hide a bad certificate.
//!
//! Note on shortness: for a system with no backward member the shortness
//! condition quantifies over an empty set of pairs and holds vacuously. In
//! particular every (k, 0)-system is n-short for every n.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dicycle, Digraph, Dipath, VertexId};
use crate::thresholds::n_impl;

/// Machine-readable reason a verifier rejected its input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    UnknownVertex(VertexId),
    RepeatedVertex(VertexId),
    MissingEdge { tail: VertexId, head: VertexId },
    MissingClosingEdge { tail: VertexId, head: VertexId },
    TooFewVertices { found: usize },
    CycleTooShort { found: usize, required: usize },
    CycleTooLong { index: usize, found: usize, limit: usize },
    TooFewCycles { found: usize, required: usize },
    ConsecutiveDisjoint { index: usize },
    NonConsecutiveIntersection { first: usize, second: usize, vertex: VertexId },
    WrongEndpoints { member: usize },
    DuplicateMember { member: usize },
    DuplicateCycle { first: usize, second: usize },
    NotInternallyDisjoint { vertex: VertexId },
    NotShort { forward: usize, backward: usize, covered: usize, limit: usize },
    TooFewForward { found: usize, required: usize },
    WrongBackwardCount { found: usize },
    AboveThreshold { vertices: usize, bound: u64 },
    BoundMismatch { found: u64, expected: u64 },
}

impl Rejection {
    /// Stable snake_case identifier of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::UnknownVertex(_) => "unknown_vertex",
            Rejection::RepeatedVertex(_) => "repeated_vertex",
            Rejection::MissingEdge { .. } => "missing_edge",
            Rejection::MissingClosingEdge { .. } => "missing_closing_edge",
            Rejection::TooFewVertices { .. } => "too_few_vertices",
            Rejection::CycleTooShort { .. } => "cycle_too_short",
            Rejection::CycleTooLong { .. } => "cycle_too_long",
            Rejection::TooFewCycles { .. } => "too_few_cycles",
            Rejection::ConsecutiveDisjoint { .. } => "consecutive_disjoint",
            Rejection::NonConsecutiveIntersection { .. } => "non_consecutive_intersection",
            Rejection::WrongEndpoints { .. } => "wrong_endpoints",
            Rejection::DuplicateMember { .. } => "duplicate_member",
            Rejection::DuplicateCycle { .. } => "duplicate_cycle",
            Rejection::NotInternallyDisjoint { .. } => "not_internally_disjoint",
            Rejection::NotShort { .. } => "not_short",
            Rejection::TooFewForward { .. } => "too_few_forward",
            Rejection::WrongBackwardCount { .. } => "wrong_backward_count",
            Rejection::AboveThreshold { .. } => "above_threshold",
            Rejection::BoundMismatch { .. } => "bound_mismatch",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::UnknownVertex(v) => write!(f, "vertex {v} is not in the digraph"),
            Rejection::RepeatedVertex(v) => write!(f, "vertex {v} repeats"),
            Rejection::MissingEdge { tail, head } => write!(f, "missing edge {tail} -> {head}"),
            Rejection::MissingClosingEdge { tail, head } => {
                write!(f, "missing closing edge {tail} -> {head}")
            }
            Rejection::TooFewVertices { found } => write!(f, "only {found} vertices"),
            Rejection::CycleTooShort { found, required } => {
                write!(f, "dicycle has {found} vertices, need at least {required}")
            }
            Rejection::CycleTooLong { index, found, limit } => {
                write!(f, "dicycle {index} has {found} vertices, must be below {limit}")
            }
            Rejection::TooFewCycles { found, required } => {
                write!(f, "{found} dicycles, need at least {required}")
            }
            Rejection::ConsecutiveDisjoint { index } => {
                write!(f, "dicycles {index} and {} do not meet", index + 1)
            }
            Rejection::NonConsecutiveIntersection { first, second, vertex } => {
                write!(f, "non-consecutive dicycles {first} and {second} share vertex {vertex}")
            }
            Rejection::WrongEndpoints { member } => write!(f, "member {member} has wrong endpoints"),
            Rejection::DuplicateMember { member } => write!(f, "member {member} repeats an earlier one"),
            Rejection::DuplicateCycle { first, second } => write!(f, "dicycles {first} and {second} coincide"),
            Rejection::NotInternallyDisjoint { vertex } => {
                write!(f, "internal disjointness fails at vertex {vertex}")
            }
            Rejection::NotShort { forward, backward, covered, limit } => {
                write!(f, "forward {forward} with backward {backward} covers {covered} vertices, must be below {limit}")
            }
            Rejection::TooFewForward { found, required } => {
                write!(f, "{found} forward members, need at least {required}")
            }
            Rejection::WrongBackwardCount { found } => {
                write!(f, "{found} backward members, exactly one required")
            }
            Rejection::AboveThreshold { vertices, bound } => {
                write!(f, "digraph has {vertices} vertices, above the bound {bound}")
            }
            Rejection::BoundMismatch { found, expected } => {
                write!(f, "bound {found} does not match the expected {expected}")
            }
        }
    }
}

pub type Verdict = std::result::Result<(), Rejection>;

/// Dicycles in which `C_i` and `C_j` meet exactly when `|i - j| = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiChain {
    pub cycles: Vec<Dicycle>,
}

/// `forward` members run `x -> y`, `backward` members `y -> x`; all are
/// pairwise internally disjoint. When `x == y` every member is a dicycle
/// through `x`, written as a dipath starting at `x` whose closing edge back
/// to `x` is implied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub x: VertexId,
    pub y: VertexId,
    pub forward: Vec<Dipath>,
    pub backward: Vec<Dipath>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    LongDicycle(Dicycle),
    NarrowSemiChain(SemiChain),
    ShortSystem(PathSystem),
    BelowThreshold { bound: u64 },
}

impl Certificate {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Certificate::LongDicycle(_) => CertificateKind::LongDicycle,
            Certificate::NarrowSemiChain(_) => CertificateKind::SemiChain,
            Certificate::ShortSystem(_) => CertificateKind::ShortSystem,
            Certificate::BelowThreshold { .. } => CertificateKind::BelowThreshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    LongDicycle,
    SemiChain,
    ShortSystem,
    BelowThreshold,
}

impl CertificateKind {
    pub const ALL: [CertificateKind; 4] = [
        CertificateKind::LongDicycle,
        CertificateKind::SemiChain,
        CertificateKind::ShortSystem,
        CertificateKind::BelowThreshold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::LongDicycle => "long_dicycle",
            CertificateKind::SemiChain => "semi_chain",
            CertificateKind::ShortSystem => "short_system",
            CertificateKind::BelowThreshold => "below_threshold",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn verify_long_dicycle(d: &Digraph, c: &Dicycle, n: usize) -> Verdict {
    c.check(d)?;
    if c.len() < n {
        return Err(Rejection::CycleTooShort { found: c.len(), required: n });
    }
    Ok(())
}

pub fn verify_semi_chain(d: &Digraph, chain: &SemiChain, n: usize, k: usize) -> Verdict {
    if chain.cycles.len() < k {
        return Err(Rejection::TooFewCycles { found: chain.cycles.len(), required: k });
    }
    for (i, c) in chain.cycles.iter().enumerate() {
        c.check(d)?;
        if c.len() >= n {
            return Err(Rejection::CycleTooLong { index: i, found: c.len(), limit: n });
        }
    }
    check_semi_chain_pattern(&chain.cycles)?;
    let mut seen: HashMap<Vec<VertexId>, usize> = HashMap::new();
    for (i, c) in chain.cycles.iter().enumerate() {
        if let Some(&first) = seen.get(&canonical_rotation(c)) {
            return Err(Rejection::DuplicateCycle { first, second: i });
        }
        seen.insert(canonical_rotation(c), i);
    }
    Ok(())
}

fn canonical_rotation(c: &Dicycle) -> Vec<VertexId> {
    let v = c.vertices();
    let start = (0..v.len()).min_by_key(|&i| v[i]).unwrap_or(0);
    v[start..].iter().chain(&v[..start]).copied().collect()
}

/// The intersection pattern alone, in time linear in the total cycle size
/// plus the number of intersecting pairs.
pub fn check_semi_chain_pattern(cycles: &[Dicycle]) -> Verdict {
    let mut owners: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for &v in c.vertices() {
            owners.entry(v).or_default().push(i);
        }
    }
    let mut meets_next = vec![false; cycles.len()];
    let mut vertices: Vec<_> = owners.keys().copied().collect();
    vertices.sort();
    for v in vertices {
        let list = &owners[&v];
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                if j == i {
                    continue;
                }
                if j == i + 1 {
                    meets_next[i] = true;
                } else {
                    return Err(Rejection::NonConsecutiveIntersection { first: i, second: j, vertex: v });
                }
            }
        }
    }
    if let Some(i) = (0..cycles.len().saturating_sub(1)).find(|&i| !meets_next[i]) {
        return Err(Rejection::ConsecutiveDisjoint { index: i });
    }
    Ok(())
}

/// Checks an n-short (m, 1)-system: at least `m` forward members and exactly
/// one backward member.
pub fn verify_system(d: &Digraph, s: &PathSystem, n: usize, m: usize) -> Verdict {
    if s.backward.len() != 1 {
        return Err(Rejection::WrongBackwardCount { found: s.backward.len() });
    }
    if s.forward.len() < m {
        return Err(Rejection::TooFewForward { found: s.forward.len(), required: m });
    }
    check_system_members(d, s)?;
    if s.x == s.y {
        for (i, p) in s.forward.iter().chain(&s.backward).enumerate() {
            if p.vertices().len() >= n {
                return Err(Rejection::CycleTooLong { index: i, found: p.vertices().len(), limit: n });
            }
        }
    } else {
        // Members are internally disjoint by now, so |V(P) ∪ V(Q)| is
        // |V(P)| + |V(Q)| minus the two shared endpoints.
        for (i, p) in s.forward.iter().enumerate() {
            for (j, q) in s.backward.iter().enumerate() {
                let covered = p.vertices().len() + q.vertices().len() - 2;
                if covered >= n {
                    return Err(Rejection::NotShort { forward: i, backward: j, covered, limit: n });
                }
            }
        }
    }
    Ok(())
}

fn check_system_members(d: &Digraph, s: &PathSystem) -> Verdict {
    for v in [s.x, s.y] {
        if !d.contains(v) {
            return Err(Rejection::UnknownVertex(v));
        }
    }
    let members = s.forward.iter().map(|p| (p, true)).chain(s.backward.iter().map(|p| (p, false)));
    let mut interior_owner: HashMap<VertexId, usize> = HashMap::new();
    let mut seen: BTreeSet<&[VertexId]> = BTreeSet::new();
    for (i, (p, forward)) in members.enumerate() {
        if s.x == s.y {
            if p.first() != s.x || p.vertices().len() < 2 {
                return Err(Rejection::WrongEndpoints { member: i });
            }
            Dicycle::from_vec(p.vertices().to_vec()).check(d)?;
        } else {
            let (from, to) = if forward { (s.x, s.y) } else { (s.y, s.x) };
            if p.first() != from || p.last() != to {
                return Err(Rejection::WrongEndpoints { member: i });
            }
            p.check(d)?;
        }
        let inner: &[VertexId] = if s.x == s.y { &p.vertices()[1..] } else { p.interior() };
        if !seen.insert(p.vertices()) {
            return Err(Rejection::DuplicateMember { member: i });
        }
        for &v in inner {
            if interior_owner.insert(v, i).is_some() || v == s.x || v == s.y {
                return Err(Rejection::NotInternallyDisjoint { vertex: v });
            }
        }
    }
    Ok(())
}

/// Dispatches on the certificate kind, using `m = (k - 1) n + 3` for
/// systems and the bound `N_impl(n, k)` for `BelowThreshold`.
pub fn verify_certificate(d: &Digraph, cert: &Certificate, n: usize, k: usize) -> Verdict {
    match cert {
        Certificate::LongDicycle(c) => verify_long_dicycle(d, c, n),
        Certificate::NarrowSemiChain(chain) => verify_semi_chain(d, chain, n, k),
        Certificate::ShortSystem(s) => verify_system(d, s, n, required_forward(n, k)),
        Certificate::BelowThreshold { bound } => {
            let expected = n_impl(n, k);
            if *bound != expected {
                return Err(Rejection::BoundMismatch { found: *bound, expected });
            }
            if d.vertex_count() as u64 > *bound {
                return Err(Rejection::AboveThreshold { vertices: d.vertex_count(), bound: *bound });
            }
            Ok(())
        }
    }
}

/// `(k - 1) n + 3`, the forward-member count a short system must reach.
pub fn required_forward(n: usize, k: usize) -> usize {
    (k.saturating_sub(1)) * n + 3
}

pub const CERTIFICATE_VERSION: u32 = 1;

/// Wire form: `{"version":1,"kind":..,"n":..,"k":..,"data":{..}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub version: u32,
    pub kind: CertificateKind,
    pub n: usize,
    pub k: usize,
    pub data: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct CycleData {
    cycle: Dicycle,
}

#[derive(Serialize, Deserialize)]
struct ChainData {
    cycles: Vec<Dicycle>,
}

#[derive(Serialize, Deserialize)]
struct BoundData {
    bound: u64,
}

impl CertificateDocument {
    pub fn new(cert: &Certificate, n: usize, k: usize) -> Self {
        let data = match cert {
            Certificate::LongDicycle(c) => serde_json::to_value(CycleData { cycle: c.clone() }),
            Certificate::NarrowSemiChain(s) => serde_json::to_value(ChainData { cycles: s.cycles.clone() }),
            Certificate::ShortSystem(s) => serde_json::to_value(s),
            Certificate::BelowThreshold { bound } => serde_json::to_value(BoundData { bound: *bound }),
        }
        .expect("certificate data is plain JSON");
        CertificateDocument { version: CERTIFICATE_VERSION, kind: cert.kind(), n, k, data }
    }

    pub fn certificate(&self) -> Result<Certificate> {
        if self.version != CERTIFICATE_VERSION {
            return Err(Error::InvalidParameter(format!("unsupported certificate version {}", self.version)));
        }
        let bad = |e: serde_json::Error| Error::InvalidParameter(format!("certificate data: {e}"));
        let data = self.data.clone();
        let cert = match self.kind {
            CertificateKind::LongDicycle => {
                let c: CycleData = serde_json::from_value(data).map_err(bad)?;
                if c.cycle.len() < 2 {
                    return Err(Error::InvalidParameter("dicycle with fewer than two vertices".into()));
                }
                Certificate::LongDicycle(c.cycle)
            }
            CertificateKind::SemiChain => {
                let c: ChainData = serde_json::from_value(data).map_err(bad)?;
                if c.cycles.iter().any(|c| c.len() < 2) {
                    return Err(Error::InvalidParameter("dicycle with fewer than two vertices".into()));
                }
                Certificate::NarrowSemiChain(SemiChain { cycles: c.cycles })
            }
            CertificateKind::ShortSystem => {
                let s: PathSystem = serde_json::from_value(data).map_err(bad)?;
                if s.forward.iter().chain(&s.backward).any(|p| p.vertices().is_empty()) {
                    return Err(Error::InvalidParameter("empty dipath".into()));
                }
                Certificate::ShortSystem(s)
            }
            CertificateKind::BelowThreshold => {
                let b: BoundData = serde_json::from_value(data).map_err(bad)?;
                Certificate::BelowThreshold { bound: b.bound }
            }
        };
        Ok(cert)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }
}
