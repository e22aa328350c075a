//! Extraction and verification of unavoidable substructures in finite
//! strongly connected digraphs.
//!
//! Every strong digraph that is large enough contains a dicycle on at
//! least `n` vertices, an `n`-narrow semi-chain of `k` dicycles, or an
//! `n`-short `(m, 1)`-system of dipaths with `m >= (k-1)n + 3`.
//! [`unavoidable`] finds one of them and returns a [`Certificate`] that
//! [`verify_certificate`] checks without trusting the extractor.
//!
//! ```
//! use unavoidable_core::{generators, unavoidable, verify_certificate};
//!
//! let d = generators::triangle_chain(4).unwrap();
//! let cert = unavoidable(&d, 4, 2).unwrap();
//! assert!(verify_certificate(&d, &cert, 4, 2).is_ok());
//! ```

pub mod cancel;
pub mod certificate;
pub mod error;
pub mod extract;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod search;
pub mod thresholds;

pub use cancel::CancelToken;
pub use certificate::{
    verify_certificate, verify_long_dicycle, verify_semi_chain, verify_system, Certificate, CertificateDocument,
    CertificateKind, PathSystem, Rejection, SemiChain,
};
pub use error::{Error, Result};
pub use extract::{
    dipath_or_fan, long_dipath_or_out_star, semi_chain_along, system_from_fan, unavoidable, unavoidable_with, Fan,
    FanWitness, WeakWitness,
};
pub use flow::{max_disjoint_paths, max_internally_disjoint, DisjointPathResult};
pub use generators::GeneratorSpec;
pub use graph::{Dicycle, Digraph, Dipath, VertexId};
pub use search::{bfs_layers, is_strong, min_exterior_cost_dipath, shortest_dipath, BfsLayering, CostedDipath};
pub use thresholds::{fan_degree, n_impl, n_weak};
