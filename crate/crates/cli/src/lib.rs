//! Commands behind the `unavoidable` binary. Each `cmd_*` function does the
//! work and returns its output as data; `main` only parses flags, writes
//! files and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;
use unavoidable_core::generators::{self, GeneratorSpec};
use unavoidable_core::io::{parse_edge_list, to_dot, write_edge_list};
use unavoidable_core::{
    is_strong, n_impl, unavoidable, verify_certificate, Certificate, CertificateDocument, CertificateKind, Digraph,
    Error as CoreError, Rejection,
};

pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NOT_STRONG: u8 = 3;
    pub const INVARIANT: u8 = 4;
}

pub const MAX_PROBE_SIZE: usize = 200;
pub const MAX_PROBE_SAMPLES: usize = 100_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{path}: {source}")]
    Input { path: PathBuf, source: CoreError },

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("{0}")]
    Usage(String),

    #[error("certificate rejected: {0}")]
    Rejected(Rejection),

    #[error("self-check failed, extractor produced a rejected certificate: {0}")]
    SelfCheck(Rejection),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => exit::USAGE,
            CliError::Input { source, .. } | CliError::Core(source) => core_exit_code(source),
            CliError::Rejected(_) => exit::VERIFY_FAILED,
            CliError::SelfCheck(_) => exit::INVARIANT,
        }
    }
}

fn core_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::NotStrong => exit::NOT_STRONG,
        CoreError::ProofInvariantViolation(_) => exit::INVARIANT,
        CoreError::Cancelled => exit::VERIFY_FAILED,
        _ => exit::USAGE,
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn load_digraph(path: &Path) -> CliResult<Digraph> {
    parse_edge_list(&read(path)?).map_err(|source| CliError::Input { path: path.to_owned(), source })
}

pub fn load_certificate(path: &Path) -> CliResult<CertificateDocument> {
    CertificateDocument::from_json(&read(path)?).map_err(|source| CliError::Input { path: path.to_owned(), source })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub vertices: usize,
    pub edges: usize,
    pub strong: bool,
    pub n: usize,
    pub k: usize,
    pub n_impl: u64,
    pub kind: Option<CertificateKind>,
    pub wall_ms: f64,
    pub verified: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub certificate: Certificate,
    /// Pretty JSON document, byte-stable for fixed inputs.
    pub json: String,
    pub report: RunReport,
}

fn check_parameters(n: usize, k: usize) -> CliResult<()> {
    if n < 2 || k < 1 {
        return Err(CliError::Usage(format!("need n >= 2 and k >= 1, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Runs the extractor on `d` and re-verifies its output before returning.
pub fn extract(d: &Digraph, n: usize, k: usize) -> CliResult<Extraction> {
    check_parameters(n, k)?;
    let started = Instant::now();
    let strong = is_strong(d);
    let mut report = RunReport {
        vertices: d.vertex_count(),
        edges: d.edge_count(),
        strong,
        n,
        k,
        n_impl: n_impl(n, k),
        kind: None,
        wall_ms: 0.0,
        verified: None,
    };
    let certificate = unavoidable(d, n, k)?;
    report.kind = Some(certificate.kind());
    let verdict = verify_certificate(d, &certificate, n, k);
    report.verified = Some(verdict.is_ok());
    report.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    if let Err(reason) = verdict {
        return Err(CliError::SelfCheck(reason));
    }
    info!("{} on {} vertices in {:.1} ms", certificate.kind(), d.vertex_count(), report.wall_ms);
    let json = CertificateDocument::new(&certificate, n, k).to_json();
    Ok(Extraction { certificate, json, report })
}

pub fn cmd_extract(input: &Path, n: usize, k: usize) -> CliResult<Extraction> {
    check_parameters(n, k)?;
    extract(&load_digraph(input)?, n, k)
}

/// Verifies the certificate in `cert` against the digraph in `input`.
/// `n` and `k` default to the values recorded in the certificate.
pub fn cmd_verify(input: &Path, cert: &Path, n: Option<usize>, k: Option<usize>) -> CliResult<CertificateKind> {
    let d = load_digraph(input)?;
    let doc = load_certificate(cert)?;
    let certificate = doc.certificate().map_err(|source| CliError::Input { path: cert.to_owned(), source })?;
    let (n, k) = (n.unwrap_or(doc.n), k.unwrap_or(doc.k));
    check_parameters(n, k)?;
    verify_certificate(&d, &certificate, n, k).map_err(CliError::Rejected)?;
    Ok(certificate.kind())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dot,
    Json,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    generator: &'a GeneratorSpec,
    vertices: Vec<u32>,
    edges: Vec<[u32; 2]>,
}

pub fn cmd_generate(spec: &GeneratorSpec, format: GraphFormat) -> CliResult<String> {
    let d = spec.generate()?;
    Ok(render_generated(spec, &d, format))
}

pub fn render_generated(spec: &GeneratorSpec, d: &Digraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => write_edge_list(d, &[format!("generator: {}", spec.to_json())]),
        GraphFormat::Dot => format!("// generator: {}\n{}", spec.to_json(), to_dot(d, spec.family())),
        GraphFormat::Json => {
            let doc = GraphJson {
                generator: spec,
                vertices: d.vertices().map(|v| v.0).collect(),
                edges: d.edges().map(|(u, v)| [u.0, v.0]).collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub size: usize,
    pub samples: usize,
    pub long_dicycle: f64,
    pub semi_chain: f64,
    pub short_system: f64,
    pub below_threshold: f64,
    pub verify_failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub n: usize,
    pub k: usize,
    pub sizes: (usize, usize),
    pub samples: usize,
    pub seed: u64,
    pub edge_prob: f64,
}

/// splitmix64 step, used to derive independent per-sample seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn sample_seed(seed: u64, size: usize, sample: usize) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(size as u64)) ^ sample as u64)
}

/// For every size, the fraction of sampled random strong digraphs on which
/// the extractor returns each certificate kind.
pub fn cmd_probe(config: &ProbeConfig) -> CliResult<Vec<ProbeRow>> {
    check_parameters(config.n, config.k)?;
    let (lo, hi) = config.sizes;
    if lo < 1 || lo > hi || hi > MAX_PROBE_SIZE {
        return Err(CliError::Usage(format!("sizes must satisfy 1 <= lo <= hi <= {MAX_PROBE_SIZE}")));
    }
    if config.samples > MAX_PROBE_SAMPLES {
        return Err(CliError::Usage(format!("at most {MAX_PROBE_SAMPLES} samples")));
    }
    if !(0.0..=1.0).contains(&config.edge_prob) {
        return Err(CliError::Usage(format!("edge probability {} outside [0, 1]", config.edge_prob)));
    }
    if config.samples == 0 {
        return Ok(Vec::new());
    }
    let jobs: Vec<(usize, usize)> = (lo..=hi).flat_map(|s| (0..config.samples).map(move |i| (s, i))).collect();
    let outcomes: Vec<(usize, CertificateKind, bool)> = jobs
        .par_iter()
        .map(|&(size, i)| {
            let d = generators::random_strong(size, config.edge_prob, sample_seed(config.seed, size, i))?;
            let cert = unavoidable(&d, config.n, config.k)?;
            let ok = verify_certificate(&d, &cert, config.n, config.k).is_ok();
            Ok((size, cert.kind(), ok))
        })
        .collect::<CliResult<_>>()?;
    let rows = (lo..=hi)
        .map(|size| {
            let of_size: Vec<_> = outcomes.iter().filter(|o| o.0 == size).collect();
            let fraction = |kind| of_size.iter().filter(|o| o.1 == kind).count() as f64 / of_size.len() as f64;
            ProbeRow {
                size,
                samples: of_size.len(),
                long_dicycle: fraction(CertificateKind::LongDicycle),
                semi_chain: fraction(CertificateKind::SemiChain),
                short_system: fraction(CertificateKind::ShortSystem),
                below_threshold: fraction(CertificateKind::BelowThreshold),
                verify_failures: of_size.iter().filter(|o| !o.2).count(),
            }
        })
        .collect();
    Ok(rows)
}

pub const PROBE_HEADER: &str =
    "size\tsamples\tlong_dicycle\tsemi_chain\tshort_system\tbelow_threshold\tverify_failures";

pub fn render_probe_tsv(rows: &[ProbeRow]) -> String {
    let mut out = format!("{PROBE_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}",
            r.size, r.samples, r.long_dicycle, r.semi_chain, r.short_system, r.below_threshold, r.verify_failures
        )
        .unwrap();
    }
    out
}

pub fn render_probe_json(rows: &[ProbeRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("serializable");
    s.push('\n');
    s
}

/// Parses `a..b` (inclusive), `a..=b`, or a single size.
pub fn parse_sizes(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("bad size range {text:?}, expected a..b"));
    let number = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((lo, hi)) => Ok((number(lo)?, number(hi.strip_prefix('=').unwrap_or(hi))?)),
        None => number(text).map(|s| (s, s)),
    }
}
