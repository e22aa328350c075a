use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use unavoidable_cli::{
    cmd_extract, cmd_generate, cmd_probe, cmd_verify, exit, parse_sizes, render_probe_json, render_probe_tsv, CliError,
    CliResult, GraphFormat, ProbeConfig,
};
use unavoidable_core::GeneratorSpec;

/// Extract, verify and probe unavoidable substructures of strong digraphs.
///
/// Exit codes: 0 success (a below-threshold answer included), 1 certificate
/// rejected, 2 bad input or parameters, 3 input not strongly connected,
/// 4 internal invariant violated.
#[derive(Parser)]
#[command(name = "unavoidable", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a certificate from an edge-list file.
    Extract {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Certificate destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run report destination; stderr when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a certificate against an edge-list file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        /// Defaults to the value stored in the certificate.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Write a generated instance.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Tabulate certificate kinds over random strong digraphs.
    Probe {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Inclusive range such as `14..20`.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability of the sampled digraphs.
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        #[arg(long, value_enum, default_value = "tsv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Family {
    RandomStrong,
    TriangleChain,
    Flower,
    HexagonalGrid,
    CircularGrid,
    BidirectedQuarterGrid,
    AscendingCyclicQuarterGrid,
    DescendingCyclicQuarterGrid,
    CompleteRayPrefix,
    SteinExample,
}

#[derive(clap::Args)]
struct FamilyParams {
    #[arg(long)]
    v: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    suppress: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Edgelist,
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

fn need<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag} for this family")))
}

fn spec_from(family: Family, p: &FamilyParams) -> CliResult<GeneratorSpec> {
    Ok(match family {
        Family::RandomStrong => {
            GeneratorSpec::RandomStrong { v: need(p.v, "v")?, p: need(p.p, "p")?, seed: need(p.seed, "seed")? }
        }
        Family::TriangleChain => GeneratorSpec::TriangleChain { k: need(p.k, "k")? },
        Family::Flower => GeneratorSpec::Flower { m: need(p.m, "m")? },
        Family::HexagonalGrid => GeneratorSpec::HexagonalGrid { n: need(p.n, "n")?, h: need(p.h, "h")? },
        Family::CircularGrid => GeneratorSpec::CircularGrid { n: need(p.n, "n")?, h: need(p.h, "h")? },
        Family::BidirectedQuarterGrid => {
            GeneratorSpec::BidirectedQuarterGrid { w: need(p.w, "w")?, h: need(p.h, "h")?, suppress: p.suppress }
        }
        Family::AscendingCyclicQuarterGrid => {
            GeneratorSpec::AscendingCyclicQuarterGrid { w: need(p.w, "w")?, h: need(p.h, "h")? }
        }
        Family::DescendingCyclicQuarterGrid => {
            GeneratorSpec::DescendingCyclicQuarterGrid { w: need(p.w, "w")?, h: need(p.h, "h")? }
        }
        Family::CompleteRayPrefix => {
            GeneratorSpec::CompleteRayPrefix { w: need(p.w, "w")?, h: need(p.h, "h")?, c: need(p.c, "c")? }
        }
        Family::SteinExample => GeneratorSpec::SteinExample { l: need(p.l, "l")?, h: need(p.h, "h")? },
    })
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Extract { input, n, k, out, report } => {
            let extraction = cmd_extract(&input, n, k)?;
            emit(out.as_deref(), &extraction.json)?;
            let mut report_json = serde_json::to_string_pretty(&extraction.report).expect("serializable");
            report_json.push('\n');
            match report {
                Some(path) => emit(Some(&path), &report_json)?,
                None => eprint!("{report_json}"),
            }
        }
        Command::Verify { input, cert, n, k } => {
            let kind = cmd_verify(&input, &cert, n, k)?;
            println!("ok: {kind} certificate verified");
        }
        Command::Generate { family, format, out, params } => {
            let spec = spec_from(family, &params)?;
            let format = match format {
                OutputFormat::Edgelist => GraphFormat::EdgeList,
                OutputFormat::Dot => GraphFormat::Dot,
                OutputFormat::Json => GraphFormat::Json,
            };
            emit(out.as_deref(), &cmd_generate(&spec, format)?)?;
        }
        Command::Probe { n, k, sizes, samples, seed, p, format, out } => {
            let config = ProbeConfig { n, k, sizes: parse_sizes(&sizes)?, samples, seed, edge_prob: p };
            let rows = cmd_probe(&config)?;
            let text = match format {
                TableFormat::Tsv => render_probe_tsv(&rows),
                TableFormat::Json => render_probe_json(&rows),
            };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("UNAVOIDABLE_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Rejected(reason) = &e {
                eprintln!("reason: {}", reason.code());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
