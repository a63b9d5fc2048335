//! Command-line front end: `analyze`, `invariants` and `verify`.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 structure assertion failed,
//! 3 closure cap exceeded, 4 inconclusive certificate, 5 refuted certificate.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ffield::Field;
use crate::invariants::{
    orbit_chern_generators, search_generators, sparsity_invariants_with, GeneratorSet, InvariantError, Provenance,
};
use crate::matgroup::{group_closure, parse_generator_file, GroupClosure, MatError, DEFAULT_CAP};
use crate::poly::MultiPoly;
use crate::sparsity::{analyze, enumerate_sparsity_group, parse_pattern, SparsityError, StructureReport};
use crate::verify::{polynomiality_certificate, CertificateReport, CertifyOptions, Verdict, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_REFUTED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "polyglue", version, about = "Sparsity groups over finite fields and their invariant rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Block structure, transvection sets and order of a sparsity group.
    Analyze(RunConfig),
    /// Synthesize invariant generators and certify them.
    Invariants(RunConfig),
    /// Certify externally supplied generators.
    Verify {
        #[command(flatten)]
        cfg: RunConfig,
        /// One polynomial per line, or the JSON written by `invariants --json`.
        #[arg(long)]
        polys: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Sparsity pattern file.
    #[arg(long, required_unless_present = "generators", conflicts_with = "generators")]
    pub pattern: Option<PathBuf>,
    /// Matrix-group file: a `field` line, then one matrix per line.
    #[arg(long)]
    pub generators: Option<PathBuf>,
    /// Maximum number of group elements to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = positive_usize)]
    pub cap: usize,
    /// Degree bound for the generator search; also the hsop power bound.
    #[arg(long, value_parser = positive_u64)]
    pub max_degree: Option<u64>,
    /// Hilbert comparison depth.
    #[arg(long, value_parser = positive_u64)]
    pub depth: Option<u64>,
    #[arg(long)]
    pub json: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    positive_u64(s).map(|v| v as usize)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Sparsity(#[from] SparsityError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let cap = |e: &MatError| matches!(e, MatError::ClosureCapExceeded { .. });
        match self {
            CliError::Sparsity(SparsityError::Mat(e)) | CliError::Mat(e) if cap(e) => EXIT_CAP,
            CliError::Invariant(InvariantError::Mat(e)) if cap(e) => EXIT_CAP,
            CliError::Sparsity(SparsityError::AssertionFailed { .. }) => EXIT_ASSERTION,
            CliError::Invariant(InvariantError::AssertionFailed(_)) => EXIT_ASSERTION,
            CliError::Verify(VerifyError::BudgetExceeded { .. })
            | CliError::Invariant(InvariantError::Verify(VerifyError::BudgetExceeded { .. }))
            | CliError::Invariant(InvariantError::NotPolynomialWithinBudget { .. })
            | CliError::Invariant(InvariantError::IncompleteBlock(_)) => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        }
    }
}

/// A rendered report and the exit code it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

pub fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Polynomial => EXIT_OK,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        Verdict::Refuted => EXIT_REFUTED,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes via a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Usage(format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(contents.as_bytes())?;
        f.sync_all()
    });
    if let Err(e) = result.and_then(|_| fs::rename(&tmp, path)) {
        let _ = fs::remove_file(&tmp);
        return Err(io(e));
    }
    Ok(())
}

fn load_pattern(path: &Path) -> Result<crate::sparsity::SparsityPattern, CliError> {
    parse_pattern(&read(path)?).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn load_matrix_group(path: &Path, cap: usize) -> Result<GroupClosure, CliError> {
    let (field, gens) = parse_generator_file(&read(path)?).map_err(|(line, e)| CliError::Parse {
        path: path.to_path_buf(),
        message: format!("line {line}: {e}"),
    })?;
    let n = gens
        .first()
        .map(|g| g.dim())
        .ok_or_else(|| CliError::Parse {
            path: path.to_path_buf(),
            message: "no matrices".into(),
        })?;
    Ok(group_closure(&field, n, &gens, cap)?)
}

fn load_polys(path: &Path, field: &Field, nvars: usize) -> Result<GeneratorSet, CliError> {
    let text = read(path)?;
    let parse_err = |message: String| CliError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
        return GeneratorSet::from_json(field, nvars, &value).map_err(|e| parse_err(e.to_string()));
    }
    let mut polys = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f = MultiPoly::parse(field, nvars, line).map_err(|e| parse_err(format!("line {}: {e}", k + 1)))?;
        polys.push((f, Provenance::Searched));
    }
    Ok(GeneratorSet::new(field, nvars, polys))
}

fn certify_options(cfg: &RunConfig) -> CertifyOptions {
    CertifyOptions {
        depth: cfg.depth,
        max_power: cfg.max_degree,
        ..CertifyOptions::default()
    }
}

fn render_generators_text(gens: &GeneratorSet) -> String {
    let mut out = format!("generators ({}):\n", gens.len());
    for g in gens.generators() {
        out += &format!("  degree {:>4}  {:<10}  {}\n", g.degree, format!("{:?}", g.provenance), g.poly);
    }
    out
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let path = cfg
        .pattern
        .as_ref()
        .ok_or_else(|| CliError::Usage("analyze needs --pattern".into()))?;
    let report = analyze(&load_pattern(path)?, cfg.cap)?;
    let failure = report.first_failure();
    let output = if cfg.json {
        let mut v = report.to_json();
        v["status"] = json!(match &failure {
            Some(tag) => format!("assertion ({tag}) failed"),
            None => "ok".to_string(),
        });
        v.to_string()
    } else {
        let mut s = report.to_text();
        if let Some(tag) = &failure {
            s += &format!("AssertionFailed: ({tag})\n");
        }
        s
    };
    Ok(Outcome {
        code: if failure.is_some() { EXIT_ASSERTION } else { EXIT_OK },
        output,
    })
}

fn certificate_outcome(
    cfg: &RunConfig,
    group: &GroupClosure,
    gens: &GeneratorSet,
    extra: Value,
    header: String,
) -> Result<Outcome, CliError> {
    if gens.len() != group.dim() || !gens.is_complete() {
        let output = if cfg.json {
            json!({"verdict": "Inconclusive", "order": group.order(), "generators": gens.to_json(), "complete": false})
                .to_string()
        } else {
            format!(
                "{header}{}verdict: Inconclusive (found {} of {} generators)\n",
                render_generators_text(gens),
                gens.len(),
                group.dim()
            )
        };
        return Ok(Outcome {
            code: EXIT_INCONCLUSIVE,
            output,
        });
    }
    let cert: CertificateReport = polynomiality_certificate(group, gens, certify_options(cfg))?;
    let output = if cfg.json {
        let mut v = json!({"generators": gens.to_json(), "certificate": cert.to_json()});
        if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
            map.extend(more);
        }
        v.to_string()
    } else {
        format!("{header}{}{}", render_generators_text(gens), cert.to_text())
    };
    Ok(Outcome {
        code: verdict_code(cert.verdict),
        output,
    })
}

fn pattern_invariants(cfg: &RunConfig, path: &Path) -> Result<Outcome, CliError> {
    let report: StructureReport = analyze(&load_pattern(path)?, cfg.cap)?;
    if let Some(tag) = report.first_failure() {
        return Err(SparsityError::AssertionFailed {
            tag,
            report: Box::new(report),
        }
        .into());
    }
    let inv = sparsity_invariants_with(&report, cfg.max_degree)?;
    let gens = inv.pullback()?;
    let c_inv = inv.change_of_basis.inverse()?;
    let group = report.group.conjugate(&c_inv)?;
    let header = format!(
        "order: {}\nchange of basis: {}\nrescaled generators: {}\n",
        report.order,
        inv.change_of_basis,
        inv.generators
            .polynomials()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let extra = json!({
        "order": report.order,
        "change_of_basis": inv.change_of_basis.to_string(),
        "rescaled_generators": inv.generators.to_json(),
    });
    certificate_outcome(cfg, &group, &gens, extra, header)
}

fn matrix_invariants(cfg: &RunConfig, path: &Path) -> Result<Outcome, CliError> {
    let group = load_matrix_group(path, cfg.cap)?;
    let order: Vec<usize> = (0..group.dim()).collect();
    let (gens, route) = match orbit_chern_generators(&group, &order) {
        Ok(g) => (g, "orbit Chern classes".to_string()),
        Err(
            e @ (InvariantError::NotAPGroup { .. }
            | InvariantError::FlagNotStable(_)
            | InvariantError::OrbitProductMismatch { .. }),
        ) => {
            let bound = cfg.max_degree.unwrap_or(group.order() as u64 + 1);
            (search_generators(&group, bound)?, format!("search ({e})"))
        }
        Err(e) => return Err(e.into()),
    };
    let header = format!("order: {}\nmethod: {route}\n", group.order());
    certificate_outcome(cfg, &group, &gens, json!({"order": group.order(), "method": route}), header)
}

pub fn cmd_invariants(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match (&cfg.pattern, &cfg.generators) {
        (Some(p), _) => pattern_invariants(cfg, p),
        (None, Some(g)) => matrix_invariants(cfg, g),
        (None, None) => Err(CliError::Usage("need --pattern or --generators".into())),
    }
}

pub fn cmd_verify(cfg: &RunConfig, polys: &Path) -> Result<Outcome, CliError> {
    let group = match (&cfg.pattern, &cfg.generators) {
        (Some(p), _) => enumerate_sparsity_group(&load_pattern(p)?, cfg.cap)?,
        (None, Some(g)) => load_matrix_group(g, cfg.cap)?,
        (None, None) => return Err(CliError::Usage("need --pattern or --generators".into())),
    };
    let gens = load_polys(polys, group.field(), group.dim())?;
    if gens.len() != group.dim() {
        return Err(CliError::Parse {
            path: polys.to_path_buf(),
            message: format!("expected {} polynomials, found {}", group.dim(), gens.len()),
        });
    }
    let cert = polynomiality_certificate(&group, &gens, certify_options(cfg))?;
    let output = if cfg.json {
        cert.to_json().to_string()
    } else {
        cert.to_text()
    };
    Ok(Outcome {
        code: verdict_code(cert.verdict),
        output,
    })
}

/// Runs a parsed command, writing the report to `--out` or returning it.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let (cfg, outcome) = match &cli.command {
        Command::Analyze(cfg) => (cfg, cmd_analyze(cfg)),
        Command::Invariants(cfg) => (cfg, cmd_invariants(cfg)),
        Command::Verify { cfg, polys } => (cfg, cmd_verify(cfg, polys)),
    };
    let outcome = match outcome {
        Err(CliError::Sparsity(SparsityError::AssertionFailed { tag, report })) => Outcome {
            code: EXIT_ASSERTION,
            output: if cfg.json {
                let mut v = report.to_json();
                v["status"] = json!(format!("assertion ({tag}) failed"));
                v.to_string()
            } else {
                format!("{}AssertionFailed: ({tag})\n", report.to_text())
            },
        },
        other => other?,
    };
    let mut output = outcome.output;
    if !output.ends_with('\n') {
        output.push('\n');
    }
    if let Some(path) = &cfg.out {
        write_atomic(path, &output)?;
        return Ok(Outcome {
            code: outcome.code,
            output: String::new(),
        });
    }
    Ok(Outcome {
        code: outcome.code,
        output,
    })
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
