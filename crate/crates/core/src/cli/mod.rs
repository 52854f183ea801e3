//! The `hrdc` command line.
//!
//! Exit codes: 0 success, 1 verification failure or runtime error, 2 usage
//! error, 3 a cap was exceeded.

pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::bounds::{bound_external, check_code, BoundCheck, CodeReport, max_code_search, BoundError, CheckError, SearchError, SearchLimits};
use crate::constructions::{generator, ConstructionError, Family, DEFAULT_CONSTRUCTION_CAP};
use crate::distributions::{inner_distribution, min_distance, CodeSet, DistError};
use crate::field::{prime_power, FieldError};
use crate::hermitian::{HermitianError, DEFAULT_ENUMERATION_CAP};
use crate::io::{cached_q_explicit, matrix_to_json, read_code_file, write_code, IoError};
use crate::scheme::{q_direct, q_recurrence, EigenError};

#[derive(Debug, Parser)]
#[command(name = "hrdc", version, about = "Hermitian rank-distance codes: eigenvalues, constructions, distributions and bounds")]
pub struct Cli {
    /// Worker threads for parallel sections (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue table Q_k(i) of the scheme on X(n,q).
    Eigen(EigenArgs),
    /// Build a code from one of the algebraic families.
    Construct(ConstructArgs),
    /// Distributions, distance, design strength and bound checks of a code file.
    Analyze(AnalyzeArgs),
    /// Upper bounds on d-codes in X(n,q).
    Bounds(BoundsArgs),
    /// Exact search for a largest d-code in a small X(n,q).
    Search(SearchArgs),
    /// Run a built-in verification suite: identities, constructions or distributions.
    Verify(VerifyArgs),
    /// construct, write, analyze and bound in one run directory.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Explicit,
    Recurrence,
    Direct,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum, default_value = "explicit")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Largest |X(n,q)| enumerated by the direct method.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CodeParams {
    /// thm41, thm42, zero-diag, sym-dn or thm43.
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub n: u32,
    /// Minimum distance; required for thm41 and thm42, fixed by the other families.
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub q: u64,
    /// Largest number of matrices a construction may produce.
    #[arg(long, default_value_t = DEFAULT_CONSTRUCTION_CAP)]
    pub cap: u64,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub code: CodeParams,
    /// Write the code as JSON lines to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Only stream the rank census; nothing is materialized or written.
    #[arg(long)]
    pub census_only: bool,
    /// Overwrite an existing output file.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Code file in JSON lines format.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Distance to validate against; failures then exit with status 1.
    /// Defaults to the code's minimum distance.
    #[arg(long)]
    pub d: Option<u32>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub q: u64,
    /// Stop after this many seconds and report the best code found.
    #[arg(long)]
    pub time_cap: Option<f64>,
    /// Stop after this many search nodes.
    #[arg(long)]
    pub node_cap: Option<u64>,
    /// Largest |X(n,q)| accepted.
    #[arg(long, default_value_t = SearchLimits::default().vertex_cap)]
    pub vertex_cap: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: String,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub code: CodeParams,
    /// Run directory for code.jsonl, analysis.json, bounds.json and config.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Write into a non-empty directory, replacing earlier artifacts.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Cap(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Cap(m) | CliError::Failure(m) => m,
        }
    }
}

fn field_error(e: FieldError) -> CliError {
    match e {
        FieldError::DegreeCap { .. } | FieldError::QuadFieldTooLarge(_) => CliError::Cap(format!("field size cap: {e}")),
        FieldError::NotPrime(_) | FieldError::NotPrimePower(_) | FieldError::ZeroParameter { .. } => {
            CliError::Usage(e.to_string())
        }
        e => CliError::Failure(e.to_string()),
    }
}

fn hermitian_error(e: HermitianError) -> CliError {
    match e {
        HermitianError::EnumerationCap { .. } => CliError::Cap(format!("enumeration cap: {e}")),
        e => CliError::Failure(e.to_string()),
    }
}

fn eigen_error(e: EigenError) -> CliError {
    match e {
        EigenError::InvalidQ(_) | EigenError::ZeroDimension | EigenError::RankOutOfRange { .. } => {
            CliError::Usage(e.to_string())
        }
        EigenError::Field(e) => field_error(e),
        EigenError::Hermitian(e) => hermitian_error(e),
        e => CliError::Failure(e.to_string()),
    }
}

fn dist_error(e: DistError) -> CliError {
    match e {
        DistError::DualTooLarge { .. } => CliError::Cap(format!("dual cap: {e}")),
        DistError::Hermitian(e) => hermitian_error(e),
        DistError::Eigen(e) => eigen_error(e),
        e => CliError::Failure(e.to_string()),
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::SizeCap { .. } => CliError::Cap(format!("--cap: {e}")),
            ConstructionError::Parameters { .. } | ConstructionError::UnknownFamily(_) => CliError::Usage(e.to_string()),
            ConstructionError::Field(e) => field_error(e),
            ConstructionError::Hermitian(e) => hermitian_error(e),
            ConstructionError::Dist(e) => dist_error(e),
            e => CliError::Failure(e.to_string()),
        }
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        eigen_error(e)
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Bound(e) => e.into(),
            CheckError::Dist(e) => dist_error(e),
            CheckError::Eigen(e) => e.into(),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::DistanceOutOfRange { .. } => CliError::Usage(e.to_string()),
            SearchError::Field(e) => field_error(e),
            SearchError::Hermitian(HermitianError::EnumerationCap { .. }) => {
                CliError::Cap(format!("--vertex-cap: {e}"))
            }
            SearchError::Hermitian(e) => hermitian_error(e),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Field(e) => field_error(e),
            IoError::Dist(e) => dist_error(e),
            e => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_text(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return 2;
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(cli.command, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Eigen(a) => cmd_eigen(a, out),
        Command::Construct(a) => cmd_construct(a, out),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Bounds(a) => {
            prime_power(a.q).map_err(field_error)?;
            emit(out, None, &to_json_text(&bound_external(a.n, a.d, a.q)?))?;
            Ok(0)
        }
        Command::Search(a) => cmd_search(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Pipeline(a) => cmd_pipeline(a, out),
    }
}

fn cmd_eigen(a: EigenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    prime_power(a.q).map_err(field_error)?;
    let table = match a.method {
        Method::Explicit => cached_q_explicit(a.n, a.q)?,
        Method::Recurrence => q_recurrence(a.n, a.q)?,
        Method::Direct => q_direct(a.n, a.q, a.cap).map_err(|e| match e {
            EigenError::Hermitian(HermitianError::EnumerationCap { .. }) => CliError::Cap(format!("--cap: {e}")),
            e => e.into(),
        })?,
    };
    let text = match a.format {
        Format::Json => to_json_text(&table.to_json()),
        Format::Csv => table.to_csv(),
    };
    emit(out, a.out.as_deref(), &text)?;
    Ok(0)
}

impl CodeParams {
    /// The distance passed to the generator.
    fn distance(&self) -> Result<u32, CliError> {
        match (self.family, self.d) {
            (Family::Thm41 | Family::Thm42, Some(d)) => Ok(d),
            (Family::Thm41 | Family::Thm42, None) => {
                Err(CliError::Usage(format!("--d is required for family {}", self.family)))
            }
            (f, d) => {
                let designed = f.designed_distance(self.n, 0);
                match d {
                    Some(d) if d != designed => Err(CliError::Usage(format!(
                        "family {f} has distance {designed} at n = {}, got --d {d}",
                        self.n
                    ))),
                    _ => Ok(designed),
                }
            }
        }
    }
}

#[derive(Serialize)]
struct ConstructSummary {
    family: String,
    n: u32,
    d: u32,
    q: u64,
    size: String,
    additive: bool,
    rank_census: Vec<u64>,
    min_distance: Option<usize>,
    out: Option<String>,
}

fn census_min(census: &[u64], n: usize) -> usize {
    census.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map_or(n + 1, |(i, _)| i)
}

fn refuse_existing(path: &Path, force: bool) -> Result<(), CliError> {
    if path.exists() && !force {
        return Err(CliError::Usage(format!("{} exists; pass --force to overwrite", path.display())));
    }
    Ok(())
}

fn cmd_construct(a: ConstructArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = &a.code;
    let d = p.distance()?;
    let g = generator(p.family, p.n, d, p.q, p.cap)?;
    let n = p.n as usize;
    let summary = if a.census_only {
        if a.out.is_some() {
            return Err(CliError::Usage("--census-only writes no code file; drop --out".into()));
        }
        let census = g.rank_census(p.cap)?;
        // for non-additive families the element census says nothing about distance
        let md = p.family.is_additive().then(|| census_min(&census, n));
        ConstructSummary {
            family: p.family.to_string(),
            n: p.n,
            d,
            q: p.q,
            size: g.size().to_string(),
            additive: p.family.is_additive(),
            rank_census: census,
            min_distance: md,
            out: None,
        }
    } else {
        if let Some(path) = &a.out {
            refuse_existing(path, a.force)?;
        }
        let code = g.materialize(p.cap)?;
        let md = verify::code_min_distance(&code).map_err(dist_error)?;
        if let Some(path) = &a.out {
            let mut buf = Vec::new();
            write_code(&code, &mut buf)?;
            fs::write(path, buf)?;
        }
        ConstructSummary {
            family: p.family.to_string(),
            n: p.n,
            d,
            q: p.q,
            size: code.len().to_string(),
            additive: code.is_additive(),
            rank_census: code.rank_census(),
            min_distance: Some(md),
            out: a.out.as_ref().map(|p| p.display().to_string()),
        }
    };
    emit(out, None, &to_json_text(&summary))?;
    Ok(0)
}

/// Output of `analyze` and the pipeline's analysis.json.
#[derive(Serialize)]
pub struct Analysis<'a> {
    pub n: usize,
    pub q: u64,
    pub size: usize,
    pub additive: bool,
    pub inner: &'a [String],
    pub dual: &'a [String],
    pub min_distance: usize,
    pub design_strength: usize,
    pub bounds: BoundsSection<'a>,
}

#[derive(Serialize)]
pub struct BoundsSection<'a> {
    /// Distance the code was validated against.
    pub d: u32,
    pub passed: bool,
    pub checks: &'a [BoundCheck],
    pub closed_form_match: Option<bool>,
    pub failures: &'a [String],
    pub notes: &'a [String],
}

impl<'a> From<&'a CodeReport> for Analysis<'a> {
    fn from(r: &'a CodeReport) -> Self {
        Analysis {
            n: r.n,
            q: r.q,
            size: r.size,
            additive: r.additive,
            inner: &r.inner,
            dual: &r.dual,
            min_distance: r.min_distance,
            design_strength: r.design_strength,
            bounds: BoundsSection {
                d: r.d,
                passed: r.passed(),
                checks: &r.bounds,
                closed_form_match: r.closed_form_match,
                failures: &r.failures,
                notes: &r.notes,
            },
        }
    }
}

fn default_distance(code: &CodeSet) -> Result<u32, CliError> {
    let inner = inner_distribution(code).map_err(dist_error)?;
    Ok(min_distance(&inner).clamp(1, code.n()) as u32)
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let code = read_code_file(&a.input)?;
    let d = match a.d {
        Some(d) => d,
        None => default_distance(&code)?,
    };
    let report = check_code(&code, d)?;
    emit(out, None, &to_json_text(&Analysis::from(&report)))?;
    Ok(if a.d.is_some() && !report.passed() { 1 } else { 0 })
}

fn code_to_json(code: &CodeSet) -> Value {
    Value::from(code.matrices().iter().map(|m| matrix_to_json(code.tower(), m.matrix())).collect::<Vec<_>>())
}

fn cmd_search(a: SearchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let time_cap = match a.time_cap {
        Some(s) if !(s > 0.0 && s.is_finite()) => return Err(CliError::Usage("--time-cap must be positive".into())),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    if a.node_cap == Some(0) {
        return Err(CliError::Usage("--node-cap must be positive".into()));
    }
    let limits = SearchLimits { vertex_cap: a.vertex_cap, node_cap: a.node_cap, time_cap };
    let r = max_code_search(a.n, a.q, a.d, limits)?;
    let inner = inner_distribution(&r.witness).map_err(dist_error)?;
    let v = serde_json::json!({
        "n": a.n,
        "d": a.d,
        "q": a.q,
        "size": r.size,
        "optimal": r.optimal,
        "nodes": r.nodes,
        "inner": inner.to_strings(),
        "witness": code_to_json(&r.witness),
    });
    emit(out, None, &to_json_text(&v))?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let Some(report) = verify::run_suite(&a.suite) else {
        return Err(CliError::Usage(format!(
            "unknown suite {:?}; expected one of {}",
            a.suite,
            verify::SUITES.join(", ")
        )));
    };
    emit(out, None, &to_json_text(&report))?;
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct PipelineConfig<'a> {
    family: &'a str,
    n: u32,
    d: u32,
    q: u64,
    cap: u64,
}

#[derive(Serialize)]
struct PipelineSummary {
    out_dir: String,
    artifacts: Vec<&'static str>,
    size: usize,
    additive: bool,
    inner: Vec<String>,
    passed: bool,
}

/// File names written by `pipeline`, in order.
pub const PIPELINE_ARTIFACTS: [&str; 4] = ["config.json", "code.jsonl", "analysis.json", "bounds.json"];

fn cmd_pipeline(a: PipelineArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = &a.code;
    let d = p.distance()?;
    let dir = &a.out_dir;
    if dir.exists() {
        let non_empty = fs::read_dir(dir)?.next().is_some();
        if non_empty && !a.force {
            return Err(CliError::Usage(format!("{} is not empty; pass --force to overwrite", dir.display())));
        }
    }
    let code = generator(p.family, p.n, d, p.q, p.cap)?.materialize(p.cap)?;
    let report = check_code(&code, d)?;
    let bounds = bound_external(p.n, d, p.q)?;
    fs::create_dir_all(dir)?;
    let config = PipelineConfig { family: p.family.name(), n: p.n, d, q: p.q, cap: p.cap };
    fs::write(dir.join("config.json"), to_json_text(&config))?;
    let mut buf = Vec::new();
    write_code(&code, &mut buf)?;
    fs::write(dir.join("code.jsonl"), buf)?;
    fs::write(dir.join("analysis.json"), to_json_text(&Analysis::from(&report)))?;
    fs::write(dir.join("bounds.json"), to_json_text(&bounds))?;
    let summary = PipelineSummary {
        out_dir: dir.display().to_string(),
        artifacts: PIPELINE_ARTIFACTS.to_vec(),
        size: code.len(),
        additive: code.is_additive(),
        inner: report.inner.clone(),
        passed: report.passed(),
    };
    emit(out, None, &to_json_text(&summary))?;
    Ok(if report.passed() { 0 } else { 1 })
}
