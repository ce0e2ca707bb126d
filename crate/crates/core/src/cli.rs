//! `topocryst` command line: argument parsing, input loading and the JSON
//! reports of each subcommand.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    angle_bound_check, classify_2d, classify_3d, dual_lattice, orthogonal_symmetry, point_group, root_lattice,
    shortest_vectors, tight_frame_check, RootKind, Witness,
};
use crate::block::{builtin_block, AnyBlock, BuildingBlock, BUILTIN_NAMES};
use crate::error::{Error, Result};
use crate::graph::QuotientGraph;
use crate::lattice::{parse_lattice, AnyLattice, Lattice};
use crate::net::{build_net, ExportFormat, Window};
use crate::realization::{standard_realization, DEFAULT_MAX_ITER, DEFAULT_SEED, DEFAULT_TOL};
use crate::rings::{RingSearch, DEFAULT_GIRTH_CAP};
use crate::scalar::Scalar;
use crate::symmetry::symmetry_report;
use crate::verify;

/// Version stamped into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "TOPOCRYST_THREADS";

#[derive(Debug, Parser)]
#[command(name = "topocryst", version, about = "Periodic nets from quotient graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export a finite piece of the net.
    Build(BuildArgs),
    /// Shortest vectors, point group and orthogonal symmetry of a lattice.
    Lattice(LatticeArgs),
    /// Girth, ring counts and ring words.
    Rings(RingsArgs),
    /// Point group, strong isotropy and chirality of the net.
    Symmetry(GraphArg),
    /// Compute the standard realization of a graph.
    Standardize(StandardizeArgs),
    /// Recompute every reference result and print a pass/fail table.
    VerifyPaper,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// QG file, or `builtin:NAME`.
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub graph: String,
    /// Cells `[−n, n]^d`.
    #[arg(long, default_value_t = 1)]
    pub window: i64,
    #[arg(long, default_value = "xyz")]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Analyze the period lattice of this block.
    #[arg(long, conflicts_with = "lattice", required_unless_present = "lattice")]
    pub graph: Option<String>,
    /// Lattice file (one basis vector per line), or `builtin:NAME`.
    #[arg(long)]
    pub lattice: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RingsArgs {
    #[arg(long)]
    pub graph: String,
    /// Ring length; defaults to the girth.
    #[arg(long)]
    pub length: Option<usize>,
    /// Vertex id; defaults to every vertex.
    #[arg(long)]
    pub vertex: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StandardizeArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure classified by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Builds the global thread pool from `TOPOCRYST_THREADS` when set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    // A pool that already exists (e.g. in tests) is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = configure_threads().and_then(|()| execute(&cli.command, stdout));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Build(a) => {
            check_output(a.out.as_deref())?;
            let block = load_block(&a.graph)?;
            if a.window < 0 {
                return Err(CliError::Usage("--window must be non-negative".into()));
            }
            let text = match &block {
                AnyBlock::Exact(b) => export(b, a.window, a.format)?,
                AnyBlock::Float(b) => export(b, a.window, a.format)?,
            };
            emit(&text, a.out.as_deref(), stdout)?;
        }
        Command::Lattice(a) => {
            check_output(a.out.as_deref())?;
            let report = match (&a.graph, &a.lattice) {
                (Some(g), _) => match load_block(g)? {
                    AnyBlock::Exact(b) => lattice_report(&b.default_period_lattice()?)?,
                    AnyBlock::Float(b) => lattice_report(&b.default_period_lattice()?)?,
                },
                (None, Some(l)) => match load_lattice(l)? {
                    AnyLattice::Exact(l) => lattice_report(&l)?,
                    AnyLattice::Float(l) => lattice_report(&l)?,
                },
                (None, None) => return Err(CliError::Usage("one of --graph or --lattice is required".into())),
            };
            emit(&to_json(&report)?, a.out.as_deref(), stdout)?;
        }
        Command::Rings(a) => {
            check_output(a.out.as_deref())?;
            let report = match load_block(&a.graph)? {
                AnyBlock::Exact(b) => rings_report(&b, a.length, a.vertex.as_deref())?,
                AnyBlock::Float(b) => rings_report(&b, a.length, a.vertex.as_deref())?,
            };
            emit(&to_json(&report)?, a.out.as_deref(), stdout)?;
        }
        Command::Symmetry(a) => {
            check_output(a.out.as_deref())?;
            let report = match load_block(&a.graph)? {
                AnyBlock::Exact(b) => symmetry_json(&b)?,
                AnyBlock::Float(b) => symmetry_json(&b)?,
            };
            emit(&to_json(&report)?, a.out.as_deref(), stdout)?;
        }
        Command::Standardize(a) => {
            check_output(a.out.as_deref())?;
            if a.tol.is_nan() || a.tol <= 0.0 {
                return Err(CliError::Usage("--tol must be positive".into()));
            }
            let graph = load_graph(&a.graph)?;
            let state = standard_realization(&graph, a.tol, a.max_iter, a.seed)?;
            let mut text = String::new();
            text.push_str("# standard realization, period lattice normalized to covolume 1\n");
            text.push_str(&format!("# energy {:.12e}\n", state.objective));
            text.push_str(&format!("# harmonic residual {:.3e}\n", state.harmonic_residual));
            text.push_str(&format!("# frame residual {:.3e}\n", state.frame_residual));
            text.push_str(&format!("# iterations {}\n", state.iterations));
            text.push_str(&state.block.to_qg());
            emit(&text, a.out.as_deref(), stdout)?;
        }
        Command::VerifyPaper => {
            let checks = verify::run_all();
            let table = verify::format_table(&checks);
            let passed = checks.iter().filter(|c| c.pass).count();
            let summary = format!("{table}{passed}/{} criteria passed\n", checks.len());
            stdout.write_all(summary.as_bytes()).map_err(Error::from)?;
            return Ok(if passed == checks.len() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn to_json(v: &Value) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(v).map_err(Error::from)? + "\n")
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
        None => stdout.write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}

fn check_output(out: Option<&Path>) -> CliResult<()> {
    if let Some(path) = out {
        let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(CliError::Usage(format!("output directory {} does not exist", parent.display())));
        }
    }
    Ok(())
}

fn read_input(source: &str) -> CliResult<String> {
    std::fs::read_to_string(source).map_err(|e| CliError::Usage(format!("cannot read {source}: {e}")))
}

/// Block from a QG file with `v=` annotations or a builtin name.
pub fn load_block(source: &str) -> CliResult<AnyBlock> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin_block(name).map_err(|_| {
            CliError::Usage(format!("unknown builtin '{name}' (expected one of {})", BUILTIN_NAMES.join(", ")))
        });
    }
    Ok(QuotientGraph::parse(&read_input(source)?)?.block()?)
}

/// Bare graph from a QG file (annotations ignored) or a builtin name.
pub fn load_graph(source: &str) -> CliResult<QuotientGraph> {
    if source.starts_with("builtin:") {
        return Ok(load_block(source)?.graph().clone());
    }
    Ok(QuotientGraph::parse(&read_input(source)?)?.graph)
}

/// Names accepted by `--lattice builtin:NAME`; `aN` and `dN` select root
/// lattices.
pub const BUILTIN_LATTICES: [&str; 5] = ["cubic", "bcc", "fcc", "aN", "dN"];

pub fn load_lattice(source: &str) -> CliResult<AnyLattice> {
    let Some(name) = source.strip_prefix("builtin:") else {
        return Ok(parse_lattice(&read_input(source)?)?);
    };
    let unknown = || CliError::Usage(format!("unknown lattice '{name}' (expected one of {})", BUILTIN_LATTICES.join(", ")));
    match name {
        "cubic" => Ok(AnyLattice::Exact(Lattice::cubic(3))),
        "bcc" => Ok(AnyLattice::Exact(Lattice::bcc())),
        "fcc" => Ok(AnyLattice::Exact(Lattice::fcc())),
        _ => {
            let kind = match name.chars().next() {
                Some('a') => RootKind::A,
                Some('d') => RootKind::D,
                _ => return Err(unknown()),
            };
            let d: usize = name[1..].parse().map_err(|_| unknown())?;
            Ok(root_lattice(kind, d)?)
        }
    }
}

fn export<S: Scalar>(block: &BuildingBlock<S>, n: i64, format: ExportFormat) -> Result<String> {
    let net = build_net(block, &block.graph().homology_basis(), &Window::cube(block.dim(), n))?;
    Ok(net.export(format))
}

fn vec_text<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(Scalar::to_text).collect()
}

fn witness_json<S: Scalar>(w: &Witness<S>) -> Value {
    match w {
        Witness::Span { rank, index } => json!({ "span": { "rank": rank, "index": index.to_string() } }),
        Witness::Unreached(v) => json!({ "unreached": vec_text(v) }),
        Witness::InvariantForm(m) => {
            json!({ "invariant_form": (0..m.rows()).map(|i| vec_text(&m.row(i))).collect::<Vec<_>>() })
        }
    }
}

/// The `lattice` report.
pub fn lattice_report<S: Scalar>(lattice: &Lattice<S>) -> Result<Value> {
    let d = lattice.dim();
    let k = shortest_vectors(lattice);
    let group = point_group(lattice);
    let verdict = orthogonal_symmetry(lattice, &k, &group);
    let class = match d {
        2 => Some(serde_json::to_value(classify_2d(lattice)?.0)?),
        3 => Some(serde_json::to_value(classify_3d(lattice)?.0)?),
        _ => None,
    };
    let (c, residual) = tight_frame_check(&k, d);
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "exact": S::EXACT,
        "dim": d,
        "basis": lattice.basis_vectors().iter().map(|v| vec_text(v)).collect::<Vec<_>>(),
        "alpha": k.alpha(),
        "alpha_sq": k.alpha_sq.to_text(),
        "K": k.vectors.iter().map(|v| vec_text(v)).collect::<Vec<_>>(),
        "K_count": k.len(),
        "point_group_order": group.order(),
        "orthogonally_symmetric": {
            "is_os": verdict.is_os,
            "failed_condition": verdict.failed_condition,
            "witness": verdict.witness.as_ref().map(witness_json),
        },
        "class": class,
        "dual_basis": dual_lattice(lattice).basis_vectors().iter().map(|v| vec_text(v)).collect::<Vec<_>>(),
        "tight_frame": { "c": c.to_text(), "residual": residual.to_text() },
        "angle_bound": angle_bound_check(&k),
    }))
}

#[derive(Serialize)]
struct RingRecord {
    word: String,
    cells: Vec<Vec<i64>>,
}

/// The `rings` report.
pub fn rings_report<S: Scalar>(block: &BuildingBlock<S>, length: Option<usize>, vertex: Option<&str>) -> CliResult<Value> {
    let search = RingSearch::new(block)?;
    let g = search.graph();
    let vertices: Vec<usize> = match vertex {
        Some(id) => vec![g.vertex_index(id).ok_or_else(|| CliError::Usage(format!("no vertex '{id}'")))?],
        None => (0..g.vertex_count()).collect(),
    };
    let cap = DEFAULT_GIRTH_CAP.max(length.unwrap_or(0));
    let girth = search.girth(cap).ok();
    let length = match (length, girth) {
        (Some(l), _) => l,
        (None, Some(gi)) => gi,
        (None, None) => return Err(Error::GirthNotFound { cap }.into()),
    };
    let per_vertex: Vec<Value> = vertices
        .iter()
        .map(|&x| {
            let rings = search.rings_through(x, length);
            let records: Vec<RingRecord> =
                rings.iter().map(|r| RingRecord { word: r.names(g).join(" "), cells: r.cells.clone() }).collect();
            json!({ "vertex": g.vertex_id(x), "count": rings.len(), "rings": records })
        })
        .collect();
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "girth": girth,
        "length": length,
        "vertices": per_vertex,
    }))
}

fn symmetry_json<S: Scalar>(block: &BuildingBlock<S>) -> Result<Value> {
    let net = build_net(block, &block.graph().homology_basis(), &Window::cube(block.dim(), 0))?;
    let report = symmetry_report(&net);
    let mut value = serde_json::to_value(report)?;
    value["schema_version"] = json!(SCHEMA_VERSION);
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("topocryst").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["build", "--graph", "builtin:laves", "--bogus"]).0, 2);
        assert_eq!(run_args(&["rings", "--graph", "builtin:nothing"]).0, 2);
        assert_eq!(run_args(&["rings", "--graph", "/no/such/file.qg"]).0, 2);
        let (code, _, err) = run_args(&["build", "--graph", "builtin:laves", "--out", "/no/such/dir/x.xyz"]);
        assert_eq!(code, 2);
        assert!(err.contains("does not exist"));
    }

    #[test]
    fn rings_below_girth() {
        let (code, out, _) = run_args(&["rings", "--graph", "builtin:laves", "--length", "3", "--vertex", "A"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["girth"], 10);
        assert_eq!(v["vertices"][0]["count"], 0);
    }

    #[test]
    fn lattice_builtin() {
        let (code, out, _) = run_args(&["lattice", "--lattice", "builtin:fcc"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["K_count"], 12);
        assert_eq!(v["class"], "fcc");
        assert_eq!(v["schema_version"], 1);
        assert_eq!(run_args(&["lattice", "--lattice", "builtin:a3"]).0, 0);
        assert_eq!(run_args(&["lattice", "--lattice", "builtin:q7"]).0, 2);
    }

    #[test]
    fn deterministic_reports() {
        let a = run_args(&["symmetry", "--graph", "builtin:diamond"]);
        let b = run_args(&["symmetry", "--graph", "builtin:diamond"]);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a.1).unwrap();
        assert_eq!(v["point_group_order"], 48);
    }
}
