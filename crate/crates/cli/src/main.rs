//! `netland`: landscape, persistence and transition-path analysis of networks.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netland::descent::{decompose, minimax_path};
use netland::error::ErrorClass;
use netland::flooding::{critical_analysis, denoise, level_barcode, write_barcode_csv, DEFAULT_SIMPLEX_CAP};
use netland::graph::load_edge_list_with_labels;
use netland::markov::markov_from_graph;
use netland::pipeline::{prepare, restrict_graph, EnergyKind, PrepareOptions, Prepared, TieBreakSpec};
use netland::report;
use netland::tpt::{transition_path_analysis, Convention, TptOptions, ARROW_THRESHOLD};
use netland::{Exec, Graph, NodeId};

use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "netland", version, about = "Topological landscape analysis of networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Node decomposition into basins and critical nodes of every index.
    Analyze(AnalyzeArgs),
    /// Barcode of the flooding complex of one decomposition level.
    Persist(PersistArgs),
    /// Transition path analysis between two node sets.
    Tpt(TptArgs),
    /// Minimum-energy path between two nodes.
    Path(PathArgs),
    /// Graphviz rendering of the landscape, or of transition currents when
    /// --source and --target are given.
    ExportDot(ExportArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Flat key=value file supplying defaults; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge list: `u v [w]` per line, `#` comments.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Sidecar `id<TAB>name` map.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    directed: bool,
    /// Keep only edges with weight strictly above this value.
    #[arg(long)]
    min_weight: Option<f64>,
    /// Average both directions of a directed graph into undirected edges.
    #[arg(long)]
    symmetrize: bool,
    /// neg-log-degree | neg-log-strength | neg-log-stationary | file:PATH
    #[arg(long)]
    energy: Option<String>,
    /// id-ascending | id-descending | perm:PATH
    #[arg(long)]
    tie_break: Option<String>,
    /// Keep only the connected component containing this node.
    #[arg(long)]
    component: Option<String>,
    /// Abort when a flooding complex would exceed this many simplices.
    #[arg(long)]
    cap_simplices: Option<usize>,
    /// Run every loop on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_dot: Option<PathBuf>,
    /// Skip the per-level persistence that detects degenerate critical nodes.
    #[arg(long)]
    no_persistence: bool,
}

#[derive(Args, Debug)]
struct PersistArgs {
    #[command(flatten)]
    common: Common,
    /// Decomposition level whose subgraph is filtered (0 = whole graph).
    #[arg(long)]
    level: Option<usize>,
    /// Report minima whose bar is shorter than this (height units).
    #[arg(long)]
    denoise: Option<f64>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TptArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated source labels.
    #[arg(long)]
    source: Option<String>,
    /// Comma-separated target labels.
    #[arg(long)]
    target: Option<String>,
    /// Effective currents at or below this are not drawn or listed.
    #[arg(long)]
    arrow_threshold: Option<f64>,
    /// standard | swapped
    #[arg(long)]
    convention: Option<String>,
    /// Number of interior nodes listed by partial current.
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PathArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    arrow_threshold: Option<f64>,
    #[arg(long)]
    out_dot: Option<PathBuf>,
}

/// A failure with its process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<netland::Error> for Failure {
    fn from(e: netland::Error) -> Self {
        let code = match e.class() {
            ErrorClass::Input => 1,
            ErrorClass::Numeric => 2,
            ErrorClass::Resource => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Settings shared by all subcommands after merging flags and config.
struct Resolved {
    input: PathBuf,
    labels: Option<PathBuf>,
    directed: bool,
    prepare: PrepareOptions,
    cap: usize,
    exec: Exec,
}

fn read_text(p: &Path) -> CliResult<String> {
    fs::read_to_string(p).map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display())))
}

fn parse_energy(s: &str) -> CliResult<EnergyKind> {
    match s {
        "neg-log-degree" => Ok(EnergyKind::NegLogDegree),
        "neg-log-strength" => Ok(EnergyKind::NegLogStrength),
        "neg-log-stationary" => Ok(EnergyKind::NegLogStationary),
        _ => match s.strip_prefix("file:") {
            Some(p) => Ok(EnergyKind::Values(read_text(Path::new(p))?)),
            None => Err(Failure::usage(format!("unknown energy {s:?}"))),
        },
    }
}

fn parse_tie_break(s: &str) -> CliResult<TieBreakSpec> {
    match s {
        "id-ascending" => Ok(TieBreakSpec::IdAscending),
        "id-descending" => Ok(TieBreakSpec::IdDescending),
        _ => match s.strip_prefix("perm:") {
            Some(p) => Ok(TieBreakSpec::Permutation(read_text(Path::new(p))?)),
            None => Err(Failure::usage(format!("unknown tie-break {s:?}"))),
        },
    }
}

fn resolve(mut c: Common, cfg: &mut ConfigFile) -> CliResult<Resolved> {
    c.input = c.input.or(cfg.path("input")?);
    c.labels = c.labels.or(cfg.path("labels")?);
    c.directed |= cfg.flag("directed")?;
    c.symmetrize |= cfg.flag("symmetrize")?;
    c.min_weight = c.min_weight.or(cfg.value("min-weight")?);
    c.energy = c.energy.or(cfg.raw_with_paths("energy", "file:"));
    c.tie_break = c.tie_break.or(cfg.raw_with_paths("tie-break", "perm:"));
    c.component = c.component.or(cfg.raw("component"));
    c.cap_simplices = c.cap_simplices.or(cfg.value("cap-simplices")?);
    c.sequential |= cfg.flag("sequential")?;

    let input = c.input.ok_or_else(|| Failure::usage("--input is required"))?;
    if let Some(t) = c.min_weight {
        if !(t >= 0.0) {
            return Err(Failure::usage("--min-weight must be nonnegative"));
        }
    }
    let cap = c.cap_simplices.unwrap_or(DEFAULT_SIMPLEX_CAP);
    if cap == 0 {
        return Err(Failure::usage("--cap-simplices must be positive"));
    }
    let prepare = PrepareOptions {
        min_weight: c.min_weight,
        symmetrize: c.symmetrize,
        energy: parse_energy(c.energy.as_deref().unwrap_or("neg-log-degree"))?,
        tie_break: parse_tie_break(c.tie_break.as_deref().unwrap_or("id-ascending"))?,
        component: c.component,
    };
    Ok(Resolved {
        input,
        labels: c.labels,
        directed: c.directed,
        prepare,
        cap,
        exec: if c.sequential { Exec::Sequential } else { Exec::Parallel },
    })
}

fn load_config(path: Option<&Path>) -> CliResult<ConfigFile> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn load(r: &Resolved) -> CliResult<Graph> {
    Ok(load_edge_list_with_labels(&r.input, r.labels.as_deref(), r.directed)?)
}

fn landscape(r: &Resolved) -> CliResult<Prepared> {
    Ok(prepare(&load(r)?, &r.prepare)?)
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn node_set(g: &Graph, spec: &str, what: &str) -> CliResult<Vec<NodeId>> {
    let mut out = Vec::new();
    for l in spec.split(',').map(str::trim).filter(|l| !l.is_empty()) {
        let x = g.node(l).map_err(|_| Failure::usage(format!("{what} node {l:?} not in the analysed graph")))?;
        if !out.contains(&x) {
            out.push(x);
        }
    }
    if out.is_empty() {
        return Err(Failure::usage(format!("--{what} is empty")));
    }
    Ok(out)
}

fn endpoints(g: &Graph, source: Option<String>, target: Option<String>) -> CliResult<(Vec<NodeId>, Vec<NodeId>)> {
    let s = source.ok_or_else(|| Failure::usage("--source is required"))?;
    let t = target.ok_or_else(|| Failure::usage("--target is required"))?;
    let a = node_set(g, &s, "source")?;
    let b = node_set(g, &t, "target")?;
    if a.iter().any(|x| b.contains(x)) {
        return Err(Failure::usage("--source and --target must be disjoint"));
    }
    Ok((a, b))
}

fn arrow_threshold(v: Option<f64>) -> CliResult<f64> {
    let t = v.unwrap_or(ARROW_THRESHOLD);
    if !(t >= 0.0) {
        return Err(Failure::usage("--arrow-threshold must be nonnegative"));
    }
    Ok(t)
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Analyze(a) => {
            let mut cfg = load_config(a.common.config.as_deref())?;
            let out_json = a.out_json.or(cfg.path("out-json")?);
            let out_dot = a.out_dot.or(cfg.path("out-dot")?);
            let no_persistence = a.no_persistence | cfg.flag("no-persistence")?;
            let r = resolve(a.common, &mut cfg)?;
            cfg.finish()?;
            let p = landscape(&r)?;
            let mut d = decompose(&p.graph, &p.height)?;
            let lp = if no_persistence {
                None
            } else {
                Some(critical_analysis(&p.graph, &p.height, &mut d, r.cap, r.exec)?)
            };
            emit(out_json.as_deref(), &json_text(&report::decomposition_json(&p.graph, &p.height, &d, lp.as_deref())))?;
            if let Some(dot) = out_dot {
                emit(Some(&dot), &report::decomposition_dot(&p.graph, &p.height, &d))?;
            }
            Ok(())
        }
        Command::Persist(a) => {
            let mut cfg = load_config(a.common.config.as_deref())?;
            let level = a.level.or(cfg.value("level")?).unwrap_or(0);
            let threshold = a.denoise.or(cfg.value("denoise")?);
            let out_csv = a.out_csv.or(cfg.path("out-csv")?);
            let out_json = a.out_json.or(cfg.path("out-json")?);
            let r = resolve(a.common, &mut cfg)?;
            cfg.finish()?;
            if let Some(t) = threshold {
                if !(t > 0.0) {
                    return Err(Failure::usage("--denoise must be positive"));
                }
            }
            let p = landscape(&r)?;
            let d = decompose(&p.graph, &p.height)?;
            let levels = d.levels.len();
            let b = match level_barcode(&p.graph, &p.height, &d, level, r.cap, r.exec)? {
                Some(b) => b,
                None if levels == 0 && level == 0 => {
                    // empty graph: an empty barcode
                    netland::flooding::Barcode { level: 0, steps: 0, intervals: vec![], essential_dim2: vec![] }
                }
                None => return Err(Failure::usage(format!("--level {level} out of range: {levels} levels"))),
            };
            let mut events = netland::flooding::classify_critical(&b);
            for e in &mut events {
                e.nondegenerate = d.critical(e.index).contains(&e.node);
            }
            let mut csv_buf = Vec::new();
            write_barcode_csv(&mut csv_buf, &b, p.graph.labels())
                .map_err(|e| Failure::usage(format!("csv: {e}")))?;
            let csv_text = String::from_utf8(csv_buf).expect("utf-8 labels");
            let merged = threshold.map(|t| denoise(&b, t));
            let json = json_text(&report::barcode_json(&p.graph, &b, &events, merged.as_deref()));
            match (&out_csv, &out_json) {
                (None, None) => emit(None, &csv_text)?,
                _ => {
                    if let Some(c) = &out_csv {
                        emit(Some(c), &csv_text)?;
                    }
                    if let Some(j) = &out_json {
                        emit(Some(j), &json)?;
                    }
                }
            }
            Ok(())
        }
        Command::Tpt(a) => {
            let mut cfg = load_config(a.common.config.as_deref())?;
            let source = a.source.or(cfg.raw("source"));
            let target = a.target.or(cfg.raw("target"));
            let threshold = arrow_threshold(a.arrow_threshold.or(cfg.value("arrow-threshold")?))?;
            let convention = match a.convention.or(cfg.raw("convention")).as_deref() {
                None | Some("standard") => Convention::Standard,
                Some("swapped") => Convention::Swapped,
                Some(other) => return Err(Failure::usage(format!("unknown convention {other:?}"))),
            };
            let top_k = a.top_k.or(cfg.value("top-k")?).unwrap_or(10);
            let out_json = a.out_json.or(cfg.path("out-json")?);
            let out_dot = a.out_dot.or(cfg.path("out-dot")?);
            let r = resolve(a.common, &mut cfg)?;
            cfg.finish()?;
            let (g, _) = restrict_graph(&load(&r)?, &r.prepare)?;
            let (src, dst) = endpoints(&g, source, target)?;
            let mc = markov_from_graph(&g)?;
            let opts = TptOptions { convention, arrow_threshold: threshold, ..Default::default() };
            let res = transition_path_analysis(&mc, &src, &dst, &opts)?;
            emit(out_json.as_deref(), &json_text(&report::tpt_json(&g, &res, top_k)))?;
            if let Some(dot) = out_dot {
                emit(Some(&dot), &report::tpt_dot(&g, &res))?;
            }
            Ok(())
        }
        Command::Path(a) => {
            let mut cfg = load_config(a.common.config.as_deref())?;
            let source = a.source.or(cfg.raw("source"));
            let target = a.target.or(cfg.raw("target"));
            let out_json = a.out_json.or(cfg.path("out-json")?);
            let r = resolve(a.common, &mut cfg)?;
            cfg.finish()?;
            let p = landscape(&r)?;
            let one = |s: Option<String>, what: &str| -> CliResult<NodeId> {
                let s = s.ok_or_else(|| Failure::usage(format!("--{what} is required")))?;
                p.graph.node(&s).map_err(|_| Failure::usage(format!("{what} node {s:?} not in the analysed graph")))
            };
            let (x, y) = (one(source, "source")?, one(target, "target")?);
            let path = minimax_path(&p.graph, &p.height, x, y)?;
            emit(out_json.as_deref(), &json_text(&report::path_json(&p.graph, &p.height, &path)))
        }
        Command::ExportDot(a) => {
            let mut cfg = load_config(a.common.config.as_deref())?;
            let source = a.source.or(cfg.raw("source"));
            let target = a.target.or(cfg.raw("target"));
            let threshold = arrow_threshold(a.arrow_threshold.or(cfg.value("arrow-threshold")?))?;
            let out_dot = a.out_dot.or(cfg.path("out-dot")?);
            let r = resolve(a.common, &mut cfg)?;
            cfg.finish()?;
            if source.is_some() || target.is_some() {
                let (g, _) = restrict_graph(&load(&r)?, &r.prepare)?;
                let (src, dst) = endpoints(&g, source, target)?;
                let mc = markov_from_graph(&g)?;
                let opts = TptOptions { arrow_threshold: threshold, ..Default::default() };
                let res = transition_path_analysis(&mc, &src, &dst, &opts)?;
                emit(out_dot.as_deref(), &report::tpt_dot(&g, &res))
            } else {
                let p = landscape(&r)?;
                let mut d = decompose(&p.graph, &p.height)?;
                critical_analysis(&p.graph, &p.height, &mut d, r.cap, r.exec)?;
                emit(out_dot.as_deref(), &report::decomposition_dot(&p.graph, &p.height, &d))
            }
        }
    }
}
