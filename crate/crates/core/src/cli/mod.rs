//! The `leavitt` command line.
//!
//! Exit codes: `0` success, `2` precondition violation, `3` parse error,
//! `1` internal failure.

pub mod expr;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentOptions, ExperimentReport, NormRecord};
use crate::lpa::{LeavittAlgebra, LpaElement};
use crate::quiver::{samples, Quiver, VertexId};
use crate::reps::{spatiality_criterion, CriterionOptions, RepKind, Representation, RepresentationJson};
use crate::scalar::parse_rational;

pub use expr::{lower, parse_element, parse_expr, Coeff, Expr, Factor, Span, Term};

#[derive(Parser, Debug)]
#[command(name = "leavitt", version, about = "Leavitt path algebras and spatial Lp representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Vertices, edges, cycles and hereditary saturated sets.
    GraphInfo {
        #[arg(long)]
        graph: String,
    },
    /// Simplicity and pure infiniteness of the Leavitt path algebra.
    Simplicity {
        #[arg(long)]
        graph: String,
    },
    /// Normal form of an element.
    Normalize {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        element: String,
        /// Skip the CK2 reduction (compute in the Cohn algebra).
        #[arg(long)]
        cohn: bool,
    },
    /// Product of the given elements, left to right.
    Multiply {
        #[arg(long)]
        graph: String,
        #[arg(long, required = true)]
        element: Vec<String>,
    },
    /// Certified bounds for `‖ρ(x)‖_p`.
    Norm {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value = "boundary")]
        rep: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Builds a representation and prints its JSON bundle.
    RepBuild {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "boundary")]
        rep: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Relations, spatiality and the contractivity criterion of a representation.
    RepCheck {
        /// A bundle written by `rep-build`; overrides --graph/--rep.
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value = "boundary")]
        rep: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs one of the experiments: uniqueness, simplicity, linfty, gamma,
    /// translates, moves.
    Experiment {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        experiment: String,
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Comma-separated depths for the uniqueness diagnostic.
        #[arg(long)]
        depths: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Elements to use instead of random samples.
        #[arg(long)]
        element: Vec<String>,
        /// Random elements drawn: defaults to 200 injectivity samples for
        /// `simplicity` and 20 elements elsewhere.
        #[arg(long)]
        samples: Option<usize>,
        /// Number of generators for `linfty`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Prefix length for `gamma`.
        #[arg(long, default_value_t = 24)]
        length: usize,
        /// Path length bound for `translates`.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value = "germ")]
        rep: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Graphviz export.
    ExportDot {
        #[arg(long)]
        graph: String,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Json(_) => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

/// A graph JSON file, or one of the built-in names `E1 A2 A3 R1 R2 T2`
/// when no such file exists.
pub fn load_graph(arg: &str) -> Result<Quiver> {
    let path = std::path::Path::new(arg);
    if !path.exists() {
        if let Some(q) = samples::by_name(arg) {
            return Ok(q);
        }
    }
    Quiver::from_json_str(&std::fs::read_to_string(path)?)
}

/// `p ≥ 1` given as an integer, `p/q` or a finite decimal.
pub fn parse_p(s: &str) -> Result<f64> {
    let q = parse_rational(s).map_err(|_| Error::parse(format!("malformed exponent `{s}`"), 0, s.len()))?;
    let p = q.to_f64().unwrap_or(f64::NAN);
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::precondition(format!("exponent p = {s} must be at least 1")));
    }
    Ok(p)
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn element_json(alg: &LeavittAlgebra, x: &LpaElement) -> Value {
    json!({
        "element": alg.format(x),
        "grades": x.grade_decompose().keys().collect::<Vec<_>>(),
        "terms": alg.to_json(x),
    })
}

fn vertex_arg(q: &Quiver, name: Option<&str>) -> Result<VertexId> {
    match name {
        Some(n) => q.vertex_id(n).ok_or_else(|| Error::UnknownName(n.to_string())),
        None => q.vertices().find(|&v| q.on_cycle(v)).ok_or_else(|| Error::precondition("no vertex lies on a cycle")),
    }
}

fn graph_info(q: &Quiver) -> Value {
    let names = |vs: &[VertexId]| vs.iter().map(|&v| q.vertex_name(v).to_string()).collect::<Vec<_>>();
    json!({
        "vertices": q.vertex_count(),
        "edges": q.edge_count(),
        "sinks": names(&q.sinks()),
        "sources": names(&q.sources()),
        "nonsingular": q.is_nonsingular(),
        "cycles": q.cycles().iter().map(|c| q.path_name(&c.path)).collect::<Vec<_>>(),
        "cofinal": q.is_cofinal(),
        "hereditary_saturated": q.hereditary_saturated_subsets().iter().map(|h| names(h)).collect::<Vec<_>>(),
    })
}

fn report_output(r: &ExperimentReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(format!("{}\n", r.to_json())),
        Format::Csv => r.to_csv(),
    }
}

fn build_rep(q: &Quiver, p: f64, rep: &str, depth: usize) -> Result<Representation> {
    rep.parse::<RepKind>()?.build(q, p, depth)
}

fn run_experiment(cmd: &Command) -> Result<String> {
    let Command::Experiment {
        graph,
        experiment,
        p,
        depth,
        depths,
        seed,
        element,
        samples,
        k,
        length,
        n,
        vertex,
        rep,
        format,
    } = cmd
    else {
        unreachable!()
    };
    let q = load_graph(graph)?;
    let p = parse_p(p)?;
    let alg = LeavittAlgebra::new(q.clone());
    let mut opts = ExperimentOptions { seed: *seed, depth: *depth, ..Default::default() };
    if let Some(n) = samples {
        opts.samples = *n;
    }
    let elements = || -> Result<Vec<LpaElement>> {
        if element.is_empty() {
            Ok(experiments::sample_elements(&alg, samples.unwrap_or(20), *seed))
        } else {
            element.iter().map(|t| parse_element(t, &alg)).collect()
        }
    };
    let report = match experiment.as_str() {
        "uniqueness" => {
            let ds: Vec<usize> = match depths {
                Some(s) => s
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::parse(format!("bad depth `{t}`"), 0, s.len())))
                    .collect::<Result<_>>()?,
                None => vec![*depth],
            };
            experiments::uniqueness_experiment(&q, p, &elements()?, &ds, &opts)?
        }
        "simplicity" => experiments::simplicity_witness(&q, p, &opts)?,
        "linfty" => experiments::linfty_generators(&q, *k)?.1,
        "gamma" => experiments::gamma_experiment(&q, vertex_arg(&q, vertex.as_deref())?, *length)?,
        "translates" => {
            let r = build_rep(&q, p, rep, *depth)?;
            experiments::disjoint_translates(&q, &r, *n)?
        }
        "moves" => experiments::seminorm_move_invariance(&q, p, &elements()?, *depth, &opts)?,
        other => return Err(Error::precondition(format!("unknown experiment `{other}`"))),
    };
    report_output(&report, *format)
}

/// Runs a parsed command and returns what goes to stdout.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::GraphInfo { graph } => Ok(pretty(&graph_info(&load_graph(graph)?))),
        Command::Simplicity { graph } => {
            let q = load_graph(graph)?;
            let mut v = q.is_simple().to_json(&q);
            v["purely_infinite"] = json!(q.is_purely_infinite_simple());
            Ok(pretty(&v))
        }
        Command::Normalize { graph, element, cohn } => {
            let q = load_graph(graph)?;
            let alg = if *cohn { LeavittAlgebra::cohn(q) } else { LeavittAlgebra::new(q) };
            let x = parse_element(element, &alg)?;
            Ok(pretty(&element_json(&alg, &x)))
        }
        Command::Multiply { graph, element } => {
            let alg = LeavittAlgebra::new(load_graph(graph)?);
            let xs: Vec<LpaElement> = element.iter().map(|t| parse_element(t, &alg)).collect::<Result<_>>()?;
            Ok(pretty(&element_json(&alg, &alg.product(xs.iter()))))
        }
        Command::Norm { graph, p, element, rep, depth, format } => {
            let q = load_graph(graph)?;
            let p = parse_p(p)?;
            let alg = LeavittAlgebra::new(q.clone());
            let x = parse_element(element, &alg)?;
            let r = build_rep(&q, p, rep, *depth)?;
            let b = r.interior_norm(&x, &Default::default())?;
            match format {
                Format::Json => Ok(pretty(&json!({
                    "element": alg.format(&x),
                    "rep": rep,
                    "p": p,
                    "depth": depth,
                    "atoms": r.dim(),
                    "bounds": b,
                }))),
                Format::Csv => {
                    let rec = NormRecord {
                        element: alg.format(&x),
                        rep: rep.clone(),
                        depth: Some(*depth),
                        lower: b.lower,
                        upper: b.upper,
                        certified: b.certified,
                    };
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.serialize(rec).map_err(|e| Error::Internal(e.to_string()))?;
                    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
                    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
                }
            }
        }
        Command::RepBuild { graph, p, rep, depth } => {
            let q = load_graph(graph)?;
            Ok(pretty(&build_rep(&q, parse_p(p)?, rep, *depth)?.to_json()))
        }
        Command::RepCheck { bundle, graph, p, rep, depth, seed } => {
            let r = match (bundle, graph) {
                (Some(path), _) => {
                    let j: RepresentationJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    Representation::from_json(&j)?
                }
                (None, Some(g)) => {
                    let p = parse_p(p.as_deref().unwrap_or("2"))?;
                    build_rep(&load_graph(g)?, p, rep, *depth)?
                }
                (None, None) => return Err(Error::precondition("give --bundle or --graph")),
            };
            let p = match p {
                Some(s) => parse_p(s)?,
                None => r.p(),
            };
            let criterion = if r.is_nondegenerate() {
                let opts = CriterionOptions { seed: *seed, ..Default::default() };
                Some(spatiality_criterion(&r, p, &opts)?)
            } else {
                None
            };
            Ok(pretty(&json!({
                "atoms": r.dim(),
                "residual": r.residual(),
                "nondegenerate": r.is_nondegenerate(),
                "spatial": r.is_spatial(),
                "criterion": criterion,
            })))
        }
        cmd @ Command::Experiment { .. } => run_experiment(cmd),
        Command::ExportDot { graph } => Ok(load_graph(graph)?.export_dot()),
    }
}

/// Parses `args`, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
