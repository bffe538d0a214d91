//! `clawfactor`: 2-factors and degenerate cycle partitions of claw-free graphs.
//!
//! Exit codes: 0 success, 1 negative answer (hypotheses fail, witness found,
//! no 2-factor, certificate rejected), 2 invalid input, 3 budget exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use clawfactor_core::closure::{closure, ClosureError};
use clawfactor_core::corpus::{generate_corpus, CorpusSpec};
use clawfactor_core::degree::{DegreeError, HypothesisReport, DEFAULT_NODE_BUDGET};
use clawfactor_core::domsys::{
    min_system_exhaustive, system_to_partition, system_to_two_factor, ConversionError,
    DomSearchError, DominatingSystem, Mode, SystemJson, DEFAULT_SYSTEM_BUDGET,
};
use clawfactor_core::graph::{parse_graph, serialize_graph, Graph, GraphJson};
use clawfactor_core::linegraph::{line_graph, root_graph_with_budget, RootCorrespondence, RootError, DEFAULT_KRAUSZ_BUDGET};
use clawfactor_core::matching::{min_cycle_two_factor_bruteforce, two_factor, FactorError, DEFAULT_FACTOR_BUDGET};
use clawfactor_core::pipeline::{
    run_degenerate_partition, run_main_theorem, verify_with_budget, Budgets, PipelineCertificate, PipelineError,
};
use clawfactor_core::search::{find_bounded_system, SearchConfig, SearchError, SearchResult};
use serde_json::{json, Value};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "clawfactor", version, about = "2-factors with few cycles in claw-free graphs")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for every exhaustive search (default: per-search defaults).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the degree-sum and independent-set hypotheses for k.
    CheckHypotheses {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
    },
    /// Closure of a claw-free graph.
    Closure {
        /// Also print the completed vertices and added edges.
        #[arg(long)]
        trace: bool,
        graph: PathBuf,
    },
    /// Line graph, with root edge to line vertex pairs.
    LineGraph { graph: PathBuf },
    /// Triangle-free root of a line graph, with the same pairs.
    RootGraph { graph: PathBuf },
    /// Some 2-factor, or with --min-cycles one with fewest cycles.
    TwoFactor {
        #[arg(long)]
        min_cycles: bool,
        graph: PathBuf,
    },
    /// Dominating system of a graph: from a 2-factor of its line graph, or
    /// with --min one of minimum cardinality.
    DominatingSystem {
        #[arg(long)]
        min: bool,
        /// Allow stars with one or two edges.
        #[arg(long)]
        relaxed: bool,
        graph: PathBuf,
    },
    /// Turn a system into a 2-factor (strict) or a partition (relaxed) of the
    /// line graph.
    ConvertSystem { graph: PathBuf, system: PathBuf },
    /// Dominating system with at most k elements, or a hypothesis witness.
    BoundedSystem {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
    },
    /// Full pipeline; prints a certificate.
    Run {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
    },
    /// Partition into at most k parts inducing K_1, K_2 or Hamiltonian graphs.
    Partition {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
    },
    /// Generate a graph family.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 6)]
        max_edges: usize,
        #[arg(long, default_value_t = 5)]
        min_n: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 0.6)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Write one edge-list file per graph here instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Independently re-check a certificate produced by `run`.
    Verify { certificate: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    TriangleFree,
    ClawFree,
    Extremal,
    Gnp,
}

/// What a command prints, and how it exits.
struct Report {
    json: Value,
    text: String,
    code: u8,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, code: 0 }
    }

    fn negative(json: Value, text: String) -> Self {
        Report { json, text, code: 1 }
    }
}

enum Failure {
    Invalid(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Invalid(e.to_string())
            }
        }
    )*};
}
invalid_from!(ClosureError, ConversionError, std::io::Error, serde_json::Error);

impl From<DegreeError> for Failure {
    fn from(e: DegreeError) -> Self {
        match e {
            DegreeError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            DegreeError::ZeroK => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<RootError> for Failure {
    fn from(e: RootError) -> Self {
        match e {
            RootError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<FactorError> for Failure {
    fn from(e: FactorError) -> Self {
        Failure::Budget(e.to_string())
    }
}

impl From<DomSearchError> for Failure {
    fn from(e: DomSearchError) -> Self {
        Failure::Budget(e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            SearchError::NoTwoFactor => Failure::Invalid(e.to_string()),
        }
    }
}

struct Ctx {
    budget: Option<u64>,
    seed: u64,
}

impl Ctx {
    fn or(&self, default: u64) -> u64 {
        self.budget.unwrap_or(default)
    }

    fn budgets(&self) -> Budgets {
        Budgets {
            degree: self.or(DEFAULT_NODE_BUDGET),
            system: self.or(DEFAULT_SYSTEM_BUDGET),
            factor: self.or(DEFAULT_FACTOR_BUDGET),
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read_text(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn graph_json(g: &Graph) -> Value {
    serde_json::to_value(GraphJson::from(g.clone())).expect("serialisable")
}

fn pairs_json(corr: &RootCorrespondence) -> Value {
    let pairs: Vec<Value> = corr
        .edge_to_vertex
        .iter()
        .enumerate()
        .map(|(e, &v)| {
            let (a, b) = corr.root.edge(e);
            json!([[a, b], v])
        })
        .collect();
    Value::Array(pairs)
}

fn cycles_text(cycles: &[Vec<usize>]) -> String {
    cycles
        .iter()
        .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let ctx = Ctx {
        budget: cli.budget,
        seed: cli.seed,
    };
    match &cli.command {
        Command::CheckHypotheses { k, graph } => {
            let g = read_graph(graph)?;
            if *k == 0 {
                return Err(Failure::Invalid("k must be positive".into()));
            }
            let r = HypothesisReport::compute(&g, *k, ctx.or(DEFAULT_NODE_BUDGET))?;
            let text = format!(
                "n = {}, sigma_{} = {}, sigma condition {}, independent-set condition {}",
                r.n,
                k + 1,
                r.sigma_value,
                if r.sigma_ok { "holds" } else { "fails" },
                if r.degree_condition_ok { "holds" } else { "fails" }
            );
            let json = serde_json::to_value(&r)?;
            Ok(if r.both_hold() {
                Report::ok(json, text)
            } else {
                Report::negative(json, text)
            })
        }
        Command::Closure { trace, graph } => {
            let g = read_graph(graph)?;
            let t = closure(&g)?;
            let mut json = json!({ "graph": graph_json(&t.output), "added_edges": t.added_edge_count() });
            let mut text = serialize_graph(&t.output);
            if *trace {
                json["steps"] = serde_json::to_value(&t.steps)?;
                for s in &t.steps {
                    text.push_str(&format!("# complete {} adds {:?}\n", s.vertex, s.added));
                }
            }
            Ok(Report::ok(json, text.trim_end().to_string()))
        }
        Command::LineGraph { graph } => {
            let h = read_graph(graph)?;
            let corr = line_graph(&h)?;
            Ok(Report::ok(
                json!({ "graph": graph_json(&corr.line), "pairs": pairs_json(&corr) }),
                serialize_graph(&corr.line).trim_end().to_string(),
            ))
        }
        Command::RootGraph { graph } => {
            let g = read_graph(graph)?;
            let corr = root_graph_with_budget(&g, ctx.or(DEFAULT_KRAUSZ_BUDGET))?;
            Ok(Report::ok(
                json!({ "graph": graph_json(&corr.root), "pairs": pairs_json(&corr) }),
                serialize_graph(&corr.root).trim_end().to_string(),
            ))
        }
        Command::TwoFactor { min_cycles, graph } => {
            let g = read_graph(graph)?;
            let tf = if *min_cycles {
                min_cycle_two_factor_bruteforce(&g, ctx.or(DEFAULT_FACTOR_BUDGET))?.map(|p| p.0)
            } else {
                two_factor(&g)
            };
            Ok(match tf {
                Some(tf) => {
                    let cycles = tf.to_lists();
                    Report::ok(json!({ "cycles": cycles }), cycles_text(&cycles))
                }
                None => Report::negative(json!({ "cycles": null }), "no 2-factor".into()),
            })
        }
        Command::DominatingSystem { min, relaxed, graph } => {
            let h = read_graph(graph)?;
            let mode = if *relaxed { Mode::Relaxed } else { Mode::Strict };
            let ds = if *min {
                min_system_exhaustive(&h, mode, ctx.or(DEFAULT_SYSTEM_BUDGET))?.map(|p| p.0)
            } else {
                let seed = clawfactor_core::search::seed_system(&h, mode);
                seed.ok().map(|d| clawfactor_core::search::normalize(&h, &d))
            };
            Ok(match ds {
                Some(ds) => {
                    let text = format!("{} elements", ds.cardinality());
                    Report::ok(
                        json!({ "cardinality": ds.cardinality(), "system": ds.to_json(&h) }),
                        text,
                    )
                }
                None => Report::negative(json!({ "system": null }), "no dominating system".into()),
            })
        }
        Command::ConvertSystem { graph, system } => {
            let h = read_graph(graph)?;
            let sj: SystemJson = serde_json::from_str(&read_text(system)?)?;
            let ds = DominatingSystem::from_json(&h, &sj).map_err(|e| Failure::Invalid(e.to_string()))?;
            ds.validate(&h).map_err(|e| Failure::Invalid(e.to_string()))?;
            let corr = line_graph(&h)?;
            let (key, parts) = match ds.mode {
                Mode::Strict => ("cycles", system_to_two_factor(&ds, &corr)?.to_lists()),
                Mode::Relaxed => ("parts", system_to_partition(&ds, &corr)?),
            };
            let text = cycles_text(&parts);
            Ok(Report::ok(json!({ key: parts, "pairs": pairs_json(&corr) }), text))
        }
        Command::BoundedSystem { k, graph } => {
            let h = read_graph(graph)?;
            if *k == 0 {
                return Err(Failure::Invalid("k must be positive".into()));
            }
            if !h.is_triangle_free() {
                return Err(Failure::Invalid("graph has a triangle".into()));
            }
            let cfg = SearchConfig {
                budget: ctx.or(DEFAULT_SYSTEM_BUDGET),
                ..Default::default()
            };
            let out = find_bounded_system(&h, *k, &cfg)?;
            let report = serde_json::to_value(&out.report)?;
            Ok(match out.result {
                SearchResult::System(ds) => Report::ok(
                    json!({ "system": ds.to_json(&h), "cardinality": ds.cardinality(), "search": report }),
                    format!("system with {} elements", ds.cardinality()),
                ),
                SearchResult::Witness(w) => {
                    let text = format!("witness matching {:?}", w.matching);
                    Report::negative(json!({ "witness": w, "search": report }), text)
                }
                SearchResult::NoBoundedSystem { minimum } => {
                    let min = minimum.as_ref().map(|p| p.1);
                    Report::negative(
                        json!({ "system": null, "minimum": min, "search": report }),
                        format!("no system with at most {k} elements; minimum {min:?}"),
                    )
                }
            })
        }
        Command::Run { k, graph } => {
            let g = read_graph(graph)?;
            match run_main_theorem(&g, *k, &ctx.budgets()) {
                Ok(cert) => {
                    let text = format!(
                        "2-factor of the closure with {} cycles\n{}",
                        cert.two_factor_closure.len(),
                        cycles_text(&cert.two_factor_closure)
                    );
                    Ok(Report::ok(serde_json::to_value(&cert)?, text))
                }
                Err(e) => pipeline_failure(e),
            }
        }
        Command::Partition { k, graph } => {
            let g = read_graph(graph)?;
            match run_degenerate_partition(&g, *k, &ctx.budgets()) {
                Ok(p) => {
                    let text = cycles_text(&p.parts);
                    Ok(Report::ok(serde_json::to_value(&p)?, text))
                }
                Err(e) => pipeline_failure(e),
            }
        }
        Command::Gen {
            family,
            max_edges,
            min_n,
            max_n,
            p,
            count,
            kmax,
            out_dir,
        } => {
            let spec = match family {
                Family::TriangleFree => CorpusSpec::TriangleFree { max_edges: *max_edges },
                Family::ClawFree => CorpusSpec::ClawFree {
                    min_n: *min_n,
                    max_n: *max_n,
                    p: *p,
                    count: *count,
                    seed: ctx.seed,
                },
                Family::Extremal => CorpusSpec::Extremal { kmax: *kmax },
                Family::Gnp => CorpusSpec::Gnp {
                    min_n: *min_n,
                    max_n: *max_n,
                    p: *p,
                    count: *count,
                    seed: ctx.seed,
                },
            };
            if min_n > max_n || !(0.0..=1.0).contains(p) {
                return Err(Failure::Invalid("need min-n <= max-n and 0 <= p <= 1".into()));
            }
            let graphs = generate_corpus(&spec);
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir)?;
                for (i, g) in graphs.iter().enumerate() {
                    std::fs::write(dir.join(format!("graph-{i:05}.txt")), serialize_graph(g))?;
                }
            }
            let text = graphs.iter().map(serialize_graph).collect::<Vec<_>>().join("\n");
            let json = Value::Array(graphs.iter().map(graph_json).collect());
            Ok(Report::ok(json, text.trim_end().to_string()))
        }
        Command::Verify { certificate } => {
            let cert: PipelineCertificate = serde_json::from_str(&read_text(certificate)?)?;
            Ok(match verify_with_budget(&cert, ctx.or(DEFAULT_NODE_BUDGET)) {
                Ok(()) => Report::ok(json!({ "valid": true }), "certificate valid".into()),
                Err(clawfactor_core::pipeline::VerifyError::Degree(DegreeError::BudgetExceeded(b))) => {
                    return Err(Failure::Budget(format!("search exceeded its node budget of {b}")))
                }
                Err(e) => Report::negative(
                    json!({ "valid": false, "error": e.to_string() }),
                    format!("certificate rejected: {e}"),
                ),
            })
        }
    }
}

fn pipeline_failure(e: PipelineError) -> Result<Report, Failure> {
    match e {
        PipelineError::HypothesesFail { report, witness } => {
            let text = format!(
                "hypotheses fail: sigma condition {}, independent-set condition {}",
                if report.sigma_ok { "holds" } else { "fails" },
                if report.degree_condition_ok { "holds" } else { "fails" }
            );
            Ok(Report::negative(
                json!({ "hypotheses": *report, "witness": witness }),
                text,
            ))
        }
        PipelineError::BudgetExceeded(_) => Err(Failure::Budget(e.to_string())),
        PipelineError::Degree(d) => Err(d.into()),
        PipelineError::Root(r) => Err(r.into()),
        PipelineError::Search(s) => Err(s.into()),
        other => Err(Failure::Invalid(other.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("serialisable")),
                Format::Text => println!("{}", r.text),
            }
            ExitCode::from(r.code)
        }
        Err(f) => {
            let msg = match &f {
                Failure::Invalid(m) | Failure::Budget(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
