//! `nmrf` command-line tool. Reports go to stdout as JSON (CSV for `bench`),
//! diagnostics to stderr. Exit codes: 0 ok, 1 negative verdict, 2 input
//! error, 3 resource cap exceeded.

mod bench;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nmrf::generate::Family;
use nmrf::graph::PlainGraph;
use nmrf::mwss::SolveError;
use nmrf::nmrf::{build_nmrf, reparameterize_model, NmrfExport};
use nmrf::oracle::{brute_force_map, OracleError};
use nmrf::perfection::{
    binary_pairwise_perfection, is_perfect_small, PerfectionError, DEFAULT_MAX_VERTICES,
};
use nmrf::submodular::{construct_k3, representation_feasible, HighOrderPotential, SubmodularError};
use nmrf::{classify_model, compile_binary_pairwise, solve_map_with, Method, Model, SolveOptions};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "nmrf", version, about = "Exact MAP inference through NMRF compilation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Tolerance for zero weights and zero associativity.
    #[arg(long, default_value_t = 1e-9, global = true)]
    eps: f64,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file and summarize it.
    Validate {
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classify the blocks of a binary pairwise model.
    Classify {
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compile a model to its pruned NMRF and export it.
    Compile {
        model: PathBuf,
        /// Also write the NMRF in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Keep every singleton node when pruning.
        #[arg(long)]
        keep_singletons: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compute a MAP assignment.
    Solve {
        model: PathBuf,
        #[arg(long, default_value = "auto")]
        method: Method,
        /// Node cap for branch and bound.
        #[arg(long, default_value_t = nmrf::mwss::DEFAULT_BNB_CAP)]
        max_nodes: usize,
        /// Compare against brute-force enumeration.
        #[arg(long)]
        oracle_check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check an exported NMRF for perfection.
    Perfect {
        /// NMRF export as written by `compile` ("-" reads stdin).
        nmrf: PathBuf,
        /// Vertex cap for the exhaustive search.
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_nodes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Analyse a higher-order binary potential.
    Submodular {
        potential: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generate seeded instances and report timing and agreement as CSV.
    Bench {
        /// random-tractable, random-signed, random-supermodular-k3 or block-chain(N).
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Vertex bound for random-tractable and random-signed.
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare every solve against brute-force enumeration.
        #[arg(long)]
        oracle_check: bool,
        /// Omit timing columns so the output is reproducible.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        common: Common,
    },
}

pub(crate) enum Failure {
    Input(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cap(m) => m,
        }
    }
}

/// A finished command: what to print and whether the verdict was positive.
pub(crate) struct Report {
    body: String,
    positive: bool,
}

impl Report {
    fn json(value: Value, positive: bool) -> Self {
        let mut body = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        body.push('\n');
        Report { body, positive }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model<f64>, Failure> {
    Model::from_json(&read_input(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn names(model: &Model<f64>) -> Vec<String> {
    model.variables().iter().map(|v| v.name.clone()).collect()
}

fn check_eps(eps: f64) -> Result<(), Failure> {
    if eps.is_finite() && eps >= 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("--eps must be a finite nonnegative number, got {eps}")))
    }
}

fn validate(path: &Path) -> Result<Report, Failure> {
    let model = load_model(path)?;
    Ok(Report::json(
        json!({
            "valid": true,
            "variables": model.num_variables(),
            "potentials": model.potentials().len(),
            "binary_pairwise": model.is_binary_pairwise(),
            "configurations": model.configuration_count().to_string(),
        }),
        true,
    ))
}

fn classify(path: &Path, eps: f64) -> Result<Report, Failure> {
    let model = load_model(path)?;
    let report = classify_model(&model, eps).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(Report::json(report.to_json(&names(&model)), report.tractable))
}

fn compile(path: &Path, eps: f64, keep_singletons: bool, dot: Option<&Path>) -> Result<Report, Failure> {
    let model = load_model(path)?;
    let nmrf = if model.is_binary_pairwise() {
        let plan = classify_model(&model, eps)
            .map_err(|e| Failure::Input(e.to_string()))?
            .plan;
        if keep_singletons {
            let reparam = reparameterize_model(&model, &plan, eps).map_err(|e| Failure::Input(e.to_string()))?;
            build_nmrf(&reparam).prune_keeping_singletons(eps)
        } else {
            compile_binary_pairwise(&model, &plan, eps).map_err(|e| Failure::Input(e.to_string()))?
        }
    } else if keep_singletons {
        build_nmrf(&model).prune_keeping_singletons(eps)
    } else {
        build_nmrf(&model).prune(eps)
    };
    let names = names(&model);
    if let Some(dot) = dot {
        fs::write(dot, nmrf.to_dot(&names)).map_err(|e| Failure::Input(format!("{}: {e}", dot.display())))?;
    }
    let export = serde_json::to_value(nmrf.to_export(&names)).expect("export serializes");
    Ok(Report::json(export, true))
}

fn oracle_json(model: &Model<f64>) -> Result<Value, Failure> {
    match brute_force_map(model) {
        Ok(s) => Ok(s.to_json(&names(model))),
        Err(e @ OracleError::TooLarge { .. }) => Err(Failure::Cap(format!("oracle check: {e}"))),
    }
}

fn solve(path: &Path, opts: &SolveOptions<f64>, oracle_check: bool) -> Result<Report, Failure> {
    let model = load_model(path)?;
    let names = names(&model);
    match solve_map_with(&model, opts) {
        Ok(solution) => {
            let mut report = solution.to_json(&names);
            let mut positive = true;
            if oracle_check {
                let oracle = brute_force_map(&model).map_err(|e| Failure::Cap(format!("oracle check: {e}")))?;
                let scale = 1.0 + oracle.objective.abs();
                let agrees = (oracle.objective - solution.objective).abs() <= 1e-6 * scale;
                positive = agrees;
                report["oracle"] = json!({
                    "objective": oracle.objective,
                    "assignment": oracle.to_json(&names)["assignment"],
                    "agrees": agrees,
                });
                if !agrees {
                    eprintln!(
                        "oracle disagreement: solver {} vs brute force {}",
                        solution.objective, oracle.objective
                    );
                }
            }
            Ok(Report::json(report, positive))
        }
        Err(SolveError::IntractableTopology { witness }) => {
            eprintln!("topology is intractable for exact solving by decomposition");
            let mut report = json!({
                "error": "intractable_topology",
                "witness": {
                    "vertices": witness.vertices.iter().map(|&v| names[v].clone()).collect::<Vec<_>>(),
                    "signs": witness.signs,
                },
            });
            if oracle_check {
                report["oracle"] = oracle_json(&model)?;
            }
            Ok(Report::json(report, false))
        }
        Err(SolveError::NotBalanced) => {
            eprintln!("topology is not balanced; the bipartite method does not apply");
            let mut report = json!({"error": "not_balanced"});
            if oracle_check {
                report["oracle"] = oracle_json(&model)?;
            }
            Ok(Report::json(report, false))
        }
        Err(e @ SolveError::TooLarge { .. }) => Err(Failure::Cap(e.to_string())),
        Err(SolveError::Mwss(e @ nmrf::mwss::MwssError::TooLarge { .. })) => Err(Failure::Cap(e.to_string())),
        Err(e) => Err(Failure::Input(e.to_string())),
    }
}

fn perfect(path: &Path, max_nodes: usize) -> Result<Report, Failure> {
    let text = read_input(path)?;
    let export: NmrfExport =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let (nmrf, _) = export.to_nmrf().map_err(|e| Failure::Input(e.to_string()))?;
    let cap = |e: PerfectionError| match e {
        PerfectionError::TooLarge { .. } => Failure::Cap(e.to_string()),
        other => Failure::Input(other.to_string()),
    };
    let (verdict, check) = match binary_pairwise_perfection(&nmrf, max_nodes) {
        Ok(v) => (v, "odd-hole search"),
        Err(PerfectionError::NotBinaryPairwise { .. } | PerfectionError::NotSingleEnodeForm { .. }) => (
            is_perfect_small(&PlainGraph::from(&nmrf), max_nodes).map_err(cap)?,
            "odd-hole and odd-antihole search",
        ),
        Err(e) => return Err(cap(e)),
    };
    let mut report = serde_json::to_value(&verdict).expect("verdict serializes");
    report["perfect"] = json!(verdict.is_perfect());
    report["nodes"] = json!(nmrf.len());
    report["check"] = json!(check);
    Ok(Report::json(report, verdict.is_perfect()))
}

fn submodular(path: &Path, eps: f64) -> Result<Report, Failure> {
    let text = read_input(path)?;
    let psi = HighOrderPotential::<f64>::from_json(&text).map_err(|e| match e {
        SubmodularError::TooLarge { .. } => Failure::Cap(e.to_string()),
        other => Failure::Input(format!("{}: {other}", path.display())),
    })?;
    let scope = psi.scope().to_vec();
    let feasibility = representation_feasible(&psi, eps).map_err(|e| match e {
        SubmodularError::TooLarge { .. } => Failure::Cap(e.to_string()),
        other => Failure::Input(other.to_string()),
    })?;
    let mut report = json!({
        "scope": scope,
        "order": psi.order(),
        "supermodular": psi.is_supermodular(eps),
        "alpha": psi.alpha(),
        "feasibility": feasibility.to_json(&scope),
    });
    if psi.order() == 3 && psi.is_supermodular(eps) {
        let rep = construct_k3(&psi, eps).map_err(|e| Failure::Input(e.to_string()))?;
        report["representation"] = rep.to_json(&scope);
    }
    Ok(Report::json(report, feasibility.is_feasible()))
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, &report.body).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(report.body.as_bytes())
            .map_err(|e| Failure::Input(format!("stdout: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), Failure> {
    let (report, common) = match cli.command {
        Command::Validate { model, common } => (validate(&model)?, common),
        Command::Classify { model, common } => {
            check_eps(common.eps)?;
            (classify(&model, common.eps)?, common)
        }
        Command::Compile {
            model,
            dot,
            keep_singletons,
            common,
        } => {
            check_eps(common.eps)?;
            (compile(&model, common.eps, keep_singletons, dot.as_deref())?, common)
        }
        Command::Solve {
            model,
            method,
            max_nodes,
            oracle_check,
            common,
        } => {
            check_eps(common.eps)?;
            let mut opts = SolveOptions::new(method);
            opts.eps = common.eps;
            opts.max_nodes = max_nodes;
            (solve(&model, &opts, oracle_check)?, common)
        }
        Command::Perfect { nmrf, max_nodes, common } => (perfect(&nmrf, max_nodes)?, common),
        Command::Submodular { potential, common } => {
            check_eps(common.eps)?;
            (submodular(&potential, common.eps)?, common)
        }
        Command::Bench {
            family,
            count,
            size,
            seed,
            oracle_check,
            no_timing,
            common,
        } => {
            check_eps(common.eps)?;
            let family: Family = family.parse().map_err(Failure::Input)?;
            let config = bench::Config {
                family,
                count,
                size,
                seed,
                oracle_check,
                timing: !no_timing,
                eps: common.eps,
            };
            (bench::run(&config)?, common)
        }
    };
    Ok((report, common.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).and_then(|(report, out)| emit(&report, out.as_deref()).map(|()| report)) {
        Ok(report) => ExitCode::from(if report.positive { 0 } else { 1 }),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
