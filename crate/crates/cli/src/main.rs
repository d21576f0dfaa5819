//! Command-line interface: exact solvers, stability analysis, the discrete
//! relaxation engine, profiles and figures.
//!
//! Exit codes: 0 ok, 2 invalid input, 3 solver failure, 4 stationarity
//! precondition failure, 5 topology event. Requested artifacts (JSON, CSV,
//! tables) go to stdout or to --json/--csv/--svg paths; diagnostics go to
//! stderr.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diskfoam_core::document::{GraphDocument, Metadata};
use diskfoam_core::error::Error as CoreError;
use diskfoam_core::evolver::{
    self, catalog, cocircular_chain_report, pressures_estimate, relax, template_by_name,
    RelaxOptions,
};
use diskfoam_core::solver::{
    profile_sweep, radii_upper_bound, solve_three_areas, solve_two_areas, AreaTargets, ProfileEntry,
};
use diskfoam_core::stability::{self, stability_report};
use diskfoam_core::standard::check_stationary;
use diskfoam_core::svg;

#[derive(Parser)]
#[command(
    name = "diskfoam",
    about = "Least-perimeter partitions of the unit disk",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the graph document to this path instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Render the result to an SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact least-perimeter partition for two or three areas.
    Solve {
        /// Comma-separated areas (2 or 3 values), or "equal" with --n.
        #[arg(long)]
        areas: String,
        /// Region count for --areas equal.
        #[arg(long)]
        n: Option<usize>,
        /// Rescale arbitrary positive areas to sum to pi.
        #[arg(long)]
        normalize: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Constrained spectrum and instability certificates of a graph document.
    Stability {
        /// Input graph document (JSON).
        input: PathBuf,
        /// Number of eigenvalues to report.
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Intervals per edge for the discretization.
        #[arg(long, default_value_t = stability::DEFAULT_M)]
        m: usize,
        /// Write the report JSON to this path instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Relax a topology template under exact area constraints.
    Evolve {
        /// Template name (see `compare --list`).
        #[arg(long)]
        template: String,
        /// Comma-separated areas or "equal".
        #[arg(long, default_value = "equal")]
        areas: String,
        /// Region count override for --areas equal.
        #[arg(long)]
        n: Option<usize>,
        /// Rescale arbitrary positive areas to sum to pi.
        #[arg(long)]
        normalize: bool,
        /// Interior points per edge.
        #[arg(long, default_value_t = 48)]
        n_pts: usize,
        /// Convergence tolerance on the constrained gradient norm.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Iteration budget.
        #[arg(long, default_value_t = 40_000)]
        max_iters: usize,
        /// Perturb the seed geometry (0 = no perturbation).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the cocircular 4-component chain report.
        #[arg(long)]
        cocircular_report: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate the isoperimetric profile over the area simplex.
    Profile {
        /// Region count (2 or 3).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Grid points per axis (step pi/(grid-1)).
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Write CSV to this path instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write every grid point's graph document (JSON array).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Relax every catalog template for the areas and rank by perimeter.
    Compare {
        /// Region count (3..6).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Comma-separated areas or "equal".
        #[arg(long, default_value = "equal")]
        areas: String,
        /// Rescale arbitrary positive areas to sum to pi.
        #[arg(long)]
        normalize: bool,
        /// Interior points per edge.
        #[arg(long, default_value_t = 32)]
        n_pts: usize,
        /// Convergence tolerance.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        /// Iteration budget per template.
        #[arg(long, default_value_t = 40_000)]
        max_iters: usize,
        /// List the catalog and exit.
        #[arg(long)]
        list: bool,
    },
    /// Validate a graph document and report stationarity residuals.
    Check {
        /// Input graph document (JSON).
        input: PathBuf,
    },
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::Domain(_) | CoreError::Document(_) | CoreError::Infeasible(_) => 2,
        CoreError::Solver { .. } | CoreError::Consistency(_) => 3,
        CoreError::NotStationary(_) => 4,
        CoreError::TopologyEvent { .. } => 5,
        CoreError::Topology(_) | CoreError::Pole(_) => 2,
    }
}

fn parse_areas(
    text: &str,
    n_hint: Option<usize>,
    normalize: bool,
) -> Result<AreaTargets, CoreError> {
    if text == "equal" {
        return AreaTargets::equal(n_hint.unwrap_or(3));
    }
    let raw: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let raw = raw.map_err(|e| CoreError::Domain(format!("bad area list: {e}")))?;
    if normalize {
        AreaTargets::normalized(raw)
    } else {
        AreaTargets::new(raw)
    }
}

fn emit(text: &str, path: &Option<PathBuf>) -> Result<(), CoreError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CoreError::Document(e.to_string())),
        None => {
            print!("{text}");
            std::io::stdout()
                .flush()
                .map_err(|e| CoreError::Document(e.to_string()))
        }
    }
}

fn run() -> Result<(), CoreError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve {
            areas,
            n,
            normalize,
            output,
        } => cmd_solve(&areas, n, normalize, &output),
        Command::Stability { input, k, m, json } => cmd_stability(&input, k, m, &json),
        Command::Evolve {
            template,
            areas,
            n,
            normalize,
            n_pts,
            tol,
            max_iters,
            seed,
            cocircular_report,
            output,
        } => cmd_evolve(
            &template,
            &areas,
            n,
            normalize,
            n_pts,
            tol,
            max_iters,
            seed,
            cocircular_report,
            &output,
        ),
        Command::Profile { n, grid, csv, json } => cmd_profile(n, grid, &csv, &json),
        Command::Compare {
            n,
            areas,
            normalize,
            n_pts,
            tol,
            max_iters,
            list,
        } => cmd_compare(n, &areas, normalize, n_pts, tol, max_iters, list),
        Command::Check { input } => cmd_check(&input),
    }
}

fn cmd_solve(
    areas: &str,
    n: Option<usize>,
    normalize: bool,
    output: &OutputArgs,
) -> Result<(), CoreError> {
    let targets = parse_areas(areas, n.or(Some(3)), normalize)?;
    let (graph, perimeter) = match targets.len() {
        2 => {
            let splitter = solve_two_areas(targets.get(0), targets.get(1))?;
            (splitter.to_partition_graph()?, splitter.length())
        }
        3 => {
            let std = solve_three_areas(&targets)?;
            (std.to_partition_graph()?, std.perimeter())
        }
        k => {
            return Err(CoreError::Domain(format!(
                "exact solve supports 2 or 3 areas, got {k} (radii bound: {})",
                radii_upper_bound(&targets)
            )))
        }
    };
    eprintln!(
        "perimeter {perimeter:.12}; pressures {:?}",
        graph.regions.iter().map(|r| r.pressure).collect::<Vec<_>>()
    );
    let mut doc = GraphDocument::from_partition_graph(&graph);
    doc.metadata = Metadata {
        areas: Some(targets.as_slice().to_vec()),
        perimeter: Some(perimeter),
        provenance: Some("exact solver".into()),
        ..Metadata::default()
    };
    if let Some(path) = &output.svg {
        std::fs::write(path, svg::render_partition_graph(&graph))
            .map_err(|e| CoreError::Document(e.to_string()))?;
    }
    emit(&(doc.to_json()? + "\n"), &output.json)
}

fn cmd_stability(
    input: &PathBuf,
    k: usize,
    m: usize,
    json: &Option<PathBuf>,
) -> Result<(), CoreError> {
    let text = std::fs::read_to_string(input).map_err(|e| CoreError::Document(e.to_string()))?;
    let doc = GraphDocument::from_json(&text)?;
    let graph = doc.to_partition_graph()?;
    let stat = check_stationary(&graph);
    if !stat.is_stationary(stability::STATIONARY_TOL) {
        eprintln!(
            "stationarity residuals: angles {:?} balance {:?} orthogonality {:?}",
            stat.vertex_angle_residuals, stat.balancing_residuals, stat.orthogonality_residuals
        );
        return Err(CoreError::NotStationary(format!(
            "max residual {}",
            stat.max_residual()
        )));
    }
    let report = stability_report(&graph, m, k)?;
    let body = serde_json::json!({
        "lambda_min": report.eigenvalues.first(),
        "modes": report.eigenvalues,
        "constraint_rank": report.constraint_rank,
        "rank_deficient": report.rank_deficient,
        "verdict": report.verdict.as_str(),
        "rotation_nodal_count": report.rotation_nodal_count,
        "certificates": report.certificates.iter().map(|c| {
            serde_json::json!({
                "kind": c.kind.as_str(),
                "Q_value": c.q_value,
                "rayleigh": c.rayleigh,
                "support": c.support,
            })
        }).collect::<Vec<_>>(),
    });
    let text =
        serde_json::to_string_pretty(&body).map_err(|e| CoreError::Document(e.to_string()))?;
    emit(&(text + "\n"), json)
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    template: &str,
    areas: &str,
    n: Option<usize>,
    normalize: bool,
    n_pts: usize,
    tol: f64,
    max_iters: usize,
    seed: u64,
    cocircular: bool,
    output: &OutputArgs,
) -> Result<(), CoreError> {
    let t = template_by_name(template)
        .ok_or_else(|| CoreError::Domain(format!("unknown template {template}")))?;
    let targets = parse_areas(areas, n.or(Some(t.regions)), normalize)?;
    let mut graph = evolver::templates::template_instantiate(&t, &targets, n_pts)?;
    if seed != 0 {
        let mut rng = diskfoam_core::util::SplitMix64::new(seed);
        for c in &mut graph.chains {
            for p in &mut c.points {
                p.x += rng.range(-1e-3, 1e-3);
                p.y += rng.range(-1e-3, 1e-3);
            }
        }
    }
    let opts = RelaxOptions {
        tol,
        max_iters,
        ..RelaxOptions::default()
    };
    let result = relax(graph, &opts)?;
    eprintln!(
        "perimeter {:.9}; converged {}; iterations {}; gradient {:.3e}",
        result.perimeter, result.converged, result.iterations, result.gradient_norm
    );
    if let Ok(est) = pressures_estimate(&result) {
        eprintln!(
            "pressure estimate {:?} (fit residual {:.2e})",
            est.pressures, est.fit_residual
        );
    }
    if cocircular {
        let report = cocircular_chain_report(&result.graph, 1e-2)?;
        for (k, chain) in report.chains.iter().enumerate() {
            eprintln!(
                "chain {k}: members {:?}, cocircular {}, slide dof {}",
                chain.faces, chain.all_cocircular, chain.slide_dof
            );
        }
    }
    if let Some(path) = &output.svg {
        std::fs::write(path, svg::render_discrete_graph(&result.graph))
            .map_err(|e| CoreError::Document(e.to_string()))?;
    }
    let mut doc = GraphDocument::from_discrete_graph(&result.graph);
    doc.metadata = Metadata {
        template: Some(t.name.into()),
        areas: Some(targets.as_slice().to_vec()),
        perimeter: Some(result.perimeter),
        multipliers: Some(result.multipliers.clone()),
        iterations: Some(result.iterations),
        converged: Some(result.converged),
        provenance: Some("relaxation engine".into()),
    };
    emit(&(doc.to_json()? + "\n"), &output.json)
}

fn cmd_profile(
    n: usize,
    grid: usize,
    csv: &Option<PathBuf>,
    json: &Option<PathBuf>,
) -> Result<(), CoreError> {
    let entries = profile_sweep(n, grid)?;
    if let Some(path) = json {
        let docs: Vec<serde_json::Value> = entries
            .iter()
            .filter_map(|e| match e {
                ProfileEntry::Ok(p) => {
                    let mut doc = GraphDocument::from_partition_graph(&p.graph);
                    doc.metadata = Metadata {
                        areas: Some(p.areas.clone()),
                        perimeter: Some(p.perimeter),
                        provenance: Some("profile sweep".into()),
                        ..Metadata::default()
                    };
                    serde_json::to_value(&doc).ok()
                }
                ProfileEntry::Failed { .. } => None,
            })
            .collect();
        std::fs::write(
            path,
            serde_json::to_string_pretty(&docs).map_err(|e| CoreError::Document(e.to_string()))?,
        )
        .map_err(|e| CoreError::Document(e.to_string()))?;
    }
    let mut out = String::new();
    match n {
        2 => out.push_str("a1,a2,perimeter,error\n"),
        _ => out.push_str("a1,a2,a3,perimeter,error\n"),
    }
    for e in &entries {
        match e {
            ProfileEntry::Ok(p) => {
                let areas = p
                    .areas
                    .iter()
                    .map(|a| format!("{a:.12}"))
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&format!("{areas},{:.12},\n", p.perimeter));
            }
            ProfileEntry::Failed { areas, error } => {
                let areas = areas
                    .iter()
                    .map(|a| format!("{a:.12}"))
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&format!("{areas},,\"{error}\"\n"));
            }
        }
    }
    emit(&out, csv)
}

fn cmd_compare(
    n: usize,
    areas: &str,
    normalize: bool,
    n_pts: usize,
    tol: f64,
    max_iters: usize,
    list: bool,
) -> Result<(), CoreError> {
    let templates = catalog(n);
    if templates.is_empty() {
        return Err(CoreError::Domain(format!("no catalog for {n} regions")));
    }
    if list {
        for t in &templates {
            println!("{} ({} regions)", t.name, t.regions);
        }
        return Ok(());
    }
    let targets = parse_areas(areas, Some(n), normalize)?;
    let opts = RelaxOptions {
        tol,
        max_iters,
        ..RelaxOptions::default()
    };
    let outcomes = evolver::compare_candidates(&targets, &templates, n_pts, &opts);
    println!(
        "{:<14} {:>14} {:>11} {:>7}",
        "template", "perimeter", "converged", "iters"
    );
    for o in &outcomes {
        match &o.result {
            Ok(r) => println!(
                "{:<14} {:>14.9} {:>11} {:>7}",
                o.template, r.perimeter, r.converged, r.iterations
            ),
            Err(e) => {
                println!("{:<14} {:>14} {:>11} {:>7}", o.template, "-", "failed", "-");
                eprintln!("{}: {e}", o.template);
            }
        }
    }
    Ok(())
}

fn cmd_check(input: &PathBuf) -> Result<(), CoreError> {
    let text = std::fs::read_to_string(input).map_err(|e| CoreError::Document(e.to_string()))?;
    let doc = GraphDocument::from_json(&text)?;
    if doc.is_exact() {
        let graph = doc.to_partition_graph()?;
        let stat = check_stationary(&graph);
        println!(
            "exact graph: {} vertices, {} edges, {} regions",
            graph.vertices.len(),
            graph.edges.len(),
            graph.regions.len()
        );
        println!("areas: {:?}", graph.areas());
        println!("perimeter: {:.12}", graph.perimeter());
        println!("max stationarity residual: {:.3e}", stat.max_residual());
        if !stat.is_stationary(stability::STATIONARY_TOL) {
            return Err(CoreError::NotStationary(format!(
                "max residual {}",
                stat.max_residual()
            )));
        }
    } else {
        let graph = doc.to_discrete_graph()?;
        println!(
            "discrete graph: {} junctions, {} chains, {} regions",
            graph.junctions.len(),
            graph.chains.len(),
            graph.n_regions
        );
        println!("areas: {:?}", graph.areas());
        println!("perimeter: {:.12}", graph.perimeter());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
