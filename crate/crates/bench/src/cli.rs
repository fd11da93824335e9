//! Command-line interface: `generate`, `solve`, `compare`, `experiment`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use modmvnf_core::generator::{generate, GeneratorSpec, Preset, UnitCostModel};
use modmvnf_core::nsga2::GaConfig;
use modmvnf_core::problem::EvalOptions;
use modmvnf_core::{Instance, Problem};

use crate::compare::compare;
use crate::error::BenchError;
use crate::experiment::{run_experiment, ExperimentConfig};
use crate::figures::write_csv;
use crate::result::{Algorithm, ExperimentResult};
use crate::runner::{run_algorithm, SolverSettings};

#[derive(Debug, Parser)]
#[command(name = "modmvnf", version, about = "Joint NF decomposition and VNF placement: optimizers and experiment harness")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (generate, solve) or directory (compare, experiment).
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Suppress tables and progress output.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    /// Leave runtimes out of results (for byte-identical reruns).
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance.
    Generate(GenerateArgs),
    /// Run one solver on an instance.
    Solve(SolveArgs),
    /// Compare result files from the same instance.
    Compare(CompareArgs),
    /// Run the seeded experiment suite.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostKind {
    Fixed,
    Uniform,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Unit cost model; `uniform` draws integer costs per node in [cost-min, cost-max].
    #[arg(long, value_enum)]
    pub unit_costs: Option<CostKind>,
    #[arg(long, default_value_t = 1)]
    pub cost_min: u32,
    #[arg(long, default_value_t = 5)]
    pub cost_max: u32,
}

impl CostArgs {
    fn model(&self) -> Option<UnitCostModel> {
        self.unit_costs.map(|k| match k {
            CostKind::Fixed => UnitCostModel::default(),
            CostKind::Uniform => UnitCostModel::Uniform { min: self.cost_min, max: self.cost_max },
        })
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Start from a preset (tiny, small10, small12, large).
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub sgs: Option<usize>,
    /// Maximum decompositions per service graph.
    #[arg(long)]
    pub decompositions: Option<usize>,
    #[arg(long)]
    pub min_nfs: Option<usize>,
    #[arg(long)]
    pub max_nfs: Option<usize>,
    #[arg(long)]
    pub link_probability: Option<f64>,
    #[arg(long)]
    pub delay_min: Option<u64>,
    #[arg(long)]
    pub delay_max: Option<u64>,
    /// Random tree decompositions instead of chains.
    #[arg(long)]
    pub branching: bool,
    #[arg(long)]
    pub l_target: Option<f64>,
    #[command(flatten)]
    pub costs: CostArgs,
}

impl GenerateArgs {
    pub fn spec(&self, seed: u64) -> GeneratorSpec {
        let mut s = self.preset.map_or_else(GeneratorSpec::default, Preset::spec);
        s.seed = seed;
        if let Some(v) = self.nodes {
            s.num_nodes = v;
        }
        if let Some(v) = self.sgs {
            s.num_sgs = v;
        }
        if let Some(v) = self.decompositions {
            s.decompositions_per_sg = v;
        }
        if let Some(v) = self.min_nfs {
            s.min_nfs_per_decomposition = v;
        }
        if let Some(v) = self.max_nfs {
            s.max_nfs_per_decomposition = v;
        }
        if let Some(v) = self.link_probability {
            s.link_probability = v;
        }
        if let Some(v) = self.delay_min {
            s.link_delay_range.0 = v;
        }
        if let Some(v) = self.delay_max {
            s.link_delay_range.1 = v;
        }
        if self.branching {
            s.branching = true;
        }
        if self.l_target.is_some() {
            s.l_target = self.l_target;
        }
        if let Some(u) = self.costs.model() {
            s.unit_costs = u;
        }
        s
    }
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 100)]
    pub generations: usize,
    #[arg(long, default_value_t = 60)]
    pub population: usize,
    /// Failed pairings tolerated per offspring population (default 4N).
    #[arg(long)]
    pub max_pairing_attempts: Option<usize>,
    /// Fail instead of keeping infeasible initial members.
    #[arg(long)]
    pub strict_init: bool,
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    #[arg(long, default_value_t = 60)]
    pub swarm: usize,
    #[arg(long, default_value_t = 0.7)]
    pub inertia: f64,
    #[arg(long, default_value_t = 1.5)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.5)]
    pub c2: f64,
    #[arg(long, default_value_t = 100)]
    pub archive: usize,
    /// Evaluation budget for the swarm.
    #[arg(long)]
    pub max_evaluations: Option<u64>,
    /// Cap on the exhaustive search space.
    #[arg(long, default_value_t = 100_000_000)]
    pub max_assignments: u64,
}

impl SolverArgs {
    pub fn settings(&self, seed: u64, timing: bool) -> SolverSettings {
        let mut s = SolverSettings { timing, ..SolverSettings::default() };
        s.ga = GaConfig {
            population_size: self.population,
            generations: self.generations,
            max_pairing_attempts: self.max_pairing_attempts,
            strict_init: self.strict_init,
            seed,
            ..GaConfig::default()
        };
        s.pso.swarm_size = self.swarm;
        s.pso.iterations = self.iterations;
        s.pso.inertia = self.inertia;
        s.pso.cognitive = self.c1;
        s.pso.social = self.c2;
        s.pso.archive_capacity = self.archive;
        s.pso.max_evaluations = self.max_evaluations;
        s.pso.seed = seed;
        s.exact.max_total_assignments = u128::from(self.max_assignments);
        s
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    #[arg(short, long, value_enum, default_value_t = Algorithm::Modmvnf)]
    pub algorithm: Algorithm,
    /// Sum latency over declared decomposition edges.
    #[arg(long)]
    pub latency_over_edges: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Result files (at least two, same instance).
    #[arg(required = true)]
    pub results: Vec<PathBuf>,
    /// Re-evaluate every front against this instance first.
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value = "small10")]
    pub preset: Preset,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Skip the exhaustive solver.
    #[arg(long)]
    pub no_exact: bool,
    /// Worker threads (default: MODMVNF_THREADS or all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub costs: CostArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), BenchError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| BenchError::io(path, e))
}

fn stdout(bytes: &[u8]) -> Result<(), BenchError> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| BenchError::io(Path::new("<stdout>"), e))
}

fn front_table(r: &ExperimentResult) -> String {
    let mut s = format!("{} front: {} point(s), {} evaluations\n", r.algorithm, r.front.len(), r.evaluations);
    s.push_str(&format!("{:>4} {:>14} {:>10}  decompositions\n", "#", "cost", "latency"));
    for (i, e) in r.front.iter().enumerate() {
        let decs: Vec<String> = e.placements.iter().map(|p| p.decomposition.to_string()).collect();
        s.push_str(&format!("{:>4} {:>14.2} {:>10.3}  [{}]\n", i + 1, e.cost, e.latency, decs.join(",")));
    }
    if let Some(x) = &r.exact {
        s.push_str(&format!("min cost {}  min latency {}\n", x.min_cost, x.min_latency));
    }
    s
}

#[derive(serde::Serialize)]
struct FrontCsvRow {
    cost: f64,
    latency: f64,
    decompositions: String,
}

pub fn load_problem(path: &Path, options: EvalOptions) -> Result<Problem, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let inst = Instance::from_json_str(&text)?;
    Ok(Problem::new(inst, options)?)
}

pub fn run(cli: Cli) -> Result<(), BenchError> {
    let timing = !cli.no_timing;
    match &cli.command {
        Command::Generate(args) => {
            if cli.format == Format::Csv {
                return Err(BenchError::Invalid("instances are written as JSON only".into()));
            }
            let inst: Instance = generate(&args.spec(cli.seed))?;
            let json = inst.to_json_pretty() + "\n";
            match &cli.output {
                Some(p) => {
                    write_file(p, json.as_bytes())?;
                    if !cli.quiet {
                        println!("{}", p.display());
                    }
                }
                None => stdout(json.as_bytes())?,
            }
        }
        Command::Solve(args) => {
            let problem = load_problem(&args.instance, EvalOptions { latency_over_edges: args.latency_over_edges })?;
            let settings = args.solver.settings(cli.seed, timing);
            let result = run_algorithm(&problem, args.algorithm, &settings)?;
            let bytes = match cli.format {
                Format::Json => result.to_json().into_bytes(),
                Format::Csv => {
                    let rows: Vec<FrontCsvRow> = result
                        .front
                        .iter()
                        .map(|e| FrontCsvRow {
                            cost: e.cost,
                            latency: e.latency,
                            decompositions: e.placements.iter().map(|p| p.decomposition.to_string()).collect::<Vec<_>>().join(";"),
                        })
                        .collect();
                    let mut buf = Vec::new();
                    write_csv(&mut buf, &rows)?;
                    buf
                }
            };
            match &cli.output {
                Some(p) => {
                    write_file(p, &bytes)?;
                    if !cli.quiet {
                        print!("{}", front_table(&result));
                    }
                }
                None => {
                    if !cli.quiet {
                        eprint!("{}", front_table(&result));
                    }
                    stdout(&bytes)?;
                }
            }
        }
        Command::Compare(args) => {
            if args.results.len() < 2 {
                return Err(BenchError::Invalid("compare needs at least two result files".into()));
            }
            let results = args.results.iter().map(|p| ExperimentResult::load(p)).collect::<Result<Vec<_>, _>>()?;
            if let Some(inst) = &args.instance {
                let problem = load_problem(inst, EvalOptions::default())?;
                for r in &results {
                    r.verify_against(&problem)?;
                }
            }
            let report = compare(&results)?;
            if let Some(dir) = &cli.output {
                report.write_to(dir, &results, cli.format == Format::Csv)?;
            }
            if !cli.quiet {
                print!("{}", report.table());
            }
        }
        Command::Experiment(args) => {
            let mut cfg = ExperimentConfig::new(args.preset, args.runs, cli.seed);
            cfg.unit_costs = args.costs.model();
            cfg.settings = args.solver.settings(0, timing);
            cfg.include_exact = !args.no_exact;
            cfg.threads = args.threads;
            let report = run_experiment(&cfg)?;
            let dir = cli.output.clone().unwrap_or_else(|| PathBuf::from("experiment"));
            report.write_to(&dir)?;
            if !cli.quiet {
                print!("{}", report.summary_text());
                println!("report written to {}", dir.display());
            }
            if report.summary.completed_runs == 0 {
                return Err(BenchError::Solve(modmvnf_core::problem::SolveError::NoFeasibleSolution));
            }
        }
    }
    Ok(())
}
