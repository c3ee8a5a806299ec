//! The `submax` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use submax_core::function::CoverGadget;
use submax_core::subset;
use submax_core::verify::{
    brute_force_opt, optimal_online_policy_value, policy_game_nodes, CoverGame, DEFAULT_WORLD_CAP,
};
use submax_core::DEFAULT_CAP;

use crate::corpus::{generate_corpus, ConstraintFamily, Corpus, FamilySpec, FunctionFamily};
use crate::error::{io_error, Result, SubmaxError};
use crate::experiment::{run_experiment, Algorithm, ExperimentConfig, InstanceSource};
use crate::instance::Instance;
use crate::report::{emit_report, Format, RunReport};
use crate::suite::{permutation_uniformity, property_suite, SuiteReport, UniformityReport};

/// Tolerance for the exact lower-bound value.
pub const LOWER_BOUND_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "submax",
    version,
    about = "Submodular maximization: offline, secretary and verification tools"
)]
pub struct Cli {
    /// Master RNG seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest ground set for brute force and exhaustive checks.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Output format.
    #[arg(long, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an offline algorithm on an instance.
    Solve(SolveArgs),
    /// Monte Carlo simulation of a secretary algorithm.
    Simulate(SimulateArgs),
    /// Property suites on instances or a corpus.
    Verify(VerifyArgs),
    /// Exact optimal online policy on the cover gadget.
    Lowerbound(LowerboundArgs),
    /// Generate a reproducible instance corpus.
    Gen(GenArgs),
    /// Time an algorithm on generated instances of growing size.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OfflineAlgorithm {
    Card,
    Psys,
    Knapsack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnlineAlgorithm {
    CardSecretary,
    AdviceCard,
    Threshold,
    PartitionContig,
    PartitionGeneral,
    MatroidSecretary,
    MatroidAdvice,
    Dynkin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FmvArg {
    Random,
    Local,
    Exact,
}

impl FmvArg {
    fn name(self) -> &'static str {
        match self {
            FmvArg::Random => "random",
            FmvArg::Local => "local",
            FmvArg::Exact => "exact",
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: OfflineAlgorithm,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    /// Override the knapsack budget.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = FmvArg::Exact)]
    pub fmv: FmvArg,
    /// Uncertified fast mode (two passes for psys, top-8 second passes for knapsack).
    #[arg(long)]
    pub fast: bool,
    /// Greedy stops at the first non-positive marginal (uncertified).
    #[arg(long)]
    pub stop_nonpositive: bool,
    /// Independent runs with seeds derived from `--seed`.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: OnlineAlgorithm,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// Advice value Z (default: brute-force OPT).
    #[arg(long)]
    pub z: Option<f64>,
    /// Threshold for `threshold` (default Z/(7k)).
    #[arg(long)]
    pub tau: Option<f64>,
    /// Backend used inside card-secretary.
    #[arg(long, value_enum, default_value_t = FmvArg::Exact)]
    pub fmv: FmvArg,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance files to check.
    #[arg(long)]
    pub instance: Vec<PathBuf>,
    /// Corpus directory (as written by `gen`).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Also run the permutation chi-square test for n = 2..=N.
    #[arg(long)]
    pub uniformity: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LowerboundArgs {
    /// Gadget size: 2 gives cover({1,2},{r}); even k > 2 averages over all S of size k/2.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Include every information state in the output.
    #[arg(long)]
    pub nodes: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Coverage,
    CoverageMinusCost,
    Cut,
    CoverGadget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstraintArg {
    /// Pick one suited to the algorithm (bench only).
    Auto,
    None,
    Uniform,
    Partition,
    ContiguousPartition,
    Graphic,
    Intersection,
    Knapsack,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// JSON family spec file; overrides the other family flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FunctionArg::CoverageMinusCost)]
    pub function: FunctionArg,
    #[arg(long, value_enum, default_value_t = ConstraintArg::Auto)]
    pub constraint: ConstraintArg,
    #[arg(long, default_value_t = 12)]
    pub universe: usize,
    #[arg(long, default_value_t = 4)]
    pub max_cover: usize,
    #[arg(long, default_value_t = 0.5)]
    pub edge_prob: f64,
    #[arg(long, default_value_t = 5)]
    pub max_weight: usize,
    /// Uniform rank, or the gadget's k.
    #[arg(long = "family-k", default_value_t = 3)]
    pub family_k: usize,
    #[arg(long, default_value_t = 3)]
    pub groups: usize,
    /// Matroids in an intersection.
    #[arg(long = "family-p", default_value_t = 2)]
    pub family_p: usize,
    #[arg(long, default_value_t = 5)]
    pub vertices: usize,
    #[arg(long, default_value_t = 5)]
    pub max_size: u64,
    #[arg(long, default_value_t = 0.4)]
    pub fraction: f64,
}

impl FamilyArgs {
    fn spec(&self, n: usize, auto: ConstraintArg) -> Result<FamilySpec> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path).map_err(io_error(path))?;
            let mut spec: FamilySpec = serde_json::from_str(&text)?;
            spec.n = n;
            return Ok(spec);
        }
        let function = match self.function {
            FunctionArg::Coverage => FunctionFamily::Coverage {
                universe: self.universe,
                max_cover: self.max_cover,
            },
            FunctionArg::CoverageMinusCost => FunctionFamily::CoverageMinusCost,
            FunctionArg::Cut => FunctionFamily::Cut {
                edge_prob: self.edge_prob,
                max_weight: self.max_weight,
            },
            FunctionArg::CoverGadget => FunctionFamily::CoverGadget { k: self.family_k },
        };
        let choice = if self.constraint == ConstraintArg::Auto {
            auto
        } else {
            self.constraint
        };
        let constraint = match choice {
            ConstraintArg::Auto | ConstraintArg::None => ConstraintFamily::None,
            ConstraintArg::Uniform => ConstraintFamily::Uniform { k: self.family_k },
            ConstraintArg::Partition => ConstraintFamily::Partition {
                groups: self.groups,
            },
            ConstraintArg::ContiguousPartition => ConstraintFamily::ContiguousPartition {
                groups: self.groups,
            },
            ConstraintArg::Graphic => ConstraintFamily::Graphic {
                vertices: self.vertices,
            },
            ConstraintArg::Intersection => ConstraintFamily::Intersection {
                p: self.family_p,
                groups: self.groups,
            },
            ConstraintArg::Knapsack => ConstraintFamily::Knapsack {
                max_size: self.max_size,
                fraction: self.fraction,
            },
        };
        Ok(FamilySpec {
            n,
            function,
            constraint,
        })
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Output directory for instance files and manifest.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Algorithm id, e.g. `card` or `matroid-secretary`.
    #[arg(long, default_value = "card")]
    pub algorithm: String,
    /// Comma-separated ground-set sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 10, 12])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = FmvArg::Local)]
    pub fmv: FmvArg,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeRecord {
    pub position: usize,
    pub observed: Vec<u64>,
    pub accepted: Vec<usize>,
    pub probability: f64,
    pub value: f64,
    pub accept_value: Option<f64>,
    pub reject_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub instance: String,
    pub k: usize,
    pub worlds: usize,
    pub optimal_policy_value: f64,
    pub opt: f64,
    pub ratio: f64,
    /// `8/3` for k = 2; `17k/12` as an upper limit otherwise.
    pub reference: f64,
    pub revealed_first_value: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<NodeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub millis: f64,
    pub query_count: u64,
    pub mean: f64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOutput {
    pub suites: Vec<SuiteReport>,
    pub uniformity: Vec<UniformityReport>,
    pub pass: bool,
}

fn write_out(out: &mut dyn Write, text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(io_error(path)),
        None => out
            .write_all(text.as_bytes())
            .map_err(io_error(Path::new("<stdout>"))),
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| SubmaxError::InvalidInstance(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| SubmaxError::InvalidInstance(e.to_string()))
}

fn emit_run(
    out: &mut dyn Write,
    report: &RunReport,
    format: Format,
    path: Option<&Path>,
) -> Result<()> {
    match path {
        Some(path) => {
            emit_report(report, format, path)?;
            writeln!(out, "{}", report.summary()).map_err(io_error(Path::new("<stdout>")))
        }
        None => write_out(out, &report.render(format)?, None),
    }
}

fn run_solve(cli: &Cli, args: &SolveArgs, out: &mut dyn Write) -> Result<bool> {
    let algorithm = match (args.algorithm, args.fast) {
        (OfflineAlgorithm::Card, false) => Algorithm::Card,
        (OfflineAlgorithm::Card, true) => {
            return Err(SubmaxError::InvalidConfig("`card` has no fast mode".into()));
        }
        (OfflineAlgorithm::Psys, false) => Algorithm::Psys,
        (OfflineAlgorithm::Psys, true) => Algorithm::PsysFast,
        (OfflineAlgorithm::Knapsack, false) => Algorithm::Knapsack,
        (OfflineAlgorithm::Knapsack, true) => Algorithm::KnapsackFast,
    };
    let config = ExperimentConfig {
        k: args.k,
        p: args.p,
        budget: args.budget,
        trials: args.trials,
        fmv: args.fmv.name().into(),
        stop_nonpositive: args.stop_nonpositive,
        seed: cli.seed,
        cap: cli.cap,
        ..ExperimentConfig::new(
            InstanceSource::File {
                path: args.instance.clone(),
            },
            algorithm.id(),
        )
    };
    let report = run_experiment(&config)?;
    emit_run(out, &report, cli.format, args.report.as_deref())?;
    Ok(report.pass != Some(false))
}

fn online_id(a: OnlineAlgorithm) -> Algorithm {
    match a {
        OnlineAlgorithm::CardSecretary => Algorithm::CardSecretary,
        OnlineAlgorithm::AdviceCard => Algorithm::AdviceCard,
        OnlineAlgorithm::Threshold => Algorithm::Threshold,
        OnlineAlgorithm::PartitionContig => Algorithm::PartitionContig,
        OnlineAlgorithm::PartitionGeneral => Algorithm::PartitionGeneral,
        OnlineAlgorithm::MatroidSecretary => Algorithm::MatroidSecretary,
        OnlineAlgorithm::MatroidAdvice => Algorithm::MatroidAdvice,
        OnlineAlgorithm::Dynkin => Algorithm::Dynkin,
    }
}

fn run_simulate(cli: &Cli, args: &SimulateArgs, out: &mut dyn Write) -> Result<bool> {
    let config = ExperimentConfig {
        k: args.k,
        z: args.z,
        tau: args.tau,
        trials: args.trials,
        fmv: args.fmv.name().into(),
        seed: cli.seed,
        cap: cli.cap,
        ..ExperimentConfig::new(
            InstanceSource::File {
                path: args.instance.clone(),
            },
            online_id(args.algorithm).id(),
        )
    };
    let report = run_experiment(&config)?;
    emit_run(out, &report, cli.format, args.report.as_deref())?;
    Ok(report.pass != Some(false))
}

fn run_verify(cli: &Cli, args: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    let mut suites = Vec::new();
    for path in &args.instance {
        suites.push(property_suite(
            &path.display().to_string(),
            &Instance::load(path)?,
            cap,
            cli.seed,
        )?);
    }
    if let Some(dir) = &args.corpus {
        for entry in Corpus::read(dir)?.entries {
            suites.push(property_suite(&entry.name, &entry.instance, cap, cli.seed)?);
        }
    }
    let uniformity: Vec<UniformityReport> = match args.uniformity {
        Some(max_n) => (2..=max_n)
            .map(|n| permutation_uniformity(n, args.samples, cli.seed.wrapping_add(n as u64)))
            .collect(),
        None => Vec::new(),
    };
    if suites.is_empty() && uniformity.is_empty() {
        return Err(SubmaxError::InvalidConfig(
            "nothing to verify: pass --instance, --corpus or --uniformity".into(),
        ));
    }
    let pass = suites.iter().all(|s| s.pass) && uniformity.iter().all(|u| u.pass);
    let output = VerifyOutput {
        suites,
        uniformity,
        pass,
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&output)? + "\n",
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                instance: &'a str,
                check: &'a str,
                holds: bool,
                asserted: bool,
                exhaustive: bool,
                checked: Option<u64>,
                witness: Option<&'a str>,
            }
            let mut rows = Vec::new();
            for s in &output.suites {
                for c in &s.checks {
                    rows.push(Row {
                        instance: &s.instance,
                        check: &c.name,
                        holds: c.holds,
                        asserted: c.asserted,
                        exhaustive: c.exhaustive,
                        checked: c.checked,
                        witness: c.witness.as_deref(),
                    });
                }
            }
            let names: Vec<String> = output
                .uniformity
                .iter()
                .map(|u| format!("stream n={}", u.n))
                .collect();
            for (u, name) in output.uniformity.iter().zip(&names) {
                rows.push(Row {
                    instance: name,
                    check: "permutation chi-square",
                    holds: u.pass,
                    asserted: true,
                    exhaustive: false,
                    checked: Some(u.samples as u64),
                    witness: None,
                });
            }
            to_csv(&rows)?
        }
    };
    write_out(out, &text, args.report.as_deref())?;
    Ok(pass)
}

/// The cover game and its gadgets for `k`.
pub fn lower_bound_game(k: usize) -> Result<(CoverGame, Vec<CoverGadget>)> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(SubmaxError::InvalidConfig(
            "gadget k must be even and positive".into(),
        ));
    }
    if k == 2 {
        let gadgets = vec![
            CoverGadget::new(&[1, 2], &[1])?,
            CoverGadget::new(&[1, 2], &[2])?,
        ];
        return Ok((CoverGame::cover_pair(), gadgets));
    }
    let r: Vec<u32> = (1..=k as u32).collect();
    let ground: Vec<usize> = (0..k).collect();
    let gadgets = subset::combinations(&ground, k / 2)
        .into_iter()
        .map(|s| CoverGadget::new(&r, &s.iter().map(|&i| r[i]).collect::<Vec<_>>()))
        .collect::<submax_core::Result<Vec<_>>>()?;
    Ok((CoverGame::from_gadgets(&gadgets, k)?, gadgets))
}

fn run_lowerbound(cli: &Cli, args: &LowerboundArgs, out: &mut dyn Write) -> Result<bool> {
    let k = args.k;
    let (game, gadgets) = lower_bound_game(k)?;
    let cap = cli.cap.unwrap_or(DEFAULT_WORLD_CAP);
    let (value, nodes) = if args.nodes {
        policy_game_nodes(&game, cap)?
    } else {
        (optimal_online_policy_value(&game, cap)?, Vec::new())
    };
    let opt = brute_force_opt(&gadgets[0], |s| s.len() <= k, DEFAULT_CAP)?.opt_value;
    let (instance, reference, revealed, pass) = if k == 2 {
        let revealed = optimal_online_policy_value(&CoverGame::cover_pair_revealed_first(), cap)?;
        let pass = (value - 8.0 / 3.0).abs() <= LOWER_BOUND_TOL;
        (
            "cover({1,2},{r})".to_string(),
            8.0 / 3.0,
            Some(revealed),
            pass,
        )
    } else {
        let reference = 17.0 * k as f64 / 12.0;
        (
            format!("cover({{1..{k}}},S), |S|={}", k / 2),
            reference,
            None,
            value <= reference + LOWER_BOUND_TOL,
        )
    };
    let report = LowerBoundReport {
        instance,
        k,
        worlds: game.worlds.len(),
        optimal_policy_value: value,
        opt,
        ratio: value / opt,
        reference,
        revealed_first_value: revealed,
        pass,
        nodes: nodes
            .into_iter()
            .map(|n| NodeRecord {
                position: n.position,
                observed: n.observed,
                accepted: n.accepted,
                probability: n.probability,
                value: n.value,
                accept_value: n.accept_value,
                reject_value: n.reject_value,
            })
            .collect(),
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                instance: &'a str,
                k: usize,
                worlds: usize,
                optimal_policy_value: f64,
                opt: f64,
                ratio: f64,
                reference: f64,
                pass: bool,
            }
            to_csv(&[Row {
                instance: &report.instance,
                k,
                worlds: report.worlds,
                optimal_policy_value: value,
                opt,
                ratio: report.ratio,
                reference,
                pass,
            }])?
        }
    };
    write_out(out, &text, args.report.as_deref())?;
    Ok(pass)
}

fn run_gen(cli: &Cli, args: &GenArgs, out: &mut dyn Write) -> Result<bool> {
    let spec = args.family.spec(args.n, ConstraintArg::None)?;
    let corpus = generate_corpus(&spec, args.count, cli.seed)?;
    corpus.write(&args.out)?;
    let manifest = corpus.manifest();
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&manifest)? + "\n",
        Format::Csv => to_csv(&manifest.entries)?,
    };
    write_out(out, &text, None)?;
    Ok(true)
}

fn auto_constraint(algorithm: Algorithm) -> ConstraintArg {
    match algorithm {
        Algorithm::Card
        | Algorithm::CardSecretary
        | Algorithm::AdviceCard
        | Algorithm::Threshold => ConstraintArg::Uniform,
        Algorithm::Psys | Algorithm::PsysFast => ConstraintArg::Intersection,
        Algorithm::Knapsack | Algorithm::KnapsackFast => ConstraintArg::Knapsack,
        Algorithm::PartitionContig => ConstraintArg::ContiguousPartition,
        Algorithm::PartitionGeneral | Algorithm::MatroidSecretary | Algorithm::MatroidAdvice => {
            ConstraintArg::Partition
        }
        Algorithm::Dynkin => ConstraintArg::None,
    }
}

fn run_bench(cli: &Cli, args: &BenchArgs, out: &mut dyn Write) -> Result<bool> {
    let algorithm: Algorithm = args.algorithm.parse()?;
    let mut rows = Vec::new();
    for &n in &args.sizes {
        let spec = args.family.spec(n, auto_constraint(algorithm))?;
        let config = ExperimentConfig {
            k: args.k,
            trials: args.trials,
            fmv: args.fmv.name().into(),
            seed: cli.seed,
            cap: cli.cap,
            ..ExperimentConfig::new(
                InstanceSource::Generated {
                    spec,
                    seed: cli.seed,
                    index: 0,
                },
                algorithm.id(),
            )
        };
        let start = Instant::now();
        let report = run_experiment(&config)?;
        rows.push(BenchRow {
            n,
            millis: start.elapsed().as_secs_f64() * 1e3,
            query_count: report.query_count,
            mean: report.mean,
            opt: report.opt,
            ratio: report.ratio,
            pass: report.pass,
        });
    }
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => to_csv(&rows)?,
    };
    write_out(out, &text, args.report.as_deref())?;
    Ok(rows.iter().all(|r| r.pass != Some(false)))
}

/// Runs a parsed command, writing output to `out`. Returns whether every
/// asserted bound held.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Solve(args) => run_solve(cli, args, out),
        Command::Simulate(args) => run_simulate(cli, args, out),
        Command::Verify(args) => run_verify(cli, args, out),
        Command::Lowerbound(args) => run_lowerbound(cli, args, out),
        Command::Gen(args) => run_gen(cli, args, out),
        Command::Bench(args) => run_bench(cli, args, out),
    }
}
