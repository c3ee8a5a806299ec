//! Experiment configuration and execution.
//!
//! A run is a pure function of its [`ExperimentConfig`]: trial `t` draws its
//! stream and coins from `SimRng::derive(seed, t)`, trials may run on any
//! number of threads, and results are folded in trial order.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use submax_core::constraint::{
    rank_and_lower_rank, Constraint, IndependenceSystem, Knapsack, Partition,
};
use submax_core::function::{SetFunction, ValueOracle};
use submax_core::offline::{
    cardinality_bound, knapsack_bound, psystem_bound, psystem_two_pass_bound,
    submod_max_cardinality_with_rule, submod_max_knapsack, submod_max_psystem_with_rule,
    GreedyRule, KnapsackMode, MultiPassResult,
};
use submax_core::secretary::{
    advice_cardinality_bound, advice_online_cardinality, dynkin, matroid_advice,
    matroid_advice_bound, matroid_secretary, partition_contiguous_bound,
    partition_contiguous_secretary, partition_general_secretary, submodular_secretaries,
    submodular_secretaries_bound, threshold_online, MonteCarlo, Stream,
};
use submax_core::unconstrained::FmvBackend;
use submax_core::verify::{brute_force_opt, BruteForceResult, CARDINALITY_CAP, ORACLE_CAP};
use submax_core::{SimRng, TOL};

use crate::corpus::FamilySpec;
use crate::error::{Result, SubmaxError};
use crate::instance::{Function, Instance};
use crate::report::{BoundReport, CandidateReport, RunReport, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Card,
    Psys,
    PsysFast,
    Knapsack,
    KnapsackFast,
    CardSecretary,
    AdviceCard,
    Threshold,
    PartitionContig,
    PartitionGeneral,
    MatroidSecretary,
    MatroidAdvice,
    Dynkin,
}

impl Algorithm {
    pub const ALL: [Algorithm; 13] = [
        Algorithm::Card,
        Algorithm::Psys,
        Algorithm::PsysFast,
        Algorithm::Knapsack,
        Algorithm::KnapsackFast,
        Algorithm::CardSecretary,
        Algorithm::AdviceCard,
        Algorithm::Threshold,
        Algorithm::PartitionContig,
        Algorithm::PartitionGeneral,
        Algorithm::MatroidSecretary,
        Algorithm::MatroidAdvice,
        Algorithm::Dynkin,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Card => "card",
            Algorithm::Psys => "psys",
            Algorithm::PsysFast => "psys-fast",
            Algorithm::Knapsack => "knapsack",
            Algorithm::KnapsackFast => "knapsack-fast",
            Algorithm::CardSecretary => "card-secretary",
            Algorithm::AdviceCard => "advice-card",
            Algorithm::Threshold => "threshold",
            Algorithm::PartitionContig => "partition-contig",
            Algorithm::PartitionGeneral => "partition-general",
            Algorithm::MatroidSecretary => "matroid-secretary",
            Algorithm::MatroidAdvice => "matroid-advice",
            Algorithm::Dynkin => "dynkin",
        }
    }

    pub fn is_offline(self) -> bool {
        matches!(
            self,
            Algorithm::Card
                | Algorithm::Psys
                | Algorithm::PsysFast
                | Algorithm::Knapsack
                | Algorithm::KnapsackFast
        )
    }
}

impl FromStr for Algorithm {
    type Err = SubmaxError;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| SubmaxError::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Backend by CLI name: `random`, `local` or `exact`.
pub fn parse_fmv(name: &str) -> Result<FmvBackend> {
    match name {
        "random" => Ok(FmvBackend::RandomSubset),
        "local" => Ok(FmvBackend::local_search()),
        "exact" => Ok(FmvBackend::exact()),
        other => Err(SubmaxError::InvalidConfig(format!(
            "unknown fmv backend `{other}`"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum InstanceSource {
    File {
        path: PathBuf,
    },
    Inline {
        instance: Instance,
    },
    /// Instance `index` of the corpus `(spec, seed)`.
    Generated {
        spec: FamilySpec,
        seed: u64,
        index: u64,
    },
}

impl InstanceSource {
    pub fn load(&self) -> Result<(String, Instance)> {
        match self {
            InstanceSource::File { path } => {
                Ok((path.display().to_string(), Instance::load(path)?))
            }
            InstanceSource::Inline { instance } => Ok(("inline".into(), instance.clone())),
            InstanceSource::Generated { spec, seed, index } => Ok((
                format!("generated(seed={seed}, index={index})"),
                spec.sample(&mut SimRng::derive(*seed, *index))?,
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceSource,
    pub algorithm: String,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub p: Option<usize>,
    /// Knapsack budget `B`, overriding the instance's.
    #[serde(default)]
    pub budget: Option<u64>,
    /// Advice value `Z` (default: the brute-force optimum).
    #[serde(default)]
    pub z: Option<f64>,
    /// Threshold `τ` for `threshold` (default `Z/(7k)`).
    #[serde(default)]
    pub tau: Option<f64>,
    pub trials: usize,
    pub fmv: String,
    /// Greedy passes stop at the first non-positive marginal (uncertified).
    #[serde(default)]
    pub stop_nonpositive: bool,
    pub seed: u64,
    /// Largest `n` for brute force (default 16 for cardinality and knapsack, 14 otherwise).
    #[serde(default)]
    pub cap: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSource, algorithm: &str) -> Self {
        Self {
            instance,
            algorithm: algorithm.into(),
            k: None,
            p: None,
            budget: None,
            z: None,
            tau: None,
            trials: 1,
            fmv: "exact".into(),
            stop_nonpositive: false,
            seed: 0,
            cap: None,
            output: None,
        }
    }
}

/// The feasible family an algorithm is measured against.
enum Feasibility {
    Cardinality(usize),
    System(Constraint),
}

impl Feasibility {
    fn allows(&self, set: &[usize]) -> bool {
        match self {
            Feasibility::Cardinality(k) => set.len() <= *k,
            Feasibility::System(c) => c.is_independent(set),
        }
    }
}

struct Prepared {
    algorithm: Algorithm,
    f: Function,
    constraint: Option<Constraint>,
    feasibility: Feasibility,
    backend: FmvBackend,
    rule: GreedyRule,
    k: Option<usize>,
    p: Option<usize>,
}

fn require<T>(value: Option<T>, what: &str, algorithm: Algorithm) -> Result<T> {
    value.ok_or_else(|| SubmaxError::InvalidConfig(format!("`{algorithm}` needs {what}")))
}

fn partition_of(c: &Option<Constraint>, algorithm: Algorithm) -> Result<&Partition> {
    match c {
        Some(Constraint::Partition(p)) => Ok(p),
        _ => Err(SubmaxError::InvalidConfig(format!(
            "`{algorithm}` needs a partition constraint"
        ))),
    }
}

fn knapsack_of(c: &Option<Constraint>, algorithm: Algorithm) -> Result<&Knapsack> {
    match c {
        Some(Constraint::Knapsack(k)) => Ok(k),
        _ => Err(SubmaxError::InvalidConfig(format!(
            "`{algorithm}` needs a knapsack constraint"
        ))),
    }
}

fn prepare(config: &ExperimentConfig, instance: &Instance) -> Result<Prepared> {
    let algorithm: Algorithm = config.algorithm.parse()?;
    if config.trials == 0 {
        return Err(SubmaxError::InvalidConfig(
            "trials must be at least 1".into(),
        ));
    }
    if config.p == Some(0) || config.k == Some(0) {
        return Err(SubmaxError::InvalidConfig(
            "k and p must be at least 1".into(),
        ));
    }
    let backend = parse_fmv(&config.fmv)?;
    let f = instance.function()?;
    let n = f.ground_size();
    let mut constraint = instance.constraint()?;
    if let Some(budget) = config.budget {
        let sizes = knapsack_of(&constraint, algorithm)?.sizes().to_vec();
        constraint = Some(Constraint::Knapsack(Knapsack::new(sizes, budget)?));
    }
    let uniform_k = match &constraint {
        Some(Constraint::Uniform(u)) => Some(u.k),
        _ => None,
    };
    let mut k = config.k;
    let mut p = config.p;
    let feasibility = match algorithm {
        Algorithm::Card
        | Algorithm::CardSecretary
        | Algorithm::AdviceCard
        | Algorithm::Threshold => {
            k = Some(require(
                k.or(uniform_k),
                "--k or a uniform constraint",
                algorithm,
            )?);
            Feasibility::Cardinality(k.unwrap_or_default())
        }
        Algorithm::Dynkin => Feasibility::Cardinality(1),
        Algorithm::Psys | Algorithm::PsysFast => {
            let c = require(constraint.clone(), "a constraint", algorithm)?;
            if p.is_none() {
                p = Some(match &c {
                    Constraint::Intersection(i)
                        if i.members().iter().all(Constraint::is_matroid_family) =>
                    {
                        i.members().len()
                    }
                    c if c.is_matroid_family() => 1,
                    c => submax_core::constraint::p_parameter(c, ORACLE_CAP)?.ceil(),
                });
            }
            Feasibility::System(c)
        }
        Algorithm::Knapsack | Algorithm::KnapsackFast => Feasibility::System(Constraint::Knapsack(
            knapsack_of(&constraint, algorithm)?.clone(),
        )),
        Algorithm::PartitionContig | Algorithm::PartitionGeneral => Feasibility::System(
            Constraint::Partition(partition_of(&constraint, algorithm)?.clone()),
        ),
        Algorithm::MatroidSecretary | Algorithm::MatroidAdvice => {
            let c = require(constraint.clone(), "a matroid constraint", algorithm)?;
            if !c.is_matroid_family() {
                return Err(SubmaxError::InvalidConfig(format!(
                    "`{algorithm}` needs a matroid constraint"
                )));
            }
            if k.is_none() {
                let ground: Vec<usize> = (0..n).collect();
                k = Some(rank_and_lower_rank(&c, &ground, ORACLE_CAP)?.0.max(1));
            }
            Feasibility::System(c)
        }
    };
    Ok(Prepared {
        algorithm,
        f,
        constraint,
        feasibility,
        backend,
        rule: if config.stop_nonpositive {
            GreedyRule::StopNonpositive
        } else {
            GreedyRule::Literal
        },
        k,
        p,
    })
}

fn brute_force(prep: &Prepared, cap: Option<usize>) -> Result<Option<BruteForceResult>> {
    let default_cap = match prep.feasibility {
        Feasibility::Cardinality(_) => CARDINALITY_CAP,
        Feasibility::System(Constraint::Knapsack(_)) => CARDINALITY_CAP,
        Feasibility::System(_) => ORACLE_CAP,
    };
    let cap = cap.unwrap_or(default_cap);
    if prep.f.ground_size() > cap {
        return Ok(None);
    }
    Ok(Some(brute_force_opt(
        &prep.f,
        |s| prep.feasibility.allows(s),
        cap,
    )?))
}

struct TrialOutcome {
    selected: Vec<usize>,
    value: f64,
    candidates: Option<MultiPassResult>,
}

struct Params {
    z: Option<f64>,
    tau: Option<f64>,
    w1: f64,
}

fn run_trial<F: SetFunction + Sync>(
    prep: &Prepared,
    f: &F,
    params: &Params,
    rng: &mut SimRng,
) -> Result<TrialOutcome> {
    let n = f.ground_size();
    let ground: Vec<usize> = (0..n).collect();
    let k = prep.k.unwrap_or(1);
    let offline = |r: MultiPassResult| TrialOutcome {
        selected: r.chosen.clone(),
        value: r.value,
        candidates: Some(r),
    };
    let alg = prep.algorithm;
    let selected = match alg {
        Algorithm::Card => {
            return Ok(offline(submod_max_cardinality_with_rule(
                f,
                &ground,
                k,
                prep.backend,
                prep.rule,
                rng,
            )?))
        }
        Algorithm::Psys | Algorithm::PsysFast => {
            let sys = require(prep.constraint.as_ref(), "a constraint", alg)?;
            let p = prep.p.unwrap_or(1);
            let passes = if alg == Algorithm::Psys { p + 1 } else { 2 };
            return Ok(offline(submod_max_psystem_with_rule(
                f,
                &ground,
                sys,
                passes,
                prep.backend,
                prep.rule,
                rng,
            )?));
        }
        Algorithm::Knapsack | Algorithm::KnapsackFast => {
            let ks = match &prep.feasibility {
                Feasibility::System(Constraint::Knapsack(ks)) => ks,
                _ => unreachable!("prepared with a knapsack"),
            };
            let mode = if alg == Algorithm::Knapsack {
                KnapsackMode::Certified
            } else {
                KnapsackMode::Fast {
                    top: KnapsackMode::DEFAULT_TOP,
                }
            };
            return Ok(offline(submod_max_knapsack(
                f,
                &ground,
                ks,
                prep.backend,
                mode,
                rng,
            )?));
        }
        Algorithm::CardSecretary => {
            let stream = Stream::uniform(n, rng);
            submodular_secretaries(f, &stream, k, prep.backend, rng)?
        }
        Algorithm::AdviceCard => {
            let stream = Stream::uniform(n, rng);
            advice_online_cardinality(
                f,
                &stream,
                k,
                require(params.z, "--z or a computable OPT", alg)?,
                rng,
            )?
        }
        Algorithm::Threshold => {
            let stream = Stream::uniform(n, rng);
            threshold_online(
                f,
                &stream,
                require(params.tau, "--tau or a computable OPT", alg)?,
                k,
            )?
        }
        Algorithm::PartitionContig => {
            let partition = partition_of(&prep.constraint, alg)?;
            let stream = Stream::group_contiguous(partition, rng);
            partition_contiguous_secretary(f, partition, &stream, None, rng)?
        }
        Algorithm::PartitionGeneral => {
            let partition = partition_of(&prep.constraint, alg)?;
            let stream = Stream::uniform(n, rng);
            partition_general_secretary(f, partition, &stream, None, rng)?
        }
        Algorithm::MatroidSecretary | Algorithm::MatroidAdvice => {
            let sys = require(prep.constraint.as_ref(), "a constraint", alg)?;
            let stream = Stream::uniform(n, rng);
            if alg == Algorithm::MatroidSecretary {
                matroid_secretary(f, &stream, sys, k, rng)?
            } else {
                matroid_advice(f, &stream, sys, k, params.w1, rng)?
            }
        }
        Algorithm::Dynkin => {
            let stream = Stream::uniform(n, rng);
            dynkin(&stream, |e| f.value(&[e]))?.into_iter().collect()
        }
    };
    Ok(TrialOutcome {
        value: f.value(&selected),
        selected,
        candidates: None,
    })
}

fn bound_for(prep: &Prepared, opt: Option<f64>, params: &Params) -> Option<BoundReport> {
    if prep.rule == GreedyRule::StopNonpositive {
        return None;
    }
    let alpha = prep.backend.alpha();
    let of_opt = |factor: f64, formula: String| {
        opt.map(|o| BoundReport {
            formula,
            value: o / factor,
        })
    };
    let p = prep.p.unwrap_or(1);
    let k = prep.k.unwrap_or(1);
    match prep.algorithm {
        Algorithm::Card => of_opt(cardinality_bound(alpha), format!("OPT/(4+α), α={alpha}")),
        Algorithm::Psys => of_opt(
            psystem_bound(p, alpha),
            format!("OPT/((1+α)(p+2+1/p)), α={alpha}, p={p}"),
        ),
        Algorithm::PsysFast => of_opt(
            psystem_two_pass_bound(p, alpha),
            format!("OPT/(2(p+1)+α), α={alpha}, p={p}"),
        ),
        Algorithm::Knapsack => of_opt(knapsack_bound(alpha), format!("OPT/(4+α), α={alpha}")),
        Algorithm::AdviceCard => params.z.map(|z| BoundReport {
            formula: format!("Z/21, Z={z}"),
            value: advice_cardinality_bound(z),
        }),
        Algorithm::CardSecretary => opt.map(|o| BoundReport {
            formula: "OPT/1417".into(),
            value: submodular_secretaries_bound(o),
        }),
        Algorithm::PartitionContig => opt.map(|o| BoundReport {
            formula: "OPT/(3+6e)".into(),
            value: partition_contiguous_bound(o),
        }),
        Algorithm::MatroidAdvice => opt.map(|o| BoundReport {
            formula: format!("OPT/(40(1+⌈log₂ 2k⌉)), k={k}"),
            value: matroid_advice_bound(o, k),
        }),
        Algorithm::Dynkin => Some(BoundReport {
            formula: format!("w1/e, w1={}", params.w1),
            value: params.w1 / std::f64::consts::E,
        }),
        Algorithm::KnapsackFast
        | Algorithm::Threshold
        | Algorithm::PartitionGeneral
        | Algorithm::MatroidSecretary => None,
    }
}

/// Runs `config` and returns its report. The report is also written to
/// `config.output` (JSON) when set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    let (name, instance) = config.instance.load()?;
    let prep = prepare(config, &instance)?;
    let brute = brute_force(&prep, config.cap)?;
    let opt = brute.as_ref().map(|b| b.opt_value);
    let w1 = (0..prep.f.ground_size())
        .map(|e| prep.f.value(&[e]))
        .fold(0.0, f64::max);
    let z = config.z.or(opt);
    let params = Params {
        z,
        tau: config
            .tau
            .or_else(|| z.map(|z| z / (7.0 * prep.k.unwrap_or(1) as f64))),
        w1,
    };

    let oracle = ValueOracle::new(&prep.f);
    let outcomes = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(&prep, &oracle, &params, &mut SimRng::derive(config.seed, t)))
        .collect::<Result<Vec<_>>>()?;

    let values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let mc = MonteCarlo::from_values(values);
    let bound = bound_for(&prep, opt, &params);
    let pass = bound
        .as_ref()
        .map(|b| mc.mean >= b.value - 3.0 * mc.stderr - TOL);
    let candidates = outcomes[0]
        .candidates
        .as_ref()
        .map(|r| {
            r.candidates
                .iter()
                .map(|c| CandidateReport {
                    label: c.label.clone(),
                    set: c.set.clone(),
                    value: c.value,
                })
                .collect()
        })
        .unwrap_or_default();
    let report = RunReport {
        algorithm: prep.algorithm.id().into(),
        instance: name,
        n: prep.f.ground_size(),
        seed: config.seed,
        trials: config.trials,
        k: prep.k,
        p: prep.p,
        fmv: prep.backend.name().into(),
        alpha: prep.backend.alpha(),
        mean: mc.mean,
        stderr: mc.stderr,
        min: mc.values.iter().copied().fold(f64::INFINITY, f64::min),
        max: mc.values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        opt,
        opt_set: brute.map(|b| b.opt_set),
        ratio: opt.filter(|&o| o > 0.0).map(|o| mc.mean / o),
        bound,
        pass,
        query_count: oracle.query_count(),
        candidates,
        trial_values: outcomes
            .into_iter()
            .zip(0..)
            .map(|(o, trial)| TrialRecord {
                trial,
                value: o.value,
                selected: o.selected,
            })
            .collect(),
    };
    if let Some(path) = &config.output {
        crate::report::emit_report(&report, crate::report::Format::Json, path)?;
    }
    Ok(report)
}
