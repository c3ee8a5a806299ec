//! Reproducible instance corpora with a seed manifest.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use submax_core::constraint::generate::{
    contiguous_partition, random_graphic, random_knapsack, random_partition,
    random_partition_intersection,
};
use submax_core::constraint::Constraint;
use submax_core::function::generate::{
    random_cover_gadget, random_coverage, random_coverage_minus_cost, random_cut,
    CoverageCostParams,
};
use submax_core::function::properties::{check_nonneg_and_zero, check_submodular, CheckMode};
use submax_core::{SimRng, DEFAULT_CAP};

use crate::error::{io_error, Result, SubmaxError};
use crate::instance::{Function, Instance};

/// Attempts per instance before generation gives up.
pub const REJECTION_BUDGET: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionFamily {
    Coverage {
        universe: usize,
        max_cover: usize,
    },
    CoverageMinusCost,
    Cut {
        edge_prob: f64,
        max_weight: usize,
    },
    /// `cover({1..k}, S)` with `|S| = k/2`; `n` must be `3k/2`.
    CoverGadget {
        k: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintFamily {
    None,
    Uniform { k: usize },
    Partition { groups: usize },
    ContiguousPartition { groups: usize },
    Graphic { vertices: usize },
    Intersection { p: usize, groups: usize },
    Knapsack { max_size: u64, fraction: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub n: usize,
    pub function: FunctionFamily,
    pub constraint: ConstraintFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    /// RNG stream index under the corpus seed.
    pub stream: u64,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub spec: FamilySpec,
    pub seed: u64,
    pub entries: Vec<CorpusEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: FamilySpec,
    pub seed: u64,
    pub count: usize,
    pub entries: Vec<ManifestEntry>,
}

impl FamilySpec {
    fn function(&self, rng: &mut SimRng) -> Result<Function> {
        let n = self.n;
        Ok(match self.function {
            FunctionFamily::Coverage {
                universe,
                max_cover,
            } => Function::Coverage(random_coverage(rng, n, universe, max_cover)),
            FunctionFamily::CoverageMinusCost => {
                let params = CoverageCostParams {
                    require_non_monotone: n >= 4,
                    ..CoverageCostParams::new(n)
                };
                Function::CoverageMinusCost(random_coverage_minus_cost(rng, &params)?)
            }
            FunctionFamily::Cut {
                edge_prob,
                max_weight,
            } => Function::Cut(random_cut(rng, n, edge_prob, max_weight)),
            FunctionFamily::CoverGadget { k } => {
                if 3 * k != 2 * n {
                    return Err(SubmaxError::InvalidConfig(format!(
                        "a k = {k} gadget has {} elements, not {n}",
                        3 * k / 2
                    )));
                }
                Function::CoverGadget(random_cover_gadget(rng, k)?)
            }
        })
    }

    fn constraint(&self, rng: &mut SimRng) -> Result<Option<Constraint>> {
        let n = self.n;
        Ok(match self.constraint {
            ConstraintFamily::None => None,
            ConstraintFamily::Uniform { k } => Some(Constraint::Uniform(
                submax_core::constraint::Uniform::new(n, k),
            )),
            ConstraintFamily::Partition { groups } => {
                Some(Constraint::Partition(random_partition(rng, n, groups)?))
            }
            ConstraintFamily::ContiguousPartition { groups } => {
                Some(Constraint::Partition(contiguous_partition(n, groups)?))
            }
            ConstraintFamily::Graphic { vertices } => {
                Some(Constraint::Graphic(random_graphic(rng, vertices, n)?))
            }
            ConstraintFamily::Intersection { p, groups } => Some(Constraint::Intersection(
                random_partition_intersection(rng, n, p, groups)?,
            )),
            ConstraintFamily::Knapsack { max_size, fraction } => Some(Constraint::Knapsack(
                random_knapsack(rng, n, max_size, fraction)?,
            )),
        })
    }

    /// One instance from `rng`, resampled until the function passes the
    /// exhaustive non-negativity and submodularity checks (when `n` fits the cap).
    pub fn sample(&self, rng: &mut SimRng) -> Result<Instance> {
        for _ in 0..REJECTION_BUDGET {
            let f = self.function(rng)?;
            if self.n <= DEFAULT_CAP {
                let mode = CheckMode::exhaustive();
                if !check_nonneg_and_zero(&f, mode)?.holds || !check_submodular(&f, mode)?.holds {
                    continue;
                }
            }
            let c = self.constraint(rng)?;
            return Ok(Instance::new(&f, c.as_ref()));
        }
        Err(submax_core::Error::GenerationFailed(format!(
            "no valid instance in {REJECTION_BUDGET} attempts"
        ))
        .into())
    }
}

/// `count` instances; instance `i` is drawn from `SimRng::derive(seed, i)`.
pub fn generate_corpus(spec: &FamilySpec, count: usize, seed: u64) -> Result<Corpus> {
    let entries = (0..count as u64)
        .map(|i| {
            Ok(CorpusEntry {
                name: format!("inst{i:04}"),
                stream: i,
                instance: spec.sample(&mut SimRng::derive(seed, i))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus {
        spec: spec.clone(),
        seed,
        entries,
    })
}

impl Corpus {
    pub fn manifest(&self) -> Manifest {
        Manifest {
            spec: self.spec.clone(),
            seed: self.seed,
            count: self.entries.len(),
            entries: self
                .entries
                .iter()
                .map(|e| ManifestEntry {
                    name: e.name.clone(),
                    file: format!("{}.json", e.name),
                    stream: e.stream,
                })
                .collect(),
        }
    }

    /// Writes one JSON file per instance plus `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(io_error(dir))?;
        let manifest = self.manifest();
        for (entry, meta) in self.entries.iter().zip(&manifest.entries) {
            entry.instance.save(&dir.join(&meta.file))?;
        }
        let path = dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n").map_err(io_error(&path))
    }

    /// Reads a corpus written by [`Corpus::write`].
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join("manifest.json");
        let manifest: Manifest =
            serde_json::from_str(&fs::read_to_string(&path).map_err(io_error(&path))?)?;
        let entries = manifest
            .entries
            .iter()
            .map(|m| {
                Ok(CorpusEntry {
                    name: m.name.clone(),
                    stream: m.stream,
                    instance: Instance::load(&dir.join(&m.file))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Corpus {
            spec: manifest.spec,
            seed: manifest.seed,
            entries,
        })
    }
}
