//! JSON instance files.
//!
//! ```json
//! {
//!   "n": 3,
//!   "function": { "kind": "cover_gadget", "r": [1, 2], "s": [2] },
//!   "constraint": { "kind": "uniform", "k": 2 }
//! }
//! ```
//!
//! Function kinds and their fields:
//! - `coverage`: `universe`, `covers` (points per element), optional `weights` (per point)
//! - `coverage_minus_cost`: the `coverage` fields plus `costs` (per element)
//! - `cut`: `edges` as `[u, v, weight]` triples
//! - `cover_gadget`: `r`, `s` (`s ⊆ r`)
//! - `modular`: `weights` (per element)
//!
//! Constraint kinds (the `constraint` key is optional):
//! - `uniform`: `k`
//! - `partition`: `groups`
//! - `graphic`: `vertices`, `edges` as `[u, v]` pairs
//! - `intersection`: `members`, a list of constraints
//! - `knapsack`: integer `sizes`, integer `budget`

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use submax_core::constraint::{
    Constraint, Graphic, IndependenceSystem, Intersection, Knapsack, Partition, Uniform,
};
use submax_core::function::{CoverGadget, Coverage, CoverageMinusCost, Cut, Modular, SetFunction};

use crate::error::{io_error, Result, SubmaxError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub n: usize,
    pub function: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Coverage {
        universe: usize,
        covers: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
    CoverageMinusCost {
        universe: usize,
        covers: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        costs: Vec<f64>,
    },
    Cut {
        edges: Vec<(usize, usize, f64)>,
    },
    CoverGadget {
        r: Vec<u32>,
        s: Vec<u32>,
    },
    Modular {
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    Uniform {
        k: usize,
    },
    Partition {
        groups: Vec<Vec<usize>>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Intersection {
        members: Vec<ConstraintSpec>,
    },
    Knapsack {
        sizes: Vec<u64>,
        budget: u64,
    },
}

/// Any shipped function family.
#[derive(Debug, Clone, PartialEq)]
pub enum Function {
    Coverage(Coverage),
    CoverageMinusCost(CoverageMinusCost),
    Cut(Cut),
    CoverGadget(CoverGadget),
    Modular(Modular),
}

impl Function {
    fn inner(&self) -> &dyn SetFunction {
        match self {
            Function::Coverage(f) => f,
            Function::CoverageMinusCost(f) => f,
            Function::Cut(f) => f,
            Function::CoverGadget(f) => f,
            Function::Modular(f) => f,
        }
    }

    /// Display label of element `e` (gadget labels such as `2_TB`, else the index).
    pub fn label(&self, e: usize) -> String {
        match self {
            Function::CoverGadget(g) => g.label(e),
            _ => e.to_string(),
        }
    }
}

impl SetFunction for Function {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        self.inner().value(set)
    }
}

impl FunctionSpec {
    pub fn build(&self, n: usize) -> Result<Function> {
        let f = match self {
            FunctionSpec::Coverage {
                universe,
                covers,
                weights,
            } => Function::Coverage(Coverage::new(*universe, covers.clone(), weights.clone())?),
            FunctionSpec::CoverageMinusCost {
                universe,
                covers,
                weights,
                costs,
            } => {
                let coverage = Coverage::new(*universe, covers.clone(), weights.clone())?;
                Function::CoverageMinusCost(CoverageMinusCost::new(coverage, costs.clone())?)
            }
            FunctionSpec::Cut { edges } => Function::Cut(Cut::new(n, edges.clone())?),
            FunctionSpec::CoverGadget { r, s } => Function::CoverGadget(CoverGadget::new(r, s)?),
            FunctionSpec::Modular { weights } => Function::Modular(Modular::new(weights.clone())),
        };
        if f.ground_size() != n {
            return Err(SubmaxError::InvalidInstance(format!(
                "function has {} elements but n = {n}",
                f.ground_size()
            )));
        }
        Ok(f)
    }

    pub fn from_function(f: &Function) -> Self {
        let coverage_fields = |c: &Coverage| {
            (
                c.universe(),
                c.covers().to_vec(),
                c.weights().map(<[f64]>::to_vec),
            )
        };
        match f {
            Function::Coverage(c) => {
                let (universe, covers, weights) = coverage_fields(c);
                FunctionSpec::Coverage {
                    universe,
                    covers,
                    weights,
                }
            }
            Function::CoverageMinusCost(c) => {
                let (universe, covers, weights) = coverage_fields(c.coverage());
                FunctionSpec::CoverageMinusCost {
                    universe,
                    covers,
                    weights,
                    costs: c.costs().to_vec(),
                }
            }
            Function::Cut(c) => FunctionSpec::Cut {
                edges: c.edges().to_vec(),
            },
            Function::CoverGadget(g) => FunctionSpec::CoverGadget {
                r: g.r().to_vec(),
                s: g.s().to_vec(),
            },
            Function::Modular(m) => FunctionSpec::Modular {
                weights: m.weights().to_vec(),
            },
        }
    }
}

impl ConstraintSpec {
    pub fn build(&self, n: usize) -> Result<Constraint> {
        let c = match self {
            ConstraintSpec::Uniform { k } => Constraint::Uniform(Uniform::new(n, *k)),
            ConstraintSpec::Partition { groups } => {
                Constraint::Partition(Partition::new(n, groups.clone())?)
            }
            ConstraintSpec::Graphic { vertices, edges } => {
                Constraint::Graphic(Graphic::new(*vertices, edges.clone())?)
            }
            ConstraintSpec::Intersection { members } => {
                Constraint::Intersection(Intersection::new(
                    members
                        .iter()
                        .map(|m| m.build(n))
                        .collect::<Result<Vec<_>>>()?,
                )?)
            }
            ConstraintSpec::Knapsack { sizes, budget } => {
                Constraint::Knapsack(Knapsack::new(sizes.clone(), *budget)?)
            }
        };
        if c.ground_size() != n {
            return Err(SubmaxError::InvalidInstance(format!(
                "constraint has {} elements but n = {n}",
                c.ground_size()
            )));
        }
        Ok(c)
    }

    pub fn from_constraint(c: &Constraint) -> Self {
        match c {
            Constraint::Uniform(u) => ConstraintSpec::Uniform { k: u.k },
            Constraint::Partition(p) => ConstraintSpec::Partition {
                groups: p.groups().to_vec(),
            },
            Constraint::Graphic(g) => ConstraintSpec::Graphic {
                vertices: g.vertices(),
                edges: g.edges().to_vec(),
            },
            Constraint::Intersection(i) => ConstraintSpec::Intersection {
                members: i.members().iter().map(Self::from_constraint).collect(),
            },
            Constraint::Knapsack(k) => ConstraintSpec::Knapsack {
                sizes: k.sizes().to_vec(),
                budget: k.budget(),
            },
        }
    }
}

impl Instance {
    pub fn new(function: &Function, constraint: Option<&Constraint>) -> Self {
        Self {
            n: function.ground_size(),
            function: FunctionSpec::from_function(function),
            constraint: constraint.map(ConstraintSpec::from_constraint),
        }
    }

    pub fn function(&self) -> Result<Function> {
        self.function.build(self.n)
    }

    pub fn constraint(&self) -> Result<Option<Constraint>> {
        self.constraint
            .as_ref()
            .map(|c| c.build(self.n))
            .transpose()
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let instance: Instance = serde_json::from_str(text)?;
        instance.function()?;
        instance.constraint()?;
        Ok(instance)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path).map_err(io_error(path))?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n").map_err(io_error(path))
    }
}
