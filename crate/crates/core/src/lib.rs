//! Offline and random-order (secretary) algorithms for maximizing non-negative,
//! possibly non-monotone submodular set functions under cardinality, matroid,
//! p-independence-system and knapsack constraints.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs and an explicit [`SimRng`] seed; file formats, the
//! experiment runner and the CLI live in the `submax` crate.
//!
//! Subsets of the ground set `0..n` are passed around as strictly ascending
//! index slices (see [`subset`]).
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constraint;
mod error;
pub mod function;
pub mod offline;
pub mod rng;
pub mod secretary;
pub mod subset;
pub mod unconstrained;
pub mod verify;

pub use error::{Error, Result};
pub use rng::SimRng;

/// Absolute tolerance used by every inequality check in the crate.
pub const TOL: f64 = 1e-9;

/// Default cap on the ground-set size for exhaustive checks over oracle constraints.
pub const DEFAULT_CAP: usize = 14;

pub mod prelude {
    pub use crate::constraint::{
        Constraint, Graphic, IndependenceSystem, Intersection, Knapsack, Partition, Uniform,
    };
    pub use crate::function::{
        evaluate, marginal, restrict, CoverGadget, Coverage, CoverageMinusCost, Cut, Modular,
        SetFunction, ValueOracle,
    };
    pub use crate::unconstrained::FmvBackend;
    pub use crate::{Error, Result, SimRng, TOL};
}
