//! Exact oracles: brute-force optima, exhaustive checks of the structural
//! inequalities the algorithms rely on, and the backward-induction engine for
//! the online lower-bound game.

use alloc::vec::Vec;

use crate::constraint::IndependenceSystem;
use crate::function::SetFunction;
use crate::subset::{self, from_mask};
use crate::unconstrained::improves;
use crate::Result;

mod lemmas;
mod lower_bound;

pub use lemmas::{
    check_cross_sums, check_greedy_half_bound, check_knapsack_collection,
    check_psystem_greedy_bound, check_psystem_greedy_bound_stop_nonpositive, check_tau_grid_sum,
    check_threshold_lemma, for_each_permutation, LemmaReport,
};
pub use lower_bound::{
    optimal_online_policy_value, policy_game_nodes, CoverGame, PolicyGameNode, World,
    DEFAULT_WORLD_CAP,
};

/// Ground-set cap for brute force over cardinality and knapsack feasibility.
pub const CARDINALITY_CAP: usize = 16;
/// Ground-set cap for brute force over oracle constraints.
pub const ORACLE_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub opt_value: f64,
    /// Shortlex-smallest optimal set (ties within tolerance).
    pub opt_set: Vec<usize>,
    pub feasible_count: u64,
    pub enumerated_count: u64,
}

/// Exact maximum of `f` over all subsets of the ground set accepted by
/// `feasible`. An empty feasible family reports value 0 at `∅`.
pub fn brute_force_opt<F: SetFunction + ?Sized>(
    f: &F,
    feasible: impl Fn(&[usize]) -> bool,
    cap: usize,
) -> Result<BruteForceResult> {
    let n = f.ground_size();
    subset::check_cap(n, cap)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut feasible_count = 0;
    for mask in 0..1u64 << n {
        let set = from_mask(mask);
        if !feasible(&set) {
            continue;
        }
        feasible_count += 1;
        let v = f.value(&set);
        if best.as_ref().is_none_or(|(s, b)| improves(v, &set, *b, s)) {
            best = Some((set, v));
        }
    }
    let (opt_set, opt_value) = best.unwrap_or((Vec::new(), 0.0));
    Ok(BruteForceResult {
        opt_value,
        opt_set,
        feasible_count,
        enumerated_count: 1 << n,
    })
}

/// [`brute_force_opt`] under an independence system.
pub fn brute_force_constrained<F, I>(f: &F, sys: &I, cap: usize) -> Result<BruteForceResult>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    brute_force_opt(f, |s| sys.is_independent(s), cap)
}
