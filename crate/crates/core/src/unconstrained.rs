//! Unconstrained maximization `max_{T ⊆ S} f(T)` over a sub-ground-set `S`.
//! Each backend carries the approximation factor `α` it guarantees for
//! non-negative submodular `f`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::function::SetFunction;
use crate::subset::{self, from_local_mask};
use crate::{Error, Result, SimRng, TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FmvBackend {
    /// Each element of `S` independently with probability 1/2; `α = 4` in expectation.
    RandomSubset,
    /// Single-element add/remove local search with multiplicative improvement
    /// threshold `1 + ε/|S|²`; `α = 3` up to the `ε` slack.
    LocalSearch { epsilon: f64 },
    /// Exhaustive search over `2^|S|` subsets; `α = 1`.
    Exact { cap: usize },
}

impl FmvBackend {
    pub const DEFAULT_EPSILON: f64 = 1e-3;
    pub const DEFAULT_EXACT_CAP: usize = 20;

    pub fn local_search() -> Self {
        FmvBackend::LocalSearch {
            epsilon: Self::DEFAULT_EPSILON,
        }
    }

    pub fn exact() -> Self {
        FmvBackend::Exact {
            cap: Self::DEFAULT_EXACT_CAP,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            FmvBackend::RandomSubset => 4.0,
            FmvBackend::LocalSearch { .. } => 3.0,
            FmvBackend::Exact { .. } => 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FmvBackend::RandomSubset => "random",
            FmvBackend::LocalSearch { .. } => "local",
            FmvBackend::Exact { .. } => "exact",
        }
    }

    /// Runs the backend on canonical `set`. Only `RandomSubset` draws from `rng`.
    pub fn run<F: SetFunction + ?Sized>(
        &self,
        f: &F,
        set: &[usize],
        rng: &mut SimRng,
    ) -> Result<Vec<usize>> {
        match *self {
            FmvBackend::RandomSubset => Ok(fmv_random_subset(set, rng)),
            FmvBackend::LocalSearch { epsilon } => fmv_local_search(f, set, epsilon),
            FmvBackend::Exact { cap } => fmv_exact(f, set, cap),
        }
    }
}

/// Keeps each element of `set` iff its coin (drawn in ascending element
/// order) comes up heads.
pub fn fmv_random_subset(set: &[usize], rng: &mut SimRng) -> Vec<usize> {
    set.iter().copied().filter(|_| rng.coin()).collect()
}

/// Deterministic local search started from the best singleton of `set`
/// (lowest index on ties). Additions are tried before removals, each in
/// ascending element order, and the first move improving the value by a
/// factor `1 + epsilon/|set|²` is taken. Returns the better of the local
/// optimum `L` and `set \ L` (`L` on ties).
pub fn fmv_local_search<F: SetFunction + ?Sized>(
    f: &F,
    set: &[usize],
    epsilon: f64,
) -> Result<Vec<usize>> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(
            "local search epsilon must be positive".into(),
        ));
    }
    let Some(&first) = set.first() else {
        return Ok(Vec::new());
    };
    let mut best = (first, f.value(&[first]));
    for &e in &set[1..] {
        let v = f.value(&[e]);
        if v > best.1 {
            best = (e, v);
        }
    }
    let (mut current, mut value) = if best.1 > 0.0 {
        (alloc::vec![best.0], best.1)
    } else {
        (Vec::new(), 0.0)
    };
    let factor = 1.0 + epsilon / (set.len() * set.len()) as f64;
    loop {
        let additions = set
            .iter()
            .filter(|&&e| !subset::contains(&current, e))
            .map(|&e| subset::with(&current, e));
        let removals = current.iter().map(|&e| subset::without(&current, e));
        let step = additions.chain(removals).find_map(|candidate| {
            let v = f.value(&candidate);
            (v > factor * value && v > value).then_some((candidate, v))
        });
        match step {
            Some((next, v)) => {
                current = next;
                value = v;
            }
            None => break,
        }
    }
    let complement = subset::difference(set, &current);
    if f.value(&complement) > value {
        Ok(complement)
    } else {
        Ok(current)
    }
}

/// Exact argmax over all subsets of `set`; ties within [`TOL`] go to the
/// first subset in [`subset::shortlex_cmp`] order.
pub fn fmv_exact<F: SetFunction + ?Sized>(f: &F, set: &[usize], cap: usize) -> Result<Vec<usize>> {
    subset::check_cap(set.len(), cap)?;
    let mut best = (Vec::new(), f.value(&[]));
    for mask in 1..1u64 << set.len() {
        let candidate = from_local_mask(set, mask);
        let v = f.value(&candidate);
        if improves(v, &candidate, best.1, &best.0) {
            best = (candidate, v);
        }
    }
    Ok(best.0)
}

/// Whether `(value, set)` beats `(best_value, best_set)` under the rule
/// "larger value, then the [`subset::shortlex_cmp`]-smaller set within [`TOL`]".
pub(crate) fn improves(value: f64, set: &[usize], best_value: f64, best_set: &[usize]) -> bool {
    value > best_value + TOL
        || (value >= best_value - TOL && subset::shortlex_cmp(set, best_set) == Ordering::Less)
}
