//! Offline constrained maximization: greedy primitives, the two-pass
//! cardinality algorithm, the multi-pass p-system algorithm and the knapsack
//! enumeration greedy with its wrapper.
//!
//! Every routine takes the sub-ground-set `X` it works on as a canonical
//! index list. Greedy ties go to the lowest element index; ties between
//! candidate sets go to the [`subset::shortlex_cmp`]-smallest set.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::constraint::IndependenceSystem;
use crate::function::SetFunction;
use crate::subset;
use crate::unconstrained::{improves, FmvBackend};
use crate::{Error, Result, SimRng};

mod knapsack;

pub use knapsack::{knapsack_candidate_collection, submod_max_knapsack, KnapsackMode};

/// Elements in pick order with the marginal gain `δ_i = f_{S_{i-1}}(e_i)` of
/// each step. `discarded` lists, in discovery order, elements dropped because
/// adding them would break feasibility.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTrace {
    pub picked: Vec<usize>,
    pub deltas: Vec<f64>,
    pub discarded: Vec<usize>,
}

impl GreedyTrace {
    /// The picked elements as a canonical set.
    pub fn set(&self) -> Vec<usize> {
        let mut s = self.picked.clone();
        s.sort_unstable();
        s
    }

    /// `Σ δ_i`, which telescopes to `f(set)`.
    pub fn total(&self) -> f64 {
        self.deltas.iter().sum()
    }

    /// Canonical prefix `S_i` of the first `i` picks.
    pub fn prefix(&self, i: usize) -> Vec<usize> {
        let mut s = self.picked[..i].to_vec();
        s.sort_unstable();
        s
    }
}

/// One pass of a multi-pass algorithm: the greedy set `S_i` and, when the
/// algorithm refines it, the unconstrained-maximization output `S_i'`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pass {
    pub greedy: Vec<usize>,
    pub refined: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub set: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPassResult {
    pub passes: Vec<Pass>,
    pub candidates: Vec<Candidate>,
    pub chosen: Vec<usize>,
    pub value: f64,
}

impl MultiPassResult {
    fn from_candidates(passes: Vec<Pass>, candidates: Vec<Candidate>) -> Self {
        let (chosen, value) = match best_candidate(&candidates) {
            Some(c) => (c.set.clone(), c.value),
            None => (Vec::new(), 0.0),
        };
        Self {
            passes,
            candidates,
            chosen,
            value,
        }
    }
}

/// Highest value, ties within tolerance to the shortlex-smallest set.
pub fn best_candidate(candidates: &[Candidate]) -> Option<&Candidate> {
    let mut iter = candidates.iter();
    let mut best = iter.next()?;
    for c in iter {
        if improves(c.value, &c.set, best.value, &best.set) {
            best = c;
        }
    }
    Some(best)
}

fn candidate<F: SetFunction + ?Sized>(f: &F, label: String, set: Vec<usize>) -> Candidate {
    let value = f.value(&set);
    Candidate { label, set, value }
}

/// `argmax_{e ∈ pool} f(S + e) - f(S)` with the lowest index winning ties.
fn best_marginal<F: SetFunction + ?Sized>(
    f: &F,
    current: &[usize],
    base: f64,
    pool: impl Iterator<Item = usize>,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for e in pool {
        let gain = f.value(&subset::with(current, e)) - base;
        if best.is_none_or(|(_, g)| gain > g) {
            best = Some((e, gain));
        }
    }
    best
}

fn cardinality_greedy<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    k: usize,
    stop_nonpositive: bool,
) -> Result<GreedyTrace> {
    let ground = subset::canonical(ground, f.ground_size())?;
    let mut trace = GreedyTrace {
        picked: Vec::new(),
        deltas: Vec::new(),
        discarded: Vec::new(),
    };
    let mut current = Vec::new();
    let mut value = f.value(&current);
    while trace.picked.len() < k.min(ground.len()) {
        let pool = ground
            .iter()
            .copied()
            .filter(|&e| !subset::contains(&current, e));
        let Some((e, gain)) = best_marginal(f, &current, value, pool) else {
            break;
        };
        if stop_nonpositive && gain <= 0.0 {
            break;
        }
        subset::insert(&mut current, e);
        value += gain;
        trace.picked.push(e);
        trace.deltas.push(gain);
    }
    Ok(trace)
}

/// Which greedy step rule the multi-pass wrappers use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreedyRule {
    /// Keep adding while room remains, even with negative marginals.
    #[default]
    Literal,
    /// Stop at the first non-positive best marginal.
    StopNonpositive,
}

impl GreedyRule {
    fn stops(self) -> bool {
        self == GreedyRule::StopNonpositive
    }
}

/// Picks the max-marginal element of `ground` until `min(k, |ground|)`
/// elements are chosen, taking negative-marginal steps when nothing better
/// remains.
pub fn greedy_cardinality<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    k: usize,
) -> Result<GreedyTrace> {
    cardinality_greedy(f, ground, k, false)
}

/// Like [`greedy_cardinality`] but stops at the first non-positive best marginal.
pub fn greedy_cardinality_stop_nonpositive<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    k: usize,
) -> Result<GreedyTrace> {
    cardinality_greedy(f, ground, k, true)
}

/// Repeatedly adds the max-marginal element whose addition keeps the set
/// independent, regardless of the sign of the gain, until the set is a basis
/// of `ground`.
pub fn greedy_psystem<F, I>(f: &F, ground: &[usize], sys: &I) -> Result<GreedyTrace>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    psystem_greedy(f, ground, sys, false)
}

/// Like [`greedy_psystem`] but stops at the first non-positive best marginal.
pub fn greedy_psystem_stop_nonpositive<F, I>(
    f: &F,
    ground: &[usize],
    sys: &I,
) -> Result<GreedyTrace>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    psystem_greedy(f, ground, sys, true)
}

fn psystem_greedy<F, I>(
    f: &F,
    ground: &[usize],
    sys: &I,
    stop_nonpositive: bool,
) -> Result<GreedyTrace>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    check_same_ground(f.ground_size(), sys.ground_size())?;
    let mut pool = subset::canonical(ground, f.ground_size())?;
    let mut trace = GreedyTrace {
        picked: Vec::new(),
        deltas: Vec::new(),
        discarded: Vec::new(),
    };
    let mut current = Vec::new();
    let mut value = f.value(&current);
    loop {
        pool.retain(|&e| {
            let ok = sys.can_add(&current, e);
            if !ok {
                trace.discarded.push(e);
            }
            ok
        });
        let Some((e, gain)) = best_marginal(f, &current, value, pool.iter().copied()) else {
            return Ok(trace);
        };
        if stop_nonpositive && gain <= 0.0 {
            return Ok(trace);
        }
        pool.retain(|&x| x != e);
        subset::insert(&mut current, e);
        value += gain;
        trace.picked.push(e);
        trace.deltas.push(gain);
    }
}

fn check_same_ground(n: usize, m: usize) -> Result<()> {
    if n != m {
        return Err(Error::InvalidParameter(format!(
            "function has {n} elements but the constraint has {m}"
        )));
    }
    Ok(())
}

/// Approximation factor of [`submod_max_cardinality`] with an `α` backend.
pub fn cardinality_bound(alpha: f64) -> f64 {
    4.0 + alpha
}

/// Approximation factor of [`submod_max_psystem`] with `p + 1` passes.
pub fn psystem_bound(p: usize, alpha: f64) -> f64 {
    let p = p as f64;
    (1.0 + alpha) * (p + 2.0 + 1.0 / p)
}

/// Factor for only two passes: the greedy sub-bound `1/(p+1)` combined with
/// the cross-sums inequality, balanced against the backend, gives
/// `2(p+1) + α`.
pub fn psystem_two_pass_bound(p: usize, alpha: f64) -> f64 {
    2.0 * (p as f64 + 1.0) + alpha
}

/// Approximation factor of the certified [`submod_max_knapsack`].
pub fn knapsack_bound(alpha: f64) -> f64 {
    4.0 + alpha
}

/// `S_1 = greedy(X, k)`, `S_1' = backend(S_1)`, `S_2 = greedy(X \ S_1, k)`;
/// returns the best of the three.
pub fn submod_max_cardinality<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    k: usize,
    backend: FmvBackend,
    rng: &mut SimRng,
) -> Result<MultiPassResult> {
    submod_max_cardinality_with_rule(f, ground, k, backend, GreedyRule::Literal, rng)
}

/// [`submod_max_cardinality`] with a chosen greedy rule.
pub fn submod_max_cardinality_with_rule<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    k: usize,
    backend: FmvBackend,
    rule: GreedyRule,
    rng: &mut SimRng,
) -> Result<MultiPassResult> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "cardinality bound k must be at least 1".into(),
        ));
    }
    let ground = subset::canonical(ground, f.ground_size())?;
    let s1 = cardinality_greedy(f, &ground, k, rule.stops())?.set();
    let s1_refined = backend.run(f, &s1, rng)?;
    let s2 = cardinality_greedy(f, &subset::difference(&ground, &s1), k, rule.stops())?.set();
    let candidates = alloc::vec![
        candidate(f, "S1".into(), s1.clone()),
        candidate(f, "S1'".into(), s1_refined.clone()),
        candidate(f, "S2".into(), s2.clone()),
    ];
    let passes = alloc::vec![
        Pass {
            greedy: s1,
            refined: Some(s1_refined),
        },
        Pass {
            greedy: s2,
            refined: None,
        },
    ];
    Ok(MultiPassResult::from_candidates(passes, candidates))
}

/// `p + 1` passes of [`greedy_psystem`] on shrinking ground sets, each
/// refined by the backend; returns the best of all `2(p + 1)` candidates.
pub fn submod_max_psystem<F, I>(
    f: &F,
    ground: &[usize],
    sys: &I,
    p: usize,
    backend: FmvBackend,
    rng: &mut SimRng,
) -> Result<MultiPassResult>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    submod_max_psystem_passes(f, ground, sys, p + 1, backend, rng)
}

/// The p-system algorithm with an explicit pass count (2 for the fast mode).
pub fn submod_max_psystem_passes<F, I>(
    f: &F,
    ground: &[usize],
    sys: &I,
    passes: usize,
    backend: FmvBackend,
    rng: &mut SimRng,
) -> Result<MultiPassResult>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    submod_max_psystem_with_rule(f, ground, sys, passes, backend, GreedyRule::Literal, rng)
}

/// [`submod_max_psystem_passes`] with a chosen greedy rule.
pub fn submod_max_psystem_with_rule<F, I>(
    f: &F,
    ground: &[usize],
    sys: &I,
    passes: usize,
    backend: FmvBackend,
    rule: GreedyRule,
    rng: &mut SimRng,
) -> Result<MultiPassResult>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    if passes == 0 {
        return Err(Error::InvalidParameter(
            "at least one pass is required".into(),
        ));
    }
    let mut remaining = subset::canonical(ground, f.ground_size())?;
    let mut all_passes = Vec::with_capacity(passes);
    let mut candidates = Vec::with_capacity(2 * passes);
    for i in 1..=passes {
        let s = psystem_greedy(f, &remaining, sys, rule.stops())?.set();
        let refined = backend.run(f, &s, rng)?;
        candidates.push(candidate(f, format!("S{i}"), s.clone()));
        candidates.push(candidate(f, format!("S{i}'"), refined.clone()));
        remaining = subset::difference(&remaining, &s);
        all_passes.push(Pass {
            greedy: s,
            refined: Some(refined),
        });
    }
    Ok(MultiPassResult::from_candidates(all_passes, candidates))
}
