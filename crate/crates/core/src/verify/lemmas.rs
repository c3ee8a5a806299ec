use alloc::vec;
use alloc::vec::Vec;

use crate::constraint::{IndependenceSystem, Knapsack};
use crate::function::{value_table, SetFunction};
use crate::offline::{
    greedy_cardinality, greedy_psystem, greedy_psystem_stop_nonpositive,
    knapsack_candidate_collection,
};
use crate::secretary::{greedy_order, threshold_online, Stream, TauGrid};
use crate::subset::{self, from_mask, to_mask};
use crate::{Error, Result, TOL};

/// Outcome of an exhaustive inequality check `lhs >= rhs`. `min_slack` is the
/// smallest `lhs - rhs` seen; the check holds when it is at least `-TOL`.
/// `witness` holds the sets of the first violation.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub holds: bool,
    pub checked: u64,
    pub min_slack: f64,
    pub witness: Option<Vec<Vec<usize>>>,
}

impl LemmaReport {
    fn new() -> Self {
        Self {
            holds: true,
            checked: 0,
            min_slack: f64::INFINITY,
            witness: None,
        }
    }

    fn record(&mut self, slack: f64, witness: impl FnOnce() -> Vec<Vec<usize>>) {
        self.checked += 1;
        self.min_slack = self.min_slack.min(slack);
        if slack < -TOL && self.holds {
            self.holds = false;
            self.witness = Some(witness());
        }
    }
}

fn full(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// Greedy with budget `k` on the whole ground set returns `S` with
/// `f(S) >= f(S ∪ C)/2` for every `|C| <= k`.
pub fn check_greedy_half_bound<F: SetFunction + ?Sized>(
    f: &F,
    k: usize,
    cap: usize,
) -> Result<LemmaReport> {
    let table = value_table(f, cap)?;
    let n = f.ground_size();
    let ground: Vec<usize> = (0..n).collect();
    let s = to_mask(&greedy_cardinality(f, &ground, k)?.set());
    let mut report = LemmaReport::new();
    for c in 0..=full(n) {
        if c.count_ones() as usize <= k {
            let slack = table[s as usize] - 0.5 * table[(s | c) as usize];
            report.record(slack, || vec![from_mask(s), from_mask(c)]);
        }
    }
    Ok(report)
}

/// `f(S1 ∪ C) + f(S1 ∩ C) + f(S2 ∪ (C \ S1)) >= f(C)` for every `C`, `S1` and
/// `S2 ⊆ U \ S1`.
pub fn check_cross_sums<F: SetFunction + ?Sized>(f: &F, cap: usize) -> Result<LemmaReport> {
    let table = value_table(f, cap)?;
    let all = full(f.ground_size());
    let mut report = LemmaReport::new();
    for c in 0..=all {
        for s1 in 0..=all {
            let a = table[(s1 | c) as usize] + table[(s1 & c) as usize];
            let c_rest = c & !s1;
            for s2 in subset::submasks(all & !s1) {
                let slack = a + table[(s2 | c_rest) as usize] - table[c as usize];
                report.record(slack, || vec![from_mask(c), from_mask(s1), from_mask(s2)]);
            }
        }
    }
    Ok(report)
}

/// Greedy over `sys` on the whole ground set returns `S` with
/// `f(S) >= f(C ∪ S)/(p + 1)` for every independent `C`.
///
/// The greedy here fills to a basis even through negative gains. The bound
/// can then fail; see [`check_psystem_greedy_bound_stop_nonpositive`].
pub fn check_psystem_greedy_bound<F, I>(f: &F, sys: &I, p: f64, cap: usize) -> Result<LemmaReport>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    let ground: Vec<usize> = (0..f.ground_size()).collect();
    let s = greedy_psystem(f, &ground, sys)?.set();
    psystem_bound_for(f, sys, p, cap, &s)
}

/// [`check_psystem_greedy_bound`] for the greedy that stops at the first
/// non-positive gain. Every gain is then positive and each left-over element
/// has non-positive marginal, so the bound holds.
pub fn check_psystem_greedy_bound_stop_nonpositive<F, I>(
    f: &F,
    sys: &I,
    p: f64,
    cap: usize,
) -> Result<LemmaReport>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    let ground: Vec<usize> = (0..f.ground_size()).collect();
    let s = greedy_psystem_stop_nonpositive(f, &ground, sys)?.set();
    psystem_bound_for(f, sys, p, cap, &s)
}

fn psystem_bound_for<F, I>(f: &F, sys: &I, p: f64, cap: usize, s: &[usize]) -> Result<LemmaReport>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    let table = value_table(f, cap)?;
    let s = to_mask(s);
    let mut report = LemmaReport::new();
    for c in 0..=full(f.ground_size()) {
        if sys.is_independent(&from_mask(c)) {
            let slack = table[s as usize] - table[(s | c) as usize] / (p + 1.0);
            report.record(slack, || vec![from_mask(s), from_mask(c)]);
        }
    }
    Ok(report)
}

/// For every feasible `C`, some member `S` of the knapsack candidate
/// collection has `f(S) >= f(S ∪ C)/2`. The slack per `C` is the best member's.
pub fn check_knapsack_collection<F: SetFunction + ?Sized>(
    f: &F,
    knapsack: &Knapsack,
    cap: usize,
) -> Result<LemmaReport> {
    let table = value_table(f, cap)?;
    let n = f.ground_size();
    let ground: Vec<usize> = (0..n).collect();
    let collection: Vec<u64> = knapsack_candidate_collection(f, &ground, knapsack)?
        .iter()
        .map(|s| to_mask(s))
        .collect();
    let mut report = LemmaReport::new();
    for c in 0..=full(n) {
        if !knapsack.is_independent(&from_mask(c)) {
            continue;
        }
        let (best, slack) = collection
            .iter()
            .map(|&s| (s, table[s as usize] - 0.5 * table[(s | c) as usize]))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
        report.record(slack, || vec![from_mask(best), from_mask(c)]);
    }
    Ok(report)
}

/// Calls `visit` with every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut order: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    visit(&order);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(counters[i], i);
            }
            visit(&order);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// For every arrival order of the ground set (at most `max_n` elements) and
/// every `|C*| <= k`, the threshold algorithm's output `S` satisfies
/// `|S| = k ∧ f(S) >= τk` or `f(S) >= f(S ∪ C*) - |C*|τ`. The slack is the
/// larger of the two disjuncts' slacks (the first counts only when `|S| = k`).
pub fn check_threshold_lemma<F: SetFunction + ?Sized>(
    f: &F,
    tau: f64,
    k: usize,
    max_n: usize,
) -> Result<LemmaReport> {
    let n = f.ground_size();
    if n > max_n {
        return Err(Error::CapExceeded { n, cap: max_n });
    }
    let table = value_table(f, max_n)?;
    let small: Vec<u64> = (0..=full(n))
        .filter(|c| c.count_ones() as usize <= k)
        .collect();
    let mut report = LemmaReport::new();
    let mut failure = None;
    for_each_permutation(n, |order| {
        if failure.is_some() {
            return;
        }
        let stream = Stream::from_order(order.to_vec()).expect("a permutation");
        let s = match threshold_online(f, &stream, tau, k) {
            Ok(s) => to_mask(&s),
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let fs = table[s as usize];
        let full_slack = if s.count_ones() as usize == k {
            fs - tau * k as f64
        } else {
            f64::NEG_INFINITY
        };
        for &c in &small {
            let slack = full_slack.max(fs - table[(s | c) as usize] + c.count_ones() as f64 * tau);
            report.record(slack, || vec![order.to_vec(), from_mask(s), from_mask(c)]);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

/// `Σ_i |C*_{τ_i}| τ_i >= f(C*)/4` over the grid `τ_i = w1/2^i`,
/// `i = 0..=ceil(log2 2k)`, with `w1` the best singleton value of `f`.
pub fn check_tau_grid_sum<F: SetFunction + ?Sized>(
    f: &F,
    opt_set: &[usize],
    k: usize,
) -> LemmaReport {
    let w1 = (0..f.ground_size())
        .map(|e| f.value(&[e]))
        .fold(0.0, f64::max);
    let (_, gains) = greedy_order(f, opt_set);
    let sum: f64 = TauGrid::new(w1, k)
        .values
        .iter()
        .map(|&tau| gains.iter().filter(|&&g| g >= tau).count() as f64 * tau)
        .sum();
    let mut report = LemmaReport::new();
    report.record(sum - f.value(opt_set) / 4.0, || vec![opt_set.to_vec()]);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{p_parameter, Constraint, Intersection, Partition};
    use crate::function::properties::{check_submodular, CheckMode};
    use crate::function::{CoverGadget, Cut, FnFunction, Modular};

    #[test]
    fn permutations_are_complete() {
        let mut seen = Vec::new();
        for_each_permutation(4, |p| seen.push(p.to_vec()));
        assert_eq!(seen.len(), 24);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
        let mut count = 0;
        for_each_permutation(0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn half_bound_is_tight_for_cardinality() {
        let f = Modular::cardinality(4);
        let r = check_greedy_half_bound(&f, 2, 14).unwrap();
        assert!(r.holds);
        assert_eq!(r.min_slack, 0.0);
    }

    #[test]
    fn cross_sums_on_cut() {
        assert!(check_cross_sums(&Cut::cycle(5), 14).unwrap().holds);
    }

    #[test]
    fn cross_sums_detects_non_submodular() {
        let f = FnFunction::new(3, |s: &[usize]| if s == [0] { 1.0 } else { 0.0 });
        let r = check_cross_sums(&f, 14).unwrap();
        assert!(!r.holds);
        assert!(r.witness.is_some());
    }

    #[test]
    fn psystem_bound_fails_when_greedy_fills_through_negative_gains() {
        let values = [0.0, 1.25, 1.0, 2.25, 1.5, 2.75, 0.5, 1.75];
        let f = FnFunction::new(3, move |s: &[usize]| values[to_mask(s) as usize]);
        let a = Partition::new(3, vec![vec![2], vec![0, 1]]).unwrap();
        let b = Partition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let sys =
            Intersection::new(vec![Constraint::Partition(a), Constraint::Partition(b)]).unwrap();
        assert!(check_submodular(&f, CheckMode::exhaustive()).unwrap().holds);
        let p = p_parameter(&sys, 14).unwrap().value();
        assert_eq!(p, 2.0);
        let literal = check_psystem_greedy_bound(&f, &sys, p, 14).unwrap();
        assert!(!literal.holds);
        assert!((literal.min_slack + 1.0 / 12.0).abs() < 1e-12);
        assert_eq!(literal.witness, Some(vec![vec![1, 2], vec![0]]));
        assert!(
            check_psystem_greedy_bound_stop_nonpositive(&f, &sys, p, 14)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn threshold_lemma_on_gadget() {
        let g = CoverGadget::new(&[1, 2], &[2]).unwrap();
        let r = check_threshold_lemma(&g, 0.3, 2, 7).unwrap();
        assert!(r.holds);
        assert_eq!(r.checked, 6 * 7);
    }
}
