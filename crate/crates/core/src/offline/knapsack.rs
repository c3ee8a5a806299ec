use alloc::format;
use alloc::vec::Vec;

use super::{best_candidate, candidate, check_same_ground, Candidate, MultiPassResult, Pass};
use crate::constraint::{IndependenceSystem, Knapsack};
use crate::function::SetFunction;
use crate::subset;
use crate::unconstrained::FmvBackend;
use crate::{Result, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnapsackMode {
    /// Second pass on the complement of every first-pass candidate.
    Certified,
    /// Second pass only for the `top` highest-valued first-pass candidates.
    Fast { top: usize },
}

impl KnapsackMode {
    pub const DEFAULT_TOP: usize = 8;
}

/// All feasible subsets of `ground` with at most three elements, plus every
/// prefix of the density-greedy extension of each feasible three-element seed.
///
/// The extension repeatedly takes the remaining element with the largest
/// marginal gain per unit size (lowest index on ties). It stops when that
/// ratio is not positive; an element that would overflow the budget is
/// dropped from consideration and the scan continues. The result is sorted in
/// shortlex order without duplicates.
pub fn knapsack_candidate_collection<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    knapsack: &Knapsack,
) -> Result<Vec<Vec<usize>>> {
    check_same_ground(f.ground_size(), knapsack.ground_size())?;
    let ground = subset::canonical(ground, f.ground_size())?;
    let mut out = Vec::new();
    for size in 0..=3 {
        for set in subset::combinations(&ground, size) {
            if knapsack.is_independent(&set) {
                out.push(set);
            }
        }
    }
    let seeds: Vec<Vec<usize>> = out.iter().filter(|s| s.len() == 3).cloned().collect();
    for seed in seeds {
        density_greedy(f, &ground, knapsack, seed, &mut out);
    }
    out.sort_unstable_by(|a, b| subset::shortlex_cmp(a, b));
    out.dedup();
    Ok(out)
}

fn density_greedy<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    knapsack: &Knapsack,
    seed: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let mut used = knapsack.size_of(&seed);
    let mut current = seed;
    let mut value = f.value(&current);
    let mut pool: Vec<usize> = subset::difference(ground, &current);
    while !pool.is_empty() {
        let mut best: Option<(usize, f64, f64)> = None;
        for (pos, &e) in pool.iter().enumerate() {
            let gain = f.value(&subset::with(&current, e)) - value;
            let density = gain / knapsack.sizes()[e] as f64;
            if best.is_none_or(|(_, d, _)| density > d) {
                best = Some((pos, density, gain));
            }
        }
        let (pos, density, gain) = best.expect("pool is non-empty");
        if density <= 0.0 {
            return;
        }
        let e = pool.remove(pos);
        let size = knapsack.sizes()[e];
        if used + size <= knapsack.budget() {
            used += size;
            subset::insert(&mut current, e);
            value += gain;
            out.push(current.clone());
        }
    }
}

/// Knapsack wrapper around the candidate collection. For each first-pass
/// candidate `T` on `ground` it considers `T`, `backend(T)` and the best
/// member of a second-pass collection on `ground \ T`, and returns the best
/// set seen.
pub fn submod_max_knapsack<F: SetFunction + ?Sized>(
    f: &F,
    ground: &[usize],
    knapsack: &Knapsack,
    backend: FmvBackend,
    mode: KnapsackMode,
    rng: &mut SimRng,
) -> Result<MultiPassResult> {
    let ground = subset::canonical(ground, f.ground_size())?;
    let first: Vec<Candidate> = knapsack_candidate_collection(f, &ground, knapsack)?
        .into_iter()
        .enumerate()
        .map(|(i, set)| candidate(f, format!("T{i}"), set))
        .collect();
    let selected: Vec<&Candidate> = match mode {
        KnapsackMode::Certified => first.iter().collect(),
        KnapsackMode::Fast { top } => {
            let mut order: Vec<&Candidate> = first.iter().collect();
            order.sort_by(|a, b| {
                b.value
                    .total_cmp(&a.value)
                    .then_with(|| subset::shortlex_cmp(&a.set, &b.set))
            });
            order.truncate(top);
            order
        }
    };
    let mut passes = Vec::with_capacity(selected.len());
    let mut candidates = Vec::with_capacity(first.len() + 2 * selected.len());
    for t in selected {
        let refined = backend.run(f, &t.set, rng)?;
        candidates.push(candidate(f, format!("{}'", t.label), refined.clone()));
        let rest = subset::difference(&ground, &t.set);
        let second: Vec<Candidate> = knapsack_candidate_collection(f, &rest, knapsack)?
            .into_iter()
            .map(|set| candidate(f, format!("U|{}", t.label), set))
            .collect();
        if let Some(best) = best_candidate(&second) {
            candidates.push(best.clone());
        }
        passes.push(Pass {
            greedy: t.set.clone(),
            refined: Some(refined),
        });
    }
    candidates.extend(first);
    Ok(MultiPassResult::from_candidates(passes, candidates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Modular;
    use alloc::vec;

    #[test]
    fn three_elements_all_fit() {
        let f = Modular::new(vec![1.0, 2.0, 3.0]);
        let k = Knapsack::new(vec![1, 1, 1], 3).unwrap();
        let c = knapsack_candidate_collection(&f, &[0, 1, 2], &k).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c[0], Vec::<usize>::new());
        assert_eq!(c[7], vec![0, 1, 2]);
    }

    #[test]
    fn unit_sizes_follow_plain_greedy() {
        let f = Modular::new(vec![5.0, 1.0, 4.0, 2.0, 3.0]);
        let k = Knapsack::new(vec![1; 5], 5).unwrap();
        let c = knapsack_candidate_collection(&f, &[0, 1, 2, 3, 4], &k).unwrap();
        assert!(c.contains(&vec![0, 1, 2, 3]));
        assert!(c.contains(&vec![0, 1, 2, 3, 4]));
    }

    #[test]
    fn nothing_fits() {
        let f = Modular::new(vec![1.0, 1.0]);
        let k = Knapsack::new(vec![3, 4], 2).unwrap();
        let mut rng = SimRng::new(0);
        let r = submod_max_knapsack(
            &f,
            &[0, 1],
            &k,
            FmvBackend::exact(),
            KnapsackMode::Certified,
            &mut rng,
        )
        .unwrap();
        assert!(r.chosen.is_empty());
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn overflowing_element_is_dropped() {
        let f = Modular::new(vec![1.0, 1.0, 1.0, 10.0, 1.0]);
        let k = Knapsack::new(vec![1, 1, 1, 5, 1], 4).unwrap();
        let c = knapsack_candidate_collection(&f, &[0, 1, 2, 3, 4], &k).unwrap();
        assert!(c.contains(&vec![0, 1, 2, 4]));
        assert!(c.iter().all(|s| k.is_independent(s)));
    }
}
