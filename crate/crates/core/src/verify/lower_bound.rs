//! Exact optimum over online policies for coverage games with hidden randomness.
//!
//! A world is one realisation of the hidden randomness together with one
//! arrival order; the policy observes each arriving element as the set of
//! points it covers (so an `i_TB` element reveals `i`) and decides at once
//! whether to accept it, up to `k` acceptances. The payoff is the number of
//! points covered by the accepted elements. An information state is the
//! sequence of observed point sets plus the accepted positions; its value is
//! the best expected continuation payoff over the worlds consistent with it.

use alloc::vec;
use alloc::vec::Vec;

use crate::function::CoverGadget;
use crate::verify::for_each_permutation;
use crate::{Error, Result};

/// Default cap on the number of worlds for [`optimal_online_policy_value`].
pub const DEFAULT_WORLD_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub weight: f64,
    /// Point mask of each element, in arrival order.
    pub arrivals: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverGame {
    pub worlds: Vec<World>,
    pub k: usize,
}

/// An information state at a decision point and its optimal value.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyGameNode {
    /// Observed point masks in arrival order, including the element being decided.
    pub observed: Vec<u64>,
    /// Accepted arrival positions so far.
    pub accepted: Vec<usize>,
    pub position: usize,
    /// Probability of reaching this state under uniform hidden randomness and order.
    pub probability: f64,
    pub value: f64,
    pub accept_value: Option<f64>,
    pub reject_value: f64,
}

impl CoverGame {
    /// Validates that weights are positive and every world has the same length.
    pub fn new(worlds: Vec<World>, k: usize) -> Result<Self> {
        let len = worlds.first().map_or(0, |w| w.arrivals.len());
        if worlds.is_empty() {
            return Err(Error::InvalidParameter(
                "a game needs at least one world".into(),
            ));
        }
        for w in &worlds {
            if w.weight.is_nan() || w.weight <= 0.0 || w.arrivals.len() != len {
                return Err(Error::InvalidParameter(
                    "worlds need positive weight and equal length".into(),
                ));
            }
        }
        Ok(Self { worlds, k })
    }

    /// Uniform mixture over `gadgets`, each in every arrival order.
    /// Gadgets must share `R` so their point labels agree.
    pub fn from_gadgets(gadgets: &[CoverGadget], k: usize) -> Result<Self> {
        Self::from_gadgets_filtered(gadgets, k, |_, _| true)
    }

    /// As [`CoverGame::from_gadgets`], keeping only orders accepted by `keep`
    /// (called with the gadget and the order of element indices).
    pub fn from_gadgets_filtered(
        gadgets: &[CoverGadget],
        k: usize,
        mut keep: impl FnMut(&CoverGadget, &[usize]) -> bool,
    ) -> Result<Self> {
        let mut worlds = Vec::new();
        for g in gadgets {
            if g.r() != gadgets[0].r() {
                return Err(Error::InvalidParameter("gadgets must share R".into()));
            }
            if g.coverage().universe() > 64 {
                return Err(Error::CapExceeded {
                    n: g.coverage().universe(),
                    cap: 64,
                });
            }
            let masks: Vec<u64> = g
                .coverage()
                .covers()
                .iter()
                .map(|c| c.iter().fold(0u64, |m, &p| m | 1 << p))
                .collect();
            let mut orders = Vec::new();
            for_each_permutation(masks.len(), |order| {
                if keep(g, order) {
                    orders.push(order.iter().map(|&e| masks[e]).collect::<Vec<_>>());
                }
            });
            let weight = 1.0 / (gadgets.len() * orders.len()) as f64;
            worlds.extend(
                orders
                    .into_iter()
                    .map(|arrivals| World { weight, arrivals }),
            );
        }
        Self::new(worlds, k)
    }

    /// `cover({1,2},{r})` with `r` uniform on `{1,2}` and a uniform order.
    pub fn cover_pair() -> Self {
        Self::from_gadgets(&pair_gadgets(), 2).expect("valid gadgets")
    }

    /// As [`CoverGame::cover_pair`], conditioned on `r_TB` arriving first.
    pub fn cover_pair_revealed_first() -> Self {
        let tb = 2;
        Self::from_gadgets_filtered(&pair_gadgets(), 2, |_, order| order[0] == tb)
            .expect("valid gadgets")
    }
}

fn pair_gadgets() -> [CoverGadget; 2] {
    [
        CoverGadget::new(&[1, 2], &[1]).expect("valid gadget"),
        CoverGadget::new(&[1, 2], &[2]).expect("valid gadget"),
    ]
}

/// Best expected payoff of any online policy on `game`, by backward induction
/// over information states. `cap` bounds the number of worlds.
pub fn optimal_online_policy_value(game: &CoverGame, cap: usize) -> Result<f64> {
    solve(game, cap, None)
}

/// [`optimal_online_policy_value`] that also lists every reachable decision
/// state in depth-first order.
pub fn policy_game_nodes(game: &CoverGame, cap: usize) -> Result<(f64, Vec<PolicyGameNode>)> {
    let mut nodes = Vec::new();
    let value = solve(game, cap, Some(&mut nodes))?;
    Ok((value, nodes))
}

fn solve(game: &CoverGame, cap: usize, nodes: Option<&mut Vec<PolicyGameNode>>) -> Result<f64> {
    if game.worlds.len() > cap {
        return Err(Error::CapExceeded {
            n: game.worlds.len(),
            cap,
        });
    }
    let total: f64 = game.worlds.iter().map(|w| w.weight).sum();
    let all: Vec<usize> = (0..game.worlds.len()).collect();
    let mut search = Search {
        game,
        total,
        nodes,
        observed: Vec::new(),
        accepted: Vec::new(),
    };
    Ok(search.value(&all, 0, 0))
}

struct Search<'a, 'n> {
    game: &'a CoverGame,
    total: f64,
    nodes: Option<&'n mut Vec<PolicyGameNode>>,
    observed: Vec<u64>,
    accepted: Vec<usize>,
}

impl Search<'_, '_> {
    fn weight(&self, worlds: &[usize]) -> f64 {
        worlds.iter().map(|&w| self.game.worlds[w].weight).sum()
    }

    /// Expected payoff from position `t` given the consistent `worlds` and the
    /// covered points `union`.
    fn value(&mut self, worlds: &[usize], t: usize, union: u64) -> f64 {
        let len = self.game.worlds[worlds[0]].arrivals.len();
        if t == len {
            return union.count_ones() as f64;
        }
        let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
        for &w in worlds {
            let m = self.game.worlds[w].arrivals[t];
            match groups.iter_mut().find(|(g, _)| *g == m) {
                Some((_, members)) => members.push(w),
                None => groups.push((m, vec![w])),
            }
        }
        let here = self.weight(worlds);
        let mut expected = 0.0;
        for (mask, members) in groups {
            let share = self.weight(&members);
            self.observed.push(mask);
            let reject = self.value(&members, t + 1, union);
            let accept = (self.accepted.len() < self.game.k).then(|| {
                self.accepted.push(t);
                let v = self.value(&members, t + 1, union | mask);
                self.accepted.pop();
                v
            });
            let best = accept.map_or(reject, |a| a.max(reject));
            if let Some(nodes) = self.nodes.as_deref_mut() {
                nodes.push(PolicyGameNode {
                    observed: self.observed.clone(),
                    accepted: self.accepted.clone(),
                    position: t,
                    probability: share / self.total,
                    value: best,
                    accept_value: accept,
                    reject_value: reject,
                });
            }
            self.observed.pop();
            expected += share / here * best;
        }
        expected
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{brute_force_opt, CARDINALITY_CAP};

    #[test]
    fn cover_pair_is_eight_thirds() {
        let v = optimal_online_policy_value(&CoverGame::cover_pair(), DEFAULT_WORLD_CAP).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn revealed_first_reaches_opt() {
        let v =
            optimal_online_policy_value(&CoverGame::cover_pair_revealed_first(), DEFAULT_WORLD_CAP)
                .unwrap();
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_hidden_randomness_and_large_k_matches_brute_force() {
        let g = CoverGadget::new(&[1, 2, 3], &[1, 3]).unwrap();
        let n = 5;
        let game = CoverGame::from_gadgets(core::slice::from_ref(&g), n).unwrap();
        let v = optimal_online_policy_value(&game, DEFAULT_WORLD_CAP).unwrap();
        let opt = brute_force_opt(&g, |_| true, CARDINALITY_CAP)
            .unwrap()
            .opt_value;
        assert!((v - opt).abs() < 1e-12);
    }

    #[test]
    fn world_cap_is_enforced() {
        let err = optimal_online_policy_value(&CoverGame::cover_pair(), 11).unwrap_err();
        assert_eq!(err, Error::CapExceeded { n: 12, cap: 11 });
    }

    #[test]
    fn nodes_cover_first_decisions() {
        let (v, nodes) = policy_game_nodes(&CoverGame::cover_pair(), DEFAULT_WORLD_CAP).unwrap();
        let first: Vec<_> = nodes.iter().filter(|n| n.position == 0).collect();
        assert_eq!(first.len(), 4);
        let p: f64 = first.iter().map(|n| n.probability).sum();
        assert!((p - 1.0).abs() < 1e-12);
        let root: f64 = first.iter().map(|n| n.probability * n.value).sum();
        assert!((root - v).abs() < 1e-12);
    }
}
