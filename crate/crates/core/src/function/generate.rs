//! Seeded random instance generators. Test-instance distributions are an
//! artifact choice; every generator is deterministic given its [`SimRng`].

use alloc::format;
use alloc::vec::Vec;

use super::properties::{check_nonneg_and_zero, CheckMode};
use super::{CoverGadget, Coverage, CoverageMinusCost, Cut, SetFunction};
use crate::{Error, Result, SimRng};

/// Each element covers between 1 and `max_cover` distinct points of `0..universe`.
pub fn random_coverage(rng: &mut SimRng, n: usize, universe: usize, max_cover: usize) -> Coverage {
    let max_cover = max_cover.clamp(1, universe.max(1));
    let covers = (0..n)
        .map(|_| {
            let size = 1 + rng.below(max_cover);
            let mut points: Vec<usize> = rng.permutation(universe).into_iter().take(size).collect();
            points.sort_unstable();
            points
        })
        .collect();
    Coverage::new(universe, covers, None).expect("generated points are in range")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageCostParams {
    pub n: usize,
    pub universe: usize,
    pub max_cover: usize,
    /// Cost of element `e` is drawn from multiples of 1/4 in
    /// `[0, cost_scale * |cover(e)|]`.
    pub cost_scale: f64,
    /// Resample until the instance has a strictly decreasing marginal somewhere.
    pub require_non_monotone: bool,
    pub attempts: usize,
}

impl CoverageCostParams {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            universe: (n + n / 2).max(4),
            max_cover: 4,
            cost_scale: 0.75,
            require_non_monotone: true,
            attempts: 2000,
        }
    }
}

/// Coverage-minus-cost instance with `f(S) >= 0` verified for every `S`
/// (exhaustively up to 14 elements, by sampling above that).
pub fn random_coverage_minus_cost(
    rng: &mut SimRng,
    params: &CoverageCostParams,
) -> Result<CoverageMinusCost> {
    for _ in 0..params.attempts {
        let coverage = random_coverage(rng, params.n, params.universe, params.max_cover);
        let costs: Vec<f64> = coverage
            .covers()
            .iter()
            .map(|c| {
                let quarters = libm::floor(params.cost_scale * c.len() as f64 * 4.0) as usize;
                rng.below(quarters + 1) as f64 / 4.0
            })
            .collect();
        let f = CoverageMinusCost::new(coverage, costs)?;
        let mode = if params.n <= crate::DEFAULT_CAP {
            CheckMode::exhaustive()
        } else {
            CheckMode::Sampled {
                samples: 20_000,
                seed: rng.next_u64(),
            }
        };
        if !check_nonneg_and_zero(&f, mode)?.holds {
            continue;
        }
        if params.require_non_monotone && !has_negative_marginal(&f, rng) {
            continue;
        }
        return Ok(f);
    }
    Err(Error::GenerationFailed(format!(
        "no non-negative coverage-minus-cost instance in {} attempts",
        params.attempts
    )))
}

fn has_negative_marginal<F: SetFunction>(f: &F, rng: &mut SimRng) -> bool {
    let n = f.ground_size();
    if n <= crate::DEFAULT_CAP {
        let mode = CheckMode::exhaustive();
        return !super::properties::check_monotone(f, mode)
            .map(|r| r.holds)
            .unwrap_or(true);
    }
    let mode = CheckMode::Sampled {
        samples: 5_000,
        seed: rng.next_u64(),
    };
    !super::properties::check_monotone(f, mode)
        .map(|r| r.holds)
        .unwrap_or(true)
}

/// Erdős–Rényi graph with integer edge weights in `1..=max_weight`.
pub fn random_cut(rng: &mut SimRng, n: usize, edge_prob: f64, max_weight: usize) -> Cut {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(edge_prob) {
                edges.push((u, v, (1 + rng.below(max_weight.max(1))) as f64));
            }
        }
    }
    Cut::new(n, edges).expect("generated edges are in range")
}

/// `cover({1..k}, S)` with `S` a uniformly random `k/2`-subset. `k` must be even.
pub fn random_cover_gadget(rng: &mut SimRng, k: usize) -> Result<CoverGadget> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "gadget size {k} must be even and positive"
        )));
    }
    let r: Vec<u32> = (1..=k as u32).collect();
    let mut s: Vec<u32> = rng
        .permutation(k)
        .into_iter()
        .take(k / 2)
        .map(|i| i as u32 + 1)
        .collect();
    s.sort_unstable();
    CoverGadget::new(&r, &s)
}

/// `cover({1..k}, S)` built from a uniformly random perfect matching of
/// `{1..k}` with one endpoint of every edge placed in `S`. The marginal law of
/// `S` matches [`random_cover_gadget`]; the matching is returned for callers
/// that model a policy which can see it.
pub fn random_cover_gadget_matching(
    rng: &mut SimRng,
    k: usize,
) -> Result<(CoverGadget, Vec<(u32, u32)>)> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "gadget size {k} must be even and positive"
        )));
    }
    let order: Vec<u32> = rng
        .permutation(k)
        .into_iter()
        .map(|i| i as u32 + 1)
        .collect();
    let matching: Vec<(u32, u32)> = order.chunks(2).map(|p| (p[0], p[1])).collect();
    let mut s: Vec<u32> = matching
        .iter()
        .map(|&(a, b)| if rng.coin() { a } else { b })
        .collect();
    s.sort_unstable();
    let r: Vec<u32> = (1..=k as u32).collect();
    Ok((CoverGadget::new(&r, &s)?, matching))
}
