use alloc::format;
use alloc::vec::Vec;

use super::{run_policy_feasible, Decision, OnlinePolicy, Stream};
use crate::constraint::IndependenceSystem;
use crate::function::SetFunction;
use crate::subset;
use crate::{Error, Result, SimRng};

/// Bucket threshold factor `ε` of the two-bucket algorithm.
pub const MATROID_EPSILON: f64 = 0.4;

/// `ceil(log2(2k))` for `k >= 1`.
pub fn ceil_log2_2k(k: usize) -> usize {
    let x = 2 * k.max(1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Thresholds `w1 / 2^i` for `i = 0..=ceil(log2 2k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGrid {
    pub w1: f64,
    pub values: Vec<f64>,
}

impl TauGrid {
    pub fn new(w1: f64, k: usize) -> Self {
        let values = (0..=ceil_log2_2k(k))
            .map(|i| w1 / (1u64 << i) as f64)
            .collect();
        Self { w1, values }
    }
}

/// Guarantee `OPT / (40 (1 + ceil(log2 2k)))` of the advice variant.
pub fn matroid_advice_bound(opt: f64, k: usize) -> f64 {
    opt / (40.0 * (1 + ceil_log2_2k(k)) as f64)
}

/// Orders `set` greedily by marginal value (lowest index on ties) and
/// returns the order with each element's marginal gain when it was added.
pub fn greedy_order<F: SetFunction + ?Sized>(f: &F, set: &[usize]) -> (Vec<usize>, Vec<f64>) {
    let mut remaining = set.to_vec();
    let mut prefix = Vec::new();
    let mut base = f.value(&prefix);
    let (mut order, mut gains) = (Vec::new(), Vec::new());
    while !remaining.is_empty() {
        let mut best = (0, f64::NEG_INFINITY);
        for (pos, &e) in remaining.iter().enumerate() {
            let g = f.value(&subset::with(&prefix, e)) - base;
            if g > best.1 {
                best = (pos, g);
            }
        }
        let e = remaining.remove(best.0);
        subset::insert(&mut prefix, e);
        base += best.1;
        order.push(e);
        gains.push(best.1);
    }
    (order, gains)
}

/// Elements of `set` whose greedy-order marginal gain is at least `tau`.
pub fn c_star_tau<F: SetFunction + ?Sized>(f: &F, set: &[usize], tau: f64) -> Vec<usize> {
    let (order, gains) = greedy_order(f, set);
    let mut out: Vec<usize> = order
        .into_iter()
        .zip(gains)
        .filter(|&(_, g)| g >= tau)
        .map(|(e, _)| e)
        .collect();
    out.sort_unstable();
    out
}

/// `Σ_i |C*_{τ_i}| τ_i` over the grid for `w1` and `k`.
pub fn tau_grid_sum<F: SetFunction + ?Sized>(f: &F, opt_set: &[usize], w1: f64, k: usize) -> f64 {
    let (_, gains) = greedy_order(f, opt_set);
    TauGrid::new(w1, k)
        .values
        .iter()
        .map(|&tau| gains.iter().filter(|&&g| g >= tau).count() as f64 * tau)
        .sum()
}

/// Two threshold buckets over a matroid: an arrival joins `S1` if its gain
/// on `S1` is at least `ετ` and `S1 + e` is independent, otherwise `S2` under
/// the same test, otherwise nothing. The output bucket is fixed by a coin
/// before the first arrival.
pub struct TwoBucketThreshold<'a, F: ?Sized, I: ?Sized> {
    f: &'a F,
    sys: &'a I,
    threshold: f64,
    buckets: [(Vec<usize>, f64); 2],
    output: usize,
    skip: usize,
}

impl<'a, F: SetFunction + ?Sized, I: IndependenceSystem + ?Sized> TwoBucketThreshold<'a, F, I> {
    pub fn new(f: &'a F, sys: &'a I, tau: f64, epsilon: f64, output_second: bool) -> Self {
        let empty = f.value(&[]);
        Self {
            f,
            sys,
            threshold: epsilon * tau,
            buckets: [(Vec::new(), empty), (Vec::new(), empty)],
            output: usize::from(output_second),
            skip: 0,
        }
    }

    /// Ignores the first `count` arrivals (used after a sampling phase).
    fn skipping(mut self, count: usize) -> Self {
        self.skip = count;
        self
    }

    pub fn buckets(&self) -> (&[usize], &[usize]) {
        (&self.buckets[0].0, &self.buckets[1].0)
    }

    fn offer(&mut self, e: usize) -> Option<usize> {
        for b in 0..2 {
            let (set, value) = &mut self.buckets[b];
            if !self.sys.can_add(set, e) {
                continue;
            }
            let with = subset::with(set, e);
            let v = self.f.value(&with);
            if v - *value >= self.threshold {
                *set = with;
                *value = v;
                return Some(b);
            }
        }
        None
    }
}

impl<F: SetFunction + ?Sized, I: IndependenceSystem + ?Sized> OnlinePolicy
    for TwoBucketThreshold<'_, F, I>
{
    fn observe(&mut self, element: usize, position: usize) -> Result<Decision> {
        if position < self.skip {
            return Ok(Decision::Reject);
        }
        Ok(if self.offer(element) == Some(self.output) {
            Decision::Accept
        } else {
            Decision::Reject
        })
    }

    fn selected(&self) -> &[usize] {
        &self.buckets[self.output].0
    }
}

/// Both buckets after one pass over `order`.
pub fn matroid_threshold_buckets<F, I>(
    f: &F,
    order: &[usize],
    sys: &I,
    tau: f64,
    epsilon: f64,
) -> (Vec<usize>, Vec<usize>)
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    let mut t = TwoBucketThreshold::new(f, sys, tau, epsilon, false);
    for &e in order {
        t.offer(e);
    }
    let [(s1, _), (s2, _)] = t.buckets;
    (s1, s2)
}

/// The two-bucket pass over `order`, returning a uniformly chosen bucket.
pub fn matroid_threshold<F, I>(
    f: &F,
    order: &[usize],
    sys: &I,
    tau: f64,
    epsilon: f64,
    rng: &mut SimRng,
) -> Vec<usize>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    let second = rng.coin();
    let (s1, s2) = matroid_threshold_buckets(f, order, sys, tau, epsilon);
    if second {
        s2
    } else {
        s1
    }
}

fn check_rank(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "matroid rank k must be at least 1".into(),
        ));
    }
    Ok(())
}

fn check_ground(n: usize, m: usize) -> Result<()> {
    if n != m {
        return Err(Error::InvalidParameter(format!(
            "function has {n} elements but the matroid has {m}"
        )));
    }
    Ok(())
}

/// Advice variant: with the true maximum singleton value `w1`, draws `τ`
/// uniformly from the [`TauGrid`] and runs the two-bucket pass on the whole
/// stream.
pub struct MatroidAdvice<'a, F: ?Sized, I: ?Sized> {
    inner: TwoBucketThreshold<'a, F, I>,
    tau: f64,
}

impl<'a, F: SetFunction + ?Sized, I: IndependenceSystem + ?Sized> MatroidAdvice<'a, F, I> {
    /// Draws the grid index, then the output bucket.
    pub fn new(f: &'a F, sys: &'a I, k: usize, w1: f64, rng: &mut SimRng) -> Result<Self> {
        check_rank(k)?;
        check_ground(f.ground_size(), sys.ground_size())?;
        let grid = TauGrid::new(w1, k);
        let tau = grid.values[rng.below(grid.values.len())];
        let inner = TwoBucketThreshold::new(f, sys, tau, MATROID_EPSILON, rng.coin());
        Ok(Self { inner, tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl<F: SetFunction + ?Sized, I: IndependenceSystem + ?Sized> OnlinePolicy
    for MatroidAdvice<'_, F, I>
{
    fn observe(&mut self, element: usize, position: usize) -> Result<Decision> {
        self.inner.observe(element, position)
    }

    fn selected(&self) -> &[usize] {
        self.inner.selected()
    }
}

pub fn matroid_advice<F, I>(
    f: &F,
    stream: &Stream,
    sys: &I,
    k: usize,
    w1: f64,
    rng: &mut SimRng,
) -> Result<Vec<usize>>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    run_policy_feasible(&mut MatroidAdvice::new(f, sys, k, w1, rng)?, stream, sys)
}

/// Secretary algorithm for a rank-`k` matroid: observes the first
/// `m ~ Bin(n, 1/2)` arrivals, sets `W` to the best singleton value among
/// them (0 for an empty sample), draws `i` uniformly from
/// `0..=2 + ceil(log2 2k)` and runs the two-bucket pass with `τ = W/2^i` on
/// the remaining arrivals.
pub struct MatroidSecretary<'a, F: ?Sized, I: ?Sized> {
    f: &'a F,
    sample: usize,
    exponent: usize,
    best: f64,
    inner: TwoBucketThreshold<'a, F, I>,
}

impl<'a, F: SetFunction + ?Sized, I: IndependenceSystem + ?Sized> MatroidSecretary<'a, F, I> {
    /// Draws `m`, then `i`, then the output bucket.
    pub fn new(f: &'a F, sys: &'a I, k: usize, rng: &mut SimRng) -> Result<Self> {
        check_rank(k)?;
        check_ground(f.ground_size(), sys.ground_size())?;
        let sample = rng.binomial(f.ground_size(), 0.5);
        let exponent = rng.below(3 + ceil_log2_2k(k));
        let inner =
            TwoBucketThreshold::new(f, sys, 0.0, MATROID_EPSILON, rng.coin()).skipping(sample);
        Ok(Self {
            f,
            sample,
            exponent,
            best: 0.0,
            inner,
        })
    }

    pub fn sample_len(&self) -> usize {
        self.sample
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }
}

impl<F: SetFunction + ?Sized, I: IndependenceSystem + ?Sized> OnlinePolicy
    for MatroidSecretary<'_, F, I>
{
    fn observe(&mut self, element: usize, position: usize) -> Result<Decision> {
        if position < self.sample {
            self.best = self.best.max(self.f.value(&[element]));
            if position + 1 == self.sample {
                let tau = self.best / (1u64 << self.exponent) as f64;
                self.inner.threshold = MATROID_EPSILON * tau;
            }
        }
        self.inner.observe(element, position)
    }

    fn selected(&self) -> &[usize] {
        self.inner.selected()
    }
}

pub fn matroid_secretary<F, I>(
    f: &F,
    stream: &Stream,
    sys: &I,
    k: usize,
    rng: &mut SimRng,
) -> Result<Vec<usize>>
where
    F: SetFunction + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    run_policy_feasible(&mut MatroidSecretary::new(f, sys, k, rng)?, stream, sys)
}
