//! Random-order online algorithms. Elements of `0..n` arrive one at a time
//! as a [`Stream`]; an [`OnlinePolicy`] answers each arrival with an
//! irrevocable [`Decision`].
//!
//! Every policy knows `n` and its own parameters up front and only evaluates
//! `f` on elements that have already arrived.

use alloc::format;
use alloc::vec::Vec;

use crate::constraint::{IndependenceSystem, Partition};
use crate::subset;
use crate::{Error, Result, SimRng};

mod cardinality;
mod dynkin;
mod matroid;
mod partition;

pub use cardinality::{
    advice_cardinality_bound, advice_online_cardinality, submodular_secretaries,
    submodular_secretaries_bound, threshold_online, AdviceBranch, AdviceCardinality,
    SubmodularSecretaries, ThresholdPolicy,
};
pub use dynkin::{dynkin, dynkin_sample_size, DynkinPolicy, DynkinRule};
pub use matroid::{
    c_star_tau, ceil_log2_2k, greedy_order, matroid_advice, matroid_advice_bound,
    matroid_secretary, matroid_threshold, matroid_threshold_buckets, tau_grid_sum, MatroidAdvice,
    MatroidSecretary, TauGrid, TwoBucketThreshold, MATROID_EPSILON,
};
pub use partition::{
    partition_contiguous_bound, partition_contiguous_secretary, partition_general_secretary,
    EpochSchedule, Mode, PartitionContiguous, PartitionGeneral,
};

/// An arrival order: a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    order: Vec<usize>,
}

impl Stream {
    /// Uniformly random order.
    pub fn uniform(n: usize, rng: &mut SimRng) -> Self {
        Self {
            order: rng.permutation(n),
        }
    }

    /// `order` must be a permutation of `0..order.len()`.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = alloc::vec![false; n];
        for &e in &order {
            if e >= n {
                return Err(Error::InvalidSubset { element: e, n });
            }
            if core::mem::replace(&mut seen[e], true) {
                return Err(Error::InvalidParameter(format!(
                    "element {e} appears twice in the arrival order"
                )));
            }
        }
        Ok(Self { order })
    }

    /// Groups in uniformly random order, each group contiguous and internally
    /// shuffled.
    pub fn group_contiguous(partition: &Partition, rng: &mut SimRng) -> Self {
        let mut groups: Vec<Vec<usize>> = partition.groups().to_vec();
        rng.shuffle(&mut groups);
        let mut order = Vec::with_capacity(partition.ground_size());
        for mut g in groups {
            rng.shuffle(&mut g);
            order.extend(g);
        }
        Self { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Whether every group of `partition` arrives as one contiguous run.
    pub fn is_group_contiguous(&self, partition: &Partition) -> bool {
        let mut closed = alloc::vec![false; partition.group_count()];
        let mut current = None;
        for &e in &self.order {
            let g = partition.group_of(e);
            if current != Some(g) {
                if closed[g] {
                    return false;
                }
                if let Some(prev) = current {
                    closed[prev] = true;
                }
                current = Some(g);
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

pub trait OnlinePolicy {
    /// Called once per arrival, in stream order.
    fn observe(&mut self, element: usize, position: usize) -> Result<Decision>;

    /// Accepted elements so far, canonical.
    fn selected(&self) -> &[usize];
}

/// Feeds `stream` to `policy`, checking after every arrival that an accept
/// added exactly the arriving element and a reject changed nothing.
pub fn run_policy<P: OnlinePolicy + ?Sized>(policy: &mut P, stream: &Stream) -> Result<Vec<usize>> {
    drive(policy, stream, |_| true)
}

/// [`run_policy`] that also requires the selection to stay independent in
/// `sys` after every arrival.
pub fn run_policy_feasible<P, I>(policy: &mut P, stream: &Stream, sys: &I) -> Result<Vec<usize>>
where
    P: OnlinePolicy + ?Sized,
    I: IndependenceSystem + ?Sized,
{
    drive(policy, stream, |s| sys.is_independent(s))
}

fn drive<P: OnlinePolicy + ?Sized>(
    policy: &mut P,
    stream: &Stream,
    feasible: impl Fn(&[usize]) -> bool,
) -> Result<Vec<usize>> {
    for (position, &e) in stream.order().iter().enumerate() {
        let before = policy.selected().to_vec();
        let decision = policy.observe(e, position)?;
        let after = policy.selected();
        let consistent = match decision {
            Decision::Accept => !subset::contains(&before, e) && after == subset::with(&before, e),
            Decision::Reject => after == before.as_slice(),
        };
        if !consistent {
            return Err(Error::ContractViolation(format!(
                "selection changed inconsistently with {decision:?} of element {e} at position {position}"
            )));
        }
        if !feasible(after) {
            return Err(Error::ContractViolation(format!(
                "selection became infeasible after accepting element {e}"
            )));
        }
    }
    Ok(policy.selected().to_vec())
}

/// Sample mean and standard error of per-trial values.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarlo {
    pub mean: f64,
    pub stderr: f64,
    pub values: Vec<f64>,
}

impl MonteCarlo {
    /// Standard error uses the unbiased sample variance; it is 0 for one trial.
    pub fn from_values(values: Vec<f64>) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let stderr = if values.len() < 2 {
            0.0
        } else {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            libm::sqrt(var / n)
        };
        Self {
            mean,
            stderr,
            values,
        }
    }
}

/// Runs `trial` for `t = 0..trials` with `SimRng::derive(seed, t)`.
pub fn monte_carlo(
    trials: usize,
    seed: u64,
    mut trial: impl FnMut(&mut SimRng) -> Result<f64>,
) -> Result<MonteCarlo> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "at least one trial is required".into(),
        ));
    }
    let values = (0..trials as u64)
        .map(|t| trial(&mut SimRng::derive(seed, t)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(MonteCarlo::from_values(values))
}
