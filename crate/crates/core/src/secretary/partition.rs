use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::dynkin::DynkinRule;
use super::{run_policy_feasible, Decision, OnlinePolicy, Stream};
use crate::constraint::{IndependenceSystem, Partition};
use crate::function::{marginal, SetFunction};
use crate::subset;
use crate::{Error, Result, SimRng};

/// Coupling mode of the partition-matroid algorithms. A and B add a
/// triggered element to the internal chain on heads, C on tails; B outputs
/// each chain element only with probability 1/2, decided at arrival.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
    C,
}

impl Mode {
    fn draw(rng: &mut SimRng) -> Self {
        match rng.below(3) {
            0 => Mode::A,
            1 => Mode::B,
            _ => Mode::C,
        }
    }

    fn takes(self, heads: bool) -> bool {
        match self {
            Mode::A | Mode::B => heads,
            Mode::C => !heads,
        }
    }
}

/// Guarantee `OPT/(3 + 6e)` of the contiguous-partition algorithm.
pub fn partition_contiguous_bound(opt: f64) -> f64 {
    opt / (3.0 + 6.0 * core::f64::consts::E)
}

fn check_ground<F: SetFunction + ?Sized>(f: &F, partition: &Partition) -> Result<()> {
    if f.ground_size() != partition.ground_size() {
        return Err(Error::InvalidParameter(format!(
            "function has {} elements but the partition has {}",
            f.ground_size(),
            partition.ground_size()
        )));
    }
    Ok(())
}

/// Chain bookkeeping shared by both partition algorithms.
struct Chain {
    mode: Mode,
    marks: SimRng,
    chain: Vec<usize>,
    selected: Vec<usize>,
}

impl Chain {
    /// Applies the coin to a triggered element; returns whether it is output.
    fn trigger(&mut self, e: usize, heads: bool) -> bool {
        if !self.mode.takes(heads) {
            return false;
        }
        subset::insert(&mut self.chain, e);
        if self.mode == Mode::B && !self.marks.coin() {
            return false;
        }
        subset::insert(&mut self.selected, e);
        true
    }
}

fn decision(accept: bool) -> Decision {
    if accept {
        Decision::Accept
    } else {
        Decision::Reject
    }
}

/// Partition-matroid secretary for streams that deliver each group as one
/// contiguous run. Within group `i` it runs Dynkin's rule on the marginal
/// values `f_{S_{i-1}}(e)` over the chain built so far, then lets the group's
/// coin decide.
pub struct PartitionContiguous<'a, F: ?Sized> {
    f: &'a F,
    partition: &'a Partition,
    coins: Vec<bool>,
    state: Chain,
    closed: Vec<bool>,
    current: Option<usize>,
    rule: DynkinRule,
}

impl<'a, F: SetFunction + ?Sized> PartitionContiguous<'a, F> {
    /// Draws the mode (unless `mode` is given), then one coin per group, then
    /// splits off the generator for mode-B marks. Two policies built from
    /// equal generators with modes A and C therefore share their coins.
    pub fn new(
        f: &'a F,
        partition: &'a Partition,
        mode: Option<Mode>,
        rng: &mut SimRng,
    ) -> Result<Self> {
        check_ground(f, partition)?;
        let mode = mode.unwrap_or_else(|| Mode::draw(rng));
        let coins = (0..partition.group_count()).map(|_| rng.coin()).collect();
        Ok(Self {
            f,
            partition,
            coins,
            state: Chain {
                mode,
                marks: rng.split(),
                chain: Vec::new(),
                selected: Vec::new(),
            },
            closed: vec![false; partition.group_count()],
            current: None,
            rule: DynkinRule::new(0),
        })
    }

    pub fn mode(&self) -> Mode {
        self.state.mode
    }

    /// Elements the coins admitted, including mode-B elements left unmarked.
    pub fn chain(&self) -> &[usize] {
        &self.state.chain
    }
}

impl<F: SetFunction + ?Sized> OnlinePolicy for PartitionContiguous<'_, F> {
    fn observe(&mut self, element: usize, position: usize) -> Result<Decision> {
        let g = self.partition.group_of(element);
        if self.current != Some(g) {
            if self.closed[g] {
                return Err(Error::ContractViolation(format!(
                    "group {g} resumed at position {position} after other groups arrived"
                )));
            }
            if let Some(prev) = self.current {
                self.closed[prev] = true;
            }
            self.current = Some(g);
            self.rule = DynkinRule::new(self.partition.groups()[g].len());
        }
        // the chain only changes when the rule fires, after which the group
        // is finished, so the current chain is the group-start chain
        let value = marginal(self.f, &self.state.chain, element);
        let fired = self.rule.offer(value);
        Ok(decision(
            fired && self.state.trigger(element, self.coins[g]),
        ))
    }

    fn selected(&self) -> &[usize] {
        &self.state.selected
    }
}

pub fn partition_contiguous_secretary<F: SetFunction + ?Sized>(
    f: &F,
    partition: &Partition,
    stream: &Stream,
    mode: Option<Mode>,
    rng: &mut SimRng,
) -> Result<Vec<usize>> {
    if !stream.is_group_contiguous(partition) {
        return Err(Error::ContractViolation(
            "stream is not group-contiguous".into(),
        ));
    }
    let mut policy = PartitionContiguous::new(f, partition, mode, rng)?;
    run_policy_feasible(&mut policy, stream, partition)
}

/// Sample length `N0 ~ Bin(n, 1/2)` followed by `k` epochs of length
/// `N_j ~ Bin(n, 1/(100k))`. Positions past `n` are truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochSchedule {
    pub sample: usize,
    pub epochs: Vec<usize>,
}

impl EpochSchedule {
    pub fn draw(n: usize, k: usize, rng: &mut SimRng) -> Self {
        let sample = rng.binomial(n, 0.5);
        let p = 1.0 / (100.0 * k.max(1) as f64);
        let epochs = (0..k).map(|_| rng.binomial(n, p)).collect();
        Self { sample, epochs }
    }

    /// Epoch index `j` (0-based) containing `position`, if any.
    pub fn epoch_of(&self, position: usize) -> Option<usize> {
        let mut start = self.sample;
        for (j, &len) in self.epochs.iter().enumerate() {
            if position < start {
                return None;
            }
            if position < start + len {
                return Some(j);
            }
            start += len;
        }
        None
    }

    /// Position at which epoch `j` starts.
    pub fn start_of(&self, j: usize) -> usize {
        self.sample + self.epochs[..j].iter().sum::<usize>()
    }
}

/// Partition-matroid secretary for uniformly random streams. After the
/// sample, epoch `j` uses valuation `f_{S_{j-1}}` (the chain at the epoch's
/// start). An arrival in epoch `j` triggers the epoch's coin when its group
/// has no chain element yet and its value beats every same-group element that
/// arrived before the epoch, re-valued under the epoch's valuation. Each
/// epoch triggers at most once; arrivals after the last epoch are ignored.
pub struct PartitionGeneral<'a, F: ?Sized> {
    f: &'a F,
    partition: &'a Partition,
    schedule: EpochSchedule,
    coins: Vec<bool>,
    state: Chain,
    arrived: Vec<(usize, usize)>,
    epoch: Option<usize>,
    epoch_base: f64,
    thresholds: Vec<Option<f64>>,
    attempted: bool,
}

impl<'a, F: SetFunction + ?Sized> PartitionGeneral<'a, F> {
    /// Draws the mode (unless given), the schedule, one coin per epoch, then
    /// splits off the generator for mode-B marks.
    pub fn new(
        f: &'a F,
        partition: &'a Partition,
        mode: Option<Mode>,
        rng: &mut SimRng,
    ) -> Result<Self> {
        check_ground(f, partition)?;
        let mode = mode.unwrap_or_else(|| Mode::draw(rng));
        let k = partition.group_count();
        let schedule = EpochSchedule::draw(f.ground_size(), k, rng);
        let coins = (0..k).map(|_| rng.coin()).collect();
        Ok(Self {
            f,
            partition,
            schedule,
            coins,
            state: Chain {
                mode,
                marks: rng.split(),
                chain: Vec::new(),
                selected: Vec::new(),
            },
            arrived: Vec::new(),
            epoch: None,
            epoch_base: 0.0,
            thresholds: vec![None; k],
            attempted: false,
        })
    }

    pub fn schedule(&self) -> &EpochSchedule {
        &self.schedule
    }

    pub fn mode(&self) -> Mode {
        self.state.mode
    }

    pub fn chain(&self) -> &[usize] {
        &self.state.chain
    }

    fn gain(&self, e: usize) -> f64 {
        self.f.value(&subset::with(&self.state.chain, e)) - self.epoch_base
    }

    /// Best epoch-valuation value among group `g` elements that arrived
    /// before the current epoch.
    fn threshold(&mut self, g: usize, epoch_start: usize) -> f64 {
        if let Some(t) = self.thresholds[g] {
            return t;
        }
        let t = self
            .arrived
            .iter()
            .filter(|&&(e, pos)| pos < epoch_start && self.partition.group_of(e) == g)
            .map(|&(e, _)| self.gain(e))
            .fold(f64::NEG_INFINITY, f64::max);
        self.thresholds[g] = Some(t);
        t
    }
}

impl<F: SetFunction + ?Sized> OnlinePolicy for PartitionGeneral<'_, F> {
    fn observe(&mut self, element: usize, position: usize) -> Result<Decision> {
        self.arrived.push((element, position));
        let Some(j) = self.schedule.epoch_of(position) else {
            return Ok(Decision::Reject);
        };
        if self.epoch != Some(j) {
            self.epoch = Some(j);
            self.epoch_base = self.f.value(&self.state.chain);
            self.thresholds.iter_mut().for_each(|t| *t = None);
            self.attempted = false;
        }
        let g = self.partition.group_of(element);
        if self.attempted
            || self
                .state
                .chain
                .iter()
                .any(|&x| self.partition.group_of(x) == g)
        {
            return Ok(Decision::Reject);
        }
        let start = self.schedule.start_of(j);
        if self.gain(element) > self.threshold(g, start) {
            self.attempted = true;
            return Ok(decision(self.state.trigger(element, self.coins[j])));
        }
        Ok(Decision::Reject)
    }

    fn selected(&self) -> &[usize] {
        &self.state.selected
    }
}

pub fn partition_general_secretary<F: SetFunction + ?Sized>(
    f: &F,
    partition: &Partition,
    stream: &Stream,
    mode: Option<Mode>,
    rng: &mut SimRng,
) -> Result<Vec<usize>> {
    let mut policy = PartitionGeneral::new(f, partition, mode, rng)?;
    run_policy_feasible(&mut policy, stream, partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Modular;
    use crate::secretary::run_policy;

    #[test]
    fn rejects_non_contiguous_streams() {
        let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let f = Modular::cardinality(4);
        let s = Stream::from_order(vec![0, 2, 1, 3]).unwrap();
        let mut rng = SimRng::new(0);
        assert!(matches!(
            partition_contiguous_secretary(&f, &p, &s, None, &mut rng),
            Err(Error::ContractViolation(_))
        ));
        let mut policy = PartitionContiguous::new(&f, &p, Some(Mode::A), &mut rng).unwrap();
        assert!(run_policy(&mut policy, &s).is_err());
    }

    #[test]
    fn mode_a_is_feasible() {
        let p = Partition::new(6, vec![vec![0, 1, 2], vec![3, 4], vec![5]]).unwrap();
        let f = Modular::new(vec![1.0, 3.0, 2.0, 5.0, 4.0, 1.0]);
        for seed in 0..50 {
            let mut rng = SimRng::new(seed);
            let s = Stream::group_contiguous(&p, &mut rng);
            let out = partition_contiguous_secretary(&f, &p, &s, Some(Mode::A), &mut rng).unwrap();
            assert!(p.is_independent(&out));
        }
    }

    #[test]
    fn mode_b_output_is_inside_chain() {
        let p = Partition::new(4, vec![vec![0], vec![1], vec![2], vec![3]]).unwrap();
        let f = Modular::cardinality(4);
        let mut saw_gap = false;
        for seed in 0..50 {
            let mut rng = SimRng::new(seed);
            let s = Stream::group_contiguous(&p, &mut rng);
            let mut policy = PartitionContiguous::new(&f, &p, Some(Mode::B), &mut rng).unwrap();
            let out = run_policy(&mut policy, &s).unwrap();
            assert!(subset::is_subset(&out, policy.chain()));
            saw_gap |= out.len() < policy.chain().len();
        }
        assert!(saw_gap);
    }

    #[test]
    fn schedule_positions() {
        let s = EpochSchedule {
            sample: 3,
            epochs: vec![2, 0, 1],
        };
        let got: Vec<Option<usize>> = (0..8).map(|p| s.epoch_of(p)).collect();
        assert_eq!(
            got,
            vec![None, None, None, Some(0), Some(0), Some(2), None, None]
        );
        assert_eq!(s.start_of(2), 5);
    }

    #[test]
    fn short_stream_selects_nothing() {
        let p = Partition::new(3, vec![vec![0, 1, 2]]).unwrap();
        let f = Modular::cardinality(3);
        for seed in 0..40 {
            let mut rng = SimRng::new(seed);
            let s = Stream::uniform(3, &mut rng);
            let mut policy = PartitionGeneral::new(&f, &p, None, &mut rng).unwrap();
            let covered = policy.schedule().sample >= 3;
            let out = run_policy(&mut policy, &s).unwrap();
            if covered {
                assert!(out.is_empty());
            }
            assert!(out.len() <= 1);
        }
    }
}
