use alloc::boxed::Box;
use alloc::vec::Vec;

use super::dynkin::DynkinRule;
use super::{run_policy, Decision, OnlinePolicy, Stream};
use crate::function::SetFunction;
use crate::offline::submod_max_cardinality;
use crate::subset;
use crate::unconstrained::FmvBackend;
use crate::{Error, Result, SimRng};

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "cardinality bound k must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Accepts an arriving element iff fewer than `k` are selected and its
/// marginal gain on the selection is at least `tau`.
pub struct ThresholdPolicy<'a, F: ?Sized> {
    f: &'a F,
    tau: f64,
    k: usize,
    selected: Vec<usize>,
    value: f64,
}

impl<'a, F: SetFunction + ?Sized> ThresholdPolicy<'a, F> {
    pub fn new(f: &'a F, tau: f64, k: usize) -> Result<Self> {
        check_k(k)?;
        if tau.is_nan() || tau < 0.0 {
            return Err(Error::InvalidParameter(
                "threshold must be non-negative".into(),
            ));
        }
        Ok(Self {
            f,
            tau,
            k,
            selected: Vec::new(),
            value: f.value(&[]),
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Shared step of every threshold bucket: admits `e` into `set` when the
/// bucket has room and the gain clears `threshold`.
fn admit<F: SetFunction + ?Sized>(
    f: &F,
    set: &mut Vec<usize>,
    value: &mut f64,
    e: usize,
    threshold: f64,
) -> bool {
    let with = subset::with(set, e);
    let v = f.value(&with);
    if v - *value >= threshold {
        *set = with;
        *value = v;
        true
    } else {
        false
    }
}

impl<F: SetFunction + ?Sized> OnlinePolicy for ThresholdPolicy<'_, F> {
    fn observe(&mut self, element: usize, _position: usize) -> Result<Decision> {
        if self.selected.len() < self.k
            && admit(
                self.f,
                &mut self.selected,
                &mut self.value,
                element,
                self.tau,
            )
        {
            return Ok(Decision::Accept);
        }
        Ok(Decision::Reject)
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }
}

pub fn threshold_online<F: SetFunction + ?Sized>(
    f: &F,
    stream: &Stream,
    tau: f64,
    k: usize,
) -> Result<Vec<usize>> {
    run_policy(&mut ThresholdPolicy::new(f, tau, k)?, stream)
}

/// Which of the three coupled threshold sets the advice algorithm outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdviceBranch {
    S1,
    /// Each element accepted into `S1` is kept with probability 1/2.
    S1Refined,
    /// Threshold set over the elements `S1` did not take.
    S2,
}

/// Online cardinality algorithm given an estimate `Z` of the optimum: runs
/// threshold passes with `τ = Z/(7k)` and outputs one of `S1`, `S1'`, `S2`
/// chosen uniformly before the first arrival.
pub struct AdviceCardinality<'a, F: ?Sized> {
    f: &'a F,
    k: usize,
    tau: f64,
    branch: AdviceBranch,
    rng: SimRng,
    s1: Vec<usize>,
    v1: f64,
    s2: Vec<usize>,
    v2: f64,
    selected: Vec<usize>,
}

impl<'a, F: SetFunction + ?Sized> AdviceCardinality<'a, F> {
    pub fn new(f: &'a F, k: usize, z: f64, rng: &mut SimRng) -> Result<Self> {
        check_k(k)?;
        if z.is_nan() || z < 0.0 {
            return Err(Error::InvalidParameter(
                "advice value must be non-negative".into(),
            ));
        }
        let branch = match rng.below(3) {
            0 => AdviceBranch::S1,
            1 => AdviceBranch::S1Refined,
            _ => AdviceBranch::S2,
        };
        Ok(Self::with_branch(f, k, z, branch, rng.split()))
    }

    /// Fixes the output branch; `rng` supplies the `S1'` coins.
    pub fn with_branch(f: &'a F, k: usize, z: f64, branch: AdviceBranch, rng: SimRng) -> Self {
        let empty = f.value(&[]);
        Self {
            f,
            k,
            tau: z / (7.0 * k as f64),
            branch,
            rng,
            s1: Vec::new(),
            v1: empty,
            s2: Vec::new(),
            v2: empty,
            selected: Vec::new(),
        }
    }

    pub fn branch(&self) -> AdviceBranch {
        self.branch
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl<F: SetFunction + ?Sized> OnlinePolicy for AdviceCardinality<'_, F> {
    fn observe(&mut self, element: usize, _position: usize) -> Result<Decision> {
        let into_s1 =
            self.s1.len() < self.k && admit(self.f, &mut self.s1, &mut self.v1, element, self.tau);
        let accept = match self.branch {
            AdviceBranch::S1 => into_s1,
            AdviceBranch::S1Refined => into_s1 && self.rng.coin(),
            AdviceBranch::S2 => {
                !into_s1
                    && self.s2.len() < self.k
                    && admit(self.f, &mut self.s2, &mut self.v2, element, self.tau)
            }
        };
        if accept {
            subset::insert(&mut self.selected, element);
            Ok(Decision::Accept)
        } else {
            Ok(Decision::Reject)
        }
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }
}

pub fn advice_online_cardinality<F: SetFunction + ?Sized>(
    f: &F,
    stream: &Stream,
    k: usize,
    z: f64,
    rng: &mut SimRng,
) -> Result<Vec<usize>> {
    run_policy(&mut AdviceCardinality::new(f, k, z, rng)?, stream)
}

/// Expected-value guarantee `Z/21` of the advice algorithm when `Z <= OPT`.
pub fn advice_cardinality_bound(z: f64) -> f64 {
    z / 21.0
}

/// Guarantee `OPT/1417` of [`SubmodularSecretaries`].
pub fn submodular_secretaries_bound(opt: f64) -> f64 {
    opt / 1417.0
}

enum Phase<'a, F: ?Sized> {
    Dynkin(DynkinRule),
    Sampling { m: usize, sample: Vec<usize> },
    Advice(Box<AdviceCardinality<'a, F>>),
}

/// Secretary algorithm for a cardinality constraint. A fair coin picks
/// between Dynkin's rule on singleton values and a two-phase run: the first
/// `m ~ Bin(n, 1/2)` arrivals are observed, the offline two-pass algorithm on
/// them yields `A1`, and the advice algorithm with `Z = f(A1)` handles the
/// rest.
pub struct SubmodularSecretaries<'a, F: ?Sized> {
    f: &'a F,
    k: usize,
    backend: FmvBackend,
    rng: SimRng,
    phase: Phase<'a, F>,
    selected: Vec<usize>,
}

impl<'a, F: SetFunction + ?Sized> SubmodularSecretaries<'a, F> {
    pub fn new(f: &'a F, k: usize, backend: FmvBackend, rng: &mut SimRng) -> Result<Self> {
        check_k(k)?;
        let n = f.ground_size();
        let phase = if rng.coin() {
            Phase::Dynkin(DynkinRule::new(n))
        } else {
            Phase::Sampling {
                m: rng.binomial(n, 0.5),
                sample: Vec::new(),
            }
        };
        Ok(Self {
            f,
            k,
            backend,
            rng: rng.split(),
            phase,
            selected: Vec::new(),
        })
    }

    /// Whether the coin chose the Dynkin branch.
    pub fn is_dynkin(&self) -> bool {
        matches!(self.phase, Phase::Dynkin(_))
    }
}

impl<F: SetFunction + ?Sized> OnlinePolicy for SubmodularSecretaries<'_, F> {
    fn observe(&mut self, element: usize, position: usize) -> Result<Decision> {
        let accept = match &mut self.phase {
            Phase::Dynkin(rule) => rule.offer(self.f.value(&[element])),
            Phase::Sampling { m, sample } if position < *m => {
                subset::insert(sample, element);
                false
            }
            Phase::Sampling { sample, .. } => {
                let a1 =
                    submod_max_cardinality(self.f, sample, self.k, self.backend, &mut self.rng)?;
                let mut advice = AdviceCardinality::new(self.f, self.k, a1.value, &mut self.rng)?;
                let decision = advice.observe(element, position)?;
                self.phase = Phase::Advice(Box::new(advice));
                decision == Decision::Accept
            }
            Phase::Advice(advice) => advice.observe(element, position)? == Decision::Accept,
        };
        if accept {
            subset::insert(&mut self.selected, element);
            Ok(Decision::Accept)
        } else {
            Ok(Decision::Reject)
        }
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }
}

pub fn submodular_secretaries<F: SetFunction + ?Sized>(
    f: &F,
    stream: &Stream,
    k: usize,
    backend: FmvBackend,
    rng: &mut SimRng,
) -> Result<Vec<usize>> {
    run_policy(&mut SubmodularSecretaries::new(f, k, backend, rng)?, stream)
}
