//! Set functions, the counting value oracle, and the restriction operator.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::subset;
use crate::Result;

mod families;
pub mod generate;
pub mod properties;

pub use families::{CoverGadget, Coverage, CoverageMinusCost, Cut, GadgetElement, Modular};

/// A real-valued set function over the ground set `0..ground_size()`.
///
/// Implementations may assume `set` is canonical (strictly ascending, in
/// range); [`evaluate`] is the validating entry point.
pub trait SetFunction {
    fn ground_size(&self) -> usize;
    fn value(&self, set: &[usize]) -> f64;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for alloc::boxed::Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }
}

/// Wraps a set function and counts every evaluation.
///
/// The counter is atomic so a shared oracle can serve concurrent readers.
#[derive(Debug)]
pub struct ValueOracle<F> {
    func: F,
    queries: AtomicU64,
}

impl<F: SetFunction> ValueOracle<F> {
    pub fn new(func: F) -> Self {
        Self {
            func,
            queries: AtomicU64::new(0),
        }
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_count(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    pub fn inner(&self) -> &F {
        &self.func
    }

    pub fn into_inner(self) -> F {
        self.func
    }
}

impl<F: SetFunction> SetFunction for ValueOracle<F> {
    fn ground_size(&self) -> usize {
        self.func.ground_size()
    }

    fn value(&self, set: &[usize]) -> f64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.func.value(set)
    }
}

/// Adapts a closure into a [`SetFunction`]; handy for ad-hoc test functions.
pub struct FnFunction<G> {
    n: usize,
    g: G,
}

impl<G: Fn(&[usize]) -> f64> FnFunction<G> {
    pub fn new(n: usize, g: G) -> Self {
        Self { n, g }
    }
}

impl<G: Fn(&[usize]) -> f64> SetFunction for FnFunction<G> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value(&self, set: &[usize]) -> f64 {
        (self.g)(set)
    }
}

/// Evaluates `f` on an arbitrary index list, canonicalizing it first.
pub fn evaluate<F: SetFunction + ?Sized>(f: &F, set: &[usize]) -> Result<f64> {
    let set = subset::canonical(set, f.ground_size())?;
    Ok(f.value(&set))
}

/// `f(S + e) - f(S)`; zero when `e` is already in `S`.
pub fn marginal<F: SetFunction + ?Sized>(f: &F, set: &[usize], e: usize) -> f64 {
    if subset::contains(set, e) {
        return 0.0;
    }
    f.value(&subset::with(set, e)) - f.value(set)
}

/// `f_S(A) = f(S ∪ A) - f(S)`.
#[derive(Debug, Clone)]
pub struct Restricted<F> {
    base: F,
    pinned: Vec<usize>,
    pinned_value: f64,
}

impl<F: SetFunction> Restricted<F> {
    pub fn pinned(&self) -> &[usize] {
        &self.pinned
    }
}

impl<F: SetFunction> SetFunction for Restricted<F> {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn value(&self, set: &[usize]) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        self.base.value(&subset::union(&self.pinned, set)) - self.pinned_value
    }
}

/// Builds `f_S`. `pinned` is canonicalized; out-of-range indices are an error.
pub fn restrict<F: SetFunction>(f: F, pinned: &[usize]) -> Result<Restricted<F>> {
    let pinned = subset::canonical(pinned, f.ground_size())?;
    let pinned_value = f.value(&pinned);
    Ok(Restricted {
        base: f,
        pinned,
        pinned_value,
    })
}

/// Full value table `f(mask)` for every mask over `0..n`; `n` must fit under `cap`.
pub fn value_table<F: SetFunction + ?Sized>(f: &F, cap: usize) -> Result<Vec<f64>> {
    let n = f.ground_size();
    subset::check_cap(n, cap)?;
    Ok((0..1u64 << n)
        .map(|m| f.value(&subset::from_mask(m)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn gadget() -> CoverGadget {
        CoverGadget::new(&[1, 2], &[2]).unwrap()
    }

    #[test]
    fn evaluate_gadget_and_empty() {
        let g = gadget();
        // elements: 0 = 1_B, 1 = 2_B, 2 = 2_TB
        assert_eq!(evaluate(&g, &[0, 2]).unwrap(), 3.0);
        assert_eq!(evaluate(&g, &[]).unwrap(), 0.0);
        assert_eq!(
            evaluate(&g, &[5]),
            Err(Error::InvalidSubset { element: 5, n: 3 })
        );
    }

    #[test]
    fn evaluate_small_coverage() {
        let c = Coverage::new(4, vec![vec![1, 2], vec![2, 3]], None).unwrap();
        assert_eq!(evaluate(&c, &[0, 1]).unwrap(), 3.0);
    }

    #[test]
    fn query_counter_counts_each_eval() {
        let o = ValueOracle::new(gadget());
        assert_eq!(o.query_count(), 0);
        evaluate(&o, &[0]).unwrap();
        evaluate(&o, &[0, 1]).unwrap();
        assert_eq!(o.query_count(), 2);
        marginal(&o, &[0], 1);
        assert_eq!(o.query_count(), 4);
    }

    #[test]
    fn marginal_cases() {
        let cut = Cut::new(2, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(marginal(&cut, &[], 0), 1.0);
        assert_eq!(marginal(&cut, &[0], 0), 0.0);
        let g = gadget();
        assert_eq!(marginal(&g, &[2], 1), 0.0);
    }

    #[test]
    fn restriction() {
        let g = gadget();
        let r0 = restrict(&g, &[]).unwrap();
        for m in 0..8u64 {
            let s = subset::from_mask(m);
            assert_eq!(r0.value(&s), g.value(&s));
        }
        let r = restrict(&g, &[2]).unwrap();
        assert_eq!(r.value(&[0]), 1.0);
        assert_eq!(r.value(&[]), 0.0);
    }
}
