use alloc::vec::Vec;

use super::{run_policy, Decision, OnlinePolicy, Stream};
use crate::Result;

/// `floor(len / e)`.
pub fn dynkin_sample_size(len: usize) -> usize {
    libm::floor(len as f64 / core::f64::consts::E) as usize
}

/// The classical secretary rule over a sequence of `len` values: observe the
/// first `floor(len/e)`, then take the first value strictly greater than
/// every sampled one. With an empty sample the first value is taken.
#[derive(Debug, Clone)]
pub struct DynkinRule {
    sample: usize,
    seen: usize,
    best: f64,
    done: bool,
}

impl DynkinRule {
    pub fn new(len: usize) -> Self {
        Self {
            sample: dynkin_sample_size(len),
            seen: 0,
            best: f64::NEG_INFINITY,
            done: false,
        }
    }

    /// Feeds the next value; `true` exactly once, for the selected value.
    pub fn offer(&mut self, value: f64) -> bool {
        self.seen += 1;
        if self.done {
            return false;
        }
        if self.seen <= self.sample {
            self.best = self.best.max(value);
            return false;
        }
        if value > self.best {
            self.done = true;
            return true;
        }
        false
    }

    pub fn is_done(&self) -> bool {
        self.done
    }
}

/// [`DynkinRule`] over a fixed valuation of the elements.
pub struct DynkinPolicy<V> {
    valuation: V,
    rule: DynkinRule,
    selected: Vec<usize>,
}

impl<V: FnMut(usize) -> f64> DynkinPolicy<V> {
    pub fn new(n: usize, valuation: V) -> Self {
        Self {
            valuation,
            rule: DynkinRule::new(n),
            selected: Vec::new(),
        }
    }
}

impl<V: FnMut(usize) -> f64> OnlinePolicy for DynkinPolicy<V> {
    fn observe(&mut self, element: usize, _position: usize) -> Result<Decision> {
        let value = (self.valuation)(element);
        if self.rule.offer(value) {
            self.selected.push(element);
            Ok(Decision::Accept)
        } else {
            Ok(Decision::Reject)
        }
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }
}

/// Runs Dynkin's rule on `stream` and returns the selected element, if any.
pub fn dynkin(stream: &Stream, valuation: impl FnMut(usize) -> f64) -> Result<Option<usize>> {
    let mut policy = DynkinPolicy::new(stream.len(), valuation);
    Ok(run_policy(&mut policy, stream)?.first().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_element_is_taken() {
        let s = Stream::from_order(vec![0]).unwrap();
        assert_eq!(dynkin(&s, |_| 1.0).unwrap(), Some(0));
    }

    #[test]
    fn strict_rule_on_ties() {
        let s = Stream::from_order(vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(dynkin(&s, |_| 1.0).unwrap(), None);
    }

    #[test]
    fn hand_trace() {
        // sample = floor(5/e) = 1: value 3 is sampled, 2 skipped, 4 taken
        let values = [3.0, 2.0, 4.0, 5.0, 1.0];
        let s = Stream::from_order(vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(dynkin(&s, |e| values[e]).unwrap(), Some(2));
    }
}
