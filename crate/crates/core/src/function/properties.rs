//! Exhaustive and sampled checks of submodularity, non-negativity,
//! monotonicity and subadditivity.

use alloc::vec::Vec;

use super::{value_table, SetFunction};
use crate::subset::{self, from_mask};
use crate::{Result, SimRng, TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckMode {
    /// Every relevant configuration; `n` must not exceed `cap`.
    Exhaustive { cap: usize },
    /// `samples` random configurations drawn from `seed`.
    Sampled { samples: usize, seed: u64 },
}

impl CheckMode {
    pub fn exhaustive() -> Self {
        CheckMode::Exhaustive {
            cap: crate::DEFAULT_CAP,
        }
    }
}

/// First violation found by a check.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `f_S(e) < f_T(e)` with `S ⊆ T`, `e ∉ T`.
    Submodularity {
        smaller: Vec<usize>,
        larger: Vec<usize>,
        element: usize,
        gain_smaller: f64,
        gain_larger: f64,
    },
    NonZeroEmpty {
        value: f64,
    },
    Negative {
        set: Vec<usize>,
        value: f64,
    },
    /// `f(S + e) < f(S)`.
    Monotonicity {
        set: Vec<usize>,
        element: usize,
        drop: f64,
    },
    /// `f(A) + f(B) < f(A ∪ B)` for disjoint `A`, `B`.
    Subadditivity {
        a: Vec<usize>,
        b: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub holds: bool,
    /// Number of inequalities examined.
    pub checked: u64,
    pub witness: Option<Witness>,
}

impl CheckReport {
    fn pass(checked: u64) -> Self {
        Self {
            holds: true,
            checked,
            witness: None,
        }
    }

    fn fail(checked: u64, witness: Witness) -> Self {
        Self {
            holds: false,
            checked,
            witness: Some(witness),
        }
    }
}

/// Diminishing returns: `f_S(e) >= f_T(e)` for `S ⊆ T`, `e ∉ T`.
///
/// Exhaustive mode checks the adjacent pairs `T = S + b`, which implies the
/// general statement by chaining along any path from `S` to `T`.
pub fn check_submodular<F: SetFunction + ?Sized>(f: &F, mode: CheckMode) -> Result<CheckReport> {
    let n = f.ground_size();
    match mode {
        CheckMode::Exhaustive { cap } => {
            let table = value_table(f, cap)?;
            let mut checked = 0;
            for s in 0..1u64 << n {
                for a in 0..n {
                    if s >> a & 1 == 1 {
                        continue;
                    }
                    for b in a + 1..n {
                        if s >> b & 1 == 1 {
                            continue;
                        }
                        checked += 2;
                        let (sa, sb, sab) = (s | 1 << a, s | 1 << b, s | 1 << a | 1 << b);
                        let lhs = table[sa as usize] + table[sb as usize];
                        let rhs = table[sab as usize] + table[s as usize];
                        if lhs < rhs - TOL {
                            return Ok(CheckReport::fail(
                                checked,
                                Witness::Submodularity {
                                    smaller: from_mask(s),
                                    larger: from_mask(sb),
                                    element: a,
                                    gain_smaller: table[sa as usize] - table[s as usize],
                                    gain_larger: table[sab as usize] - table[sb as usize],
                                },
                            ));
                        }
                    }
                }
            }
            Ok(CheckReport::pass(checked))
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = SimRng::new(seed);
            let mut checked = 0;
            if n == 0 {
                return Ok(CheckReport::pass(0));
            }
            for _ in 0..samples {
                let e = rng.below(n);
                let mut larger = Vec::new();
                let mut smaller = Vec::new();
                for x in (0..n).filter(|&x| x != e) {
                    if rng.coin() {
                        larger.push(x);
                        if rng.coin() {
                            smaller.push(x);
                        }
                    }
                }
                checked += 1;
                let gs = super::marginal(f, &smaller, e);
                let gl = super::marginal(f, &larger, e);
                if gs < gl - TOL {
                    return Ok(CheckReport::fail(
                        checked,
                        Witness::Submodularity {
                            smaller,
                            larger,
                            element: e,
                            gain_smaller: gs,
                            gain_larger: gl,
                        },
                    ));
                }
            }
            Ok(CheckReport::pass(checked))
        }
    }
}

/// `f(∅) = 0` and `f(S) >= 0`.
pub fn check_nonneg_and_zero<F: SetFunction + ?Sized>(
    f: &F,
    mode: CheckMode,
) -> Result<CheckReport> {
    let empty = f.value(&[]);
    if empty.abs() > TOL {
        return Ok(CheckReport::fail(1, Witness::NonZeroEmpty { value: empty }));
    }
    let n = f.ground_size();
    let check = |set: Vec<usize>, checked: u64| {
        let value = f.value(&set);
        (value < -TOL)
            .then_some(Witness::Negative { set, value })
            .map(|w| (checked, w))
    };
    match mode {
        CheckMode::Exhaustive { cap } => {
            subset::check_cap(n, cap)?;
            for m in 1..1u64 << n {
                if let Some((c, w)) = check(from_mask(m), m + 1) {
                    return Ok(CheckReport::fail(c, w));
                }
            }
            Ok(CheckReport::pass(1 << n))
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = SimRng::new(seed);
            for i in 0..samples {
                let set: Vec<usize> = (0..n).filter(|_| rng.coin()).collect();
                if let Some((c, w)) = check(set, i as u64 + 2) {
                    return Ok(CheckReport::fail(c, w));
                }
            }
            Ok(CheckReport::pass(samples as u64 + 1))
        }
    }
}

/// `f(S + e) >= f(S)` for all `S`, `e ∉ S`.
pub fn check_monotone<F: SetFunction + ?Sized>(f: &F, mode: CheckMode) -> Result<CheckReport> {
    let n = f.ground_size();
    match mode {
        CheckMode::Exhaustive { cap } => {
            let table = value_table(f, cap)?;
            let mut checked = 0;
            for s in 0..1u64 << n {
                for e in (0..n).filter(|&e| s >> e & 1 == 0) {
                    checked += 1;
                    let drop = table[s as usize] - table[(s | 1 << e) as usize];
                    if drop > TOL {
                        return Ok(CheckReport::fail(
                            checked,
                            Witness::Monotonicity {
                                set: from_mask(s),
                                element: e,
                                drop,
                            },
                        ));
                    }
                }
            }
            Ok(CheckReport::pass(checked))
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = SimRng::new(seed);
            if n == 0 {
                return Ok(CheckReport::pass(0));
            }
            for i in 0..samples {
                let e = rng.below(n);
                let set: Vec<usize> = (0..n).filter(|&x| x != e && rng.coin()).collect();
                let drop = -super::marginal(f, &set, e);
                if drop > TOL {
                    return Ok(CheckReport::fail(
                        i as u64 + 1,
                        Witness::Monotonicity {
                            set,
                            element: e,
                            drop,
                        },
                    ));
                }
            }
            Ok(CheckReport::pass(samples as u64))
        }
    }
}

/// `f(A) + f(B) >= f(A ∪ B)` for all disjoint `A`, `B` (exhaustive only).
pub fn check_subadditive<F: SetFunction + ?Sized>(f: &F, cap: usize) -> Result<CheckReport> {
    let n = f.ground_size();
    let table = value_table(f, cap)?;
    let full = (1u64 << n) - 1;
    let mut checked = 0;
    for a in 0..=full {
        for b in subset::submasks(full & !a) {
            checked += 1;
            if table[a as usize] + table[b as usize] < table[(a | b) as usize] - TOL {
                return Ok(CheckReport::fail(
                    checked,
                    Witness::Subadditivity {
                        a: from_mask(a),
                        b: from_mask(b),
                    },
                ));
            }
        }
    }
    Ok(CheckReport::pass(checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{CoverGadget, Coverage, CoverageMinusCost, Cut, FnFunction};
    use crate::Error;

    #[test]
    fn coverage_is_submodular() {
        let c = Coverage::new(5, vec![vec![0, 1], vec![1, 2], vec![3], vec![0, 4]], None).unwrap();
        assert!(check_submodular(&c, CheckMode::exhaustive()).unwrap().holds);
        assert!(
            check_submodular(
                &c,
                CheckMode::Sampled {
                    samples: 500,
                    seed: 1
                }
            )
            .unwrap()
            .holds
        );
    }

    #[test]
    fn square_of_cardinality_is_not_submodular() {
        let sq = FnFunction::new(3, |s: &[usize]| (s.len() * s.len()) as f64);
        let r = check_submodular(&sq, CheckMode::exhaustive()).unwrap();
        assert!(!r.holds);
        match r.witness.unwrap() {
            Witness::Submodularity {
                gain_smaller,
                gain_larger,
                ..
            } => assert!(gain_smaller < gain_larger),
            w => panic!("unexpected witness {w:?}"),
        }
        assert!(
            !check_submodular(
                &sq,
                CheckMode::Sampled {
                    samples: 200,
                    seed: 4
                }
            )
            .unwrap()
            .holds
        );
    }

    #[test]
    fn cap_is_enforced() {
        let big = Cut::complete(15);
        assert_eq!(
            check_submodular(&big, CheckMode::exhaustive()),
            Err(Error::CapExceeded { n: 15, cap: 14 })
        );
    }

    #[test]
    fn gadget_nonneg_and_monotone() {
        let g = CoverGadget::new(&[1, 2], &[2]).unwrap();
        assert!(
            check_nonneg_and_zero(&g, CheckMode::exhaustive())
                .unwrap()
                .holds
        );
        assert!(check_monotone(&g, CheckMode::exhaustive()).unwrap().holds);
    }

    #[test]
    fn triangle_cut_is_not_monotone() {
        let t = Cut::complete(3);
        let r = check_monotone(&t, CheckMode::exhaustive()).unwrap();
        assert!(!r.holds);
        assert!(matches!(r.witness, Some(Witness::Monotonicity { drop, .. }) if drop > 0.0));
    }

    #[test]
    fn zero_cost_coverage_minus_cost_is_monotone() {
        let c = Coverage::new(4, vec![vec![0], vec![1, 2], vec![2, 3]], None).unwrap();
        let f = CoverageMinusCost::new(c, vec![0.0; 3]).unwrap();
        assert!(check_monotone(&f, CheckMode::exhaustive()).unwrap().holds);
    }

    #[test]
    fn nonzero_empty_and_negative_detected() {
        let shifted = FnFunction::new(2, |_: &[usize]| 1.0);
        let r = check_nonneg_and_zero(&shifted, CheckMode::exhaustive()).unwrap();
        assert_eq!(r.witness, Some(Witness::NonZeroEmpty { value: 1.0 }));
        let neg = FnFunction::new(2, |s: &[usize]| -(s.len() as f64));
        assert!(
            !check_nonneg_and_zero(&neg, CheckMode::exhaustive())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn cut_is_subadditive() {
        assert!(check_subadditive(&Cut::complete(5), 10).unwrap().holds);
        let sq = FnFunction::new(3, |s: &[usize]| (s.len() * s.len()) as f64);
        assert!(!check_subadditive(&sq, 10).unwrap().holds);
    }
}
