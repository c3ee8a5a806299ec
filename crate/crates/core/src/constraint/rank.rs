use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::IndependenceSystem;
use crate::subset::{self, from_local_mask, from_mask};
use crate::Result;

/// A non-negative rational `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    pub num: usize,
    pub den: usize,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Smallest integer `p` with `num / den <= p`.
    pub fn ceil(&self) -> usize {
        self.num.div_ceil(self.den)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Independence of every subset of the ground set, plus for each independent
/// set the mask of elements that can extend it.
pub struct IndependenceTable {
    n: usize,
    independent: Vec<bool>,
    extensions: Vec<u64>,
}

impl IndependenceTable {
    pub fn build<I: IndependenceSystem + ?Sized>(sys: &I, cap: usize) -> Result<Self> {
        let n = sys.ground_size();
        subset::check_cap(n, cap)?;
        let independent: Vec<bool> = (0..1u64 << n)
            .map(|m| sys.is_independent(&from_mask(m)))
            .collect();
        let extensions = (0..1u64 << n)
            .map(|m| {
                if !independent[m as usize] {
                    return 0;
                }
                (0..n)
                    .filter(|&e| m >> e & 1 == 0 && independent[(m | 1 << e) as usize])
                    .fold(0u64, |acc, e| acc | 1 << e)
            })
            .collect();
        Ok(Self {
            n,
            independent,
            extensions,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        self.independent[mask as usize]
    }

    /// `T` is a basis of `S` iff it is an independent subset of `S` that no
    /// element of `S` can extend.
    pub fn is_basis_of(&self, t: u64, s: u64) -> bool {
        t & !s == 0 && self.independent[t as usize] && self.extensions[t as usize] & s == 0
    }

    /// `(r(S), ρ(S))` together with one smallest and one largest basis.
    pub fn ranks(&self, s: u64) -> (usize, usize, u64, u64) {
        let (mut rank, mut lower) = (0, usize::MAX);
        let (mut small, mut large) = (0, 0);
        for t in subset::submasks(s) {
            if !self.is_basis_of(t, s) {
                continue;
            }
            let size = t.count_ones() as usize;
            if size >= rank {
                rank = size;
                large = t;
            }
            if size < lower {
                lower = size;
                small = t;
            }
        }
        (rank, lower, small, large)
    }
}

/// Rank `r(S)` (largest basis of `S`) and lower rank `ρ(S)` (smallest basis),
/// by enumerating the subsets of `S`; `|S|` must not exceed `cap`.
pub fn rank_and_lower_rank<I: IndependenceSystem + ?Sized>(
    sys: &I,
    set: &[usize],
    cap: usize,
) -> Result<(usize, usize)> {
    let set = subset::canonical(set, sys.ground_size())?;
    subset::check_cap(set.len(), cap)?;
    let k = set.len();
    let full = (1u64 << k) - 1;
    let independent: Vec<bool> = (0..=full)
        .map(|m| sys.is_independent(&from_local_mask(&set, m)))
        .collect();
    let mut rank = 0;
    let mut lower = usize::MAX;
    for t in 0..=full {
        if !independent[t as usize] {
            continue;
        }
        let maximal = (0..k).all(|e| t >> e & 1 == 1 || !independent[(t | 1 << e) as usize]);
        if maximal {
            let size = t.count_ones() as usize;
            rank = rank.max(size);
            lower = lower.min(size);
        }
    }
    Ok((rank, lower))
}

/// Exact `max_S r(S)/ρ(S)` over all `S` with `ρ(S) > 0`. Systems where every
/// `S` has `ρ(S) = 0` (only loops) report `1/1`.
pub fn p_parameter<I: IndependenceSystem + ?Sized>(sys: &I, cap: usize) -> Result<Ratio> {
    let table = IndependenceTable::build(sys, cap)?;
    let mut best = Ratio { num: 1, den: 1 };
    for s in 1..1u64 << table.n {
        let (r, rho, _, _) = table.ranks(s);
        if rho > 0 {
            best = best.max(Ratio { num: r, den: rho });
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomWitness {
    EmptyDependent,
    /// `set` is independent but `set - removed` is not.
    NotDownwardClosed {
        set: Vec<usize>,
        removed: usize,
    },
    /// `|smaller| < |larger|`, both independent, and no `e ∈ larger \ smaller`
    /// keeps `smaller + e` independent.
    Exchange {
        smaller: Vec<usize>,
        larger: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub holds: bool,
    pub witness: Option<AxiomWitness>,
}

impl AxiomReport {
    fn result(witness: Option<AxiomWitness>) -> Self {
        Self {
            holds: witness.is_none(),
            witness,
        }
    }
}

fn downward_witness(table: &IndependenceTable) -> Option<AxiomWitness> {
    if !table.is_independent(0) {
        return Some(AxiomWitness::EmptyDependent);
    }
    for m in 1..1u64 << table.n {
        if !table.is_independent(m) {
            continue;
        }
        let mut rest = m;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !table.is_independent(m & !(1 << e)) {
                return Some(AxiomWitness::NotDownwardClosed {
                    set: from_mask(m),
                    removed: e,
                });
            }
        }
    }
    None
}

/// `∅` is independent and independence is closed under taking subsets.
pub fn check_downward_closed<I: IndependenceSystem + ?Sized>(
    sys: &I,
    cap: usize,
) -> Result<AxiomReport> {
    let table = IndependenceTable::build(sys, cap)?;
    Ok(AxiomReport::result(downward_witness(&table)))
}

/// Non-emptiness, downward closure and the exchange axiom.
///
/// For a downward-closed family, exchange holds iff every `S` has all its
/// bases of one size; when some `S` has bases of different sizes, its smallest
/// and largest bases form an exchange witness.
pub fn matroid_axiom_check<I: IndependenceSystem + ?Sized>(
    sys: &I,
    cap: usize,
) -> Result<AxiomReport> {
    let table = IndependenceTable::build(sys, cap)?;
    if let Some(w) = downward_witness(&table) {
        return Ok(AxiomReport::result(Some(w)));
    }
    for s in 1..1u64 << table.n {
        let (r, rho, small, large) = table.ranks(s);
        if r != rho {
            return Ok(AxiomReport::result(Some(AxiomWitness::Exchange {
                smaller: from_mask(small),
                larger: from_mask(large),
            })));
        }
    }
    Ok(AxiomReport::result(None))
}
