//! Canonical subset representation.
//!
//! A subset is a strictly ascending slice of element indices. Exhaustive
//! routines work on packed `u64` masks internally (so they need `n <= 63`);
//! the conversion helpers below translate between the two views.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

/// Sorts and deduplicates `elements`, rejecting anything outside `0..n`.
pub fn canonical(elements: &[usize], n: usize) -> Result<Vec<usize>> {
    if let Some(&element) = elements.iter().find(|&&e| e >= n) {
        return Err(Error::InvalidSubset { element, n });
    }
    let mut out = elements.to_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn is_canonical(set: &[usize]) -> bool {
    set.windows(2).all(|w| w[0] < w[1])
}

pub fn contains(set: &[usize], e: usize) -> bool {
    set.binary_search(&e).is_ok()
}

/// `set + e`, keeping the result canonical.
pub fn with(set: &[usize], e: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(set.len() + 1);
    match set.binary_search(&e) {
        Ok(_) => out.extend_from_slice(set),
        Err(pos) => {
            out.extend_from_slice(&set[..pos]);
            out.push(e);
            out.extend_from_slice(&set[pos..]);
        }
    }
    out
}

/// `set - e`.
pub fn without(set: &[usize], e: usize) -> Vec<usize> {
    set.iter().copied().filter(|&x| x != e).collect()
}

pub fn insert(set: &mut Vec<usize>, e: usize) {
    if let Err(pos) = set.binary_search(&e) {
        set.insert(pos, e);
    }
}

pub fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|&x| contains(b, x)).collect()
}

pub fn difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|&x| !contains(b, x)).collect()
}

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|&x| contains(b, x))
}

/// Tie-break order on canonical index lists: fewer elements first, then
/// lexicographic.
pub fn shortlex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn to_mask(set: &[usize]) -> u64 {
    set.iter().fold(0u64, |m, &e| m | (1u64 << e))
}

pub fn from_mask(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Maps a mask over positions of `ground` to the corresponding elements.
pub fn from_local_mask(ground: &[usize], mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(ground[m.trailing_zeros() as usize]);
        m &= m - 1;
    }
    out
}

/// Ensures `n` can be enumerated with masks and does not exceed `cap`.
pub fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= 63 {
        return Err(Error::CapExceeded {
            n,
            cap: cap.min(62),
        });
    }
    Ok(())
}

/// Iterates all submasks of `mask`, including `mask` itself and `0`, in
/// decreasing numeric order.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    core::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// All `k`-element subsets of `ground`, in lexicographic order.
pub fn combinations(ground: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > ground.len() {
        return out;
    }
    let len = ground.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| ground[i]).collect());
        // rightmost position that can still advance
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + len - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
