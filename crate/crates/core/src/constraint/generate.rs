//! Seeded generators for constraint instances.

use alloc::vec;
use alloc::vec::Vec;

use super::{Constraint, Graphic, Intersection, Knapsack, Partition};
use crate::{Error, Result, SimRng};

/// Partition of `0..n` into `groups` non-empty groups: a random permutation
/// seeds one element per group and the rest are assigned uniformly.
pub fn random_partition(rng: &mut SimRng, n: usize, groups: usize) -> Result<Partition> {
    if groups == 0 || groups > n {
        return Err(Error::InvalidParameter(alloc::format!(
            "cannot split {n} elements into {groups} non-empty groups"
        )));
    }
    let order = rng.permutation(n);
    let mut labels = vec![0; n];
    for (i, &e) in order.iter().enumerate() {
        labels[e] = if i < groups { i } else { rng.below(groups) };
    }
    Ok(Partition::from_labels(&labels))
}

/// Partition of `0..n` into consecutive index blocks of near-equal size.
pub fn contiguous_partition(n: usize, groups: usize) -> Result<Partition> {
    if groups == 0 || groups > n {
        return Err(Error::InvalidParameter(alloc::format!(
            "cannot split {n} elements into {groups} non-empty groups"
        )));
    }
    let labels: Vec<usize> = (0..n).map(|e| e * groups / n).collect();
    Ok(Partition::from_labels(&labels))
}

/// Multigraph with `edges` edges whose endpoints are uniform over
/// `0..vertices`; self-loops and parallel edges can occur.
pub fn random_graphic(rng: &mut SimRng, vertices: usize, edges: usize) -> Result<Graphic> {
    if vertices == 0 && edges > 0 {
        return Err(Error::InvalidParameter(
            "edges need at least one vertex".into(),
        ));
    }
    let list = (0..edges)
        .map(|_| (rng.below(vertices), rng.below(vertices)))
        .collect();
    Graphic::new(vertices, list)
}

/// Intersection of `p` independent random partition matroids on `0..n`, each
/// with `groups` groups.
pub fn random_partition_intersection(
    rng: &mut SimRng,
    n: usize,
    p: usize,
    groups: usize,
) -> Result<Intersection> {
    let members = (0..p)
        .map(|_| random_partition(rng, n, groups).map(Constraint::Partition))
        .collect::<Result<Vec<_>>>()?;
    Intersection::new(members)
}

/// Sizes uniform in `1..=max_size`; the budget is `fraction` of the total size,
/// rounded down.
pub fn random_knapsack(
    rng: &mut SimRng,
    n: usize,
    max_size: u64,
    fraction: f64,
) -> Result<Knapsack> {
    if max_size == 0 {
        return Err(Error::InvalidParameter("max_size must be positive".into()));
    }
    let sizes: Vec<u64> = (0..n)
        .map(|_| 1 + rng.below(max_size as usize) as u64)
        .collect();
    let total: u64 = sizes.iter().sum();
    let budget = libm::floor(total as f64 * fraction.max(0.0)) as u64;
    Knapsack::new(sizes, budget)
}
