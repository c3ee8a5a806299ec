//! Downward-closed feasibility structures and the exhaustive rank machinery
//! used to certify matroid axioms and the p-system parameter.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::subset;
use crate::{Error, Result};

pub mod generate;
mod rank;

pub use rank::{
    check_downward_closed, matroid_axiom_check, p_parameter, rank_and_lower_rank, AxiomReport,
    AxiomWitness, IndependenceTable, Ratio,
};

/// A downward-closed family of independent subsets of `0..ground_size()`.
pub trait IndependenceSystem {
    fn ground_size(&self) -> usize;

    /// `set` is canonical and in range.
    fn is_independent(&self, set: &[usize]) -> bool;

    /// Whether `set + e` is independent, given that `set` is.
    fn can_add(&self, set: &[usize], e: usize) -> bool {
        self.is_independent(&subset::with(set, e))
    }
}

impl<I: IndependenceSystem + ?Sized> IndependenceSystem for &I {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        (**self).is_independent(set)
    }
    fn can_add(&self, set: &[usize], e: usize) -> bool {
        (**self).can_add(set, e)
    }
}

/// Independent iff `|S| <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Uniform {
    pub n: usize,
    pub k: usize,
}

impl Uniform {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k }
    }
}

impl IndependenceSystem for Uniform {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        set.len() <= self.k
    }
    fn can_add(&self, set: &[usize], e: usize) -> bool {
        subset::contains(set, e) || set.len() < self.k
    }
}

/// Independent iff the set meets every group in at most one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    group_of: Vec<usize>,
}

impl Partition {
    /// `groups` must be disjoint and cover `0..n` exactly. Empty groups are kept.
    pub fn new(n: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut group_of = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            for &e in members {
                if e >= n {
                    return Err(Error::InvalidSubset { element: e, n });
                }
                if group_of[e] != usize::MAX {
                    return Err(Error::InvalidParameter(format!(
                        "element {e} appears in more than one group"
                    )));
                }
                group_of[e] = g;
            }
        }
        if let Some(e) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::InvalidParameter(format!(
                "element {e} is in no group"
            )));
        }
        let groups = groups
            .into_iter()
            .map(|mut g| {
                g.sort_unstable();
                g
            })
            .collect();
        Ok(Self { groups, group_of })
    }

    /// Assigns element `e` to group `labels[e]`; groups are `0..=max label`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let count = labels.iter().map(|&g| g + 1).max().unwrap_or(0);
        let mut groups = vec![Vec::new(); count];
        for (e, &g) in labels.iter().enumerate() {
            groups[g].push(e);
        }
        Self {
            groups,
            group_of: labels.to_vec(),
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_of(&self, e: usize) -> usize {
        self.group_of[e]
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }
}

impl IndependenceSystem for Partition {
    fn ground_size(&self) -> usize {
        self.group_of.len()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut used = vec![false; self.groups.len()];
        set.iter()
            .all(|&e| !core::mem::replace(&mut used[self.group_of[e]], true))
    }

    fn can_add(&self, set: &[usize], e: usize) -> bool {
        let g = self.group_of[e];
        set.iter().all(|&x| x == e || self.group_of[x] != g)
    }
}

/// Graphic matroid: the ground set is the edge list of a multigraph and a set
/// of edges is independent iff it is acyclic. Self-loops are loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graphic {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graphic {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidParameter(format!(
                "edge ({u}, {v}) outside 0..{vertices}"
            )));
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl IndependenceSystem for Graphic {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        set.iter().all(|&e| {
            let (u, v) = self.edges[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
            ru != rv
        })
    }
}

/// Intersection of member systems: independent iff independent in each.
/// An intersection of `p` matroids is a p-independence system.
#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    members: Vec<Constraint>,
}

impl Intersection {
    pub fn new(members: Vec<Constraint>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidParameter(
                "intersection of zero systems".into(),
            ));
        };
        let n = first.ground_size();
        if members.iter().any(|m| m.ground_size() != n) {
            return Err(Error::InvalidParameter(
                "intersection members disagree on the ground set".into(),
            ));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Constraint] {
        &self.members
    }
}

impl IndependenceSystem for Intersection {
    fn ground_size(&self) -> usize {
        self.members[0].ground_size()
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        self.members.iter().all(|m| m.is_independent(set))
    }
    fn can_add(&self, set: &[usize], e: usize) -> bool {
        self.members.iter().all(|m| m.can_add(set, e))
    }
}

/// Feasible iff `Σ_{i∈S} size_i <= budget`. Sizes are positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Knapsack {
    sizes: Vec<u64>,
    budget: u64,
}

impl Knapsack {
    pub fn new(sizes: Vec<u64>, budget: u64) -> Result<Self> {
        if let Some(e) = sizes.iter().position(|&c| c == 0) {
            return Err(Error::InvalidParameter(format!("element {e} has size 0")));
        }
        Ok(Self { sizes, budget })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn size_of(&self, set: &[usize]) -> u64 {
        set.iter().map(|&e| self.sizes[e]).sum()
    }
}

impl IndependenceSystem for Knapsack {
    fn ground_size(&self) -> usize {
        self.sizes.len()
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        self.size_of(set) <= self.budget
    }
    fn can_add(&self, set: &[usize], e: usize) -> bool {
        if subset::contains(set, e) {
            return self.is_independent(set);
        }
        self.size_of(set) + self.sizes[e] <= self.budget
    }
}

/// The shipped constraint families behind one type.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Uniform(Uniform),
    Partition(Partition),
    Graphic(Graphic),
    Intersection(Intersection),
    Knapsack(Knapsack),
}

impl Constraint {
    fn as_dyn(&self) -> &dyn IndependenceSystem {
        match self {
            Constraint::Uniform(c) => c,
            Constraint::Partition(c) => c,
            Constraint::Graphic(c) => c,
            Constraint::Intersection(c) => c,
            Constraint::Knapsack(c) => c,
        }
    }

    /// Whether this family is a matroid by construction.
    pub fn is_matroid_family(&self) -> bool {
        matches!(
            self,
            Constraint::Uniform(_) | Constraint::Partition(_) | Constraint::Graphic(_)
        )
    }
}

impl IndependenceSystem for Constraint {
    fn ground_size(&self) -> usize {
        self.as_dyn().ground_size()
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        self.as_dyn().is_independent(set)
    }
    fn can_add(&self, set: &[usize], e: usize) -> bool {
        self.as_dyn().can_add(set, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_matroid() {
        let u = Uniform::new(5, 2);
        assert!(!u.is_independent(&[0, 1, 2]));
        assert!(u.is_independent(&[3, 4]));
        assert!(!u.can_add(&[3, 4], 0));
    }

    #[test]
    fn partition_matroid() {
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert!(p.is_independent(&[0, 2]));
        assert!(!p.is_independent(&[0, 1]));
        assert!(!p.can_add(&[0], 1));
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![1]]).is_err());
        assert_eq!(
            Partition::from_labels(&[1, 0, 1]).groups(),
            &[vec![1], vec![0, 2]]
        );
    }

    #[test]
    fn graphic_matroid() {
        let tri = Graphic::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!tri.is_independent(&[0, 1, 2]));
        assert!(tri.is_independent(&[0, 2]));
        let with_loop = Graphic::new(2, vec![(0, 0), (0, 1)]).unwrap();
        assert!(!with_loop.is_independent(&[0]));
        let parallel = Graphic::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert!(!parallel.is_independent(&[0, 1]));
    }

    #[test]
    fn knapsack_feasibility() {
        let k = Knapsack::new(vec![2, 3, 4], 5).unwrap();
        assert!(k.is_independent(&[0, 1]));
        assert!(!k.is_independent(&[1, 2]));
        assert!(!k.can_add(&[0], 2));
        assert!(Knapsack::new(vec![1, 0], 3).is_err());
    }

    #[test]
    fn intersection_requires_all() {
        let a = Constraint::Partition(Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap());
        let b = Constraint::Partition(Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap());
        let i = Intersection::new(vec![a, b]).unwrap();
        assert!(i.is_independent(&[0, 2]));
        assert!(!i.is_independent(&[1, 2]));
        assert!(Intersection::new(vec![]).is_err());
    }
}
