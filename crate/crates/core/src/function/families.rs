use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::SetFunction;
use crate::{Error, Result};

/// `f(S) = Σ_{e∈S} w_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    /// `f(S) = |S|`.
    pub fn cardinality(n: usize) -> Self {
        Self::new(vec![1.0; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }
    fn value(&self, set: &[usize]) -> f64 {
        set.iter().map(|&e| self.weights[e]).sum()
    }
}

/// Weighted coverage: element `e` covers a set of points of a universe
/// `0..universe`, and `f(S)` is the total weight of the covered points.
#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    universe: usize,
    covers: Vec<Vec<usize>>,
    weights: Option<Vec<f64>>,
    words: usize,
    masks: Vec<u64>,
}

impl Coverage {
    pub fn new(
        universe: usize,
        covers: Vec<Vec<usize>>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        if let Some(w) = &weights {
            if w.len() != universe {
                return Err(Error::InvalidParameter(format!(
                    "{} point weights for a universe of {universe}",
                    w.len()
                )));
            }
            if w.iter().any(|&x| x.is_nan() || x < 0.0) {
                return Err(Error::InvalidParameter("point weights must be >= 0".into()));
            }
        }
        let words = universe.div_ceil(64).max(1);
        let mut masks = vec![0u64; words * covers.len()];
        for (e, points) in covers.iter().enumerate() {
            for &p in points {
                if p >= universe {
                    return Err(Error::InvalidParameter(format!(
                        "element {e} covers point {p} outside universe {universe}"
                    )));
                }
                masks[e * words + p / 64] |= 1u64 << (p % 64);
            }
        }
        Ok(Self {
            universe,
            covers,
            weights,
            words,
            masks,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn covers(&self) -> &[Vec<usize>] {
        &self.covers
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    fn weigh(&self, word: usize, mut bits: u64) -> f64 {
        match &self.weights {
            None => bits.count_ones() as f64,
            Some(w) => {
                let mut total = 0.0;
                while bits != 0 {
                    total += w[word * 64 + bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
                total
            }
        }
    }
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        if self.words == 1 {
            let bits = set.iter().fold(0u64, |acc, &e| acc | self.masks[e]);
            return self.weigh(0, bits);
        }
        (0..self.words)
            .map(|w| {
                let bits = set
                    .iter()
                    .fold(0u64, |acc, &e| acc | self.masks[e * self.words + w]);
                self.weigh(w, bits)
            })
            .sum()
    }
}

/// `f(S) = coverage(S) - Σ_{e∈S} cost_e`.
///
/// Submodular for any costs, but only non-negative when the costs are small
/// relative to coverage; generators verify `coverage(S) >= cost(S)` for every
/// `S` rather than clamping, since clamping breaks submodularity.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageMinusCost {
    coverage: Coverage,
    costs: Vec<f64>,
}

impl CoverageMinusCost {
    pub fn new(coverage: Coverage, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != coverage.ground_size() {
            return Err(Error::InvalidParameter(format!(
                "{} costs for {} elements",
                costs.len(),
                coverage.ground_size()
            )));
        }
        if costs.iter().any(|&c| c.is_nan() || c < 0.0) {
            return Err(Error::InvalidParameter("costs must be >= 0".into()));
        }
        Ok(Self { coverage, costs })
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }
}

impl SetFunction for CoverageMinusCost {
    fn ground_size(&self) -> usize {
        self.costs.len()
    }
    fn value(&self, set: &[usize]) -> f64 {
        self.coverage.value(set) - set.iter().map(|&e| self.costs[e]).sum::<f64>()
    }
}

/// Weighted cut function of an undirected graph on the ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Cut {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) outside 0..{n}"
                )));
            }
            if w.is_nan() || w < 0.0 {
                return Err(Error::InvalidParameter("edge weights must be >= 0".into()));
            }
        }
        Ok(Self { n, edges })
    }

    /// Unit-weight complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, 1.0));
            }
        }
        Self { n, edges }
    }

    /// Unit-weight cycle on `n` vertices.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|u| (u, (u + 1) % n, 1.0)).collect();
        Self { n, edges }
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }
}

impl SetFunction for Cut {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[usize]) -> f64 {
        let mut inside = vec![false; self.n];
        for &e in set {
            inside[e] = true;
        }
        self.edges
            .iter()
            .filter(|&&(u, v, _)| inside[u] != inside[v])
            .map(|&(_, _, w)| w)
            .sum()
    }
}

/// Element kinds of the cover gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetElement {
    /// `i_B = {iB}`.
    Bottom(u32),
    /// `i_TB = {iB, iT}`.
    TopBottom(u32),
}

/// The coverage instance `cover(R, S)`: the universe is `{iB, iT : i ∈ R}`,
/// with one element `i_B = {iB}` per `i ∈ R` and one element
/// `i_TB = {iB, iT}` per `i ∈ S`, and `f(C) = |∪ C|`.
///
/// Element indices list the `i_B` in the order of `R`, then the `i_TB` in the
/// order of `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverGadget {
    r: Vec<u32>,
    s: Vec<u32>,
    elements: Vec<GadgetElement>,
    coverage: Coverage,
}

impl CoverGadget {
    pub fn new(r: &[u32], s: &[u32]) -> Result<Self> {
        let pos = |i: u32| r.iter().position(|&x| x == i);
        for (k, &i) in r.iter().enumerate() {
            if r[..k].contains(&i) {
                return Err(Error::InvalidParameter(format!("R repeats {i}")));
            }
        }
        let mut elements: Vec<GadgetElement> =
            r.iter().map(|&i| GadgetElement::Bottom(i)).collect();
        let mut covers: Vec<Vec<usize>> = (0..r.len()).map(|j| vec![2 * j]).collect();
        for (k, &i) in s.iter().enumerate() {
            let j = pos(i)
                .ok_or_else(|| Error::InvalidParameter(format!("S element {i} is not in R")))?;
            if s[..k].contains(&i) {
                return Err(Error::InvalidParameter(format!("S repeats {i}")));
            }
            elements.push(GadgetElement::TopBottom(i));
            covers.push(vec![2 * j, 2 * j + 1]);
        }
        let coverage = Coverage::new(2 * r.len(), covers, None)?;
        Ok(Self {
            r: r.to_vec(),
            s: s.to_vec(),
            elements,
            coverage,
        })
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn elements(&self) -> &[GadgetElement] {
        &self.elements
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    /// Display name such as `1_B` or `2_TB`.
    pub fn label(&self, element: usize) -> String {
        match self.elements[element] {
            GadgetElement::Bottom(i) => format!("{i}_B"),
            GadgetElement::TopBottom(i) => format!("{i}_TB"),
        }
    }
}

impl SetFunction for CoverGadget {
    fn ground_size(&self) -> usize {
        self.elements.len()
    }
    fn value(&self, set: &[usize]) -> f64 {
        self.coverage.value(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_multiword_and_weights() {
        let c = Coverage::new(130, vec![vec![0, 64, 129], vec![129, 5]], None).unwrap();
        assert_eq!(c.value(&[0, 1]), 4.0);
        let mut w = vec![1.0; 130];
        w[129] = 2.5;
        let c = Coverage::new(130, vec![vec![0, 64, 129], vec![129, 5]], Some(w)).unwrap();
        assert_eq!(c.value(&[0, 1]), 5.5);
        assert_eq!(c.value(&[]), 0.0);
    }

    #[test]
    fn coverage_rejects_bad_points() {
        assert!(Coverage::new(2, vec![vec![2]], None).is_err());
        assert!(Coverage::new(2, vec![vec![1]], Some(vec![1.0])).is_err());
    }

    #[test]
    fn cut_values() {
        let k4 = Cut::complete(4);
        assert_eq!(k4.value(&[0, 1]), 4.0);
        assert_eq!(k4.value(&[0, 1, 2, 3]), 0.0);
        assert_eq!(Cut::cycle(4).value(&[0, 2]), 4.0);
    }

    #[test]
    fn gadget_layout() {
        let g = CoverGadget::new(&[1, 2], &[2]).unwrap();
        assert_eq!(g.ground_size(), 3);
        assert_eq!(g.label(0), "1_B");
        assert_eq!(g.label(2), "2_TB");
        assert_eq!(g.value(&[0, 2]), 3.0);
        assert_eq!(g.value(&[1, 2]), 2.0);
        assert!(CoverGadget::new(&[1, 2], &[3]).is_err());
    }
}
