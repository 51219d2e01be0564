//! Brute-force least upper bounds over a finite universe of unlabelled
//! shapes, used to check `csh` exhaustively.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::shapes::{csh, erase_labels, is_preferred, Shape};

/// Two field names, five primitives, records and collections nested two
/// levels deep. Top shapes carry no labels.
pub fn erased_universe() -> Vec<Shape> {
    let prims = [Shape::Bit, Shape::Bool, Shape::Int, Shape::Float, Shape::Text];
    let mut leaves = vec![Shape::Bot, Shape::Null, Shape::Any(Vec::new())];
    leaves.extend(prims.iter().cloned());
    leaves.extend(prims.iter().cloned().map(Shape::nullable));

    let mut universe = leaves.clone();
    universe.extend(leaves.iter().cloned().map(Shape::list));
    let slot: Vec<Option<&Shape>> = std::iter::once(None).chain(leaves.iter().map(Some)).collect();
    for a in &slot {
        for b in &slot {
            let fields: Vec<(&str, Shape)> =
                [("a", a), ("b", b)].into_iter().filter_map(|(n, s)| s.map(|s| (n, s.clone()))).collect();
            let r = Shape::object(fields);
            universe.push(Shape::nullable(r.clone()));
            universe.push(r);
        }
    }
    universe
}

struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(x, y)| x & y).collect())
    }
    fn subset_of(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(x, y)| x & !y == 0)
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// The preferred-shape relation tabulated over a universe.
pub struct LubOracle {
    pub universe: Vec<Shape>,
    index: HashMap<String, usize>,
    /// `above[i]` holds every `j` with `universe[i] ⊑ universe[j]`.
    above: Vec<BitSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleAnswer {
    /// The least upper bounds; several only when they are mutually preferred.
    Least(Vec<Shape>),
    NoBound,
}

fn key(s: &Shape) -> String {
    format!("{:?}", s.normalized())
}

impl LubOracle {
    pub fn new(universe: Vec<Shape>) -> Self {
        let n = universe.len();
        let index = universe.iter().enumerate().map(|(i, s)| (key(s), i)).collect();
        let above = universe
            .par_iter()
            .map(|a| {
                let mut row = BitSet::new(n);
                for (j, c) in universe.iter().enumerate() {
                    if is_preferred(a, c) {
                        row.set(j);
                    }
                }
                row
            })
            .collect();
        LubOracle { universe, index, above }
    }

    pub fn position(&self, s: &Shape) -> Option<usize> {
        self.index.get(&key(s)).copied()
    }

    fn least(&self, a: usize, b: usize) -> Vec<usize> {
        let bounds = self.above[a].and(&self.above[b]);
        bounds.ones().filter(|&c| bounds.subset_of(&self.above[c])).collect()
    }

    /// Scans the universe for the least shapes above both `a` and `b`.
    pub fn lub(&self, a: &Shape, b: &Shape) -> OracleAnswer {
        let (Some(i), Some(j)) = (self.position(a), self.position(b)) else { return OracleAnswer::NoBound };
        match self.least(i, j) {
            least if least.is_empty() => OracleAnswer::NoBound,
            least => OracleAnswer::Least(least.into_iter().map(|k| self.universe[k].clone()).collect()),
        }
    }

    /// Compares `csh` with the oracle on every ordered pair.
    pub fn check_all_pairs(&self) -> LubReport {
        let n = self.universe.len();
        let mismatches: Vec<LubMismatch> = (0..n * n)
            .into_par_iter()
            .filter_map(|k| {
                let (i, j) = (k / n, k % n);
                let (a, b) = (&self.universe[i], &self.universe[j]);
                let got = erase_labels(&csh(a, b));
                let least = self.least(i, j);
                let ok = self.position(&got).is_some_and(|g| least.contains(&g));
                (!ok).then(|| LubMismatch {
                    a: a.clone(),
                    b: b.clone(),
                    csh: got,
                    oracle: least.into_iter().map(|k| self.universe[k].clone()).collect(),
                })
            })
            .collect();
        LubReport { universe_size: n, pairs: n * n, mismatches }
    }
}

#[derive(Debug, Clone)]
pub struct LubMismatch {
    pub a: Shape,
    pub b: Shape,
    pub csh: Shape,
    /// Empty when the pair has no least upper bound in the universe.
    pub oracle: Vec<Shape>,
}

#[derive(Debug, Clone)]
pub struct LubReport {
    pub universe_size: usize,
    pub pairs: usize,
    pub mismatches: Vec<LubMismatch>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prims() -> LubOracle {
        let mut u = vec![Shape::Bot, Shape::Null, Shape::Any(Vec::new())];
        u.extend([Shape::Bit, Shape::Bool, Shape::Int, Shape::Float, Shape::Text]);
        LubOracle::new(u)
    }

    #[test]
    fn primitive_bounds() {
        let o = prims();
        assert_eq!(o.lub(&Shape::Int, &Shape::Float), OracleAnswer::Least(vec![Shape::Float]));
        assert_eq!(o.lub(&Shape::Text, &Shape::Bool), OracleAnswer::Least(vec![Shape::Any(Vec::new())]));
        for s in o.universe.clone() {
            assert_eq!(o.lub(&Shape::Bot, &s), OracleAnswer::Least(vec![s.clone()]));
        }
    }

    #[test]
    fn universe_is_closed_and_distinct() {
        let u = erased_universe();
        let o = LubOracle::new(u.clone());
        assert_eq!(o.index.len(), u.len());
        assert!(u.iter().all(|s| o.position(&erase_labels(&csh(s, &Shape::Null))).is_some()));
    }
}
