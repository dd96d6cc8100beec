//! Insert-only transitive closure.
//!
//! When an edge `(i, j)` arrives, only vertices `u` that already reach `i`
//! (or are `i` itself) and do not yet reach `j` gain anything, and what they
//! gain is exactly `{j} ∪ succ(j)`. Both the candidate set and the gain are
//! computed as whole-row bit-set operations. Each pair `(u, j)` triggers at
//! most one such row merge over the lifetime of the structure.

use crate::bitset::BitSet;
use crate::boolmat::{BoolMatrix, BoolVector};
use crate::error::{Error, Result};

/// Reachability by paths of one or more edges, maintained under insertions.
#[derive(Clone, Debug)]
pub struct DynClosure {
    dim: usize,
    succ: Vec<BitSet>,
    pred: Vec<BitSet>,
    pairs: usize,
}

impl DynClosure {
    pub fn new(dim: usize) -> Self {
        DynClosure {
            dim,
            succ: vec![BitSet::new(); dim],
            pred: vec![BitSet::new(); dim],
            pairs: 0,
        }
    }

    /// Closure of every edge of `m`.
    pub fn from_matrix(m: &BoolMatrix) -> Self {
        let mut c = DynClosure::new(m.dim());
        for (i, j) in m.iter() {
            c.insert_with(i, j, |_, _| {});
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of reachable pairs.
    pub fn len(&self) -> usize {
        self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs == 0
    }

    fn check(&self, index: usize) -> Result<()> {
        if index < self.dim {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                index,
                dim: self.dim,
            })
        }
    }

    /// Inserts edge `(i, j)` and returns the newly reachable pairs, sorted.
    pub fn insert_edge(&mut self, i: usize, j: usize) -> Result<Vec<(usize, usize)>> {
        let mut fresh = Vec::new();
        self.insert_edge_with(i, j, |u, v| fresh.push((u, v)))?;
        fresh.sort_unstable();
        Ok(fresh)
    }

    /// Inserts edge `(i, j)`, calling `on_new(u, v)` once for every pair that
    /// becomes reachable. Returns how many pairs were added.
    pub fn insert_edge_with<F>(&mut self, i: usize, j: usize, on_new: F) -> Result<usize>
    where
        F: FnMut(usize, usize),
    {
        self.check(i)?;
        self.check(j)?;
        Ok(self.insert_with(i, j, on_new))
    }

    pub(crate) fn insert_with<F>(&mut self, i: usize, j: usize, mut on_new: F) -> usize
    where
        F: FnMut(usize, usize),
    {
        if self.succ[i].contains(j) {
            return 0;
        }
        // Sources that reach i (i included) but not yet j.
        let mut sources = self.pred[i].clone();
        sources.insert(i);
        let sources = sources.difference(&self.pred[j]);

        let mut gain = self.succ[j].clone();
        gain.insert(j);

        let mut added = 0;
        for u in sources.iter() {
            let fresh = gain.difference(&self.succ[u]);
            if fresh.is_empty() {
                continue;
            }
            self.succ[u].union_with(&fresh);
            for v in fresh.iter() {
                self.pred[v].insert(u);
                on_new(u, v);
            }
            added += fresh.len();
        }
        self.pairs += added;
        added
    }

    /// Whether a path of at least one edge leads from `i` to `j`.
    pub fn reachable(&self, i: usize, j: usize) -> Result<bool> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.succ[i].contains(j))
    }

    /// Vertices reachable from `i`.
    pub fn successors(&self, i: usize) -> Result<BoolVector> {
        self.check(i)?;
        BoolVector::from_indices(self.dim, self.succ[i].iter())
    }

    /// Vertices that reach `j`.
    pub fn predecessors(&self, j: usize) -> Result<BoolVector> {
        self.check(j)?;
        BoolVector::from_indices(self.dim, self.pred[j].iter())
    }

    /// All reachable pairs in `(from, to)` order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |v| (u, v)))
    }

    pub fn to_matrix(&self) -> BoolMatrix {
        let mut m = BoolMatrix::new(self.dim);
        for (u, v) in self.pairs() {
            m.set_unchecked(u, v);
        }
        m
    }

    /// Whether the predecessor rows are exactly the transpose of the successor rows.
    pub fn is_transpose_coherent(&self) -> bool {
        let forward = self.pairs().count();
        let backward: usize = self.pred.iter().map(BitSet::len).sum();
        forward == backward
            && forward == self.pairs
            && self
                .pred
                .iter()
                .enumerate()
                .all(|(v, row)| row.iter().all(|u| self.succ[u].contains(v)))
    }
}

impl PartialEq for DynClosure {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.succ == other.succ
    }
}

impl Eq for DynClosure {}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeSet;

    fn warshall(dim: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; dim]; dim];
        for &(i, j) in edges {
            r[i][j] = true;
        }
        for k in 0..dim {
            for i in 0..dim {
                if r[i][k] {
                    for j in 0..dim {
                        if r[k][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        r
    }

    #[test]
    fn example_path_of_length_two() {
        let mut c = DynClosure::new(8);
        assert_eq!(c.insert_edge(0, 3).unwrap(), vec![(0, 3)]);
        assert_eq!(c.insert_edge(3, 7).unwrap(), vec![(0, 7), (3, 7)]);
        assert!(c.reachable(0, 7).unwrap());
        assert!(c.insert_edge(0, 3).unwrap().is_empty());
    }

    #[test]
    fn closure_is_irreflexive_until_a_cycle_appears() {
        let mut c = DynClosure::new(3);
        assert!(!c.reachable(0, 0).unwrap());
        c.insert_edge(0, 1).unwrap();
        let fresh = c.insert_edge(1, 0).unwrap();
        assert_eq!(fresh, vec![(0, 0), (1, 0), (1, 1)]);
        assert!(c.is_transpose_coherent());
    }

    #[test]
    fn out_of_range_is_rejected() {
        let mut c = DynClosure::new(2);
        assert!(matches!(c.insert_edge(0, 2), Err(Error::OutOfRange { .. })));
        assert!(matches!(c.reachable(5, 0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn random_insertions_match_warshall() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let dim = 12;
            let edges: Vec<(usize, usize)> = (0..200)
                .map(|_| (rng.gen_range(0..dim), rng.gen_range(0..dim)))
                .collect();
            let mut c = DynClosure::new(dim);
            let mut reported = BTreeSet::new();
            let mut total = 0;
            for &(i, j) in &edges {
                let fresh = c.insert_edge(i, j).unwrap();
                total += fresh.len();
                reported.extend(fresh);
            }
            let oracle = warshall(dim, &edges);
            let expected: BTreeSet<_> = (0..dim)
                .flat_map(|i| (0..dim).map(move |j| (i, j)))
                .filter(|&(i, j)| oracle[i][j])
                .collect();
            assert_eq!(reported, expected);
            assert_eq!(total, expected.len());
            assert_eq!(c.pairs().collect::<BTreeSet<_>>(), expected);
            assert!(c.is_transpose_coherent());

            let mut shuffled = edges.clone();
            shuffled.shuffle(&mut rng);
            let mut other = DynClosure::new(dim);
            for (i, j) in shuffled {
                other.insert_edge(i, j).unwrap();
            }
            assert_eq!(other, c);
        }
    }
}
