//! Sparse Boolean matrices and vectors.
//!
//! A [`BoolMatrix`] keeps only its nonzero rows, each as a word-packed bit-set,
//! so that the Kronecker product of a machine with a graph stays proportional
//! to its number of nonzeros even though its side is `|states| * |vertices|`.
//! Row unions and differences are performed 64 columns at a time.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Square Boolean matrix with bit-packed rows.
#[derive(Clone, Default)]
pub struct BoolMatrix {
    dim: usize,
    // Invariant: no empty rows are stored.
    rows: BTreeMap<usize, BitSet>,
    nnz: usize,
}

impl BoolMatrix {
    /// All-zero matrix of side `dim`.
    pub fn new(dim: usize) -> Self {
        BoolMatrix {
            dim,
            rows: BTreeMap::new(),
            nnz: 0,
        }
    }

    pub fn from_coords<I>(dim: usize, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = BoolMatrix::new(dim);
        for (r, c) in coords {
            m.set(r, c)?;
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nonzero entries.
    #[inline]
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nnz == 0
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows.get(&row).is_some_and(|r| r.contains(col))
    }

    /// Sets entry `(row, col)`; returns whether it was previously zero.
    pub fn set(&mut self, row: usize, col: usize) -> Result<bool> {
        self.check(row)?;
        self.check(col)?;
        Ok(self.set_unchecked(row, col))
    }

    pub(crate) fn set_unchecked(&mut self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.dim && col < self.dim);
        let fresh = self.rows.entry(row).or_default().insert(col);
        self.nnz += fresh as usize;
        fresh
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

    fn check_same_dim(&self, other: &BoolMatrix) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    pub(crate) fn row_bits(&self, row: usize) -> Option<&BitSet> {
        self.rows.get(&row)
    }

    /// Row `row` as a vector.
    pub fn row(&self, row: usize) -> BoolVector {
        BoolVector {
            dim: self.dim,
            bits: self.rows.get(&row).cloned().unwrap_or_default(),
        }
    }

    /// Indices of the nonzero rows, ascending.
    pub fn nonzero_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Nonzero coordinates in `(row, col)` order.
    pub fn iter(&self) -> Coords<'_> {
        Coords {
            rows: self.rows.iter(),
            current: None,
        }
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::new(self.dim);
        for (r, c) in self.iter() {
            t.set_unchecked(c, r);
        }
        t
    }

    /// ORs `other` into `self`; returns whether any entry flipped from 0 to 1.
    pub fn union_into(&mut self, other: &BoolMatrix) -> Result<bool> {
        self.check_same_dim(other)?;
        let mut added = 0;
        for (&r, bits) in &other.rows {
            added += self.rows.entry(r).or_default().union_with(bits);
        }
        self.nnz += added;
        Ok(added > 0)
    }

    /// Entries of `self` that are zero in `other`.
    pub fn difference(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.check_same_dim(other)?;
        let mut out = BoolMatrix::new(self.dim);
        for (&r, bits) in &self.rows {
            let rest = match other.rows.get(&r) {
                Some(theirs) => bits.difference(theirs),
                None => bits.clone(),
            };
            if !rest.is_empty() {
                out.nnz += rest.len();
                out.rows.insert(r, rest);
            }
        }
        Ok(out)
    }

    /// Kronecker product: `out[u*m + v, p*m + q] = self[u, p] & other[v, q]`
    /// where `m = other.dim()`.
    pub fn kron(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        let dim = product_dim(self.dim, other.dim)?;
        let mut out = BoolMatrix::new(dim);
        kron_accumulate(&mut out, self, other);
        Ok(out)
    }
}

fn product_dim(a: usize, b: usize) -> Result<usize> {
    a.checked_mul(b)
        .filter(|&d| d <= u32::MAX as usize * 64)
        .ok_or_else(|| Error::TooLarge(format!("Kronecker product of {a}x{a} and {b}x{b}")))
}

fn kron_accumulate(out: &mut BoolMatrix, a: &BoolMatrix, b: &BoolMatrix) {
    let m = b.dim;
    for (&u, a_row) in &a.rows {
        for p in a_row.iter() {
            for (&v, b_row) in &b.rows {
                let target = out.rows.entry(u * m + v).or_default();
                let offset = p * m;
                for q in b_row.iter() {
                    out.nnz += target.insert(offset + q) as usize;
                }
            }
        }
    }
}

/// Kronecker product of two matrices.
pub fn kron(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    a.kron(b)
}

/// Union over the labels present in both sets of `kron(machine[l], delta[l])`.
pub fn kron_set(machine: &MatrixSet, delta: &MatrixSet) -> Result<BoolMatrix> {
    let dim = product_dim(machine.dim, delta.dim)?;
    let mut out = BoolMatrix::new(dim);
    for (label, d) in &delta.by_label {
        if d.is_empty() {
            continue;
        }
        if let Some(m) = machine.by_label.get(label) {
            kron_accumulate(&mut out, m, d);
        }
    }
    Ok(out)
}

/// One-step successors of the vertex set `v` in `m`.
pub fn vec_mat_mul(v: &BoolVector, m: &BoolMatrix) -> Result<BoolVector> {
    if v.dim != m.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            found: v.dim,
        });
    }
    let mut bits = BitSet::new();
    for i in v.bits.iter() {
        if let Some(row) = m.rows.get(&i) {
            bits.union_with(row);
        }
    }
    Ok(BoolVector { dim: m.dim, bits })
}

/// ORs `other` into `acc`; returns whether anything changed.
pub fn union_into(acc: &mut BoolMatrix, other: &BoolMatrix) -> Result<bool> {
    acc.union_into(other)
}

impl PartialEq for BoolMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.nnz == other.nnz && self.rows == other.rows
    }
}

impl Eq for BoolMatrix {}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoolMatrix")
            .field("dim", &self.dim)
            .field("nonzeros", &self.iter().collect::<Vec<_>>())
            .finish()
    }
}

pub struct Coords<'a> {
    rows: btree_map::Iter<'a, usize, BitSet>,
    current: Option<(usize, crate::bitset::Iter<'a>)>,
}

impl Iterator for Coords<'_> {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        loop {
            if let Some((r, cols)) = &mut self.current {
                if let Some(c) = cols.next() {
                    return Some((*r, c));
                }
            }
            let (&r, bits) = self.rows.next()?;
            self.current = Some((r, bits.iter()));
        }
    }
}

/// Boolean vector of fixed dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct BoolVector {
    dim: usize,
    bits: BitSet,
}

impl BoolVector {
    pub fn new(dim: usize) -> Self {
        BoolVector {
            dim,
            bits: BitSet::new(),
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(dim: usize, indices: I) -> Result<Self> {
        let mut v = BoolVector::new(dim);
        for i in indices {
            v.insert(i)?;
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, index: usize) -> Result<bool> {
        if index >= self.dim {
            return Err(Error::OutOfRange {
                index,
                dim: self.dim,
            });
        }
        Ok(self.bits.insert(index))
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }
}

impl fmt::Debug for BoolVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolVector({}; ", self.dim)?;
        f.debug_set().entries(self.bits.iter()).finish()?;
        write!(f, ")")
    }
}

/// One Boolean matrix per label, all of the same side.
///
/// A label with no matrix stands for the all-zero matrix.
#[derive(Clone, Default)]
pub struct MatrixSet {
    dim: usize,
    by_label: BTreeMap<String, BoolMatrix>,
}

impl MatrixSet {
    pub fn new(dim: usize) -> Self {
        MatrixSet {
            dim,
            by_label: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, label: &str) -> Option<&BoolMatrix> {
        self.by_label.get(label)
    }

    /// Matrix for `label`, creating an empty one if absent.
    pub fn entry(&mut self, label: &str) -> &mut BoolMatrix {
        let dim = self.dim;
        self.by_label
            .entry(label.to_owned())
            .or_insert_with(|| BoolMatrix::new(dim))
    }

    pub fn insert(&mut self, label: impl Into<String>, matrix: BoolMatrix) -> Result<()> {
        if matrix.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: matrix.dim,
            });
        }
        self.by_label.insert(label.into(), matrix);
        Ok(())
    }

    pub fn set(&mut self, label: &str, row: usize, col: usize) -> Result<bool> {
        self.entry(label).set(row, col)
    }

    pub fn contains(&self, label: &str, row: usize, col: usize) -> bool {
        self.get(label).is_some_and(|m| m.get(row, col))
    }

    /// Labels with a materialized matrix (possibly empty), sorted.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.by_label.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BoolMatrix)> {
        self.by_label.iter().map(|(l, m)| (l.as_str(), m))
    }

    /// Total nonzeros over all labels.
    pub fn nnz(&self) -> usize {
        self.by_label.values().map(BoolMatrix::nnz).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_label.values().all(BoolMatrix::is_empty)
    }

    /// Drops every entry while keeping the dimension.
    pub fn clear(&mut self) {
        self.by_label.clear();
    }
}

impl PartialEq for MatrixSet {
    fn eq(&self, other: &Self) -> bool {
        fn nonempty(s: &MatrixSet) -> impl Iterator<Item = (&String, &BoolMatrix)> {
            s.by_label.iter().filter(|(_, m)| !m.is_empty())
        }
        self.dim == other.dim && nonempty(self).eq(nonempty(other))
    }
}

impl Eq for MatrixSet {}

impl fmt::Debug for MatrixSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.by_label.iter().filter(|(_, m)| !m.is_empty()))
            .finish()
    }
}
