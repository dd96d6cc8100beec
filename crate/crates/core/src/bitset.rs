//! Word-packed bit-set with a sparse and a dense representation.
//!
//! Rows of the Kronecker product and of its closure live in index spaces of
//! size `|states| * |vertices|`, which can reach tens of millions, while most
//! rows hold a handful of bits. A set therefore starts as a sorted list of
//! nonzero 64-bit blocks and switches to a flat word vector once at least half
//! of the blocks it spans are occupied. Every set operation works a whole
//! machine word at a time in either representation.

use std::fmt;

const WORD_BITS: usize = 64;

/// Sparse sets with fewer blocks than this never switch to the dense form.
const MIN_DENSE_BLOCKS: usize = 8;

#[derive(Clone)]
enum Repr {
    /// Nonzero blocks sorted by block index.
    Sparse(Vec<(usize, u64)>),
    /// Block `b` holds bits `64 * b .. 64 * b + 63`; zero words allowed.
    Dense(Vec<u64>),
}

#[derive(Clone)]
pub(crate) struct BitSet {
    repr: Repr,
    len: usize,
}

#[inline]
fn split(bit: usize) -> (usize, u64) {
    (bit / WORD_BITS, 1u64 << (bit % WORD_BITS))
}

impl Default for BitSet {
    fn default() -> Self {
        Self::new()
    }
}

impl BitSet {
    pub(crate) const fn new() -> Self {
        BitSet {
            repr: Repr::Sparse(Vec::new()),
            len: 0,
        }
    }

    #[cfg(test)]
    pub(crate) fn from_sorted<I: IntoIterator<Item = usize>>(bits: I) -> Self {
        let mut set = BitSet::new();
        for bit in bits {
            set.insert(bit);
        }
        set
    }

    /// Number of set bits.
    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub(crate) fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    /// Largest set bit, if any.
    #[cfg(test)]
    pub(crate) fn max(&self) -> Option<usize> {
        let (block, word) = self.blocks().last()?;
        Some(block * WORD_BITS + (WORD_BITS - 1 - word.leading_zeros() as usize))
    }

    fn word(&self, block: usize) -> u64 {
        match &self.repr {
            Repr::Sparse(blocks) => blocks
                .binary_search_by_key(&block, |&(b, _)| b)
                .map(|pos| blocks[pos].1)
                .unwrap_or(0),
            Repr::Dense(words) => words.get(block).copied().unwrap_or(0),
        }
    }

    #[inline]
    pub(crate) fn contains(&self, bit: usize) -> bool {
        let (block, mask) = split(bit);
        self.word(block) & mask != 0
    }

    /// Sets `bit`, returning whether it was previously clear.
    pub(crate) fn insert(&mut self, bit: usize) -> bool {
        let (block, mask) = split(bit);
        let fresh = match &mut self.repr {
            Repr::Dense(words) => {
                if block >= words.len() {
                    words.resize(block + 1, 0);
                }
                let fresh = words[block] & mask == 0;
                words[block] |= mask;
                fresh
            }
            Repr::Sparse(blocks) => match blocks.last_mut() {
                Some(last) if last.0 == block => {
                    let fresh = last.1 & mask == 0;
                    last.1 |= mask;
                    fresh
                }
                Some(last) if last.0 < block => {
                    blocks.push((block, mask));
                    true
                }
                None => {
                    blocks.push((block, mask));
                    true
                }
                Some(_) => match blocks.binary_search_by_key(&block, |&(b, _)| b) {
                    Ok(pos) => {
                        let fresh = blocks[pos].1 & mask == 0;
                        blocks[pos].1 |= mask;
                        fresh
                    }
                    Err(pos) => {
                        blocks.insert(pos, (block, mask));
                        true
                    }
                },
            },
        };
        if fresh {
            self.len += 1;
            self.maybe_densify();
        }
        fresh
    }

    /// ORs `other` into `self`; returns how many bits flipped from 0 to 1.
    pub(crate) fn union_with(&mut self, other: &BitSet) -> usize {
        if other.is_empty() {
            return 0;
        }
        if self.is_empty() {
            *self = other.clone();
            return self.len;
        }
        if other.is_dense() && !self.is_dense() {
            self.densify();
        }
        let added = match &mut self.repr {
            Repr::Dense(words) => {
                let mut added = 0;
                for (block, word) in other.blocks() {
                    if block >= words.len() {
                        words.resize(block + 1, 0);
                    }
                    let fresh = word & !words[block];
                    added += fresh.count_ones() as usize;
                    words[block] |= word;
                }
                added
            }
            Repr::Sparse(mine) => {
                let Repr::Sparse(theirs) = &other.repr else {
                    unreachable!("dense operand densified above")
                };
                let mut merged = Vec::with_capacity(mine.len() + theirs.len());
                let mut added = 0;
                let (mut a, mut b) = (mine.iter().peekable(), theirs.iter().peekable());
                loop {
                    match (a.peek(), b.peek()) {
                        (Some(&&(ba, wa)), Some(&&(bb, wb))) => {
                            if ba < bb {
                                merged.push((ba, wa));
                                a.next();
                            } else if bb < ba {
                                added += wb.count_ones() as usize;
                                merged.push((bb, wb));
                                b.next();
                            } else {
                                added += (wb & !wa).count_ones() as usize;
                                merged.push((ba, wa | wb));
                                a.next();
                                b.next();
                            }
                        }
                        (Some(&&x), None) => {
                            merged.push(x);
                            a.next();
                        }
                        (None, Some(&&(bb, wb))) => {
                            added += wb.count_ones() as usize;
                            merged.push((bb, wb));
                            b.next();
                        }
                        (None, None) => break,
                    }
                }
                *mine = merged;
                added
            }
        };
        self.len += added;
        self.maybe_densify();
        added
    }

    /// `self \ other` as a new set.
    pub(crate) fn difference(&self, other: &BitSet) -> BitSet {
        let mut cursor = Cursor::new(other);
        let mut blocks = Vec::new();
        let mut len = 0;
        for (block, word) in self.blocks() {
            let rest = word & !cursor.word(block);
            if rest != 0 {
                len += rest.count_ones() as usize;
                blocks.push((block, rest));
            }
        }
        let mut set = BitSet {
            repr: Repr::Sparse(blocks),
            len,
        };
        set.maybe_densify();
        set
    }

    /// Nonzero `(block index, word)` pairs in ascending block order.
    pub(crate) fn blocks(&self) -> Blocks<'_> {
        match &self.repr {
            Repr::Sparse(blocks) => Blocks::Sparse(blocks.iter()),
            Repr::Dense(words) => Blocks::Dense(words.iter().enumerate()),
        }
    }

    /// Set bits in ascending order.
    pub(crate) fn iter(&self) -> Iter<'_> {
        Iter {
            blocks: self.blocks(),
            base: 0,
            word: 0,
        }
    }

    fn maybe_densify(&mut self) {
        if let Repr::Sparse(blocks) = &self.repr {
            if blocks.len() >= MIN_DENSE_BLOCKS {
                let span = blocks.last().map_or(0, |&(b, _)| b + 1);
                if 2 * blocks.len() >= span {
                    self.densify();
                }
            }
        }
    }

    fn densify(&mut self) {
        if let Repr::Sparse(blocks) = &self.repr {
            let span = blocks.last().map_or(0, |&(b, _)| b + 1);
            let mut words = vec![0u64; span];
            for &(b, w) in blocks {
                words[b] = w;
            }
            self.repr = Repr::Dense(words);
        }
    }
}

impl PartialEq for BitSet {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.blocks().eq(other.blocks())
    }
}

impl Eq for BitSet {}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Random access into a set for monotonically increasing block indices.
struct Cursor<'a> {
    set: &'a BitSet,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(set: &'a BitSet) -> Self {
        Cursor { set, pos: 0 }
    }

    #[inline]
    fn word(&mut self, block: usize) -> u64 {
        match &self.set.repr {
            Repr::Dense(words) => words.get(block).copied().unwrap_or(0),
            Repr::Sparse(blocks) => {
                while self.pos < blocks.len() && blocks[self.pos].0 < block {
                    self.pos += 1;
                }
                match blocks.get(self.pos) {
                    Some(&(b, w)) if b == block => w,
                    _ => 0,
                }
            }
        }
    }
}

pub(crate) enum Blocks<'a> {
    Sparse(std::slice::Iter<'a, (usize, u64)>),
    Dense(std::iter::Enumerate<std::slice::Iter<'a, u64>>),
}

impl Iterator for Blocks<'_> {
    type Item = (usize, u64);

    #[inline]
    fn next(&mut self) -> Option<(usize, u64)> {
        match self {
            Blocks::Sparse(it) => it.next().copied(),
            Blocks::Dense(it) => it.find(|(_, &w)| w != 0).map(|(b, &w)| (b, w)),
        }
    }
}

pub(crate) struct Iter<'a> {
    blocks: Blocks<'a>,
    base: usize,
    word: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.word == 0 {
            let (block, word) = self.blocks.next()?;
            self.base = block * WORD_BITS;
            self.word = word;
        }
        let offset = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn dense_of(bits: &[usize]) -> BitSet {
        let mut set = BitSet::from_sorted(bits.iter().copied());
        set.densify();
        set
    }

    #[test]
    fn insert_reports_freshness() {
        let mut set = BitSet::new();
        assert!(set.insert(5));
        assert!(!set.insert(5));
        assert!(set.insert(1000));
        assert!(set.insert(3));
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![3, 5, 1000]);
        assert_eq!(set.len(), 3);
        assert_eq!(set.max(), Some(1000));
    }

    #[test]
    fn switches_to_dense_when_crowded() {
        let set = BitSet::from_sorted((0..64 * 16).step_by(64));
        assert!(set.is_dense());
        let sparse = BitSet::from_sorted((0..64 * 64 * 16).step_by(64 * 64));
        assert!(!sparse.is_dense());
    }

    #[test]
    fn equality_ignores_representation() {
        let bits = [1, 70, 700];
        assert_eq!(BitSet::from_sorted(bits), dense_of(&bits));
        assert_ne!(BitSet::from_sorted(bits), dense_of(&[1, 70]));
    }

    proptest! {
        #[test]
        fn ops_match_btreeset(
            a in proptest::collection::vec(0usize..3000, 0..200),
            b in proptest::collection::vec(0usize..3000, 0..200),
            dense_a: bool,
            dense_b: bool,
        ) {
            let sa: BTreeSet<usize> = a.iter().copied().collect();
            let sb: BTreeSet<usize> = b.iter().copied().collect();
            let mut x = BitSet::new();
            for &v in &a { x.insert(v); }
            let mut y = BitSet::from_sorted(sb.iter().copied());
            if dense_a { x.densify(); }
            if dense_b { y.densify(); }
            prop_assert_eq!(x.len(), sa.len());
            prop_assert_eq!(x.iter().collect::<Vec<_>>(), sa.iter().copied().collect::<Vec<_>>());

            let diff = x.difference(&y);
            prop_assert_eq!(diff.iter().collect::<Vec<_>>(), sa.difference(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(diff.len(), sa.difference(&sb).count());

            let mut u = x.clone();
            let added = u.union_with(&y);
            prop_assert_eq!(added, sb.difference(&sa).count());
            prop_assert_eq!(u.iter().collect::<Vec<_>>(), sa.union(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(u.len(), sa.union(&sb).count());
            for v in 0..3000 {
                prop_assert_eq!(u.contains(v), sa.contains(&v) || sb.contains(&v));
            }
        }
    }
}
