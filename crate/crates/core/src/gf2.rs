//! Dense linear algebra over GF(2).
//!
//! Vectors are packed 64 coordinates to a word, coordinate `i` living in bit
//! `i % 64` of word `i / 64`. Padding bits past the logical length are kept at
//! zero by every operation, so word-wise equality and popcounts are exact.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector { len, words: vec![!0; words_for(len)] };
        v.clear_padding();
        v
    }

    /// Builds a vector from 0/1 values; any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i] != 0)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        v
    }

    /// Vector with ones exactly at `positions`.
    pub fn from_support(len: usize, positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = Self::zeros(len);
        for i in positions {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, bound: len });
            }
            v.set(i, true);
        }
        Ok(v)
    }

    fn clear_padding(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Bitwise complement.
    pub fn complement(&self) -> BitVector {
        let mut out = BitVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_padding();
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// True when `supp(self) ⊆ supp(other)`.
    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in subset test");
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Indices of the set coordinates, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + b)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Highest set coordinate, if any.
    fn leading_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Outcome of solving `A·x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSet {
    Unique(BitVector),
    /// Every solution is `particular` plus a combination of `nullspace`.
    Affine { particular: BitVector, nullspace: Vec<BitVector> },
    Inconsistent,
}

impl SolutionSet {
    pub fn is_consistent(&self) -> bool {
        !matches!(self, SolutionSet::Inconsistent)
    }

    /// Base-2 logarithm of the number of solutions, `None` when inconsistent.
    pub fn log2_count(&self) -> Option<usize> {
        match self {
            SolutionSet::Unique(_) => Some(0),
            SolutionSet::Affine { nullspace, .. } => Some(nullspace.len()),
            SolutionSet::Inconsistent => None,
        }
    }
}

/// Per-coordinate status of a linear code restricted by known coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Determined(bool),
    Ambiguous,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Column `c` as a vector of length `nrows`.
    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_fn(self.rows.len(), |r| self.rows[r].get(c))
    }

    /// The submatrix keeping only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<BitMatrix> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange { index: c, bound: self.cols });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| BitVector::from_fn(columns.len(), |j| row.get(columns[j])))
            .collect();
        Ok(BitMatrix { cols: columns.len(), rows })
    }

    /// Row combination `x·M`; `x` selects rows.
    pub fn combine_rows(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: x.len() });
        }
        let mut out = BitVector::zeros(self.cols);
        for i in x.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    /// Matrix-vector product `M·x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok(BitVector::from_fn(self.rows.len(), |r| self.rows[r].dot(x)))
    }

    /// Gaussian elimination in place. With `reduced` the pivot columns are
    /// cleared above as well as below. Returns pivot columns, ascending; the
    /// first `pivots.len()` rows are the nonzero ones afterwards.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows.len() {
                break;
            }
            let Some(p) = (next..self.rows.len()).find(|&r| self.rows[r].get(c)) else {
                continue;
            };
            self.rows.swap(next, p);
            let pivot_row = self.rows[next].clone();
            let start = if reduced { 0 } else { next + 1 };
            for r in start..self.rows.len() {
                if r != next && self.rows[r].get(c) {
                    self.rows[r].xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    /// Reduced row-echelon form (same shape, zero rows last) and pivot columns.
    pub fn row_reduce(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    /// Basis of `{x : M·x = 0}`.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let (rref, pivots) = self.row_reduce();
        nullspace_from_rref(&rref, &pivots, self.cols)
    }

    /// Solves `A·x = b`.
    pub fn solve(&self, b: &BitVector) -> Result<SolutionSet> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: b.len() });
        }
        let n = self.cols;
        let augmented: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| BitVector::from_fn(n + 1, |c| if c < n { row.get(c) } else { b.get(r) }))
            .collect();
        let mut aug = BitMatrix { cols: n + 1, rows: augmented };
        let pivots = aug.eliminate(true);
        if pivots.last() == Some(&n) {
            return Ok(SolutionSet::Inconsistent);
        }
        let mut particular = BitVector::zeros(n);
        for (r, &c) in pivots.iter().enumerate() {
            particular.set(c, aug.rows[r].get(n));
        }
        let nullspace = nullspace_from_rref(&aug, &pivots, n);
        Ok(if nullspace.is_empty() {
            SolutionSet::Unique(particular)
        } else {
            SolutionSet::Affine { particular, nullspace }
        })
    }

    /// Whether `v` lies in the row space (rank comparison of `M` and `M` with `v` appended).
    pub fn row_space_contains(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let mut augmented = self.clone();
        augmented.rows.push(v.clone());
        Ok(augmented.rank() == self.rank())
    }

    /// For a generator `G` (rows span the code) and known coordinate values,
    /// classifies every coordinate as forced or free across all codewords
    /// agreeing with `known`.
    ///
    /// Coordinate `i` is forced exactly when column `i` lies in the span of
    /// the known columns.
    pub fn determined_coordinates(&self, known: &BTreeMap<usize, bool>) -> Result<Vec<Coordinate>> {
        let columns = self.transpose();
        let mut span = SpanBasis::new(self.rows.len());
        for (&i, &bit) in known {
            if i >= self.cols {
                return Err(Error::IndexOutOfRange { index: i, bound: self.cols });
            }
            span.insert(columns.row(i), bit)?;
        }
        Ok((0..self.cols)
            .map(|i| match known.get(&i) {
                Some(&bit) => Coordinate::Determined(bit),
                None => match span.reduce(columns.row(i)) {
                    Some(bit) => Coordinate::Determined(bit),
                    None => Coordinate::Ambiguous,
                },
            })
            .collect())
    }
}

fn nullspace_from_rref(rref: &BitMatrix, pivots: &[usize], n: usize) -> Vec<BitVector> {
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        if c < n {
            is_pivot[c] = true;
        }
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVector::zeros(n);
            v.set(f, true);
            for (r, &c) in pivots.iter().enumerate() {
                if c < n && rref.rows[r].get(f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect()
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        f.write_str("]")
    }
}

/// Incrementally grown span of vectors, each tagged with a parity value.
///
/// This is the elimination kernel behind erasure decoding: vectors are
/// generator columns, tags are the observed bits. A column reduces to zero
/// exactly when it lies in the span, and the accumulated tag is then the bit
/// every consistent codeword carries there.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    dim: usize,
    by_lead: Vec<Option<usize>>,
    basis: Vec<(BitVector, bool)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis { dim, by_lead: vec![None; dim], basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    /// Reduces `v` as far as the basis allows. Returns the residual's leading
    /// coordinate (`None` when the residual is zero) and the accumulated tag.
    fn reduce_inner(&self, v: &mut BitVector, tag: &mut bool) -> Option<usize> {
        while let Some(lead) = v.leading_one() {
            let Some(b) = self.by_lead[lead] else {
                return Some(lead);
            };
            let (row, t) = &self.basis[b];
            v.xor_assign(row);
            *tag ^= t;
        }
        None
    }

    /// Adds `v` with tag `value`. Returns whether the rank grew; a dependent
    /// vector whose tag disagrees with the span is an inconsistency.
    pub fn insert(&mut self, v: &BitVector, value: bool) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let mut residual = v.clone();
        let mut tag = value;
        match self.reduce_inner(&mut residual, &mut tag) {
            Some(lead) => {
                self.by_lead[lead] = Some(self.basis.len());
                self.basis.push((residual, tag));
                Ok(true)
            }
            None if tag => Err(Error::Inconsistent),
            None => Ok(false),
        }
    }

    /// The forced tag of `v` if it is in the span.
    pub fn reduce(&self, v: &BitVector) -> Option<bool> {
        let mut residual = v.clone();
        let mut tag = false;
        match self.reduce_inner(&mut residual, &mut tag) {
            Some(_) => None,
            None => Some(tag),
        }
    }

    /// When the span is full, the unique `u` with `u·v = tag` for every
    /// inserted `(v, tag)`.
    pub fn solve_full(&self) -> Option<BitVector> {
        if !self.is_full() {
            return None;
        }
        let mut u = BitVector::zeros(self.dim);
        for lead in 0..self.dim {
            let (row, tag) = &self.basis[self.by_lead[lead]?];
            // `u` only has coordinates below `lead` set so far.
            let bit = tag ^ row.dot(&u);
            u.set(lead, bit);
        }
        Some(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    fn rows(bits: &[&[u8]]) -> BitMatrix {
        let cols = bits[0].len();
        BitMatrix::from_rows(cols, bits.iter().map(|r| BitVector::from_bits(r)).collect()).unwrap()
    }

    #[test]
    fn padding_stays_clear() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.complement().weight(), 0);
        let z = BitVector::zeros(70).complement();
        assert_eq!(z, v);
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(4, 8).rank(), 0);
        // RM(3,1) generator: 1, x1, x2, x3 under lexicographic points.
        let g = rows(&[
            &[1, 1, 1, 1, 1, 1, 1, 1],
            &[0, 0, 0, 0, 1, 1, 1, 1],
            &[0, 0, 1, 1, 0, 0, 1, 1],
            &[0, 1, 0, 1, 0, 1, 0, 1],
        ]);
        assert_eq!(g.rank(), 4);
    }

    #[test]
    fn row_reduce_examples() {
        let (r, p) = BitMatrix::identity(3).row_reduce();
        assert_eq!(r, BitMatrix::identity(3));
        assert_eq!(p, [0, 1, 2]);

        let single = rows(&[&[1, 1, 0]]);
        let (r, p) = single.row_reduce();
        assert_eq!(r, single);
        assert_eq!(p, [0]);

        let dependent = rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let (r, p) = dependent.row_reduce();
        assert_eq!(p, [0, 1]);
        assert_eq!(r, rows(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]));
    }

    #[test]
    fn solve_examples() {
        let b = BitVector::from_bits(&[1, 0, 1]);
        assert_eq!(BitMatrix::identity(3).solve(&b).unwrap(), SolutionSet::Unique(b.clone()));

        let zero = BitMatrix::zeros(2, 3);
        assert_eq!(zero.solve(&BitVector::from_bits(&[1, 0])).unwrap(), SolutionSet::Inconsistent);

        let a = rows(&[&[1, 1]]);
        match a.solve(&BitVector::from_bits(&[1])).unwrap() {
            SolutionSet::Affine { particular, nullspace } => {
                assert_eq!(a.mul_vec(&particular).unwrap(), BitVector::from_bits(&[1]));
                assert_eq!(nullspace, [BitVector::from_bits(&[1, 1])]);
            }
            other => panic!("expected affine, got {other:?}"),
        }

        assert_eq!(
            a.solve(&BitVector::zeros(2)),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn determined_coordinates_examples() {
        let repetition = rows(&[&[1, 1, 1, 1]]);
        let known = BTreeMap::from([(0, true)]);
        assert_eq!(
            repetition.determined_coordinates(&known).unwrap(),
            [Coordinate::Determined(true); 4]
        );

        let rm21 = rows(&[&[1, 1, 1, 1], &[0, 0, 1, 1], &[0, 1, 0, 1]]);
        assert_eq!(
            rm21.determined_coordinates(&BTreeMap::new()).unwrap(),
            [Coordinate::Ambiguous; 4]
        );
        let known = BTreeMap::from([(0, false), (1, false), (2, false)]);
        assert_eq!(
            rm21.determined_coordinates(&known).unwrap()[3],
            Coordinate::Determined(false)
        );

        // 0 and 1 both zero forces 2 == 3 but not 2 alone.
        let known = BTreeMap::from([(0, false), (1, false)]);
        let status = rm21.determined_coordinates(&known).unwrap();
        assert_eq!(status[2], Coordinate::Ambiguous);
    }

    #[test]
    fn determined_coordinates_rejects_inconsistent_observation() {
        let repetition = rows(&[&[1, 1, 1, 1]]);
        let known = BTreeMap::from([(0, true), (2, false)]);
        assert_eq!(repetition.determined_coordinates(&known), Err(Error::Inconsistent));
    }

    #[test]
    fn column_span_solve_full() {
        let g = rows(&[&[1, 1, 1, 1], &[0, 0, 1, 1], &[0, 1, 0, 1]]);
        let msg = BitVector::from_bits(&[1, 0, 1]);
        let cw = g.combine_rows(&msg).unwrap();
        let cols = g.transpose();
        let mut span = SpanBasis::new(3);
        for i in [3, 1, 0] {
            span.insert(cols.row(i), cw.get(i)).unwrap();
        }
        assert!(span.is_full());
        assert_eq!(span.solve_full().unwrap(), msg);
    }

    #[test]
    fn iter_ones_crosses_words() {
        let v = BitVector::from_support(200, [0, 63, 64, 130, 199]).unwrap();
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), [0, 63, 64, 130, 199]);
        assert_eq!(v.leading_one(), Some(199));
    }
}
