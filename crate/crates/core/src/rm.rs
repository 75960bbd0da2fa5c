//! Binary Reed-Muller codes under lexicographic evaluation order.
//!
//! Evaluation point `(z_1, …, z_m)` sits at index `Σ z_i·2^{m−i}`: `x_1` is the
//! most significant coordinate and `x_m` toggles fastest. With this layout the
//! product of the last `z` variables evaluates to one exactly at indices
//! `≡ 2^z − 1 (mod 2^z)`, and the Plotkin halves pair up adjacent coordinates.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, SolutionSet, SpanBasis};
use crate::math::binomial_sum;

/// Largest code dimension any exhaustive enumeration will accept.
pub const ENUMERATION_GUARD: usize = 28;

/// Largest number of variables a code may be built with (block length 2^16).
pub const MAX_VARIABLES: usize = 16;

/// A multilinear monomial `∏_{j∈S} x_j`, variables numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    mask: u32,
}

impl Monomial {
    /// The constant monomial 1.
    pub const ONE: Monomial = Monomial { mask: 0 };

    pub fn new(vars: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &v in vars {
            if v == 0 || v > 32 {
                return Err(Error::IndexOutOfRange { index: v, bound: 32 });
            }
            mask |= 1 << (v - 1);
        }
        Ok(Monomial { mask })
    }

    /// Product of variables `first..=last`.
    pub fn product_of_range(first: usize, last: usize) -> Result<Self> {
        let vars: Vec<usize> = (first..=last).collect();
        Self::new(&vars)
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Variable indices, ascending.
    pub fn vars(&self) -> Vec<usize> {
        (1..=32).filter(|&v| self.mask >> (v - 1) & 1 == 1).collect()
    }

    pub fn max_var(&self) -> usize {
        32 - self.mask.leading_zeros() as usize
    }

    /// Mask over point indices (for `m` variables) whose bits must all be set
    /// for the monomial to evaluate to one.
    fn index_mask(&self, m: usize) -> usize {
        self.vars().into_iter().fold(0, |acc, v| acc | 1 << (m - v))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.vars().cmp(&other.vars()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mask == 0 {
            return f.write_str("1");
        }
        let vars = self.vars();
        for (i, v) in vars.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

/// Evaluation point for `index` among the `2^m` lexicographically ordered points.
pub fn lex_point(index: usize, m: usize) -> Result<Vec<u8>> {
    if m >= usize::BITS as usize || index >= 1 << m {
        return Err(Error::IndexOutOfRange { index, bound: 1usize.checked_shl(m as u32).unwrap_or(0) });
    }
    Ok((1..=m).map(|i| (index >> (m - i) & 1) as u8).collect())
}

/// Inverse of [`lex_point`].
pub fn point_index(point: &[u8]) -> Result<usize> {
    let m = point.len();
    point.iter().enumerate().try_fold(0usize, |acc, (i, &z)| match z {
        0 | 1 => Ok(acc | (z as usize) << (m - 1 - i)),
        _ => Err(Error::InvalidParameter("evaluation point coordinates must be 0 or 1")),
    })
}

/// `Eval(∏_{j∈S} x_j)` over all `2^m` points.
pub fn eval_monomial(monomial: Monomial, m: usize) -> Result<BitVector> {
    if monomial.max_var() > m {
        return Err(Error::IndexOutOfRange { index: monomial.max_var(), bound: m });
    }
    if m > MAX_VARIABLES {
        return Err(Error::InvalidParameter("too many variables"));
    }
    let mask = monomial.index_mask(m);
    Ok(BitVector::from_fn(1 << m, |p| p & mask == mask))
}

/// Monomials of degree at most `r` in `m` variables, by degree then lexicographically.
pub fn canonical_basis(m: usize, r: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=r.min(m) {
        let mut combo: Vec<usize> = (1..=deg).collect();
        loop {
            out.push(Monomial::new(&combo).expect("variables within range"));
            // Advance to the next combination in lexicographic order.
            let Some(i) = (0..deg).rev().find(|&i| combo[i] < m - (deg - 1 - i)) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..deg {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Histogram of codeword weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightDistribution { counts }
    }

    /// Block length.
    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    /// Number of codewords of weight `w` (zero outside `[0, n]`).
    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Nonzero entries as `(weight, count)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, &c)| (w, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.length();
        (0..=n).all(|w| self.counts[w] == self.counts[n - w])
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.support().map(|(w, _)| w).find(|&w| w > 0)
    }

    /// Codewords with weight in the closed range `[lo, hi]`.
    pub fn range_count(&self, lo: usize, hi: usize) -> u64 {
        (lo..=hi.min(self.length())).map(|w| self.count(w)).sum()
    }
}

/// Calls `f` on every codeword of the row space of `generator`, stepping
/// through messages in Gray-code order so each step costs one row XOR.
pub fn for_each_codeword(generator: &BitMatrix, mut f: impl FnMut(&BitVector)) -> Result<()> {
    let k = generator.nrows();
    if k > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded { dim: k, guard: ENUMERATION_GUARD });
    }
    let mut word = BitVector::zeros(generator.ncols());
    f(&word);
    for step in 1u64..(1u64 << k) {
        word.xor_assign(generator.row(step.trailing_zeros() as usize));
        f(&word);
    }
    Ok(())
}

/// Like [`for_each_codeword`] but also passes the current message.
pub fn for_each_message(generator: &BitMatrix, mut f: impl FnMut(&BitVector, &BitVector)) -> Result<()> {
    let k = generator.nrows();
    if k > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded { dim: k, guard: ENUMERATION_GUARD });
    }
    let mut msg = BitVector::zeros(k);
    let mut word = BitVector::zeros(generator.ncols());
    f(&msg, &word);
    for step in 1u64..(1u64 << k) {
        let row = step.trailing_zeros() as usize;
        msg.flip(row);
        word.xor_assign(generator.row(row));
        f(&msg, &word);
    }
    Ok(())
}

/// Weight histogram of the row space of any generator matrix.
pub fn weight_distribution_of(generator: &BitMatrix) -> Result<WeightDistribution> {
    let mut counts = alloc::vec![0u64; generator.ncols() + 1];
    for_each_codeword(generator, |c| counts[c.weight()] += 1)?;
    Ok(WeightDistribution { counts })
}

/// Basis of the codewords vanishing on `positions`, for any linear code.
pub fn shorten_generator(generator: &BitMatrix, positions: &[usize]) -> Result<BitMatrix> {
    let restricted = generator.select_columns(positions)?.transpose();
    let rows = restricted
        .nullspace()
        .iter()
        .map(|u| generator.combine_rows(u))
        .collect::<Result<Vec<_>>>()?;
    BitMatrix::from_rows(generator.ncols(), rows)
}

/// Number of codewords whose support contains `supp(g)`, for any linear code.
///
/// The constraint "one on every coordinate of `supp(g)`" is a linear system in
/// the message; it has either no solution or `2^{k − rank}` of them.
pub fn superset_count_of(generator: &BitMatrix, g: &BitVector) -> Result<BigUint> {
    if g.len() != generator.ncols() {
        return Err(Error::DimensionMismatch { expected: generator.ncols(), found: g.len() });
    }
    let support: Vec<usize> = g.iter_ones().collect();
    let system = generator.select_columns(&support)?.transpose();
    let solutions = system.solve(&BitVector::ones(support.len()))?;
    Ok(match solutions {
        SolutionSet::Inconsistent => BigUint::zero(),
        other => BigUint::one() << other.log2_count().unwrap_or(0),
    })
}

/// Splits a length-`2^m` word as `f = g + x_m·h`: `g` is the word on even
/// coordinates and `h` the XOR of each even/odd pair.
pub fn plotkin_split(c: &BitVector) -> Result<(BitVector, BitVector)> {
    let n = c.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter("length must be a power of two, at least 2"));
    }
    let half = n / 2;
    let g = BitVector::from_fn(half, |j| c.get(2 * j));
    let h = BitVector::from_fn(half, |j| c.get(2 * j) ^ c.get(2 * j + 1));
    Ok((g, h))
}

/// Inverse of [`plotkin_split`]: interleaves `g` and `g ⊕ h`.
pub fn plotkin_join(g: &BitVector, h: &BitVector) -> Result<BitVector> {
    if g.len() != h.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), found: h.len() });
    }
    Ok(BitVector::from_fn(2 * g.len(), |i| {
        let j = i / 2;
        if i % 2 == 0 {
            g.get(j)
        } else {
            g.get(j) ^ h.get(j)
        }
    }))
}

/// RM(m, r) with its canonical monomial basis and generator matrix.
#[derive(Clone, Debug)]
pub struct RMCode {
    m: usize,
    r: usize,
    basis: Vec<Monomial>,
    generator: BitMatrix,
}

impl RMCode {
    pub fn new(m: usize, r: usize) -> Result<Self> {
        if m > MAX_VARIABLES {
            return Err(Error::InvalidParameter("RM code needs m <= 16"));
        }
        if r > m {
            return Err(Error::InvalidParameter("RM code needs r <= m"));
        }
        let basis = canonical_basis(m, r);
        let rows = basis
            .iter()
            .map(|&mono| eval_monomial(mono, m))
            .collect::<Result<Vec<_>>>()?;
        let generator = BitMatrix::from_rows(1 << m, rows)?;
        Ok(RMCode { m, r, basis, generator })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn length(&self) -> usize {
        1 << self.m
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn min_distance(&self) -> usize {
        1 << (self.m - self.r)
    }

    /// `dimension / length`.
    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.length() as f64
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// `msg · G`.
    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        self.generator.combine_rows(msg)
    }

    /// Echelon basis of the code, for repeated membership tests.
    pub fn span(&self) -> SpanBasis {
        let mut span = SpanBasis::new(self.length());
        for row in self.generator.rows() {
            span.insert(row, false).expect("untagged rows never conflict");
        }
        span
    }

    pub fn contains(&self, word: &BitVector) -> Result<bool> {
        if word.len() != self.length() {
            return Err(Error::DimensionMismatch { expected: self.length(), found: word.len() });
        }
        Ok(self.span().reduce(word).is_some())
    }

    pub fn for_each_codeword(&self, f: impl FnMut(&BitVector)) -> Result<()> {
        for_each_codeword(&self.generator, f)
    }

    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        weight_distribution_of(&self.generator)
    }

    /// Basis (full-length rows) of `{c ∈ code : c_i = 0 for i ∈ positions}`.
    pub fn shorten(&self, positions: &[usize]) -> Result<BitMatrix> {
        shorten_generator(&self.generator, positions)
    }

    /// Number of codewords `h` with `supp(g) ⊆ supp(h)`.
    pub fn superset_count(&self, g: &BitVector) -> Result<BigUint> {
        superset_count_of(&self.generator, g)
    }

    /// `binom(m, ≤ r)` by the closed-form sum, independent of the basis.
    pub fn expected_dimension(m: usize, r: usize) -> BigUint {
        binomial_sum(m as u64, r as i64)
    }
}
