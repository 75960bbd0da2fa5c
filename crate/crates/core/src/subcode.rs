//! The `(d, ∞)`-constrained product subcode of RM(m, r_m).
//!
//! For `z = ⌈log2(d+1)⌉` the subcode is `{Eval(h·g)}` with `h = x_{m−z+1}⋯x_m`
//! and `deg g ≤ r_m − z` over the first `m − z` variables. Under lexicographic
//! order `Eval(h)` is one only at indices `≡ 2^z − 1 (mod 2^z)`, so every
//! codeword is supported on an arithmetic progression of step `2^z > d`.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::math::{bisect, binomial_sum, gaussian_tail, ratio_pow2};
use crate::rll::{satisfies, RllConstraint};
use crate::rm::{for_each_codeword, plotkin_split, RMCode, ENUMERATION_GUARD};

/// Listings of constrained codewords are kept only up to this many entries.
pub const LISTING_LIMIT: u64 = 10_000;

/// Inverse of the Gaussian tail: `t` with `Q(t) = p`, accurate to 1e-12.
pub fn q_inverse(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter("q_inverse needs 0 < p < 1"));
    }
    bisect(|t| gaussian_tail(t) - p, -40.0, 40.0, 1e-13)
}

/// `r_m = max{⌊m/2 + (√m/2)·Q⁻¹(1−R)⌋, 0}`, clamped to `m`. The RM(m, r_m)
/// sequence has rate tending to `R`.
pub fn rate_degree(m: usize, rate: f64) -> Result<usize> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter("rate must lie in (0, 1)"));
    }
    let mf = m as f64;
    let raw = libm::floor(mf / 2.0 + libm::sqrt(mf) / 2.0 * q_inverse(1.0 - rate)?);
    Ok(if raw <= 0.0 { 0 } else { (raw as usize).min(m) })
}

/// `⌈log2(d+1)⌉`: the number of trailing variables in the mask polynomial.
pub fn mask_width(d: usize) -> usize {
    let mut z = 0;
    while (1usize << z) < d + 1 {
        z += 1;
    }
    z
}

/// Parameters of the constrained subcode.
#[derive(Clone, Debug, PartialEq)]
pub struct SubcodeSpec {
    pub d: usize,
    pub m: usize,
    pub rate: f64,
    pub z: usize,
    pub r_m: usize,
    /// `binom(m−z, ≤ r_m−z)`, or zero when the subcode is `{0}`.
    pub message_bits: usize,
}

impl SubcodeSpec {
    /// `d = 0` gives `z = 0`, i.e. the whole RM(m, r_m) code.
    pub fn new(m: usize, rate: f64, d: usize) -> Result<Self> {
        let r_m = rate_degree(m, rate)?;
        let z = mask_width(d);
        let message_bits = if m >= z && r_m >= z {
            let dim = binomial_sum((m - z) as u64, (r_m - z) as i64);
            usize::try_from(dim).map_err(|_| Error::InvalidParameter("message length overflows"))?
        } else {
            0
        };
        Ok(SubcodeSpec { d, m, rate, z, r_m, message_bits })
    }

    pub fn block_length(&self) -> usize {
        1 << self.m
    }

    pub fn is_degenerate(&self) -> bool {
        self.message_bits == 0
    }

    pub fn constraint(&self) -> RllConstraint {
        RllConstraint::d_infinity(self.d)
    }
}

/// Exact rate `binom(m−z, ≤ r_m−z) / 2^m` next to its limit `2^{−z}·R`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubcodeRate {
    pub numerator: BigUint,
    /// The denominator is `2^denominator_log2`.
    pub denominator_log2: u64,
    pub value: f64,
    pub asymptote: f64,
}

impl SubcodeRate {
    pub fn denominator(&self) -> BigUint {
        BigUint::one() << self.denominator_log2
    }

    pub fn gap(&self) -> f64 {
        (self.value - self.asymptote).abs()
    }
}

pub fn subcode_rate(m: usize, rate: f64, d: usize) -> Result<SubcodeRate> {
    let r_m = rate_degree(m, rate)?;
    let z = mask_width(d);
    let numerator = if m >= z && r_m >= z {
        binomial_sum((m - z) as u64, (r_m - z) as i64)
    } else {
        BigUint::ZERO
    };
    Ok(SubcodeRate {
        value: ratio_pow2(&numerator, m as u64),
        numerator,
        denominator_log2: m as u64,
        asymptote: rate / (1u64 << z) as f64,
    })
}

/// Encoder for the constrained subcode.
#[derive(Clone, Debug)]
pub struct Subcode {
    spec: SubcodeSpec,
    /// RM(m−z, r_m−z) carrying the free polynomial `g`.
    inner: Option<RMCode>,
}

impl Subcode {
    pub fn new(m: usize, rate: f64, d: usize) -> Result<Self> {
        let spec = SubcodeSpec::new(m, rate, d)?;
        let inner = if spec.is_degenerate() {
            None
        } else {
            Some(RMCode::new(m - spec.z, spec.r_m - spec.z)?)
        };
        Ok(Subcode { spec, inner })
    }

    pub fn spec(&self) -> &SubcodeSpec {
        &self.spec
    }

    pub fn message_bits(&self) -> usize {
        self.spec.message_bits
    }

    pub fn block_length(&self) -> usize {
        self.spec.block_length()
    }

    /// The RM(m, r_m) code the subcode sits in.
    pub fn parent_code(&self) -> Result<RMCode> {
        RMCode::new(self.spec.m, self.spec.r_m)
    }

    /// `Eval(x_{m−z+1}⋯x_m)`: ones at indices `≡ 2^z − 1 (mod 2^z)`.
    pub fn mask(&self) -> BitVector {
        let step = 1usize << self.spec.z;
        BitVector::from_fn(self.block_length(), |i| i % step == step - 1)
    }

    /// `Eval(h·g)` for the `g` whose coefficients in the canonical basis of
    /// RM(m−z, r_m−z) are `msg`. Multiplying by `h` places `Eval(g)` on the
    /// mask positions and zeros elsewhere.
    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        if msg.len() != self.spec.message_bits {
            return Err(Error::DimensionMismatch { expected: self.spec.message_bits, found: msg.len() });
        }
        let mut out = BitVector::zeros(self.block_length());
        let Some(inner) = &self.inner else {
            return Ok(out);
        };
        let g = inner.encode(msg)?;
        let z = self.spec.z;
        let offset = (1usize << z) - 1;
        for j in g.iter_ones() {
            out.set(j << z | offset, true);
        }
        Ok(out)
    }

    /// Generator rows `Eval(h·b)` for every basis monomial `b` of `g`.
    pub fn generator(&self) -> Result<BitMatrix> {
        let k = self.spec.message_bits;
        let rows = (0..k)
            .map(|i| self.encode(&BitVector::from_fn(k, |j| j == i)))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(self.block_length(), rows)
    }
}

/// Constraint-satisfying codewords of a code: their number and, when at most
/// [`LISTING_LIMIT`], the codewords themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstrainedCount {
    pub count: u64,
    pub listing: Option<Vec<BitVector>>,
}

/// The largest `c`-constrained subcode of the row space of `generator`, by
/// exhaustive enumeration.
pub fn largest_rll_subcode_of(generator: &BitMatrix, c: RllConstraint) -> Result<ConstrainedCount> {
    let mut count = 0u64;
    let mut listing = Some(Vec::new());
    for_each_codeword(generator, |word| {
        if satisfies(word, c) {
            count += 1;
            if count > LISTING_LIMIT {
                listing = None;
            } else if let Some(list) = listing.as_mut() {
                list.push(word.clone());
            }
        }
    })?;
    Ok(ConstrainedCount { count, listing })
}

pub fn largest_rll_subcode_bruteforce(code: &RMCode, c: RllConstraint) -> Result<ConstrainedCount> {
    largest_rll_subcode_of(code.generator(), c)
}

/// Codewords whose Plotkin halves satisfy `supp(g) ⊆ supp(h)`, a necessary
/// condition for `(1, ∞)`.
pub fn lemma3_filter_count(code: &RMCode) -> Result<u64> {
    if code.dimension() > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded { dim: code.dimension(), guard: ENUMERATION_GUARD });
    }
    if code.m() == 0 {
        return Err(Error::InvalidParameter("Plotkin split needs m >= 1"));
    }
    let mut count = 0u64;
    code.for_each_codeword(|word| {
        let (g, h) = plotkin_split(word).expect("codeword length is a power of two");
        if g.is_subset_of(&h) {
            count += 1;
        }
    })?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rm::{eval_monomial, Monomial};

    #[test]
    fn q_inverse_examples() {
        assert_eq!(q_inverse(0.5).unwrap(), 0.0);
        let q1 = gaussian_tail(1.0);
        assert!((q_inverse(q1).unwrap() - 1.0).abs() < 1e-9);
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            let a = q_inverse(1.0 - r).unwrap();
            let b = q_inverse(r).unwrap();
            assert!((a + b).abs() < 1e-12, "R={r}");
            assert!((gaussian_tail(b) - r).abs() < 1e-12);
        }
        assert!(q_inverse(0.0).is_err());
        assert!(q_inverse(1.0).is_err());
    }

    #[test]
    fn rate_degree_examples() {
        for m in 1..=40 {
            assert_eq!(rate_degree(m, 0.5).unwrap(), m / 2);
        }
        assert_eq!(rate_degree(9, 0.5).unwrap(), 4);
        assert_eq!(rate_degree(1, 0.01).unwrap(), 0);
        assert_eq!(rate_degree(4, 0.999).unwrap(), 4);
        assert!(rate_degree(5, 1.0).is_err());
    }

    #[test]
    fn rate_degree_shift_bound() {
        for &rate in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let q = q_inverse(1.0 - rate).unwrap().abs();
            for m in 2..=200usize {
                for t in 1..m {
                    let diff = rate_degree(m, rate).unwrap() as f64 - rate_degree(m - t, rate).unwrap() as f64;
                    let bound = t as f64 / 2.0 + libm::sqrt(t as f64) / 2.0 * q + 1.0;
                    assert!(diff.abs() <= bound, "m={m} t={t} R={rate}");
                }
            }
        }
    }

    #[test]
    fn mask_widths() {
        assert_eq!(mask_width(0), 0);
        assert_eq!(mask_width(1), 1);
        assert_eq!(mask_width(2), 2);
        assert_eq!(mask_width(3), 2);
        assert_eq!(mask_width(4), 3);
        assert_eq!(mask_width(7), 3);
        assert_eq!(mask_width(8), 4);
    }

    #[test]
    fn small_subcode_image() {
        let sub = Subcode::new(3, 0.5, 1).unwrap();
        assert_eq!(sub.spec().r_m, 1);
        assert_eq!(sub.message_bits(), 1);
        let x3 = eval_monomial(Monomial::new(&[3]).unwrap(), 3).unwrap();
        assert_eq!(sub.encode(&BitVector::zeros(1)).unwrap(), BitVector::zeros(8));
        assert_eq!(sub.encode(&BitVector::ones(1)).unwrap(), x3);
        assert_eq!(sub.mask(), x3);
        assert!(sub.encode(&BitVector::zeros(2)).is_err());
    }

    #[test]
    fn every_codeword_of_m4_subcode_is_constrained() {
        // R chosen so that r_4 = 2.
        let sub = Subcode::new(4, 0.5, 1).unwrap();
        assert_eq!(sub.spec().r_m, 2);
        assert_eq!(sub.message_bits(), 4);
        let generator = sub.generator().unwrap();
        let mut seen = 0;
        for_each_codeword(&generator, |c| {
            assert!(satisfies(c, RllConstraint::d_infinity(1)));
            seen += 1;
        })
        .unwrap();
        assert_eq!(seen, 16);
    }

    #[test]
    fn degenerate_subcode() {
        // m = 2, R = 0.5: r_m = 1 < z = 2 for d = 3.
        let sub = Subcode::new(2, 0.5, 3).unwrap();
        assert!(sub.spec().is_degenerate());
        assert_eq!(sub.encode(&BitVector::zeros(0)).unwrap(), BitVector::zeros(4));
        let rate = subcode_rate(2, 0.5, 3).unwrap();
        assert_eq!(rate.value, 0.0);
    }

    #[test]
    fn full_code_when_unconstrained() {
        let sub = Subcode::new(5, 0.5, 0).unwrap();
        assert_eq!(sub.message_bits(), RMCode::new(5, 2).unwrap().dimension());
    }

    #[test]
    fn asymptotes() {
        assert_eq!(subcode_rate(20, 0.5, 1).unwrap().asymptote, 0.25);
        assert_eq!(subcode_rate(20, 0.5, 3).unwrap().asymptote, 0.125);
        assert_eq!(subcode_rate(20, 0.5, 2).unwrap().asymptote, 0.125);
        let r = subcode_rate(10, 0.5, 1).unwrap();
        // binom(9, <= 4) / 2^10 = 256 / 1024
        assert_eq!(r.numerator, BigUint::from(256u32));
        assert_eq!(r.denominator(), BigUint::from(1024u32));
        assert_eq!(r.value, 0.25);
    }

    #[test]
    fn brute_force_examples() {
        let rm21 = RMCode::new(2, 1).unwrap();
        let found = largest_rll_subcode_bruteforce(&rm21, RllConstraint::d_infinity(1)).unwrap();
        assert_eq!(found.count, 4);
        let mut listing: Vec<_> = found.listing.unwrap().iter().map(|c| c.to_bits()).collect();
        listing.sort();
        assert_eq!(listing, [[0, 0, 0, 0], [0, 1, 0, 1], [1, 0, 0, 1], [1, 0, 1, 0]]);

        for m in 1..=5 {
            let rep = RMCode::new(m, 0).unwrap();
            assert_eq!(largest_rll_subcode_bruteforce(&rep, RllConstraint::d_infinity(1)).unwrap().count, 1);
        }
        let rm42 = RMCode::new(4, 2).unwrap();
        let all = largest_rll_subcode_bruteforce(&rm42, RllConstraint::unconstrained()).unwrap();
        assert_eq!(all.count, 1 << 11);

        assert!(lemma3_filter_count(&rm21).unwrap() >= 4);
    }
}
