//! Run-length-limited constraints: membership, exact sequence counts and
//! noiseless capacity.

use alloc::vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::math::bisect;

/// At least `d` and at most `k` zeros between successive ones.
///
/// Runs before the first one and after the last one are only bounded by `k`
/// (never by `d`), so `(d, ∞)` with `d ≥ 1` constrains nothing but the gaps
/// between ones, and `(0, k)` means no more than `k` consecutive zeros anywhere.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RllConstraint {
    d: usize,
    k: Option<usize>,
}

impl RllConstraint {
    pub fn new(d: usize, k: Option<usize>) -> Result<Self> {
        match k {
            Some(k) if k < d => Err(Error::InvalidParameter("RLL constraint needs d <= k")),
            _ => Ok(RllConstraint { d, k }),
        }
    }

    /// `(d, ∞)`.
    pub fn d_infinity(d: usize) -> Self {
        RllConstraint { d, k: None }
    }

    /// `(0, k)`.
    pub fn zero_k(k: usize) -> Self {
        RllConstraint { d: 0, k: Some(k) }
    }

    pub fn unconstrained() -> Self {
        RllConstraint { d: 0, k: None }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn satisfied_by(&self, v: &BitVector) -> bool {
        satisfies(v, *self)
    }
}

impl fmt::Debug for RllConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "({},{})-RLL", self.d, k),
            None => write!(f, "({},inf)-RLL", self.d),
        }
    }
}

pub fn satisfies(v: &BitVector, c: RllConstraint) -> bool {
    let mut last_one: Option<usize> = None;
    for i in v.iter_ones() {
        let gap = match last_one {
            Some(prev) => i - prev - 1,
            None => i,
        };
        if last_one.is_some() && gap < c.d {
            return false;
        }
        if matches!(c.k, Some(k) if gap > k) {
            return false;
        }
        last_one = Some(i);
    }
    let trailing = match last_one {
        Some(prev) => v.len() - prev - 1,
        None => v.len(),
    };
    !matches!(c.k, Some(k) if trailing > k)
}

/// Number of length-`n` sequences satisfying `c`.
///
/// `(d, ∞)` uses the linear recurrence `T(n) = T(n−1) + T(n−d−1)` of its state
/// graph; finite `k` walks the transfer matrix over zero-run states.
pub fn count_sequences(n: usize, c: RllConstraint) -> BigUint {
    match c.k {
        None => count_d_infinity(n, c.d),
        Some(k) => count_transfer(n, c.d, k),
    }
}

fn count_d_infinity(n: usize, d: usize) -> BigUint {
    if n <= d {
        return BigUint::from(n + 1);
    }
    // Ring buffer of the last d+1 values T(j−d−1) ..= T(j−1).
    let mut window: alloc::vec::Vec<BigUint> = (0..=d).map(|j| BigUint::from(j + 1)).collect();
    let mut head = 0;
    for _ in d + 1..=n {
        let newest = &window[(head + d) % (d + 1)];
        let next = newest + &window[head];
        window[head] = next;
        head = (head + 1) % (d + 1);
    }
    window[(head + d) % (d + 1)].clone()
}

fn count_transfer(n: usize, d: usize, k: usize) -> BigUint {
    // State (started, run): `run` zeros since the last one (or since the
    // start when no one has been written yet).
    let mut before = vec![BigUint::zero(); k + 1];
    let mut after = vec![BigUint::zero(); k + 1];
    before[0] = BigUint::one();
    for _ in 0..n {
        let mut nb = vec![BigUint::zero(); k + 1];
        let mut na = vec![BigUint::zero(); k + 1];
        for run in 0..=k {
            if !before[run].is_zero() {
                if run < k {
                    nb[run + 1] += &before[run];
                }
                na[0] += &before[run];
            }
            if !after[run].is_zero() {
                if run < k {
                    na[run + 1] += &after[run];
                }
                if run >= d {
                    let v = after[run].clone();
                    na[0] += v;
                }
            }
        }
        before = nb;
        after = na;
    }
    before.iter().chain(after.iter()).fold(BigUint::zero(), |acc, x| acc + x)
}

/// `log2` of the largest eigenvalue of the constraint graph, by bisection on
/// its characteristic equation `Σ_{j=d}^{k} λ^{−(j+1)} = 1` over `[1, 2]`.
///
/// For `(d, ∞)` the equation is `λ^{d+1} = λ^d + 1`.
pub fn noiseless_capacity(c: RllConstraint, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    if c.d == 0 && c.k.is_none() {
        return Ok(1.0);
    }
    if c.k == Some(c.d) {
        // One periodic pattern up to phase: subexponential growth.
        return Ok(0.0);
    }
    let excess = move |x: f64| -> f64 {
        let s = match c.k {
            None => libm::pow(x, -(c.d as f64)) / (x - 1.0),
            Some(k) => (c.d..=k).map(|j| libm::pow(x, -((j + 1) as f64))).sum(),
        };
        s - 1.0
    };
    // The characteristic sum decreases from >= 1 near λ = 1 to < 1 at λ = 2.
    let lo = 1.0 + 1e-12;
    let root = if excess(2.0) >= 0.0 { 2.0 } else { bisect(excess, lo, 2.0, tol)? };
    Ok(libm::log2(root))
}

/// `v ↦ v ⊕ 1`; maps `(0,1)` sequences onto `(1,∞)` sequences and back.
pub fn complement(v: &BitVector) -> BitVector {
    v.complement()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    /// Count by checking every vector of length `n`.
    fn brute_count(n: usize, c: RllConstraint) -> u64 {
        (0u64..1 << n)
            .filter(|&x| satisfies(&BitVector::from_fn(n, |i| x >> i & 1 == 1), c))
            .count() as u64
    }

    #[test]
    fn satisfies_examples() {
        let one_inf = RllConstraint::d_infinity(1);
        let two_inf = RllConstraint::d_infinity(2);
        assert!(satisfies(&BitVector::zeros(9), one_inf));
        assert!(!satisfies(&bv(&[1, 1, 0]), one_inf));
        assert!(satisfies(&bv(&[1, 0, 0, 1]), two_inf));
        assert!(!satisfies(&bv(&[1, 0, 1, 0]), two_inf));
        // Leading and trailing zero runs are free under (d, ∞).
        assert!(satisfies(&bv(&[0, 1, 0, 0, 0]), two_inf));
        let zero_one = RllConstraint::zero_k(1);
        assert!(satisfies(&bv(&[1, 0, 1, 1, 0]), zero_one));
        assert!(!satisfies(&bv(&[1, 0, 0, 1]), zero_one));
        assert!(!satisfies(&bv(&[0, 0, 1]), zero_one));
        assert!(!satisfies(&bv(&[1, 0, 0]), zero_one));
    }

    #[test]
    fn count_examples() {
        let one_inf = RllConstraint::d_infinity(1);
        assert_eq!(count_sequences(0, one_inf), BigUint::one());
        assert_eq!(count_sequences(3, one_inf), BigUint::from(5u32));
        assert_eq!(count_sequences(4, one_inf), BigUint::from(8u32));
    }

    #[test]
    fn counts_match_brute_force() {
        let constraints = [
            RllConstraint::d_infinity(1),
            RllConstraint::d_infinity(2),
            RllConstraint::d_infinity(3),
            RllConstraint::zero_k(1),
            RllConstraint::zero_k(2),
            RllConstraint::new(1, Some(3)).unwrap(),
            RllConstraint::new(2, Some(7)).unwrap(),
            RllConstraint::unconstrained(),
        ];
        for c in constraints {
            for n in 0..=14 {
                assert_eq!(count_sequences(n, c), BigUint::from(brute_count(n, c)), "{c:?} n={n}");
            }
        }
    }

    #[test]
    fn fibonacci_counts() {
        let mut fib: Vec<BigUint> = vec![BigUint::zero(), BigUint::one()];
        for i in 2..=40 {
            let next = &fib[i - 1] + &fib[i - 2];
            fib.push(next);
        }
        for n in 0..=30 {
            assert_eq!(count_sequences(n, RllConstraint::d_infinity(1)), fib[n + 2]);
        }
    }

    #[test]
    fn capacity_values() {
        assert_eq!(noiseless_capacity(RllConstraint::unconstrained(), 1e-9).unwrap(), 1.0);
        let c1 = noiseless_capacity(RllConstraint::d_infinity(1), 1e-12).unwrap();
        // log2 of the golden ratio.
        assert!((c1 - libm::log2((1.0 + libm::sqrt(5.0)) / 2.0)).abs() < 1e-10);
        assert!((c1 - 0.6942).abs() < 1e-4);
        let c2 = noiseless_capacity(RllConstraint::d_infinity(2), 1e-12).unwrap();
        assert!((c2 - 0.5515).abs() < 1e-4);
        assert!(noiseless_capacity(RllConstraint::d_infinity(1), 0.0).is_err());
        // (0,1) and (1,∞) are complements of each other.
        let c01 = noiseless_capacity(RllConstraint::zero_k(1), 1e-12).unwrap();
        assert!((c01 - c1).abs() < 1e-10);
    }

    #[test]
    fn capacity_matches_growth_rate() {
        // Independent route: log-domain recurrence at n = 10^4.
        for d in 1..=4usize {
            let tol = 1e-4;
            let cap = noiseless_capacity(RllConstraint::d_infinity(d), tol).unwrap();
            let n = 10_000;
            let mut logs: Vec<f64> = (0..=d).map(|j| libm::log2((j + 1) as f64)).collect();
            for j in d + 1..=n {
                let a = logs[j - 1];
                let b = logs[j - d - 1];
                logs.push(crate::math::log2_add(a, b));
            }
            let growth = logs[n] / n as f64;
            assert!((growth - cap).abs() < 10.0 * tol, "d={d}: {growth} vs {cap}");
            let exact = crate::math::log2_biguint(&count_sequences(n, RllConstraint::d_infinity(d)));
            assert!((exact - logs[n]).abs() < 1e-6 * logs[n]);
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&bv(&[0, 1, 0, 1])), bv(&[1, 0, 1, 0]));
        assert_eq!(complement(&BitVector::zeros(5)), BitVector::ones(5));
    }

    #[test]
    fn rejects_d_above_k() {
        assert!(RllConstraint::new(3, Some(2)).is_err());
    }
}
