//! Numeric helpers: exact binomial partial sums, base-2 log-domain
//! arithmetic, the Gaussian tail function and a bracketing root finder.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `C(n, k)` as an exact integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `Σ_{i=0}^{r} C(n, i)`, the dimension of RM(n, r). Zero for negative `r`.
pub fn binomial_sum(n: u64, r: i64) -> BigUint {
    if r < 0 {
        return BigUint::zero();
    }
    let r = (r as u64).min(n);
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 0..r {
        term *= n - i;
        term /= i + 1;
        total += &term;
    }
    total
}

/// `binomial_sum` as `f64`, for exponents in log-domain formulas.
pub fn binomial_sum_f64(n: u64, r: i64) -> f64 {
    biguint_to_f64(&binomial_sum(n, r))
}

pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `log2(x)` for an arbitrary-size integer; `-inf` at zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log2(biguint_to_f64(x));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    libm::log2(top as f64) + shift as f64
}

/// `num / 2^exp` as `f64`, correctly scaled even when both sides overflow.
pub fn ratio_pow2(num: &BigUint, exp: u64) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // Keep the top 64 bits; the rest is below f64 precision.
    let shift = num.bits().saturating_sub(64);
    let top = (num >> shift).to_u64().unwrap_or(u64::MAX) as f64;
    let scale = (shift as i64 - exp as i64).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    libm::scalbn(top, scale)
}

/// `log2(2^a + 2^b)`.
pub fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log2(1.0 + libm::exp2(lo - hi))
}

/// `log2(Σ 2^x_i)` with max extraction; `-inf` for an empty sum.
pub fn log2_sum_exp2(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = xs.iter().map(|&x| libm::exp2(x - max)).sum();
    max + libm::log2(s)
}

/// Natural-log variant of [`log2_sum_exp2`].
pub fn ln_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = xs.iter().map(|&x| libm::exp(x - max)).sum();
    max + libm::log(s)
}

/// Standard normal tail `Q(t) = P(Z > t)`.
pub fn gaussian_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / core::f64::consts::SQRT_2)
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * libm::log2(q) };
    term(p) + term(1.0 - p)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, until the bracket is
/// narrower than `tol`. Returns the bracket midpoint.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    const MAX_ITER: usize = 2000;
    if !(tol > 0.0) || !(lo < hi) {
        return Err(Error::InvalidParameter("bisection needs tol > 0 and lo < hi"));
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::InvalidParameter("bisection bracket has no sign change"));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol || mid == lo || mid == hi {
            return if hi - lo < tol { Ok(mid) } else { Err(Error::NoConvergence) };
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence)
}

/// Pascal-row binomial sums `Σ_{i≤r} C(n,i)` for every `r` in `0..=n`.
pub fn binomial_sum_row(n: u64) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut term = BigUint::one();
    let mut total = BigUint::zero();
    for i in 0..=n {
        total += &term;
        out.push(total.clone());
        term *= n - i;
        term /= i + 1;
    }
    out
}
