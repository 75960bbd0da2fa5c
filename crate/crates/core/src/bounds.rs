//! Rate bounds for constrained subcodes of Reed-Muller codes: the achievable
//! rate, the upper bound for `(1,∞)` subcodes, and finite-`m` evaluators of
//! every quantity in its derivation.
//!
//! Exponential quantities are kept as base-2 logarithms; the `2^{o(n)}`
//! slack factors of the asymptotic statements are set to 1.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::math::{binomial_sum, binomial_sum_f64, bisect, log2_add, log2_biguint, log2_sum_exp2, ratio_pow2};
use crate::rll::RllConstraint;
use crate::rm::{RMCode, WeightDistribution, ENUMERATION_GUARD};
use crate::subcode::{largest_rll_subcode_bruteforce, mask_width, q_inverse, rate_degree};

/// `L = ln(1/(1−R))`.
fn ln_inv(rate: f64) -> f64 {
    -libm::log1p(-rate)
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("rate must lie in (0, 1)"))
    }
}

/// `binom(n, ≤ r)` as `f64`, zero for `n < 0`.
fn bsum(n: i64, r: usize) -> f64 {
    if n < 0 {
        0.0
    } else {
        binomial_sum_f64(n as u64, r as i64)
    }
}

/// `R / 2^{⌈log2(d+1)⌉}`.
pub fn achievable_rate(rate: f64, d: usize) -> f64 {
    rate / (1u64 << mask_width(d)) as f64
}

/// `min{3R/8 + ln(1/(1−R))/2, R}`.
pub fn ub_theorem3(rate: f64) -> f64 {
    let nontrivial = 3.0 * rate / 8.0 + 0.5 * ln_inv(rate);
    nontrivial.min(rate)
}

/// Root of `ln(1/(1−R)) = 5R/4` in `(0.01, 0.99)`, where the two branches
/// of [`ub_theorem3`] cross.
pub fn r_star(tol: f64) -> Result<f64> {
    bisect(|r| ln_inv(r) - 1.25 * r, 0.01, 0.99, tol)
}

/// `max{C0 + C − 1, 0}`: rate of a random coset of a capacity-achieving
/// linear code intersected with the constraint.
pub fn coset_baseline(c0: f64, c: f64) -> f64 {
    (c0 + c - 1.0).max(0.0)
}

/// `binom(m−t, ≤ r_m) / 2^{m−t} = P[Bin(m−t, 1/2) ≤ r_m]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialTail {
    pub m: usize,
    pub t: usize,
    pub r_m: usize,
    pub numerator: BigUint,
    pub denominator_log2: u64,
    pub value: f64,
}

pub fn binomial_tail(m: usize, t: usize, rate: f64) -> Result<BinomialTail> {
    if t >= m {
        return Err(Error::InvalidParameter("binomial tail needs m > t"));
    }
    check_rate(rate)?;
    let r_m = rate_degree(m, rate)?;
    let n = (m - t) as u64;
    let numerator = binomial_sum(n, r_m as i64);
    let value = ratio_pow2(&numerator, n);
    Ok(BinomialTail { m, t, r_m, numerator, denominator_log2: n, value })
}

/// The bracket around a binomial tail: with `n = m − t` and
/// `ν = t/2 + (√t/2)|Q⁻¹(1−R)| + 1`,
/// `P[S_n ≤ r_n − ν] ≤ P[S_n ≤ r_m] ≤ P[S_n ≤ r_n + ν]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSandwich {
    pub nu: f64,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    /// `|r_m − r_{m−t}|`, which the bracket needs to be at most `ν`.
    pub shift: usize,
}

impl TailSandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper && self.shift as f64 <= self.nu
    }
}

/// `P[Bin(n, 1/2) ≤ x]` for real `x`.
fn binomial_cdf(n: usize, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let k = libm::floor(x) as i64;
    ratio_pow2(&binomial_sum(n as u64, k), n as u64)
}

pub fn tail_sandwich(m: usize, t: usize, rate: f64) -> Result<TailSandwich> {
    let tail = binomial_tail(m, t, rate)?;
    let n = m - t;
    let r_n = rate_degree(n, rate)? as f64;
    let nu = t as f64 / 2.0 + libm::sqrt(t as f64) / 2.0 * libm::fabs(q_inverse(1.0 - rate)?) + 1.0;
    Ok(TailSandwich {
        nu,
        lower: binomial_cdf(n, r_n - nu),
        value: tail.value,
        upper: binomial_cdf(n, r_n + nu),
        shift: tail.r_m.abs_diff(r_n as usize),
    })
}

/// Rank of random `2^{m−u}`-column restrictions of the RM(m, r) generator
/// against `binom(m−u, ≤ r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma4Report {
    pub m: usize,
    pub r: usize,
    pub u: usize,
    pub samples: usize,
    pub threshold: usize,
    /// Samples with rank strictly above the threshold.
    pub strict: usize,
    /// Smallest `rank − threshold` seen.
    pub min_margin: i64,
}

impl Lemma4Report {
    pub fn all_strict(&self) -> bool {
        self.strict == self.samples
    }
}

pub fn lemma4_check<R: Rng + ?Sized>(m: usize, r: usize, u: usize, samples: usize, rng: &mut R) -> Result<Lemma4Report> {
    if u == 0 || u > m {
        return Err(Error::InvalidParameter("subset exponent u must lie in [1, m]"));
    }
    if m > 12 {
        return Err(Error::InvalidParameter("rank checks are limited to m <= 12"));
    }
    let code = RMCode::new(m, r)?;
    let threshold = binomial_sum((m - u) as u64, r as i64);
    let threshold = usize::try_from(&threshold).map_err(|_| Error::InvalidParameter("threshold overflow"))?;
    let size = 1usize << (m - u);
    let mut strict = 0;
    let mut min_margin = i64::MAX;
    for _ in 0..samples {
        let mut cols = rand::seq::index::sample(rng, code.length(), size).into_vec();
        cols.sort_unstable();
        let rank = code.generator().select_columns(&cols)?.rank();
        let margin = rank as i64 - threshold as i64;
        min_margin = min_margin.min(margin);
        if margin > 0 {
            strict += 1;
        }
    }
    Ok(Lemma4Report { m, r, u, samples, threshold, strict, min_margin })
}

/// Rank of the generator restricted to the sub-cube `x_1 = ⋯ = x_u = 0`
/// (the first `2^{m−u}` points).
pub fn subcube_rank(m: usize, r: usize, u: usize) -> Result<usize> {
    if u > m {
        return Err(Error::InvalidParameter("subset exponent u must lie in [0, m]"));
    }
    let code = RMCode::new(m, r)?;
    let cols: Vec<usize> = (0..1usize << (m - u)).collect();
    Ok(code.generator().select_columns(&cols)?.rank())
}

/// `log2` of the weight-enumerator bound `exp2(2·ln(1/(1−R))·w)`.
pub fn lemma5_bound(w: usize, rate: f64) -> f64 {
    2.0 * ln_inv(rate) * w as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSlack {
    pub w: usize,
    pub log2_count: f64,
    pub log2_bound: f64,
}

impl WeightSlack {
    /// `bound − actual` in bits; negative where the bound without its slack
    /// factor fails at this length.
    pub fn slack(&self) -> f64 {
        self.log2_bound - self.log2_count
    }
}

/// Enumerated `A(w)` against [`lemma5_bound`] at the code's own rate.
pub fn lemma5_slack(dist: &WeightDistribution, rate: f64) -> Vec<WeightSlack> {
    dist.support()
        .map(|(w, a)| WeightSlack { w, log2_count: libm::log2(a as f64), log2_bound: lemma5_bound(w, rate) })
        .collect()
}

/// Finite-`m` evaluation of the quantities bounding the largest `(1,∞)`
/// subcode of RM(m, r_m), all in `log2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundEvaluation {
    pub m: usize,
    pub rate: f64,
    pub delta: f64,
    pub r_m: usize,
    pub t_m: usize,
    /// `log2 M_u` for `u = 0..m`.
    pub log2_m: Vec<f64>,
    /// `log2 B_i` for `i = 1..r_m` (index `i − 1`).
    pub log2_b: Vec<f64>,
    pub log2_alpha: f64,
    pub log2_beta: f64,
    /// Terms `i ≤ t_m` of the β sum.
    pub log2_beta_head: f64,
    /// Terms `i > t_m` of the β sum.
    pub log2_beta_tail: f64,
    pub log2_theta: f64,
    pub log2_eta: f64,
    /// `binom(m−1, ≤ r_m)`.
    pub k1: f64,
}

impl BoundEvaluation {
    /// `(binom(m−1,≤r_m) + log2(α + β)) / 2^m`.
    pub fn rate_bound(&self) -> f64 {
        (self.k1 + log2_add(self.log2_alpha, self.log2_beta)) / libm::exp2(self.m as f64)
    }

    /// The same with `α, β` replaced by `η, θ`.
    pub fn relaxed_rate_bound(&self) -> f64 {
        (self.k1 + log2_add(self.log2_eta, self.log2_theta)) / libm::exp2(self.m as f64)
    }

    /// Tail share of β normalized by the block length.
    pub fn tail_ratio(&self) -> f64 {
        self.log2_beta_tail / libm::exp2(self.m as f64)
    }

    pub fn beta_below_theta(&self) -> bool {
        self.log2_beta <= self.log2_theta
    }
}

pub fn theorem3_chain(m: usize, rate: f64, delta: f64) -> Result<BoundEvaluation> {
    if !(4..=1000).contains(&m) {
        return Err(Error::InvalidParameter("bound chain needs 4 <= m <= 1000"));
    }
    check_rate(rate)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)"));
    }
    let r_m = rate_degree(m, rate)?;
    let t_m = libm::floor(libm::cbrt(m as f64) + 1e-9) as usize;
    let l = ln_inv(rate);
    let mi = m as i64;
    let k1 = bsum(mi - 1, r_m);
    let log2_m = (0..m).map(|u| k1 - bsum(mi - 1 - u as i64, r_m)).collect();
    let log2_b: Vec<f64> = (1..r_m).map(|i| 2.0 * l * libm::exp2((m - 1 - i) as f64)).collect();
    let terms: Vec<f64> = (1..r_m).map(|i| log2_b[i - 1] - bsum(mi - 2 - i as i64, r_m)).collect();
    let split = t_m.min(terms.len());
    let log2_alpha = bsum(mi - 2, r_m) - 1.0;
    let log2_theta = libm::exp2(m as f64 - 3.0) * (4.0 * l - rate * (1.0 - delta));
    let log2_eta = (1.0 + delta) * libm::exp2(m as f64 - 2.0) * rate;
    Ok(BoundEvaluation {
        m,
        rate,
        delta,
        r_m,
        t_m,
        log2_m,
        log2_b,
        log2_alpha,
        log2_beta: log2_sum_exp2(&terms),
        log2_beta_head: log2_sum_exp2(&terms[..split]),
        log2_beta_tail: log2_sum_exp2(&terms[split..]),
        log2_theta,
        log2_eta,
        k1,
    })
}

/// The successive upper bounds on the largest `(1,∞)` subcode `H` of
/// RM(m, r), evaluated exactly from enumeration of RM(m−1, r). Each stage
/// should be at least the previous one.
///
/// The `g = 0` half contributes all `2^{K1}` codewords `h`; it is added to
/// every stage so the chain bounds `|H|` itself.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingChain {
    pub m: usize,
    pub r: usize,
    /// `log2 |H|` when RM(m, r) is small enough to enumerate.
    pub log2_h: Option<f64>,
    /// `log2 Σ_g N(g)`.
    pub log2_supersets: f64,
    /// `log2 Σ_w A(w) M_{u(w)}`.
    pub log2_a: f64,
    /// Weights above `2^{m−2}` replaced by half the code times `M_1`.
    pub log2_b: f64,
    /// `M_1 ≤ 2^{K2}`.
    pub log2_c: f64,
    /// Weight bands `[2^{m−2−i}, 2^{m−1−i}]` with `M_{i+1}`.
    pub log2_d: f64,
}

impl CountingChain {
    pub fn stages(&self) -> [f64; 5] {
        [self.log2_supersets, self.log2_a, self.log2_b, self.log2_c, self.log2_d]
    }

    pub fn is_monotone(&self) -> bool {
        let s = self.stages();
        let tol = 1e-9;
        let first_ok = self.log2_h.is_none_or(|h| h <= s[0] + tol);
        first_ok && s.windows(2).all(|p| p[0] <= p[1] + tol)
    }
}

/// Smallest `u` with `w ≥ 2^{m−1−u}`.
fn u_of(w: usize, m: usize) -> usize {
    (0..m).find(|&u| w >= 1usize << (m - 1 - u)).unwrap_or(m)
}

pub fn counting_chain(m: usize, r: usize) -> Result<CountingChain> {
    // With r = 1 the weight bands of the last stage miss weight 2^{m−2}.
    if m < 3 || r < 2 || r > m - 1 {
        return Err(Error::InvalidParameter("counting chain needs 2 <= r <= m - 1"));
    }
    let half = RMCode::new(m - 1, r)?;
    if half.dimension() > 20 {
        return Err(Error::GuardExceeded { dim: half.dimension(), guard: 20 });
    }
    let mi = m as i64;
    let k1 = bsum(mi - 1, r);
    let k2 = bsum(mi - 2, r);
    let log2_m = |u: usize| k1 - bsum(mi - 1 - u as i64, r);
    let zero_term = k1;

    let mut supersets = BigUint::zero();
    let mut failure = None;
    half.for_each_codeword(|g: &BitVector| {
        if failure.is_some() || g.is_zero() {
            return;
        }
        match half.superset_count(g) {
            Ok(c) => supersets += c,
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let log2_supersets = log2_add(zero_term, log2_biguint(&supersets));

    let dist = half.weight_distribution()?;
    let quarter = 1usize << (m - 2);
    let band = |lo: usize, hi: usize| -> Vec<f64> {
        dist.support()
            .filter(|&(w, _)| w >= lo && w <= hi && w > 0)
            .map(|(w, a)| libm::log2(a as f64) + log2_m(u_of(w, m)))
            .collect()
    };
    let log2_a = log2_add(zero_term, log2_sum_exp2(&band(1, 1 << (m - 1))));
    let low = log2_sum_exp2(&band(1, quarter));
    let log2_b = log2_add(zero_term, log2_add(low, k1 - 1.0 + log2_m(1)));
    let log2_c = log2_add(zero_term, log2_add(low, k1 + k2 - 1.0));
    let bands: Vec<f64> = (1..r)
        .map(|i| {
            let a = dist.range_count(1usize << (m - 2 - i), 1usize << (m - 1 - i));
            libm::log2(a as f64) + k1 - bsum(mi - 2 - i as i64, r)
        })
        .collect();
    let log2_d = log2_add(zero_term, log2_add(log2_sum_exp2(&bands), k1 + k2 - 1.0));

    let full = RMCode::new(m, r)?;
    let log2_h = if full.dimension() <= ENUMERATION_GUARD {
        let count = largest_rll_subcode_bruteforce(&full, RllConstraint::d_infinity(1))?.count;
        Some(libm::log2(count as f64))
    } else {
        None
    };
    Ok(CountingChain { m, r, log2_h, log2_supersets, log2_a, log2_b, log2_c, log2_d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RngStream;
    use crate::rll::noiseless_capacity;

    #[test]
    fn achievable_examples() {
        assert_eq!(achievable_rate(0.5, 1), 0.25);
        assert!((achievable_rate(0.8, 3) - 0.2).abs() < 1e-15);
        assert!((achievable_rate(0.8, 7) - 0.1).abs() < 1e-15);
        assert_eq!(achievable_rate(0.8, 2), achievable_rate(0.8, 3));
    }

    #[test]
    fn upper_bound_examples() {
        assert!((ub_theorem3(0.2) - 0.186_57).abs() < 1e-5);
        assert_eq!(ub_theorem3(0.5), 0.5);
        assert!(ub_theorem3(1e-9) < 1e-8);
    }

    #[test]
    fn r_star_crossover() {
        let tol = 1e-10;
        let rs = r_star(tol).unwrap();
        assert!((0.365..=0.375).contains(&rs));
        assert!((ln_inv(rs) - 1.25 * rs).abs() < tol);
        let below = rs - 1e-6;
        let above = rs + 1e-6;
        assert!(ub_theorem3(below) < below);
        assert_eq!(ub_theorem3(above), above);
    }

    #[test]
    fn coset_examples() {
        assert_eq!(coset_baseline(1.0, 0.7), 0.7);
        assert!((coset_baseline(0.6, 1.0) - 0.6).abs() < 1e-15);
        let c0 = noiseless_capacity(RllConstraint::d_infinity(1), 1e-12).unwrap();
        let baseline = coset_baseline(c0, 0.1);
        assert_eq!(baseline, 0.0);
        assert!(achievable_rate(0.1, 1) > baseline);
    }

    #[test]
    fn binomial_tail_examples() {
        let t = binomial_tail(10, 0, 0.5).unwrap();
        assert_eq!(t.numerator, BigUint::from(638u32));
        assert!((t.value - 638.0 / 1024.0).abs() < 1e-15);
        for rate in [0.2, 0.5, 0.9] {
            let v = binomial_tail(9, 8, rate).unwrap().value;
            assert!(v == 0.5 || v == 1.0, "{v}");
        }
        assert!(binomial_tail(5, 5, 0.5).is_err());
    }

    #[test]
    fn sandwich_holds_at_sampled_points() {
        for m in [16, 40, 100, 300] {
            for t in [0, 1, 2, 4] {
                for rate in [0.2, 0.5, 0.8] {
                    let s = tail_sandwich(m, t, rate).unwrap();
                    assert!(s.holds(), "m={m} t={t} R={rate}: {s:?}");
                }
            }
        }
    }

    #[test]
    fn pascal_identity() {
        for m in 2..=64u64 {
            for r in 0..=m as i64 {
                assert_eq!(binomial_sum(m - 1, r), binomial_sum(m - 2, r) + binomial_sum(m - 2, r - 1));
            }
        }
    }

    #[test]
    fn m_u_endpoints() {
        let ev = theorem3_chain(12, 0.3, 0.1).unwrap();
        assert_eq!(ev.log2_m[0], 0.0);
        assert!(ev.log2_m.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(ev.log2_b.len(), ev.r_m - 1);
    }

    #[test]
    fn beta_below_theta_grid() {
        for m in 20..=40 {
            for rate in [0.1, 0.2, 0.3] {
                let ev = theorem3_chain(m, rate, 0.1).unwrap();
                assert!(ev.beta_below_theta(), "m={m} R={rate}");
            }
        }
    }

    #[test]
    fn tail_share_is_reported() {
        let ev = theorem3_chain(30, 0.3, 0.1).unwrap();
        assert_eq!(ev.t_m, 3);
        assert!(ev.tail_ratio() < ev.log2_beta_head / libm::exp2(30.0));
        let head_tail = log2_add(ev.log2_beta_head, ev.log2_beta_tail);
        assert!((head_tail - ev.log2_beta).abs() < 1e-6 * ev.log2_beta.abs());
    }

    #[test]
    fn lemma5_linear() {
        assert_eq!(lemma5_bound(0, 0.4), 0.0);
        let m = 6;
        let w = 1 << (m - 1);
        assert!((lemma5_bound(w, 0.4) - 2.0 * ln_inv(0.4) * w as f64).abs() < 1e-12);
        let dist = RMCode::new(4, 2).unwrap().weight_distribution().unwrap();
        let table = lemma5_slack(&dist, 11.0 / 16.0);
        assert_eq!(table.len(), dist.support().count());
        assert_eq!(table[0].w, 0);
        assert_eq!(table[0].slack(), 0.0);
    }

    #[test]
    fn lemma4_random_and_subcube() {
        let mut rng = RngStream::new(4, 0).rng();
        let rep = lemma4_check(6, 2, 1, 50, &mut rng).unwrap();
        assert!(rep.all_strict(), "{rep:?}");
        // A sub-cube meets the threshold with equality.
        for (m, r, u) in [(6, 2, 1), (8, 3, 2), (10, 2, 2)] {
            let expected = binomial_sum((m - u) as u64, r as i64);
            assert_eq!(BigUint::from(subcube_rank(m, r, u).unwrap()), expected);
        }
        assert!(lemma4_check(6, 2, 0, 1, &mut rng).is_err());
    }

    #[test]
    fn counting_chain_is_monotone() {
        for (m, r) in [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (6, 2)] {
            let chain = counting_chain(m, r).unwrap();
            assert!(chain.is_monotone(), "RM({m},{r}): {chain:?}");
        }
        assert!(counting_chain(4, 1).is_err());
    }

    #[test]
    fn u_of_weights() {
        assert_eq!(u_of(16, 5), 0);
        assert_eq!(u_of(8, 5), 1);
        assert_eq!(u_of(15, 5), 1);
        assert_eq!(u_of(1, 5), 4);
    }
}
