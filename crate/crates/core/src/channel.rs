//! Binary memoryless symmetric channels in multiplicative-noise form:
//! `Y = (−1)^X · Z`, with the noise `Z` independent of the input.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::math::binary_entropy;

/// Output symbol the erasure channel uses for an erased position.
pub const ERASURE: f64 = 0.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel {
    /// `Z = 1` w.p. `1 − ε`, `Z = 0` (erasure) w.p. `ε`.
    Bec { epsilon: f64 },
    /// `Z = 1` w.p. `1 − p`, `Z = −1` w.p. `p`.
    Bsc { p: f64 },
    /// `Z ~ N(1, σ²)`.
    BiAwgn { sigma: f64 },
}

impl ChannelModel {
    pub fn bec(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter("erasure probability must lie in [0, 1]"));
        }
        Ok(ChannelModel::Bec { epsilon })
    }

    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter("crossover probability must lie in [0, 1]"));
        }
        Ok(ChannelModel::Bsc { p })
    }

    pub fn bi_awgn(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter("noise deviation must be positive"));
        }
        Ok(ChannelModel::BiAwgn { sigma })
    }

    pub fn is_erasure(&self) -> bool {
        matches!(self, ChannelModel::Bec { .. })
    }

    /// Draws one noise sample `Z`.
    fn noise<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ChannelModel::Bec { epsilon } => {
                if rng.random_bool(epsilon) {
                    0.0
                } else {
                    1.0
                }
            }
            ChannelModel::Bsc { p } => {
                if rng.random_bool(p) {
                    -1.0
                } else {
                    1.0
                }
            }
            ChannelModel::BiAwgn { sigma } => {
                Normal::new(1.0, sigma).expect("sigma validated at construction").sample(rng)
            }
        }
    }

    /// Natural log of `P(y | x = bit)`, up to a factor shared by both inputs
    /// (only the Gaussian density drops its normalizer).
    pub fn log_likelihood(&self, y: f64, bit: bool) -> f64 {
        let sign = if bit { -1.0 } else { 1.0 };
        match *self {
            ChannelModel::Bec { epsilon } => {
                if y == ERASURE {
                    libm::log(epsilon)
                } else if y == sign {
                    libm::log(1.0 - epsilon)
                } else {
                    f64::NEG_INFINITY
                }
            }
            ChannelModel::Bsc { p } => {
                if y == sign {
                    libm::log(1.0 - p)
                } else {
                    libm::log(p)
                }
            }
            ChannelModel::BiAwgn { sigma } => {
                let e = y - sign;
                -e * e / (2.0 * sigma * sigma)
            }
        }
    }

    /// Capacity in bits per channel use.
    ///
    /// The Gaussian case integrates `1 − E[log2(1 + e^{−2Y/σ²})]`, `Y ~ N(1, σ²)`,
    /// with composite Simpson over `1 ± 14σ` (absolute error below 1e-6).
    pub fn capacity(&self) -> f64 {
        match *self {
            ChannelModel::Bec { epsilon } => 1.0 - epsilon,
            ChannelModel::Bsc { p } => 1.0 - binary_entropy(p),
            ChannelModel::BiAwgn { sigma } => bi_awgn_capacity(sigma),
        }
    }
}

fn bi_awgn_capacity(sigma: f64) -> f64 {
    const INTERVALS: usize = 20_000;
    let var = sigma * sigma;
    let lo = 1.0 - 14.0 * sigma;
    let hi = 1.0 + 14.0 * sigma;
    let h = (hi - lo) / INTERVALS as f64;
    let norm = 1.0 / (sigma * libm::sqrt(2.0 * core::f64::consts::PI));
    let integrand = |y: f64| {
        let density = norm * libm::exp(-(y - 1.0) * (y - 1.0) / (2.0 * var));
        // log2(1 + e^{-t}) without overflow.
        let t = 2.0 * y / var;
        let softplus = if t > 0.0 {
            libm::log1p(libm::exp(-t))
        } else {
            -t + libm::log1p(libm::exp(t))
        };
        density * softplus / core::f64::consts::LN_2
    };
    let mut sum = integrand(lo) + integrand(hi);
    for i in 1..INTERVALS {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * integrand(lo + i as f64 * h);
    }
    1.0 - sum * h / 3.0
}

/// A reproducible random stream: the same `(seed, stream)` yields the same
/// samples on every platform, and distinct streams never overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// `y_i = (−1)^{x_i} · z_i` with fresh noise per coordinate.
pub fn transmit<R: Rng + ?Sized>(x: &BitVector, ch: &ChannelModel, rng: &mut R) -> Vec<f64> {
    x.iter()
        .map(|bit| {
            let z = ch.noise(rng);
            if bit {
                -z
            } else {
                z
            }
        })
        .collect()
}
