//! Bit-MAP decoding and the Monte Carlo bit-error estimator.
//!
//! The error metric is `P_b = 1 − (1/n) Σ_i E[max_x P(X_i = x | Y)]`, with
//! messages drawn uniformly.

use alloc::vec::Vec;

use rand::Rng;

use crate::channel::{transmit, ChannelModel, RngStream, ERASURE};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, SpanBasis};
use crate::rm::{for_each_codeword, RMCode};
use crate::subcode::Subcode;

/// Largest code dimension the exhaustive decoder accepts.
pub const EXHAUSTIVE_GUARD: usize = 20;

/// Anything that maps `k` message bits to `n` code bits.
pub trait Encoder {
    fn message_bits(&self) -> usize;
    fn block_length(&self) -> usize;
    fn encode(&self, msg: &BitVector) -> Result<BitVector>;
}

impl Encoder for RMCode {
    fn message_bits(&self) -> usize {
        self.dimension()
    }
    fn block_length(&self) -> usize {
        self.length()
    }
    fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        RMCode::encode(self, msg)
    }
}

impl Encoder for Subcode {
    fn message_bits(&self) -> usize {
        Subcode::message_bits(self)
    }
    fn block_length(&self) -> usize {
        Subcode::block_length(self)
    }
    fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        Subcode::encode(self, msg)
    }
}

/// Per-position `P(X_i = 1 | y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BitPosterior {
    probs: Vec<f64>,
}

impl BitPosterior {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter("posterior outside [0, 1]"));
        }
        Ok(BitPosterior { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob_one(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Argmax decision; a tie decides 0 and is reported by [`Self::is_tie`].
    pub fn estimate(&self, i: usize) -> bool {
        self.probs[i] > 0.5
    }

    pub fn is_tie(&self, i: usize) -> bool {
        self.probs[i] == 0.5
    }

    pub fn estimates(&self) -> BitVector {
        BitVector::from_fn(self.len(), |i| self.estimate(i))
    }

    pub fn ties(&self) -> usize {
        self.probs.iter().filter(|&&p| p == 0.5).count()
    }

    /// `1 − mean_i max(p_i, 1 − p_i)`, the per-observation error term.
    pub fn error_term(&self) -> f64 {
        if self.probs.is_empty() {
            return 0.0;
        }
        let s: f64 = self.probs.iter().map(|&p| if p >= 0.5 { p } else { 1.0 - p }).sum();
        1.0 - s / self.probs.len() as f64
    }
}

/// Posterior computation from a channel output.
pub trait BitMapDecoder {
    fn block_length(&self) -> usize;
    fn decode(&self, ch: &ChannelModel, y: &[f64]) -> Result<BitPosterior>;
}

/// Exact bit-MAP over the BEC for the uniform prior on a linear code.
///
/// Unerased outputs pin linear functionals of the message; an erased position
/// is determined exactly when its generator column lies in the span of the
/// unerased columns. Otherwise the consistent codewords split evenly on it.
#[derive(Clone, Debug)]
pub struct BecDecoder {
    generator: BitMatrix,
    columns: Vec<BitVector>,
}

impl BecDecoder {
    pub fn new(generator: &BitMatrix) -> Self {
        let columns = generator.transpose().into_rows();
        BecDecoder { generator: generator.clone(), columns }
    }

    pub fn for_code(code: &RMCode) -> Self {
        BecDecoder::new(code.generator())
    }

    pub fn dimension(&self) -> usize {
        self.generator.nrows()
    }

    /// Posteriors for a BEC output `y` (entries `±1`, or `0` for an erasure).
    pub fn posteriors(&self, y: &[f64]) -> Result<BitPosterior> {
        let n = self.columns.len();
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: y.len() });
        }
        let k = self.dimension();
        let mut span = SpanBasis::new(k);
        let mut scanned = 0;
        for (i, &yi) in y.iter().enumerate() {
            scanned = i + 1;
            if yi == ERASURE {
                continue;
            }
            span.insert(&self.columns[i], yi < 0.0)?;
            if span.is_full() {
                break;
            }
        }
        if span.is_full() {
            let msg = span.solve_full().expect("span is full");
            let word = self.generator.combine_rows(&msg)?;
            // The rest of the unerased outputs must agree with the unique codeword.
            for (i, &yi) in y.iter().enumerate().skip(scanned) {
                if yi != ERASURE && (yi < 0.0) != word.get(i) {
                    return Err(Error::Inconsistent);
                }
            }
            return BitPosterior::new(word.iter().map(|b| if b { 1.0 } else { 0.0 }).collect());
        }
        let probs = y
            .iter()
            .enumerate()
            .map(|(i, &yi)| {
                if yi != ERASURE {
                    return if yi < 0.0 { 1.0 } else { 0.0 };
                }
                match span.reduce(&self.columns[i]) {
                    Some(true) => 1.0,
                    Some(false) => 0.0,
                    None => 0.5,
                }
            })
            .collect();
        BitPosterior::new(probs)
    }
}

impl BitMapDecoder for BecDecoder {
    fn block_length(&self) -> usize {
        self.columns.len()
    }

    fn decode(&self, ch: &ChannelModel, y: &[f64]) -> Result<BitPosterior> {
        if !ch.is_erasure() {
            return Err(Error::InvalidParameter("the analytic decoder needs an erasure channel"));
        }
        self.posteriors(y)
    }
}

pub fn bec_bitmap(generator: &BitMatrix, y: &[f64]) -> Result<BitPosterior> {
    BecDecoder::new(generator).posteriors(y)
}

/// Direct Bayes over an explicit codebook with uniform prior, for any channel.
#[derive(Clone, Debug)]
pub struct ExhaustiveDecoder {
    n: usize,
    codewords: Vec<BitVector>,
}

impl ExhaustiveDecoder {
    /// Codebook = row space of `generator`; dimension at most [`EXHAUSTIVE_GUARD`].
    pub fn new(generator: &BitMatrix) -> Result<Self> {
        let k = generator.nrows();
        if k > EXHAUSTIVE_GUARD {
            return Err(Error::GuardExceeded { dim: k, guard: EXHAUSTIVE_GUARD });
        }
        let mut codewords = Vec::with_capacity(1 << k);
        for_each_codeword(generator, |c| codewords.push(c.clone()))?;
        Ok(ExhaustiveDecoder { n: generator.ncols(), codewords })
    }

    pub fn for_code(code: &RMCode) -> Result<Self> {
        ExhaustiveDecoder::new(code.generator())
    }

    /// Arbitrary codebook, e.g. a nonlinear constrained subcode.
    pub fn from_codewords(n: usize, codewords: Vec<BitVector>) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::InvalidParameter("empty codebook"));
        }
        if codewords.len() > 1 << EXHAUSTIVE_GUARD {
            return Err(Error::GuardExceeded { dim: EXHAUSTIVE_GUARD + 1, guard: EXHAUSTIVE_GUARD });
        }
        if let Some(c) = codewords.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: c.len() });
        }
        Ok(ExhaustiveDecoder { n, codewords })
    }

    pub fn codebook_size(&self) -> usize {
        self.codewords.len()
    }

    pub fn posteriors(&self, ch: &ChannelModel, y: &[f64]) -> Result<BitPosterior> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: y.len() });
        }
        let table: Vec<[f64; 2]> =
            y.iter().map(|&yi| [ch.log_likelihood(yi, false), ch.log_likelihood(yi, true)]).collect();
        let logs: Vec<f64> = self
            .codewords
            .iter()
            .map(|c| table.iter().enumerate().map(|(i, t)| t[c.get(i) as usize]).sum())
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(Error::ZeroLikelihood);
        }
        let mut total = 0.0;
        let mut ones = alloc::vec![0.0; self.n];
        for (c, &l) in self.codewords.iter().zip(&logs) {
            let w = libm::exp(l - max);
            if w == 0.0 {
                continue;
            }
            total += w;
            for i in c.iter_ones() {
                ones[i] += w;
            }
        }
        BitPosterior::new(ones.into_iter().map(|s| (s / total).clamp(0.0, 1.0)).collect())
    }
}

impl BitMapDecoder for ExhaustiveDecoder {
    fn block_length(&self) -> usize {
        self.n
    }

    fn decode(&self, ch: &ChannelModel, y: &[f64]) -> Result<BitPosterior> {
        self.posteriors(ch, y)
    }
}

pub fn exhaustive_bitmap(code: &RMCode, ch: &ChannelModel, y: &[f64]) -> Result<BitPosterior> {
    ExhaustiveDecoder::for_code(code)?.posteriors(ch, y)
}

/// What one Monte Carlo trial produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    /// `1 − mean_i max(p_i, 1 − p_i)`.
    pub error_term: f64,
    /// Fraction of positions with posterior exactly 1/2.
    pub undetermined: f64,
    /// Positions decided with certainty (posterior 0 or 1) against the sent bit.
    pub wrong_certain: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub trials: usize,
    pub pb: f64,
    pub std_error: f64,
    /// Per-trial undetermined fraction, kept for erasure channels.
    pub undetermined_trace: Option<Vec<f64>>,
    pub wrong_certain: usize,
}

/// Trial `t` of a run seeded with `seed`: its own random stream, a uniform
/// message, one channel use per code bit, one decode.
pub fn simulate_trial<E, D>(encoder: &E, ch: &ChannelModel, decoder: &D, seed: u64, t: u64) -> Result<TrialOutcome>
where
    E: Encoder + ?Sized,
    D: BitMapDecoder + ?Sized,
{
    let n = encoder.block_length();
    if decoder.block_length() != n {
        return Err(Error::DimensionMismatch { expected: n, found: decoder.block_length() });
    }
    let mut rng = RngStream::new(seed, t).rng();
    let k = encoder.message_bits();
    let msg = BitVector::from_fn(k, |_| rng.random::<bool>());
    let x = encoder.encode(&msg)?;
    let y = transmit(&x, ch, &mut rng);
    let post = decoder.decode(ch, &y)?;
    let wrong_certain =
        (0..n).filter(|&i| matches!(post.prob_one(i), p if (p == 0.0 || p == 1.0) && (p == 1.0) != x.get(i))).count();
    let undetermined = if n == 0 { 0.0 } else { post.ties() as f64 / n as f64 };
    Ok(TrialOutcome { error_term: post.error_term(), undetermined, wrong_certain })
}

/// Mean and standard error of per-trial outcomes, in trial order.
pub fn summarize(outcomes: &[TrialOutcome], keep_trace: bool) -> Result<SimulationResult> {
    let trials = outcomes.len();
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial"));
    }
    let mean = outcomes.iter().map(|o| o.error_term).sum::<f64>() / trials as f64;
    let std_error = if trials > 1 {
        let ss: f64 = outcomes.iter().map(|o| (o.error_term - mean) * (o.error_term - mean)).sum();
        libm::sqrt(ss / (trials - 1) as f64) / libm::sqrt(trials as f64)
    } else {
        0.0
    };
    Ok(SimulationResult {
        trials,
        pb: mean,
        std_error,
        undetermined_trace: keep_trace.then(|| outcomes.iter().map(|o| o.undetermined).collect()),
        wrong_certain: outcomes.iter().map(|o| o.wrong_certain).sum(),
    })
}

/// Sequential Monte Carlo estimate of `P_b`. Trial `t` uses stream `t`, so
/// any parallel schedule that merges outcomes in trial order through
/// [`summarize`] reproduces this result bit for bit.
pub fn estimate_pb<E, D>(encoder: &E, ch: &ChannelModel, decoder: &D, trials: usize, seed: u64) -> Result<SimulationResult>
where
    E: Encoder + ?Sized,
    D: BitMapDecoder + ?Sized,
{
    let outcomes =
        (0..trials as u64).map(|t| simulate_trial(encoder, ch, decoder, seed, t)).collect::<Result<Vec<_>>>()?;
    summarize(&outcomes, ch.is_erasure())
}
