//! The subcommands. Each turns validated settings into rows or a report.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use rmrll_core::bounds::{achievable_rate, coset_baseline, theorem3_chain, ub_theorem3};
use rmrll_core::channel::ChannelModel;
use rmrll_core::decode::{simulate_trial, summarize, BecDecoder, BitMapDecoder, ExhaustiveDecoder, TrialOutcome};
use rmrll_core::rll::{noiseless_capacity, RllConstraint};
use rmrll_core::subcode::{largest_rll_subcode_bruteforce, lemma3_filter_count, subcode_rate, Subcode};
use rmrll_core::RMCode;

use crate::config::Settings;
use crate::error::{CliError, Result};

const CAPACITY_TOL: f64 = 1e-12;

fn require<T: Clone>(value: &Option<T>, name: &str, command: &str) -> Result<T> {
    value.clone().ok_or_else(|| CliError::Config(format!("`{command}` needs --{name}")))
}

fn single<T: Copy>(list: &[T], name: &str) -> Result<T> {
    match list {
        [x] => Ok(*x),
        _ => Err(CliError::Config(format!("--{name} takes a single value here"))),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RateRow {
    pub m: usize,
    pub d: usize,
    pub design_rate: f64,
    pub z: usize,
    pub r_m: usize,
    pub message_bits: usize,
    pub numerator: String,
    pub denominator_log2: u64,
    pub rate: f64,
    pub asymptote: f64,
    pub gap: f64,
}

pub fn rates(s: &Settings) -> Result<Vec<RateRow>> {
    let ms = s.m.clone().unwrap_or_else(|| (2..=60).collect());
    let ds = s.d.clone().unwrap_or_else(|| vec![1]);
    let design = s.rate.clone().unwrap_or_else(|| vec![0.5]);
    let mut rows = Vec::new();
    for &rate in &design {
        for &d in &ds {
            for &m in &ms {
                let r = subcode_rate(m, rate, d)?;
                let spec = rmrll_core::subcode::SubcodeSpec::new(m, rate, d)?;
                rows.push(RateRow {
                    m,
                    d,
                    design_rate: rate,
                    z: spec.z,
                    r_m: spec.r_m,
                    message_bits: spec.message_bits,
                    numerator: r.numerator.to_string(),
                    denominator_log2: r.denominator_log2,
                    rate: r.value,
                    asymptote: r.asymptote,
                    gap: r.gap(),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CurveRow {
    #[serde(rename = "R")]
    pub rate: f64,
    pub achievable: f64,
    pub ub_theorem3: f64,
    pub trivial: f64,
    pub coset_baseline: f64,
}

/// Bound curves on a uniform grid of `R` in `(0, 1)`. On the erasure channel
/// the axis reads `R = 1 − ε`.
pub fn curve(s: &Settings) -> Result<Vec<CurveRow>> {
    let step = s.grid_step.unwrap_or(0.01);
    let d = single(&s.d.clone().unwrap_or_else(|| vec![1]), "d")?;
    let steps = (1.0 / step).round() as usize;
    if steps < 2 || ((steps as f64) * step - 1.0).abs() > 1e-9 {
        return Err(CliError::Config("grid_step must divide 1".into()));
    }
    let c0 = noiseless_capacity(RllConstraint::d_infinity(d), CAPACITY_TOL)?;
    Ok((1..steps)
        .map(|k| {
            let rate = k as f64 / steps as f64;
            CurveRow {
                rate,
                achievable: achievable_rate(rate, d),
                ub_theorem3: ub_theorem3(rate),
                trivial: rate,
                coset_baseline: coset_baseline(c0, rate),
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ChainRow {
    pub m: usize,
    #[serde(rename = "R")]
    pub rate: f64,
    pub delta: f64,
    pub r_m: usize,
    pub t_m: usize,
    pub log2_alpha: f64,
    pub log2_beta: f64,
    pub log2_beta_head: f64,
    pub log2_beta_tail: f64,
    pub log2_theta: f64,
    pub log2_eta: f64,
    pub beta_le_theta: bool,
    pub rate_bound: f64,
    pub relaxed_rate_bound: f64,
}

pub fn chain(s: &Settings) -> Result<Vec<ChainRow>> {
    let ms = require(&s.m, "m", "bounds")?;
    let rates = s.rate.clone().unwrap_or_else(|| vec![0.1, 0.2, 0.3]);
    let delta = s.delta.unwrap_or(0.1);
    let mut rows = Vec::new();
    for &rate in &rates {
        for &m in &ms {
            let ev = theorem3_chain(m, rate, delta)?;
            rows.push(ChainRow {
                m,
                rate,
                delta,
                r_m: ev.r_m,
                t_m: ev.t_m,
                log2_alpha: ev.log2_alpha,
                log2_beta: ev.log2_beta,
                log2_beta_head: ev.log2_beta_head,
                log2_beta_tail: ev.log2_beta_tail,
                log2_theta: ev.log2_theta,
                log2_eta: ev.log2_eta,
                beta_le_theta: ev.beta_below_theta(),
                rate_bound: ev.rate_bound(),
                relaxed_rate_bound: ev.relaxed_rate_bound(),
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SimRow {
    pub m: usize,
    pub d: usize,
    pub r_m: usize,
    pub message_bits: usize,
    pub channel: &'static str,
    pub param: f64,
    pub trials: usize,
    pub seed: u64,
    pub pb: f64,
    pub std_error: f64,
    pub wrong_certain: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

/// Monte Carlo `P_b` of the subcode under the bit-MAP decoder of its parent
/// RM code. Trials run in parallel and merge in trial order.
pub fn simulate(s: &Settings) -> Result<Vec<SimRow>> {
    let ms = require(&s.m, "m", "simulate")?;
    let ds = s.d.clone().unwrap_or_else(|| vec![1]);
    let rate = single(&s.rate.clone().unwrap_or_else(|| vec![0.5]), "rate")?;
    let trials = s.trials.unwrap_or(1000);
    let seed = s.seed.unwrap_or(0);
    let (name, params) = match (&s.epsilon, &s.p) {
        (Some(e), None) => ("bec", e.clone()),
        (None, Some(p)) => ("bsc", p.clone()),
        _ => return Err(CliError::Config("`simulate` needs exactly one of --epsilon or --p".into())),
    };
    let mut rows = Vec::new();
    for &d in &ds {
        for &m in &ms {
            let sub = Subcode::new(m, rate, d)?;
            let parent = sub.parent_code()?;
            let decoder: Box<dyn BitMapDecoder + Sync> = if name == "bec" {
                Box::new(BecDecoder::for_code(&parent))
            } else {
                Box::new(ExhaustiveDecoder::for_code(&parent)?)
            };
            for &param in &params {
                let ch = if name == "bec" { ChannelModel::bec(param)? } else { ChannelModel::bsc(param)? };
                let start = Instant::now();
                let outcomes = (0..trials as u64)
                    .into_par_iter()
                    .map(|t| simulate_trial(&sub, &ch, decoder.as_ref(), seed, t))
                    .collect::<std::result::Result<Vec<TrialOutcome>, _>>()?;
                let res = summarize(&outcomes, false)?;
                rows.push(SimRow {
                    m,
                    d,
                    r_m: sub.spec().r_m,
                    message_bits: sub.message_bits(),
                    channel: name,
                    param,
                    trials,
                    seed,
                    pb: res.pb,
                    std_error: res.std_error,
                    wrong_certain: res.wrong_certain,
                    wall_time_s: s.timing.then(|| start.elapsed().as_secs_f64()),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OracleReport {
    pub m: usize,
    pub r: usize,
    pub length: usize,
    pub dimension: usize,
    pub code_rate: f64,
    pub log2_code_size: f64,
    pub largest_subcode_count: u64,
    pub log2_largest_subcode: f64,
    pub subcode_rate: f64,
    pub filter_count: u64,
    pub log2_filter_count: f64,
    pub ub_theorem3: f64,
    pub subcode_rate_within_ub: bool,
}

/// Exact `(1,∞)` counts of RM(m, r) by enumeration.
pub fn oracle(s: &Settings) -> Result<OracleReport> {
    let m = single(&require(&s.m, "m", "oracle")?, "m")?;
    let r = single(&require(&s.r, "r", "oracle")?, "r")?;
    let code = RMCode::new(m, r)?;
    let count = largest_rll_subcode_bruteforce(&code, RllConstraint::d_infinity(1))?.count;
    let filter = if m == 0 { count } else { lemma3_filter_count(&code)? };
    let n = code.length() as f64;
    let subcode_rate = (count as f64).log2() / n;
    let ub = ub_theorem3(code.rate().min(1.0 - f64::EPSILON));
    Ok(OracleReport {
        m,
        r,
        length: code.length(),
        dimension: code.dimension(),
        code_rate: code.rate(),
        log2_code_size: code.dimension() as f64,
        largest_subcode_count: count,
        log2_largest_subcode: (count as f64).log2(),
        subcode_rate,
        filter_count: filter,
        log2_filter_count: (filter as f64).log2(),
        ub_theorem3: ub,
        subcode_rate_within_ub: subcode_rate <= ub,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct WeightRow {
    pub m: usize,
    pub r: usize,
    pub w: usize,
    pub count: u64,
}

pub fn weights(s: &Settings) -> Result<Vec<WeightRow>> {
    let m = single(&require(&s.m, "m", "weights")?, "m")?;
    let rs = require(&s.r, "r", "weights")?;
    let mut rows = Vec::new();
    for &r in &rs {
        let dist = RMCode::new(m, r)?.weight_distribution()?;
        rows.extend(dist.support().map(|(w, count)| WeightRow { m, r, w, count }));
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CapacityRow {
    pub channel: &'static str,
    pub param: f64,
    pub capacity: f64,
}

/// Channel capacities, plus noiseless `(d,∞)` capacities for any `--d`.
pub fn channel_cap(s: &Settings) -> Result<Vec<CapacityRow>> {
    let mut rows = Vec::new();
    for &e in s.epsilon.iter().flatten() {
        rows.push(CapacityRow { channel: "bec", param: e, capacity: ChannelModel::bec(e)?.capacity() });
    }
    for &p in s.p.iter().flatten() {
        rows.push(CapacityRow { channel: "bsc", param: p, capacity: ChannelModel::bsc(p)?.capacity() });
    }
    for &sigma in s.sigma.iter().flatten() {
        rows.push(CapacityRow { channel: "biawgn", param: sigma, capacity: ChannelModel::bi_awgn(sigma)?.capacity() });
    }
    for &d in s.d.iter().flatten() {
        let cap = noiseless_capacity(RllConstraint::d_infinity(d), CAPACITY_TOL)?;
        rows.push(CapacityRow { channel: "rll", param: d as f64, capacity: cap });
    }
    if rows.is_empty() {
        return Err(CliError::Config("`channel-cap` needs --epsilon, --p, --sigma or --d".into()));
    }
    Ok(rows)
}
