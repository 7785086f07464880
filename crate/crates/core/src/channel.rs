//! Monte Carlo BER of the index code over a noisy broadcast channel.
//!
//! The `K − D` broadcast bits are BPSK modulated (`0 → +1`, `1 → −1`), sent
//! through AWGN or flat Rayleigh fading, and detected by sign. Each receiver
//! then runs its decoding plan on the estimated bits together with its
//! (noiseless) side-information.
//!
//! SNR is `Eb/N0` per transmitted bit with unit symbol energy, so the noise
//! variance per real dimension is `1 / (2·Eb/N0)`. Rayleigh gains are drawn
//! independently per symbol with `E|h|² = 1` and are known to the receiver.
//!
//! Randomness is counter based: trials are cut into fixed blocks and block
//! `b` at SNR `s` draws from ChaCha stream `(s, b)` of the master seed, so a
//! sweep gives the same counts whatever the order or thread count.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::air::AirMatrix;
use crate::decoder::DecodePlan;
use crate::encoder::Codeword;
use crate::error::{Error, Result};
use crate::ff_matrix::BitVector;

/// Trials per RNG stream.
pub const BLOCK_TRIALS: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelModel {
    Awgn,
    Rayleigh,
    /// Binary symmetric channel with a fixed crossover, ignoring the SNR.
    Bsc {
        crossover: f64,
    },
}

impl ChannelModel {
    /// One-line description of the noise law, for report headers.
    pub fn describe(&self) -> String {
        match self {
            ChannelModel::Awgn => "awgn: BPSK, real Gaussian noise, SNR = Eb/N0 per bit, hard decision".into(),
            ChannelModel::Rayleigh => "rayleigh: BPSK, independent per-symbol fading with E|h|^2 = 1, \
                 coherent detection with known gain, SNR = Eb/N0 per bit, hard decision"
                .into(),
            ChannelModel::Bsc { crossover } => format!("bsc: fixed crossover {crossover}"),
        }
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelModel::Awgn => f.write_str("awgn"),
            ChannelModel::Rayleigh => f.write_str("rayleigh"),
            ChannelModel::Bsc { crossover } => write!(f, "bsc:{crossover}"),
        }
    }
}

impl FromStr for ChannelModel {
    type Err = Error;

    /// `awgn`, `rayleigh`, or `bsc:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" => Ok(ChannelModel::Awgn),
            "rayleigh" => Ok(ChannelModel::Rayleigh),
            other => {
                let p = other
                    .strip_prefix("bsc:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .filter(|p| (0.0..=1.0).contains(p))
                    .ok_or_else(|| Error::Parse(format!("unknown channel {s:?}")))?;
                Ok(ChannelModel::Bsc { crossover: p })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub model: ChannelModel,
    pub snr_db: f64,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn new(model: ChannelModel, snr_db: f64, seed: u64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::Parse(format!("SNR must be finite, got {snr_db}")));
        }
        Ok(Self { model, snr_db, seed })
    }

    /// Noise standard deviation per real dimension.
    pub fn noise_sigma(&self) -> f64 {
        let ebn0 = 10f64.powf(self.snr_db / 10.0);
        (1.0 / (2.0 * ebn0)).sqrt()
    }
}

/// Hard decision on one received BPSK sample: `y = gain·s + noise`.
/// Returns the estimated bit.
pub fn estimate_symbol(bit: bool, gain: f64, noise: f64) -> bool {
    let s = if bit { -1.0 } else { 1.0 };
    gain * s + noise < 0.0
}

/// Draws the channel for one symbol and returns its estimate.
fn pass_symbol<R: Rng + ?Sized>(bit: bool, model: &ChannelModel, sigma: f64, rng: &mut R) -> bool {
    match *model {
        ChannelModel::Awgn => {
            let w: f64 = rng.sample(StandardNormal);
            estimate_symbol(bit, 1.0, sigma * w)
        }
        ChannelModel::Rayleigh => {
            let (g1, g2): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            let gain = ((g1 * g1 + g2 * g2) / 2.0).sqrt();
            let w: f64 = rng.sample(StandardNormal);
            estimate_symbol(bit, gain, sigma * w)
        }
        ChannelModel::Bsc { crossover } => bit ^ rng.random_bool(crossover),
    }
}

/// Sends every bit of `c` through the channel and returns the estimates.
pub fn transmit_estimate<R: Rng + ?Sized>(c: &Codeword, spec: &ChannelSpec, rng: &mut R) -> Codeword {
    let sigma = spec.noise_sigma();
    Codeword(BitVector::from_bits(c.0.iter().map(|b| pass_symbol(b, &spec.model, sigma, rng))))
}

/// Receivers that use the same number of broadcast symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverGroup {
    pub broadcasts: usize,
    pub receivers: Vec<usize>,
}

/// Partitions receivers by broadcast count, fewest symbols first.
pub fn grouping_report(plans: &[DecodePlan]) -> Vec<ReceiverGroup> {
    let mut groups: Vec<ReceiverGroup> = Vec::new();
    for plan in plans {
        let n = plan.broadcasts.len();
        match groups.iter_mut().find(|g| g.broadcasts == n) {
            Some(g) => g.receivers.push(plan.k),
            None => groups.push(ReceiverGroup { broadcasts: n, receivers: vec![plan.k] }),
        }
    }
    groups.sort_by_key(|g| g.broadcasts);
    for g in &mut groups {
        g.receivers.sort_unstable();
    }
    groups
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorCount {
    pub trials: u64,
    pub errors: u64,
}

impl ErrorCount {
    pub fn ber(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors as f64 / self.trials as f64
        }
    }
}

/// Per-receiver counts at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub receivers: Vec<ErrorCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerReport {
    pub model: ChannelModel,
    pub seed: u64,
    pub points: Vec<BerPoint>,
    pub grouping: Vec<ReceiverGroup>,
}

pub const CSV_HEADER: &str = "snr_db,receiver,trials,errors,ber";

impl BerReport {
    /// One row per (SNR, receiver), SNR ascending then receiver ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let mut points: Vec<&BerPoint> = self.points.iter().collect();
        points.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        for p in points {
            for (k, c) in p.receivers.iter().enumerate() {
                out.push_str(&format!("{:.2},{},{},{},{:.6e}\n", p.snr_db, k, c.trials, c.errors, c.ber()));
            }
        }
        out
    }

    /// Pooled counts over a set of receivers at point `idx`.
    pub fn pooled(&self, idx: usize, receivers: &[usize]) -> ErrorCount {
        receivers.iter().fold(ErrorCount::default(), |acc, &k| {
            let c = self.points[idx].receivers[k];
            ErrorCount { trials: acc.trials + c.trials, errors: acc.errors + c.errors }
        })
    }

    /// SNR at which the pooled BER of `receivers` crosses `target`, by linear
    /// interpolation of `log10(BER)` between the bracketing grid points.
    /// `None` when the curve does not cross `target` on the grid.
    pub fn snr_at_ber(&self, receivers: &[usize], target: f64) -> Option<f64> {
        let mut curve: Vec<(f64, f64)> =
            (0..self.points.len()).map(|i| (self.points[i].snr_db, self.pooled(i, receivers).ber())).collect();
        curve.sort_by(|a, b| a.0.total_cmp(&b.0));
        curve.windows(2).find_map(|w| {
            let ((s0, b0), (s1, b1)) = (w[0], w[1]);
            if b0 >= target && b1 <= target && b0 > 0.0 && b1 > 0.0 && b0 != b1 {
                let t = (b0.log10() - target.log10()) / (b0.log10() - b1.log10());
                Some(s0 + t * (s1 - s0))
            } else if b0 == target {
                Some(s0)
            } else {
                None
            }
        })
    }

    /// Extra SNR `worse` needs over `better` to reach `target`.
    pub fn snr_gap(&self, worse: &[usize], better: &[usize], target: f64) -> Option<f64> {
        Some(self.snr_at_ber(worse, target)? - self.snr_at_ber(better, target)?)
    }
}

/// Parses an SNR grid `a:b:step` (inclusive of `b` up to rounding) or a
/// single value.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("bad SNR grid {s:?}, expected a:b:step"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
    if parts.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    match parts[..] {
        [v] => Ok(vec![v]),
        [a, b, step] if step > 0.0 && b >= a => {
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}

/// Per-receiver data needed in the trial loop.
struct FastPlan {
    broadcasts: Vec<usize>,
    gamma: BitVector,
}

/// Stream id for block `block` at `snr_db`: the SNR in hundredths of a dB
/// in the high half, so a point's counts do not depend on the rest of the grid.
fn stream_id(snr_db: f64, block: u64) -> u64 {
    let centi = (snr_db * 100.0).round() as i64 as u32;
    ((centi as u64) << 32) | (block & 0xffff_ffff)
}

fn run_block(
    columns: &[BitVector],
    plans: &[FastPlan],
    k: usize,
    spec: &ChannelSpec,
    block: u64,
    trials: u64,
) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream_id(spec.snr_db, block));
    let sigma = spec.noise_sigma();
    let mut errors = vec![0u64; plans.len()];
    let mut x = BitVector::zeros(k);
    let mut c_hat = vec![false; columns.len()];
    for _ in 0..trials {
        for i in 0..k {
            x.set(i, rng.random::<bool>());
        }
        for (j, col) in columns.iter().enumerate() {
            c_hat[j] = pass_symbol(x.dot(col), &spec.model, sigma, &mut rng);
        }
        for (r, plan) in plans.iter().enumerate() {
            let mut bit = x.dot(&plan.gamma);
            for &b in &plan.broadcasts {
                bit ^= c_hat[b];
            }
            if bit != x.get(r) {
                errors[r] += 1;
            }
        }
    }
    errors
}

/// Counts per-receiver decoding errors for `trials` random message vectors
/// at each SNR in `snr_grid`. `plans` must hold one plan per receiver in
/// receiver order.
pub fn run_sweep(
    m: &AirMatrix,
    plans: &[DecodePlan],
    model: ChannelModel,
    snr_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<BerReport> {
    let k = m.height();
    if plans.len() != k || plans.iter().enumerate().any(|(i, p)| p.k != i) {
        return Err(Error::LengthMismatch { expected: k, actual: plans.len() });
    }
    if trials == 0 {
        return Err(Error::Parse("trials must be at least 1".into()));
    }
    let columns: Vec<BitVector> = (0..m.width())
        .map(|j| BitVector::from_support(k, m.column_support(j).expect("in range")))
        .collect::<Result<_>>()?;
    let fast: Vec<FastPlan> = plans
        .iter()
        .map(|p| Ok(FastPlan { broadcasts: p.broadcasts.clone(), gamma: BitVector::from_support(k, &p.gamma)? }))
        .collect::<Result<_>>()?;

    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let block_len = |b: u64| BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
    let mut points = Vec::with_capacity(snr_grid.len());
    for &snr_db in snr_grid {
        let spec = ChannelSpec::new(model, snr_db, seed)?;
        let run = |b: u64| run_block(&columns, &fast, k, &spec, b, block_len(b));
        let add = |mut a: Vec<u64>, b: Vec<u64>| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        };
        #[cfg(feature = "parallel")]
        let errors = {
            use rayon::prelude::*;
            (0..blocks).into_par_iter().map(run).reduce(|| vec![0; k], add)
        };
        #[cfg(not(feature = "parallel"))]
        let errors = (0..blocks).map(run).fold(vec![0; k], add);
        points.push(BerPoint {
            snr_db,
            receivers: errors.into_iter().map(|e| ErrorCount { trials, errors: e }).collect(),
        });
    }
    Ok(BerReport { model, seed, points, grouping: grouping_report(plans) })
}
