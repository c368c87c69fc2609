//! Stimulus generation: Poisson spike trains and deterministic pairing
//! protocols, plus train validation and CSV import/export.
//!
//! All times are in seconds. Trains are materialized in memory; the intended
//! scale (durations up to ~1e4 s at rates up to ~1e3 Hz) keeps this cheap and
//! makes exact nearest-spike lookback trivial.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{format_float, trim_header};

/// A finite realization of a point process: strictly increasing event times
/// on `[0, duration)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain {
    times: Vec<f64>,
    duration: f64,
}

/// First invariant violated by a candidate spike train, with the offending
/// index. Diagnostic only; construction paths return `Error::InvalidArgument`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainViolation {
    /// `duration` is not a positive finite number.
    BadDuration,
    /// Time at `index` is NaN or infinite.
    NonFinite { index: usize },
    /// Time at `index` is not strictly greater than its predecessor.
    OutOfOrder { index: usize },
    /// Time at `index` equals its predecessor.
    Duplicate { index: usize },
    /// Time at `index` falls outside `[0, duration)`.
    OutOfBounds { index: usize },
}

impl std::fmt::Display for TrainViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrainViolation::BadDuration => write!(f, "duration must be positive and finite"),
            TrainViolation::NonFinite { index } => write!(f, "non-finite time at index {index}"),
            TrainViolation::OutOfOrder { index } => {
                write!(f, "times out of order at index {index}")
            }
            TrainViolation::Duplicate { index } => write!(f, "duplicate time at index {index}"),
            TrainViolation::OutOfBounds { index } => {
                write!(f, "time outside [0, duration) at index {index}")
            }
        }
    }
}

/// Checks the `SpikeTrain` invariants on raw parts and reports the first
/// violation, or `Ok(())`.
pub fn validate_train(times: &[f64], duration: f64) -> std::result::Result<(), TrainViolation> {
    if !duration.is_finite() || duration <= 0.0 {
        return Err(TrainViolation::BadDuration);
    }
    for (i, &t) in times.iter().enumerate() {
        if !t.is_finite() {
            return Err(TrainViolation::NonFinite { index: i });
        }
        if i > 0 {
            if t == times[i - 1] {
                return Err(TrainViolation::Duplicate { index: i });
            }
            if t < times[i - 1] {
                return Err(TrainViolation::OutOfOrder { index: i });
            }
        }
        if t < 0.0 || t >= duration {
            return Err(TrainViolation::OutOfBounds { index: i });
        }
    }
    Ok(())
}

impl SpikeTrain {
    /// Builds a train from raw parts, enforcing the invariants.
    pub fn new(times: Vec<f64>, duration: f64) -> Result<Self> {
        validate_train(&times, duration).map_err(|v| Error::invalid(v.to_string()))?;
        Ok(SpikeTrain { times, duration })
    }

    /// A train with no events.
    pub fn empty(duration: f64) -> Result<Self> {
        SpikeTrain::new(Vec::new(), duration)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Writes the train as CSV: header `t_seconds`, one time per row,
    /// 13 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t_seconds")?;
        for &t in &self.times {
            writeln!(w, "{}", format_float(t))?;
        }
        Ok(())
    }

    /// Reads a train from CSV produced by [`write_csv`](Self::write_csv).
    /// The duration is not stored in the file and must be supplied.
    pub fn read_csv<R: BufRead>(r: R, duration: f64) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty spike-train CSV".into()))??;
        if trim_header(&header) != "t_seconds" {
            return Err(Error::Parse(format!(
                "expected header `t_seconds`, got `{header}`"
            )));
        }
        let mut times = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let t: f64 = line
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad time `{line}`: {e}")))?;
            times.push(t);
        }
        SpikeTrain::new(times, duration)
    }
}

/// Pre- and post-synaptic firing rates for the Poisson protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSpec {
    /// Pre-synaptic rate in Hz.
    pub rho_x: f64,
    /// Post-synaptic rate in Hz.
    pub rho_y: f64,
}

impl RateSpec {
    pub fn new(rho_x: f64, rho_y: f64) -> Result<Self> {
        for (name, r) in [("rho_x", rho_x), ("rho_y", rho_y)] {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and non-negative, got {r}"
                )));
            }
        }
        Ok(RateSpec { rho_x, rho_y })
    }

    /// One stimulus realization: independent pre and post trains of the
    /// configured rates, drawn from adjacent substreams of `seed`.
    pub fn gen_trains(&self, duration: f64, seed: Seed) -> Result<(SpikeTrain, SpikeTrain)> {
        let pre = gen_poisson(self.rho_x, duration, seed)?;
        let post = gen_poisson(
            self.rho_y,
            duration,
            seed.with_substream(seed.substream + 1),
        )?;
        Ok((pre, post))
    }
}

/// Reproducible RNG key. The same `(value, stream, substream)` triple always
/// yields the identical random stream, independent of execution order, so
/// grid points and trials can be generated in parallel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub value: u64,
    pub stream: u64,
    pub substream: u64,
}

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed {
            value,
            stream: 0,
            substream: 0,
        }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Seed { stream, ..self }
    }

    pub fn with_substream(self, substream: u64) -> Self {
        Seed { substream, ..self }
    }

    /// Counter-based generator keyed by the full triple: the triple is mixed
    /// through SplitMix64 into a 256-bit ChaCha key, so distinct streams and
    /// substreams are statistically independent.
    pub fn rng(&self) -> ChaCha8Rng {
        fn splitmix(state: &mut u64) -> u64 {
            *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = *state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        }
        let mut state = self.value;
        let a = splitmix(&mut state);
        state ^= self.stream.wrapping_mul(0xA076_1D64_78BD_642F);
        let b = splitmix(&mut state);
        state ^= self.substream.wrapping_mul(0xE703_7ED1_A0B4_28DB);
        let c = splitmix(&mut state);
        let d = splitmix(&mut state);
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&a.to_le_bytes());
        key[8..16].copy_from_slice(&b.to_le_bytes());
        key[16..24].copy_from_slice(&c.to_le_bytes());
        key[24..32].copy_from_slice(&d.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }
}

/// Samples a homogeneous Poisson process of the given rate on
/// `[0, duration)` by cumulative inverse-CDF sampling of exponential
/// inter-spike intervals (no time discretization).
pub fn gen_poisson(rate: f64, duration: f64, seed: Seed) -> Result<SpikeTrain> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::invalid(format!("rate must be >= 0, got {rate}")));
    }
    if !duration.is_finite() || duration <= 0.0 {
        return Err(Error::invalid(format!(
            "duration must be > 0, got {duration}"
        )));
    }
    if rate == 0.0 {
        return SpikeTrain::empty(duration);
    }
    let mut rng = seed.rng();
    let mut times = Vec::with_capacity((rate * duration * 1.1) as usize + 16);
    let mut t = 0.0;
    loop {
        // u in (0, 1): -ln(u) is Exp(1), rejecting u == 0 keeps ISIs > 0
        // so times stay strictly increasing.
        let u = loop {
            let v: f64 = rng.gen();
            if v > 0.0 {
                break v;
            }
        };
        t += -u.ln() / rate;
        if t >= duration {
            break;
        }
        times.push(t);
    }
    SpikeTrain::new(times, duration)
}

/// Deterministic pairing protocol: `n_pairs` pre/post pairs separated by
/// `delta_t` (post minus pre), repeated at `pair_frequency`. Both trains are
/// shifted so every time is non-negative and share a common duration.
pub fn gen_pairing_protocol(
    delta_t: f64,
    pair_frequency: f64,
    n_pairs: usize,
) -> Result<(SpikeTrain, SpikeTrain)> {
    if !pair_frequency.is_finite() || pair_frequency <= 0.0 {
        return Err(Error::invalid(format!(
            "pair_frequency must be > 0, got {pair_frequency}"
        )));
    }
    if n_pairs < 1 {
        return Err(Error::invalid("n_pairs must be >= 1"));
    }
    if !delta_t.is_finite() {
        return Err(Error::invalid("delta_t must be finite"));
    }
    let period = 1.0 / pair_frequency;
    if delta_t.abs() >= period {
        return Err(Error::invalid(format!(
            "|delta_t| = {} must be smaller than the pairing period {period} \
             (pairs would interleave ambiguously)",
            delta_t.abs()
        )));
    }
    let shift = (-delta_t).max(0.0);
    let mut pre = Vec::with_capacity(n_pairs);
    let mut post = Vec::with_capacity(n_pairs);
    for k in 0..n_pairs {
        let base = k as f64 * period;
        pre.push(base + shift);
        post.push(base + shift + delta_t);
    }
    let duration = n_pairs as f64 * period + delta_t.abs();
    Ok((
        SpikeTrain::new(pre, duration)?,
        SpikeTrain::new(post, duration)?,
    ))
}
