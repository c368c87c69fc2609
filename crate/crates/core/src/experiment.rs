//! Protocol runner: seeded Monte-Carlo sweeps over post-rate grids,
//! threshold extraction and modulation, the deterministic pairing-frequency
//! protocol, and Monte-Carlo versus closed-form comparison reports.
//!
//! Reproducibility contract: every trial derives its own RNG from
//! `(base_seed, grid index, trial index)`, and aggregation follows index
//! order. Results are therefore identical whether trials run serially or on
//! any number of threads.

use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticCurve, Normalization};
use crate::circuit::{
    pair_circuit_run, triplet_circuit_run, PairCircuitParams, TripletCircuitParams,
};
use crate::error::{Error, Result};
use crate::io::format_float;
use crate::rules::{
    run_pair, run_triplet, InteractionMode, PairParams, TripletParams, WeightTrajectory,
};
use crate::spike::{gen_pairing_protocol, RateSpec, Seed, SpikeTrain};

/// Which plasticity implementation an experiment drives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleKind {
    Pair(PairParams),
    Triplet(TripletParams),
    PairCircuit(PairCircuitParams),
    TripletCircuit(TripletCircuitParams),
}

impl RuleKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            RuleKind::Pair(p) => p.validate(),
            RuleKind::Triplet(p) => p.validate(),
            RuleKind::PairCircuit(p) => p.validate(),
            RuleKind::TripletCircuit(p) => p.validate(),
        }
    }

    /// Starting weight: zero for the unbounded rules, half rail for the
    /// clamped circuits so drift stays measurable in both directions.
    pub fn w0(&self) -> f64 {
        match self {
            RuleKind::Pair(_) | RuleKind::Triplet(_) => 0.0,
            RuleKind::PairCircuit(p) => p.w_max() / 2.0,
            RuleKind::TripletCircuit(p) => p.pair.w_max() / 2.0,
        }
    }

    /// Runs one trial. Circuit models are inherently nearest-spike; the
    /// interaction mode applies to the rule variants only.
    pub fn run(
        &self,
        pre: &SpikeTrain,
        post: &SpikeTrain,
        mode: InteractionMode,
        w0: f64,
    ) -> Result<WeightTrajectory> {
        match self {
            RuleKind::Pair(p) => run_pair(pre, post, p, mode, w0),
            RuleKind::Triplet(p) => run_triplet(pre, post, p, mode, w0),
            RuleKind::PairCircuit(p) => pair_circuit_run(pre, post, p, w0),
            RuleKind::TripletCircuit(p) => triplet_circuit_run(pre, post, p, w0),
        }
    }
}

/// Full description of one Poisson-protocol sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub rule: RuleKind,
    pub mode: InteractionMode,
    /// Pre-synaptic rate (Hz).
    pub rho_x: f64,
    /// Ascending post-synaptic rate grid (Hz).
    pub rho_y_grid: Vec<f64>,
    /// Trial length in biological seconds.
    pub duration: f64,
    pub n_trials: usize,
    pub base_seed: u64,
    pub normalization: Normalization,
}

pub const DEFAULT_DURATION_S: f64 = 200.0;
pub const DEFAULT_TRIALS: usize = 50;

/// 16 rates from 5 to 120 Hz, the default sweep grid.
pub fn default_rate_grid() -> Vec<f64> {
    let (lo, hi, n) = (5.0, 120.0, 16);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.rule.validate()?;
        if matches!(self.rule, RuleKind::Triplet(_))
            && self.mode == InteractionMode::ReducedSymmetric
        {
            return Err(Error::invalid(
                "the reduced-symmetric pairing is defined for the pair rule only",
            ));
        }
        if !self.rho_x.is_finite() || self.rho_x < 0.0 {
            return Err(Error::invalid(format!(
                "rho_x must be >= 0, got {}",
                self.rho_x
            )));
        }
        if self.rho_y_grid.is_empty() {
            return Err(Error::invalid("rho_y_grid must be non-empty"));
        }
        for &r in &self.rho_y_grid {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::invalid(format!("grid rate must be >= 0, got {r}")));
            }
        }
        for pair in self.rho_y_grid.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::invalid("rho_y_grid must be strictly ascending"));
            }
        }
        if !self.duration.is_finite() || self.duration <= 0.0 {
            return Err(Error::invalid(format!(
                "duration must be > 0, got {}",
                self.duration
            )));
        }
        if self.n_trials < 1 {
            return Err(Error::invalid("n_trials must be >= 1"));
        }
        Ok(())
    }
}

/// One grid point of a Monte-Carlo rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcmCurvePoint {
    pub rho_y: f64,
    pub mean_drift: f64,
    pub std_error: f64,
    pub n_trials: usize,
}

#[cfg(feature = "parallel")]
fn map_jobs<J: Sync, T: Send>(
    jobs: &[J],
    f: impl Fn(&J) -> Result<T> + Send + Sync,
) -> Result<Vec<T>> {
    use rayon::prelude::*;
    jobs.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_jobs<J, T>(jobs: &[J], f: impl Fn(&J) -> Result<T>) -> Result<Vec<T>> {
    jobs.iter().map(f).collect()
}

fn trial_raw_drift(config: &ExperimentConfig, grid_index: usize, trial: usize) -> Result<f64> {
    let rates = RateSpec::new(config.rho_x, config.rho_y_grid[grid_index])?;
    let seed = Seed::new(config.base_seed)
        .with_stream(grid_index as u64)
        .with_substream(2 * trial as u64);
    let (pre, post) = rates.gen_trains(config.duration, seed)?;
    let w0 = config.rule.w0();
    Ok(config.rule.run(&pre, &post, config.mode, w0)?.final_w() - w0)
}

/// Runs the Poisson protocol over the configured grid: `n_trials`
/// independent trials per grid point, each with fresh pre/post trains,
/// reporting the normalized mean drift and its standard error.
pub fn bcm_sweep(config: &ExperimentConfig) -> Result<Vec<BcmCurvePoint>> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = (0..config.rho_y_grid.len())
        .flat_map(|g| (0..config.n_trials).map(move |k| (g, k)))
        .collect();
    let drifts = map_jobs(&jobs, |&(g, k)| trial_raw_drift(config, g, k))?;

    let divisor = match config.normalization {
        Normalization::PerPreSpike => config.rho_x * config.duration,
        Normalization::PerSecond => config.duration,
    };
    let n = config.n_trials;
    let mut points = Vec::with_capacity(config.rho_y_grid.len());
    for (g, &rho_y) in config.rho_y_grid.iter().enumerate() {
        let raw = &drifts[g * n..(g + 1) * n];
        let (mean, se) = mean_and_std_error(raw);
        // a zero pre rate produces no weight changes at all, so the
        // per-pre-spike drift is zero rather than 0/0
        let (mean, se) = if divisor == 0.0 {
            debug_assert!(raw.iter().all(|&d| d == 0.0));
            (0.0, 0.0)
        } else {
            (mean / divisor, se / divisor)
        };
        points.push(BcmCurvePoint {
            rho_y,
            mean_drift: mean,
            std_error: se,
            n_trials: n,
        });
    }
    Ok(points)
}

fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// CSV export of a rate curve: `rho_y_hz,mean_drift,std_error,n_trials`.
pub fn write_curve_csv<W: std::io::Write>(points: &[BcmCurvePoint], mut w: W) -> Result<()> {
    writeln!(w, "rho_y_hz,mean_drift,std_error,n_trials")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{}",
            format_float(p.rho_y),
            format_float(p.mean_drift),
            format_float(p.std_error),
            p.n_trials
        )?;
    }
    Ok(())
}

/// How a threshold estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMethod {
    InterpolatedSignChange,
    Analytic,
}

/// Depression-to-potentiation crossover extracted from a rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub theta_hat: Option<f64>,
    /// Grid rates bracketing the sign change, when one exists.
    pub bracket: Option<(f64, f64)>,
    pub method: ThresholdMethod,
}

/// Finds the first negative-to-positive sign change between adjacent grid
/// points and interpolates the crossing rate linearly. Returns an estimate
/// with no value when the means never change sign, and refuses a curve whose
/// only sign change runs the wrong way.
pub fn extract_threshold(points: &[BcmCurvePoint]) -> Result<ThresholdEstimate> {
    if points.len() < 2 {
        return Err(Error::invalid(
            "need at least two grid points to bracket a threshold",
        ));
    }
    let mut reversed = None;
    for pair in points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.mean_drift < 0.0 && b.mean_drift > 0.0 {
            let t = -a.mean_drift / (b.mean_drift - a.mean_drift);
            return Ok(ThresholdEstimate {
                theta_hat: Some(a.rho_y + t * (b.rho_y - a.rho_y)),
                bracket: Some((a.rho_y, b.rho_y)),
                method: ThresholdMethod::InterpolatedSignChange,
            });
        }
        if a.mean_drift > 0.0 && b.mean_drift < 0.0 {
            reversed = Some((a.rho_y, b.rho_y));
        }
    }
    if let Some((lo, hi)) = reversed {
        return Err(Error::UnexpectedOrientation(format!(
            "drift crosses from positive to negative between {lo} and {hi} Hz"
        )));
    }
    Ok(ThresholdEstimate {
        theta_hat: None,
        bracket: None,
        method: ThresholdMethod::InterpolatedSignChange,
    })
}

/// Number of sign changes along the curve means (zeros break runs but are
/// not counted as crossings themselves).
pub fn count_sign_changes(points: &[BcmCurvePoint]) -> usize {
    let mut changes = 0;
    let mut last_sign = 0i8;
    for p in points {
        let sign = if p.mean_drift > 0.0 {
            1
        } else if p.mean_drift < 0.0 {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                changes += 1;
            }
            last_sign = sign;
        }
    }
    changes
}

/// A single amplitude parameter replacement for threshold-modulation runs.
/// Only amplitudes are expressible; time constants and the rest of the
/// configuration cannot be varied through this type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeOverride {
    APlus(f64),
    AMinus(f64),
    A2Plus(f64),
    A2Minus(f64),
    A3Plus(f64),
    A3Minus(f64),
    IPot(f64),
    IDep(f64),
    IPot3(f64),
    IDep3(f64),
}

impl AmplitudeOverride {
    pub fn label(&self) -> String {
        let (name, v) = self.parts();
        format!("{name}={v}")
    }

    fn parts(&self) -> (&'static str, f64) {
        match *self {
            AmplitudeOverride::APlus(v) => ("a_plus", v),
            AmplitudeOverride::AMinus(v) => ("a_minus", v),
            AmplitudeOverride::A2Plus(v) => ("a2_plus", v),
            AmplitudeOverride::A2Minus(v) => ("a2_minus", v),
            AmplitudeOverride::A3Plus(v) => ("a3_plus", v),
            AmplitudeOverride::A3Minus(v) => ("a3_minus", v),
            AmplitudeOverride::IPot(v) => ("i_pot", v),
            AmplitudeOverride::IDep(v) => ("i_dep", v),
            AmplitudeOverride::IPot3(v) => ("i_pot3", v),
            AmplitudeOverride::IDep3(v) => ("i_dep3", v),
        }
    }

    /// Applies the override to a copy of `rule`; an override aimed at a
    /// parameter the rule does not have is an invalid argument.
    pub fn apply(&self, rule: &RuleKind) -> Result<RuleKind> {
        let mut rule = *rule;
        match (&mut rule, *self) {
            (RuleKind::Pair(p), AmplitudeOverride::APlus(v)) => p.a_plus = v,
            (RuleKind::Pair(p), AmplitudeOverride::AMinus(v)) => p.a_minus = v,
            (RuleKind::Triplet(p), AmplitudeOverride::A2Plus(v)) => p.a2_plus = v,
            (RuleKind::Triplet(p), AmplitudeOverride::A2Minus(v)) => p.a2_minus = v,
            (RuleKind::Triplet(p), AmplitudeOverride::A3Plus(v)) => p.a3_plus = v,
            (RuleKind::Triplet(p), AmplitudeOverride::A3Minus(v)) => p.a3_minus = v,
            (RuleKind::PairCircuit(p), AmplitudeOverride::IPot(v)) => p.i_pot = v,
            (RuleKind::PairCircuit(p), AmplitudeOverride::IDep(v)) => p.i_dep = v,
            (RuleKind::TripletCircuit(p), AmplitudeOverride::IPot(v)) => p.pair.i_pot = v,
            (RuleKind::TripletCircuit(p), AmplitudeOverride::IDep(v)) => p.pair.i_dep = v,
            (RuleKind::TripletCircuit(p), AmplitudeOverride::IPot3(v)) => p.i_pot3 = v,
            (RuleKind::TripletCircuit(p), AmplitudeOverride::IDep3(v)) => p.i_dep3 = v,
            _ => {
                return Err(Error::invalid(format!(
                    "override {} does not apply to the configured rule",
                    self.label()
                )))
            }
        }
        rule.validate()?;
        Ok(rule)
    }
}

/// One labeled curve of a threshold-modulation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantCurve {
    pub label: String,
    pub points: Vec<BcmCurvePoint>,
    pub estimate: ThresholdEstimate,
}

/// Runs the base sweep under three amplitude variants (same seeds, so the
/// trains are shared across variants) and extracts each threshold.
pub fn threshold_modulation(
    base: &ExperimentConfig,
    variants: &[AmplitudeOverride; 3],
) -> Result<Vec<VariantCurve>> {
    let first = std::mem::discriminant(&variants[0]);
    if variants.iter().any(|v| std::mem::discriminant(v) != first) {
        return Err(Error::invalid(
            "all three variants must override the same amplitude parameter",
        ));
    }
    let mut curves = Vec::with_capacity(3);
    for variant in variants {
        let mut config = base.clone();
        config.rule = variant.apply(&base.rule)?;
        let points = bcm_sweep(&config)?;
        let estimate = extract_threshold(&points)?;
        curves.push(VariantCurve {
            label: variant.label(),
            points,
            estimate,
        });
    }
    Ok(curves)
}

/// CSV export of a modulation run; the base curve schema plus a trailing
/// `variant` column.
pub fn write_modulation_csv<W: std::io::Write>(curves: &[VariantCurve], mut w: W) -> Result<()> {
    writeln!(w, "rho_y_hz,mean_drift,std_error,n_trials,variant")?;
    for curve in curves {
        for p in &curve.points {
            writeln!(
                w,
                "{},{},{},{},{}",
                format_float(p.rho_y),
                format_float(p.mean_drift),
                format_float(p.std_error),
                p.n_trials,
                curve.label
            )?;
        }
    }
    Ok(())
}

/// Deterministic pairing protocol swept over pair frequencies: returns
/// `(frequency, total weight change)` per frequency.
pub fn pairing_frequency_sweep(
    rule: &RuleKind,
    mode: InteractionMode,
    delta_t: f64,
    freqs: &[f64],
    n_pairs: usize,
) -> Result<Vec<(f64, f64)>> {
    rule.validate()?;
    if freqs.is_empty() {
        return Err(Error::invalid("need at least one pairing frequency"));
    }
    for &f in freqs {
        if !f.is_finite() {
            return Err(Error::invalid(format!("frequency must be finite, got {f}")));
        }
    }
    for pair in freqs.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid("frequencies must be strictly ascending"));
        }
    }
    let w0 = rule.w0();
    let mut out = Vec::with_capacity(freqs.len());
    for &f in freqs {
        let (pre, post) = gen_pairing_protocol(delta_t, f, n_pairs)?;
        let traj = rule.run(&pre, &post, mode, w0)?;
        out.push((f, traj.final_w() - w0));
    }
    Ok(out)
}

/// CSV export: `pair_frequency_hz,total_delta_w`.
pub fn write_pairing_csv<W: std::io::Write>(rows: &[(f64, f64)], mut w: W) -> Result<()> {
    writeln!(w, "pair_frequency_hz,total_delta_w")?;
    for &(f, dw) in rows {
        writeln!(w, "{},{}", format_float(f), format_float(dw))?;
    }
    Ok(())
}

/// Per-point comparison of a Monte-Carlo curve against a closed-form oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonPoint {
    pub rho_y: f64,
    pub mc_mean: f64,
    pub std_error: f64,
    pub oracle_drift: f64,
    /// Standardized residual `(mc_mean - oracle) / std_error`.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub points: Vec<ComparisonPoint>,
    /// Fraction of grid points with |z| <= 3.
    pub frac_within: f64,
    pub pass: bool,
}

/// Runs the configured sweep and scores each grid point against the oracle
/// curve; the report passes when at least 95% of points sit within three
/// standard errors.
pub fn compare_mc_analytic(
    config: &ExperimentConfig,
    oracle: &AnalyticCurve,
) -> Result<ComparisonReport> {
    if config.normalization != oracle.normalization() {
        return Err(Error::invalid(format!(
            "normalization mismatch: config is {:?}, oracle is {:?}",
            config.normalization,
            oracle.normalization()
        )));
    }
    let mc = bcm_sweep(config)?;
    Ok(score_against_oracle(&mc, oracle))
}

/// Scores an already-computed curve against an oracle (used by
/// [`compare_mc_analytic`] and directly by reports that reuse a sweep).
pub fn score_against_oracle(mc: &[BcmCurvePoint], oracle: &AnalyticCurve) -> ComparisonReport {
    let points: Vec<ComparisonPoint> = mc
        .iter()
        .map(|p| {
            let oracle_drift = oracle.evaluate(p.rho_y);
            let diff = p.mean_drift - oracle_drift;
            let z = if p.std_error > 0.0 {
                diff / p.std_error
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            ComparisonPoint {
                rho_y: p.rho_y,
                mc_mean: p.mean_drift,
                std_error: p.std_error,
                oracle_drift,
                z,
            }
        })
        .collect();
    let within = points.iter().filter(|p| p.z.abs() <= 3.0).count();
    let frac_within = within as f64 / points.len().max(1) as f64;
    ComparisonReport {
        points,
        frac_within,
        pass: frac_within >= 0.95,
    }
}

/// CSV export: `rho_y_hz,mean_drift,std_error,oracle_drift,z`.
pub fn write_comparison_csv<W: std::io::Write>(report: &ComparisonReport, mut w: W) -> Result<()> {
    writeln!(w, "rho_y_hz,mean_drift,std_error,oracle_drift,z")?;
    for p in &report.points {
        writeln!(
            w,
            "{},{},{},{},{}",
            format_float(p.rho_y),
            format_float(p.mc_mean),
            format_float(p.std_error),
            format_float(p.oracle_drift),
            format_float(p.z)
        )?;
    }
    Ok(())
}
