//! Event-driven evaluation of the pair-based and triplet-based STDP rules.
//!
//! Weight changes fire on spike events: potentiation terms on post-synaptic
//! spikes, depression terms on pre-synaptic spikes. Three interaction
//! conventions are supported:
//!
//! * [`InteractionMode::NearestSpike`] — each event interacts with the most
//!   recent opposite-type spike (and, for triplet terms, the most recent
//!   same-type spike). Exact bookkeeping via stored event times.
//! * [`InteractionMode::AllToAll`] — each event interacts with every earlier
//!   spike, computed exactly through exponential trace accumulators (closed
//!   form, no numerical integration).
//! * [`InteractionMode::ReducedSymmetric`] — pair rule only: every
//!   pre-synaptic spike is paired once with its nearest post-synaptic
//!   neighbour on each side. Under Poisson stimulation this convention is
//!   the one whose mean drift is given by the closed-form pair curve
//!   (`analytic::pair_bcm_curve`); the potentiation sum is tracked with a
//!   consume-on-post trace.
//!
//! Weights are unbounded; there are no synaptic bounds in the rule layer.
//! Simultaneous pre/post events are resolved by processing the pre event
//! first, and `run_pair` assigns the exact tie to the depression branch of
//! the pair window. The triplet rule has no branch boundary at zero time
//! difference, so its potentiation term is `+A2+` on an exact tie; the
//! pair-reduction identity (`A3+ = A3- = 0`) therefore holds event-for-event
//! on tie-free inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{merged_events, EventKind};
use crate::io::format_float;
use crate::spike::SpikeTrain;

/// Amplitudes and time constants of the pair rule. Both amplitudes are
/// stored positive; the rule applies the depression sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    /// Potentiation amplitude, dimensionless weight units.
    pub a_plus: f64,
    /// Depression amplitude, positive; the rule negates it.
    pub a_minus: f64,
    /// Potentiation window time constant (s).
    pub tau_plus: f64,
    /// Depression window time constant (s).
    pub tau_minus: f64,
}

impl PairParams {
    pub fn new(a_plus: f64, a_minus: f64, tau_plus: f64, tau_minus: f64) -> Result<Self> {
        let p = PairParams {
            a_plus,
            a_minus,
            tau_plus,
            tau_minus,
        };
        p.validate()?;
        Ok(p)
    }

    /// Reference configuration used throughout the experiment defaults:
    /// threshold of the closed-form rate curve sits near 40 Hz.
    pub fn canonical() -> Self {
        PairParams {
            a_plus: 1.0,
            a_minus: 0.7,
            tau_plus: 0.0168,
            tau_minus: 0.0337,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a_plus", self.a_plus), ("a_minus", self.a_minus)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [("tau_plus", self.tau_plus), ("tau_minus", self.tau_minus)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Amplitudes and time constants of the triplet rule.
///
/// `epsilon` is the exclusion offset applied to same-type spike gaps. The
/// update order already excludes the current spike from its own gap, which
/// is the offset's purpose, so the default is 0; a positive value is
/// additionally subtracted from the gaps. Keep it well below the smallest
/// inter-spike interval of interest (<= 1e-6 s in practice).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripletParams {
    pub a2_plus: f64,
    pub a2_minus: f64,
    pub a3_plus: f64,
    pub a3_minus: f64,
    /// Pre trace time constant for the pair potentiation term (s).
    pub tau_plus: f64,
    /// Post trace time constant for the pair depression term (s).
    pub tau_minus: f64,
    /// Pre-pre gap time constant of the triplet depression term (s).
    pub tau_x: f64,
    /// Post-post gap time constant of the triplet potentiation term (s).
    pub tau_y: f64,
    pub epsilon: f64,
}

impl TripletParams {
    /// Minimal triplet model (`a3_minus = 0`) with a rate-curve threshold in
    /// the tens of Hz; the BCM sweep defaults.
    pub fn minimal_bcm() -> Self {
        TripletParams {
            a2_plus: 0.0,
            a2_minus: 1.0,
            a3_plus: 1.0,
            a3_minus: 0.0,
            tau_plus: 0.020,
            tau_minus: 0.050,
            tau_x: 0.101,
            tau_y: 0.100,
            epsilon: 0.0,
        }
    }

    /// Amplitudes tuned so the pairing-frequency protocol shows the
    /// classic effect: total weight change grows with pair frequency.
    pub fn pairing_frequency_demo() -> Self {
        TripletParams {
            a2_plus: 1.0e-4,
            a2_minus: 1.0e-3,
            a3_plus: 6.2e-3,
            a3_minus: 0.0,
            tau_plus: 0.0168,
            tau_minus: 0.0337,
            tau_x: 0.101,
            tau_y: 0.125,
            epsilon: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a2_plus", self.a2_plus),
            ("a2_minus", self.a2_minus),
            ("a3_plus", self.a3_plus),
            ("a3_minus", self.a3_minus),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("tau_plus", self.tau_plus),
            ("tau_minus", self.tau_minus),
            ("tau_x", self.tau_x),
            ("tau_y", self.tau_y),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::invalid(format!(
                "epsilon must be finite and >= 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Which spikes interact. See the module docs for the three conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InteractionMode {
    NearestSpike,
    ReducedSymmetric,
    AllToAll,
}

/// Exponential trace with lazy decay: `value_at(t)` is the sum of
/// `exp(-(t - t_i)/tau)` over all recorded bumps `t_i <= t`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Trace {
    value: f64,
    time: f64,
}

impl Trace {
    pub fn value_at(&self, t: f64, tau: f64) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.value * ((self.time - t) / tau).exp()
        }
    }

    fn bump(&mut self, t: f64, tau: f64) {
        self.value = self.value_at(t, tau) + 1.0;
        self.time = t;
    }

    fn reset(&mut self) {
        self.value = 0.0;
    }
}

/// Per-synapse bookkeeping: current weight, last and second-last event times
/// (nearest-spike interactions), and exponential trace accumulators
/// (all-to-all interactions). All partner-tracking starts empty; a missing
/// partner contributes zero, equivalent to traces initialized at t = -inf.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynapseState {
    pub w: f64,
    pub last_pre: Option<f64>,
    pub last_post: Option<f64>,
    pub second_last_pre: Option<f64>,
    pub second_last_post: Option<f64>,
    /// Pre trace, time constant `tau_plus`.
    pub r1: Trace,
    /// Pre trace, time constant `tau_x`.
    pub r2: Trace,
    /// Post trace, time constant `tau_minus`.
    pub o1: Trace,
    /// Post trace, time constant `tau_y`.
    pub o2: Trace,
    /// Consume-on-post pre trace used by the reduced-symmetric pairing.
    pub pending_pot: Trace,
    last_event: Option<f64>,
}

impl SynapseState {
    pub fn new(w0: f64) -> Self {
        SynapseState {
            w: w0,
            ..Default::default()
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::invalid(format!(
                "event time must be finite, got {t}"
            )));
        }
        if let Some(last) = self.last_event {
            if t < last {
                return Err(Error::invalid(format!(
                    "time regression: event at {t} after event at {last}"
                )));
            }
        }
        Ok(())
    }

    fn note_pre(&mut self, t: f64, tau_plus: f64, tau_x: f64) {
        self.r1.bump(t, tau_plus);
        self.r2.bump(t, tau_x);
        self.pending_pot.bump(t, tau_plus);
        self.second_last_pre = self.last_pre;
        self.last_pre = Some(t);
        self.last_event = Some(t);
    }

    fn note_post(&mut self, t: f64, tau_minus: f64, tau_y: f64) {
        self.o1.bump(t, tau_minus);
        self.o2.bump(t, tau_y);
        self.pending_pot.reset();
        self.second_last_post = self.last_post;
        self.last_post = Some(t);
        self.last_event = Some(t);
    }
}

/// Weight samples recorded at every spike event, in event order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTrajectory {
    samples: Vec<(f64, f64)>,
    final_w: f64,
}

impl WeightTrajectory {
    /// Final weight falls back to `w0` when no events were recorded.
    pub(crate) fn from_samples(samples: Vec<(f64, f64)>, w0: f64) -> Self {
        let final_w = samples.last().map(|&(_, w)| w).unwrap_or(w0);
        WeightTrajectory { samples, final_w }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn final_w(&self) -> f64 {
        self.final_w
    }

    /// CSV export: header `t_seconds,w`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t_seconds,w")?;
        for &(t, weight) in &self.samples {
            writeln!(w, "{},{}", format_float(t), format_float(weight))?;
        }
        Ok(())
    }
}

/// The pair-rule learning window: weight change for a single pre/post pair
/// separated by `delta_t` = t_post - t_pre. Positive differences potentiate,
/// non-positive ones (including the exact tie) depress.
pub fn pair_window(delta_t: f64, params: &PairParams) -> Result<f64> {
    params.validate()?;
    if !delta_t.is_finite() {
        return Err(Error::invalid(format!(
            "delta_t must be finite, got {delta_t}"
        )));
    }
    Ok(pair_window_value(delta_t, params))
}

#[inline]
fn pair_window_value(delta_t: f64, p: &PairParams) -> f64 {
    if delta_t > 0.0 {
        p.a_plus * (-delta_t / p.tau_plus).exp()
    } else {
        -p.a_minus * (delta_t / p.tau_minus).exp()
    }
}

fn check_runs(pre: &SpikeTrain, post: &SpikeTrain) -> Result<()> {
    if pre.duration() != post.duration() {
        return Err(Error::invalid(format!(
            "duration mismatch: pre {} s vs post {} s",
            pre.duration(),
            post.duration()
        )));
    }
    Ok(())
}

/// Runs the pair rule over a pre/post train pair, producing the weight
/// trajectory from `w0`. Trains must share the same duration.
pub fn run_pair(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    params: &PairParams,
    mode: InteractionMode,
    w0: f64,
) -> Result<WeightTrajectory> {
    params.validate()?;
    check_runs(pre, post)?;
    let mut state = SynapseState::new(w0);
    let mut samples = Vec::with_capacity(pre.len() + post.len());
    for (t, kind) in merged_events(pre, post) {
        let dw = match (kind, mode) {
            (EventKind::Pre, InteractionMode::NearestSpike)
            | (EventKind::Pre, InteractionMode::ReducedSymmetric) => state
                .last_post
                .map(|lq| pair_window_value(lq - t, params))
                .unwrap_or(0.0),
            (EventKind::Pre, InteractionMode::AllToAll) => {
                -params.a_minus * state.o1.value_at(t, params.tau_minus)
            }
            (EventKind::Post, InteractionMode::NearestSpike) => state
                .last_pre
                .map(|lp| pair_window_value(t - lp, params))
                .unwrap_or(0.0),
            (EventKind::Post, InteractionMode::ReducedSymmetric) => {
                params.a_plus * state.pending_pot.value_at(t, params.tau_plus)
            }
            (EventKind::Post, InteractionMode::AllToAll) => {
                params.a_plus * state.r1.value_at(t, params.tau_plus)
            }
        };
        match kind {
            EventKind::Pre => state.note_pre(t, params.tau_plus, params.tau_plus),
            EventKind::Post => state.note_post(t, params.tau_minus, params.tau_minus),
        }
        state.w += dw;
        samples.push((t, state.w));
    }
    Ok(WeightTrajectory::from_samples(samples, w0))
}

fn reject_reduced_symmetric(mode: InteractionMode) -> Result<()> {
    if mode == InteractionMode::ReducedSymmetric {
        return Err(Error::invalid(
            "the reduced-symmetric pairing is defined for the pair rule only",
        ));
    }
    Ok(())
}

/// Triplet-rule potentiation, fired by a post-synaptic spike at `t`.
/// Returns the weight change and updates the bookkeeping afterwards.
///
/// The pair factor uses the gap to the last pre spike (no pre yet: the whole
/// term is zero). The triplet factor uses the gap to the previous post spike
/// minus `epsilon` (no previous post: that factor is zero, the pair term
/// remains).
pub fn triplet_on_post(
    state: &mut SynapseState,
    t: f64,
    params: &TripletParams,
    mode: InteractionMode,
) -> Result<f64> {
    params.validate()?;
    reject_reduced_symmetric(mode)?;
    state.check_time(t)?;
    let dw = match mode {
        InteractionMode::NearestSpike => match state.last_pre {
            None => 0.0,
            Some(lp) => {
                let pair_factor = (-(t - lp) / params.tau_plus).exp();
                let triplet = match state.last_post {
                    None => 0.0,
                    Some(lq) => {
                        params.a3_plus * (-((t - lq) - params.epsilon) / params.tau_y).exp()
                    }
                };
                pair_factor * (params.a2_plus + triplet)
            }
        },
        InteractionMode::AllToAll => {
            let pair_factor = state.r1.value_at(t, params.tau_plus);
            let triplet = params.a3_plus
                * state.o2.value_at(t, params.tau_y)
                * (params.epsilon / params.tau_y).exp();
            pair_factor * (params.a2_plus + triplet)
        }
        InteractionMode::ReducedSymmetric => unreachable!(),
    };
    state.note_post(t, params.tau_minus, params.tau_y);
    state.w += dw;
    Ok(dw)
}

/// Triplet-rule depression, fired by a pre-synaptic spike at `t`: the mirror
/// of [`triplet_on_post`] with the pair factor over the gap to the last post
/// and the triplet factor over the previous-pre gap minus `epsilon`.
pub fn triplet_on_pre(
    state: &mut SynapseState,
    t: f64,
    params: &TripletParams,
    mode: InteractionMode,
) -> Result<f64> {
    params.validate()?;
    reject_reduced_symmetric(mode)?;
    state.check_time(t)?;
    let dw = match mode {
        InteractionMode::NearestSpike => match state.last_post {
            None => 0.0,
            Some(lq) => {
                let pair_factor = ((lq - t) / params.tau_minus).exp();
                let triplet = match state.last_pre {
                    None => 0.0,
                    Some(lp) => {
                        params.a3_minus * (-((t - lp) - params.epsilon) / params.tau_x).exp()
                    }
                };
                -pair_factor * (params.a2_minus + triplet)
            }
        },
        InteractionMode::AllToAll => {
            let pair_factor = state.o1.value_at(t, params.tau_minus);
            let triplet = params.a3_minus
                * state.r2.value_at(t, params.tau_x)
                * (params.epsilon / params.tau_x).exp();
            -pair_factor * (params.a2_minus + triplet)
        }
        InteractionMode::ReducedSymmetric => unreachable!(),
    };
    state.note_pre(t, params.tau_plus, params.tau_x);
    state.w += dw;
    Ok(dw)
}

/// Runs the triplet rule over a pre/post train pair from `w0`.
pub fn run_triplet(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    params: &TripletParams,
    mode: InteractionMode,
    w0: f64,
) -> Result<WeightTrajectory> {
    params.validate()?;
    reject_reduced_symmetric(mode)?;
    check_runs(pre, post)?;
    let mut state = SynapseState::new(w0);
    let mut samples = Vec::with_capacity(pre.len() + post.len());
    for (t, kind) in merged_events(pre, post) {
        match kind {
            EventKind::Pre => triplet_on_pre(&mut state, t, params, mode)?,
            EventKind::Post => triplet_on_post(&mut state, t, params, mode)?,
        };
        samples.push((t, state.w));
    }
    Ok(WeightTrajectory::from_samples(samples, w0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spike::{gen_poisson, Seed};

    fn train(times: &[f64], duration: f64) -> SpikeTrain {
        SpikeTrain::new(times.to_vec(), duration).unwrap()
    }

    #[test]
    fn window_at_plus_tau_is_e_inverse() {
        let p = PairParams::new(1.0, 0.7, 0.020, 0.050).unwrap();
        let dw = pair_window(0.020, &p).unwrap();
        assert!((dw - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn window_at_zero_takes_depression_branch() {
        let p = PairParams::new(1.0, 0.7, 0.020, 0.050).unwrap();
        assert_eq!(pair_window(0.0, &p).unwrap(), -0.7);
    }

    #[test]
    fn window_direct_evaluation() {
        let p = PairParams::new(1.0, 0.7, 0.020, 0.050).unwrap();
        let dw = pair_window(0.005, &p).unwrap();
        assert!((dw - (-0.25f64).exp()).abs() < 1e-15);
        assert!((dw - 0.778801).abs() < 1e-6);
    }

    #[test]
    fn window_rejects_non_finite() {
        let p = PairParams::canonical();
        assert!(pair_window(f64::NAN, &p).is_err());
        assert!(pair_window(f64::INFINITY, &p).is_err());
    }

    #[test]
    fn empty_pre_leaves_weight_unchanged() {
        let p = PairParams::canonical();
        let pre = SpikeTrain::empty(1.0).unwrap();
        let post = train(&[0.1, 0.5, 0.9], 1.0);
        for mode in [
            InteractionMode::NearestSpike,
            InteractionMode::ReducedSymmetric,
            InteractionMode::AllToAll,
        ] {
            let traj = run_pair(&pre, &post, &p, mode, 0.25).unwrap();
            assert_eq!(traj.final_w(), 0.25);
            assert_eq!(traj.samples().len(), 3);
        }
    }

    #[test]
    fn single_pair_hand_value() {
        let p = PairParams::new(1.0, 0.7, 0.020, 0.050).unwrap();
        let pre = train(&[0.010], 1.0);
        let post = train(&[0.020], 1.0);
        let traj = run_pair(&pre, &post, &p, InteractionMode::NearestSpike, 0.0).unwrap();
        assert!((traj.final_w() - (-0.5f64).exp()).abs() < 1e-15);
        assert!((traj.final_w() - 0.606531).abs() < 1e-6);
    }

    #[test]
    fn modes_agree_on_single_pre_input() {
        // one pre, two posts: every post sees the same (only) pre, so
        // nearest-spike and all-to-all potentiation coincide.
        let p = PairParams::new(1.0, 0.7, 0.020, 0.050).unwrap();
        let pre = train(&[0.010], 1.0);
        let post = train(&[0.020, 0.030], 1.0);
        let expected = (-0.5f64).exp() + (-1.0f64).exp();
        let near = run_pair(&pre, &post, &p, InteractionMode::NearestSpike, 0.0).unwrap();
        let all = run_pair(&pre, &post, &p, InteractionMode::AllToAll, 0.0).unwrap();
        assert!((near.final_w() - expected).abs() < 1e-12);
        assert!((all.final_w() - expected).abs() < 1e-12);
    }

    #[test]
    fn reduced_symmetric_pairs_each_pre_once() {
        // pre at 10 ms, posts at 20 and 30 ms: only the first post consumes
        // the pre; the second post finds nothing pending.
        let p = PairParams::new(1.0, 0.7, 0.020, 0.050).unwrap();
        let pre = train(&[0.010], 1.0);
        let post = train(&[0.020, 0.030], 1.0);
        let traj = run_pair(&pre, &post, &p, InteractionMode::ReducedSymmetric, 0.0).unwrap();
        assert!((traj.final_w() - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn duration_mismatch_is_rejected() {
        let p = PairParams::canonical();
        let pre = train(&[0.1], 1.0);
        let post = train(&[0.2], 2.0);
        assert!(run_pair(&pre, &post, &p, InteractionMode::NearestSpike, 0.0).is_err());
    }

    #[test]
    fn tie_applies_depression_branch_in_pair_rule() {
        // pre and post at the same instant: pre is processed first, the post
        // sees a zero gap and the window assigns it to depression.
        let p = PairParams::new(1.0, 0.7, 0.020, 0.050).unwrap();
        let pre = train(&[0.5], 1.0);
        let post = train(&[0.5], 1.0);
        let traj = run_pair(&pre, &post, &p, InteractionMode::NearestSpike, 0.0).unwrap();
        assert_eq!(traj.final_w(), -0.7);
    }

    fn demo_triplet() -> TripletParams {
        TripletParams {
            a2_plus: 0.005,
            a2_minus: 0.007,
            a3_plus: 0.006,
            a3_minus: 0.0,
            tau_plus: 0.020,
            tau_minus: 0.050,
            tau_x: 0.101,
            tau_y: 0.100,
            epsilon: 0.0,
        }
    }

    #[test]
    fn first_post_without_pre_contributes_nothing() {
        let mut state = SynapseState::new(0.0);
        let dw = triplet_on_post(
            &mut state,
            0.1,
            &demo_triplet(),
            InteractionMode::NearestSpike,
        )
        .unwrap();
        assert_eq!(dw, 0.0);
        assert_eq!(state.last_post, Some(0.1));
    }

    #[test]
    fn triplet_potentiation_hand_value() {
        // gap to last pre 5 ms, gap to previous post 30 ms
        let params = demo_triplet();
        let mut state = SynapseState::new(0.0);
        triplet_on_post(&mut state, 0.070, &params, InteractionMode::NearestSpike).unwrap();
        triplet_on_pre(&mut state, 0.095, &params, InteractionMode::NearestSpike).unwrap();
        let dw =
            triplet_on_post(&mut state, 0.100, &params, InteractionMode::NearestSpike).unwrap();
        let expected = (-0.25f64).exp() * (0.005 + 0.006 * (-0.3f64).exp());
        assert!((dw - expected).abs() < 1e-15);
        assert!((dw - 0.0073556).abs() < 1e-6);
    }

    #[test]
    fn triplet_depression_hand_value() {
        // pre 10 ms after the only post
        let params = demo_triplet();
        let mut state = SynapseState::new(0.0);
        triplet_on_post(&mut state, 0.200, &params, InteractionMode::NearestSpike).unwrap();
        let dw = triplet_on_pre(&mut state, 0.210, &params, InteractionMode::NearestSpike).unwrap();
        let expected = -0.007 * (-0.2f64).exp();
        assert!((dw - expected).abs() < 1e-15);
        assert!((dw - (-0.0057312)).abs() < 1e-7);
    }

    #[test]
    fn zero_depression_amplitudes_give_zero() {
        let mut params = demo_triplet();
        params.a2_minus = 0.0;
        params.a3_minus = 0.0;
        let mut state = SynapseState::new(0.0);
        triplet_on_post(&mut state, 0.1, &params, InteractionMode::NearestSpike).unwrap();
        let dw = triplet_on_pre(&mut state, 0.15, &params, InteractionMode::NearestSpike).unwrap();
        assert_eq!(dw, 0.0);
    }

    #[test]
    fn time_regression_is_rejected() {
        let mut state = SynapseState::new(0.0);
        triplet_on_post(
            &mut state,
            0.5,
            &demo_triplet(),
            InteractionMode::NearestSpike,
        )
        .unwrap();
        assert!(triplet_on_pre(
            &mut state,
            0.4,
            &demo_triplet(),
            InteractionMode::NearestSpike
        )
        .is_err());
    }

    #[test]
    fn empty_post_leaves_weight_at_w0() {
        let params = demo_triplet();
        let pre = train(&[0.1, 0.2, 0.3], 1.0);
        let post = SpikeTrain::empty(1.0).unwrap();
        let traj = run_triplet(&pre, &post, &params, InteractionMode::NearestSpike, 2.0).unwrap();
        assert_eq!(traj.final_w(), 2.0);
    }

    #[test]
    fn two_post_run_sums_hand_terms() {
        // pre at 0; posts at 5 ms and 35 ms
        let params = demo_triplet();
        let pre = train(&[0.0], 1.0);
        let post = train(&[0.005, 0.035], 1.0);
        let traj = run_triplet(&pre, &post, &params, InteractionMode::NearestSpike, 0.0).unwrap();
        let first = (-0.25f64).exp() * 0.005;
        let second = (-1.75f64).exp() * (0.005 + 0.006 * (-0.3f64).exp());
        assert!((traj.final_w() - (first + second)).abs() < 1e-15);
    }

    #[test]
    fn triplet_reduces_to_pair_when_a3_zero() {
        let pair = PairParams::new(0.005, 0.007, 0.020, 0.050).unwrap();
        let mut trip = demo_triplet();
        trip.a3_plus = 0.0;
        let pre = gen_poisson(20.0, 10.0, Seed::new(5)).unwrap();
        let post = gen_poisson(30.0, 10.0, Seed::new(6)).unwrap();
        for mode in [InteractionMode::NearestSpike, InteractionMode::AllToAll] {
            let a = run_pair(&pre, &post, &pair, mode, 0.5).unwrap();
            let b = run_triplet(&pre, &post, &trip, mode, 0.5).unwrap();
            assert_eq!(a.samples(), b.samples(), "mode {mode:?}");
            assert_eq!(a.final_w(), b.final_w());
        }
    }

    #[test]
    fn reduced_symmetric_rejected_for_triplet() {
        let pre = train(&[0.1], 1.0);
        let post = train(&[0.2], 1.0);
        assert!(run_triplet(
            &pre,
            &post,
            &demo_triplet(),
            InteractionMode::ReducedSymmetric,
            0.0
        )
        .is_err());
    }

    #[test]
    fn trajectory_csv_has_schema() {
        let p = PairParams::canonical();
        let pre = train(&[0.1], 1.0);
        let post = train(&[0.2], 1.0);
        let traj = run_pair(&pre, &post, &p, InteractionMode::NearestSpike, 0.0).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t_seconds,w\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
