//! Behavioral models of the pair and triplet synapse circuits.
//!
//! Internal node voltages ramp linearly between the rails: a pre pulse
//! resets the potentiation voltage to zero (it then climbs back toward
//! `vdd`), a post pulse sets the depression voltage to `vdd` (it then decays
//! toward zero). A pulse of the opposite kind arriving while a ramp is still
//! between the rails gates charge onto the weight capacitor in proportion to
//! the ramp's window drive, so an isolated pair traces out a piecewise
//! linear learning window of half-lengths `vdd/slope_dep` and
//! `vdd/slope_pot`. Reset-on-event ramps make the circuit inherently
//! nearest-spike. The triplet extension adds a second ramp per side, opened
//! by the previous same-type pulse; the extra charge is gated by the product
//! of both window drives, matching a series transistor stack.
//!
//! Voltages are clamped to `[0, vdd]` and the weight to `[0, vdd]` at all
//! times. Weight change per pulse is `(current / c_w) * drive * pulse_width`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{merged_events, EventKind};
use crate::rules::WeightTrajectory;
use crate::spike::SpikeTrain;

/// Direction of the potentiation drive read from the ramp voltage.
///
/// `WindowComplement` (default) uses `1 - v_pot/vdd`, which decays as the
/// window ages and vanishes at saturation, giving the expected decaying
/// learning window. `RampValue` reads the raw `v_pot/vdd` while the window
/// is open, the literal transcription of the circuit description's
/// "proportional to the ramp voltage" phrasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentiationDrive {
    #[default]
    WindowComplement,
    RampValue,
}

/// Behavioral parameters of the pair circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCircuitParams {
    /// Supply rail (V).
    pub vdd: f64,
    /// Ramp rate of the potentiation voltage back toward `vdd` (V/s);
    /// sets the potentiation window length `vdd / slope_pot`.
    pub slope_pot: f64,
    /// Ramp rate of the depression voltage toward 0 (V/s).
    pub slope_dep: f64,
    /// Potentiation charge-rate amplitude (weight-units/s).
    pub i_pot: f64,
    /// Depression charge-rate amplitude (weight-units/s).
    pub i_dep: f64,
    /// Pulse duration (s); must be well below both window lengths.
    pub pulse_width: f64,
    /// Weight-capacitor surrogate: weight units per unit charge.
    pub c_w: f64,
    /// Circuit-to-biological time acceleration, used in reports only.
    pub accel: f64,
    pub pot_drive: PotentiationDrive,
}

impl PairCircuitParams {
    /// Defaults with 50 ms windows on both sides and a depression to
    /// potentiation amplitude ratio of 1.5, which puts the Poisson-protocol
    /// crossover near 40 Hz at a 10 Hz pre rate.
    pub fn canonical() -> Self {
        PairCircuitParams {
            vdd: 3.3,
            slope_pot: 66.0,
            slope_dep: 66.0,
            i_pot: 200.0,
            i_dep: 300.0,
            pulse_width: 1e-6,
            c_w: 1.0,
            accel: 1000.0,
            pot_drive: PotentiationDrive::WindowComplement,
        }
    }

    /// Maximum weight (the supply rail).
    pub fn w_max(&self) -> f64 {
        self.vdd
    }

    /// Potentiation window length `vdd / slope_pot` (s).
    pub fn window_pot(&self) -> f64 {
        self.vdd / self.slope_pot
    }

    /// Depression window length `vdd / slope_dep` (s).
    pub fn window_dep(&self) -> f64 {
        self.vdd / self.slope_dep
    }

    /// Weight change per pulse at full drive.
    pub fn charge_pot(&self) -> f64 {
        self.i_pot / self.c_w * self.pulse_width
    }

    pub fn charge_dep(&self) -> f64 {
        self.i_dep / self.c_w * self.pulse_width
    }

    /// Rescales every per-second quantity by `factor` (slopes and currents
    /// up, pulse width down). Running the rescaled circuit on trains with
    /// times divided by `factor` reproduces the same weight changes; this is
    /// the map between biological-time and accelerated circuit-time
    /// parameterizations.
    pub fn scaled_by(&self, factor: f64) -> Self {
        PairCircuitParams {
            slope_pot: self.slope_pot * factor,
            slope_dep: self.slope_dep * factor,
            i_pot: self.i_pot * factor,
            i_dep: self.i_dep * factor,
            pulse_width: self.pulse_width / factor,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("vdd", self.vdd),
            ("slope_pot", self.slope_pot),
            ("slope_dep", self.slope_dep),
            ("i_pot", self.i_pot),
            ("i_dep", self.i_dep),
            ("pulse_width", self.pulse_width),
            ("c_w", self.c_w),
            ("accel", self.accel),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        let min_window = self.window_pot().min(self.window_dep());
        if self.pulse_width * 10.0 > min_window {
            return Err(Error::invalid(format!(
                "pulse_width {} is not small against the shortest window {min_window}",
                self.pulse_width
            )));
        }
        Ok(())
    }
}

/// Triplet circuit: the pair circuit plus a second ramp per side, opened by
/// the previous same-type pulse. `i_dep3 = 0` selects the minimal variant
/// with the second depression branch removed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripletCircuitParams {
    pub pair: PairCircuitParams,
    /// Ramp rate of the post-opened potentiation window (V/s).
    pub slope_pot2: f64,
    /// Ramp rate of the pre-opened depression window (V/s).
    pub slope_dep2: f64,
    /// Triplet potentiation charge-rate amplitude (weight-units/s).
    pub i_pot3: f64,
    /// Triplet depression charge-rate amplitude; 0 disables the branch.
    pub i_dep3: f64,
}

impl TripletCircuitParams {
    /// Minimal triplet circuit on top of the canonical pair circuit:
    /// 100 ms second-window ramps, triplet depression disabled.
    pub fn canonical() -> Self {
        TripletCircuitParams {
            pair: PairCircuitParams::canonical(),
            slope_pot2: 33.0,
            slope_dep2: 33.0,
            i_pot3: 400.0,
            i_dep3: 0.0,
        }
    }

    pub fn scaled_by(&self, factor: f64) -> Self {
        TripletCircuitParams {
            pair: self.pair.scaled_by(factor),
            slope_pot2: self.slope_pot2 * factor,
            slope_dep2: self.slope_dep2 * factor,
            i_pot3: self.i_pot3 * factor,
            i_dep3: self.i_dep3 * factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.pair.validate()?;
        for (name, v) in [
            ("slope_pot2", self.slope_pot2),
            ("slope_dep2", self.slope_dep2),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [("i_pot3", self.i_pot3), ("i_dep3", self.i_dep3)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Node voltages and weight of a circuit instance. Voltages start at their
/// rest rails (windows expired, no depression pending).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitState {
    pub v_pot: f64,
    pub v_pot2: f64,
    pub v_dep: f64,
    pub v_dep2: f64,
    pub w: f64,
    pub time: f64,
}

impl CircuitState {
    pub fn rest(vdd: f64, w0: f64) -> Self {
        CircuitState {
            v_pot: vdd,
            v_pot2: vdd,
            v_dep: 0.0,
            v_dep2: 0.0,
            w: w0,
            time: 0.0,
        }
    }

    /// Advances the pair-circuit ramps to time `t` with rail clamping.
    fn advance_pair(&mut self, t: f64, p: &PairCircuitParams) {
        let dt = t - self.time;
        self.v_pot = (self.v_pot + p.slope_pot * dt).min(p.vdd);
        self.v_dep = (self.v_dep - p.slope_dep * dt).max(0.0);
        self.time = t;
    }

    fn advance_triplet(&mut self, t: f64, p: &TripletCircuitParams) {
        let dt = t - self.time;
        self.v_pot2 = (self.v_pot2 + p.slope_pot2 * dt).min(p.pair.vdd);
        self.v_dep2 = (self.v_dep2 - p.slope_dep2 * dt).max(0.0);
        self.advance_pair(t, &p.pair);
    }

    fn clamp_w(&mut self, w_max: f64) {
        self.w = self.w.clamp(0.0, w_max);
    }
}

fn pot_drive(v_pot: f64, p: &PairCircuitParams) -> f64 {
    match p.pot_drive {
        PotentiationDrive::WindowComplement => 1.0 - v_pot / p.vdd,
        PotentiationDrive::RampValue => {
            if v_pot < p.vdd {
                v_pot / p.vdd
            } else {
                0.0
            }
        }
    }
}

fn check_circuit_run(pre: &SpikeTrain, post: &SpikeTrain, w0: f64, w_max: f64) -> Result<()> {
    if pre.duration() != post.duration() {
        return Err(Error::invalid(format!(
            "duration mismatch: pre {} s vs post {} s",
            pre.duration(),
            post.duration()
        )));
    }
    if !w0.is_finite() || w0 < 0.0 || w0 > w_max {
        return Err(Error::invalid(format!(
            "w0 must lie in [0, {w_max}], got {w0}"
        )));
    }
    Ok(())
}

/// Event-driven run of the pair circuit. A pre pulse samples the depression
/// window and then re-opens the potentiation ramp; a post pulse samples the
/// potentiation window and then re-opens the depression ramp.
pub fn pair_circuit_run(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    params: &PairCircuitParams,
    w0: f64,
) -> Result<WeightTrajectory> {
    params.validate()?;
    check_circuit_run(pre, post, w0, params.w_max())?;
    let mut state = CircuitState::rest(params.vdd, w0);
    let mut samples = Vec::with_capacity(pre.len() + post.len());
    for (t, kind) in merged_events(pre, post) {
        state.advance_pair(t, params);
        match kind {
            EventKind::Pre => {
                let drive = state.v_dep / params.vdd;
                if drive > 0.0 {
                    state.w -= params.charge_dep() * drive;
                }
                state.v_pot = 0.0;
            }
            EventKind::Post => {
                let drive = pot_drive(state.v_pot, params);
                if drive > 0.0 {
                    state.w += params.charge_pot() * drive;
                }
                state.v_dep = params.vdd;
            }
        }
        state.clamp_w(params.w_max());
        samples.push((t, state.w));
    }
    Ok(WeightTrajectory::from_samples(samples, w0))
}

/// Event-driven run of the triplet circuit. On top of the pair behaviour, a
/// post pulse re-opens the second potentiation ramp for the *next* post, and
/// charges through the triplet branch gated by the product of both
/// potentiation drives; the depression side mirrors this with the second
/// ramp opened by the previous pre pulse.
pub fn triplet_circuit_run(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    params: &TripletCircuitParams,
    w0: f64,
) -> Result<WeightTrajectory> {
    params.validate()?;
    let p = &params.pair;
    check_circuit_run(pre, post, w0, p.w_max())?;
    let mut state = CircuitState::rest(p.vdd, w0);
    let mut samples = Vec::with_capacity(pre.len() + post.len());
    for (t, kind) in merged_events(pre, post) {
        state.advance_triplet(t, params);
        match kind {
            EventKind::Pre => {
                let d1 = state.v_dep / p.vdd;
                let d2 = state.v_dep2 / p.vdd;
                if d1 > 0.0 {
                    state.w -= p.charge_dep() * d1;
                    if params.i_dep3 > 0.0 && d2 > 0.0 {
                        state.w -= params.i_dep3 / p.c_w * p.pulse_width * d1 * d2;
                    }
                }
                state.v_pot = 0.0;
                state.v_dep2 = p.vdd;
            }
            EventKind::Post => {
                let d1 = pot_drive(state.v_pot, p);
                let d2 = 1.0 - state.v_pot2 / p.vdd;
                if d1 > 0.0 {
                    state.w += p.charge_pot() * d1;
                    if params.i_pot3 > 0.0 && d2 > 0.0 {
                        state.w += params.i_pot3 / p.c_w * p.pulse_width * d1 * d2;
                    }
                }
                state.v_dep = p.vdd;
                state.v_pot2 = 0.0;
            }
        }
        state.clamp_w(p.w_max());
        samples.push((t, state.w));
    }
    Ok(WeightTrajectory::from_samples(samples, w0))
}

/// Weight change of an isolated pre/post pair as a function of their timing
/// difference, starting each run from the rest state at half rail. The
/// output is piecewise linear in the timing difference and zero outside
/// `[-vdd/slope_dep, vdd/slope_pot]`.
pub fn circuit_learning_window(
    params: &PairCircuitParams,
    delta_t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    let w0 = params.w_max() / 2.0;
    let mut out = Vec::with_capacity(delta_t_grid.len());
    for &dt in delta_t_grid {
        if !dt.is_finite() {
            return Err(Error::invalid(format!("delta_t must be finite, got {dt}")));
        }
        let t_pre = (-dt).max(0.0);
        let t_post = dt.max(0.0);
        let duration = dt.abs() + 1.0;
        let pre = SpikeTrain::new(vec![t_pre], duration)?;
        let post = SpikeTrain::new(vec![t_post], duration)?;
        let traj = pair_circuit_run(&pre, &post, params, w0)?;
        out.push((dt, traj.final_w() - w0));
    }
    Ok(out)
}

/// CSV export of a learning-window tabulation: header `delta_t_s,delta_w`.
pub fn write_window_csv<W: std::io::Write>(window: &[(f64, f64)], mut w: W) -> Result<()> {
    writeln!(w, "delta_t_s,delta_w")?;
    for &(dt, dw) in window {
        writeln!(
            w,
            "{},{}",
            crate::io::format_float(dt),
            crate::io::format_float(dw)
        )?;
    }
    Ok(())
}
