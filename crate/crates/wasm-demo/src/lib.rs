//! Browser bindings for the interactive demo page. Three groups of
//! operations, all pure functions over flat float arrays so the JavaScript
//! side only draws:
//!
//! * learning windows — the exponential rule window and the circuit's
//!   piecewise-linear window over a timing-difference grid,
//! * rate curves — closed-form drift versus post rate with the
//!   depression-to-potentiation threshold,
//! * quick Monte-Carlo sweeps — seeded short runs of the event engine to
//!   scatter over the closed-form curves.
//!
//! Times cross the boundary in milliseconds (slider-friendly), rates in Hz.

use wasm_bindgen::prelude::*;

use stdp_bcm::analytic::{numeric_threshold, pair_threshold, AnalyticCurve, Normalization};
use stdp_bcm::circuit::{circuit_learning_window, PairCircuitParams};
use stdp_bcm::experiment::{bcm_sweep, ExperimentConfig, RuleKind};
use stdp_bcm::rules::{pair_window, InteractionMode, PairParams, TripletParams};

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn pair_params(a_plus: f64, a_minus: f64, tau_plus_ms: f64, tau_minus_ms: f64) -> PairParams {
    PairParams {
        a_plus,
        a_minus,
        tau_plus: tau_plus_ms * 1e-3,
        tau_minus: tau_minus_ms * 1e-3,
    }
}

fn triplet_params(
    a2_plus: f64,
    a2_minus: f64,
    a3_plus: f64,
    tau_plus_ms: f64,
    tau_minus_ms: f64,
    tau_y_ms: f64,
) -> TripletParams {
    TripletParams {
        a2_plus,
        a2_minus,
        a3_plus,
        a3_minus: 0.0,
        tau_plus: tau_plus_ms * 1e-3,
        tau_minus: tau_minus_ms * 1e-3,
        tau_x: 0.101,
        tau_y: tau_y_ms * 1e-3,
        epsilon: 0.0,
    }
}

/// Exponential pair-rule window evaluated on a timing grid (ms).
#[wasm_bindgen]
pub fn rule_window(
    a_plus: f64,
    a_minus: f64,
    tau_plus_ms: f64,
    tau_minus_ms: f64,
    dt_ms: &[f64],
) -> Result<Vec<f64>, JsValue> {
    let p = pair_params(a_plus, a_minus, tau_plus_ms, tau_minus_ms);
    dt_ms
        .iter()
        .map(|&dt| pair_window(dt * 1e-3, &p).map_err(err))
        .collect()
}

/// Piecewise-linear circuit window on the same grid, parameterized by the
/// window lengths (ms) and the per-pulse charge amplitudes.
#[wasm_bindgen]
pub fn circuit_window(
    window_pot_ms: f64,
    window_dep_ms: f64,
    charge_pot: f64,
    charge_dep: f64,
    dt_ms: &[f64],
) -> Result<Vec<f64>, JsValue> {
    let base = PairCircuitParams::canonical();
    let params = PairCircuitParams {
        slope_pot: base.vdd / (window_pot_ms * 1e-3),
        slope_dep: base.vdd / (window_dep_ms * 1e-3),
        i_pot: charge_pot / base.pulse_width,
        i_dep: charge_dep / base.pulse_width,
        ..base
    };
    let grid: Vec<f64> = dt_ms.iter().map(|&dt| dt * 1e-3).collect();
    let window = circuit_learning_window(&params, &grid).map_err(err)?;
    Ok(window.into_iter().map(|(_, dw)| dw).collect())
}

/// Closed-form pair drift per pre spike on a post-rate grid (Hz).
#[wasm_bindgen]
pub fn pair_rate_curve(
    a_plus: f64,
    a_minus: f64,
    tau_plus_ms: f64,
    tau_minus_ms: f64,
    rho_y: &[f64],
) -> Result<Vec<f64>, JsValue> {
    let p = pair_params(a_plus, a_minus, tau_plus_ms, tau_minus_ms);
    let curve = AnalyticCurve::pair_per_pre_spike(p).map_err(err)?;
    Ok(rho_y.iter().map(|&r| curve.evaluate(r)).collect())
}

/// Closed-form pair threshold (Hz); NaN when no positive crossover exists.
#[wasm_bindgen]
pub fn pair_rate_threshold(a_plus: f64, a_minus: f64, tau_plus_ms: f64, tau_minus_ms: f64) -> f64 {
    let p = pair_params(a_plus, a_minus, tau_plus_ms, tau_minus_ms);
    match pair_threshold(&p) {
        Ok(Some(theta)) => theta,
        _ => f64::NAN,
    }
}

/// Closed-form nearest-spike triplet drift per second on a post-rate grid.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn triplet_rate_curve(
    a2_plus: f64,
    a2_minus: f64,
    a3_plus: f64,
    tau_plus_ms: f64,
    tau_minus_ms: f64,
    tau_y_ms: f64,
    rho_x: f64,
    rho_y: &[f64],
) -> Result<Vec<f64>, JsValue> {
    let p = triplet_params(
        a2_plus,
        a2_minus,
        a3_plus,
        tau_plus_ms,
        tau_minus_ms,
        tau_y_ms,
    );
    let curve = AnalyticCurve::triplet_per_second(p, rho_x).map_err(err)?;
    Ok(rho_y.iter().map(|&r| curve.evaluate(r)).collect())
}

/// Bisection root of the triplet drift in the post rate; NaN when the curve
/// does not cross zero on `[lo, hi]`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn triplet_rate_threshold(
    a2_plus: f64,
    a2_minus: f64,
    a3_plus: f64,
    tau_plus_ms: f64,
    tau_minus_ms: f64,
    tau_y_ms: f64,
    rho_x: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    let p = triplet_params(
        a2_plus,
        a2_minus,
        a3_plus,
        tau_plus_ms,
        tau_minus_ms,
        tau_y_ms,
    );
    let curve = match AnalyticCurve::triplet_per_second(p, rho_x) {
        Ok(c) => c,
        Err(_) => return f64::NAN,
    };
    match numeric_threshold(&curve, lo, hi, 1e-3) {
        Ok(Some(theta)) => theta,
        _ => f64::NAN,
    }
}

/// Which engine the Monte-Carlo overlay drives.
#[wasm_bindgen]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum McRule {
    PairReducedSymmetric,
    PairNearestSpike,
    TripletNearestSpike,
}

/// Seeded Monte-Carlo sweep over the given post-rate grid. Pair runs use
/// the pair amplitudes, triplet runs the triplet set (with the pair time
/// constants and `tau_y`). Returns `[mean, std_error]` interleaved per grid
/// point; pair results are per pre spike, triplet results per second,
/// matching the closed-form curves above.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn mc_rate_curve(
    rule: McRule,
    a_plus: f64,
    a_minus: f64,
    a2_plus: f64,
    a3_plus: f64,
    tau_plus_ms: f64,
    tau_minus_ms: f64,
    tau_y_ms: f64,
    rho_x: f64,
    duration_s: f64,
    n_trials: u32,
    seed: u32,
    rho_y: &[f64],
) -> Result<Vec<f64>, JsValue> {
    let (rule, mode, normalization) = match rule {
        McRule::PairReducedSymmetric => (
            RuleKind::Pair(pair_params(a_plus, a_minus, tau_plus_ms, tau_minus_ms)),
            InteractionMode::ReducedSymmetric,
            Normalization::PerPreSpike,
        ),
        McRule::PairNearestSpike => (
            RuleKind::Pair(pair_params(a_plus, a_minus, tau_plus_ms, tau_minus_ms)),
            InteractionMode::NearestSpike,
            Normalization::PerPreSpike,
        ),
        McRule::TripletNearestSpike => (
            RuleKind::Triplet(triplet_params(
                a2_plus,
                a_minus,
                a3_plus,
                tau_plus_ms,
                tau_minus_ms,
                tau_y_ms,
            )),
            InteractionMode::NearestSpike,
            Normalization::PerSecond,
        ),
    };
    let config = ExperimentConfig {
        rule,
        mode,
        rho_x,
        rho_y_grid: rho_y.to_vec(),
        duration: duration_s,
        n_trials: n_trials as usize,
        base_seed: seed as u64,
        normalization,
    };
    let points = bcm_sweep(&config).map_err(err)?;
    let mut out = Vec::with_capacity(points.len() * 2);
    for p in points {
        out.push(p.mean_drift);
        out.push(p.std_error);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn window_bindings_agree_with_the_engine() {
        let dts = grid(-100.0, 100.0, 41);
        let rule = rule_window(1.0, 0.7, 16.8, 33.7, &dts).unwrap();
        assert_eq!(rule.len(), dts.len());
        assert!(rule
            .iter()
            .zip(&dts)
            .all(|(&dw, &dt)| (dw > 0.0) == (dt > 0.0)));
        let circuit = circuit_window(50.0, 50.0, 2e-4, 3e-4, &dts).unwrap();
        assert_eq!(circuit.len(), dts.len());
        assert_eq!(circuit[0], 0.0, "outside the depression window");
    }

    #[test]
    fn thresholds_match_between_bindings_and_curves() {
        let theta = pair_rate_threshold(1.0, 0.7, 16.8, 33.7);
        assert!((theta - 39.977).abs() < 1e-2);
        let rhos = grid(1.0, 120.0, 60);
        let curve = pair_rate_curve(1.0, 0.7, 16.8, 33.7, &rhos).unwrap();
        // the curve changes sign exactly where the threshold sits
        let below = rhos
            .iter()
            .zip(&curve)
            .filter(|&(&r, _)| r < theta)
            .all(|(_, &d)| d < 0.0);
        let above = rhos
            .iter()
            .zip(&curve)
            .filter(|&(&r, _)| r > theta)
            .all(|(_, &d)| d > 0.0);
        assert!(below && above);
        let t3 = triplet_rate_threshold(0.0, 1.0, 1.0, 20.0, 50.0, 100.0, 0.5, 1.0, 200.0);
        assert!((t3 - 42.41).abs() < 0.1, "triplet threshold {t3}");
    }

    #[test]
    fn mc_overlay_is_seeded_and_tracks_the_curve() {
        let rhos = [20.0, 60.0, 100.0];
        let a = mc_rate_curve(
            McRule::PairReducedSymmetric,
            1.0,
            0.7,
            0.0,
            0.0,
            16.8,
            33.7,
            100.0,
            10.0,
            50.0,
            12,
            7,
            &rhos,
        )
        .unwrap();
        let b = mc_rate_curve(
            McRule::PairReducedSymmetric,
            1.0,
            0.7,
            0.0,
            0.0,
            16.8,
            33.7,
            100.0,
            10.0,
            50.0,
            12,
            7,
            &rhos,
        )
        .unwrap();
        assert_eq!(a, b, "same seed must reproduce");
        let analytic = pair_rate_curve(1.0, 0.7, 16.8, 33.7, &rhos).unwrap();
        for (i, &expected) in analytic.iter().enumerate() {
            let (mean, se) = (a[2 * i], a[2 * i + 1]);
            assert!(
                (mean - expected).abs() <= 4.0 * se,
                "point {i}: {mean} vs {expected}"
            );
        }
    }
}
