//! Event-driven synaptic plasticity toolkit: pair- and triplet-based STDP
//! rules driven by Poisson or deterministic spike trains, closed-form
//! rate-domain (BCM) predictions to validate the Monte-Carlo results
//! against, and behavioral models of the corresponding synapse circuits.
//!
//! The crate is organized by layer:
//!
//! * [`spike`] — stimulus generation (seeded Poisson trains, pairing
//!   protocols) and train validation,
//! * [`rules`] — the event-driven pair and triplet update rules under
//!   nearest-spike, reduced-symmetric, and all-to-all interactions,
//! * [`analytic`] — closed-form drift curves, thresholds, and sign checks,
//! * [`circuit`] — rail-clamped linear-ramp behavioral circuit models,
//! * [`experiment`] — the seeded sweep harness, threshold extraction and
//!   modulation, and Monte-Carlo versus closed-form comparison reports.

pub mod analytic;
pub mod circuit;
pub mod error;
mod events;
pub mod experiment;
pub mod io;
pub mod rules;
pub mod spike;

pub use analytic::{
    bcm_sign_check, numeric_threshold, pair_bcm_curve, pair_threshold, triplet_drift,
    triplet_drift_alltoall, triplet_threshold_alltoall, AnalyticCurve, BcmThresholdModel,
    Normalization, SignCheckOutcome,
};
pub use circuit::{
    circuit_learning_window, pair_circuit_run, triplet_circuit_run, CircuitState,
    PairCircuitParams, PotentiationDrive, TripletCircuitParams,
};
pub use error::{Error, Result};
pub use experiment::{
    bcm_sweep, compare_mc_analytic, extract_threshold, pairing_frequency_sweep,
    threshold_modulation, AmplitudeOverride, BcmCurvePoint, ComparisonReport, ExperimentConfig,
    RuleKind, ThresholdEstimate, VariantCurve,
};
pub use rules::{
    pair_window, run_pair, run_triplet, triplet_on_post, triplet_on_pre, InteractionMode,
    PairParams, SynapseState, TripletParams, WeightTrajectory,
};
pub use spike::{gen_pairing_protocol, gen_poisson, validate_train, RateSpec, Seed, SpikeTrain};
