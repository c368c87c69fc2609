//! Brute-force reference implementations used as oracles by the
//! integration and acceptance tests. These deliberately avoid the trace
//! bookkeeping of the library: nearest-spike variants scan for partners
//! explicitly, all-to-all variants evaluate the O(n^2) double sums.

// each test binary uses a different subset
#![allow(dead_code)]

use stdp_bcm::rules::{PairParams, TripletParams};
use stdp_bcm::spike::SpikeTrain;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Pre,
    Post,
}

/// Chronological merge with the pre-first tie rule, mirroring the engine.
pub fn merge(pre: &SpikeTrain, post: &SpikeTrain) -> Vec<(f64, Kind)> {
    let mut events = Vec::with_capacity(pre.len() + post.len());
    let (p, q) = (pre.times(), post.times());
    let (mut i, mut j) = (0, 0);
    while i < p.len() || j < q.len() {
        let take_pre = match (p.get(i), q.get(j)) {
            (Some(&tp), Some(&tq)) => tp <= tq,
            (Some(_), None) => true,
            _ => false,
        };
        if take_pre {
            events.push((p[i], Kind::Pre));
            i += 1;
        } else {
            events.push((q[j], Kind::Post));
            j += 1;
        }
    }
    events
}

/// Nearest-spike pair rule by explicit neighbour scan. Matches the engine
/// bit for bit: same expressions, same accumulation order.
pub fn pair_nearest_scan(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    p: &PairParams,
    w0: f64,
) -> Vec<(f64, f64)> {
    let mut w = w0;
    let mut out = Vec::new();
    let mut seen_pre: Vec<f64> = Vec::new();
    let mut seen_post: Vec<f64> = Vec::new();
    for (t, kind) in merge(pre, post) {
        let dw = match kind {
            Kind::Post => match seen_pre.last() {
                Some(&lp) => {
                    let dt = t - lp;
                    if dt > 0.0 {
                        p.a_plus * (-dt / p.tau_plus).exp()
                    } else {
                        -p.a_minus * (dt / p.tau_minus).exp()
                    }
                }
                None => 0.0,
            },
            Kind::Pre => match seen_post.last() {
                Some(&lq) => {
                    let dt = lq - t;
                    if dt > 0.0 {
                        p.a_plus * (-dt / p.tau_plus).exp()
                    } else {
                        -p.a_minus * (dt / p.tau_minus).exp()
                    }
                }
                None => 0.0,
            },
        };
        match kind {
            Kind::Pre => seen_pre.push(t),
            Kind::Post => seen_post.push(t),
        }
        w += dw;
        out.push((t, w));
    }
    out
}

/// All-to-all pair rule by explicit double sum over every earlier
/// opposite-type spike.
pub fn pair_alltoall_sum(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    p: &PairParams,
    w0: f64,
) -> Vec<(f64, f64)> {
    let mut w = w0;
    let mut out = Vec::new();
    let mut seen_pre: Vec<f64> = Vec::new();
    let mut seen_post: Vec<f64> = Vec::new();
    for (t, kind) in merge(pre, post) {
        let dw = match kind {
            Kind::Post => {
                p.a_plus
                    * seen_pre
                        .iter()
                        .map(|&tp| (-(t - tp) / p.tau_plus).exp())
                        .sum::<f64>()
            }
            Kind::Pre => {
                -p.a_minus
                    * seen_post
                        .iter()
                        .map(|&tq| (-(t - tq) / p.tau_minus).exp())
                        .sum::<f64>()
            }
        };
        match kind {
            Kind::Pre => seen_pre.push(t),
            Kind::Post => seen_post.push(t),
        }
        w += dw;
        out.push((t, w));
    }
    out
}

/// Nearest-spike triplet rule by explicit neighbour scan; matches the
/// engine bit for bit.
pub fn triplet_nearest_scan(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    p: &TripletParams,
    w0: f64,
) -> Vec<(f64, f64)> {
    let mut w = w0;
    let mut out = Vec::new();
    let mut seen_pre: Vec<f64> = Vec::new();
    let mut seen_post: Vec<f64> = Vec::new();
    for (t, kind) in merge(pre, post) {
        let dw = match kind {
            Kind::Post => match seen_pre.last() {
                None => 0.0,
                Some(&lp) => {
                    let pair_factor = (-(t - lp) / p.tau_plus).exp();
                    let triplet = match seen_post.last() {
                        None => 0.0,
                        Some(&lq) => p.a3_plus * (-((t - lq) - p.epsilon) / p.tau_y).exp(),
                    };
                    pair_factor * (p.a2_plus + triplet)
                }
            },
            Kind::Pre => match seen_post.last() {
                None => 0.0,
                Some(&lq) => {
                    let pair_factor = ((lq - t) / p.tau_minus).exp();
                    let triplet = match seen_pre.last() {
                        None => 0.0,
                        Some(&lp) => p.a3_minus * (-((t - lp) - p.epsilon) / p.tau_x).exp(),
                    };
                    -pair_factor * (p.a2_minus + triplet)
                }
            },
        };
        match kind {
            Kind::Pre => seen_pre.push(t),
            Kind::Post => seen_post.push(t),
        }
        w += dw;
        out.push((t, w));
    }
    out
}

/// All-to-all triplet rule by explicit double sums.
pub fn triplet_alltoall_sum(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    p: &TripletParams,
    w0: f64,
) -> Vec<(f64, f64)> {
    let mut w = w0;
    let mut out = Vec::new();
    let mut seen_pre: Vec<f64> = Vec::new();
    let mut seen_post: Vec<f64> = Vec::new();
    for (t, kind) in merge(pre, post) {
        let dw = match kind {
            Kind::Post => {
                let pair_factor: f64 = seen_pre
                    .iter()
                    .map(|&tp| (-(t - tp) / p.tau_plus).exp())
                    .sum();
                let prev_posts: f64 = seen_post
                    .iter()
                    .map(|&tq| (-((t - tq) - p.epsilon) / p.tau_y).exp())
                    .sum();
                pair_factor * (p.a2_plus + p.a3_plus * prev_posts)
            }
            Kind::Pre => {
                let pair_factor: f64 = seen_post
                    .iter()
                    .map(|&tq| (-(t - tq) / p.tau_minus).exp())
                    .sum();
                let prev_pres: f64 = seen_pre
                    .iter()
                    .map(|&tp| (-((t - tp) - p.epsilon) / p.tau_x).exp())
                    .sum();
                -pair_factor * (p.a2_minus + p.a3_minus * prev_pres)
            }
        };
        match kind {
            Kind::Pre => seen_pre.push(t),
            Kind::Post => seen_post.push(t),
        }
        w += dw;
        out.push((t, w));
    }
    out
}

/// Reduced-symmetric pair rule by explicit scan: each pre potentiates at
/// its first following post; each pre depresses against its last preceding
/// post.
pub fn pair_reduced_symmetric_scan(
    pre: &SpikeTrain,
    post: &SpikeTrain,
    p: &PairParams,
    w0: f64,
) -> Vec<(f64, f64)> {
    let mut w = w0;
    let mut out = Vec::new();
    let mut pending: Vec<f64> = Vec::new();
    let mut seen_post: Vec<f64> = Vec::new();
    for (t, kind) in merge(pre, post) {
        let dw = match kind {
            Kind::Pre => match seen_post.last() {
                Some(&lq) => -p.a_minus * (-(t - lq) / p.tau_minus).exp(),
                None => 0.0,
            },
            Kind::Post => {
                let sum: f64 = pending
                    .iter()
                    .map(|&tp| (-(t - tp) / p.tau_plus).exp())
                    .sum();
                p.a_plus * sum
            }
        };
        match kind {
            Kind::Pre => pending.push(t),
            Kind::Post => {
                pending.clear();
                seen_post.push(t);
            }
        }
        w += dw;
        out.push((t, w));
    }
    out
}

/// Largest absolute difference between two sample sequences of equal length.
pub fn max_abs_diff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    assert_eq!(a.len(), b.len(), "sample counts differ");
    a.iter()
        .zip(b)
        .map(|(&(_, wa), &(_, wb))| (wa - wb).abs())
        .fold(0.0, f64::max)
}
