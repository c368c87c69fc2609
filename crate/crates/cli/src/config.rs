//! TOML configuration file: nested key-value sections mirroring the CLI
//! flags. Every value is optional; command-line flags override file values,
//! and anything still unset falls back to the built-in defaults.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use stdp_bcm::analytic::Normalization;
use stdp_bcm::circuit::{PairCircuitParams, PotentiationDrive, TripletCircuitParams};
use stdp_bcm::experiment::{self, ExperimentConfig, RuleKind};
use stdp_bcm::rules::{InteractionMode, PairParams, TripletParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum RuleName {
    Pair,
    Triplet,
    PairCircuit,
    TripletCircuit,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<ExperimentSection>,
    pub pair: Option<PairSection>,
    pub triplet: Option<TripletSection>,
    #[serde(rename = "pair-circuit")]
    pub pair_circuit: Option<PairCircuitSection>,
    #[serde(rename = "triplet-circuit")]
    pub triplet_circuit: Option<TripletCircuitSection>,
    pub window: Option<WindowSection>,
    #[serde(rename = "threshold-mod")]
    pub threshold_mod: Option<ThresholdModSection>,
    #[serde(rename = "pairing-freq")]
    pub pairing_freq: Option<PairingFreqSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub rule: Option<RuleName>,
    pub mode: Option<InteractionMode>,
    pub rho_x: Option<f64>,
    pub duration: Option<f64>,
    pub n_trials: Option<usize>,
    pub seed: Option<u64>,
    pub normalization: Option<Normalization>,
    pub grid: Option<GridSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub points: Option<usize>,
    /// Explicit rate list; wins over lo/hi/points when present.
    pub rates: Option<Vec<f64>>,
}

macro_rules! merge_params {
    ($section:expr, $base:expr, { $($field:ident),* $(,)? }) => {{
        let mut params = $base;
        if let Some(s) = $section {
            $( if let Some(v) = s.$field { params.$field = v; } )*
        }
        params
    }};
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSection {
    pub a_plus: Option<f64>,
    pub a_minus: Option<f64>,
    pub tau_plus: Option<f64>,
    pub tau_minus: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletSection {
    pub a2_plus: Option<f64>,
    pub a2_minus: Option<f64>,
    pub a3_plus: Option<f64>,
    pub a3_minus: Option<f64>,
    pub tau_plus: Option<f64>,
    pub tau_minus: Option<f64>,
    pub tau_x: Option<f64>,
    pub tau_y: Option<f64>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCircuitSection {
    pub vdd: Option<f64>,
    pub slope_pot: Option<f64>,
    pub slope_dep: Option<f64>,
    pub i_pot: Option<f64>,
    pub i_dep: Option<f64>,
    pub pulse_width: Option<f64>,
    pub c_w: Option<f64>,
    pub accel: Option<f64>,
    pub pot_drive: Option<PotentiationDrive>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletCircuitSection {
    #[serde(flatten)]
    pub pair: PairCircuitSection,
    pub slope_pot2: Option<f64>,
    pub slope_dep2: Option<f64>,
    pub i_pot3: Option<f64>,
    pub i_dep3: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdModSection {
    pub parameter: Option<String>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingFreqSection {
    pub delta_t: Option<f64>,
    pub frequencies: Option<Vec<f64>>,
    pub n_pairs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&std::path::Path>) -> Result<Self> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read config file {}", p.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("cannot parse config file {}", p.display()))
            }
        }
    }

    pub fn pair_params(&self) -> PairParams {
        merge_params!(&self.pair, PairParams::canonical(), {
            a_plus, a_minus, tau_plus, tau_minus,
        })
    }

    pub fn triplet_params(&self, base: TripletParams) -> TripletParams {
        merge_params!(&self.triplet, base, {
            a2_plus, a2_minus, a3_plus, a3_minus,
            tau_plus, tau_minus, tau_x, tau_y, epsilon,
        })
    }

    pub fn pair_circuit_params(&self) -> PairCircuitParams {
        Self::merge_pair_circuit(self.pair_circuit.as_ref(), PairCircuitParams::canonical())
    }

    fn merge_pair_circuit(
        section: Option<&PairCircuitSection>,
        base: PairCircuitParams,
    ) -> PairCircuitParams {
        merge_params!(section, base, {
            vdd, slope_pot, slope_dep, i_pot, i_dep, pulse_width, c_w, accel, pot_drive,
        })
    }

    pub fn triplet_circuit_params(&self) -> TripletCircuitParams {
        let mut params = TripletCircuitParams::canonical();
        if let Some(s) = &self.triplet_circuit {
            params.pair = Self::merge_pair_circuit(Some(&s.pair), params.pair);
            if let Some(v) = s.slope_pot2 {
                params.slope_pot2 = v;
            }
            if let Some(v) = s.slope_dep2 {
                params.slope_dep2 = v;
            }
            if let Some(v) = s.i_pot3 {
                params.i_pot3 = v;
            }
            if let Some(v) = s.i_dep3 {
                params.i_dep3 = v;
            }
        }
        params
    }

    /// Rule parameters for a rule name; `triplet_base` picks the default
    /// amplitude set for the triplet rule (sweeps and the pairing protocol
    /// use different ones).
    pub fn rule(&self, name: RuleName, triplet_base: TripletParams) -> RuleKind {
        match name {
            RuleName::Pair => RuleKind::Pair(self.pair_params()),
            RuleName::Triplet => RuleKind::Triplet(self.triplet_params(triplet_base)),
            RuleName::PairCircuit => RuleKind::PairCircuit(self.pair_circuit_params()),
            RuleName::TripletCircuit => RuleKind::TripletCircuit(self.triplet_circuit_params()),
        }
    }
}

/// `lo:hi:points` range or a comma-separated value list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("grid range must be lo:hi:points, got `{text}`");
        }
        let lo: f64 = parts[0].parse().context("bad grid lo")?;
        let hi: f64 = parts[1].parse().context("bad grid hi")?;
        let points: usize = parts[2].parse().context("bad grid point count")?;
        if points < 2 {
            bail!("grid needs at least 2 points");
        }
        Ok(linspace(lo, hi, points))
    } else {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad grid value `{s}`"))
            })
            .collect()
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Resolves the sweep grid: CLI flag, then config, then the default.
pub fn resolve_grid(flag: Option<&str>, section: Option<&GridSection>) -> Result<Vec<f64>> {
    if let Some(text) = flag {
        return parse_grid(text);
    }
    if let Some(g) = section {
        if let Some(rates) = &g.rates {
            return Ok(rates.clone());
        }
        if g.lo.is_some() || g.hi.is_some() || g.points.is_some() {
            let lo = g.lo.unwrap_or(5.0);
            let hi = g.hi.unwrap_or(120.0);
            let points = g.points.unwrap_or(16);
            if points < 2 {
                bail!("grid needs at least 2 points");
            }
            return Ok(linspace(lo, hi, points));
        }
    }
    Ok(experiment::default_rate_grid())
}

/// Assembles the experiment description from file config and CLI overrides.
#[allow(clippy::too_many_arguments)]
pub fn build_experiment(
    file: &FileConfig,
    rule_flag: Option<RuleName>,
    mode_flag: Option<InteractionMode>,
    rho_x_flag: Option<f64>,
    grid_flag: Option<&str>,
    duration_flag: Option<f64>,
    trials_flag: Option<usize>,
    seed_flag: Option<u64>,
    normalization_flag: Option<Normalization>,
) -> Result<ExperimentConfig> {
    let section = file.experiment.as_ref();
    let rule_name = rule_flag
        .or_else(|| section.and_then(|s| s.rule))
        .unwrap_or(RuleName::Pair);
    let rule = file.rule(rule_name, TripletParams::minimal_bcm());
    // default interaction: the convention whose closed-form curve matches
    // each rule (reduced-symmetric for pair, nearest-spike for triplet)
    let default_mode = match rule_name {
        RuleName::Pair => InteractionMode::ReducedSymmetric,
        _ => InteractionMode::NearestSpike,
    };
    let mode = mode_flag
        .or_else(|| section.and_then(|s| s.mode))
        .unwrap_or(default_mode);
    let default_norm = match rule_name {
        RuleName::Pair => Normalization::PerPreSpike,
        _ => Normalization::PerSecond,
    };
    Ok(ExperimentConfig {
        rule,
        mode,
        rho_x: rho_x_flag
            .or_else(|| section.and_then(|s| s.rho_x))
            .unwrap_or(10.0),
        rho_y_grid: resolve_grid(grid_flag, section.and_then(|s| s.grid.as_ref()))?,
        duration: duration_flag
            .or_else(|| section.and_then(|s| s.duration))
            .unwrap_or(experiment::DEFAULT_DURATION_S),
        n_trials: trials_flag
            .or_else(|| section.and_then(|s| s.n_trials))
            .unwrap_or(experiment::DEFAULT_TRIALS),
        base_seed: seed_flag
            .or_else(|| section.and_then(|s| s.seed))
            .unwrap_or(42),
        normalization: normalization_flag
            .or_else(|| section.and_then(|s| s.normalization))
            .unwrap_or(default_norm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_range_and_list_forms() {
        assert_eq!(parse_grid("0:10:3").unwrap(), vec![0.0, 5.0, 10.0]);
        assert_eq!(parse_grid("1,2.5,7").unwrap(), vec![1.0, 2.5, 7.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn config_overrides_defaults_and_flags_override_config() {
        let file: FileConfig = toml::from_str(
            r#"
            [experiment]
            rho_x = 5.0
            seed = 9

            [pair]
            a_plus = 1.15
            "#,
        )
        .unwrap();
        assert_eq!(file.pair_params().a_plus, 1.15);
        assert_eq!(file.pair_params().a_minus, 0.7);
        let exp = build_experiment(&file, None, None, None, None, None, None, None, None).unwrap();
        assert_eq!(exp.rho_x, 5.0);
        assert_eq!(exp.base_seed, 9);
        let exp = build_experiment(
            &file,
            None,
            None,
            Some(12.0),
            None,
            None,
            None,
            Some(77),
            None,
        )
        .unwrap();
        assert_eq!(exp.rho_x, 12.0);
        assert_eq!(exp.base_seed, 77);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<FileConfig>("[experiment]\nrho = 1.0\n");
        assert!(err.is_err());
    }
}
