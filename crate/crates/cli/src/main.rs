//! Command-line front end: learning-window sweeps, Poisson-protocol BCM
//! sweeps, threshold modulation, pairing-frequency protocols, Monte-Carlo
//! versus closed-form comparison, and closed-form curve tabulation.
//!
//! Exit codes: 0 on success (and passing comparisons), 2 when a comparison
//! fails, 1 on usage or configuration errors.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{build_experiment, linspace, parse_grid, FileConfig, RuleName};
use stdp_bcm::analytic::{
    numeric_threshold, pair_threshold_raw, triplet_threshold_alltoall, AnalyticCurve,
    BcmThresholdModel, Normalization, DEFAULT_THRESHOLD_TOL_HZ,
};
use stdp_bcm::circuit::circuit_learning_window;
use stdp_bcm::experiment::{
    bcm_sweep, compare_mc_analytic, extract_threshold, pairing_frequency_sweep,
    threshold_modulation, write_comparison_csv, write_curve_csv, write_modulation_csv,
    write_pairing_csv, AmplitudeOverride, ExperimentConfig, RuleKind,
};
use stdp_bcm::io::{format_float, write_plot_rows};
use stdp_bcm::rules::{pair_window, InteractionMode, TripletParams};

#[derive(Parser)]
#[command(
    name = "stdp-bcm",
    version,
    about = "Spike-driven plasticity simulations and rate-curve analysis"
)]
struct Cli {
    /// TOML config file; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for all randomized runs
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Additionally write a gnuplot-compatible .dat file next to the output
    /// (requires --out)
    #[arg(long, global = true)]
    plot_data: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "kebab-case")]
enum ModeArg {
    NearestSpike,
    ReducedSymmetric,
    AllToAll,
}

impl From<ModeArg> for InteractionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::NearestSpike => InteractionMode::NearestSpike,
            ModeArg::ReducedSymmetric => InteractionMode::ReducedSymmetric,
            ModeArg::AllToAll => InteractionMode::AllToAll,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "kebab-case")]
enum NormArg {
    PerPreSpike,
    PerSecond,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::PerPreSpike => Normalization::PerPreSpike,
            NormArg::PerSecond => Normalization::PerSecond,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "kebab-case")]
enum CurveName {
    Pair,
    Triplet,
    TripletAllToAll,
}

#[derive(Args)]
struct SweepOpts {
    /// Plasticity implementation to drive
    #[arg(long, value_enum)]
    rule: Option<RuleName>,
    /// Spike interaction convention (rules only; circuits are nearest-spike)
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Pre-synaptic Poisson rate (Hz)
    #[arg(long)]
    rho_x: Option<f64>,
    /// Post-rate grid: lo:hi:points or a comma-separated list (Hz)
    #[arg(long)]
    grid: Option<String>,
    /// Trial duration in biological seconds
    #[arg(long)]
    duration: Option<f64>,
    /// Trials per grid point
    #[arg(long)]
    trials: Option<usize>,
    /// Drift normalization
    #[arg(long, value_enum)]
    normalization: Option<NormArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Learning window of the pair rule or the pair circuit over a
    /// timing-difference grid
    Window {
        /// pair (exponential rule) or pair-circuit (piecewise linear)
        #[arg(long, value_enum, default_value_t = WindowRule::Pair)]
        rule: WindowRule,
        /// Timing-difference grid: lo:hi:points (seconds)
        #[arg(long, allow_hyphen_values = true)]
        window_grid: Option<String>,
    },
    /// Monte-Carlo drift versus post-synaptic rate under the Poisson
    /// protocol
    BcmSweep(SweepOpts),
    /// Three amplitude variants of the same sweep, with extracted
    /// thresholds
    ThresholdMod {
        #[command(flatten)]
        sweep: SweepOpts,
        /// Amplitude parameter to vary (e.g. a_plus, a3_plus, i_pot)
        #[arg(long)]
        param: Option<String>,
        /// Three comma-separated values for the varied parameter
        #[arg(long)]
        values: Option<String>,
    },
    /// Deterministic pairing protocol swept over pair frequencies
    PairingFreq {
        #[arg(long, value_enum)]
        rule: Option<RuleName>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Post-minus-pre timing difference (seconds)
        #[arg(long, allow_hyphen_values = true)]
        delta_t: Option<f64>,
        /// Comma-separated pairing frequencies (Hz)
        #[arg(long)]
        freqs: Option<String>,
        #[arg(long)]
        n_pairs: Option<usize>,
    },
    /// Monte-Carlo sweep scored against the matching closed-form curve;
    /// exits 2 when the comparison fails
    Compare {
        #[command(flatten)]
        sweep: SweepOpts,
        /// Oracle curve (default inferred from rule and mode)
        #[arg(long, value_enum)]
        oracle: Option<CurveName>,
    },
    /// Tabulate a closed-form drift curve and report its threshold
    Analytic {
        #[arg(long, value_enum, default_value_t = CurveName::Pair)]
        curve: CurveName,
        #[arg(long)]
        rho_x: Option<f64>,
        /// Rate grid: lo:hi:points or a comma-separated list (Hz)
        #[arg(long)]
        grid: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "kebab-case")]
enum WindowRule {
    Pair,
    PairCircuit,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Writes `csv` to --out (or stdout) and, with --plot-data, the same rows
/// gnuplot-style next to it.
struct Output {
    out: Option<PathBuf>,
    plot_data: bool,
}

impl Output {
    fn emit(&self, csv: &[u8], plot: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, csv)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
            None => std::io::stdout().write_all(csv)?,
        }
        if self.plot_data {
            let path = self
                .out
                .as_ref()
                .ok_or_else(|| anyhow!("--plot-data requires --out"))?
                .with_extension("dat");
            let mut file = std::fs::File::create(&path)
                .with_context(|| format!("cannot write {}", path.display()))?;
            plot(&mut file)?;
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let Format::Csv = cli.format;
    let file = FileConfig::load(cli.config.as_deref())?;
    let output = Output {
        out: cli.out.clone(),
        plot_data: cli.plot_data,
    };
    match cli.command {
        Command::Window { rule, window_grid } => {
            cmd_window(&file, rule, window_grid.as_deref(), &output)?;
        }
        Command::BcmSweep(sweep) => {
            let config = experiment_from(&file, &sweep, cli.seed)?;
            cmd_bcm_sweep(&config, &output)?;
        }
        Command::ThresholdMod {
            sweep,
            param,
            values,
        } => {
            let config = experiment_from(&file, &sweep, cli.seed)?;
            cmd_threshold_mod(&file, &config, param.as_deref(), values.as_deref(), &output)?;
        }
        Command::PairingFreq {
            rule,
            mode,
            delta_t,
            freqs,
            n_pairs,
        } => {
            cmd_pairing_freq(
                &file,
                rule,
                mode,
                delta_t,
                freqs.as_deref(),
                n_pairs,
                &output,
            )?;
        }
        Command::Compare { sweep, oracle } => {
            let config = experiment_from(&file, &sweep, cli.seed)?;
            let pass = cmd_compare(&config, oracle, &output)?;
            if !pass {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Analytic { curve, rho_x, grid } => {
            cmd_analytic(&file, curve, rho_x, grid.as_deref(), &output)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment_from(
    file: &FileConfig,
    sweep: &SweepOpts,
    seed: Option<u64>,
) -> Result<ExperimentConfig> {
    let config = build_experiment(
        file,
        sweep.rule,
        sweep.mode.map(Into::into),
        sweep.rho_x,
        sweep.grid.as_deref(),
        sweep.duration,
        sweep.trials,
        seed,
        sweep.normalization.map(Into::into),
    )?;
    note_circuit_time(&config.rule, config.duration);
    Ok(config)
}

/// Circuit reports carry the accelerated-time equivalence.
fn note_circuit_time(rule: &RuleKind, duration: f64) {
    let accel = match rule {
        RuleKind::PairCircuit(p) => p.accel,
        RuleKind::TripletCircuit(p) => p.pair.accel,
        _ => return,
    };
    eprintln!(
        "circuit time acceleration {accel}x: {duration} s biological = {} ms circuit time",
        duration / accel * 1e3
    );
}

fn cmd_window(
    file: &FileConfig,
    rule: WindowRule,
    window_grid: Option<&str>,
    output: &Output,
) -> Result<()> {
    let section = file.window.as_ref();
    let grid = match window_grid {
        Some(text) => parse_grid(text)?,
        None => {
            let (dlo, dhi) = match rule {
                WindowRule::Pair => (-0.15, 0.15),
                WindowRule::PairCircuit => {
                    let p = file.pair_circuit_params();
                    (-1.3 * p.window_dep(), 1.3 * p.window_pot())
                }
            };
            let lo = section.and_then(|s| s.lo).unwrap_or(dlo);
            let hi = section.and_then(|s| s.hi).unwrap_or(dhi);
            let points = section.and_then(|s| s.points).unwrap_or(201);
            linspace(lo, hi, points)
        }
    };
    let window: Vec<(f64, f64)> = match rule {
        WindowRule::Pair => {
            let params = file.pair_params();
            grid.iter()
                .map(|&dt| pair_window(dt, &params).map(|dw| (dt, dw)))
                .collect::<stdp_bcm::Result<_>>()?
        }
        WindowRule::PairCircuit => {
            let params = file.pair_circuit_params();
            circuit_learning_window(&params, &grid)?
        }
    };
    let mut csv = Vec::new();
    stdp_bcm::circuit::write_window_csv(&window, &mut csv)?;
    output.emit(&csv, |w| {
        write_plot_rows(
            w,
            "delta_t_s,delta_w",
            window.iter().map(|&(a, b)| vec![a, b]),
        )?;
        Ok(())
    })
}

fn cmd_bcm_sweep(config: &ExperimentConfig, output: &Output) -> Result<()> {
    let points = bcm_sweep(config)?;
    match extract_threshold(&points) {
        Ok(est) => match est.theta_hat {
            Some(theta) => eprintln!("threshold: {theta:.3} Hz (bracket {:?})", est.bracket),
            None => eprintln!("threshold: none (no depression-to-potentiation crossing)"),
        },
        Err(e) => eprintln!("threshold: {e}"),
    }
    let mut csv = Vec::new();
    write_curve_csv(&points, &mut csv)?;
    output.emit(&csv, |w| {
        write_plot_rows(
            w,
            "rho_y_hz,mean_drift,std_error,n_trials",
            points
                .iter()
                .map(|p| vec![p.rho_y, p.mean_drift, p.std_error, p.n_trials as f64]),
        )?;
        Ok(())
    })
}

fn amplitude_override(param: &str, value: f64) -> Result<AmplitudeOverride> {
    Ok(match param {
        "a_plus" => AmplitudeOverride::APlus(value),
        "a_minus" => AmplitudeOverride::AMinus(value),
        "a2_plus" => AmplitudeOverride::A2Plus(value),
        "a2_minus" => AmplitudeOverride::A2Minus(value),
        "a3_plus" => AmplitudeOverride::A3Plus(value),
        "a3_minus" => AmplitudeOverride::A3Minus(value),
        "i_pot" => AmplitudeOverride::IPot(value),
        "i_dep" => AmplitudeOverride::IDep(value),
        "i_pot3" => AmplitudeOverride::IPot3(value),
        "i_dep3" => AmplitudeOverride::IDep3(value),
        other => bail!("unknown amplitude parameter `{other}`"),
    })
}

fn cmd_threshold_mod(
    file: &FileConfig,
    config: &ExperimentConfig,
    param: Option<&str>,
    values: Option<&str>,
    output: &Output,
) -> Result<()> {
    let section = file.threshold_mod.as_ref();
    let param = param
        .map(str::to_owned)
        .or_else(|| section.and_then(|s| s.parameter.clone()))
        .unwrap_or_else(|| match config.rule {
            RuleKind::Pair(_) => "a_plus".into(),
            RuleKind::Triplet(_) => "a3_plus".into(),
            RuleKind::PairCircuit(_) | RuleKind::TripletCircuit(_) => "i_pot".into(),
        });
    let values: Vec<f64> = match values {
        Some(text) => text
            .split(',')
            .map(|s| s.trim().parse().with_context(|| format!("bad value `{s}`")))
            .collect::<Result<_>>()?,
        None => section.and_then(|s| s.values.clone()).unwrap_or_else(|| {
            let base = match &config.rule {
                RuleKind::Pair(p) => p.a_plus,
                RuleKind::Triplet(p) => p.a3_plus,
                RuleKind::PairCircuit(p) => p.i_pot,
                RuleKind::TripletCircuit(p) => p.pair.i_pot,
            };
            vec![base * 0.85, base, base * 1.15]
        }),
    };
    if values.len() != 3 {
        bail!(
            "threshold modulation needs exactly three values, got {}",
            values.len()
        );
    }
    let overrides = [
        amplitude_override(&param, values[0])?,
        amplitude_override(&param, values[1])?,
        amplitude_override(&param, values[2])?,
    ];
    let curves = threshold_modulation(config, &overrides)?;
    for curve in &curves {
        match curve.estimate.theta_hat {
            Some(theta) => eprintln!("{}: threshold {theta:.3} Hz", curve.label),
            None => eprintln!("{}: no crossing on the grid", curve.label),
        }
    }
    let mut csv = Vec::new();
    write_modulation_csv(&curves, &mut csv)?;
    output.emit(&csv, |w| {
        // one gnuplot index block per variant
        for (i, curve) in curves.iter().enumerate() {
            if i > 0 {
                writeln!(w)?;
                writeln!(w)?;
            }
            writeln!(w, "# variant {}", curve.label)?;
            write_plot_rows(
                &mut *w,
                "rho_y_hz,mean_drift,std_error,n_trials",
                curve
                    .points
                    .iter()
                    .map(|p| vec![p.rho_y, p.mean_drift, p.std_error, p.n_trials as f64]),
            )?;
        }
        Ok(())
    })
}

fn cmd_pairing_freq(
    file: &FileConfig,
    rule: Option<RuleName>,
    mode: Option<ModeArg>,
    delta_t: Option<f64>,
    freqs: Option<&str>,
    n_pairs: Option<usize>,
    output: &Output,
) -> Result<()> {
    let section = file.pairing_freq.as_ref();
    let rule_name = rule
        .or_else(|| file.experiment.as_ref().and_then(|s| s.rule))
        .unwrap_or(RuleName::Triplet);
    // the frequency effect is the triplet rule's signature behaviour, so
    // its demo amplitudes are the default here
    let rule = file.rule(rule_name, TripletParams::pairing_frequency_demo());
    let mode = mode
        .map(Into::into)
        .or_else(|| file.experiment.as_ref().and_then(|s| s.mode))
        .unwrap_or(InteractionMode::NearestSpike);
    let delta_t = delta_t
        .or_else(|| section.and_then(|s| s.delta_t))
        .unwrap_or(0.010);
    let freqs: Vec<f64> = match freqs {
        Some(text) => text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .with_context(|| format!("bad frequency `{s}`"))
            })
            .collect::<Result<_>>()?,
        None => section
            .and_then(|s| s.frequencies.clone())
            .unwrap_or_else(|| vec![1.0, 5.0, 10.0, 20.0, 40.0]),
    };
    let n_pairs = n_pairs
        .or_else(|| section.and_then(|s| s.n_pairs))
        .unwrap_or(60);
    note_circuit_time(&rule, n_pairs as f64 / freqs[0].max(1e-9));
    let rows = pairing_frequency_sweep(&rule, mode, delta_t, &freqs, n_pairs)?;
    let mut csv = Vec::new();
    write_pairing_csv(&rows, &mut csv)?;
    output.emit(&csv, |w| {
        write_plot_rows(
            w,
            "pair_frequency_hz,total_delta_w",
            rows.iter().map(|&(a, b)| vec![a, b]),
        )?;
        Ok(())
    })
}

fn oracle_for(config: &ExperimentConfig, name: Option<CurveName>) -> Result<AnalyticCurve> {
    let name = match name {
        Some(n) => n,
        None => match (&config.rule, config.mode) {
            (RuleKind::Pair(_), _) => CurveName::Pair,
            (RuleKind::Triplet(_), InteractionMode::AllToAll) => CurveName::TripletAllToAll,
            (RuleKind::Triplet(_), _) => CurveName::Triplet,
            _ => bail!(
                "no closed-form oracle for circuit rules; pick --oracle explicitly \
                 or compare a rule run"
            ),
        },
    };
    Ok(match name {
        CurveName::Pair => {
            let params = match &config.rule {
                RuleKind::Pair(p) => *p,
                _ => bail!("pair oracle needs the pair rule"),
            };
            AnalyticCurve::pair_per_pre_spike(params)?
        }
        CurveName::Triplet => {
            let params = match &config.rule {
                RuleKind::Triplet(p) => *p,
                _ => bail!("triplet oracle needs the triplet rule"),
            };
            AnalyticCurve::triplet_per_second(params, config.rho_x)?
        }
        CurveName::TripletAllToAll => {
            let params = match &config.rule {
                RuleKind::Triplet(p) => *p,
                _ => bail!("triplet oracle needs the triplet rule"),
            };
            AnalyticCurve::triplet_alltoall_per_second(params, config.rho_x)?
        }
    })
}

fn cmd_compare(
    config: &ExperimentConfig,
    oracle_name: Option<CurveName>,
    output: &Output,
) -> Result<bool> {
    let oracle = oracle_for(config, oracle_name)?;
    let report = compare_mc_analytic(config, &oracle)?;
    eprintln!(
        "comparison: {} ({:.0}% of points within 3 standard errors)",
        if report.pass { "PASS" } else { "FAIL" },
        report.frac_within * 100.0
    );
    let mut csv = Vec::new();
    write_comparison_csv(&report, &mut csv)?;
    output.emit(&csv, |w| {
        write_plot_rows(
            w,
            "rho_y_hz,mean_drift,std_error,oracle_drift,z",
            report
                .points
                .iter()
                .map(|p| vec![p.rho_y, p.mc_mean, p.std_error, p.oracle_drift, p.z]),
        )?;
        Ok(())
    })?;
    Ok(report.pass)
}

fn cmd_analytic(
    file: &FileConfig,
    curve_name: CurveName,
    rho_x: Option<f64>,
    grid: Option<&str>,
    output: &Output,
) -> Result<()> {
    let grid = match grid {
        Some(text) => parse_grid(text)?,
        None => linspace(0.0, 120.0, 121),
    };
    let rho_x = rho_x
        .or_else(|| file.experiment.as_ref().and_then(|s| s.rho_x))
        .unwrap_or(10.0);
    let curve = match curve_name {
        CurveName::Pair => {
            let params = file.pair_params();
            let raw = pair_threshold_raw(&params)?;
            if raw > 0.0 {
                eprintln!("closed-form threshold: {raw:.4} Hz");
            } else {
                eprintln!("closed-form threshold: none (formula value {raw:.4} Hz)");
            }
            AnalyticCurve::pair_per_pre_spike(params)?
        }
        CurveName::Triplet => {
            let params = file.triplet_params(TripletParams::minimal_bcm());
            AnalyticCurve::triplet_per_second(params, rho_x)?
        }
        CurveName::TripletAllToAll => {
            let params = file.triplet_params(TripletParams::minimal_bcm());
            if params.a3_plus > 0.0 {
                let theta =
                    triplet_threshold_alltoall(&params, &BcmThresholdModel::stationary(2.0))?;
                eprintln!("closed-form threshold (stationary): {theta:.4} Hz");
            }
            AnalyticCurve::triplet_alltoall_per_second(params, rho_x)?
        }
    };
    let (lo, hi) = (
        grid.first().copied().unwrap_or(0.0),
        grid.last().copied().unwrap_or(1.0),
    );
    if let Ok(Some(root)) = numeric_threshold(&curve, lo.max(1e-3), hi, DEFAULT_THRESHOLD_TOL_HZ) {
        eprintln!("numeric threshold on [{lo}, {hi}]: {root:.4} Hz");
    }
    let mut csv = Vec::new();
    curve.write_csv(&grid, &mut csv)?;
    output.emit(&csv, |w| {
        writeln!(w, "# rho_y_hz drift")?;
        for &rho in &grid {
            writeln!(
                w,
                "{} {}",
                format_float(rho),
                format_float(curve.evaluate(rho))
            )?;
        }
        Ok(())
    })
}
