//! Run configuration: a single JSON document describing the channel, the
//! constraints, the SNR sweep, the simulation and numerical settings.

use fadecap::bounds::SolverOptions;
use fadecap::channel::{ConstraintMode, DelaySpreadSpec, MimoChannelSpec, PowerConstraints, SeparableStructure};
use fadecap::corr::{AutocorrModel, DEFAULT_QUAD_POINTS, MIN_GRID_POINTS};
use fadecap::sim::{InputScheme, PhaseOption, MIN_TRIALS};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_RHO: [f64; 3] = [0.1, 0.01, 0.001];
pub const DEFAULT_BLOCK_LENGTH: usize = 32;
pub const DEFAULT_TRIALS: usize = 20_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ORACLE_RESOLUTION: usize = 400;

// ---- document schema ----

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    channel: ChannelDoc,
    #[serde(default)]
    constraints: ConstraintsDoc,
    #[serde(default)]
    sweep: SweepDoc,
    #[serde(default)]
    sim: SimDoc,
    #[serde(default)]
    numerics: NumericsDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ChannelDoc {
    /// `models[k][l]`: transmit antenna `k`, receive antenna `l`.
    Grid {
        models: Vec<Vec<ModelDoc>>,
    },
    Separable {
        alphas: Vec<f64>,
        receive_models: Vec<ModelDoc>,
    },
    DelaySpread {
        taps: Vec<ModelDoc>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ModelDoc {
    GaussMarkov {
        a: f64,
        #[serde(default = "one")]
        r0: f64,
    },
    FiniteSupport(Vec<ValueDoc>),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum ValueDoc {
    Real(f64),
    Complex([f64; 2]),
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ModeDoc {
    Sum,
    Individual,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintsDoc {
    #[serde(default = "default_mode")]
    mode: ModeDoc,
    #[serde(default = "one")]
    beta: f64,
}

fn default_mode() -> ModeDoc {
    ModeDoc::Sum
}

impl Default for ConstraintsDoc {
    fn default() -> Self {
        Self {
            mode: ModeDoc::Sum,
            beta: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepDoc {
    #[serde(default = "default_rho")]
    rho: Vec<f64>,
}

fn default_rho() -> Vec<f64> {
    DEFAULT_RHO.to_vec()
}

impl Default for SweepDoc {
    fn default() -> Self {
        Self { rho: default_rho() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PhaseDoc {
    FskDiscrete,
    FskContinuous,
    PskIid { d: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum DutyDoc {
    Common(f64),
    PerAntenna(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimDoc {
    #[serde(default = "default_block_length")]
    block_length: usize,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_phase")]
    phase_option: PhaseDoc,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    duty: Option<DutyDoc>,
}

fn default_block_length() -> usize {
    DEFAULT_BLOCK_LENGTH
}
fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_phase() -> PhaseDoc {
    PhaseDoc::FskDiscrete
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for SimDoc {
    fn default() -> Self {
        Self {
            block_length: DEFAULT_BLOCK_LENGTH,
            trials: DEFAULT_TRIALS,
            phase_option: PhaseDoc::FskDiscrete,
            seed: DEFAULT_SEED,
            workers: None,
            duty: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NumericsDoc {
    #[serde(default = "default_quad")]
    quad_points: usize,
    #[serde(default = "default_tol")]
    optimizer_tol: f64,
    #[serde(default = "default_resolution")]
    grid_oracle_resolution: usize,
}

fn default_quad() -> usize {
    DEFAULT_QUAD_POINTS
}
fn default_tol() -> f64 {
    SolverOptions::default().tol
}
fn default_resolution() -> usize {
    DEFAULT_ORACLE_RESOLUTION
}

impl Default for NumericsDoc {
    fn default() -> Self {
        Self {
            quad_points: DEFAULT_QUAD_POINTS,
            optimizer_tol: default_tol(),
            grid_oracle_resolution: DEFAULT_ORACLE_RESOLUTION,
        }
    }
}

// ---- validated configuration ----

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelConfig {
    Grid(MimoChannelSpec),
    Separable(SeparableStructure),
    DelaySpread(DelaySpreadSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DutyConfig {
    Common(f64),
    PerAntenna(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub block_length: usize,
    pub trials: usize,
    pub phase: PhaseOption,
    pub seed: u64,
    /// `None` means all available cores.
    pub workers: Option<usize>,
    pub duty: Option<DutyConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    pub quad_points: usize,
    pub optimizer_tol: f64,
    pub grid_oracle_resolution: usize,
}

impl Numerics {
    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            tol: self.optimizer_tol,
            ..SolverOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub channel: ChannelConfig,
    pub constraints: PowerConstraints,
    pub rho: Vec<f64>,
    pub sim: SimConfig,
    pub numerics: Numerics,
}

impl RunConfig {
    pub fn workers(&self) -> usize {
        self.sim
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Canonical JSON form; parsing it yields an identical configuration.
    pub fn to_canonical_json(&self) -> String {
        let doc = ConfigDoc {
            channel: match &self.channel {
                ChannelConfig::Grid(spec) => ChannelDoc::Grid {
                    models: (0..spec.nt())
                        .map(|k| (0..spec.nr()).map(|l| model_doc(spec.model(k, l))).collect())
                        .collect(),
                },
                ChannelConfig::Separable(sep) => ChannelDoc::Separable {
                    alphas: sep.alphas().to_vec(),
                    receive_models: sep.receive_models().iter().map(model_doc).collect(),
                },
                ChannelConfig::DelaySpread(ds) => ChannelDoc::DelaySpread {
                    taps: ds.taps().iter().map(model_doc).collect(),
                },
            },
            constraints: ConstraintsDoc {
                mode: match self.constraints.mode {
                    ConstraintMode::Sum => ModeDoc::Sum,
                    ConstraintMode::Individual => ModeDoc::Individual,
                },
                beta: self.constraints.beta(),
            },
            sweep: SweepDoc { rho: self.rho.clone() },
            sim: SimDoc {
                block_length: self.sim.block_length,
                trials: self.sim.trials,
                phase_option: match self.sim.phase {
                    PhaseOption::FskDiscrete => PhaseDoc::FskDiscrete,
                    PhaseOption::FskContinuous => PhaseDoc::FskContinuous,
                    PhaseOption::PskIid { d } => PhaseDoc::PskIid { d },
                },
                seed: self.sim.seed,
                workers: self.sim.workers,
                duty: self.sim.duty.as_ref().map(|d| match d {
                    DutyConfig::Common(a) => DutyDoc::Common(*a),
                    DutyConfig::PerAntenna(v) => DutyDoc::PerAntenna(v.clone()),
                }),
            },
            numerics: NumericsDoc {
                quad_points: self.numerics.quad_points,
                optimizer_tol: self.numerics.optimizer_tol,
                grid_oracle_resolution: self.numerics.grid_oracle_resolution,
            },
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("config serializes");
        s.push('\n');
        s
    }
}

fn model_doc(m: &AutocorrModel) -> ModelDoc {
    match m {
        AutocorrModel::GaussMarkov { a, r0 } => ModelDoc::GaussMarkov { a: *a, r0: *r0 },
        AutocorrModel::FiniteSupport { values } => ModelDoc::FiniteSupport(
            values
                .iter()
                .map(|v| {
                    if v.im == 0.0 {
                        ValueDoc::Real(v.re)
                    } else {
                        ValueDoc::Complex([v.re, v.im])
                    }
                })
                .collect(),
        ),
    }
}

fn invalid(path: impl Into<String>, source: fadecap::Error) -> CliError {
    CliError::Invalid {
        path: path.into(),
        source,
    }
}

fn range(path: &str, reason: impl Into<String>) -> CliError {
    CliError::Range {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn build_model(doc: &ModelDoc, path: &str) -> Result<AutocorrModel, CliError> {
    let m = match doc {
        ModelDoc::GaussMarkov { a, r0 } => AutocorrModel::gauss_markov(*a, *r0),
        ModelDoc::FiniteSupport(values) => AutocorrModel::finite_support(
            values
                .iter()
                .map(|v| match *v {
                    ValueDoc::Real(re) => Complex64::new(re, 0.0),
                    ValueDoc::Complex([re, im]) => Complex64::new(re, im),
                })
                .collect(),
        ),
    };
    m.map_err(|e| invalid(path, e))
}

/// Maps a `(k, l)` pair error from channel construction to the document path.
fn pair_path(e: fadecap::Error, fallback: &str, path_of: impl Fn(usize, usize) -> String) -> CliError {
    match e {
        fadecap::Error::Pair { k, l, source } => invalid(path_of(k, l), *source),
        other => invalid(fallback, other),
    }
}

pub(crate) fn transmit_antennas(channel: &ChannelConfig) -> usize {
    match channel {
        ChannelConfig::Grid(spec) => spec.nt(),
        ChannelConfig::Separable(sep) => sep.alphas().len(),
        ChannelConfig::DelaySpread(_) => 1,
    }
}

/// Sum constraints take one duty cycle per transmit antenna; individual
/// constraints and delay spread take a single common one.
fn check_duty(
    duty: &DutyConfig,
    channel: &ChannelConfig,
    constraints: &PowerConstraints,
    block_length: usize,
    phase: PhaseOption,
) -> Result<(), CliError> {
    let beta = constraints.beta();
    let per_antenna = constraints.mode == ConstraintMode::Sum && !matches!(channel, ChannelConfig::DelaySpread(_));
    let built = match (duty, per_antenna) {
        (DutyConfig::PerAntenna(v), true) => {
            let nt = transmit_antennas(channel);
            if v.len() != nt {
                return Err(range("sim.duty", format!("expected {nt} duty cycles, got {}", v.len())));
            }
            InputScheme::sum(v.clone(), beta, block_length, phase)
        }
        (DutyConfig::Common(a), false) => InputScheme::delay_spread(*a, beta, block_length, phase),
        (DutyConfig::Common(_), true) => {
            return Err(range("sim.duty", "sum constraints need one duty cycle per antenna"))
        }
        (DutyConfig::PerAntenna(_), false) => {
            return Err(range("sim.duty", "a single common duty cycle is expected here"))
        }
    };
    built.map(|_| ()).map_err(|e| invalid("sim.duty", e))
}

/// Parses and fully validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ConfigDoc = serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;

    let channel = match &doc.channel {
        ChannelDoc::Grid { models } => {
            let rows = models
                .iter()
                .enumerate()
                .map(|(k, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(l, m)| build_model(m, &format!("channel.grid.models[{k}][{l}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            ChannelConfig::Grid(MimoChannelSpec::from_rows(rows).map_err(|e| {
                pair_path(e, "channel.grid.models", |k, l| {
                    format!("channel.grid.models[{k}][{l}]")
                })
            })?)
        }
        ChannelDoc::Separable { alphas, receive_models } => {
            let receive = receive_models
                .iter()
                .enumerate()
                .map(|(l, m)| build_model(m, &format!("channel.separable.receive_models[{l}]")))
                .collect::<Result<Vec<_>, _>>()?;
            ChannelConfig::Separable(SeparableStructure::new(alphas.clone(), receive).map_err(|e| {
                pair_path(e, "channel.separable.alphas", |_, l| {
                    format!("channel.separable.receive_models[{l}]")
                })
            })?)
        }
        ChannelDoc::DelaySpread { taps } => {
            let taps = taps
                .iter()
                .enumerate()
                .map(|(k, m)| build_model(m, &format!("channel.delay_spread.taps[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            ChannelConfig::DelaySpread(DelaySpreadSpec::new(taps).map_err(|e| {
                pair_path(e, "channel.delay_spread.taps", |k, _| {
                    format!("channel.delay_spread.taps[{k}]")
                })
            })?)
        }
    };

    let mode = match doc.constraints.mode {
        ModeDoc::Sum => ConstraintMode::Sum,
        ModeDoc::Individual => ConstraintMode::Individual,
    };
    let constraints = PowerConstraints::new(mode, doc.constraints.beta).map_err(|e| invalid("constraints.beta", e))?;

    let rho = doc.sweep.rho.clone();
    if rho.is_empty() {
        return Err(range("sweep.rho", "needs at least one value"));
    }
    for (i, r) in rho.iter().enumerate() {
        if !(r.is_finite() && *r > 0.0) {
            return Err(range(&format!("sweep.rho[{i}]"), format!("must be positive, got {r}")));
        }
    }
    if rho.windows(2).any(|w| w[1] >= w[0]) {
        return Err(range("sweep.rho", "values must be strictly decreasing"));
    }

    let s = &doc.sim;
    if s.block_length == 0 {
        return Err(range("sim.block_length", "must be positive"));
    }
    if s.trials < MIN_TRIALS {
        return Err(range(
            "sim.trials",
            format!("need at least {MIN_TRIALS}, got {}", s.trials),
        ));
    }
    if s.workers == Some(0) {
        return Err(range("sim.workers", "must be positive"));
    }
    let phase = match s.phase_option {
        PhaseDoc::FskDiscrete => PhaseOption::FskDiscrete,
        PhaseDoc::FskContinuous => PhaseOption::FskContinuous,
        PhaseDoc::PskIid { d } if d >= 2 => PhaseOption::PskIid { d },
        PhaseDoc::PskIid { d } => return Err(range("sim.phase_option.psk_iid.d", format!("must be >= 2, got {d}"))),
    };
    let duty = s.duty.as_ref().map(|d| match d {
        DutyDoc::Common(a) => DutyConfig::Common(*a),
        DutyDoc::PerAntenna(v) => DutyConfig::PerAntenna(v.clone()),
    });
    if let Some(duty) = &duty {
        check_duty(duty, &channel, &constraints, s.block_length, phase)?;
    }

    let n = &doc.numerics;
    if n.quad_points < MIN_GRID_POINTS {
        return Err(range(
            "numerics.quad_points",
            format!("need at least {MIN_GRID_POINTS}, got {}", n.quad_points),
        ));
    }
    if !(n.optimizer_tol.is_finite() && n.optimizer_tol > 0.0) {
        return Err(range("numerics.optimizer_tol", "must be positive"));
    }
    if n.grid_oracle_resolution == 0 {
        return Err(range("numerics.grid_oracle_resolution", "must be positive"));
    }

    Ok(RunConfig {
        channel,
        constraints,
        rho,
        sim: SimConfig {
            block_length: s.block_length,
            trials: s.trials,
            phase,
            seed: s.seed,
            workers: s.workers,
            duty,
        },
        numerics: Numerics {
            quad_points: n.quad_points,
            optimizer_tol: n.optimizer_tol,
            grid_oracle_resolution: n.grid_oracle_resolution,
        },
    })
}
