//! Runs a command against a validated configuration.

use std::fmt::Write as _;

use fadecap::bounds::{
    ds_bounds, individual_bounds, limit_sum, separable_sum_bounds, upper_bound_sum, Argmax, BoundReport, FormulaTag,
};
use fadecap::channel::{ConstraintMode, MimoChannelSpec, DEFAULT_SEPARABILITY_TOL};
use fadecap::corr::Ephemerality;
use fadecap::sim::{estimate_mi, estimate_mi_ds, InputScheme, MiEstimate};

use crate::config::{ChannelConfig, DutyConfig, RunConfig};
use crate::error::CliError;
use crate::format::{fmt_g9, Row, CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Bounds,
    Limit,
    Simulate,
    Sweep,
    /// Echo the canonical form of the configuration.
    Config,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    /// Human-readable summary.
    pub report: String,
    pub csv: Option<String>,
}

pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        Command::Config => Ok(Output {
            report: cfg.to_canonical_json(),
            csv: None,
        }),
        Command::Classify => classify(cfg),
        Command::Bounds => table(cfg, true, false),
        Command::Limit => limit(cfg),
        Command::Simulate => table(cfg, false, true),
        Command::Sweep => table(cfg, true, true),
    }
}

/// The channel as a transmit-by-receive grid; delay-spread taps become the
/// transmit antennas of the equivalent MISO channel.
fn grid(cfg: &RunConfig) -> Result<MimoChannelSpec, CliError> {
    Ok(match &cfg.channel {
        ChannelConfig::Grid(spec) => spec.clone(),
        ChannelConfig::Separable(sep) => sep.expand()?,
        ChannelConfig::DelaySpread(ds) => ds.to_miso(),
    })
}

fn is_sum(cfg: &RunConfig) -> bool {
    cfg.constraints.mode == ConstraintMode::Sum && !matches!(cfg.channel, ChannelConfig::DelaySpread(_))
}

fn bounds(cfg: &RunConfig, rho: Option<f64>) -> Result<BoundReport, CliError> {
    let beta = cfg.constraints.beta();
    let quad = cfg.numerics.quad_points;
    let opts = cfg.numerics.solver();
    let report = match (&cfg.channel, is_sum(cfg)) {
        (ChannelConfig::DelaySpread(ds), _) => ds_bounds(ds, rho, beta, quad, opts)?,
        (ChannelConfig::Separable(sep), true) => {
            let mut r = separable_sum_bounds(sep, rho.unwrap_or(0.0), beta, quad)?;
            if rho.is_none() {
                r.rho = None;
                r.upper = None;
                r.argmax = None;
            }
            r
        }
        (ChannelConfig::Grid(spec), true) => {
            let lim = limit_sum(spec, beta, opts)?;
            match rho {
                None => lim,
                Some(rho) => {
                    let mut r = upper_bound_sum(spec, rho, beta, quad, opts)?;
                    r.limit = lim.limit;
                    r.formulas.push(FormulaTag::SumLimit);
                    r.converged &= lim.converged;
                    r
                }
            }
        }
        (_, false) => individual_bounds(&grid(cfg)?, rho, beta, quad, opts)?,
    };
    Ok(report)
}

/// Duty cycles used by the simulation: the configured ones, otherwise the
/// maximizer of the low-SNR limit (or `1/beta` when none is identified).
fn scheme(cfg: &RunConfig) -> Result<InputScheme, CliError> {
    let beta = cfg.constraints.beta();
    let n = cfg.sim.block_length;
    let phase = cfg.sim.phase;
    let scheme = match (&cfg.channel, is_sum(cfg)) {
        (_, true) => {
            let duty = match &cfg.sim.duty {
                Some(DutyConfig::PerAntenna(v)) => v.clone(),
                _ => match limit_sum(&grid(cfg)?, beta, cfg.numerics.solver())?.argmax {
                    Some(Argmax::Allocation(a)) => a.0,
                    _ => unreachable!("sum limit reports an allocation"),
                },
            };
            InputScheme::sum(duty, beta, n, phase)?
        }
        (channel, false) => {
            let duty = match &cfg.sim.duty {
                Some(DutyConfig::Common(a)) => *a,
                _ => match bounds(cfg, None)?.argmax {
                    Some(Argmax::Duty(a)) => a,
                    _ => 1.0 / beta,
                },
            };
            match channel {
                ChannelConfig::DelaySpread(_) => InputScheme::delay_spread(duty, beta, n, phase)?,
                _ => InputScheme::individual(duty, grid(cfg)?.nt(), beta, n, phase)?,
            }
        }
    };
    Ok(scheme)
}

fn estimate(cfg: &RunConfig, scheme: &InputScheme, rho: f64) -> Result<MiEstimate, CliError> {
    let (t, seed, w) = (cfg.sim.trials, cfg.sim.seed, cfg.workers());
    Ok(match &cfg.channel {
        ChannelConfig::DelaySpread(ds) => estimate_mi_ds(ds, scheme, rho, t, seed, w)?,
        _ => estimate_mi(&grid(cfg)?, scheme, rho, t, seed, w)?,
    })
}

fn describe_channel(cfg: &RunConfig) -> String {
    match &cfg.channel {
        ChannelConfig::Grid(spec) => format!("{}x{} MIMO", spec.nt(), spec.nr()),
        ChannelConfig::Separable(sep) => {
            format!(
                "{}x{} MIMO (transmit separable)",
                sep.alphas().len(),
                sep.receive_models().len()
            )
        }
        ChannelConfig::DelaySpread(ds) => format!("SISO with {} delay taps", ds.len()),
    }
}

fn describe_constraints(cfg: &RunConfig) -> String {
    let mode = match (&cfg.channel, cfg.constraints.mode) {
        (ChannelConfig::DelaySpread(_), _) => "delay spread",
        (_, ConstraintMode::Sum) => "sum",
        (_, ConstraintMode::Individual) => "individual",
    };
    format!("{mode} peak constraints, beta = {}", fmt_g9(cfg.constraints.beta()))
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_g9(*x)).collect::<Vec<_>>().join(", ")
}

fn classify(cfg: &RunConfig) -> Result<Output, CliError> {
    let spec = grid(cfg)?;
    let class = spec.classify();
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", describe_channel(cfg));
    let label = match cfg.channel {
        ChannelConfig::DelaySpread(_) => "delay separable",
        _ => "transmit separable",
    };
    match spec.detect_transmit_separable(DEFAULT_SEPARABILITY_TOL) {
        Some(sep) => {
            let _ = writeln!(out, "{label}: yes, alpha = ({})", join(sep.alphas()));
        }
        None => {
            let _ = writeln!(out, "{label}: no");
        }
    }
    for k in 0..spec.nt() {
        for l in 0..spec.nr() {
            let s = spec.model(k, l).corr_stats();
            let kind = match class.pair(k, l) {
                Ephemerality::Ephemeral => "ephemeral",
                Ephemerality::Nonephemeral => "nonephemeral",
            };
            let _ = writeln!(
                out,
                "pair ({k},{l}): {kind}, R(0) = {}, phi = {}, lambda = {}",
                fmt_g9(s.r0),
                fmt_g9(s.phi),
                fmt_g9(s.lambda)
            );
        }
    }
    let _ = writeln!(out, "nonephemeral: {}", class.nonephemeral);
    Ok(Output { report: out, csv: None })
}

fn describe_limit(r: &BoundReport) -> String {
    match (r.limit, r.bracket, r.flagged) {
        (Some(l), _, _) => format!("lim C/rho^2 = {}", fmt_g9(l)),
        (None, Some(b), _) => format!(
            "{} <= lim inf C/rho^2 <= lim sup C/rho^2 <= {}",
            fmt_g9(b.lower_coeff),
            fmt_g9(b.upper_coeff)
        ),
        _ => "lim C/rho^2 not identified for this channel".to_string(),
    }
}

fn limit(cfg: &RunConfig) -> Result<Output, CliError> {
    let r = bounds(cfg, None)?;
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", describe_channel(cfg));
    let _ = writeln!(out, "constraints: {}", describe_constraints(cfg));
    let _ = writeln!(out, "{} [{}]", describe_limit(&r), r.formula_tag());
    match &r.argmax {
        Some(Argmax::Allocation(a)) => {
            let _ = writeln!(out, "maximizing duty cycles: ({})", join(a.as_slice()));
        }
        Some(Argmax::Duty(a)) => {
            let _ = writeln!(out, "maximizing duty cycle: {}", fmt_g9(*a));
        }
        None => {}
    }
    if !r.converged {
        let _ = writeln!(out, "warning: optimizer hit its iteration cap");
    }
    let row = Row {
        beta: cfg.constraints.beta(),
        limit: r.limit,
        formula_tag: r.formula_tag(),
        ..Row::default()
    };
    Ok(Output {
        report: out,
        csv: Some(format!("{CSV_HEADER}\n{}\n", row.to_csv())),
    })
}

fn table(cfg: &RunConfig, with_bounds: bool, with_sim: bool) -> Result<Output, CliError> {
    let beta = cfg.constraints.beta();
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", describe_channel(cfg));
    let _ = writeln!(out, "constraints: {}", describe_constraints(cfg));
    let scheme = if with_sim { Some(scheme(cfg)?) } else { None };
    if let Some(s) = &scheme {
        let duty = match s.duty() {
            fadecap::sim::Duty::PerAntenna(a) => format!("({})", join(a.as_slice())),
            fadecap::sim::Duty::Common(a) => fmt_g9(*a),
        };
        let _ = writeln!(
            out,
            "simulation: N = {}, {} trials, seed {}, duty {duty}",
            cfg.sim.block_length, cfg.sim.trials, cfg.sim.seed
        );
    }
    let mut csv = format!("{CSV_HEADER}\n");
    let mut limit_noted = false;
    for &rho in &cfg.rho {
        let mut row = Row {
            rho: Some(rho),
            beta,
            ..Row::default()
        };
        let mut line = format!("rho = {}:", fmt_g9(rho));
        if with_bounds {
            let r = bounds(cfg, Some(rho))?;
            row.upper = r.upper;
            row.upper_over_rho2 = r.upper.map(|u| u / (rho * rho));
            row.limit = r.limit;
            row.formula_tag = r.formula_tag();
            if let Some(u) = r.upper {
                let _ = write!(line, " upper {} ({} rho^2)", fmt_g9(u), fmt_g9(u / (rho * rho)));
            }
            if !r.converged {
                let _ = write!(line, " [optimizer hit its iteration cap]");
            }
            if !limit_noted {
                let _ = writeln!(out, "{} [{}]", describe_limit(&r), r.formula_tag());
                limit_noted = true;
            }
        }
        if let Some(s) = &scheme {
            let e = estimate(cfg, s, rho)?;
            row.mi = Some(e);
            let _ = write!(
                line,
                " I {} +- {} ({} rho^2)",
                fmt_g9(e.mi_per_use),
                fmt_g9(e.std_err),
                fmt_g9(e.mi_per_use / (rho * rho))
            );
        }
        let _ = writeln!(out, "{line}");
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    Ok(Output {
        report: out,
        csv: Some(csv),
    })
}
