//! Monte Carlo estimate of the mutual information per channel use between the
//! on-off FSK hypothesis and the channel output.
//!
//! Conditioned on a hypothesis, each receive antenna sees a zero-mean complex
//! Gaussian block, so `log p(y | h)` is exact. Each trial draws `h` and `y` and
//! scores `log p(y | h) - log sum_h' P(h') p(y | h')`; the mean over trials,
//! divided by the block length, is the estimate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{DelaySpreadSpec, MimoChannelSpec};
use crate::error::{param, Error, Result};
use crate::linalg::{CMatrix, Cholesky};

use super::fading::{complex_noise, FadingSampler};
use super::input::{sample_input_block, tone_phasor, Duty, Hypothesis, InputScheme, PhaseOption, SchemeMode};
use super::trial_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    /// Nats per channel use.
    pub mi_per_use: f64,
    pub std_err: f64,
    pub ci95: (f64, f64),
    pub trials: usize,
}

pub const MIN_TRIALS: usize = 100;

/// Per-receive-antenna covariance of the output block under hypothesis `h`.
pub fn hypothesis_covariance(spec: &MimoChannelSpec, h: Hypothesis, rho: f64, n: usize) -> Result<Vec<CMatrix>> {
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(param("rho", format!("must be finite and >= 0, got {rho}")));
    }
    let (ks, tone): (Vec<usize>, Option<usize>) = match h {
        Hypothesis::Off => return Ok(vec![CMatrix::identity(n); spec.nr()]),
        Hypothesis::Antenna { k, tone } => {
            if k >= spec.nt() {
                return Err(param("hypothesis", format!("antenna {k} out of range")));
            }
            (vec![k], tone)
        }
        Hypothesis::All { tone } => ((0..spec.nt()).collect(), tone),
    };
    let m = tone.ok_or_else(|| param("hypothesis", "covariance needs a discrete tone"))?;
    if m >= n {
        return Err(param("hypothesis", format!("tone {m} out of range for N = {n}")));
    }
    let v = 2.0 * PI * m as f64 / n as f64;
    let d: Vec<Complex64> = (1..=n as i64).map(|t| tone_phasor(t, v)).collect();
    Ok((0..spec.nr())
        .map(|l| {
            CMatrix::toeplitz(n, |lag| ks.iter().map(|&k| spec.model(k, l).eval(lag)).sum())
                .conjugate_by_diagonal(&d)
                .scale(rho)
                .add_identity(1.0)
        })
        .collect())
}

/// Which processes feed the output under an active hypothesis.
#[derive(Debug, Clone)]
enum Class {
    Antenna(usize),
    All,
}

#[derive(Debug, Clone, Copy)]
struct Component {
    /// Index into `Engine::classes`; `None` for the off hypothesis.
    class: Option<usize>,
    tone: usize,
    log_prior: f64,
}

struct Engine<'a> {
    scheme: &'a InputScheme,
    nt: usize,
    nr: usize,
    n: usize,
    sqrt_rho: f64,
    delayed: bool,
    samplers: Vec<FadingSampler>,
    classes: Vec<(Class, Vec<Cholesky>)>,
    components: Vec<Component>,
    /// `conj(exp(j n v_m))` per tone `m`, `n = 1..N`.
    derotations: Vec<Vec<Complex64>>,
}

impl<'a> Engine<'a> {
    fn new(spec: &MimoChannelSpec, scheme: &'a InputScheme, rho: f64, delayed: bool) -> Result<Self> {
        let n = scheme.block_length();
        let (nt, nr) = (spec.nt(), spec.nr());
        let samplers = spec
            .models()
            .iter()
            .map(|m| FadingSampler::new(m, n))
            .collect::<Result<Vec<_>>>()?;

        let tones = scheme.tones();
        let log_tones = (tones as f64).ln();
        let mut classes = Vec::new();
        let mut components = Vec::new();
        let mut push_class = |class: Class, prob: f64, classes: &mut Vec<(Class, Vec<Cholesky>)>| -> Result<()> {
            if prob <= 0.0 {
                return Ok(());
            }
            let ks: Vec<usize> = match class {
                Class::Antenna(k) => vec![k],
                Class::All => (0..nt).collect(),
            };
            let factors = (0..nr)
                .map(|l| {
                    let k = CMatrix::toeplitz(n, |lag| ks.iter().map(|&k| spec.model(k, l).eval(lag)).sum())
                        .scale(rho)
                        .add_identity(1.0);
                    Cholesky::factor_with_jitter(&k)
                })
                .collect::<Result<Vec<_>>>()?;
            let idx = classes.len();
            classes.push((class, factors));
            for tone in 0..tones {
                components.push(Component {
                    class: Some(idx),
                    tone,
                    log_prior: prob.ln() - log_tones,
                });
            }
            Ok(())
        };

        let p_on = match scheme.duty() {
            Duty::PerAntenna(a) => {
                for (k, &ak) in a.0.iter().enumerate() {
                    push_class(Class::Antenna(k), ak, &mut classes)?;
                }
                a.total()
            }
            Duty::Common(a) => {
                push_class(Class::All, *a, &mut classes)?;
                *a
            }
        };
        let p_off = 1.0 - p_on;
        if p_off > 0.0 {
            components.insert(
                0,
                Component {
                    class: None,
                    tone: 0,
                    log_prior: p_off.ln(),
                },
            );
        }

        let derotations = (0..tones)
            .map(|m| {
                let v = 2.0 * PI * m as f64 / tones as f64;
                (1..=n as i64).map(|t| tone_phasor(t, v).conj()).collect()
            })
            .collect();

        Ok(Self {
            scheme,
            nt,
            nr,
            n,
            sqrt_rho: rho.sqrt(),
            delayed,
            samplers,
            classes,
            components,
            derotations,
        })
    }

    fn component_of(&self, h: Hypothesis) -> usize {
        let target = match h {
            Hypothesis::Off => None,
            Hypothesis::Antenna { k, tone } => Some((Some(k), tone.unwrap_or(0))),
            Hypothesis::All { tone } => Some((None, tone.unwrap_or(0))),
        };
        self.components
            .iter()
            .position(|c| match (c.class, target) {
                (None, None) => true,
                (Some(ci), Some((k, tone))) => {
                    let same = match (&self.classes[ci].0, k) {
                        (Class::Antenna(a), Some(b)) => *a == b,
                        (Class::All, None) => true,
                        _ => false,
                    };
                    same && c.tone == tone
                }
                _ => false,
            })
            .expect("sampled hypothesis has positive prior")
    }

    /// Score `log p(y|h) - log sum_h' P(h') p(y|h')` for one trial.
    fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let n = self.n;
        let block = sample_input_block(self.scheme, rng);

        // per active transmit process: (antenna index, input sequence)
        let inputs: Vec<(usize, Vec<Complex64>)> = match block.hypothesis {
            Hypothesis::Off => Vec::new(),
            Hypothesis::Antenna { k, .. } => vec![(k, block.z[k].clone())],
            Hypothesis::All { .. } if self.delayed => {
                let v = block.frequency.expect("delay-spread input is an FSK tone");
                (0..self.nt)
                    .map(|k| (k, (1..=n as i64).map(|t| tone_phasor(t - k as i64, v)).collect()))
                    .collect()
            }
            Hypothesis::All { .. } => (0..self.nt).map(|k| (k, block.z[k].clone())).collect(),
        };

        let mut outputs = Vec::with_capacity(self.nr);
        for l in 0..self.nr {
            let mut acc = vec![Complex64::default(); n];
            for (k, z) in &inputs {
                let h = self.samplers[k * self.nr + l].sample(rng);
                for ((a, hv), zv) in acc.iter_mut().zip(&h).zip(z) {
                    *a += hv * zv;
                }
            }
            let w = complex_noise(n, rng);
            outputs.push(
                acc.iter()
                    .zip(&w)
                    .map(|(a, wv)| a * self.sqrt_rho + wv)
                    .collect::<Vec<_>>(),
            );
        }

        let log_pi = n as f64 * PI.ln();
        let off_energy: f64 = outputs.iter().flatten().map(|v| v.norm_sqr()).sum();
        let mut rotated = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); n];
        let log_liks: Vec<f64> = self
            .components
            .iter()
            .map(|c| match c.class {
                None => -(self.nr as f64) * log_pi - off_energy,
                Some(ci) => {
                    let factors = &self.classes[ci].1;
                    let rot = &self.derotations[c.tone];
                    outputs
                        .iter()
                        .zip(factors)
                        .map(|(y, f)| {
                            for ((r, yv), d) in rotated.iter_mut().zip(y).zip(rot) {
                                *r = yv * d;
                            }
                            -log_pi - f.log_det() - f.quad_form_into(&rotated, &mut scratch)
                        })
                        .sum()
                }
            })
            .collect();

        let truth = self.component_of(block.hypothesis);
        let max = self
            .components
            .iter()
            .zip(&log_liks)
            .map(|(c, ll)| c.log_prior + ll)
            .fold(f64::NEG_INFINITY, f64::max);
        let mixture = max
            + self
                .components
                .iter()
                .zip(&log_liks)
                .map(|(c, ll)| (c.log_prior + ll - max).exp())
                .sum::<f64>()
                .ln();
        log_liks[truth] - mixture
    }
}

fn check_common(scheme: &InputScheme, rho: f64, trials: usize) -> Result<()> {
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(param("rho", format!("must be finite and >= 0, got {rho}")));
    }
    if trials < MIN_TRIALS {
        return Err(param("trials", format!("need at least {MIN_TRIALS}, got {trials}")));
    }
    match scheme.phase() {
        PhaseOption::FskDiscrete => Ok(()),
        PhaseOption::FskContinuous => Err(Error::UnsupportedScheme(
            "continuous-frequency FSK has no finite hypothesis set".into(),
        )),
        PhaseOption::PskIid { d } => Err(Error::UnsupportedScheme(format!(
            "iid {d}-PSK phases have a combinatorial hypothesis set"
        ))),
    }
}

/// Mutual information per channel use of an on-off FSK scheme on a MIMO channel.
pub fn estimate_mi(
    spec: &MimoChannelSpec,
    scheme: &InputScheme,
    rho: f64,
    trials: usize,
    master_seed: u64,
    workers: usize,
) -> Result<MiEstimate> {
    check_common(scheme, rho, trials)?;
    match scheme.mode() {
        SchemeMode::Sum | SchemeMode::Individual if scheme.antennas() == spec.nt() => {}
        SchemeMode::DelaySpread => return Err(param("scheme", "delay-spread schemes run through estimate_mi_ds")),
        _ => {
            return Err(param(
                "scheme",
                format!(
                    "scheme drives {} antennas, channel has {}",
                    scheme.antennas(),
                    spec.nt()
                ),
            ))
        }
    }
    let engine = Engine::new(spec, scheme, rho, false)?;
    Ok(run(&engine, trials, master_seed, workers))
}

/// Mutual information per channel use of on-off FSK on a delay-spread channel.
///
/// The tone is taken to extend before the block start, so the active-hypothesis
/// output covariance is exactly `rho D Toeplitz(sum_k R_k) D^H + I`.
pub fn estimate_mi_ds(
    ds: &DelaySpreadSpec,
    scheme: &InputScheme,
    rho: f64,
    trials: usize,
    master_seed: u64,
    workers: usize,
) -> Result<MiEstimate> {
    check_common(scheme, rho, trials)?;
    if scheme.mode() != SchemeMode::DelaySpread {
        return Err(param("scheme", "expected a delay-spread scheme"));
    }
    let miso = ds.to_miso();
    let engine = Engine::new(&miso, scheme, rho, true)?;
    Ok(run(&engine, trials, master_seed, workers))
}

fn run(engine: &Engine<'_>, trials: usize, seed: u64, workers: usize) -> MiEstimate {
    let scores = score_trials(trials, workers, |i| engine.trial(&mut trial_rng(seed, i as u64)));
    let t = trials as f64;
    let mean = scores.iter().sum::<f64>() / t;
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (t - 1.0);
    let n = engine.n as f64;
    let mi = mean / n;
    let se = (var / t).sqrt() / n;
    MiEstimate {
        mi_per_use: mi,
        std_err: se,
        ci95: (mi - 1.96 * se, mi + 1.96 * se),
        trials,
    }
}

/// Scores in trial-index order, independent of the worker count.
fn score_trials(trials: usize, workers: usize, f: impl Fn(usize) -> f64 + Sync) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            return pool.install(|| (0..trials).into_par_iter().map(&f).collect());
        }
    }
    let _ = workers;
    (0..trials).map(f).collect()
}
