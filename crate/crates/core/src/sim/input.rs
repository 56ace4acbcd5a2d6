//! On-off tone inputs.
//!
//! Sum constraints: a single antenna (or none) is chosen for the whole block
//! and carries the unit-modulus sequence `exp(j theta(n))`. Individual
//! constraints: every antenna carries the same gated sequence. Delay spread:
//! the scalar input is the gated sequence itself.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::bounds::DutyAllocation;
use crate::channel::check_beta;
use crate::error::{param, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseOption {
    /// `theta(n) = n * 2 pi m / N` with `m` uniform on `0..N`.
    FskDiscrete,
    /// `theta(n) = n * v` with `v` uniform on `[0, 2 pi)`.
    FskContinuous,
    /// Independent `d`-ary PSK phases.
    PskIid { d: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeMode {
    Sum,
    Individual,
    DelaySpread,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Duty {
    PerAntenna(DutyAllocation),
    Common(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputScheme {
    mode: SchemeMode,
    duty: Duty,
    antennas: usize,
    block_length: usize,
    phase: PhaseOption,
    beta: f64,
}

impl InputScheme {
    /// Antenna `k` is active with probability `duty[k]`; `duty` must lie in `A(beta)`.
    pub fn sum(duty: Vec<f64>, beta: f64, block_length: usize, phase: PhaseOption) -> Result<Self> {
        check_beta(beta)?;
        let duty = DutyAllocation(duty);
        if duty.0.is_empty() {
            return Err(param("duty", "need at least one antenna"));
        }
        if duty.0.iter().any(|a| !a.is_finite()) || !duty.is_feasible(beta) {
            return Err(param(
                "duty",
                format!("{:?} is outside A(beta) for beta = {beta}", duty.0),
            ));
        }
        Self::build(
            SchemeMode::Sum,
            Duty::PerAntenna(duty.clone()),
            duty.0.len(),
            beta,
            block_length,
            phase,
        )
    }

    /// All `antennas` transmit the same tone with probability `duty <= 1/beta`.
    pub fn individual(duty: f64, antennas: usize, beta: f64, block_length: usize, phase: PhaseOption) -> Result<Self> {
        check_beta(beta)?;
        check_common_duty(duty, beta)?;
        if antennas == 0 {
            return Err(param("antennas", "must be positive"));
        }
        Self::build(
            SchemeMode::Individual,
            Duty::Common(duty),
            antennas,
            beta,
            block_length,
            phase,
        )
    }

    /// The scalar input of a delay-spread channel is the gated tone.
    pub fn delay_spread(duty: f64, beta: f64, block_length: usize, phase: PhaseOption) -> Result<Self> {
        check_beta(beta)?;
        check_common_duty(duty, beta)?;
        Self::build(
            SchemeMode::DelaySpread,
            Duty::Common(duty),
            1,
            beta,
            block_length,
            phase,
        )
    }

    fn build(
        mode: SchemeMode,
        duty: Duty,
        antennas: usize,
        beta: f64,
        block_length: usize,
        phase: PhaseOption,
    ) -> Result<Self> {
        if block_length == 0 {
            return Err(param("block_length", "must be positive"));
        }
        if let PhaseOption::PskIid { d } = phase {
            if d < 2 {
                return Err(param("phase_option", format!("PSK order must be >= 2, got {d}")));
            }
        }
        Ok(Self {
            mode,
            duty,
            antennas,
            block_length,
            phase,
            beta,
        })
    }

    pub fn mode(&self) -> SchemeMode {
        self.mode
    }

    pub fn duty(&self) -> &Duty {
        &self.duty
    }

    /// Rows of the input matrix: transmit antennas, or 1 for delay spread.
    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn phase(&self) -> PhaseOption {
        self.phase
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Number of FSK tones; equals the block length.
    pub fn tones(&self) -> usize {
        self.block_length
    }
}

fn check_common_duty(duty: f64, beta: f64) -> Result<()> {
    if !(duty.is_finite() && duty >= 0.0 && duty <= (1.0 / beta) * (1.0 + 1e-12)) {
        return Err(param(
            "duty",
            format!("must lie in [0, 1/beta] = [0, {}], got {duty}", 1.0 / beta),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    Off,
    /// Transmit antenna `k` alone is active (sum constraints).
    Antenna {
        k: usize,
        tone: Option<usize>,
    },
    /// Every antenna (or the scalar delay-spread input) is active.
    All {
        tone: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputBlock {
    pub hypothesis: Hypothesis,
    /// FSK frequency `v` with `theta(n) = n v`; `None` for PSK or when off.
    pub frequency: Option<f64>,
    /// `rows x N` input, `rows` = transmit antennas (1 for delay spread).
    pub z: Vec<Vec<Complex64>>,
}

/// Phasor `exp(j n v)` for time index `n` (1-based within the block).
pub(crate) fn tone_phasor(n: i64, v: f64) -> Complex64 {
    Complex64::from_polar(1.0, n as f64 * v)
}

pub fn sample_input_block<R: Rng + ?Sized>(scheme: &InputScheme, rng: &mut R) -> InputBlock {
    let n = scheme.block_length;
    let u: f64 = rng.random();
    let active: Option<Option<usize>> = match &scheme.duty {
        Duty::PerAntenna(a) => {
            let mut acc = 0.0;
            a.0.iter()
                .position(|ak| {
                    acc += ak;
                    u < acc
                })
                .map(Some)
        }
        Duty::Common(a) => (u < *a).then_some(None),
    };
    let mut z = vec![vec![Complex64::default(); n]; scheme.antennas];
    let Some(which) = active else {
        return InputBlock {
            hypothesis: Hypothesis::Off,
            frequency: None,
            z,
        };
    };

    let (tone, frequency, seq): (Option<usize>, Option<f64>, Vec<Complex64>) = match scheme.phase {
        PhaseOption::FskDiscrete => {
            let m = rng.random_range(0..n);
            let v = 2.0 * PI * m as f64 / n as f64;
            (Some(m), Some(v), (1..=n as i64).map(|t| tone_phasor(t, v)).collect())
        }
        PhaseOption::FskContinuous => {
            let v = rng.random::<f64>() * 2.0 * PI;
            (None, Some(v), (1..=n as i64).map(|t| tone_phasor(t, v)).collect())
        }
        PhaseOption::PskIid { d } => {
            let seq = (0..n)
                .map(|_| Complex64::from_polar(1.0, 2.0 * PI * rng.random_range(0..d) as f64 / d as f64))
                .collect();
            (None, None, seq)
        }
    };
    let hypothesis = match which {
        Some(k) => {
            z[k] = seq;
            Hypothesis::Antenna { k, tone }
        }
        None => {
            z.iter_mut().for_each(|row| row.clone_from(&seq));
            Hypothesis::All { tone }
        }
    };
    InputBlock {
        hypothesis,
        frequency,
        z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::trial_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn scheme_validation() {
        assert!(InputScheme::sum(vec![0.6, 0.6], 1.0, 8, PhaseOption::FskDiscrete).is_err());
        assert!(InputScheme::sum(vec![0.3, 0.3], 2.0, 8, PhaseOption::FskDiscrete).is_err());
        assert!(InputScheme::sum(vec![-0.1], 1.0, 8, PhaseOption::FskDiscrete).is_err());
        assert!(InputScheme::individual(0.6, 2, 2.0, 8, PhaseOption::FskDiscrete).is_err());
        assert!(InputScheme::delay_spread(0.5, 1.0, 0, PhaseOption::FskDiscrete).is_err());
        assert!(InputScheme::sum(vec![1.0], 1.0, 8, PhaseOption::PskIid { d: 1 }).is_err());
        let s = InputScheme::sum(vec![0.5, 0.5], 1.0, 16, PhaseOption::FskDiscrete).unwrap();
        assert_eq!(s.tones(), 16);
    }

    #[test]
    fn always_on_single_antenna_tone() {
        let s = InputScheme::sum(vec![1.0], 1.0, 4, PhaseOption::FskDiscrete).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let b = sample_input_block(&s, &mut rng);
            if let Hypothesis::Antenna { k: 0, tone: Some(1) } = b.hypothesis {
                let want = [PI / 2.0, PI, 1.5 * PI, 2.0 * PI];
                for (z, w) in b.z[0].iter().zip(want) {
                    assert_abs_diff_eq!(z.re, w.cos(), epsilon = 1e-15);
                    assert_abs_diff_eq!(z.im, w.sin(), epsilon = 1e-15);
                }
                return;
            }
        }
        panic!("tone 1 never drawn");
    }

    #[test]
    fn zero_duty_is_always_off() {
        let s = InputScheme::sum(vec![0.0, 0.0], 1.0, 4, PhaseOption::FskDiscrete).unwrap();
        let mut rng = trial_rng(2, 0);
        for _ in 0..100 {
            let b = sample_input_block(&s, &mut rng);
            assert_eq!(b.hypothesis, Hypothesis::Off);
            assert!(b.z.iter().flatten().all(|v| *v == Complex64::default()));
        }
    }

    #[test]
    fn individual_rows_are_identical() {
        let s = InputScheme::individual(1.0, 2, 1.0, 8, PhaseOption::FskContinuous).unwrap();
        let b = sample_input_block(&s, &mut trial_rng(3, 0));
        assert!(matches!(b.hypothesis, Hypothesis::All { tone: None }));
        assert_eq!(b.z[0], b.z[1]);
        assert!(b.z[0].iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn peak_and_average_power() {
        let duty = vec![0.2, 0.3, 0.1];
        let s = InputScheme::sum(duty.clone(), 1.5, 6, PhaseOption::PskIid { d: 4 }).unwrap();
        let mut rng = trial_rng(4, 0);
        let draws = 100_000;
        let mut powers = Vec::with_capacity(draws);
        for _ in 0..draws {
            let b = sample_input_block(&s, &mut rng);
            for n in 0..6 {
                let p: f64 = b.z.iter().map(|row| row[n].norm_sqr()).sum();
                assert!(p <= 1.0 + 1e-12);
            }
            powers.push(b.z.iter().map(|row| row[0].norm_sqr()).sum::<f64>());
        }
        let m = powers.iter().sum::<f64>() / draws as f64;
        let sd = (powers.iter().map(|p| (p - m).powi(2)).sum::<f64>() / (draws - 1) as f64).sqrt();
        assert!((m - 0.6).abs() <= 3.0 * sd / (draws as f64).sqrt(), "{m}");

        let s = InputScheme::individual(0.4, 3, 2.0, 5, PhaseOption::FskDiscrete).unwrap();
        let mut on = 0usize;
        for _ in 0..draws {
            let b = sample_input_block(&s, &mut rng);
            for row in &b.z {
                assert!(row.iter().all(|v| v.norm() <= 1.0 + 1e-12));
            }
            on += usize::from(b.hypothesis != Hypothesis::Off);
        }
        let p = on as f64 / draws as f64;
        assert!((p - 0.4).abs() <= 3.0 * (0.4f64 * 0.6 / draws as f64).sqrt(), "{p}");
    }
}
