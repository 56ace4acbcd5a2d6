use crate::channel::MimoChannelSpec;
use crate::error::Result;

use super::solver::ConcaveObjective;

/// `sum_l { log(1 + rho sum_k R_{k,l}(0) a_k) - sum_k a_k I_{k,l}(rho) }`.
#[derive(Debug, Clone)]
pub struct SumUpperObjective {
    nt: usize,
    nr: usize,
    rho: f64,
    r0: Vec<f64>,
    info: Vec<f64>,
}

impl SumUpperObjective {
    pub fn new(spec: &MimoChannelSpec, rho: f64, quad_points: usize) -> Result<Self> {
        let info = spec
            .models()
            .iter()
            .map(|m| m.information_rate(rho, quad_points))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            nt: spec.nt(),
            nr: spec.nr(),
            rho,
            r0: spec.models().iter().map(|m| m.r0()).collect(),
            info,
        })
    }

    fn received(&self, a: &[f64], l: usize) -> f64 {
        (0..self.nt).map(|k| self.r0[k * self.nr + l] * a[k]).sum()
    }
}

impl ConcaveObjective for SumUpperObjective {
    fn dim(&self) -> usize {
        self.nt
    }

    fn value(&self, a: &[f64]) -> f64 {
        (0..self.nr)
            .map(|l| {
                let cost: f64 = (0..self.nt).map(|k| a[k] * self.info[k * self.nr + l]).sum();
                (self.rho * self.received(a, l)).ln_1p() - cost
            })
            .sum()
    }

    fn gradient(&self, a: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for l in 0..self.nr {
            let gain = self.rho / (1.0 + self.rho * self.received(a, l));
            for (k, o) in out.iter_mut().enumerate() {
                let i = k * self.nr + l;
                *o += gain * self.r0[i] - self.info[i];
            }
        }
    }
}

/// `(1/2) sum_l { sum_k a_k lambda_{k,l} - (sum_k a_k R_{k,l}(0))^2 }`.
#[derive(Debug, Clone)]
pub struct SumLimitObjective {
    nt: usize,
    nr: usize,
    r0: Vec<f64>,
    lambda: Vec<f64>,
}

impl SumLimitObjective {
    pub fn new(spec: &MimoChannelSpec) -> Self {
        let stats: Vec<_> = spec.models().iter().map(|m| m.corr_stats()).collect();
        Self {
            nt: spec.nt(),
            nr: spec.nr(),
            r0: stats.iter().map(|s| s.r0).collect(),
            lambda: stats.iter().map(|s| s.lambda).collect(),
        }
    }

    fn received(&self, a: &[f64], l: usize) -> f64 {
        (0..self.nt).map(|k| self.r0[k * self.nr + l] * a[k]).sum()
    }

    /// Summand for receive antenna `l` alone.
    pub fn per_receive(&self, a: &[f64], l: usize) -> f64 {
        let linear: f64 = (0..self.nt).map(|k| a[k] * self.lambda[k * self.nr + l]).sum();
        let s = self.received(a, l);
        0.5 * (linear - s * s)
    }
}

impl ConcaveObjective for SumLimitObjective {
    fn dim(&self) -> usize {
        self.nt
    }

    fn value(&self, a: &[f64]) -> f64 {
        (0..self.nr).map(|l| self.per_receive(a, l)).sum()
    }

    fn gradient(&self, a: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for l in 0..self.nr {
            let s = self.received(a, l);
            for (k, o) in out.iter_mut().enumerate() {
                let i = k * self.nr + l;
                *o += 0.5 * self.lambda[i] - self.r0[i] * s;
            }
        }
    }
}
