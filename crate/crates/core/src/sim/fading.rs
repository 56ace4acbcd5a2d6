use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::corr::AutocorrModel;
use crate::error::{param, Result};
use crate::linalg::{CMatrix, Cholesky};

/// One draw of a zero-mean circularly-symmetric complex normal with unit variance.
pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_noise<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| standard_complex_normal(rng)).collect()
}

/// Draws blocks `H(1..N)` with covariance `Toeplitz(R(i - j))`.
#[derive(Debug, Clone)]
pub struct FadingSampler {
    factor: Cholesky,
}

impl FadingSampler {
    pub fn new(model: &AutocorrModel, block_length: usize) -> Result<Self> {
        Self::from_lags(block_length, |n| model.eval(n))
    }

    /// Sampler for an arbitrary Hermitian-symmetric autocorrelation.
    pub fn from_lags(block_length: usize, lag: impl Fn(i64) -> Complex64) -> Result<Self> {
        if block_length == 0 {
            return Err(param("block_length", "must be positive"));
        }
        let t = CMatrix::toeplitz(block_length, lag);
        Ok(Self {
            factor: Cholesky::factor_with_jitter(&t)?,
        })
    }

    pub fn block_length(&self) -> usize {
        self.factor.dim()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Complex64> {
        let w = complex_noise(self.factor.dim(), rng);
        self.factor.mul_lower(&w)
    }
}

pub fn sample_fading_block<R: Rng + ?Sized>(
    model: &AutocorrModel,
    block_length: usize,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    Ok(FadingSampler::new(model, block_length)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::trial_rng;

    /// Mean of `f` over `draws` blocks with its standard error.
    fn mean_and_se(draws: usize, mut f: impl FnMut() -> f64) -> (f64, f64) {
        let xs: Vec<f64> = (0..draws).map(|_| f()).collect();
        let m = xs.iter().sum::<f64>() / draws as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (draws - 1) as f64;
        (m, (v / draws as f64).sqrt())
    }

    #[test]
    fn iid_block_has_identity_covariance() {
        let s = FadingSampler::new(&AutocorrModel::iid(1.0).unwrap(), 4).unwrap();
        let mut rng = trial_rng(11, 0);
        let blocks: Vec<_> = (0..100_000).map(|_| s.sample(&mut rng)).collect();
        for i in 0..4 {
            for j in 0..4 {
                let mut it = blocks.iter();
                let (m, se) = mean_and_se(blocks.len(), || {
                    let h = it.next().unwrap();
                    (h[i] * h[j].conj()).re
                });
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((m - want).abs() <= 3.0 * se + 1e-3, "({i},{j}): {m} +- {se}");
            }
        }
    }

    #[test]
    fn gauss_markov_lag_one() {
        let s = FadingSampler::new(&AutocorrModel::gauss_markov(0.9, 1.0).unwrap(), 2).unwrap();
        let mut rng = trial_rng(5, 3);
        let (m, se) = mean_and_se(100_000, || {
            let h = s.sample(&mut rng);
            (h[1] * h[0].conj()).re
        });
        assert!((m - 0.9).abs() <= 3.0 * se, "{m} +- {se}");
        let (p, se) = mean_and_se(100_000, || {
            let h = s.sample(&mut rng);
            (h[0] * h[0]).re
        });
        assert!(p.abs() <= 3.0 * se, "pseudo-covariance {p} +- {se}");
    }

    #[test]
    fn invalid_model_fails_to_factor() {
        let bad = AutocorrModel::finite_support_real(&[1.0, 0.9]).unwrap();
        assert!(FadingSampler::new(&bad, 16).is_err());
    }
}
