//! Autocorrelation models for a single stationary fading process.
//!
//! A model is either Gauss–Markov (`R(n) = r0 * a^|n|`) or an explicit
//! finite-support sequence `R(0), ..., R(L)` extended Hermitian-symmetrically.
//! From a model we derive the memory energy `phi = sum_{n>=1} |R(n)|^2`,
//! `lambda = R(0)^2 + 2 phi`, the spectral density `S(w)` and the
//! information rate `I(rho) = (1/2pi) int log(1 + rho S(w)) dw`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{param, Error, Result};

/// Default number of points for the uniform-grid quadrature of `I(rho)`.
pub const DEFAULT_QUAD_POINTS: usize = 4096;
/// Default grid size for PSD validation.
pub const DEFAULT_PSD_GRID: usize = 4096;
/// Smallest accepted grid for quadrature and PSD validation.
pub const MIN_GRID_POINTS: usize = 64;
/// Relative tolerance on negative spectral density, in units of `R(0)`.
pub const PSD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum AutocorrModel {
    /// `R(n) = r0 * a^|n|` with `0 <= a < 1`, `r0 > 0`.
    GaussMarkov { a: f64, r0: f64 },
    /// `R(0), ..., R(L)`; `R(-n) = conj(R(n))` and `R(n) = 0` for `|n| > L`.
    FiniteSupport { values: Vec<Complex64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrStats {
    pub phi: f64,
    pub lambda: f64,
    pub r0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ephemerality {
    Ephemeral,
    Nonephemeral,
}

impl Ephemerality {
    pub fn is_ephemeral(self) -> bool {
        self == Ephemerality::Ephemeral
    }
}

/// Uniform grid on `(-pi, pi]`; the last point is exactly `pi`.
pub(crate) fn omega_grid(points: usize) -> impl Iterator<Item = f64> {
    let step = 2.0 * PI / points as f64;
    (0..points).map(move |i| {
        if i + 1 == points {
            PI
        } else {
            -PI + step * (i + 1) as f64
        }
    })
}

impl AutocorrModel {
    pub fn gauss_markov(a: f64, r0: f64) -> Result<Self> {
        let m = AutocorrModel::GaussMarkov { a, r0 };
        m.check()?;
        Ok(m)
    }

    pub fn finite_support(values: Vec<Complex64>) -> Result<Self> {
        let m = AutocorrModel::FiniteSupport { values };
        m.check()?;
        Ok(m)
    }

    pub fn finite_support_real(values: &[f64]) -> Result<Self> {
        Self::finite_support(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Memoryless fading with power `r0`.
    pub fn iid(r0: f64) -> Result<Self> {
        Self::finite_support_real(&[r0])
    }

    /// Structural checks: `R(0)` real and positive, `|R(n)| <= R(0)`.
    ///
    /// Positive semidefiniteness is checked separately by [`validate_psd`](Self::validate_psd).
    pub fn check(&self) -> Result<()> {
        match self {
            AutocorrModel::GaussMarkov { a, r0 } => {
                if !(a.is_finite() && (0.0..1.0).contains(a)) {
                    return Err(Error::InvalidModel(format!(
                        "Gauss-Markov coefficient must satisfy 0 <= a < 1, got {a}"
                    )));
                }
                if !(r0.is_finite() && *r0 > 0.0) {
                    return Err(Error::InvalidModel(format!("R(0) must be positive, got {r0}")));
                }
            }
            AutocorrModel::FiniteSupport { values } => {
                let Some(first) = values.first() else {
                    return Err(Error::InvalidModel("empty finite-support sequence".into()));
                };
                if first.im != 0.0 || !(first.re.is_finite() && first.re > 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "R(0) must be real and positive, got {first}"
                    )));
                }
                for (n, v) in values.iter().enumerate().skip(1) {
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(Error::InvalidModel(format!("R({n}) is not finite")));
                    }
                    if v.norm() > first.re * (1.0 + 1e-12) {
                        return Err(Error::InvalidModel(format!(
                            "|R({n})| = {} exceeds R(0) = {}",
                            v.norm(),
                            first.re
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn r0(&self) -> f64 {
        match self {
            AutocorrModel::GaussMarkov { r0, .. } => *r0,
            AutocorrModel::FiniteSupport { values } => values[0].re,
        }
    }

    /// `R(n)` for any integer lag.
    pub fn eval(&self, n: i64) -> Complex64 {
        let lag = n.unsigned_abs();
        let v = match self {
            AutocorrModel::GaussMarkov { a, r0 } => {
                if lag == 0 {
                    Complex64::new(*r0, 0.0)
                } else {
                    let p = i32::try_from(lag).map(|e| a.powi(e)).unwrap_or(0.0);
                    Complex64::new(r0 * p, 0.0)
                }
            }
            AutocorrModel::FiniteSupport { values } => usize::try_from(lag)
                .ok()
                .and_then(|i| values.get(i).copied())
                .unwrap_or_default(),
        };
        if n < 0 {
            v.conj()
        } else {
            v
        }
    }

    /// Largest lag `n` at which `|R(n)|` can reach `abs_tol`: the support
    /// length for finite-support models, the geometric cutoff for Gauss–Markov.
    pub fn horizon(&self, abs_tol: f64) -> usize {
        match self {
            AutocorrModel::GaussMarkov { a, r0 } => {
                if *a == 0.0 || *r0 < abs_tol {
                    return 0;
                }
                let mag = |n: usize| r0 * a.powi(n as i32);
                let mut n = ((abs_tol / r0).ln() / a.ln()).floor().max(0.0) as usize;
                while mag(n + 1) >= abs_tol {
                    n += 1;
                }
                while n > 0 && mag(n) < abs_tol {
                    n -= 1;
                }
                n
            }
            AutocorrModel::FiniteSupport { values } => values.len() - 1,
        }
    }

    /// Same correlation shape with power multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(param("scale", format!("must be positive, got {c}")));
        }
        match self {
            AutocorrModel::GaussMarkov { a, r0 } => Self::gauss_markov(*a, r0 * c),
            AutocorrModel::FiniteSupport { values } => Self::finite_support(values.iter().map(|v| v * c).collect()),
        }
    }

    pub fn corr_stats(&self) -> CorrStats {
        let r0 = self.r0();
        let phi = match self {
            AutocorrModel::GaussMarkov { a, r0 } => {
                let a2 = a * a;
                a2 * r0 * r0 / (1.0 - a2)
            }
            AutocorrModel::FiniteSupport { values } => values.iter().skip(1).map(|v| v.norm_sqr()).sum(),
        };
        CorrStats {
            phi,
            lambda: r0 * r0 + 2.0 * phi,
            r0,
        }
    }

    pub fn spectral_density(&self, omega: f64) -> f64 {
        match self {
            AutocorrModel::GaussMarkov { a, r0 } => r0 * (1.0 - a * a) / (1.0 - 2.0 * a * omega.cos() + a * a),
            AutocorrModel::FiniteSupport { values } => {
                let tail: f64 = values
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, v)| (v * Complex64::from_polar(1.0, -omega * n as f64)).re)
                    .sum();
                values[0].re + 2.0 * tail
            }
        }
    }

    /// Checks `S(w) >= -1e-9 R(0)` on a uniform grid of `grid_points` on `(-pi, pi]`.
    pub fn validate_psd(&self, grid_points: usize) -> Result<()> {
        if grid_points < MIN_GRID_POINTS {
            return Err(param(
                "grid_points",
                format!("need at least {MIN_GRID_POINTS}, got {grid_points}"),
            ));
        }
        let (omega, min) =
            omega_grid(grid_points)
                .map(|w| (w, self.spectral_density(w)))
                .fold(
                    (0.0, f64::INFINITY),
                    |best, cur| if cur.1 < best.1 { cur } else { best },
                );
        let tol = PSD_TOLERANCE * self.r0();
        if min < -tol {
            return Err(Error::PsdViolation { omega, min, tol });
        }
        Ok(())
    }

    /// `I(rho)` by the trapezoidal rule on a uniform periodic grid.
    pub fn information_rate(&self, rho: f64, quad_points: usize) -> Result<f64> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(param("rho", format!("must be finite and >= 0, got {rho}")));
        }
        if quad_points < MIN_GRID_POINTS {
            return Err(param(
                "quad_points",
                format!("need at least {MIN_GRID_POINTS}, got {quad_points}"),
            ));
        }
        if rho == 0.0 {
            return Ok(0.0);
        }
        let sum: f64 = omega_grid(quad_points)
            .map(|w| (rho * self.spectral_density(w)).ln_1p())
            .sum();
        Ok(sum / quad_points as f64)
    }

    /// Ephemeral iff `2 phi <= R(0)^2`; the boundary counts as ephemeral.
    pub fn classify_ephemeral(&self) -> Ephemerality {
        let s = self.corr_stats();
        if 2.0 * s.phi <= s.r0 * s.r0 {
            Ephemerality::Ephemeral
        } else {
            Ephemerality::Nonephemeral
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gm(a: f64) -> AutocorrModel {
        AutocorrModel::gauss_markov(a, 1.0).unwrap()
    }

    fn ar1_rate(a: f64, rho: f64) -> f64 {
        let c = 1.0 + a * a + rho * (1.0 - a * a);
        ((c + (c * c - 4.0 * a * a).sqrt()) / 2.0).ln()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(gm(0.5).eval(2).re, 0.25);
        let fs = AutocorrModel::finite_support(vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.25)]).unwrap();
        assert_eq!(fs.eval(-1), Complex64::new(0.5, -0.25));
        assert_eq!(fs.eval(1), Complex64::new(0.5, 0.25));
        assert_eq!(fs.eval(7), Complex64::default());
        assert_eq!(AutocorrModel::gauss_markov(0.3, 2.5).unwrap().eval(0).re, 2.5);
    }

    #[test]
    fn stats_examples() {
        let s = gm(0.5).corr_stats();
        assert_abs_diff_eq!(s.phi, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.lambda, 5.0 / 3.0, epsilon = 1e-15);
        // partial sums of the geometric series
        let partial: f64 = (1..=200).map(|n| gm(0.5).eval(n).norm_sqr()).sum();
        assert_abs_diff_eq!(s.phi, partial, epsilon = 1e-14);

        let s = AutocorrModel::finite_support_real(&[1.0, 0.5]).unwrap().corr_stats();
        assert_eq!((s.phi, s.lambda), (0.25, 1.5));
        let s = AutocorrModel::iid(1.0).unwrap().corr_stats();
        assert_eq!((s.phi, s.lambda), (0.0, 1.0));
    }

    #[test]
    fn spectral_density_examples() {
        for w in [-3.0, 0.0, 1.0, PI] {
            assert_abs_diff_eq!(gm(0.0).spectral_density(w), 1.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(gm(0.5).spectral_density(0.0), 3.0, epsilon = 1e-14);
        let fs = AutocorrModel::finite_support_real(&[1.0, 0.5]).unwrap();
        assert_abs_diff_eq!(fs.spectral_density(PI), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn psd_validation() {
        assert!(gm(0.9).validate_psd(64).is_ok());
        assert!(AutocorrModel::finite_support_real(&[1.0, 0.5])
            .unwrap()
            .validate_psd(64)
            .is_ok());
        match AutocorrModel::finite_support_real(&[1.0, 0.9])
            .unwrap()
            .validate_psd(64)
        {
            Err(Error::PsdViolation { omega, min, .. }) => {
                assert_abs_diff_eq!(omega, PI);
                assert_abs_diff_eq!(min, -0.8, epsilon = 1e-12);
            }
            other => panic!("expected violation, got {other:?}"),
        }
        assert!(gm(0.5).validate_psd(16).is_err());
    }

    #[test]
    fn structural_checks() {
        assert!(AutocorrModel::gauss_markov(1.0, 1.0).is_err());
        assert!(AutocorrModel::gauss_markov(-0.1, 1.0).is_err());
        assert!(AutocorrModel::gauss_markov(0.5, 0.0).is_err());
        assert!(AutocorrModel::finite_support(vec![]).is_err());
        assert!(AutocorrModel::finite_support_real(&[1.0, 1.5]).is_err());
        assert!(AutocorrModel::finite_support(vec![Complex64::new(1.0, 0.1)]).is_err());
    }

    #[test]
    fn ar1_identity_holds_numerically() {
        // The closed form relies on (1/2pi) int log|1 - a e^{iw}|^2 dw = 0.
        for a in [0.0, 0.3, 0.9] {
            let n = 1 << 14;
            let mean: f64 = omega_grid(n)
                .map(|w| (1.0 - 2.0 * a * w.cos() + a * a).ln())
                .sum::<f64>()
                / n as f64;
            assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn information_rate_examples() {
        assert_eq!(gm(0.7).information_rate(0.0, 64).unwrap(), 0.0);
        assert_abs_diff_eq!(
            gm(0.0).information_rate(1.0, 4096).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        let v = gm(0.5).information_rate(1.0, 4096).unwrap();
        assert_abs_diff_eq!(v, 0.623_810_716_364_871_4, epsilon = 1e-12);
        for a in [0.0, 0.3, 0.9] {
            for rho in [0.01, 1.0, 10.0] {
                let got = gm(a).information_rate(rho, 4096).unwrap();
                assert_abs_diff_eq!(got, ar1_rate(a, rho), epsilon = 1e-10);
            }
        }
        assert!(gm(0.5).information_rate(-1.0, 4096).is_err());
        assert!(gm(0.5).information_rate(1.0, 8).is_err());
    }

    #[test]
    fn ephemeral_examples() {
        assert!(AutocorrModel::iid(1.0).unwrap().classify_ephemeral().is_ephemeral());
        assert_eq!(gm(0.9).classify_ephemeral(), Ephemerality::Nonephemeral);
        assert_abs_diff_eq!(2.0 * gm(0.9).corr_stats().phi, 8.526_315_789_473_68, epsilon = 1e-12);
        assert_eq!(gm((1.0f64 / 3.0).sqrt()).classify_ephemeral(), Ephemerality::Ephemeral);
    }

    #[test]
    fn horizon_covers_tolerance() {
        let m = gm(0.9);
        let h = m.horizon(1e-12);
        assert!(m.eval(h as i64).norm() >= 1e-12);
        assert!(m.eval(h as i64 + 1).norm() < 1e-12);
        assert_eq!(gm(0.0).horizon(1e-12), 0);
        assert_eq!(
            AutocorrModel::finite_support_real(&[1.0, 0.0, 0.2])
                .unwrap()
                .horizon(1e-12),
            2
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn model() -> impl Strategy<Value = AutocorrModel> {
            prop_oneof![
                (0.0..0.95f64, 0.2..3.0f64).prop_map(|(a, r0)| AutocorrModel::gauss_markov(a, r0).unwrap()),
                (0.2..3.0f64, proptest::collection::vec(-0.3..0.3f64, 0..4)).prop_map(|(r0, tail)| {
                    // |tail| sums to at most 0.9 r0 / 2, so S stays positive
                    let mut v = vec![r0];
                    v.extend(tail.iter().map(|t| t * r0 * 0.5));
                    AutocorrModel::finite_support_real(&v).unwrap()
                }),
            ]
        }

        proptest! {
            #[test]
            fn stats_and_spectrum_invariants(m in model()) {
                let s = m.corr_stats();
                prop_assert!(s.phi >= 0.0);
                prop_assert!(s.lambda >= s.r0 * s.r0);
                prop_assert!(m.validate_psd(256).is_ok());
                let n = 4096;
                let mean: f64 = omega_grid(n).map(|w| m.spectral_density(w)).sum::<f64>() / n as f64;
                prop_assert!((mean - s.r0).abs() <= 1e-9 * s.r0);
            }

            #[test]
            fn rate_is_monotone_concave_and_below_linear(m in model()) {
                let rhos = [0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2];
                let vals: Vec<f64> = rhos.iter().map(|&r| m.information_rate(r, 1024).unwrap()).collect();
                for w in vals.windows(2) {
                    prop_assert!(w[1] >= w[0]);
                }
                for (r, v) in rhos.iter().zip(&vals) {
                    prop_assert!(*v <= r * m.r0() + 1e-12);
                }
                // midpoint concavity on the doubling grid
                for i in 1..rhos.len() - 1 {
                    let (r0, r1, r2) = (rhos[i - 1], rhos[i], rhos[i + 1]);
                    let interp = vals[i - 1] + (vals[i + 1] - vals[i - 1]) * (r1 - r0) / (r2 - r0);
                    prop_assert!(vals[i] >= interp - 1e-12);
                }
            }
        }
    }

    #[test]
    fn ephemeral_flips_at_one_third() {
        let below = AutocorrModel::gauss_markov((1.0f64 / 3.0 - 1e-6).sqrt(), 1.0).unwrap();
        let above = AutocorrModel::gauss_markov((1.0f64 / 3.0 + 1e-6).sqrt(), 1.0).unwrap();
        assert!(below.classify_ephemeral().is_ephemeral());
        assert!(!above.classify_ephemeral().is_ephemeral());
    }
}
