//! MIMO and delay-spread channel descriptions.

use crate::corr::{AutocorrModel, Ephemerality, DEFAULT_PSD_GRID};
use crate::error::{param, Error, Result};

/// Default relative tolerance for transmit-separability detection.
pub const DEFAULT_SEPARABILITY_TOL: f64 = 1e-9;
/// Lags always inspected when testing separability (in addition to finite supports).
pub const DEFAULT_SEPARABILITY_LAGS: usize = 64;

/// `N_T x N_R` grid of independent fading processes.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoChannelSpec {
    nt: usize,
    nr: usize,
    // row-major: index k * nr + l
    models: Vec<AutocorrModel>,
}

impl MimoChannelSpec {
    /// `models[k * nr + l]` is the process from transmit antenna `k` to receive antenna `l`.
    pub fn new(nt: usize, nr: usize, models: Vec<AutocorrModel>) -> Result<Self> {
        if nt == 0 || nr == 0 {
            return Err(Error::InvalidChannel(format!(
                "antenna counts must be positive, got {nt}x{nr}"
            )));
        }
        if models.len() != nt * nr {
            return Err(Error::InvalidChannel(format!(
                "expected {} models for a {nt}x{nr} grid, got {}",
                nt * nr,
                models.len()
            )));
        }
        for (i, m) in models.iter().enumerate() {
            m.check()
                .and_then(|_| m.validate_psd(DEFAULT_PSD_GRID))
                .map_err(|e| Error::Pair {
                    k: i / nr,
                    l: i % nr,
                    source: Box::new(e),
                })?;
        }
        Ok(Self { nt, nr, models })
    }

    /// Builds the grid from rows indexed by transmit antenna.
    pub fn from_rows(rows: Vec<Vec<AutocorrModel>>) -> Result<Self> {
        let nt = rows.len();
        let nr = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != nr) {
            return Err(Error::InvalidChannel("ragged model grid".into()));
        }
        Self::new(nt, nr, rows.into_iter().flatten().collect())
    }

    pub fn siso(model: AutocorrModel) -> Result<Self> {
        Self::new(1, 1, vec![model])
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn model(&self, k: usize, l: usize) -> &AutocorrModel {
        &self.models[k * self.nr + l]
    }

    pub fn models(&self) -> &[AutocorrModel] {
        &self.models
    }

    /// Lags used by the separability test: every lag up to the longest
    /// finite support, and at least `0..=min_lags`.
    fn test_lags(&self, min_lags: usize) -> usize {
        self.models
            .iter()
            .filter_map(|m| match m {
                AutocorrModel::FiniteSupport { values } => Some(values.len() - 1),
                AutocorrModel::GaussMarkov { .. } => None,
            })
            .fold(min_lags, usize::max)
    }

    pub fn detect_transmit_separable(&self, tol: f64) -> Option<SeparableStructure> {
        self.detect_transmit_separable_with_lags(tol, DEFAULT_SEPARABILITY_LAGS)
    }

    /// Canonical factorization `R_{k,l} = alpha_k R_{0,l}` with `alpha_0 = 1`,
    /// accepted when every tested lag matches within `tol * R_{0,0}(0)`.
    pub fn detect_transmit_separable_with_lags(&self, tol: f64, min_lags: usize) -> Option<SeparableStructure> {
        let scale = self.model(0, 0).r0();
        let alphas: Vec<f64> = (0..self.nt).map(|k| self.model(k, 0).r0() / scale).collect();
        let receive: Vec<AutocorrModel> = (0..self.nr).map(|l| self.model(0, l).clone()).collect();
        let max_lag = self.test_lags(min_lags) as i64;
        for (k, alpha) in alphas.iter().enumerate().skip(1) {
            for (l, base) in receive.iter().enumerate() {
                let m = self.model(k, l);
                let fits = (0..=max_lag).all(|n| (m.eval(n) - base.eval(n) * *alpha).norm() <= tol * scale);
                if !fits {
                    return None;
                }
            }
        }
        Some(SeparableStructure {
            alphas,
            receive_models: receive,
        })
    }

    pub fn classify(&self) -> ChannelClass {
        let pairs: Vec<Ephemerality> = self.models.iter().map(AutocorrModel::classify_ephemeral).collect();
        let nonephemeral = pairs.iter().all(|p| !p.is_ephemeral());
        ChannelClass {
            nt: self.nt,
            nr: self.nr,
            pairs,
            nonephemeral,
        }
    }

    /// Errors with the first ephemeral pair, if any.
    pub fn require_nonephemeral(&self) -> Result<()> {
        for k in 0..self.nt {
            for l in 0..self.nr {
                let m = self.model(k, l);
                if m.classify_ephemeral().is_ephemeral() {
                    let s = m.corr_stats();
                    return Err(Error::Ephemeral {
                        k,
                        l,
                        two_phi: 2.0 * s.phi,
                        r0_sq: s.r0 * s.r0,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelClass {
    pub nt: usize,
    pub nr: usize,
    /// Row-major per-pair flags, index `k * nr + l`.
    pub pairs: Vec<Ephemerality>,
    pub nonephemeral: bool,
}

impl ChannelClass {
    pub fn pair(&self, k: usize, l: usize) -> Ephemerality {
        self.pairs[k * self.nr + l]
    }
}

/// `R_{k,l}(n) = alpha_k R_l(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableStructure {
    alphas: Vec<f64>,
    receive_models: Vec<AutocorrModel>,
}

impl SeparableStructure {
    /// Gains must be strictly positive so that every expanded pair is a valid model.
    pub fn new(alphas: Vec<f64>, receive_models: Vec<AutocorrModel>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(param("alphas", "need at least one transmit antenna"));
        }
        if let Some(a) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(param("alphas", format!("gains must be positive, got {a}")));
        }
        if receive_models.is_empty() {
            return Err(param("receive_models", "need at least one receive antenna"));
        }
        for (l, m) in receive_models.iter().enumerate() {
            m.check()
                .and_then(|_| m.validate_psd(DEFAULT_PSD_GRID))
                .map_err(|e| Error::Pair {
                    k: 0,
                    l,
                    source: Box::new(e),
                })?;
        }
        Ok(Self { alphas, receive_models })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn receive_models(&self) -> &[AutocorrModel] {
        &self.receive_models
    }

    pub fn alpha_max(&self) -> f64 {
        self.alphas.iter().copied().fold(0.0, f64::max)
    }

    pub fn alpha_sum(&self) -> f64 {
        self.alphas.iter().sum()
    }

    /// The full grid `alpha_k R_l`.
    pub fn expand(&self) -> Result<MimoChannelSpec> {
        let mut models = Vec::with_capacity(self.alphas.len() * self.receive_models.len());
        for &a in &self.alphas {
            for r in &self.receive_models {
                models.push(r.scaled(a)?);
            }
        }
        MimoChannelSpec::new(self.alphas.len(), self.receive_models.len(), models)
    }

    /// Multiplies every `alpha_k` by `c` and divides every `R_l` by `c`; the
    /// described channel is unchanged.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        let alphas = self.alphas.iter().map(|a| a * c).collect();
        let receive = self
            .receive_models
            .iter()
            .map(|m| m.scaled(1.0 / c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphas, receive)
    }

    pub fn require_nonephemeral(&self) -> Result<()> {
        for (l, m) in self.receive_models.iter().enumerate() {
            let s = m.corr_stats();
            // alpha_k > 0 scales both sides by alpha_k^2, so pair (k, l) fails iff R_l does
            if m.classify_ephemeral().is_ephemeral() {
                return Err(Error::Ephemeral {
                    k: 0,
                    l,
                    two_phi: 2.0 * s.phi,
                    r0_sq: s.r0 * s.r0,
                });
            }
        }
        Ok(())
    }
}

/// SISO channel with `K` independent time-correlated taps.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySpreadSpec {
    taps: Vec<AutocorrModel>,
}

impl DelaySpreadSpec {
    pub fn new(taps: Vec<AutocorrModel>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidChannel(
                "delay-spread channel needs at least one tap".into(),
            ));
        }
        for (k, m) in taps.iter().enumerate() {
            m.check()
                .and_then(|_| m.validate_psd(DEFAULT_PSD_GRID))
                .map_err(|e| Error::Pair {
                    k,
                    l: 0,
                    source: Box::new(e),
                })?;
        }
        Ok(Self { taps })
    }

    pub fn taps(&self) -> &[AutocorrModel] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// The `K x 1` MISO channel whose antenna `k` sees tap `k`.
    ///
    /// The MISO input is not forced to be a delayed copy of a single scalar
    /// sequence, so any upper bound computed on the result also bounds the
    /// delay-spread channel, but lower bounds need not carry over.
    pub fn to_miso(&self) -> MimoChannelSpec {
        MimoChannelSpec {
            nt: self.taps.len(),
            nr: 1,
            models: self.taps.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintMode {
    Sum,
    Individual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConstraints {
    pub mode: ConstraintMode,
    beta: f64,
}

impl PowerConstraints {
    pub fn new(mode: ConstraintMode, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { mode, beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta >= 1.0) {
        return Err(param("beta", format!("peak-to-average ratio must be >= 1, got {beta}")));
    }
    Ok(())
}
