//! Browser demo. The `demo` functions are plain Rust and tested natively;
//! the `#[wasm_bindgen]` wrappers below only convert types.

use wasm_bindgen::prelude::*;

pub mod demo {
    use fadecap::bounds::{limit_indiv_separable, separable_sum_bounds, upper_bound_sum, SolverOptions};
    use fadecap::channel::{MimoChannelSpec, SeparableStructure};
    use fadecap::corr::AutocorrModel;
    use fadecap::sim::{estimate_mi, InputScheme, PhaseOption};

    pub const QUAD_POINTS: usize = 1024;

    /// Gauss-Markov with parameter `a` when `taps` is empty, otherwise the
    /// real finite-support autocorrelation `taps`.
    pub fn model(a: f64, taps: &[f64]) -> Result<AutocorrModel, String> {
        let m = if taps.is_empty() {
            AutocorrModel::gauss_markov(a, 1.0)
        } else {
            AutocorrModel::finite_support_real(taps)
        };
        m.map_err(|e| e.to_string())
    }

    #[derive(Debug, Clone, PartialEq)]
    pub struct Spectrum {
        pub omega: Vec<f64>,
        pub density: Vec<f64>,
        pub phi: f64,
        pub lambda: f64,
        pub info_rate: f64,
        pub ephemeral: bool,
    }

    /// Spectral density on `points` frequencies in `[-pi, pi]` plus the
    /// per-process statistics at SNR `rho`.
    pub fn spectrum(a: f64, taps: &[f64], rho: f64, points: usize) -> Result<Spectrum, String> {
        let m = model(a, taps)?;
        m.validate_psd(QUAD_POINTS).map_err(|e| e.to_string())?;
        let points = points.max(2);
        let omega: Vec<f64> = (0..points)
            .map(|i| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / (points - 1) as f64)
            .collect();
        let density = omega.iter().map(|w| m.spectral_density(*w)).collect();
        let s = m.corr_stats();
        Ok(Spectrum {
            omega,
            density,
            phi: s.phi,
            lambda: s.lambda,
            info_rate: m.information_rate(rho, QUAD_POINTS).map_err(|e| e.to_string())?,
            ephemeral: m.classify_ephemeral().is_ephemeral(),
        })
    }

    #[derive(Debug, Clone, PartialEq)]
    pub struct BoundCurve {
        pub rho: Vec<f64>,
        pub upper_over_rho2: Vec<f64>,
        pub sum_limit: f64,
        pub individual_limit: f64,
    }

    /// Normalized sum-constraint upper bound over a log-spaced SNR range for
    /// the separable channel `alpha_k R(n)` with one receive antenna.
    pub fn bound_curve(alphas: &[f64], a: f64, beta: f64, points: usize) -> Result<BoundCurve, String> {
        let sep = SeparableStructure::new(alphas.to_vec(), vec![model(a, &[])?]).map_err(|e| e.to_string())?;
        let spec = sep.expand().map_err(|e| e.to_string())?;
        let points = points.max(2);
        let rho: Vec<f64> = (0..points)
            .map(|i| 10f64.powf(-3.0 + 3.0 * i as f64 / (points - 1) as f64))
            .collect();
        let upper_over_rho2 = rho
            .iter()
            .map(|r| {
                upper_bound_sum(&spec, *r, beta, QUAD_POINTS, SolverOptions::default())
                    .map(|b| b.upper.unwrap_or(0.0) / (r * r))
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sum_limit = separable_sum_bounds(&sep, 0.0, beta, QUAD_POINTS)
            .map_err(|e| e.to_string())?
            .limit
            .unwrap_or(0.0);
        let individual_limit = limit_indiv_separable(&sep, beta)
            .map_err(|e| e.to_string())?
            .limit
            .unwrap_or(0.0);
        Ok(BoundCurve {
            rho,
            upper_over_rho2,
            sum_limit,
            individual_limit,
        })
    }

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct QuickEstimate {
        pub mi: f64,
        pub std_err: f64,
        pub upper: f64,
    }

    /// Always-on FSK over a 1x1 Gauss-Markov channel, next to the upper bound.
    pub fn quick_mi(a: f64, rho: f64, block_length: usize, trials: usize, seed: u64) -> Result<QuickEstimate, String> {
        let spec = MimoChannelSpec::siso(model(a, &[])?).map_err(|e| e.to_string())?;
        let scheme =
            InputScheme::sum(vec![1.0], 1.0, block_length, PhaseOption::FskDiscrete).map_err(|e| e.to_string())?;
        let e = estimate_mi(&spec, &scheme, rho, trials, seed, 1).map_err(|e| e.to_string())?;
        let upper = upper_bound_sum(&spec, rho, 1.0, QUAD_POINTS, SolverOptions::default())
            .map_err(|e| e.to_string())?
            .upper
            .unwrap_or(0.0);
        Ok(QuickEstimate {
            mi: e.mi_per_use,
            std_err: e.std_err,
            upper,
        })
    }
}

fn js_err(msg: String) -> JsError {
    JsError::new(&msg)
}

#[wasm_bindgen]
pub struct SpectrumView(demo::Spectrum);

#[wasm_bindgen]
impl SpectrumView {
    #[wasm_bindgen(getter)]
    pub fn omega(&self) -> Vec<f64> {
        self.0.omega.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.0.density.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn phi(&self) -> f64 {
        self.0.phi
    }
    #[wasm_bindgen(getter)]
    pub fn lambda(&self) -> f64 {
        self.0.lambda
    }
    #[wasm_bindgen(getter, js_name = infoRate)]
    pub fn info_rate(&self) -> f64 {
        self.0.info_rate
    }
    #[wasm_bindgen(getter)]
    pub fn ephemeral(&self) -> bool {
        self.0.ephemeral
    }
}

/// `taps` empty selects Gauss-Markov with parameter `a`.
#[wasm_bindgen]
pub fn spectrum(a: f64, taps: Vec<f64>, rho: f64, points: usize) -> Result<SpectrumView, JsError> {
    demo::spectrum(a, &taps, rho, points).map(SpectrumView).map_err(js_err)
}

#[wasm_bindgen]
pub struct CurveView(demo::BoundCurve);

#[wasm_bindgen]
impl CurveView {
    #[wasm_bindgen(getter)]
    pub fn rho(&self) -> Vec<f64> {
        self.0.rho.clone()
    }
    #[wasm_bindgen(getter, js_name = upperOverRho2)]
    pub fn upper_over_rho2(&self) -> Vec<f64> {
        self.0.upper_over_rho2.clone()
    }
    #[wasm_bindgen(getter, js_name = sumLimit)]
    pub fn sum_limit(&self) -> f64 {
        self.0.sum_limit
    }
    #[wasm_bindgen(getter, js_name = individualLimit)]
    pub fn individual_limit(&self) -> f64 {
        self.0.individual_limit
    }
}

#[wasm_bindgen(js_name = boundCurve)]
pub fn bound_curve(alphas: Vec<f64>, a: f64, beta: f64, points: usize) -> Result<CurveView, JsError> {
    demo::bound_curve(&alphas, a, beta, points)
        .map(CurveView)
        .map_err(js_err)
}

/// `[mi, std_err, upper]` in nats per channel use.
#[wasm_bindgen(js_name = quickMi)]
pub fn quick_mi(a: f64, rho: f64, block_length: usize, trials: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    demo::quick_mi(a, rho, block_length, trials, seed as u64)
        .map(|q| vec![q.mi, q.std_err, q.upper])
        .map_err(js_err)
}
