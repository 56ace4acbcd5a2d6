//! Low-SNR capacity bounds and normalized-capacity limits.
//!
//! Sum constraints: a finite-SNR upper bound obtained by maximizing a concave
//! objective over the duty-allocation set `A(beta) = {a >= 0, sum(a) <= 1/beta}`,
//! and the limit of `C / rho^2` as a concave quadratic over the same set.
//! Individual and delay-spread constraints: the closed-form limits for transmit
//! (delay) separable channels and the liminf/limsup pair for nonephemeral ones.

mod objective;
mod oracle;
mod solver;

use std::fmt;

pub use objective::{SumLimitObjective, SumUpperObjective};
pub use oracle::{grid_oracle, OracleObjective};
pub use solver::{golden_max, maximize, project_capped_simplex, ConcaveObjective, Solution, SolverOptions};

use crate::channel::{check_beta, DelaySpreadSpec, MimoChannelSpec, SeparableStructure, DEFAULT_SEPARABILITY_TOL};
use crate::corr::AutocorrModel;
use crate::error::{param, Result};

/// Correlation terms below this magnitude end the cross-sum in the lower limit coefficient.
pub const SERIES_CUTOFF: f64 = 1e-12;

/// Probabilities `a_k` of using transmit antenna `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DutyAllocation(pub Vec<f64>);

impl DutyAllocation {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Membership in `A(beta)`, with a relative slack for rounding.
    pub fn is_feasible(&self, beta: f64) -> bool {
        self.0.iter().all(|a| *a >= 0.0) && self.total() <= (1.0 / beta) * (1.0 + 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Argmax {
    Allocation(DutyAllocation),
    /// Common duty cycle of a single active antenna or of all antennas.
    Duty(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    Sum,
    Individual,
    DelaySpread,
}

/// Which closed-form result produced a number. The string tags are part of
/// the CSV output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaTag {
    SumUpper,
    SumLimit,
    SeparableSum,
    SeparableSumNonephemeral,
    SeparableIndividual,
    SeparableIndividualNonephemeral,
    NonephemeralIndividualBracket,
    DelaySeparable,
    DelaySeparableNonephemeral,
    NonephemeralDelayBracket,
    /// Sum-constraint upper bound at `N_T * rho`, which dominates the
    /// individual-constraint capacity at `rho`.
    ScaledSumUpper,
}

impl FormulaTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaTag::SumUpper => "prop1",
            FormulaTag::SumLimit => "prop2",
            FormulaTag::SeparableSum => "cor3",
            FormulaTag::SeparableSumNonephemeral => "cor4",
            FormulaTag::SeparableIndividual => "cor5",
            FormulaTag::SeparableIndividualNonephemeral => "cor6",
            FormulaTag::NonephemeralIndividualBracket => "cor7",
            FormulaTag::DelaySeparable => "cor8",
            FormulaTag::DelaySeparableNonephemeral => "cor9",
            FormulaTag::NonephemeralDelayBracket => "cor10",
            FormulaTag::ScaledSumUpper => "prop1-scaled",
        }
    }
}

impl fmt::Display for FormulaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bounds on `lim inf` / `lim sup` of `C / rho^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitBracket {
    pub upper_coeff: f64,
    pub lower_coeff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rho: Option<f64>,
    pub beta: f64,
    pub mode: BoundMode,
    /// Upper bound on capacity at `rho`, nats per channel use.
    pub upper: Option<f64>,
    /// `lim C / rho^2`, when identified.
    pub limit: Option<f64>,
    pub bracket: Option<LimitBracket>,
    pub argmax: Option<Argmax>,
    pub formulas: Vec<FormulaTag>,
    /// False when an iterative solve hit its iteration cap.
    pub converged: bool,
    /// Set when no limit or bracket applies to the channel.
    pub flagged: bool,
}

impl BoundReport {
    fn new(rho: Option<f64>, beta: f64, mode: BoundMode) -> Self {
        Self {
            rho,
            beta,
            mode,
            upper: None,
            limit: None,
            bracket: None,
            argmax: None,
            formulas: Vec::new(),
            converged: true,
            flagged: false,
        }
    }

    /// Formula tags joined with `+`, e.g. `prop1+prop2`.
    pub fn formula_tag(&self) -> String {
        self.formulas.iter().map(|f| f.as_str()).collect::<Vec<_>>().join("+")
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(param("rho", format!("must be finite and >= 0, got {rho}")));
    }
    Ok(())
}

/// Sum-constraint upper bound on capacity at SNR `rho`.
pub fn upper_bound_sum(
    spec: &MimoChannelSpec,
    rho: f64,
    beta: f64,
    quad_points: usize,
    opts: SolverOptions,
) -> Result<BoundReport> {
    check_rho(rho)?;
    check_beta(beta)?;
    let obj = SumUpperObjective::new(spec, rho, quad_points)?;
    let sol = maximize(&obj, 1.0 / beta, opts);
    let mut r = BoundReport::new(Some(rho), beta, BoundMode::Sum);
    r.upper = Some(sol.value.max(0.0));
    r.argmax = Some(Argmax::Allocation(DutyAllocation(sol.argmax)));
    r.formulas.push(FormulaTag::SumUpper);
    r.converged = sol.converged;
    Ok(r)
}

/// `lim C / rho^2` under sum constraints.
pub fn limit_sum(spec: &MimoChannelSpec, beta: f64, opts: SolverOptions) -> Result<BoundReport> {
    check_beta(beta)?;
    let obj = SumLimitObjective::new(spec);
    let sol = maximize(&obj, 1.0 / beta, opts);
    let mut r = BoundReport::new(None, beta, BoundMode::Sum);
    r.limit = Some(sol.value.max(0.0));
    r.argmax = Some(Argmax::Allocation(DutyAllocation(sol.argmax)));
    r.formulas.push(FormulaTag::SumLimit);
    r.converged = sol.converged;
    Ok(r)
}

/// `max_{0 <= a <= 1/beta} sum_l { a lambda_l - a^2 R_l(0)^2 }` and its maximizer.
fn separable_inner_max(receive: &[AutocorrModel], beta: f64) -> (f64, f64) {
    let (lambda, r0_sq) = receive.iter().fold((0.0, 0.0), |(lam, sq), m| {
        let s = m.corr_stats();
        (lam + s.lambda, sq + s.r0 * s.r0)
    });
    let a = (lambda / (2.0 * r0_sq)).clamp(0.0, 1.0 / beta);
    (a * lambda - a * a * r0_sq, a)
}

/// Sum-constraint bound and limit for a transmit-separable channel: only the
/// strongest antenna is used.
pub fn separable_sum_bounds(sep: &SeparableStructure, rho: f64, beta: f64, quad_points: usize) -> Result<BoundReport> {
    check_rho(rho)?;
    check_beta(beta)?;
    let amax = sep.alpha_max();
    let terms = sep
        .receive_models()
        .iter()
        .map(|m| Ok((amax * rho * m.r0(), m.information_rate(amax * rho, quad_points)?)))
        .collect::<Result<Vec<_>>>()?;
    let objective = |a: f64| {
        terms
            .iter()
            .map(|(snr, info)| (a * snr).ln_1p() - a * info)
            .sum::<f64>()
    };
    let (a_upper, upper) = golden_max(objective, 0.0, 1.0 / beta, 1e-13);

    let (inner, _) = separable_inner_max(sep.receive_models(), beta);
    let mut r = BoundReport::new(Some(rho), beta, BoundMode::Sum);
    r.upper = Some(upper.max(0.0));
    r.limit = Some(0.5 * amax * amax * inner);
    r.argmax = Some(Argmax::Duty(a_upper));
    r.formulas.push(FormulaTag::SeparableSum);
    Ok(r)
}

/// `alpha_max^2 sum_l phi_l` for a nonephemeral transmit-separable channel without average constraint.
pub fn limit_sum_separable_noneph(sep: &SeparableStructure) -> Result<f64> {
    sep.require_nonephemeral()?;
    let amax = sep.alpha_max();
    Ok(amax * amax * phi_sum(sep.receive_models()))
}

/// Individual-constraint limit for a transmit-separable channel: the same
/// on-off signal on every antenna.
pub fn limit_indiv_separable(sep: &SeparableStructure, beta: f64) -> Result<BoundReport> {
    check_beta(beta)?;
    let (inner, a) = separable_inner_max(sep.receive_models(), beta);
    let total = sep.alpha_sum();
    let mut r = BoundReport::new(None, beta, BoundMode::Individual);
    r.limit = Some(0.5 * total * total * inner);
    r.argmax = Some(Argmax::Duty(a));
    r.formulas.push(FormulaTag::SeparableIndividual);
    Ok(r)
}

/// `(sum_k alpha_k)^2 sum_l phi_l` for a nonephemeral transmit-separable channel without average constraint.
pub fn limit_indiv_separable_noneph(sep: &SeparableStructure) -> Result<f64> {
    sep.require_nonephemeral()?;
    let total = sep.alpha_sum();
    Ok(total * total * phi_sum(sep.receive_models()))
}

fn phi_sum(models: &[AutocorrModel]) -> f64 {
    models.iter().map(|m| m.corr_stats().phi).sum()
}

/// `lim sup` and `lim inf` coefficients of `C / rho^2` under individual peak
/// constraints for a nonephemeral channel.
pub fn indiv_bounds_noneph(spec: &MimoChannelSpec) -> Result<LimitBracket> {
    spec.require_nonephemeral()?;
    let nt = spec.nt();
    let upper_coeff = nt as f64 * phi_sum(spec.models());
    let horizon = spec
        .models()
        .iter()
        .map(|m| m.horizon(SERIES_CUTOFF))
        .max()
        .unwrap_or(0);
    let mut lower_coeff = 0.0;
    for l in 0..spec.nr() {
        for n in 1..=horizon as i64 {
            let s: num_complex::Complex64 = (0..nt).map(|k| spec.model(k, l).eval(n)).sum();
            lower_coeff += s.norm_sqr();
        }
    }
    Ok(LimitBracket {
        upper_coeff,
        lower_coeff,
    })
}

/// Individual-constraint bounds for a general MIMO channel: the sum-constraint
/// bound at `N_T * rho` (optional), the separable limit when the channel
/// factors, or the nonephemeral bracket when `beta = 1`.
pub fn individual_bounds(
    spec: &MimoChannelSpec,
    rho: Option<f64>,
    beta: f64,
    quad_points: usize,
    opts: SolverOptions,
) -> Result<BoundReport> {
    check_beta(beta)?;
    let mut r = BoundReport::new(rho, beta, BoundMode::Individual);
    if let Some(rho) = rho {
        let scaled = upper_bound_sum(spec, rho * spec.nt() as f64, beta, quad_points, opts)?;
        r.upper = scaled.upper;
        r.converged = scaled.converged;
        r.formulas.push(FormulaTag::ScaledSumUpper);
    }
    if let Some(sep) = spec.detect_transmit_separable(DEFAULT_SEPARABILITY_TOL) {
        let lim = limit_indiv_separable(&sep, beta)?;
        r.limit = lim.limit;
        r.argmax = lim.argmax;
        r.formulas.push(FormulaTag::SeparableIndividual);
    } else if beta == 1.0 && spec.classify().nonephemeral {
        r.bracket = Some(indiv_bounds_noneph(spec)?);
        r.formulas.push(FormulaTag::NonephemeralIndividualBracket);
    } else {
        r.flagged = true;
    }
    Ok(r)
}

/// Delay-spread bounds via the equivalent MISO channel.
///
/// The finite-SNR upper bound (when `rho` is given) is the sum-constraint
/// bound at `K * rho` on the MISO channel. The limit is identified for
/// delay-separable taps; nonephemeral taps with `beta = 1` get a bracket.
pub fn ds_bounds(
    ds: &DelaySpreadSpec,
    rho: Option<f64>,
    beta: f64,
    quad_points: usize,
    opts: SolverOptions,
) -> Result<BoundReport> {
    let miso = ds.to_miso();
    let mut r = individual_bounds(&miso, rho, beta, quad_points, opts)?;
    r.mode = BoundMode::DelaySpread;
    for f in &mut r.formulas {
        *f = match *f {
            FormulaTag::SeparableIndividual => FormulaTag::DelaySeparable,
            FormulaTag::NonephemeralIndividualBracket => FormulaTag::NonephemeralDelayBracket,
            other => other,
        };
    }
    Ok(r)
}

/// `(sum_k alpha_k)^2 phi` for a nonephemeral delay-separable channel without average constraint.
pub fn ds_limit_separable_noneph(ds: &DelaySpreadSpec) -> Result<f64> {
    let sep = ds
        .to_miso()
        .detect_transmit_separable(DEFAULT_SEPARABILITY_TOL)
        .ok_or_else(|| param("taps", "channel is not delay separable"))?;
    limit_indiv_separable_noneph(&sep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use approx::assert_abs_diff_eq;

    const PHI_09: f64 = 0.81 / 0.19;
    const PHI_08: f64 = 0.64 / 0.36;

    fn gm(a: f64) -> AutocorrModel {
        AutocorrModel::gauss_markov(a, 1.0).unwrap()
    }

    fn iid() -> AutocorrModel {
        AutocorrModel::iid(1.0).unwrap()
    }

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn iid_siso_upper_bound() {
        let spec = MimoChannelSpec::siso(iid()).unwrap();
        let r = upper_bound_sum(&spec, 1.0, 1.0, 4096, opts()).unwrap();
        // stationarity rho / (1 + rho a) = log(1 + rho)
        let a_star = 1.0 / std::f64::consts::LN_2 - 1.0;
        let u_star = a_star.ln_1p() - a_star * std::f64::consts::LN_2;
        assert_abs_diff_eq!(u_star, 0.059_660_101_141_609_63, epsilon = 1e-15);
        assert_abs_diff_eq!(r.upper.unwrap(), u_star, epsilon = 1e-12);
        match &r.argmax {
            Some(Argmax::Allocation(a)) => assert_abs_diff_eq!(a.0[0], a_star, epsilon = 1e-6),
            other => panic!("{other:?}"),
        }
        assert!(r.converged);
        assert_eq!(r.formula_tag(), "prop1");
    }

    #[test]
    fn upper_bound_vanishes_at_zero_snr() {
        let spec = MimoChannelSpec::new(2, 1, vec![gm(0.9), iid()]).unwrap();
        assert_eq!(upper_bound_sum(&spec, 0.0, 1.0, 256, opts()).unwrap().upper, Some(0.0));
        let tiny = upper_bound_sum(&spec, 1e-6, 1.0, 256, opts()).unwrap().upper.unwrap();
        assert!(tiny < 1e-10);
    }

    #[test]
    fn two_antenna_upper_matches_grid() {
        let spec = MimoChannelSpec::new(2, 1, vec![gm(0.9), iid()]).unwrap();
        let r = upper_bound_sum(&spec, 0.1, 1.0, 4096, opts()).unwrap();
        let g = grid_oracle(&spec, OracleObjective::SumUpper, 0.1, 1.0, 400, 4096).unwrap();
        assert!(r.upper.unwrap() >= g - 1e-15);
        assert_abs_diff_eq!(r.upper.unwrap(), g, epsilon = 1e-6);
    }

    #[test]
    fn limit_sum_examples() {
        let r = limit_sum(&MimoChannelSpec::siso(gm(0.9)).unwrap(), 1.0, opts()).unwrap();
        assert_abs_diff_eq!(r.limit.unwrap(), PHI_09, epsilon = 1e-10);
        match &r.argmax {
            Some(Argmax::Allocation(a)) => assert_abs_diff_eq!(a.0[0], 1.0, epsilon = 1e-9),
            other => panic!("{other:?}"),
        }

        let r = limit_sum(&MimoChannelSpec::siso(iid()).unwrap(), 1.0, opts()).unwrap();
        assert_abs_diff_eq!(r.limit.unwrap(), 0.125, epsilon = 1e-12);

        let spec = MimoChannelSpec::new(2, 1, vec![gm(0.9), iid()]).unwrap();
        let r = limit_sum(&spec, 1.0, opts()).unwrap();
        assert_abs_diff_eq!(r.limit.unwrap(), PHI_09, epsilon = 1e-10);
        match &r.argmax {
            Some(Argmax::Allocation(a)) => {
                assert_abs_diff_eq!(a.0[0], 1.0, epsilon = 1e-9);
                assert_abs_diff_eq!(a.0[1], 0.0, epsilon = 1e-9);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(r.formula_tag(), "prop2");
    }

    #[test]
    fn separable_sum_examples() {
        let sep = SeparableStructure::new(vec![1.0, 0.5], vec![gm(0.9)]).unwrap();
        let r = separable_sum_bounds(&sep, 0.1, 1.0, 4096).unwrap();
        assert_abs_diff_eq!(r.limit.unwrap(), PHI_09, epsilon = 1e-12);
        let prop2 = limit_sum(&sep.expand().unwrap(), 1.0, opts()).unwrap().limit.unwrap();
        assert_abs_diff_eq!(r.limit.unwrap(), prop2, epsilon = 1e-12 * PHI_09);
        // single-antenna restriction of the general bound
        let general = upper_bound_sum(&sep.expand().unwrap(), 0.1, 1.0, 4096, opts()).unwrap();
        assert!(r.upper.unwrap() <= general.upper.unwrap() + 1e-12);
        assert_eq!(separable_sum_bounds(&sep, 0.0, 1.0, 256).unwrap().upper, Some(0.0));
    }

    #[test]
    fn separable_nonephemeral_limits() {
        let one = SeparableStructure::new(vec![1.0, 0.5], vec![gm(0.9)]).unwrap();
        assert_abs_diff_eq!(
            limit_sum_separable_noneph(&one).unwrap(),
            4.263_157_894_736_842,
            epsilon = 1e-12
        );
        let two = SeparableStructure::new(vec![1.0, 0.5], vec![gm(0.9), gm(0.9)]).unwrap();
        assert_abs_diff_eq!(
            limit_sum_separable_noneph(&two).unwrap(),
            8.526_315_789_473_684,
            epsilon = 1e-12
        );
        let scaled = SeparableStructure::new(vec![2.0, 1.0], vec![gm(0.9)]).unwrap();
        assert_abs_diff_eq!(
            limit_sum_separable_noneph(&scaled).unwrap(),
            4.0 * PHI_09,
            epsilon = 1e-12
        );
        let eph = SeparableStructure::new(vec![1.0], vec![iid()]).unwrap();
        assert!(matches!(
            limit_sum_separable_noneph(&eph),
            Err(Error::Ephemeral { k: 0, l: 0, .. })
        ));
        assert!(limit_indiv_separable_noneph(&eph).is_err());
    }

    #[test]
    fn individual_separable_examples() {
        let sep = SeparableStructure::new(vec![1.0, 0.5], vec![gm(0.9)]).unwrap();
        let r = limit_indiv_separable(&sep, 1.0).unwrap();
        assert_abs_diff_eq!(r.limit.unwrap(), 2.25 * PHI_09, epsilon = 1e-12);
        assert_abs_diff_eq!(r.limit.unwrap(), 9.592_105_263_157_894, epsilon = 1e-12);
        assert_abs_diff_eq!(
            limit_indiv_separable_noneph(&sep).unwrap(),
            2.25 * PHI_09,
            epsilon = 1e-12
        );

        let iid2 = SeparableStructure::new(vec![1.0, 1.0], vec![iid()]).unwrap();
        assert_abs_diff_eq!(
            limit_indiv_separable(&iid2, 1.0).unwrap().limit.unwrap(),
            0.5,
            epsilon = 1e-15
        );

        let single = SeparableStructure::new(vec![1.0], vec![gm(0.4), iid()]).unwrap();
        let ind = limit_indiv_separable(&single, 2.0).unwrap().limit.unwrap();
        let sum = limit_sum(&single.expand().unwrap(), 2.0, opts())
            .unwrap()
            .limit
            .unwrap();
        assert_abs_diff_eq!(ind, sum, epsilon = 1e-12);

        let siso = SeparableStructure::new(vec![1.0], vec![gm(0.9)]).unwrap();
        assert_abs_diff_eq!(limit_indiv_separable_noneph(&siso).unwrap(), PHI_09, epsilon = 1e-15);
    }

    #[test]
    fn nonephemeral_bracket_examples() {
        let twin = MimoChannelSpec::new(2, 1, vec![gm(0.9), gm(0.9)]).unwrap();
        let b = indiv_bounds_noneph(&twin).unwrap();
        assert_abs_diff_eq!(b.upper_coeff, 4.0 * PHI_09, epsilon = 1e-12);
        assert_abs_diff_eq!(b.lower_coeff, 4.0 * PHI_09, epsilon = 1e-10);
        assert_abs_diff_eq!(b.upper_coeff, 17.052_631_578_947_37, epsilon = 1e-12);

        let mixed = MimoChannelSpec::new(2, 1, vec![gm(0.9), iid()]).unwrap();
        assert!(matches!(
            indiv_bounds_noneph(&mixed),
            Err(Error::Ephemeral { k: 1, l: 0, .. })
        ));

        let b = indiv_bounds_noneph(&MimoChannelSpec::siso(gm(0.9)).unwrap()).unwrap();
        assert_abs_diff_eq!(b.upper_coeff, PHI_09, epsilon = 1e-12);
        assert_abs_diff_eq!(b.lower_coeff, PHI_09, epsilon = 1e-10);
    }

    #[test]
    fn delay_spread_examples() {
        let twins = DelaySpreadSpec::new(vec![gm(0.8), gm(0.8)]).unwrap();
        let r = ds_bounds(&twins, None, 1.0, 4096, opts()).unwrap();
        assert_abs_diff_eq!(r.limit.unwrap(), 4.0 * PHI_08, epsilon = 1e-12);
        assert_abs_diff_eq!(r.limit.unwrap(), 7.111_111_111_111_111, epsilon = 1e-12);
        assert_eq!(r.formula_tag(), "cor8");
        assert_abs_diff_eq!(
            ds_limit_separable_noneph(&twins).unwrap(),
            r.limit.unwrap(),
            epsilon = 1e-12
        );

        let one = DelaySpreadSpec::new(vec![gm(0.9)]).unwrap();
        assert_abs_diff_eq!(
            ds_bounds(&one, None, 1.0, 4096, opts()).unwrap().limit.unwrap(),
            PHI_09,
            epsilon = 1e-12
        );

        let mixed = DelaySpreadSpec::new(vec![gm(0.9), gm(0.8)]).unwrap();
        let r = ds_bounds(&mixed, Some(0.1), 1.0, 4096, opts()).unwrap();
        assert_eq!(r.formula_tag(), "prop1-scaled+cor10");
        let b = r.bracket.unwrap();
        assert_abs_diff_eq!(b.upper_coeff, 2.0 * (PHI_09 + PHI_08), epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper_coeff, 12.081_871_345_029_24, epsilon = 1e-10);
        let partial: f64 = (1..10_000).map(|n| (0.9f64.powi(n) + 0.8f64.powi(n)).powi(2)).sum();
        assert_abs_diff_eq!(b.lower_coeff, partial, epsilon = 1e-12);
        assert_abs_diff_eq!(partial, 11.183_792_815_371_772, epsilon = 1e-12);
        assert!(r.upper.unwrap() > 0.0);

        let flagged = DelaySpreadSpec::new(vec![gm(0.9), iid()]).unwrap();
        let r = ds_bounds(&flagged, Some(0.1), 1.0, 4096, opts()).unwrap();
        assert!(r.flagged && r.limit.is_none() && r.bracket.is_none() && r.upper.is_some());
    }

    #[test]
    fn scale_ambiguity_is_invisible() {
        let sep = SeparableStructure::new(vec![1.0, 0.5, 0.25], vec![gm(0.9), gm(0.6)]).unwrap();
        for c in [0.3, 2.0, 7.5] {
            let other = sep.rescaled(c).unwrap();
            let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
            assert!(rel(
                limit_sum_separable_noneph(&sep).unwrap(),
                limit_sum_separable_noneph(&other).unwrap()
            ));
            assert!(rel(
                limit_indiv_separable_noneph(&sep).unwrap(),
                limit_indiv_separable_noneph(&other).unwrap()
            ));
            for beta in [1.0, 1.7] {
                assert!(rel(
                    limit_indiv_separable(&sep, beta).unwrap().limit.unwrap(),
                    limit_indiv_separable(&other, beta).unwrap().limit.unwrap()
                ));
                assert!(rel(
                    separable_sum_bounds(&sep, 0.1, beta, 512).unwrap().limit.unwrap(),
                    separable_sum_bounds(&other, 0.1, beta, 512).unwrap().limit.unwrap()
                ));
            }
        }
    }

    #[test]
    fn receive_summands_are_additive() {
        let spec = MimoChannelSpec::new(2, 2, vec![gm(0.9), gm(0.5), iid(), gm(0.2)]).unwrap();
        let obj = SumLimitObjective::new(&spec);
        let a = [0.4, 0.35];
        let total = obj.value(&a);
        assert_abs_diff_eq!(total, obj.per_receive(&a, 0) + obj.per_receive(&a, 1), epsilon = 1e-15);

        // duplicating every receive column doubles the optimum
        let single = MimoChannelSpec::new(2, 1, vec![gm(0.9), iid()]).unwrap();
        let double = MimoChannelSpec::new(2, 2, vec![gm(0.9), gm(0.9), iid(), iid()]).unwrap();
        let l1 = limit_sum(&single, 1.0, opts()).unwrap().limit.unwrap();
        let l2 = limit_sum(&double, 1.0, opts()).unwrap().limit.unwrap();
        assert_abs_diff_eq!(l2, 2.0 * l1, epsilon = 1e-9);
    }
}
