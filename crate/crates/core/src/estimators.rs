//! Estimators of conditional-on-extreme quantities.
//!
//! All of them threshold at the order statistic `X_{n:n-k}` (the EDM uses
//! the order statistics of the norm instead) and divide by the nominal `k`,
//! even when ties at the threshold leave fewer than `k` strict exceedances.
//!
//! The empirical conditional tail probability counts joint exceedances. The
//! quasi-spectral one replaces the indicator `1{Y > yX}` by the weight
//! `(Y / (yX) ∧ 1)^alpha` on every X-exceedance; its limit is the same but
//! its asymptotic variance `E[(Θ/y ∧ 1)^{2α}]` is smaller than
//! `E[(Θ/y ∧ 1)^α]` whenever `y >= 1`.
//!
//! Plug-in variances are fixed-level approximations evaluated at `s = 1`:
//! the correction terms that appear when the level is the random order
//! statistic are not included.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::estimate::{EstimatorId, Norm, TailEstimate};
use crate::sample::{exceeding, BivariateSample, OrderedView};
use crate::tail_index::hill_estimate;
use crate::tep::{
    edm_spec, joint_exceedance_spec, quasi_spectral_spec, ratio_spec, second_coordinate_spec,
    Squared, TailFunctionSpec,
};

const NOTE_ALEPH3_VARIANCE: &str = "plug-in variance is meaningful only when alpha > 2";
const NOTE_EDM_THRESHOLD: &str = "thresholded on norm order statistics, not on the X margin";
const NOTE_FIXED_LEVEL: &str = "fixed-level plug-in variance; random-threshold terms omitted";

fn check_y(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidY { y })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha { alpha })
    }
}

fn positive_threshold(view: &OrderedView<'_>, k: usize) -> Result<f64> {
    let t = view.threshold(k)?;
    if t > 0.0 {
        Ok(t)
    } else {
        Err(Error::NonPositiveThreshold { threshold: t })
    }
}

fn estimate(id: EstimatorId, view: &OrderedView<'_>, k: usize, threshold: f64) -> TailEstimate {
    TailEstimate {
        estimator_id: id,
        value: f64::NAN,
        plugin_variance: None,
        k,
        n: view.len(),
        alpha_used: None,
        k_alpha: None,
        threshold,
        notes: vec![NOTE_FIXED_LEVEL],
    }
}

/// Empirical conditional tail probability:
/// `(1/k) sum_j 1{Y_j > y X_{n:n-k}, X_j > X_{n:n-k}}`.
///
/// At `y = 1` this is the empirical tail dependence coefficient.
pub fn tdc_empirical(view: &OrderedView<'_>, k: usize, y: f64) -> Result<TailEstimate> {
    check_y(y)?;
    let t = view.threshold(k)?;
    let value = joint_exceedance_spec(y).weighted_sum(view.sample(), t, t) / k as f64;
    Ok(TailEstimate {
        value,
        // psi is an indicator, so psi^2 = psi.
        plugin_variance: Some(value),
        ..estimate(EstimatorId::TdcEmpirical, view, k, t)
    })
}

/// Quasi-spectral conditional tail probability with known `alpha`:
/// `(1/k) sum_j (Y_j / (y X_j) ∧ 1)^alpha 1{X_j > X_{n:n-k}}`.
pub fn tdc_quasispectral(
    view: &OrderedView<'_>,
    k: usize,
    y: f64,
    alpha: f64,
) -> Result<TailEstimate> {
    check_y(y)?;
    check_alpha(alpha)?;
    let t = view.threshold(k)?;
    let sample = view.sample();
    if let Some(index) = exceeding(sample.xs(), t)
        .into_iter()
        .find(|&j| sample.xs()[j] <= 0.0)
    {
        return Err(Error::NonPositiveX { index });
    }
    let spec = quasi_spectral_spec(y, alpha);
    let kf = k as f64;
    let value = spec.weighted_sum(sample, t, t) / kf;
    let variance =
        TailFunctionSpec::new(Squared(spec.weight), spec.region).weighted_sum(sample, t, t) / kf;
    Ok(TailEstimate {
        value,
        plugin_variance: Some(variance),
        alpha_used: Some(alpha),
        ..estimate(EstimatorId::TdcQuasiSpectral, view, k, t)
    })
}

/// Quasi-spectral conditional tail probability with `alpha` replaced by the
/// Hill estimate on the top `k_alpha` order statistics.
pub fn tdc_quasispectral_hill(
    view: &OrderedView<'_>,
    k: usize,
    y: f64,
    k_alpha: usize,
) -> Result<TailEstimate> {
    let hill = hill_estimate(view, k_alpha)?;
    let est = tdc_quasispectral(view, k, y, hill.alpha_hat)?;
    Ok(TailEstimate {
        estimator_id: EstimatorId::TdcQuasiSpectralHill,
        k_alpha: Some(k_alpha),
        ..est
    })
}

/// How a conditional tail curve is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum CurveMethod {
    Empirical,
    QuasiSpectral { alpha: f64 },
    QuasiSpectralHill { k_alpha: usize },
}

/// Estimated `y ↦ lim P(Y > yx | X > x)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondTailCurve {
    pub y_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub estimator_id: EstimatorId,
    pub k: usize,
    pub alpha_used: Option<f64>,
}

/// Conditional tail distribution on a strictly increasing grid of `y > 0`.
pub fn cond_tail_curve(
    view: &OrderedView<'_>,
    k: usize,
    y_grid: &[f64],
    method: CurveMethod,
) -> Result<CondTailCurve> {
    let grid_ok = !y_grid.is_empty()
        && y_grid.iter().all(|&y| y > 0.0 && y.is_finite())
        && y_grid.windows(2).all(|w| w[0] < w[1]);
    if !grid_ok {
        return Err(Error::InvalidYGrid);
    }
    let (id, alpha) = match method {
        CurveMethod::Empirical => (EstimatorId::TdcEmpirical, None),
        CurveMethod::QuasiSpectral { alpha } => (EstimatorId::TdcQuasiSpectral, Some(alpha)),
        CurveMethod::QuasiSpectralHill { k_alpha } => (
            EstimatorId::TdcQuasiSpectralHill,
            Some(hill_estimate(view, k_alpha)?.alpha_hat),
        ),
    };
    let values = y_grid
        .iter()
        .map(|&y| match alpha {
            None => tdc_empirical(view, k, y).map(|e| e.value),
            Some(a) => tdc_quasispectral(view, k, y, a).map(|e| e.value),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CondTailCurve {
        y_grid: y_grid.to_vec(),
        values,
        estimator_id: id,
        k,
        alpha_used: alpha,
    })
}

/// `(1/k) sum_j (Y_j / X_{n:n-k}) 1{X_j > X_{n:n-k}}`, estimating
/// `lim E[Y/x | X > x]`.
pub fn cte_aleph3(view: &OrderedView<'_>, k: usize) -> Result<TailEstimate> {
    let t = positive_threshold(view, k)?;
    let spec = second_coordinate_spec();
    let kf = k as f64;
    let value = spec.weighted_sum(view.sample(), t, t) / kf;
    let variance =
        TailFunctionSpec::new(Squared(spec.weight), spec.region).weighted_sum(view.sample(), t, t)
            / kf;
    let mut est = estimate(EstimatorId::CteAleph3, view, k, t);
    est.notes.push(NOTE_ALEPH3_VARIANCE);
    Ok(TailEstimate {
        value,
        plugin_variance: Some(variance),
        ..est
    })
}

/// `alpha/(alpha-1) * (1/k) sum_j (Y_j / X_j) 1{X_j > X_{n:n-k}}`, the
/// quasi-spectral estimator of the same limit. Requires `alpha > 1`.
pub fn cte_aleph4(view: &OrderedView<'_>, k: usize, alpha: f64) -> Result<TailEstimate> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::AlphaNotAboveOne { alpha });
    }
    let t = positive_threshold(view, k)?;
    let spec = ratio_spec();
    let kf = k as f64;
    let factor = alpha / (alpha - 1.0);
    let mean_ratio = spec.weighted_sum(view.sample(), t, t) / kf;
    let mean_sq =
        TailFunctionSpec::new(Squared(spec.weight), spec.region).weighted_sum(view.sample(), t, t)
            / kf;
    Ok(TailEstimate {
        value: factor * mean_ratio,
        plugin_variance: Some(factor * factor * mean_sq),
        alpha_used: Some(alpha),
        ..estimate(EstimatorId::CteAleph4, view, k, t)
    })
}

/// [`cte_aleph4`] with `alpha` from the Hill estimator on `k_alpha`.
pub fn cte_aleph4_hill(view: &OrderedView<'_>, k: usize, k_alpha: usize) -> Result<TailEstimate> {
    let hill = hill_estimate(view, k_alpha)?;
    let est = cte_aleph4(view, k, hill.alpha_hat)?;
    Ok(TailEstimate {
        k_alpha: Some(k_alpha),
        ..est
    })
}

/// Extrapolated conditional tail expectation at a small probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CteExtrapolation {
    pub p: f64,
    pub theta_hat: f64,
    pub aleph_used: f64,
    pub alpha_used: f64,
    /// `(k / (n p))^{1/alpha}`; at least 1 when `p <= k/n`.
    pub extrapolation_factor: f64,
    pub threshold: f64,
    pub k: usize,
    pub n: usize,
}

/// `theta_hat(p) = aleph * X_{n:n-k} * (k/(np))^{1/alpha}`, the estimate of
/// `E[Y | X > U(1/p)]`.
pub fn theta_hat(
    view: &OrderedView<'_>,
    k: usize,
    p: f64,
    aleph: f64,
    alpha: f64,
) -> Result<CteExtrapolation> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidP { p });
    }
    check_alpha(alpha)?;
    let t = view.threshold(k)?;
    let n = view.len();
    // (k/n)/p rather than k/(n p): p = k/n then gives exactly 1.
    let ratio = (k as f64 / n as f64) / p;
    let extrapolation_factor = ratio.powf(alpha.recip());
    Ok(CteExtrapolation {
        p,
        theta_hat: aleph * t * extrapolation_factor,
        aleph_used: aleph,
        alpha_used: alpha,
        extrapolation_factor,
        threshold: t,
        k,
        n,
    })
}

/// Extremal dependence measure
/// `(1/k) sum_j X_j Y_j / ||(X_j, Y_j)||^2 1{||(X_j, Y_j)|| > R_{n:n-k}}`
/// where `R` are the order statistics of the norms.
pub fn edm_estimate(sample: &BivariateSample, k: usize, norm: Norm) -> Result<TailEstimate> {
    let n = sample.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidK {
            k,
            n,
            max: n.saturating_sub(1),
        });
    }
    let mut radii: Vec<f64> = sample.pairs().map(|(x, y)| norm.eval(x, y)).collect();
    radii.sort_by(f64::total_cmp);
    let r = radii[n - k - 1];
    let spec = edm_spec(norm);
    let kf = k as f64;
    let value = spec.weighted_sum(sample, r, r) / kf;
    let variance =
        TailFunctionSpec::new(Squared(spec.weight), spec.region).weighted_sum(sample, r, r) / kf;
    Ok(TailEstimate {
        estimator_id: EstimatorId::Edm(norm),
        value,
        plugin_variance: Some(variance),
        k,
        n,
        alpha_used: None,
        k_alpha: None,
        threshold: r,
        notes: vec![NOTE_FIXED_LEVEL, NOTE_EDM_THRESHOLD],
    })
}

/// Normal interval `value ± z sqrt(variance / k)`, clipped to `[0, 1]` for
/// probabilities and to `[0, ∞)` otherwise.
pub fn confidence_interval(est: &TailEstimate, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidConfidence { level });
    }
    let variance = est.plugin_variance.ok_or(Error::MissingVariance)?;
    let upper_bound = if est.estimator_id.is_probability() {
        1.0
    } else {
        f64::INFINITY
    };
    normal_interval(est.value, variance, est.k, level, upper_bound)
}

/// `value ± z sqrt(variance / k)` clipped to `[0, upper_bound]`.
pub fn normal_interval(
    value: f64,
    variance: f64,
    k: usize,
    level: f64,
    upper_bound: f64,
) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidConfidence { level });
    }
    let z = Normal::standard().inverse_cdf((1.0 + level) / 2.0);
    let half = z * (variance / k as f64).sqrt();
    let lo = (value - half).clamp(0.0, upper_bound);
    let hi = (value + half).clamp(0.0, upper_bound);
    Ok((lo, hi))
}
