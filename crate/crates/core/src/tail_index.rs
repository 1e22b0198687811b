//! Hill estimator of the tail index of the X margin.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sample::OrderedView;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HillEstimate {
    /// Estimate of the positive index `alpha` (Pareto(alpha) gives ~alpha).
    pub alpha_hat: f64,
    pub k_alpha: usize,
}

/// `alpha_hat = k_alpha / sum_{i<k_alpha} log(X_{n:n-i} / X_{n:n-k_alpha})`.
///
/// Values tied with the threshold contribute `log 1 = 0`, so the sum runs
/// over the strict exceedances in ascending index order.
pub fn hill_estimate(view: &OrderedView<'_>, k_alpha: usize) -> Result<HillEstimate> {
    let t = view.threshold(k_alpha)?;
    if t <= 0.0 {
        return Err(Error::NonPositiveThreshold { threshold: t });
    }
    let log_sum: f64 = view
        .sample()
        .xs()
        .iter()
        .filter(|&&x| x > t)
        .map(|&x| (x / t).ln())
        .fold(0.0, |acc, l| acc + l);
    if log_sum <= 0.0 {
        return Err(Error::ZeroSpread);
    }
    let alpha_hat = k_alpha as f64 / log_sum;
    if !alpha_hat.is_finite() {
        return Err(Error::ZeroSpread);
    }
    Ok(HillEstimate { alpha_hat, k_alpha })
}
