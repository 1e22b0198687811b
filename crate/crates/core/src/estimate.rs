use std::fmt;

use serde::Serialize;

/// Norm used by the extremal dependence measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            Norm::L1 => x.abs() + y.abs(),
            Norm::L2 => x.hypot(y),
            Norm::Linf => x.abs().max(y.abs()),
        }
    }

    /// `||(x, y)||^2`, computed without a square root where possible.
    pub fn squared(self, x: f64, y: f64) -> f64 {
        match self {
            Norm::L1 => {
                let s = x.abs() + y.abs();
                s * s
            }
            Norm::L2 => x * x + y * y,
            Norm::Linf => {
                let m = x.abs().max(y.abs());
                m * m
            }
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

/// Which estimator produced a [`TailEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorId {
    TdcEmpirical,
    TdcQuasiSpectral,
    TdcQuasiSpectralHill,
    CteAleph3,
    CteAleph4,
    Edm(Norm),
}

impl EstimatorId {
    /// True for estimators of a conditional probability (range `[0, 1]`).
    pub fn is_probability(self) -> bool {
        matches!(
            self,
            EstimatorId::TdcEmpirical
                | EstimatorId::TdcQuasiSpectral
                | EstimatorId::TdcQuasiSpectralHill
        )
    }

    pub fn name(self) -> String {
        match self {
            EstimatorId::TdcEmpirical => "tdc_empirical".into(),
            EstimatorId::TdcQuasiSpectral => "tdc_quasispectral".into(),
            EstimatorId::TdcQuasiSpectralHill => "tdc_quasispectral_hill".into(),
            EstimatorId::CteAleph3 => "cte_aleph3".into(),
            EstimatorId::CteAleph4 => "cte_aleph4".into(),
            EstimatorId::Edm(norm) => format!("edm_{norm}"),
        }
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Output of a tail estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEstimate {
    pub estimator_id: EstimatorId,
    pub value: f64,
    /// Plug-in asymptotic variance of `sqrt(k) * (value - limit)` at a fixed
    /// level; the random-threshold correction is not included.
    pub plugin_variance: Option<f64>,
    pub k: usize,
    /// Sample size the estimate was computed from.
    pub n: usize,
    pub alpha_used: Option<f64>,
    /// `k` of the Hill estimate when `alpha_used` came from the data.
    pub k_alpha: Option<usize>,
    /// Threshold order statistic (X margin, or the norm for EDM).
    pub threshold: f64,
    pub notes: Vec<&'static str>,
}
