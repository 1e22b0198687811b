//! Samplers for the two study models and a reproducible Monte Carlo harness.
//!
//! Randomness comes from ChaCha8. A run with base seed `s` draws replication
//! `r` from the generator keyed by `seed_from_u64(s)` on stream `r`, so
//! replications never share a stream and the result does not depend on how
//! replications are scheduled across threads.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::estimators::{
    cte_aleph3, cte_aleph4, tdc_empirical, tdc_quasispectral, tdc_quasispectral_hill,
};
use crate::sample::{k_from_fraction, BivariateSample};
use crate::tail_index::hill_estimate;

/// Data-generating model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    /// `Y = phi X + sigma |Z|` with `X` standard Pareto(alpha) and `Z ~ N(0,1)`.
    LinearPareto { phi: f64, sigma: f64, alpha: f64 },
    /// `(X, Y) = sqrt(W) (|Z1|, |Z2|)` with `nu / W ~ chi^2(nu)` and
    /// `corr(Z1, Z2) = rho`.
    BivariateT { nu: f64, rho: f64 },
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Model::LinearPareto { phi, sigma, alpha } => {
                if !(phi > 0.0 && phi < 1.0) {
                    return Err(Error::InvalidModel(format!(
                        "phi = {phi} must lie in (0, 1)"
                    )));
                }
                // sigma = 0 is accepted as the degenerate Y = phi X.
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidModel(format!("sigma = {sigma} must be >= 0")));
                }
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidModel(format!("alpha = {alpha} must be > 0")));
                }
            }
            Model::BivariateT { nu, rho } => {
                if !(nu > 0.0 && nu.is_finite()) {
                    return Err(Error::InvalidModel(format!("nu = {nu} must be > 0")));
                }
                if !(rho > -1.0 && rho < 1.0) {
                    return Err(Error::InvalidModel(format!(
                        "rho = {rho} must lie in (-1, 1)"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Tail index of both margins.
    pub fn alpha(&self) -> f64 {
        match *self {
            Model::LinearPareto { alpha, .. } => alpha,
            Model::BivariateT { nu, .. } => nu,
        }
    }

    /// Limit of `P(Y > y x | X > x)` as `x → ∞`.
    ///
    /// For the bivariate t the folding adds the (tiny) `rho → -rho` term to
    /// the classical `2 (1 - T_{nu+1}(sqrt((nu+1)(1-rho)/(1+rho))))`; only
    /// `y = 1` is available there.
    pub fn conditional_tail_limit(&self, y: f64) -> Option<f64> {
        match *self {
            Model::LinearPareto { phi, alpha, .. } => Some((phi / y).min(1.0).powf(alpha)),
            Model::BivariateT { nu, rho } if y == 1.0 => {
                Some(t_tail_dependence(nu, rho) + t_tail_dependence(nu, -rho))
            }
            Model::BivariateT { .. } => None,
        }
    }

    /// Limit of `E[Y / x | X > x]`, where known in closed form.
    pub fn cte_limit(&self) -> Option<f64> {
        match *self {
            Model::LinearPareto { phi, alpha, .. } if alpha > 1.0 => {
                Some(alpha / (alpha - 1.0) * phi)
            }
            _ => None,
        }
    }

    /// Draws `n` pairs from `rng`.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<BivariateSample> {
        self.validate()?;
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        match *self {
            Model::LinearPareto { phi, sigma, alpha } => {
                let inv_alpha = alpha.recip();
                for _ in 0..n {
                    // 1 - U lies in (0, 1].
                    let u: f64 = 1.0 - rng.random::<f64>();
                    let x = u.powf(-inv_alpha);
                    let z: f64 = StandardNormal.sample(rng);
                    xs.push(x);
                    ys.push(phi * x + sigma * z.abs());
                }
            }
            Model::BivariateT { nu, rho } => {
                let chi = ChiSquared::new(nu).map_err(|e| Error::InvalidModel(e.to_string()))?;
                let cross = (1.0 - rho * rho).sqrt();
                for _ in 0..n {
                    let s: f64 = chi.sample(rng);
                    let w = nu / s;
                    let z1: f64 = StandardNormal.sample(rng);
                    let z2p: f64 = StandardNormal.sample(rng);
                    let z2 = rho * z1 + cross * z2p;
                    let r = w.sqrt();
                    xs.push(r * z1.abs());
                    ys.push(r * z2.abs());
                }
            }
        }
        BivariateSample::from_columns(xs, ys)
    }
}

fn t_tail_dependence(nu: f64, rho: f64) -> f64 {
    let arg = ((nu + 1.0) * (1.0 - rho) / (1.0 + rho)).sqrt();
    let t = StudentsT::new(0.0, 1.0, nu + 1.0).expect("nu + 1 > 0");
    2.0 * t.sf(arg)
}

/// A model, sample size and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelConfig {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(model: Model, n: usize, seed: u64) -> Self {
        Self { model, n, seed }
    }

    /// Generator for replication `rep`.
    pub fn rng(&self, rep: u64) -> ChaCha8Rng {
        replication_rng(self.seed, rep)
    }

    /// The sample with stream 0 of `seed`.
    pub fn sample(&self) -> Result<BivariateSample> {
        self.model.sample_with(self.n, &mut self.rng(0))
    }
}

/// ChaCha8 keyed by `seed`, positioned on stream `rep`.
pub fn replication_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Draws from the linear Pareto model. Deterministic given the seed.
pub fn sample_linear_pareto(config: &ModelConfig) -> Result<BivariateSample> {
    match config.model {
        Model::LinearPareto { .. } => config.sample(),
        _ => Err(Error::InvalidModel(
            "expected the linear Pareto model".into(),
        )),
    }
}

/// Draws from the folded bivariate t model. Deterministic given the seed.
pub fn sample_bivariate_t(config: &ModelConfig) -> Result<BivariateSample> {
    match config.model {
        Model::BivariateT { .. } => config.sample(),
        _ => Err(Error::InvalidModel("expected the bivariate t model".into())),
    }
}

/// Estimators that [`run_mc`] can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum McEstimator {
    TdcEmpirical,
    /// Quasi-spectral with the model's true alpha.
    TdcQuasiSpectral,
    /// Quasi-spectral with Hill alpha, one cell per `k_alpha` fraction.
    TdcQuasiSpectralHill,
    CteAleph3,
    /// With the model's true alpha.
    CteAleph4,
    /// Hill alpha, one cell per `k_alpha` fraction (the `k` fraction is unused).
    Hill,
}

impl McEstimator {
    pub const ALL: [McEstimator; 6] = [
        McEstimator::TdcEmpirical,
        McEstimator::TdcQuasiSpectral,
        McEstimator::TdcQuasiSpectralHill,
        McEstimator::CteAleph3,
        McEstimator::CteAleph4,
        McEstimator::Hill,
    ];

    pub fn name(self) -> &'static str {
        match self {
            McEstimator::TdcEmpirical => "tdc_empirical",
            McEstimator::TdcQuasiSpectral => "tdc_quasispectral",
            McEstimator::TdcQuasiSpectralHill => "tdc_quasispectral_hill",
            McEstimator::CteAleph3 => "cte_aleph3",
            McEstimator::CteAleph4 => "cte_aleph4",
            McEstimator::Hill => "hill",
        }
    }

    fn uses_k(self) -> bool {
        !matches!(self, McEstimator::Hill)
    }

    fn uses_k_alpha(self) -> bool {
        matches!(self, McEstimator::TdcQuasiSpectralHill | McEstimator::Hill)
    }
}

/// A Monte Carlo study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McConfig {
    pub model: ModelConfig,
    pub reps: usize,
    pub k_fractions: Vec<f64>,
    pub k_alpha_fractions: Vec<f64>,
    pub estimators: Vec<McEstimator>,
    /// Level `y` of the conditional tail probability.
    pub y: f64,
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        self.model.model.validate()?;
        if self.reps == 0 {
            return Err(Error::InvalidMc("reps must be at least 1".into()));
        }
        if self.model.n < 2 {
            return Err(Error::InvalidMc("n must be at least 2".into()));
        }
        let bad = |f: &f64| !(*f > 0.0 && *f < 1.0);
        if self.k_fractions.iter().any(bad) || self.k_alpha_fractions.iter().any(bad) {
            return Err(Error::InvalidMc("fractions must lie in (0, 1)".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidMc("no estimators requested".into()));
        }
        let needs_k = self.estimators.iter().any(|e| e.uses_k());
        if needs_k && self.k_fractions.is_empty() {
            return Err(Error::InvalidMc("no k fractions given".into()));
        }
        let needs_ka = self.estimators.iter().any(|e| e.uses_k_alpha());
        if needs_ka && self.k_alpha_fractions.is_empty() {
            return Err(Error::InvalidMc("no k_alpha fractions given".into()));
        }
        if !(self.y > 0.0 && self.y.is_finite()) {
            return Err(Error::InvalidY { y: self.y });
        }
        Ok(())
    }

    /// Cell keys in output order: estimator, then k fraction, then k_alpha fraction.
    pub fn cell_keys(&self) -> Vec<CellKey> {
        let estimators: BTreeSet<McEstimator> = self.estimators.iter().copied().collect();
        let mut keys = Vec::new();
        for est in estimators {
            let ks: Vec<Option<f64>> = if est.uses_k() {
                self.k_fractions.iter().map(|&f| Some(f)).collect()
            } else {
                vec![None]
            };
            let kas: Vec<Option<f64>> = if est.uses_k_alpha() {
                self.k_alpha_fractions.iter().map(|&f| Some(f)).collect()
            } else {
                vec![None]
            };
            for &k_frac in &ks {
                for &k_alpha_frac in &kas {
                    keys.push(CellKey {
                        estimator: est,
                        k_frac,
                        k_alpha_frac,
                    });
                }
            }
        }
        keys
    }

    fn truth(&self, est: McEstimator) -> Option<f64> {
        let model = self.model.model;
        match est {
            McEstimator::TdcEmpirical
            | McEstimator::TdcQuasiSpectral
            | McEstimator::TdcQuasiSpectralHill => model.conditional_tail_limit(self.y),
            McEstimator::CteAleph3 | McEstimator::CteAleph4 => model.cte_limit(),
            McEstimator::Hill => Some(model.alpha()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellKey {
    pub estimator: McEstimator,
    pub k_frac: Option<f64>,
    pub k_alpha_frac: Option<f64>,
}

/// Summary of the Monte Carlo distribution of one estimator cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCell {
    pub key: CellKey,
    pub mean: f64,
    pub sd: f64,
    /// 5, 25, 50, 75 and 95% quantiles (linear interpolation between order
    /// statistics).
    pub quantiles: [f64; 5],
    pub rep_count: usize,
    pub failures: usize,
    pub truth: Option<f64>,
    /// Per-replication values in replication order; `NaN` marks a failure.
    #[serde(skip)]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub config: McConfig,
    pub cells: Vec<McCell>,
}

impl McSummary {
    pub fn cell(
        &self,
        estimator: McEstimator,
        k_frac: Option<f64>,
        k_alpha_frac: Option<f64>,
    ) -> Option<&McCell> {
        self.cells.iter().find(|c| {
            c.key.estimator == estimator
                && c.key.k_frac == k_frac
                && c.key.k_alpha_frac == k_alpha_frac
        })
    }
}

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Sample quantile with linear interpolation between order statistics of
/// the sorted input (`h = (n - 1) q`).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn evaluate_cell(
    config: &McConfig,
    key: &CellKey,
    sample: &BivariateSample,
    view: &crate::sample::OrderedView<'_>,
) -> Result<f64> {
    let n = sample.len();
    let k = key.k_frac.map(|f| k_from_fraction(f, n));
    let k_alpha = key.k_alpha_frac.map(|f| k_from_fraction(f, n));
    let alpha = config.model.model.alpha();
    let y = config.y;
    let v = match key.estimator {
        McEstimator::TdcEmpirical => tdc_empirical(view, k.unwrap(), y)?.value,
        McEstimator::TdcQuasiSpectral => tdc_quasispectral(view, k.unwrap(), y, alpha)?.value,
        McEstimator::TdcQuasiSpectralHill => {
            tdc_quasispectral_hill(view, k.unwrap(), y, k_alpha.unwrap())?.value
        }
        McEstimator::CteAleph3 => cte_aleph3(view, k.unwrap())?.value,
        McEstimator::CteAleph4 => cte_aleph4(view, k.unwrap(), alpha)?.value,
        McEstimator::Hill => hill_estimate(view, k_alpha.unwrap())?.alpha_hat,
    };
    Ok(v)
}

/// Runs `config.reps` independent replications in parallel and summarises
/// every requested (estimator, k, k_alpha) cell. Estimator errors are
/// counted per cell as failures rather than aborting the run.
pub fn run_mc(config: &McConfig) -> Result<McSummary> {
    config.validate()?;
    let keys = config.cell_keys();
    let per_rep: Vec<Vec<f64>> = (0..config.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let sample = config
                .model
                .model
                .sample_with(config.model.n, &mut config.model.rng(rep))?;
            let view = sample.order_view();
            Ok(keys
                .iter()
                .map(|key| evaluate_cell(config, key, &sample, &view).unwrap_or(f64::NAN))
                .collect())
        })
        .collect::<Result<_>>()?;

    let cells = keys
        .iter()
        .enumerate()
        .map(|(c, key)| {
            let values: Vec<f64> = per_rep.iter().map(|row| row[c]).collect();
            summarise(*key, values, config.truth(key.estimator))
        })
        .collect();
    Ok(McSummary {
        config: config.clone(),
        cells,
    })
}

fn summarise(key: CellKey, values: Vec<f64>, truth: Option<f64>) -> McCell {
    let mut ok: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    let m = ok.len();
    let mean = if m == 0 {
        f64::NAN
    } else {
        ok.iter().sum::<f64>() / m as f64
    };
    let sd = if m < 2 {
        if m == 1 {
            0.0
        } else {
            f64::NAN
        }
    } else {
        (ok.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1) as f64).sqrt()
    };
    ok.sort_by(f64::total_cmp);
    let quantiles = QUANTILE_LEVELS.map(|q| quantile_sorted(&ok, q));
    McCell {
        key,
        mean,
        sd,
        quantiles,
        rep_count: values.len(),
        failures: values.len() - m,
        truth,
        values,
    }
}
