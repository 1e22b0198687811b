use thiserror::Error;

/// Errors raised by sample construction and the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("observation {index} has a negative coordinate ({x}, {y})")]
    NegativeValue { index: usize, x: f64, y: f64 },

    #[error("observation {index} is not finite")]
    NonFinite { index: usize },

    #[error("k = {k} is outside 1..={max} for a sample of size {n}")]
    InvalidK { k: usize, n: usize, max: usize },

    #[error("threshold order statistic {threshold} is not positive")]
    NonPositiveThreshold { threshold: f64 },

    #[error("top order statistics are all equal; Hill estimate undefined")]
    ZeroSpread,

    #[error("exceedance {index} has x = 0")]
    NonPositiveX { index: usize },

    #[error("alpha = {alpha} must exceed 1 for the conditional tail expectation")]
    AlphaNotAboveOne { alpha: f64 },

    #[error("alpha = {alpha} must be positive and finite")]
    InvalidAlpha { alpha: f64 },

    #[error("y = {y} must be positive and finite")]
    InvalidY { y: f64 },

    #[error("s = {s} must be positive and finite")]
    InvalidLevel { s: f64 },

    #[error("probability p = {p} must lie in (0, 1)")]
    InvalidP { p: f64 },

    #[error("confidence level {level} must lie in (0, 1)")]
    InvalidConfidence { level: f64 },

    #[error("estimate carries no plug-in variance")]
    MissingVariance,

    #[error("y grid must be non-empty, positive and strictly increasing")]
    InvalidYGrid,

    #[error("invalid model configuration: {0}")]
    InvalidModel(String),

    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidMc(String),
}

pub type Result<T> = std::result::Result<T, Error>;
