//! Tail empirical functions.
//!
//! A [`TailFunctionSpec`] pairs a homogeneous weight `psi` of degree `gamma`
//! with an inclusion region `C` whose dilations are nested (`tC ⊆ sC` for
//! `s <= t`). The functional
//!
//! ```text
//! T(s; psi, C) = norm * sum_j psi(X_j / scale, Y_j / scale) 1{(X_j, Y_j) in s * level * C}
//! ```
//!
//! is evaluated either at a deterministic level `u` with normalisation
//! `1 / (n * Fbar(u))` ([`tef_fixed`]) or at the random level `X_{n:n-k}`
//! with normalisation `1 / k` ([`tef_random`]). Every estimator in
//! [`crate::estimators`] is one instance of the random-level form.
//!
//! Sums run over `j` in ascending index order, so results are
//! bit-reproducible.

use crate::error::{Error, Result};
use crate::estimate::Norm;
use crate::sample::{BivariateSample, OrderedView};

/// A nonnegative weight homogeneous of some degree:
/// `eval(c u, c v) = c^degree * eval(u, v)` for `c > 0`.
pub trait TailWeight {
    fn degree(&self) -> f64;

    fn eval(&self, u: f64, v: f64) -> f64;

    /// `eval(x / scale, y / scale)`. Degree-zero weights override this to
    /// skip the division, which homogeneity makes redundant.
    fn eval_scaled(&self, x: f64, y: f64, scale: f64) -> f64 {
        self.eval(x / scale, y / scale)
    }
}

/// An inclusion region `C` with nested dilations.
pub trait Region {
    /// Whether `(x, y)` lies in `level * C`.
    fn contains(&self, x: f64, y: f64, level: f64) -> bool;
}

/// `psi ≡ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unit;

impl TailWeight for Unit {
    fn degree(&self) -> f64 {
        0.0
    }
    fn eval(&self, _: f64, _: f64) -> f64 {
        1.0
    }
    fn eval_scaled(&self, _: f64, _: f64, _: f64) -> f64 {
        1.0
    }
}

/// `psi(u, v) = v`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SecondCoordinate;

impl TailWeight for SecondCoordinate {
    fn degree(&self) -> f64 {
        1.0
    }
    fn eval(&self, _: f64, v: f64) -> f64 {
        v
    }
    fn eval_scaled(&self, _: f64, y: f64, scale: f64) -> f64 {
        y / scale
    }
}

/// `psi(u, v) = v / u`, defined for `u > 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ratio;

impl TailWeight for Ratio {
    fn degree(&self) -> f64 {
        0.0
    }
    fn eval(&self, u: f64, v: f64) -> f64 {
        v / u
    }
    fn eval_scaled(&self, x: f64, y: f64, _: f64) -> f64 {
        y / x
    }
}

/// `psi(u, v) = (v / (y u) ∧ 1)^alpha`, the quasi-spectral weight.
#[derive(Debug, Clone, Copy)]
pub struct QuasiSpectral {
    pub y: f64,
    pub alpha: f64,
}

impl TailWeight for QuasiSpectral {
    fn degree(&self) -> f64 {
        0.0
    }
    fn eval(&self, u: f64, v: f64) -> f64 {
        self.eval_scaled(u, v, 1.0)
    }
    fn eval_scaled(&self, x: f64, y: f64, _: f64) -> f64 {
        (y / (self.y * x)).min(1.0).powf(self.alpha)
    }
}

/// `psi(u, v) = u v / ||(u, v)||^2`, zero at the origin.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalDependence {
    pub norm: Norm,
}

impl TailWeight for ExtremalDependence {
    fn degree(&self) -> f64 {
        0.0
    }
    fn eval(&self, u: f64, v: f64) -> f64 {
        self.eval_scaled(u, v, 1.0)
    }
    fn eval_scaled(&self, x: f64, y: f64, _: f64) -> f64 {
        let r2 = self.norm.squared(x, y);
        if r2 == 0.0 {
            0.0
        } else {
            x * y / r2
        }
    }
}

/// `psi^2`, used for plug-in variances.
#[derive(Debug, Clone, Copy)]
pub struct Squared<W>(pub W);

impl<W: TailWeight> TailWeight for Squared<W> {
    fn degree(&self) -> f64 {
        2.0 * self.0.degree()
    }
    fn eval(&self, u: f64, v: f64) -> f64 {
        let w = self.0.eval(u, v);
        w * w
    }
    fn eval_scaled(&self, x: f64, y: f64, scale: f64) -> f64 {
        let w = self.0.eval_scaled(x, y, scale);
        w * w
    }
}

/// `psi_1 + psi_2`; both weights must share a degree.
#[derive(Debug, Clone, Copy)]
pub struct Sum<A, B>(pub A, pub B);

impl<A: TailWeight, B: TailWeight> TailWeight for Sum<A, B> {
    fn degree(&self) -> f64 {
        debug_assert_eq!(self.0.degree(), self.1.degree());
        self.0.degree()
    }
    fn eval(&self, u: f64, v: f64) -> f64 {
        self.0.eval(u, v) + self.1.eval(u, v)
    }
    fn eval_scaled(&self, x: f64, y: f64, scale: f64) -> f64 {
        self.0.eval_scaled(x, y, scale) + self.1.eval_scaled(x, y, scale)
    }
}

/// A user-supplied weight. Homogeneity of `f` is the caller's promise.
#[derive(Clone, Copy)]
pub struct FnWeight<F> {
    pub f: F,
    pub degree: f64,
}

impl<F: Fn(f64, f64) -> f64> TailWeight for FnWeight<F> {
    fn degree(&self) -> f64 {
        self.degree
    }
    fn eval(&self, u: f64, v: f64) -> f64 {
        (self.f)(u, v)
    }
}

/// `C = {x1 > 1}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct XAbove;

impl Region for XAbove {
    fn contains(&self, x: f64, _: f64, level: f64) -> bool {
        x > level
    }
}

/// `C = {x1 > 1, x2 > y}`.
#[derive(Debug, Clone, Copy)]
pub struct JointAbove {
    pub y: f64,
}

impl Region for JointAbove {
    fn contains(&self, x: f64, y: f64, level: f64) -> bool {
        x > level && y > self.y * level
    }
}

/// `C = {||x|| > 1}`.
#[derive(Debug, Clone, Copy)]
pub struct NormAbove {
    pub norm: Norm,
}

impl Region for NormAbove {
    fn contains(&self, x: f64, y: f64, level: f64) -> bool {
        self.norm.eval(x, y) > level
    }
}

/// A region given by a membership predicate on `C` itself; `(x, y)` is in
/// `level * C` when `pred(x / level, y / level)` holds.
#[derive(Clone, Copy)]
pub struct FnRegion<P>(pub P);

impl<P: Fn(f64, f64) -> bool> Region for FnRegion<P> {
    fn contains(&self, x: f64, y: f64, level: f64) -> bool {
        (self.0)(x / level, y / level)
    }
}

/// A weight together with its region.
#[derive(Debug, Clone, Copy)]
pub struct TailFunctionSpec<W, R> {
    pub weight: W,
    pub region: R,
}

impl<W: TailWeight, R: Region> TailFunctionSpec<W, R> {
    pub fn new(weight: W, region: R) -> Self {
        Self { weight, region }
    }

    pub fn gamma(&self) -> f64 {
        self.weight.degree()
    }

    /// `sum_j psi(X_j/scale, Y_j/scale) 1{(X_j, Y_j) in level*C}` over `j` ascending.
    pub fn weighted_sum(&self, sample: &BivariateSample, level: f64, scale: f64) -> f64 {
        sample
            .pairs()
            .filter(|&(x, y)| self.region.contains(x, y, level))
            .map(|(x, y)| self.weight.eval_scaled(x, y, scale))
            .fold(0.0, |acc, w| acc + w)
    }
}

/// `psi ≡ 1` on `{x1 > 1, x2 > y}`: the empirical conditional tail probability.
pub fn joint_exceedance_spec(y: f64) -> TailFunctionSpec<Unit, JointAbove> {
    TailFunctionSpec::new(Unit, JointAbove { y })
}

/// The quasi-spectral weight on `{x1 > 1}`.
pub fn quasi_spectral_spec(y: f64, alpha: f64) -> TailFunctionSpec<QuasiSpectral, XAbove> {
    TailFunctionSpec::new(QuasiSpectral { y, alpha }, XAbove)
}

/// `psi(u, v) = v` on `{x1 > 1}`.
pub fn second_coordinate_spec() -> TailFunctionSpec<SecondCoordinate, XAbove> {
    TailFunctionSpec::new(SecondCoordinate, XAbove)
}

/// `psi(u, v) = v / u` on `{x1 > 1}`.
pub fn ratio_spec() -> TailFunctionSpec<Ratio, XAbove> {
    TailFunctionSpec::new(Ratio, XAbove)
}

/// `psi(u, v) = uv/||(u,v)||^2` on `{||x|| > 1}`.
pub fn edm_spec(norm: Norm) -> TailFunctionSpec<ExtremalDependence, NormAbove> {
    TailFunctionSpec::new(ExtremalDependence { norm }, NormAbove { norm })
}

/// Scaling applied to the arguments of `psi` at random levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiScale {
    /// Divide by the threshold `X_{n:n-k}`; fully data-driven.
    Threshold,
    /// Divide by a known deterministic level `u` (simulation only).
    Deterministic(f64),
}

fn check_positive_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidLevel { s })
    }
}

/// Tail empirical function at a deterministic level `u` with known `Fbar(u)`:
/// `(1 / (n Fbar(u))) sum_j psi(X_j/u, Y_j/u) 1{(X_j, Y_j) in s u C}`.
pub fn tef_fixed<W: TailWeight, R: Region>(
    sample: &BivariateSample,
    spec: &TailFunctionSpec<W, R>,
    u: f64,
    s: f64,
    fbar_u: f64,
) -> Result<f64> {
    check_positive_s(s)?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::InvalidLevel { s: u });
    }
    if !(fbar_u > 0.0 && fbar_u <= 1.0) {
        return Err(Error::InvalidP { p: fbar_u });
    }
    let sum = spec.weighted_sum(sample, s * u, u);
    Ok(sum / (sample.len() as f64 * fbar_u))
}

/// Tail empirical function at the random level `X_{n:n-k}`:
/// `(1/k) sum_j psi(X_j/scale, Y_j/scale) 1{(X_j, Y_j) in s X_{n:n-k} C}`.
pub fn tef_random<W: TailWeight, R: Region>(
    view: &OrderedView<'_>,
    spec: &TailFunctionSpec<W, R>,
    k: usize,
    s: f64,
    scale: PsiScale,
) -> Result<f64> {
    check_positive_s(s)?;
    let t = view.threshold(k)?;
    if t <= 0.0 {
        return Err(Error::NonPositiveThreshold { threshold: t });
    }
    let psi_scale = match scale {
        PsiScale::Threshold => t,
        PsiScale::Deterministic(u) => u,
    };
    Ok(spec.weighted_sum(view.sample(), s * t, psi_scale) / k as f64)
}

/// [`tef_random`] in its data-driven form over a grid of `s` values.
pub fn tef_random_grid<W: TailWeight, R: Region>(
    view: &OrderedView<'_>,
    spec: &TailFunctionSpec<W, R>,
    k: usize,
    s_grid: &[f64],
) -> Result<Vec<f64>> {
    s_grid
        .iter()
        .map(|&s| tef_random(view, spec, k, s, PsiScale::Threshold))
        .collect()
}
