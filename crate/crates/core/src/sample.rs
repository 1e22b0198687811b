//! Paired nonnegative observations and their X-ordered view.
//!
//! Every estimator in the crate thresholds the X margin at the order
//! statistic `X_{n:n-k}` (the (k+1)-th largest X) and looks only at the
//! pairs whose X strictly exceeds it. [`OrderedView`] caches the stable
//! ascending ordering of X so that several values of `k` can be evaluated
//! against one sort.

use serde::Serialize;

use crate::error::{Error, Result};

/// An i.i.d. sample of nonnegative pairs `(X_j, Y_j)`.
///
/// Order carries no meaning; all estimators are permutation invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BivariateSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl BivariateSample {
    /// Builds a sample, rejecting empty input and negative or non-finite values.
    pub fn new(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        Self::from_columns(xs, ys)
    }

    pub fn from_columns(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        assert_eq!(xs.len(), ys.len(), "column lengths differ");
        if xs.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if x < 0.0 || y < 0.0 {
                return Err(Error::NegativeValue { index, x, y });
            }
        }
        Ok(Self { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false for a constructed sample; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn pair(&self, j: usize) -> (f64, f64) {
        (self.xs[j], self.ys[j])
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Multiplies both coordinates of every pair by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_columns(
            self.xs.iter().map(|x| x * c).collect(),
            self.ys.iter().map(|y| y * c).collect(),
        )
    }

    pub fn order_view(&self) -> OrderedView<'_> {
        OrderedView::new(self)
    }
}

/// A sample sorted by X, giving order-statistic access.
///
/// The sort is stable: tied X values keep their input order.
#[derive(Debug, Clone)]
pub struct OrderedView<'a> {
    source: &'a BivariateSample,
    sorted: Vec<usize>,
}

impl<'a> OrderedView<'a> {
    pub fn new(source: &'a BivariateSample) -> Self {
        let xs = source.xs();
        let mut sorted: Vec<usize> = (0..xs.len()).collect();
        sorted.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
        Self { source, sorted }
    }

    pub fn sample(&self) -> &'a BivariateSample {
        self.source
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Indices of the pairs in ascending X order.
    pub fn sorted_indices(&self) -> &[usize] {
        &self.sorted
    }

    /// The m-th smallest X, `X_{n:m}`, for `1 <= m <= n`.
    ///
    /// # Panics
    ///
    /// Panics if `m` is zero or exceeds the sample size.
    pub fn order_statistic(&self, m: usize) -> f64 {
        assert!(
            m >= 1 && m <= self.len(),
            "order statistic {m} out of range"
        );
        self.source.xs()[self.sorted[m - 1]]
    }

    /// Checks `1 <= k <= n - 1`.
    pub fn check_k(&self, k: usize) -> Result<()> {
        let n = self.len();
        if k == 0 || k >= n {
            return Err(Error::InvalidK {
                k,
                n,
                max: n.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// The threshold `X_{n:n-k}`, the (k+1)-th largest X.
    pub fn threshold(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        Ok(self.order_statistic(self.len() - k))
    }

    /// `{ j : X_j > X_{n:n-k} }` in ascending index order.
    ///
    /// With tie-free X this has exactly `k` elements; ties at the threshold
    /// make it smaller.
    pub fn exceedance_indices(&self, k: usize) -> Result<Vec<usize>> {
        let t = self.threshold(k)?;
        Ok(exceeding(self.source.xs(), t))
    }
}

pub(crate) fn exceeding(values: &[f64], level: f64) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > level)
        .map(|(j, _)| j)
        .collect()
}

/// Converts a fraction of the sample size into an order-statistic count,
/// rounding to nearest and clamping to `1..=n-1`.
pub fn k_from_fraction(fraction: f64, n: usize) -> usize {
    let k = (fraction * n as f64).round() as usize;
    k.clamp(1, n.saturating_sub(1).max(1))
}
