//! Independent oracles shared by the integration tests and the acceptance
//! harness. Nothing here calls into the estimator code paths it checks.
#![allow(dead_code)]

pub mod equivalence;

/// `X_{n:n-k}` by double loop: the value `v` with `#{x > v} <= k` and
/// `#{x >= v} >= k + 1`.
pub fn brute_threshold(xs: &[f64], k: usize) -> f64 {
    for &v in xs {
        let mut greater = 0;
        let mut at_least = 0;
        for &w in xs {
            if w > v {
                greater += 1;
            }
            if w >= v {
                at_least += 1;
            }
        }
        if greater <= k && at_least > k {
            return v;
        }
    }
    unreachable!("no order statistic found")
}

pub fn brute_tdc_empirical(xs: &[f64], ys: &[f64], k: usize, y: f64) -> f64 {
    let t = brute_threshold(xs, k);
    let mut sum = 0.0;
    for j in 0..xs.len() {
        if ys[j] > y * t && xs[j] > t {
            sum += 1.0;
        }
    }
    sum / k as f64
}

/// `None` when an exceedance has `x = 0` (never happens for valid data).
pub fn brute_tdc_quasispectral(xs: &[f64], ys: &[f64], k: usize, y: f64, alpha: f64) -> f64 {
    let t = brute_threshold(xs, k);
    let mut sum = 0.0;
    for j in 0..xs.len() {
        if xs[j] > t {
            sum += (ys[j] / (y * xs[j])).min(1.0).powf(alpha);
        }
    }
    sum / k as f64
}

pub fn brute_tdc_quasispectral_variance(
    xs: &[f64],
    ys: &[f64],
    k: usize,
    y: f64,
    alpha: f64,
) -> f64 {
    let t = brute_threshold(xs, k);
    let mut sum = 0.0;
    for j in 0..xs.len() {
        if xs[j] > t {
            sum += (ys[j] / (y * xs[j])).min(1.0).powf(2.0 * alpha);
        }
    }
    sum / k as f64
}

/// `None` when the threshold is not positive.
pub fn brute_cte_aleph3(xs: &[f64], ys: &[f64], k: usize) -> Option<f64> {
    let t = brute_threshold(xs, k);
    if t <= 0.0 {
        return None;
    }
    let mut sum = 0.0;
    for j in 0..xs.len() {
        if xs[j] > t {
            sum += ys[j] / t;
        }
    }
    Some(sum / k as f64)
}

pub fn brute_cte_aleph4(xs: &[f64], ys: &[f64], k: usize, alpha: f64) -> Option<f64> {
    let t = brute_threshold(xs, k);
    if t <= 0.0 || alpha <= 1.0 {
        return None;
    }
    let mut sum = 0.0;
    for j in 0..xs.len() {
        if xs[j] > t {
            sum += ys[j] / xs[j];
        }
    }
    Some(alpha / (alpha - 1.0) * (sum / k as f64))
}

/// `None` for a non-positive threshold or zero spread.
pub fn brute_hill(xs: &[f64], k: usize) -> Option<f64> {
    let t = brute_threshold(xs, k);
    if t <= 0.0 {
        return None;
    }
    let mut sum = 0.0;
    for &x in xs {
        if x > t {
            sum += (x / t).ln();
        }
    }
    if sum <= 0.0 {
        None
    } else {
        Some(k as f64 / sum)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum BruteNorm {
    L1,
    L2,
    Linf,
}

impl BruteNorm {
    pub fn norm(self, x: f64, y: f64) -> f64 {
        match self {
            BruteNorm::L1 => x + y,
            BruteNorm::L2 => (x * x + y * y).sqrt(),
            BruteNorm::Linf => x.max(y),
        }
    }
    pub fn norm_sq(self, x: f64, y: f64) -> f64 {
        match self {
            BruteNorm::L1 => (x + y) * (x + y),
            BruteNorm::L2 => x * x + y * y,
            BruteNorm::Linf => x.max(y) * x.max(y),
        }
    }
}

pub fn brute_edm(xs: &[f64], ys: &[f64], k: usize, norm: BruteNorm) -> f64 {
    let radii: Vec<f64> = xs.iter().zip(ys).map(|(&x, &y)| norm.norm(x, y)).collect();
    let r = brute_threshold(&radii, k);
    let mut sum = 0.0;
    for j in 0..xs.len() {
        if radii[j] > r {
            let sq = norm.norm_sq(xs[j], ys[j]);
            if sq > 0.0 {
                sum += xs[j] * ys[j] / sq;
            }
        }
    }
    sum / k as f64
}

pub fn brute_theta(xs: &[f64], k: usize, p: f64, aleph: f64, alpha: f64) -> f64 {
    let t = brute_threshold(xs, k);
    let n = xs.len() as f64;
    aleph * t * (k as f64 / (n * p)).powf(1.0 / alpha)
}

/// A handcrafted dataset.
pub struct Dataset {
    pub name: &'static str,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

fn ds(name: &'static str, pairs: &[(f64, f64)]) -> Dataset {
    Dataset {
        name,
        xs: pairs.iter().map(|p| p.0).collect(),
        ys: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Ten small datasets covering ties, zeros and `Y = X`.
pub fn corpus() -> Vec<Dataset> {
    let lcg = |seed: u64, n: usize| -> Vec<(f64, f64)> {
        let mut s = seed;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64)
        };
        (0..n)
            .map(|_| {
                let x = (1.0 - next()).powf(-0.5);
                let y = 0.6 * x + next() * 2.0;
                (x, y)
            })
            .collect()
    };
    vec![
        ds(
            "distinct",
            &[
                (1.2, 0.4),
                (3.5, 2.9),
                (0.7, 1.1),
                (8.1, 5.0),
                (2.2, 2.4),
                (5.6, 1.0),
                (4.4, 4.9),
                (1.9, 0.3),
                (6.3, 6.0),
                (2.8, 3.3),
            ],
        ),
        ds(
            "ties_at_threshold",
            &[
                (1.0, 0.5),
                (2.0, 1.5),
                (3.0, 3.5),
                (3.0, 2.0),
                (3.0, 3.0),
                (4.0, 4.5),
                (5.0, 1.0),
                (5.0, 6.0),
            ],
        ),
        ds(
            "zero_y",
            &[
                (1.5, 0.0),
                (2.5, 0.0),
                (3.5, 1.0),
                (4.5, 0.0),
                (5.5, 7.0),
                (6.5, 0.0),
                (0.5, 0.2),
            ],
        ),
        ds(
            "y_equals_x",
            &[
                (0.3, 0.3),
                (1.7, 1.7),
                (2.9, 2.9),
                (4.1, 4.1),
                (9.5, 9.5),
                (12.25, 12.25),
                (0.9, 0.9),
                (3.3, 3.3),
                (7.0, 7.0),
            ],
        ),
        ds(
            "zero_x",
            &[
                (0.0, 1.0),
                (0.0, 0.0),
                (0.0, 2.0),
                (1.0, 0.5),
                (2.0, 3.0),
                (4.0, 1.0),
                (8.0, 9.0),
            ],
        ),
        ds(
            "tied_top",
            &[
                (1.0, 1.0),
                (2.0, 0.5),
                (7.0, 3.0),
                (7.0, 8.0),
                (7.0, 7.0),
                (7.0, 0.0),
                (0.5, 2.0),
            ],
        ),
        ds(
            "y_dominates",
            &[
                (1.0, 10.0),
                (2.0, 25.0),
                (3.0, 40.0),
                (4.0, 3.0),
                (5.0, 90.0),
                (6.0, 60.0),
            ],
        ),
        ds("pair", &[(1.0, 2.0), (3.0, 1.0)]),
        ds(
            "ties_and_zeros",
            &[
                (0.0, 0.0),
                (2.0, 0.0),
                (2.0, 2.0),
                (2.0, 1.0),
                (0.0, 5.0),
                (6.0, 0.0),
                (6.0, 6.0),
                (9.0, 4.0),
                (9.0, 9.0),
                (1.0, 1.0),
                (6.0, 12.0),
            ],
        ),
        Dataset {
            name: "pareto_like_30",
            xs: lcg(7, 30).iter().map(|p| p.0).collect(),
            ys: lcg(7, 30).iter().map(|p| p.1).collect(),
        },
    ]
}

/// Composite Simpson's rule with `panels` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `P(T_nu > x) / P(T_nu > 0)` for `x >= 0`, i.e. `2 (1 - T_nu(x))`, by
/// integrating the unnormalised t density after `t = tan(theta)`.
pub fn t_two_sided_tail(x: f64, nu: f64) -> f64 {
    let g = |theta: f64| {
        let t = theta.tan();
        let c = theta.cos();
        (1.0 + t * t / nu).powf(-(nu + 1.0) / 2.0) / (c * c)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    // the integrand vanishes at pi/2 for nu > 1
    let end = half_pi - 1e-9;
    let total = simpson(g, 0.0, end, 200_000);
    let tail = simpson(g, x.atan(), end, 200_000);
    tail / total
}

/// Tail dependence coefficient of the bivariate t:
/// `2 (1 - T_{nu+1}(sqrt((nu+1)(1-rho)/(1+rho))))`.
pub fn t_tdc_oracle(nu: f64, rho: f64) -> f64 {
    t_two_sided_tail(((nu + 1.0) * (1.0 - rho) / (1.0 + rho)).sqrt(), nu + 1.0)
}

fn half_normal_pdf(z: f64) -> f64 {
    2.0 * (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `P(Y > y u | X > u)` for `Y = phi X + sigma |Z|`, `X` standard Pareto(alpha), `u >= 1`.
pub fn linear_conditional_tail(u: f64, y: f64, phi: f64, sigma: f64, alpha: f64) -> f64 {
    simpson(
        |z| half_normal_pdf(z) * ((y - sigma * z / u) / phi).max(1.0).powf(-alpha),
        0.0,
        12.0,
        20_000,
    )
}

/// `E[(Y / (yX) ∧ 1)^alpha | X > u]` for the same model, with `X = u V`,
/// `V^{-alpha} ~ U(0,1)`.
pub fn linear_quasispectral_target(u: f64, y: f64, phi: f64, sigma: f64, alpha: f64) -> f64 {
    simpson(
        |w| {
            let w = w.max(1e-300);
            let x = u * w.powf(-1.0 / alpha);
            simpson(
                |z| half_normal_pdf(z) * ((phi + sigma * z / x) / y).min(1.0).powf(alpha),
                0.0,
                12.0,
                400,
            )
        },
        0.0,
        1.0,
        2_000,
    )
}
