//! Runs every estimator against the brute-force oracles on the corpus.

use qstail::estimators::{
    cte_aleph3, cte_aleph4, edm_estimate, tdc_empirical, tdc_quasispectral, theta_hat,
};
use qstail::{hill_estimate, BivariateSample, Norm};

use super::*;

const YS: [f64; 4] = [0.5, 1.0, 1.5, 3.0];
const ALPHAS: [f64; 4] = [0.5, 1.5, 2.0, 4.0];

fn check(mismatches: &mut Vec<String>, what: String, got: Option<f64>, want: Option<f64>) {
    let ok = match (got, want) {
        (Some(a), Some(b)) => a.to_bits() == b.to_bits(),
        (None, None) => true,
        _ => false,
    };
    if !ok {
        mismatches.push(format!("{what}: got {got:?}, oracle {want:?}"));
    }
}

/// Returns a description of every mismatch and the number of comparisons.
pub fn corpus_mismatches() -> (Vec<String>, usize) {
    let mut bad = Vec::new();
    let mut count = 0;
    for d in corpus() {
        let sample = BivariateSample::from_columns(d.xs.clone(), d.ys.clone()).unwrap();
        let view = sample.order_view();
        let n = d.xs.len();
        for k in 1..n {
            let tag = |est: &str| format!("{} k={k} {est}", d.name);
            count += 1;
            check(
                &mut bad,
                tag("threshold"),
                view.threshold(k).ok(),
                Some(brute_threshold(&d.xs, k)),
            );
            for y in YS {
                count += 1;
                check(
                    &mut bad,
                    tag(&format!("tdc_empirical y={y}")),
                    tdc_empirical(&view, k, y).ok().map(|e| e.value),
                    Some(brute_tdc_empirical(&d.xs, &d.ys, k, y)),
                );
                for a in ALPHAS {
                    count += 2;
                    let est = tdc_quasispectral(&view, k, y, a).ok();
                    check(
                        &mut bad,
                        tag(&format!("tdc_quasispectral y={y} a={a}")),
                        est.as_ref().map(|e| e.value),
                        Some(brute_tdc_quasispectral(&d.xs, &d.ys, k, y, a)),
                    );
                    let var = est.and_then(|e| e.plugin_variance).unwrap();
                    let want = brute_tdc_quasispectral_variance(&d.xs, &d.ys, k, y, a);
                    if (var - want).abs() > 1e-12 * want.max(1.0) {
                        bad.push(format!(
                            "{} variance y={y} a={a}: {var} vs {want}",
                            tag("qs")
                        ));
                    }
                }
            }
            count += 1;
            check(
                &mut bad,
                tag("cte_aleph3"),
                cte_aleph3(&view, k).ok().map(|e| e.value),
                brute_cte_aleph3(&d.xs, &d.ys, k),
            );
            for a in ALPHAS {
                count += 1;
                check(
                    &mut bad,
                    tag(&format!("cte_aleph4 a={a}")),
                    cte_aleph4(&view, k, a).ok().map(|e| e.value),
                    brute_cte_aleph4(&d.xs, &d.ys, k, a),
                );
            }
            count += 1;
            check(
                &mut bad,
                tag("hill"),
                hill_estimate(&view, k).ok().map(|h| h.alpha_hat),
                brute_hill(&d.xs, k),
            );
            for (norm, bn) in [
                (Norm::L1, BruteNorm::L1),
                (Norm::L2, BruteNorm::L2),
                (Norm::Linf, BruteNorm::Linf),
            ] {
                count += 1;
                check(
                    &mut bad,
                    tag(&format!("edm {norm}")),
                    edm_estimate(&sample, k, norm).ok().map(|e| e.value),
                    Some(brute_edm(&d.xs, &d.ys, k, bn)),
                );
            }
            // theta_hat: exact at p = k/n, to rounding elsewhere
            let p0 = k as f64 / n as f64;
            for (p, exact) in [(p0, true), (p0 / 3.0, false), (p0 / 17.0, false)] {
                if p <= 0.0 || p >= 1.0 {
                    continue;
                }
                count += 1;
                let got = theta_hat(&view, k, p, 1.25, 2.5).unwrap();
                let t = brute_threshold(&d.xs, k);
                let want = if exact {
                    1.25 * t
                } else {
                    brute_theta(&d.xs, k, p, 1.25, 2.5)
                };
                let ok = if exact {
                    got.theta_hat == want
                } else {
                    (got.theta_hat - want).abs() <= 1e-14 * want.abs().max(f64::MIN_POSITIVE)
                };
                if !ok {
                    bad.push(format!(
                        "{} p={p}: {} vs {want}",
                        tag("theta_hat"),
                        got.theta_hat
                    ));
                }
            }
        }
    }
    (bad, count)
}
