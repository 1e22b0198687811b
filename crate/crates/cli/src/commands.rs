use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use qstail::estimators::{
    cond_tail_curve, confidence_interval, cte_aleph3, cte_aleph4, cte_aleph4_hill, edm_estimate,
    normal_interval, tdc_empirical, tdc_quasispectral, tdc_quasispectral_hill, theta_hat,
    CurveMethod,
};
use qstail::simulate::{run_mc, McConfig, McSummary, ModelConfig};
use qstail::{hill_estimate, BivariateSample, Error, TailEstimate};
use serde::Serialize;

use crate::args::{
    resolve_fraction, Cli, Command, CurveArgs, CurveMethodArg, EstimateArgs, Format, McArgs,
    Method, OutputArgs, SimulateArgs,
};
use crate::error::{CliError, Result};
use crate::ingest::{ingest, write_sample};

/// Normal confidence interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Where the tail index came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    Given,
    Hill,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaInfo {
    pub value: f64,
    pub source: AlphaSource,
    pub k_alpha: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub p: f64,
    pub theta_hat: f64,
    pub extrapolation_factor: f64,
}

/// Output of `estimate`. Its JSON form is described by
/// `schema/estimate_report.schema.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimator_id: String,
    pub value: f64,
    pub plugin_variance: Option<f64>,
    pub ci: Option<Interval>,
    pub k: usize,
    pub n: usize,
    pub threshold: f64,
    pub alpha: Option<AlphaInfo>,
    pub extrapolation: Option<Extrapolation>,
    pub notes: Vec<&'static str>,
}

fn open_output(out: &OutputArgs) -> Result<Box<dyn Write>> {
    match &out.output {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(path) => {
            let f = File::create(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn write_json<T: Serialize>(value: &T, out: &OutputArgs) -> Result<()> {
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Output(e.to_string()))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Output(e.to_string()))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_csv(header: &[&str], rows: &[Vec<String>], out: &OutputArgs) -> Result<()> {
    let mut w = csv::Writer::from_writer(open_output(out)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => {
            let s = simulate(a)?;
            write_sample(&s, open_output(&a.out)?)
        }
        Command::Ingest(a) => {
            let s = ingest(&a.input.input, a.input.transform)?;
            write_sample(&s, open_output(&a.out)?)
        }
        Command::Estimate(a) => {
            let sample = ingest(&a.input.input, a.input.transform)?;
            let report = estimate(&sample, a)?;
            match a.format {
                Format::Json => write_json(&report, &a.out),
                Format::Csv => write_csv(&ESTIMATE_COLUMNS, &[estimate_row(&report)], &a.out),
            }
        }
        Command::Curve(a) => {
            let sample = ingest(&a.input.input, a.input.transform)?;
            let rows = curve(&sample, a)?;
            match a.format {
                Format::Json => write_json(&rows, &a.out),
                Format::Csv => {
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.estimator_id.clone(),
                                r.k.to_string(),
                                r.k_frac.to_string(),
                                r.y.to_string(),
                                r.value.to_string(),
                            ]
                        })
                        .collect();
                    write_csv(
                        &["estimator_id", "k", "k_frac", "y", "value"],
                        &body,
                        &a.out,
                    )
                }
            }
        }
        Command::Mc(a) => {
            let summary = mc(a)?;
            match a.format {
                Format::Json => write_json(&summary, &a.out),
                Format::Csv => write_csv(&MC_COLUMNS, &mc_rows(&summary), &a.out),
            }
        }
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<BivariateSample> {
    let cfg = ModelConfig::new(a.model.model(), a.model.n, a.model.seed);
    Ok(cfg.model.sample_with(cfg.n, &mut cfg.rng(a.rep))?)
}

fn given_alpha(alpha: Option<f64>, method: &str) -> Result<f64> {
    alpha.ok_or_else(|| CliError::Usage(format!("--alpha is required for {method}")))
}

fn alpha_info(est: &TailEstimate, given: bool) -> Option<AlphaInfo> {
    est.alpha_used.map(|value| AlphaInfo {
        value,
        source: if given {
            AlphaSource::Given
        } else {
            AlphaSource::Hill
        },
        k_alpha: est.k_alpha,
    })
}

pub fn estimate(sample: &BivariateSample, a: &EstimateArgs) -> Result<EstimateReport> {
    let n = sample.len();
    let k = a.k.resolve(n)?;
    let view = sample.order_view();
    view.check_k(k)?;
    if !(a.level > 0.0 && a.level < 1.0) {
        return Err(Error::InvalidConfidence { level: a.level }.into());
    }
    if a.p.is_some()
        && !matches!(
            a.method,
            Method::Aleph3 | Method::Aleph4 | Method::Aleph4Hill
        )
    {
        return Err(CliError::Usage(
            "--p applies to aleph3, aleph4 and aleph4-hill".into(),
        ));
    }
    let k_alpha = a.k_alpha.resolve(n, k)?;

    if a.method == Method::Hill {
        let h = hill_estimate(&view, k)?;
        // asymptotic variance alpha^2 / k
        let variance = h.alpha_hat * h.alpha_hat;
        let (lower, upper) = normal_interval(h.alpha_hat, variance, k, a.level, f64::INFINITY)?;
        return Ok(EstimateReport {
            estimator_id: "hill".into(),
            value: h.alpha_hat,
            plugin_variance: Some(variance),
            ci: Some(Interval {
                level: a.level,
                lower,
                upper,
            }),
            k,
            n,
            threshold: view.threshold(k)?,
            alpha: None,
            extrapolation: None,
            notes: Vec::new(),
        });
    }

    let (est, given) = match a.method {
        Method::Empirical => (tdc_empirical(&view, k, a.y)?, false),
        Method::Quasispectral => {
            let alpha = given_alpha(a.alpha, "quasispectral")?;
            (tdc_quasispectral(&view, k, a.y, alpha)?, true)
        }
        Method::QuasispectralHill => (tdc_quasispectral_hill(&view, k, a.y, k_alpha)?, false),
        Method::Aleph3 => (cte_aleph3(&view, k)?, false),
        Method::Aleph4 => {
            let alpha = given_alpha(a.alpha, "aleph4")?;
            (cte_aleph4(&view, k, alpha)?, true)
        }
        Method::Aleph4Hill => (cte_aleph4_hill(&view, k, k_alpha)?, false),
        Method::Edm => (edm_estimate(sample, k, a.norm.into())?, false),
        Method::Hill => unreachable!(),
    };
    let ci = match est.plugin_variance {
        Some(_) => {
            let (lower, upper) = confidence_interval(&est, a.level)?;
            Some(Interval {
                level: a.level,
                lower,
                upper,
            })
        }
        None => None,
    };
    let mut alpha = alpha_info(&est, given);
    let extrapolation = match a.p {
        None => None,
        Some(p) => {
            // aleph3 carries no alpha of its own
            let tail_alpha = match (&alpha, a.alpha) {
                (Some(info), _) => info.value,
                (None, Some(given)) => {
                    alpha = Some(AlphaInfo {
                        value: given,
                        source: AlphaSource::Given,
                        k_alpha: None,
                    });
                    given
                }
                (None, None) => {
                    let h = hill_estimate(&view, k_alpha)?;
                    alpha = Some(AlphaInfo {
                        value: h.alpha_hat,
                        source: AlphaSource::Hill,
                        k_alpha: Some(k_alpha),
                    });
                    h.alpha_hat
                }
            };
            let th = theta_hat(&view, k, p, est.value, tail_alpha)?;
            Some(Extrapolation {
                p,
                theta_hat: th.theta_hat,
                extrapolation_factor: th.extrapolation_factor,
            })
        }
    };
    Ok(EstimateReport {
        estimator_id: est.estimator_id.name(),
        value: est.value,
        plugin_variance: est.plugin_variance,
        ci,
        k: est.k,
        n: est.n,
        threshold: est.threshold,
        alpha,
        extrapolation,
        notes: est.notes,
    })
}

pub const ESTIMATE_COLUMNS: [&str; 11] = [
    "estimator_id",
    "value",
    "plugin_variance",
    "ci_level",
    "ci_lower",
    "ci_upper",
    "k",
    "n",
    "threshold",
    "alpha",
    "theta_hat",
];

fn estimate_row(r: &EstimateReport) -> Vec<String> {
    vec![
        r.estimator_id.clone(),
        r.value.to_string(),
        opt(r.plugin_variance),
        opt(r.ci.as_ref().map(|c| c.level)),
        opt(r.ci.as_ref().map(|c| c.lower)),
        opt(r.ci.as_ref().map(|c| c.upper)),
        r.k.to_string(),
        r.n.to_string(),
        r.threshold.to_string(),
        opt(r.alpha.as_ref().map(|a| a.value)),
        opt(r.extrapolation.as_ref().map(|e| e.theta_hat)),
    ]
}

/// One point of a conditional tail trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub estimator_id: String,
    pub k: usize,
    pub k_frac: f64,
    pub y: f64,
    pub value: f64,
}

fn curve_method(m: CurveMethodArg, alpha: Option<f64>, k_alpha: usize) -> Result<CurveMethod> {
    Ok(match m {
        CurveMethodArg::Empirical => CurveMethod::Empirical,
        CurveMethodArg::Quasispectral => CurveMethod::QuasiSpectral {
            alpha: given_alpha(alpha, "quasispectral")?,
        },
        CurveMethodArg::QuasispectralHill => CurveMethod::QuasiSpectralHill { k_alpha },
    })
}

/// Rows grouped by method, in `--methods` order.
pub fn curve(sample: &BivariateSample, a: &CurveArgs) -> Result<Vec<CurveRow>> {
    let n = sample.len();
    let view = sample.order_view();
    let fixed_k = match (a.k, a.k_frac) {
        (Some(k), _) => Some(k),
        (None, Some(f)) => Some(resolve_fraction("--k-frac", f, n)?),
        (None, None) => None,
    };
    // (k, y grid) per point of the trace
    let plan: Vec<(usize, Vec<f64>)> = match (a.y_grid.is_empty(), a.k_fracs.is_empty(), fixed_k) {
        (false, _, Some(k)) => vec![(k, a.y_grid.clone())],
        (false, _, None) => return Err(CliError::Usage("--y-grid needs --k or --k-frac".into())),
        (true, false, _) => a
            .k_fracs
            .iter()
            .map(|&f| Ok((resolve_fraction("--k-fracs", f, n)?, vec![a.y])))
            .collect::<Result<_>>()?,
        (true, true, _) => {
            return Err(CliError::Usage(
                "one of --y-grid or --k-fracs is required".into(),
            ))
        }
    };
    let mut rows = Vec::new();
    for &m in &a.methods {
        for (k, grid) in &plan {
            let k_alpha = a.k_alpha.resolve(n, *k)?;
            let c = cond_tail_curve(&view, *k, grid, curve_method(m, a.alpha, k_alpha)?)?;
            let id = c.estimator_id.name();
            for (&y, &value) in c.y_grid.iter().zip(&c.values) {
                rows.push(CurveRow {
                    estimator_id: id.clone(),
                    k: *k,
                    k_frac: *k as f64 / n as f64,
                    y,
                    value,
                });
            }
        }
    }
    Ok(rows)
}

pub fn mc(a: &McArgs) -> Result<McSummary> {
    let cfg = McConfig {
        model: ModelConfig::new(a.model.model(), a.model.n, a.model.seed),
        reps: a.reps,
        k_fractions: a.k_fracs.clone(),
        k_alpha_fractions: a.k_alpha_fracs.clone(),
        estimators: a.estimators.iter().map(|&e| e.into()).collect(),
        y: a.y,
    };
    Ok(run_mc(&cfg)?)
}

pub const MC_COLUMNS: [&str; 13] = [
    "estimator_id",
    "k_frac",
    "k_alpha_frac",
    "mean",
    "sd",
    "q05",
    "q25",
    "q50",
    "q75",
    "q95",
    "rep_count",
    "failures",
    "truth",
];

pub fn mc_rows(s: &McSummary) -> Vec<Vec<String>> {
    s.cells
        .iter()
        .map(|c| {
            let mut row = vec![
                c.key.estimator.name().to_string(),
                opt(c.key.k_frac),
                opt(c.key.k_alpha_frac),
                c.mean.to_string(),
                c.sd.to_string(),
            ];
            row.extend(c.quantiles.iter().map(|q| q.to_string()));
            row.push(c.rep_count.to_string());
            row.push(c.failures.to_string());
            row.push(opt(c.truth));
            row
        })
        .collect()
}

/// Writes `sample` to `path` as `x,y` CSV.
pub fn save_sample(sample: &BivariateSample, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_sample(sample, BufWriter::new(f))
}
