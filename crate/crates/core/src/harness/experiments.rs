//! Experiment engines and their CSV/SVG emission.

use std::fs;

use std::ops::Range;
use std::path::Path;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::plot::{render_plot, PlotStyle};
use super::{fmt_f64, mean_sd, replicate_rng};
use crate::domains::Domain;
use crate::estimators::{bagged_estimate, plug_in, split_estimate, volume_ci, SplitResult};
use crate::geom::{convex_hull, Point};
use crate::{Error, Result};

/// One aggregated point of an error curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub n: usize,
    pub j: u32,
    pub alpha: f64,
    pub bag: usize,
    pub mean_rel_error: f64,
    pub sd_rel_error: f64,
    pub replicates: usize,
}

/// One row of a coverage table.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub n: usize,
    pub level: f64,
    pub coverage: f64,
    pub mean_length: f64,
    pub replicates: usize,
}

/// One replicate of the Poisson convex-case comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexReplicate {
    /// Realized Poisson sample size.
    pub n_points: usize,
    /// Split estimator on half the sample.
    pub v_hat: f64,
    /// Convex hull area of the whole sample.
    pub hull_area: f64,
    /// Naive oracle, count over intensity.
    pub naive: f64,
}

/// One aggregated row of the convex comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRow {
    pub n: usize,
    pub estimator: &'static str,
    pub nrmse: f64,
    pub replicates: usize,
}

/// Least-squares fit of `log err` against `log n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Volume estimates for a range of replicates of one error-curve setting.
///
/// Each replicate draws a fresh sample of size `n` from its own RNG stream
/// keyed by `(seed, experiment, alpha, n, replicate)` - deliberately not by
/// `j` or `bag`, so different split rules see identical samples and can be
/// compared pairwise. `j = 10` runs the plug-in estimator, otherwise the
/// split estimator with `m = floor(n j / 10)`; `bag > 0` averages that many
/// split estimates.
pub fn replicate_estimates(
    domain: &Domain,
    alpha: f64,
    n: usize,
    j: u32,
    bag: usize,
    tolerance: f64,
    seed: u64,
    reps: Range<usize>,
) -> Result<Vec<f64>> {
    if !(1..=10).contains(&j) {
        return Err(Error::InvalidParameter(format!("j = {j} outside 1..=10")));
    }
    let kind = ExperimentKind::ErrorCurve.id();
    reps.into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, kind, &[alpha.to_bits(), n as u64], rep as u64);
            let sample = domain.sample(n, &mut rng)?;
            if j == 10 {
                Ok(plug_in(&sample, alpha, tolerance)?.value)
            } else {
                let m = (n * j as usize) / 10;
                if bag > 0 {
                    bagged_estimate(&sample, alpha, m, bag, tolerance, &mut rng)
                } else {
                    Ok(split_estimate(&sample, alpha, m, tolerance, &mut rng)?.v_hat)
                }
            }
        })
        .collect()
}

/// Split results for a range of replicates at one coverage setting
/// (`m = n/2`), one fresh sample per replicate.
pub fn coverage_replicates(
    domain: &Domain,
    alpha: f64,
    n: usize,
    tolerance: f64,
    seed: u64,
    reps: Range<usize>,
) -> Result<Vec<SplitResult>> {
    let kind = ExperimentKind::Coverage.id();
    reps.into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, kind, &[alpha.to_bits(), n as u64], rep as u64);
            let sample = domain.sample(n, &mut rng)?;
            split_estimate(&sample, alpha, n / 2, tolerance, &mut rng)
        })
        .collect()
}

/// Replicates of the Poisson convex-case comparison: sample a Poisson
/// process with mean count `n`, then compute the half-split estimator, the
/// convex hull area, and the naive count-over-intensity estimator.
pub fn convex_replicates(
    domain: &Domain,
    alpha: f64,
    n: usize,
    tolerance: f64,
    seed: u64,
    reps: Range<usize>,
) -> Result<Vec<ConvexReplicate>> {
    let kind = ExperimentKind::ConvexCompare.id();
    let lambda = n as f64 / domain.area();
    reps.into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, kind, &[alpha.to_bits(), n as u64], rep as u64);
            let sample = domain.sample_poisson(lambda, &mut rng)?;
            let n_points = sample.len();
            let naive = n_points as f64 / lambda;
            let (v_hat, hull_area) = if n_points >= 2 {
                let split = split_estimate(&sample, alpha, n_points / 2, tolerance, &mut rng)?;
                let hull_area = convex_hull(&sample)?.area();
                (split.v_hat, hull_area)
            } else {
                (0.0, 0.0)
            };
            Ok(ConvexReplicate {
                n_points,
                v_hat,
                hull_area,
                naive,
            })
        })
        .collect()
}

/// Runs the error-curve experiment: for every `(alpha, n, j)` setting,
/// `replicates` fresh samples, the configured estimator, and the mean and
/// standard deviation of `|V - mu(S)| / mu(S)`. Writes one CSV and one SVG
/// per alpha into `output_dir`.
pub fn run_error_curve(cfg: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    cfg.validate(ExperimentKind::ErrorCurve)?;
    let domain = crate::domains::parse(&cfg.domain)?;
    let tolerance = cfg.resolve_tolerance(&domain);
    let mu = domain.area();

    let mut points = Vec::new();
    for &alpha in &cfg.alpha_list {
        for &n in &cfg.n_list {
            for &j in &cfg.m_rule {
                let bag = if j == 10 { 0 } else { cfg.bag_count };
                let estimates = replicate_estimates(
                    &domain,
                    alpha,
                    n,
                    j,
                    bag,
                    tolerance,
                    cfg.seed,
                    0..cfg.replicates,
                )?;
                let rel_errors: Vec<f64> =
                    estimates.iter().map(|v| (v - mu).abs() / mu).collect();
                let (mean, sd) = mean_sd(&rel_errors);
                points.push(CurvePoint {
                    n,
                    j,
                    alpha,
                    bag,
                    mean_rel_error: mean,
                    sd_rel_error: sd,
                    replicates: cfg.replicates,
                });
            }
        }
    }

    let csv_path = cfg.output_dir.join("error_curve.csv");
    let mut rows = Vec::new();
    for p in &points {
        rows.push(vec![
            cfg.domain.clone(),
            fmt_f64(p.alpha),
            p.n.to_string(),
            p.j.to_string(),
            p.bag.to_string(),
            p.replicates.to_string(),
            fmt_f64(p.mean_rel_error),
            fmt_f64(p.sd_rel_error),
        ]);
    }
    write_csv(
        &csv_path,
        &[
            "domain",
            "alpha",
            "n",
            "j",
            "bag",
            "replicates",
            "mean_rel_error",
            "sd_rel_error",
        ],
        &rows,
    )?;

    // One figure per alpha, series indexed by j, log10 y-axis.
    for &alpha in &cfg.alpha_list {
        let style = PlotStyle {
            x_col: "n".into(),
            y_col: "mean_rel_error".into(),
            sd_col: Some("sd_rel_error".into()),
            series_cols: vec!["j".into()],
            filter: Some(("alpha".into(), fmt_f64(alpha))),
            log10_y: true,
            title: format!("mean relative error, alpha = {alpha}"),
        };
        let svg = render_plot(&csv_path, &style)?;
        let name = format!("error_curve_alpha_{alpha}.svg");
        write_text(&cfg.output_dir.join(name), &svg)?;
    }
    Ok(points)
}

/// Runs the coverage experiment: for every `n`, `replicates` split results
/// (`m = n/2`, first alpha in the list), then for every confidence level
/// the empirical coverage of the true area and the mean interval length.
pub fn run_coverage(cfg: &ExperimentConfig) -> Result<Vec<CoverageRow>> {
    cfg.validate(ExperimentKind::Coverage)?;
    let domain = crate::domains::parse(&cfg.domain)?;
    let tolerance = cfg.resolve_tolerance(&domain);
    let alpha = cfg.alpha_list[0];
    let mu = domain.area();

    let mut rows_out = Vec::new();
    for &n in &cfg.n_list {
        let splits = coverage_replicates(&domain, alpha, n, tolerance, cfg.seed, 0..cfg.replicates)?;
        for &level in &cfg.ci_levels {
            let mut hit = 0usize;
            let mut lengths = Vec::with_capacity(splits.len());
            for s in &splits {
                let ci = volume_ci(s, level)?;
                if ci.contains(mu) {
                    hit += 1;
                }
                lengths.push(ci.length());
            }
            let (mean_length, _) = mean_sd(&lengths);
            rows_out.push(CoverageRow {
                n,
                level,
                coverage: hit as f64 / splits.len() as f64,
                mean_length,
                replicates: splits.len(),
            });
        }
    }

    let csv_path = cfg.output_dir.join("coverage.csv");
    let rows: Vec<Vec<String>> = rows_out
        .iter()
        .map(|r| {
            vec![
                cfg.domain.clone(),
                fmt_f64(alpha),
                r.n.to_string(),
                (r.n / 2).to_string(),
                fmt_f64(r.level),
                r.replicates.to_string(),
                fmt_f64(r.coverage),
                fmt_f64(r.mean_length),
            ]
        })
        .collect();
    write_csv(
        &csv_path,
        &[
            "domain",
            "alpha",
            "n",
            "m",
            "level",
            "replicates",
            "coverage",
            "mean_length",
        ],
        &rows,
    )?;
    Ok(rows_out)
}

/// Runs the Poisson convex-case comparison and reports the RMSE of each
/// estimator normalized by the true area.
pub fn run_convex_comparison(cfg: &ExperimentConfig) -> Result<Vec<ConvexRow>> {
    cfg.validate(ExperimentKind::ConvexCompare)?;
    let domain = crate::domains::parse(&cfg.domain)?;
    let tolerance = cfg.resolve_tolerance(&domain);
    let alpha = cfg.alpha_list[0];
    let mu = domain.area();

    let mut rows_out = Vec::new();
    for &n in &cfg.n_list {
        let reps = convex_replicates(&domain, alpha, n, tolerance, cfg.seed, 0..cfg.replicates)?;
        let nrmse = |f: &dyn Fn(&ConvexReplicate) -> f64| -> f64 {
            let mse = reps
                .iter()
                .map(|r| {
                    let e = f(r) - mu;
                    e * e
                })
                .sum::<f64>()
                / reps.len() as f64;
            mse.sqrt() / mu
        };
        for (name, value) in [
            ("split", nrmse(&|r: &ConvexReplicate| r.v_hat)),
            ("convex_hull", nrmse(&|r: &ConvexReplicate| r.hull_area)),
            ("naive", nrmse(&|r: &ConvexReplicate| r.naive)),
        ] {
            rows_out.push(ConvexRow {
                n,
                estimator: name,
                nrmse: value,
                replicates: reps.len(),
            });
        }
    }

    let csv_path = cfg.output_dir.join("convex_compare.csv");
    let rows: Vec<Vec<String>> = rows_out
        .iter()
        .map(|r| {
            vec![
                cfg.domain.clone(),
                fmt_f64(alpha),
                r.n.to_string(),
                r.estimator.to_string(),
                r.replicates.to_string(),
                fmt_f64(r.nrmse),
            ]
        })
        .collect();
    write_csv(
        &csv_path,
        &["domain", "alpha", "n", "estimator", "replicates", "nrmse"],
        &rows,
    )?;
    let style = PlotStyle {
        x_col: "n".into(),
        y_col: "nrmse".into(),
        sd_col: None,
        series_cols: vec!["estimator".into()],
        filter: None,
        log10_y: true,
        title: "normalized RMSE".into(),
    };
    let svg = render_plot(&csv_path, &style)?;
    write_text(&cfg.output_dir.join("convex_compare.svg"), &svg)?;
    Ok(rows_out)
}

/// Ordinary least squares of `ln(error)` on `ln(n)`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    let distinct: std::collections::BTreeSet<u64> = points.iter().map(|p| p.0.to_bits()).collect();
    if distinct.len() < 3 {
        return Err(Error::InvalidParameter(
            "rate fit needs at least 3 distinct n values".into(),
        ));
    }
    if points.iter().any(|&(n, e)| !(n > 0.0) || !(e > 0.0)) {
        return Err(Error::InvalidParameter(
            "rate fit needs positive n and positive errors".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_split(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut field = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                field.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut field)),
            _ => field.push(c),
        }
    }
    out.push(field);
    out
}

/// Writes a CSV with the fixed header; fields containing commas are quoted,
/// and every float was already formatted with 17 significant digits by the
/// caller.
pub(crate) fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        let quoted: Vec<String> = row.iter().map(|f| csv_quote(f)).collect();
        text.push_str(&quoted.join(","));
        text.push('\n');
    }
    write_text(path, &text)
}

/// Reads a CSV produced by this harness: header plus rows.
pub(crate) fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut lines = text.lines();
    let header: Vec<String> = csv_split(lines.next().ok_or_else(|| Error::Csv {
        path: path.to_path_buf(),
        reason: "empty file".into(),
    })?);
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = csv_split(line);
        if row.len() != header.len() {
            return Err(Error::Csv {
                path: path.to_path_buf(),
                reason: format!("row width {} != header width {}", row.len(), header.len()),
            });
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reads `(x, y)` pairs by column name from a harness CSV, for rate checks.
pub fn read_xy_columns(path: &Path, x_col: &str, y_col: &str) -> Result<Vec<(f64, f64)>> {
    let (header, rows) = read_csv(path)?;
    let find = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Csv {
                path: path.to_path_buf(),
                reason: format!("missing column `{name}`"),
            })
    };
    let xi = find(x_col)?;
    let yi = find(y_col)?;
    rows.iter()
        .map(|row| {
            let parse = |i: usize| -> Result<f64> {
                row[i].parse::<f64>().map_err(|_| Error::Csv {
                    path: path.to_path_buf(),
                    reason: format!("non-numeric value `{}`", row[i]),
                })
            };
            Ok((parse(xi)?, parse(yi)?))
        })
        .collect()
}

/// Convenience for sampling one dataset the same way the experiments do.
pub fn sample_for(domain: &Domain, n: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = replicate_rng(seed, 0, &[n as u64], 0);
    domain.sample(n, &mut rng)
}
