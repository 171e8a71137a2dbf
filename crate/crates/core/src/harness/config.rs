//! Experiment configuration: a line-oriented `key = value` text format.

use std::path::PathBuf;

use crate::{Error, Result};

/// Which experiment a config is validated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    ErrorCurve,
    Coverage,
    ConvexCompare,
}

impl ExperimentKind {
    pub(crate) fn id(self) -> u64 {
        match self {
            ExperimentKind::ErrorCurve => 1,
            ExperimentKind::Coverage => 2,
            ExperimentKind::ConvexCompare => 3,
        }
    }
}

/// A reproducible experiment description.
///
/// `m_rule` holds split fractions as tenths: `j` means the hull subsample
/// has size `floor(n * j / 10)`; `j = 10` means the plug-in estimator (no
/// second subsample). `tolerance` is the absolute certified-area tolerance;
/// when absent, 1e-4 of the domain's bounding-box area is used.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub domain: String,
    pub alpha_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub m_rule: Vec<u32>,
    pub replicates: usize,
    pub bag_count: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub ci_levels: Vec<f64>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            domain: "annulus(0.25,1)".into(),
            alpha_list: vec![0.15, 0.25, 0.35],
            n_list: vec![250, 500, 1000],
            m_rule: vec![5],
            replicates: 200,
            bag_count: 0,
            seed: 1,
            tolerance: None,
            ci_levels: vec![0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95],
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Absolute area tolerance to use for a given domain.
    pub fn resolve_tolerance(&self, domain: &crate::domains::Domain) -> f64 {
        self.tolerance.unwrap_or_else(|| {
            let (lo, hi) = domain.bbox();
            1e-4 * (hi.x - lo.x) * (hi.y - lo.y)
        })
    }

    /// Checks list presence and ranges for the given experiment kind.
    pub fn validate(&self, kind: ExperimentKind) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        crate::domains::parse(&self.domain)?;
        if self.replicates == 0 {
            return fail("replicates must be >= 1".into());
        }
        if self.n_list.is_empty() {
            return fail("n_list must not be empty".into());
        }
        if self.n_list.iter().any(|&n| n < 2) {
            return fail("every n must be >= 2".into());
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return fail(format!("tolerance must be positive, got {t}"));
            }
        }
        match kind {
            ExperimentKind::ErrorCurve => {
                if self.alpha_list.is_empty() || self.m_rule.is_empty() {
                    return fail("error-curve needs alpha_list and m_rule".into());
                }
                if self.alpha_list.iter().any(|&a| !(a > 0.0)) {
                    return fail("alpha values must be positive".into());
                }
                if self.m_rule.iter().any(|&j| j == 0 || j > 10) {
                    return fail("m_rule entries must lie in 1..=10".into());
                }
            }
            ExperimentKind::Coverage => {
                if self.alpha_list.is_empty() {
                    return fail("coverage needs one alpha".into());
                }
                if self.ci_levels.is_empty() {
                    return fail("coverage needs ci_levels".into());
                }
                if self.ci_levels.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
                    return fail("ci_levels must lie in (0,1)".into());
                }
            }
            ExperimentKind::ConvexCompare => {
                if self.alpha_list.is_empty() {
                    return fail("convex-compare needs one alpha".into());
                }
            }
        }
        Ok(())
    }
}

/// Parses the `key = value` config text. Unknown keys are rejected; `#`
/// starts a comment.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("line {}: bad {what}: `{value}`", lineno + 1));
        match key {
            "domain" => cfg.domain = value.to_string(),
            "alpha_list" => cfg.alpha_list = parse_list(value).ok_or_else(|| bad("alpha_list"))?,
            "n_list" => {
                cfg.n_list = parse_list::<usize>(value).ok_or_else(|| bad("n_list"))?;
            }
            "m_rule" => cfg.m_rule = parse_list(value).ok_or_else(|| bad("m_rule"))?,
            "replicates" => cfg.replicates = value.parse().map_err(|_| bad("replicates"))?,
            "bag_count" => cfg.bag_count = value.parse().map_err(|_| bad("bag_count"))?,
            "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
            "tolerance" => cfg.tolerance = Some(value.parse().map_err(|_| bad("tolerance"))?),
            "ci_levels" => cfg.ci_levels = parse_list(value).ok_or_else(|| bad("ci_levels"))?,
            "output_dir" => cfg.output_dir = PathBuf::from(value),
            other => {
                return Err(Error::Config(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Option<Vec<T>> {
    value
        .split(',')
        .map(|s| s.trim().parse::<T>().ok())
        .collect()
}
