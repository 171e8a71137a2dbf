//! Reproducible Monte Carlo experiments: error-curve sweeps over sample
//! sizes and split fractions, confidence-interval coverage tables, and the
//! Poisson convex-case comparison, with CSV and SVG outputs.
//!
//! Reproducibility contract: every replicate draws from its own ChaCha
//! stream keyed by (seed, experiment kind, setting, replicate index), so
//! results are byte-identical regardless of how many worker threads run and
//! replicate ranges can be split across runs and merged.

mod config;
mod experiments;
mod plot;

pub use config::{parse_config, ExperimentConfig, ExperimentKind};
pub use experiments::{
    convex_replicates, coverage_replicates, fit_rate, read_xy_columns, replicate_estimates,
    run_convex_comparison, run_coverage, run_error_curve, sample_for, ConvexReplicate, ConvexRow,
    CoverageRow, CurvePoint, RateFit,
};
pub use plot::{render_plot, PlotStyle};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::NeumaierSum;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent RNG stream for one replicate of one experiment setting.
/// Keyed by values, not list positions, so reordering a config's sweep
/// lists does not change any replicate's draw.
pub fn replicate_rng(seed: u64, kind: u64, setting: &[u64], replicate: u64) -> ChaCha8Rng {
    let mut state = splitmix(seed ^ splitmix(kind));
    for &part in setting {
        state = splitmix(state ^ part);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(state);
    rng.set_stream(replicate.wrapping_add(1));
    rng
}

/// Mean and (ddof = 1) standard deviation with compensated accumulation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mut sum = NeumaierSum::new();
    for &v in values {
        sum.add(v);
    }
    let mean = sum.total() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq = NeumaierSum::new();
    for &v in values {
        sq.add((v - mean) * (v - mean));
    }
    (mean, (sq.total() / (values.len() - 1) as f64).sqrt())
}

/// Floating-point CSV formatting: 17 significant digits, enough to restore
/// the exact bit pattern.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
