//! Volume estimators and confidence intervals.
//!
//! The plug-in estimator is the certified area of the alpha-convex hull of
//! the whole sample. The split estimator builds the hull on a random
//! subsample of size `m`, counts how many of the remaining points fall
//! outside, and corrects the plug-in value by the estimated missing mass:
//!
//! ```text
//! V = area(hull of first m) / max(1 - p_hat, 1/2)
//! ```
//!
//! with `p_hat` the outside fraction of the second subsample. Confidence
//! intervals come from the Wilson score interval for the outside proportion,
//! mapped through the same monotone correction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geom::{NeumaierSum, Point};
use crate::hull::{AlphaHull, AreaEstimate};
use crate::{Error, Result};

/// Output of one sample split: the corrected volume estimate plus everything
/// needed to build confidence intervals afterwards.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// Corrected volume estimate.
    pub v_hat: f64,
    /// Certified area of the hull built on the first subsample; the
    /// midpoint `mu_hat.value` enters `v_hat`.
    pub mu_hat: AreaEstimate,
    /// Fraction of the second subsample outside the hull.
    pub p_hat: f64,
    /// Outside count, `p_hat * (n - m)` as an integer.
    pub outside_count: usize,
    /// First-subsample size.
    pub m: usize,
    /// Total sample size.
    pub n: usize,
    pub alpha: f64,
    /// Whether the correction denominator was clamped at 1/2
    /// (`p_hat > 1/2`).
    pub clamped: bool,
}

/// Volume confidence interval at a nominal level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl VolumeInterval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// The plug-in estimator: certified area of the hull of the whole sample.
pub fn plug_in(sample: &[Point], alpha: f64, tolerance: f64) -> Result<AreaEstimate> {
    AlphaHull::build(sample, alpha)?.area(tolerance)
}

/// The sample-splitting estimator.
///
/// The sample is randomly permuted with the caller's RNG; the first `m`
/// points build the hull, the remaining `n - m` are classified against it.
/// The denominator `1 - p_hat` is clamped below at 1/2.
pub fn split_estimate<R: Rng>(
    sample: &[Point],
    alpha: f64,
    m: usize,
    tolerance: f64,
    rng: &mut R,
) -> Result<SplitResult> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "split estimator needs at least 2 points, got {n}"
        )));
    }
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "subsample size m={m} outside 1..={}",
            n - 1
        )));
    }
    let mut idx: Vec<u32> = (0..n as u32).collect();
    idx.shuffle(rng);
    let first: Vec<Point> = idx[..m].iter().map(|&i| sample[i as usize]).collect();
    let hull = AlphaHull::build(&first, alpha)?;
    let mu_hat = hull.area(tolerance)?;

    let outside_count = idx[m..]
        .iter()
        .filter(|&&i| !hull.contains(sample[i as usize]))
        .count();
    let p_hat = outside_count as f64 / (n - m) as f64;
    let denom = (1.0 - p_hat).max(0.5);
    Ok(SplitResult {
        v_hat: mu_hat.value / denom,
        mu_hat,
        p_hat,
        outside_count,
        m,
        n,
        alpha,
        clamped: p_hat > 0.5,
    })
}

/// Mean of `b` independent split estimates on fresh random splits of the
/// same sample.
pub fn bagged_estimate<R: Rng>(
    sample: &[Point],
    alpha: f64,
    m: usize,
    b: usize,
    tolerance: f64,
    rng: &mut R,
) -> Result<f64> {
    if b == 0 {
        return Err(Error::InvalidParameter("bag count must be >= 1".into()));
    }
    let mut sum = NeumaierSum::new();
    for _ in 0..b {
        sum.add(split_estimate(sample, alpha, m, tolerance, rng)?.v_hat);
    }
    Ok(sum.total() / b as f64)
}

/// Wilson score interval for a binomial proportion: `k` successes out of
/// `trials`, two-sided at the given `level`. Endpoints are clipped to
/// `[0, 1]` and pinned exactly at 0 and 1 for k = 0 and k = trials.
pub fn wilson_interval(k: usize, trials: usize, level: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter("wilson needs trials >= 1".into()));
    }
    if k > trials {
        return Err(Error::InvalidParameter(format!(
            "successes {k} exceed trials {trials}"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence level must lie in (0,1), got {level}"
        )));
    }
    let n = trials as f64;
    let p = k as f64 / n;
    let z = normal_quantile(1.0 - (1.0 - level) / 2.0);
    let z2n = z * z / n;
    let denom = 1.0 + z2n;
    let center = (p + 0.5 * z2n) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + 0.25 * z2n / n).sqrt();
    let lo = if k == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, 1.0)
    };
    let hi = if k == trials {
        1.0
    } else {
        (center + half).clamp(0.0, 1.0)
    };
    Ok((lo, hi))
}

/// Maps a Wilson interval for the outside proportion through the volume
/// correction `v(p) = mu / max(1 - p, 1/2)`, which is nondecreasing in `p`,
/// so the endpoints stay ordered and the interval always contains `v_hat`.
pub fn volume_ci(split: &SplitResult, level: f64) -> Result<VolumeInterval> {
    let (p_lo, p_hi) = wilson_interval(split.outside_count, split.n - split.m, level)?;
    let v = |p: f64| split.mu_hat.value / (1.0 - p).max(0.5);
    Ok(VolumeInterval {
        lower: v(p_lo),
        upper: v(p_hi),
        level,
    })
}

/// Standard normal quantile (inverse CDF), Wichura's AS 241 double-precision
/// rational approximations; absolute error below 1e-15 over (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile defined on (0,1), got {p}");
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = (-r.ln()).sqrt();
    let val = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

const A: [f64; 8] = [
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
];
const B: [f64; 8] = [
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
];
const C: [f64; 8] = [
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
];
const D: [f64; 8] = [
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
];
const E: [f64; 8] = [
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
];
const F: [f64; 8] = [
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normal_quantile_reference_values() {
        assert_relative_eq!(normal_quantile(0.5), 0.0, epsilon = 1e-15);
        assert_relative_eq!(normal_quantile(0.975), 1.959963984540054, epsilon = 1e-12);
        assert_relative_eq!(normal_quantile(0.95), 1.6448536269514722, epsilon = 1e-12);
        assert_relative_eq!(normal_quantile(0.999), 3.090232306167813, epsilon = 1e-11);
        assert_relative_eq!(
            normal_quantile(0.025),
            -normal_quantile(0.975),
            epsilon = 1e-14
        );
        assert_relative_eq!(normal_quantile(1e-10), -6.361340902404056, epsilon = 1e-9);
    }

    #[test]
    fn wilson_pinned_endpoints() {
        let (lo, _) = wilson_interval(0, 10, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        let (_, hi) = wilson_interval(10, 10, 0.95).unwrap();
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn wilson_symmetric_case() {
        let (lo, hi) = wilson_interval(5, 10, 0.95).unwrap();
        // Symmetric about 1/2 with endpoints near (0.2366, 0.7634); the
        // digits are pinned by the score-inversion oracle below.
        assert_relative_eq!(lo + hi, 1.0, epsilon = 1e-12);
        assert!((lo - 0.2366).abs() < 2e-4, "lo = {lo}");
        assert!((hi - 0.7634).abs() < 2e-4, "hi = {hi}");
        let (olo, ohi) = crate::reference::wilson_by_score_inversion(5, 10, 0.95);
        assert_relative_eq!(lo, olo, epsilon = 1e-9);
        assert_relative_eq!(hi, ohi, epsilon = 1e-9);
    }

    #[test]
    fn wilson_matches_score_inversion_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let trials = rng.random_range(1..400usize);
            let k = rng.random_range(0..=trials);
            let level = rng.random_range(0.5..0.995);
            let (lo, hi) = wilson_interval(k, trials, level).unwrap();
            let (olo, ohi) = crate::reference::wilson_by_score_inversion(k, trials, level);
            assert!(
                (lo - olo).abs() < 1e-9 && (hi - ohi).abs() < 1e-9,
                "k={k} n={trials} level={level}: ({lo},{hi}) vs ({olo},{ohi})"
            );
        }
    }

    #[test]
    fn wilson_rejects_bad_arguments() {
        assert!(wilson_interval(1, 0, 0.95).is_err());
        assert!(wilson_interval(11, 10, 0.95).is_err());
        assert!(wilson_interval(1, 10, 0.0).is_err());
        assert!(wilson_interval(1, 10, 1.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn wilson_nesting(k in 0usize..200, extra in 0usize..200) {
            let trials = k + extra + 1;
            let (lo90, hi90) = wilson_interval(k, trials, 0.90).unwrap();
            let (lo95, hi95) = wilson_interval(k, trials, 0.95).unwrap();
            proptest::prop_assert!(lo95 <= lo90 && hi90 <= hi95);
        }
    }

    #[test]
    fn plug_in_single_point_is_zero() {
        let est = plug_in(&[Point { x: 0.3, y: 0.0 }], 1.0, 1e-6);
        // Degenerate sample still yields a certified zero.
        let est = est.unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn split_rejects_bad_m() {
        let pts = [Point { x: 0.0, y: 0.0 }, Point { x: 1.0, y: 0.0 }];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(split_estimate(&pts, 1.0, 0, 1e-3, &mut rng).is_err());
        assert!(split_estimate(&pts, 1.0, 2, 1e-3, &mut rng).is_err());
        assert!(split_estimate(&pts[..1], 1.0, 1, 1e-3, &mut rng).is_err());
    }

    #[test]
    fn split_identity_branch_on_duplicate_pair() {
        // Both permutations give a second-subsample point coinciding with
        // the hull point, so p_hat = 0 and the identity branch is taken.
        let pts = [Point { x: 0.5, y: 0.5 }, Point { x: 0.5, y: 0.5 }];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let res = split_estimate(&pts, 1.0, 1, 1e-6, &mut rng).unwrap();
        assert_eq!(res.p_hat, 0.0);
        assert_eq!(res.outside_count, 0);
        assert!(!res.clamped);
        assert_eq!(res.v_hat, res.mu_hat.value);
    }

    #[test]
    fn split_clamp_branch_on_scattered_points() {
        // All pairwise distances exceed 2*alpha: every hull is a finite set
        // of isolated points, so every second-subsample point is outside and
        // the denominator clamps at 1/2.
        let pts: Vec<Point> = (0..10)
            .map(|i| Point {
                x: 10.0 * i as f64,
                y: 0.0,
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let res = split_estimate(&pts, 1.0, 5, 1e-6, &mut rng).unwrap();
        assert_eq!(res.p_hat, 1.0);
        assert!(res.clamped);
        assert_eq!(res.v_hat, 2.0 * res.mu_hat.value);
        assert_eq!(res.v_hat, 0.0);
    }

    #[test]
    fn split_formula_contract_on_annulus() {
        let domain = domains::annulus(0.25, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sample = domain.sample(400, &mut rng).unwrap();
        let res = split_estimate(&sample, 0.25, 200, 1e-3, &mut rng).unwrap();
        assert_eq!(res.n, 400);
        assert_eq!(res.m, 200);
        assert_relative_eq!(res.p_hat, res.outside_count as f64 / 200.0);
        let denom = (1.0 - res.p_hat).max(0.5);
        assert_relative_eq!(res.v_hat, res.mu_hat.value / denom);
        assert!(res.v_hat >= res.mu_hat.value && res.v_hat <= 2.0 * res.mu_hat.value);
        // The estimate should be in the right ballpark of the true area.
        assert!((res.v_hat - domain.area()).abs() / domain.area() < 0.2);
    }

    #[test]
    fn split_scale_consistency() {
        // Scaling coordinates and alpha by a power of two scales areas by
        // its square and leaves the outside count untouched.
        let domain = domains::annulus(0.25, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sample = domain.sample(300, &mut rng).unwrap();
        let scaled: Vec<Point> = sample
            .iter()
            .map(|p| Point {
                x: 4.0 * p.x,
                y: 4.0 * p.y,
            })
            .collect();
        let mut rng_a = ChaCha8Rng::seed_from_u64(77);
        let mut rng_b = rng_a.clone();
        let base = split_estimate(&sample, 0.25, 150, 1e-4, &mut rng_a).unwrap();
        let big = split_estimate(&scaled, 1.0, 150, 16e-4, &mut rng_b).unwrap();
        assert_eq!(base.outside_count, big.outside_count);
        assert_eq!(base.p_hat, big.p_hat);
        assert_relative_eq!(big.mu_hat.value, 16.0 * base.mu_hat.value, epsilon = 1e-12);
        assert_relative_eq!(big.v_hat, 16.0 * base.v_hat, epsilon = 1e-12);
    }

    #[test]
    fn bagged_mean_of_manual_splits() {
        let domain = domains::annulus(0.25, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let sample = domain.sample(200, &mut rng).unwrap();
        let mut rng_a = ChaCha8Rng::seed_from_u64(99);
        let mut rng_b = rng_a.clone();
        let bagged = bagged_estimate(&sample, 0.25, 100, 7, 1e-3, &mut rng_a).unwrap();
        let singles: Vec<f64> = (0..7)
            .map(|_| {
                split_estimate(&sample, 0.25, 100, 1e-3, &mut rng_b)
                    .unwrap()
                    .v_hat
            })
            .collect();
        let mean = singles.iter().sum::<f64>() / 7.0;
        assert_relative_eq!(bagged, mean, epsilon = 1e-12);
        let lo = singles.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = singles.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(bagged >= lo && bagged <= hi);
        assert!(bagged_estimate(&sample, 0.25, 100, 0, 1e-3, &mut rng_a).is_err());
    }

    #[test]
    fn volume_ci_identity_at_zero_outside() {
        let pts = [Point { x: 0.5, y: 0.5 }, Point { x: 0.5, y: 0.5 }];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let res = split_estimate(&pts, 1.0, 1, 1e-6, &mut rng).unwrap();
        let ci = volume_ci(&res, 0.95).unwrap();
        // p_lo = 0 maps to exactly mu.
        assert_eq!(ci.lower, res.mu_hat.value);
        assert!(ci.contains(res.v_hat));
    }

    #[test]
    fn volume_ci_contains_v_hat_and_orders_endpoints() {
        let domain = domains::annulus(0.25, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let sample = domain.sample(150, &mut rng).unwrap();
            let res = split_estimate(&sample, 0.25, 75, 3e-3, &mut rng).unwrap();
            for level in [0.5, 0.8, 0.95] {
                let ci = volume_ci(&res, level).unwrap();
                assert!(ci.lower <= ci.upper);
                assert!(ci.contains(res.v_hat));
            }
        }
    }

    #[test]
    fn second_subsample_counts_are_binomial_given_the_hull() {
        // Hold the hull fixed; fresh second subsamples make the outside
        // count Bin(n - m, p_tilde) with p_tilde = mu(S minus hull)/mu(S).
        let domain = domains::annulus(0.25, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let first = domain.sample(100, &mut rng).unwrap();
        let hull = AlphaHull::build(&first, 0.25).unwrap();

        // High-precision Monte Carlo estimate of p_tilde.
        let probe = domain.sample(400_000, &mut rng).unwrap();
        let p_tilde =
            probe.iter().filter(|p| !hull.contains(**p)).count() as f64 / probe.len() as f64;

        let trials = 40;
        let reps = 2000;
        let mut counts = vec![0usize; trials + 1];
        for _ in 0..reps {
            let second = domain.sample(trials, &mut rng).unwrap();
            let k = second.iter().filter(|p| !hull.contains(**p)).count();
            counts[k] += 1;
        }
        // Chi-square against the binomial pmf with bins pooled to expected
        // count >= 5.
        let ln_pmf = |k: usize| -> f64 {
            let mut ln_c = 0.0;
            for i in 0..k {
                ln_c += ((trials - i) as f64).ln() - ((i + 1) as f64).ln();
            }
            ln_c + k as f64 * p_tilde.ln() + (trials - k) as f64 * (1.0 - p_tilde).ln()
        };
        let mut chi2 = 0.0;
        let mut df: i64 = -1;
        let mut obs_pool = 0.0;
        let mut exp_pool = 0.0;
        for k in 0..=trials {
            obs_pool += counts[k] as f64;
            exp_pool += reps as f64 * ln_pmf(k).exp();
            if exp_pool >= 5.0 {
                chi2 += (obs_pool - exp_pool) * (obs_pool - exp_pool) / exp_pool;
                df += 1;
                obs_pool = 0.0;
                exp_pool = 0.0;
            }
        }
        if exp_pool > 0.0 {
            chi2 += (obs_pool - exp_pool) * (obs_pool - exp_pool) / exp_pool;
            df += 1;
        }
        assert!(df >= 3, "degenerate binning, df = {df}");
        let crit = crate::reference::chi_square_critical(df as usize, 0.001);
        assert!(
            chi2 < crit,
            "chi2 {chi2} exceeds the 99.9% critical value {crit} (df {df})"
        );
    }
}
