//! Brute-force reference implementations used by the test suites.
//!
//! Everything here trades speed for transparency and stays independent of
//! the production query paths: membership is decided by literally searching
//! for an empty-ball center, areas by plain Monte Carlo, intervals by
//! root-finding on the defining test. None of these functions are used by
//! the estimators themselves.

use rand::Rng;

use crate::geom::Point;

/// Brute-force membership in the alpha-convex hull: `q` is outside iff some
/// center `y` with `|y - q| < alpha` keeps every sample point at distance at
/// least `alpha`. Candidate centers are `q` itself, all pairwise
/// circle-circle intersection vertices, and a square grid of the given
/// `step` covering the alpha-disk around `q`.
///
/// Queries whose clearance is within a couple of grid steps of alpha are
/// genuinely ambiguous at this resolution; callers exclude that band.
pub fn contains_oracle(points: &[Point], alpha: f64, q: Point, step: f64) -> bool {
    // Nearest samples first so covered candidates fail fast.
    let mut by_dist: Vec<Point> = points.to_vec();
    by_dist.sort_by(|a, b| a.dist_sq(q).partial_cmp(&b.dist_sq(q)).unwrap());
    let a2 = alpha * alpha;
    // Mirror the production boundary slack: a witness ball must cover q by
    // a clear margin, and intersection vertices (which sit at distance
    // exactly alpha from their parents) count as free with the same slack.
    let cover2 = (alpha - 1e-9) * (alpha - 1e-9);
    let free = |y: Point| -> bool { by_dist.iter().all(|p| p.dist_sq(y) >= a2) };
    let witness = |y: Point| -> bool { y.dist_sq(q) < cover2 && free(y) };

    if witness(q) {
        return false;
    }
    for v in circle_intersection_vertices(points, alpha) {
        let nearly_free = by_dist.iter().all(|p| p.dist(v) >= alpha - 1e-9);
        if v.dist_sq(q) < cover2 && nearly_free {
            return false;
        }
    }
    let steps = (alpha / step).ceil() as i64;
    for iy in -steps..=steps {
        for ix in -steps..=steps {
            let y = Point {
                x: q.x + ix as f64 * step,
                y: q.y + iy as f64 * step,
            };
            if witness(y) {
                return false;
            }
        }
    }
    true
}

/// Brute-force clearance: the smallest distance from `q` to a grid point (or
/// intersection vertex) that is a legal empty-ball center, searched within
/// `radius` of `q`. Converges to the true clearance from above as `step`
/// shrinks, up to one grid diagonal.
pub fn clearance_oracle(points: &[Point], alpha: f64, q: Point, radius: f64, step: f64) -> f64 {
    let a2 = alpha * alpha;
    let free = |y: Point| -> bool { points.iter().all(|p| p.dist_sq(y) >= a2) };
    if free(q) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for v in circle_intersection_vertices(points, alpha) {
        if free(v) {
            best = best.min(v.dist(q));
        }
    }
    let steps = (radius / step).ceil() as i64;
    for iy in -steps..=steps {
        for ix in -steps..=steps {
            let y = Point {
                x: q.x + ix as f64 * step,
                y: q.y + iy as f64 * step,
            };
            let d = y.dist(q);
            if d < best && free(y) {
                best = d;
            }
        }
    }
    best
}

/// Intersection points of all pairs of alpha-circles around the sample.
/// These are the corners of the free space, so thin free pockets that a
/// grid would miss still expose a candidate center.
fn circle_intersection_vertices(points: &[Point], alpha: f64) -> Vec<Point> {
    let mut out = Vec::new();
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let d = a.dist(b);
            if d < 1e-12 || d >= 2.0 * alpha {
                continue;
            }
            let mx = 0.5 * (a.x + b.x);
            let my = 0.5 * (a.y + b.y);
            let half = (alpha * alpha - 0.25 * d * d).sqrt();
            let ux = (b.x - a.x) / d;
            let uy = (b.y - a.y) / d;
            out.push(Point {
                x: mx - half * uy,
                y: my + half * ux,
            });
            out.push(Point {
                x: mx + half * uy,
                y: my - half * ux,
            });
        }
    }
    out
}

/// Plain Monte Carlo area of `{q in bbox : inside(q)}`; returns the
/// estimate and its standard error.
pub fn monte_carlo_area<F: Fn(Point) -> bool, R: Rng>(
    inside: F,
    lo: Point,
    hi: Point,
    samples: usize,
    rng: &mut R,
) -> (f64, f64) {
    let bbox_area = (hi.x - lo.x) * (hi.y - lo.y);
    let mut hits = 0u64;
    for _ in 0..samples {
        let q = Point {
            x: rng.random_range(lo.x..hi.x),
            y: rng.random_range(lo.y..hi.y),
        };
        if inside(q) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let se = bbox_area * (p * (1.0 - p) / samples as f64).sqrt();
    (bbox_area * p, se)
}

/// Wilson interval by direct inversion of the score test: the interval ends
/// are the roots of `(p_hat - p)^2 = z^2 p (1 - p) / n`, found by bisection
/// rather than through the closed form.
pub fn wilson_by_score_inversion(k: usize, trials: usize, level: f64) -> (f64, f64) {
    let n = trials as f64;
    let p_hat = k as f64 / n;
    let z = crate::estimators::normal_quantile(1.0 - (1.0 - level) / 2.0);
    let g = |p: f64| (p_hat - p) * (p_hat - p) - z * z * p * (1.0 - p) / n;
    // g is >= 0 at distance and < 0 near p_hat; bisect on each side of p_hat.
    let root = |mut outside: f64, mut inside: f64| -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (outside + inside);
            if g(m) < 0.0 {
                inside = m;
            } else {
                outside = m;
            }
        }
        0.5 * (outside + inside)
    };
    let lo = if g(0.0) <= 0.0 { 0.0 } else { root(0.0, p_hat) };
    let hi = if g(1.0) <= 0.0 { 1.0 } else { root(1.0, p_hat) };
    (lo, hi)
}

/// One-sided sign-test p-value: `P(Bin(n, 1/2) >= k)`.
pub fn sign_test_p_value(k: usize, n: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let ln2 = std::f64::consts::LN_2;
    // ln C(n, i) built incrementally from i = k upward.
    let mut ln_c = 0.0;
    for i in 0..k {
        ln_c += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    let mut total = 0.0;
    let mut ln_term = ln_c - n as f64 * ln2;
    total += ln_term.exp();
    for i in k..n {
        ln_term += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        total += ln_term.exp();
    }
    total.min(1.0)
}

/// Upper-tail chi-square critical value by the Wilson-Hilferty cube
/// approximation; adequate for goodness-of-fit thresholds at moderate df.
pub fn chi_square_critical(df: usize, upper_tail: f64) -> f64 {
    let z = crate::estimators::normal_quantile(1.0 - upper_tail);
    let k = df as f64;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}
