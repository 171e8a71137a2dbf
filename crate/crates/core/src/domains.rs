//! Sampling regions with exact areas and exact membership: annuli, ellipses,
//! balls, a two-density disk, and smoothly dented balls.
//!
//! Every domain offers a sampler driven by a caller-owned RNG, so replicated
//! experiments stay reproducible, and an exact membership predicate used by
//! tests to cross-check areas against Monte Carlo.

use std::f64::consts::{PI, SQRT_2, TAU};

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::geom::{circular_segment_area, Point};
use crate::{Error, Result};

/// A sampling region: exact area, bounding box, membership, and a sampler.
///
/// All variants sample from the uniform distribution on the region except
/// [`Domain::NonuniformDisk`], whose density is piecewise constant on the
/// inner disk of radius 1/2 and the outer ring of the unit disk.
#[derive(Debug, Clone)]
pub enum Domain {
    Annulus { r_in: f64, r_out: f64 },
    Ellipse { a: f64, b: f64 },
    Ball { radius: f64 },
    DentWorld(DentWorld),
    NonuniformDisk { a: f64, b: f64 },
}

/// `{x : r_in <= |x| <= r_out}` with a direct radial sampler.
pub fn annulus(r_in: f64, r_out: f64) -> Result<Domain> {
    if !(0.0 < r_in && r_in < r_out && r_out.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "annulus requires 0 < r_in < r_out, got ({r_in}, {r_out})"
        )));
    }
    Ok(Domain::Annulus { r_in, r_out })
}

/// Solid ellipse with semi-axes `a`, `b`, sampled as an affine image of the
/// uniform unit disk.
pub fn ellipse(a: f64, b: f64) -> Result<Domain> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "ellipse requires positive axes, got ({a}, {b})"
        )));
    }
    Ok(Domain::Ellipse { a, b })
}

/// Disk of the given radius centered at the origin.
pub fn ball(radius: f64) -> Result<Domain> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "ball requires a positive radius, got {radius}"
        )));
    }
    Ok(Domain::Ball { radius })
}

/// Unit disk sampled with density proportional to `a` on `|x| <= 1/2` and
/// `b` on the outer ring. The region itself is still the unit disk; only the
/// sampling law is non-uniform.
pub fn nonuniform_disk(a: f64, b: f64) -> Result<Domain> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "nonuniform_disk requires positive weights, got ({a}, {b})"
        )));
    }
    Ok(Domain::NonuniformDisk { a, b })
}

/// A ball of radius `r0` with smooth dents: each active dent replaces the
/// cap beyond a cutting chord with the set swept by balls of radius `r`
/// rolling inside the capped ball, so both the set and its complement keep
/// the `r`-rolling property.
#[derive(Debug, Clone)]
pub struct DentWorld {
    r0: f64,
    r: f64,
    eps: f64,
    theta: f64,
    h: f64,
    /// Unit direction of each dent slot (equally spaced).
    dent_dirs: Vec<(f64, f64)>,
    /// Which slots are active.
    omega: Vec<bool>,
    /// Radius of the eroded ball, `r0 - r`.
    eroded_radius: f64,
    /// Offset of the eroded cutting half-plane, `r0 - h - r`.
    plane_offset: f64,
    eta: f64,
    area: f64,
}

/// Builds a dent world. `omega` fixes the number of equally spaced dent
/// slots and which of them are active; slot directions must be separated by
/// chord distance greater than `2*eps` for the dents to stay disjoint.
pub fn dent_world(r0: f64, r: f64, eps: f64, omega: Vec<bool>) -> Result<Domain> {
    if !(r > 0.0 && r0 > 2.0 * r && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dent world requires 0 < 2r < r0, got r0={r0}, r={r}"
        )));
    }
    if !(eps > 0.0 && eps < r0 * SQRT_2) {
        return Err(Error::InvalidParameter(format!(
            "dent scale must satisfy 0 < eps < r0*sqrt(2), got eps={eps}"
        )));
    }
    let slots = omega.len();
    if slots >= 2 {
        let chord = 2.0 * r0 * (PI / slots as f64).sin();
        if chord <= 2.0 * eps {
            return Err(Error::InvalidParameter(format!(
                "packing infeasible: {slots} dent directions on radius {r0} \
                 have chord spacing {chord:.6} <= 2*eps = {:.6}",
                2.0 * eps
            )));
        }
    }
    let theta = (1.0 - eps * eps / (2.0 * r0 * r0)).acos();
    let h = (r0 - r) * eps * eps / (2.0 * r0 * r0);
    let eroded_radius = r0 - r;
    let plane_offset = r0 - h - r;
    debug_assert!(plane_offset > 0.0 && plane_offset < eroded_radius);

    let dent_dirs: Vec<(f64, f64)> = (0..slots)
        .map(|j| {
            let a = TAU * j as f64 / slots.max(1) as f64;
            (a.cos(), a.sin())
        })
        .collect();

    let mut world = DentWorld {
        r0,
        r,
        eps,
        theta,
        h,
        dent_dirs,
        omega,
        eroded_radius,
        plane_offset,
        eta: 0.0,
        area: 0.0,
    };
    world.eta = world.compute_eta(1e-6)?;
    let active = world.omega.iter().filter(|&&b| b).count();
    world.area = PI * r0 * r0 - active as f64 * world.eta;
    Ok(Domain::DentWorld(world))
}

impl DentWorld {
    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn roll_radius(&self) -> f64 {
        self.r
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Half-aperture of the cone subtended by one dent chord,
    /// `acos(1 - eps^2 / (2 r0^2))`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Depth of the dent's cutting plane below the sphere,
    /// `(r0 - r) * eps^2 / (2 r0^2)`.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dent_directions(&self) -> &[(f64, f64)] {
        &self.dent_dirs
    }

    pub fn omega(&self) -> &[bool] {
        &self.omega
    }

    /// Area removed by one active dent.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Distance from the frame point `(t, s)` (dent axis coordinates) to the
    /// eroded body: the disk of radius `r0 - r` cut by the half-plane
    /// `t <= r0 - h - r`. Exact three-branch projection onto the convex
    /// intersection.
    fn eroded_distance(&self, t: f64, s: f64) -> f64 {
        let rr = self.eroded_radius;
        let c0 = self.plane_offset;
        let rho = (t * t + s * s).sqrt();
        // Projection onto the disk alone; if it respects the half-plane it
        // is the projection onto the intersection.
        let pd_t = if rho > rr { t * (rr / rho) } else { t };
        if pd_t <= c0 {
            return (rho - rr).max(0.0);
        }
        // Here t > c0. Projection onto the half-plane alone is (c0, s).
        if c0 * c0 + s * s <= rr * rr {
            return t - c0;
        }
        // Corner region: nearest point is an end of the cutting chord.
        let w = (rr * rr - c0 * c0).sqrt();
        let ds = s.abs() - w;
        ((t - c0) * (t - c0) + ds * ds).sqrt()
    }

    /// Membership: inside the ball and, for each active dent, within `r` of
    /// the eroded body (dilation of the erosion).
    pub fn contains(&self, p: Point) -> bool {
        let rho2 = p.x * p.x + p.y * p.y;
        if rho2 > self.r0 * self.r0 {
            return false;
        }
        for (j, &(ux, uy)) in self.dent_dirs.iter().enumerate() {
            if !self.omega[j] {
                continue;
            }
            let t = p.x * ux + p.y * uy;
            let s = -p.x * uy + p.y * ux;
            if self.eroded_distance(t, s) > self.r {
                return false;
            }
        }
        true
    }

    /// Area removed by one dent, by adaptive quadrature along the dent axis
    /// of the width difference between the ball slice and the dented slice.
    ///
    /// The difference vanishes identically for axis coordinates below
    /// `r0 - eps^2/(2 r0)` (the slice extremes there lie outside the dent
    /// sector), so the integral runs only over the dent band and converges
    /// at the dent's own scale. The result must land between the two cap
    /// areas of the ball cut at depths `h` and `eps^2/(2 r0)`, which
    /// sandwich the dented body.
    fn compute_eta(&self, rel_tol: f64) -> Result<f64> {
        let (cap_shallow, cap_deep) = self.bracketing_caps()?;
        let r = self.r;
        let r0 = self.r0;
        // Half-width of Q = {p : dist(p, eroded body) <= r} at coordinate t,
        // by bisection; the distance is even and nondecreasing in |s|.
        let q_half_width = |t: f64| -> f64 {
            if self.eroded_distance(t, 0.0) > r {
                return 0.0;
            }
            let mut lo = 0.0;
            let mut hi = r0 + 1.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if self.eroded_distance(t, mid) <= r {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let gap = |t: f64| -> f64 {
            let b0 = if t.abs() < r0 {
                (r0 * r0 - t * t).sqrt()
            } else {
                0.0
            };
            (2.0 * (b0 - q_half_width(t))).max(0.0)
        };
        let dent_start = r0 - self.eps * self.eps / (2.0 * r0);
        let t0 = (dent_start - 0.05 * (r0 - dent_start)).max(-r0);
        let tol_abs = (rel_tol * cap_shallow).max(1e-13);
        let eta = adaptive_simpson(&gap, t0, r0, tol_abs, 52)?;
        let slack = 3.0 * tol_abs + 1e-12;
        assert!(
            eta >= cap_shallow - slack && eta <= cap_deep + slack,
            "dent area {eta} escapes its cap bracket [{cap_shallow}, {cap_deep}]"
        );
        Ok(eta)
    }

    /// Cap areas of the full ball cut at the two dent planes: the shallow
    /// one at depth `h` (a lower bound for the dent area) and the deep one
    /// at depth `eps^2/(2 r0)` (an upper bound).
    pub fn bracketing_caps(&self) -> Result<(f64, f64)> {
        let cap = |depth: f64| -> Result<f64> {
            let chord = 2.0 * (depth * (2.0 * self.r0 - depth)).sqrt();
            circular_segment_area(self.r0, chord.min(2.0 * self.r0))
        };
        Ok((cap(self.h)?, cap(self.eps * self.eps / (2.0 * self.r0))?))
    }
}

impl Domain {
    /// Canonical spec string, reusable as the config-file grammar.
    pub fn name(&self) -> String {
        match self {
            Domain::Annulus { r_in, r_out } => format!("annulus({r_in},{r_out})"),
            Domain::Ellipse { a, b } => format!("ellipse({a},{b})"),
            Domain::Ball { radius } => format!("ball({radius})"),
            Domain::DentWorld(w) => format!(
                "dent_world(r0={},r={},eps={},dents={})",
                w.r0,
                w.r,
                w.eps,
                w.omega.len()
            ),
            Domain::NonuniformDisk { a, b } => format!("nonuniform_disk(a={a},b={b})"),
        }
    }

    /// Exact Lebesgue measure.
    pub fn area(&self) -> f64 {
        match self {
            Domain::Annulus { r_in, r_out } => PI * (r_out * r_out - r_in * r_in),
            Domain::Ellipse { a, b } => PI * a * b,
            Domain::Ball { radius } => PI * radius * radius,
            Domain::DentWorld(w) => w.area,
            Domain::NonuniformDisk { .. } => PI,
        }
    }

    /// Axis-aligned bounding box as `(min, max)` corners.
    pub fn bbox(&self) -> (Point, Point) {
        let (hx, hy) = match self {
            Domain::Annulus { r_out, .. } => (*r_out, *r_out),
            Domain::Ellipse { a, b } => (*a, *b),
            Domain::Ball { radius } => (*radius, *radius),
            Domain::DentWorld(w) => (w.r0, w.r0),
            Domain::NonuniformDisk { .. } => (1.0, 1.0),
        };
        (Point { x: -hx, y: -hy }, Point { x: hx, y: hy })
    }

    /// Exact membership.
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Domain::Annulus { r_in, r_out } => {
                let r2 = p.x * p.x + p.y * p.y;
                r2 >= r_in * r_in && r2 <= r_out * r_out
            }
            Domain::Ellipse { a, b } => {
                let (u, v) = (p.x / a, p.y / b);
                u * u + v * v <= 1.0
            }
            Domain::Ball { radius } => p.x * p.x + p.y * p.y <= radius * radius,
            Domain::DentWorld(w) => w.contains(p),
            Domain::NonuniformDisk { .. } => p.x * p.x + p.y * p.y <= 1.0,
        }
    }

    /// Largest rolling radius the region is claimed to satisfy on both
    /// sides, when one is known.
    pub fn rolling_radius(&self) -> Option<f64> {
        match self {
            Domain::Annulus { r_in, r_out } => Some(r_in.min(0.5 * (r_out - r_in))),
            Domain::Ellipse { a, b } => {
                let (hi, lo) = (a.max(*b), a.min(*b));
                Some(lo * lo / hi)
            }
            Domain::Ball { radius } => Some(*radius),
            Domain::DentWorld(w) => Some(w.r),
            Domain::NonuniformDisk { .. } => Some(1.0),
        }
    }

    /// Sampling-bias constant of the non-uniform disk, `b / (a/4 + 3b/4)`;
    /// below one the split estimator is biased downward, above one upward.
    pub fn bias_constant(&self) -> Option<f64> {
        match self {
            Domain::NonuniformDisk { a, b } => Some(b / (a / 4.0 + 3.0 * b / 4.0)),
            _ => None,
        }
    }

    /// Draws n IID points from the domain's sampling law.
    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Vec<Point>> {
        let mut out = Vec::with_capacity(n);
        match self {
            Domain::Annulus { r_in, r_out } => {
                for _ in 0..n {
                    let u: f64 = rng.random();
                    let radius = (u * (r_out * r_out - r_in * r_in) + r_in * r_in).sqrt();
                    let angle: f64 = rng.random_range(0.0..TAU);
                    out.push(Point {
                        x: radius * angle.cos(),
                        y: radius * angle.sin(),
                    });
                }
            }
            Domain::Ellipse { a, b } => {
                for _ in 0..n {
                    let radius = rng.random::<f64>().sqrt();
                    let angle: f64 = rng.random_range(0.0..TAU);
                    out.push(Point {
                        x: a * radius * angle.cos(),
                        y: b * radius * angle.sin(),
                    });
                }
            }
            Domain::Ball { radius } => {
                for _ in 0..n {
                    let r = radius * rng.random::<f64>().sqrt();
                    let angle: f64 = rng.random_range(0.0..TAU);
                    out.push(Point {
                        x: r * angle.cos(),
                        y: r * angle.sin(),
                    });
                }
            }
            Domain::DentWorld(_) => {
                let (lo, hi) = self.bbox();
                let mut attempts = 0usize;
                while out.len() < n {
                    attempts += 1;
                    if attempts > 10_000 && out.len() * 10_000 < attempts {
                        return Err(Error::RejectionFloor {
                            accepted: out.len(),
                            attempts,
                        });
                    }
                    let p = Point {
                        x: rng.random_range(lo.x..hi.x),
                        y: rng.random_range(lo.y..hi.y),
                    };
                    if self.contains(p) {
                        out.push(p);
                    }
                }
            }
            Domain::NonuniformDisk { a, b } => {
                let p_inner = a / (a + 3.0 * b);
                for _ in 0..n {
                    let pick_inner = rng.random::<f64>() < p_inner;
                    let u: f64 = rng.random();
                    let radius = if pick_inner {
                        0.5 * u.sqrt()
                    } else {
                        (0.25 + 0.75 * u).sqrt()
                    };
                    let angle: f64 = rng.random_range(0.0..TAU);
                    out.push(Point {
                        x: radius * angle.cos(),
                        y: radius * angle.sin(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Poisson point process with the given constant intensity: the count is
    /// Poisson with mean `lambda * area`, the locations follow the domain's
    /// sampling law.
    pub fn sample_poisson<R: Rng>(&self, lambda: f64, rng: &mut R) -> Result<Vec<Point>> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "poisson intensity must be positive, got {lambda}"
            )));
        }
        let mean = lambda * self.area();
        let poisson = Poisson::new(mean)
            .map_err(|e| Error::InvalidParameter(format!("poisson mean {mean}: {e}")))?;
        let n = poisson.sample(rng) as usize;
        self.sample(n, rng)
    }
}

/// Parses the domain grammar: `annulus(0.25,1)`, `ellipse(5,2)`, `ball(3)`,
/// `dent_world(r0=3,r=1.2,eps=0.5,dents=4)`, `nonuniform_disk(a=4,b=0.5)`.
pub fn parse(spec: &str) -> Result<Domain> {
    let bad = |reason: &str| Error::DomainSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let s = spec.trim();
    let open = s.find('(').ok_or_else(|| bad("missing '('"))?;
    if !s.ends_with(')') {
        return Err(bad("missing ')'"));
    }
    let name = &s[..open];
    let args_str = &s[open + 1..s.len() - 1];
    let parts: Vec<&str> = if args_str.trim().is_empty() {
        Vec::new()
    } else {
        args_str.split(',').map(str::trim).collect()
    };

    // Arguments may be positional or key=value.
    let lookup = |key: &str, position: usize| -> Result<f64> {
        for part in &parts {
            if let Some((k, v)) = part.split_once('=') {
                if k.trim() == key {
                    return v
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| bad(&format!("bad value for `{key}`")));
                }
            }
        }
        parts
            .get(position)
            .filter(|p| !p.contains('='))
            .ok_or_else(|| bad(&format!("missing argument `{key}`")))?
            .parse::<f64>()
            .map_err(|_| bad(&format!("bad value for `{key}`")))
    };

    match name {
        "annulus" => annulus(lookup("r_in", 0)?, lookup("r_out", 1)?),
        "ellipse" => ellipse(lookup("a", 0)?, lookup("b", 1)?),
        "ball" => ball(lookup("r", 0)?),
        "nonuniform_disk" => nonuniform_disk(lookup("a", 0)?, lookup("b", 1)?),
        "dent_world" => {
            let dents = lookup("dents", 3)? as usize;
            dent_world(
                lookup("r0", 0)?,
                lookup("r", 1)?,
                lookup("eps", 2)?,
                vec![true; dents],
            )
        }
        other => Err(bad(&format!("unknown domain `{other}`"))),
    }
}

/// Volume of a cap of the unit ball in dimension `d` cut at distance `1 - t`
/// from the center: `pi^{(d-1)/2} / Gamma((d+1)/2) * integral_0^{acos(1-t)}
/// sin^d(x) dx`, by adaptive quadrature.
pub fn cap_area(d: u32, t: f64) -> Result<f64> {
    if d < 1 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "cap depth {t} outside [0, 2]"
        )));
    }
    let upper = (1.0 - t).clamp(-1.0, 1.0).acos();
    let integrand = |x: f64| x.sin().powi(d as i32);
    let integral = adaptive_simpson(&integrand, 0.0, upper, 1e-12, 48)?;
    let coeff = PI.powf((d as f64 - 1.0) / 2.0) / gamma_half_integer(d + 1)?;
    Ok(coeff * integral)
}

/// `Gamma(n / 2)` for positive integer `n`, exact through the factorial and
/// double-factorial closed forms.
fn gamma_half_integer(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("gamma pole at 0".into()));
    }
    if n % 2 == 0 {
        let k = n / 2; // Gamma(k) = (k-1)!
        Ok((1..k).map(|i| i as f64).product())
    } else {
        // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
        let k = (n - 1) / 2;
        let mut v = PI.sqrt();
        for i in 1..=k {
            v *= (i as f64) - 0.5; // Gamma(x+1) = x Gamma(x)
        }
        Ok(v)
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
) -> Result<f64> {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> std::result::Result<f64, ()> {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(());
        }
        let l = recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)?;
        let r = recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)?;
        Ok(l + r)
    }

    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth).map_err(|_| Error::QuadratureDiverged {
        subdivisions: max_depth,
    })
}
