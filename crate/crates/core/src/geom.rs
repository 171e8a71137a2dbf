//! Planar geometric primitives: points, angular intervals on circles,
//! circle-circle coverage, circular arcs, convex hulls with a robust
//! orientation predicate, and a uniform grid index for neighbor queries.
//!
//! Everything here is immutable after construction and safe to query from
//! multiple threads.

use std::f64::consts::TAU;

use crate::{Error, Result};

/// A point in the plane. Coordinates are finite by construction when built
/// through [`Point::new`]; code that computes points from already-validated
/// inputs may use struct literals directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(Error::NonFiniteCoordinate { x, y })
        }
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    #[inline]
    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Exact sign of the orientation of the triangle `(a, b, c)`.
///
/// Positive for a counterclockwise turn, negative for clockwise, zero for
/// collinear. Backed by an adaptive-precision predicate, so the sign is exact
/// even when the fast floating-point evaluation would be ambiguous.
#[inline]
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can return TAU when a is a tiny negative number.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A counterclockwise angular interval on a circle: starts at `start`
/// (radians in `[0, 2π)`) and sweeps by `extent` (radians in `[0, 2π]`).
/// The full circle is represented by `extent == 2π` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularInterval {
    start: f64,
    extent: f64,
}

impl AngularInterval {
    /// Builds an interval, normalizing `start` modulo 2π and clamping
    /// `extent` into `[0, 2π]`.
    pub fn new(start: f64, extent: f64) -> Self {
        AngularInterval {
            start: normalize_angle(start),
            extent: extent.clamp(0.0, TAU),
        }
    }

    pub fn full() -> Self {
        AngularInterval {
            start: 0.0,
            extent: TAU,
        }
    }

    #[inline]
    pub fn start(&self) -> f64 {
        self.start
    }

    #[inline]
    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// End angle, normalized to `[0, 2π)`.
    pub fn end(&self) -> f64 {
        normalize_angle(self.start + self.extent)
    }

    pub fn is_full(&self) -> bool {
        self.extent >= TAU
    }

    /// Whether `angle` (any real) lies in the closed interval.
    pub fn contains(&self, angle: f64) -> bool {
        normalize_angle(angle - self.start) <= self.extent
    }
}

/// Disjoint union of angular intervals, sorted by start angle.
///
/// Intervals covering the whole circle collapse to a single full interval.
pub fn merge_intervals(intervals: &[AngularInterval]) -> Vec<AngularInterval> {
    circle_sweep(intervals).0
}

/// Complement of the union of `intervals` within the circle.
pub fn complement_intervals(intervals: &[AngularInterval]) -> Vec<AngularInterval> {
    circle_sweep(intervals).1
}

/// Computes (union, complement) of a set of angular intervals in one sweep
/// over their breakpoints. Both outputs are disjoint, sorted by start, and
/// wraparound runs are stitched back into single intervals across 0.
fn circle_sweep(intervals: &[AngularInterval]) -> (Vec<AngularInterval>, Vec<AngularInterval>) {
    if intervals.iter().any(|iv| iv.is_full()) {
        return (vec![AngularInterval::full()], Vec::new());
    }
    // Split wrapping intervals at 0 so every piece lies within [0, 2π].
    let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(intervals.len() + 4);
    for iv in intervals {
        if iv.extent <= 0.0 {
            continue;
        }
        let end = iv.start + iv.extent;
        if end <= TAU {
            pieces.push((iv.start, end));
        } else {
            pieces.push((iv.start, TAU));
            pieces.push((0.0, end - TAU));
        }
    }
    if pieces.is_empty() {
        return (Vec::new(), vec![AngularInterval::full()]);
    }

    let mut breaks: Vec<f64> = Vec::with_capacity(pieces.len() * 2 + 2);
    breaks.push(0.0);
    breaks.push(TAU);
    for &(s, e) in &pieces {
        breaks.push(s);
        breaks.push(e);
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    // A segment between consecutive breakpoints is covered iff its midpoint
    // is inside some piece; pieces never end strictly inside a segment.
    let covered: Vec<bool> = breaks
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            pieces.iter().any(|&(s, e)| s <= mid && mid <= e)
        })
        .collect();

    let runs = |want: bool| -> Vec<AngularInterval> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &c) in covered.iter().enumerate() {
            if c != want {
                continue;
            }
            let (s, e) = (breaks[i], breaks[i + 1]);
            match out.last_mut() {
                Some(last) if last.1 == s => last.1 = e,
                _ => out.push((s, e)),
            }
        }
        // Stitch a run ending at 2π to a run starting at 0.
        if out.len() > 1 {
            let first_at_zero = out[0].0 == 0.0;
            let last_at_tau = out.last().unwrap().1 == TAU;
            if first_at_zero && last_at_tau {
                let first = out.remove(0);
                let last = out.last_mut().unwrap();
                last.1 = first.1 + TAU;
            }
        }
        if out.len() == 1 && out[0].1 - out[0].0 >= TAU {
            return vec![AngularInterval::full()];
        }
        out.into_iter()
            .map(|(s, e)| AngularInterval::new(s, e - s))
            .collect()
    };

    (runs(true), runs(false))
}

/// The open angular interval of the circle of `radius` centered at `c1`
/// whose points lie strictly inside the open disk of the same radius
/// centered at `c2`. `None` when the disks are too far apart to cover
/// anything; near-tangent pairs (centers within 1e-9 of distance `2*radius`)
/// are treated as non-covering.
pub fn circle_circle_covered_interval(
    c1: Point,
    c2: Point,
    radius: f64,
) -> Result<Option<AngularInterval>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let d = c1.dist(c2);
    if d < 1e-12 {
        return Err(Error::DuplicateCenter { dist: d });
    }
    if d >= 2.0 * radius - 1e-9 {
        return Ok(None);
    }
    let half = (d / (2.0 * radius)).acos();
    let dir = (c2.y - c1.y).atan2(c2.x - c1.x);
    Ok(Some(AngularInterval::new(dir - half, 2.0 * half)))
}

/// Area between a chord and its minor arc: `R²(φ − sin φ)/2` with
/// `φ = 2·asin(chord/2R)`.
pub fn circular_segment_area(radius: f64, chord: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if !(0.0..=2.0 * radius).contains(&chord) {
        return Err(Error::InvalidParameter(format!(
            "chord {chord} outside [0, {}]",
            2.0 * radius
        )));
    }
    let phi = 2.0 * (chord / (2.0 * radius)).asin();
    Ok(radius * radius * 0.5 * phi_minus_sin(phi))
}

/// `φ − sin φ`, switching to the series for small φ where the direct
/// difference loses all significant digits.
pub(crate) fn phi_minus_sin(phi: f64) -> f64 {
    if phi.abs() < 1e-3 {
        let p2 = phi * phi;
        phi * p2 / 6.0 * (1.0 - p2 / 20.0 * (1.0 - p2 / 42.0))
    } else {
        phi - phi.sin()
    }
}

/// A circular arc: the part of the circle around `center` with `radius`
/// spanned by `interval`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub interval: AngularInterval,
}

impl Arc {
    pub fn new(center: Point, radius: f64, interval: AngularInterval) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "arc radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Arc {
            center,
            radius,
            interval,
        })
    }

    pub fn point_at(&self, angle: f64) -> Point {
        Point {
            x: self.center.x + self.radius * angle.cos(),
            y: self.center.y + self.radius * angle.sin(),
        }
    }

    pub fn start_point(&self) -> Point {
        self.point_at(self.interval.start())
    }

    pub fn end_point(&self) -> Point {
        self.point_at(self.interval.start() + self.interval.extent())
    }

    /// Euclidean distance from `q` to the arc: the radial gap when the angle
    /// of `q` falls inside the interval, otherwise the distance to the
    /// nearest endpoint.
    pub fn distance_to(&self, q: Point) -> f64 {
        let vx = q.x - self.center.x;
        let vy = q.y - self.center.y;
        let ang = vy.atan2(vx);
        if self.interval.contains(ang) {
            ((vx * vx + vy * vy).sqrt() - self.radius).abs()
        } else {
            q.dist(self.start_point()).min(q.dist(self.end_point()))
        }
    }
}

/// A convex polygon with counterclockwise vertices and no three consecutive
/// collinear vertices. Degenerate hulls (a single point or a segment) are
/// represented with one or two vertices and have zero area.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Shoelace area; zero for degenerate polygons.
    pub fn area(&self) -> f64 {
        polygon_area(self)
    }

    /// Axis-aligned bounding box as `(min, max)` corners.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Closed-region membership via exact edge orientations.
    pub fn contains(&self, p: Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                orient2d(a, b, p) == 0.0
                    && p.x >= a.x.min(b.x)
                    && p.x <= a.x.max(b.x)
                    && p.y >= a.y.min(b.y)
                    && p.y <= a.y.max(b.y)
            }
            n => {
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    if orient2d(a, b, p) < 0.0 {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Conservative disjointness test against an axis-aligned rectangle:
    /// `true` only when the polygon and the rectangle certainly do not
    /// intersect (separating-axis test with exact orientations).
    pub(crate) fn separated_from_rect(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let (lo, hi) = self.bounding_box();
        if lo.x > x1 || hi.x < x0 || lo.y > y1 || hi.y < y0 {
            return true;
        }
        if n < 3 {
            return false;
        }
        let corners = [
            Point { x: x0, y: y0 },
            Point { x: x1, y: y0 },
            Point { x: x1, y: y1 },
            Point { x: x0, y: y1 },
        ];
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if corners.iter().all(|&c| orient2d(a, b, c) < 0.0) {
                return true;
            }
        }
        false
    }
}

/// Convex hull by monotone chain with exact orientation tests. Collinear
/// points along the hull are dropped; fully collinear inputs produce a
/// degenerate polygon with zero area.
pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    for p in points {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::NonFiniteCoordinate { x: p.x, y: p.y });
        }
    }
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup();
    if pts.len() == 1 {
        return Ok(ConvexPolygon {
            vertices: pts.clone(),
        });
    }

    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() + 1);
    // Lower chain, then upper chain over the reversed order.
    for pass in 0..2 {
        let base = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= base + 2
                && orient2d(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.is_empty() {
        // All points collinear: keep the two extremes.
        hull = vec![pts[0], *pts.last().unwrap()];
    }
    Ok(ConvexPolygon { vertices: hull })
}

/// Lebesgue measure of a convex polygon (shoelace formula with compensated
/// summation).
pub fn polygon_area(p: &ConvexPolygon) -> f64 {
    let v = &p.vertices;
    if v.len() < 3 {
        return 0.0;
    }
    let mut sum = NeumaierSum::new();
    for i in 0..v.len() {
        let a = v[i];
        let b = v[(i + 1) % v.len()];
        sum.add(a.x * b.y - b.x * a.y);
    }
    0.5 * sum.total()
}

/// Compensated (Neumaier) accumulator; summation order still matters for
/// bit-level reproducibility, so callers feed it in a deterministic order.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Uniform grid over a point set, used for fixed-radius neighbor queries.
/// Buckets are a flat row-major array of index lists; `query` visits a
/// superset of all points within the requested radius.
#[derive(Debug, Clone)]
pub struct GridIndex {
    cell_size: f64,
    origin: Point,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl GridIndex {
    pub fn build(points: &[Point], cell_size: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if !(cell_size > 0.0) || !cell_size.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid cell size must be positive, got {cell_size}"
            )));
        }
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        // Cap the grid resolution so degenerate cell sizes cannot blow up
        // memory; a coarser grid only weakens the query prefilter.
        let mut cell = cell_size;
        let max_dim = 4096.0_f64;
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        if span / cell > max_dim {
            cell = span / max_dim;
        }
        let nx = (((hi.x - lo.x) / cell).floor() as usize + 1).max(1);
        let ny = (((hi.y - lo.y) / cell).floor() as usize + 1).max(1);

        let cell_of = |p: &Point| -> usize {
            let ix = (((p.x - lo.x) / cell).floor() as isize).clamp(0, nx as isize - 1) as usize;
            let iy = (((p.y - lo.y) / cell).floor() as isize).clamp(0, ny as isize - 1) as usize;
            iy * nx + ix
        };

        let mut counts = vec![0u32; nx * ny + 1];
        for p in points {
            counts[cell_of(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts.clone();
        let mut fill = starts.clone();
        let mut items = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let c = cell_of(p);
            items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        Ok(GridIndex {
            cell_size: cell,
            origin: lo,
            nx,
            ny,
            starts,
            items,
        })
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    #[inline]
    pub(crate) fn bucket(&self, ix: usize, iy: usize) -> &[u32] {
        let c = iy * self.nx + ix;
        let s = self.starts[c] as usize;
        let e = self.starts[c + 1] as usize;
        &self.items[s..e]
    }

    /// Grid coordinates of the bucket containing `p`, clamped into range.
    #[inline]
    pub(crate) fn clamped_cell(&self, p: Point) -> (usize, usize) {
        let ix = (((p.x - self.origin.x) / self.cell_size).floor() as isize)
            .clamp(0, self.nx as isize - 1) as usize;
        let iy = (((p.y - self.origin.y) / self.cell_size).floor() as isize)
            .clamp(0, self.ny as isize - 1) as usize;
        (ix, iy)
    }

    /// Smallest distance from `p` to the closed bucket `(ix, iy)`.
    #[inline]
    pub(crate) fn bucket_distance(&self, p: Point, ix: usize, iy: usize) -> f64 {
        let bx0 = self.origin.x + ix as f64 * self.cell_size;
        let by0 = self.origin.y + iy as f64 * self.cell_size;
        let dx = (bx0 - p.x).max(p.x - (bx0 + self.cell_size)).max(0.0);
        let dy = (by0 - p.y).max(p.y - (by0 + self.cell_size)).max(0.0);
        (dx * dx + dy * dy).sqrt()
    }

    /// Calls `f` for every indexed point whose bucket intersects the disk of
    /// `radius` around `center` (a superset of the points within `radius`).
    pub fn for_each_in<F: FnMut(u32)>(&self, center: Point, radius: f64, mut f: F) {
        let ix0 = (((center.x - radius - self.origin.x) / self.cell_size).floor() as isize)
            .clamp(0, self.nx as isize - 1) as usize;
        let ix1 = (((center.x + radius - self.origin.x) / self.cell_size).floor() as isize)
            .clamp(0, self.nx as isize - 1) as usize;
        let iy0 = (((center.y - radius - self.origin.y) / self.cell_size).floor() as isize)
            .clamp(0, self.ny as isize - 1) as usize;
        let iy1 = (((center.y + radius - self.origin.y) / self.cell_size).floor() as isize)
            .clamp(0, self.ny as isize - 1) as usize;
        for iy in iy0..=iy1 {
            for ix in ix0..=ix1 {
                for &i in self.bucket(ix, iy) {
                    f(i);
                }
            }
        }
    }

    /// Collects the superset of points within `radius` of `center`.
    pub fn query(&self, center: Point, radius: f64) -> Vec<u32> {
        let mut out = Vec::new();
        self.for_each_in(center, radius, |i| out.push(i));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn pt(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(Point::new(f64::NAN, 0.0).is_err());
        assert!(Point::new(0.0, f64::INFINITY).is_err());
        assert!(Point::new(1.0, -2.0).is_ok());
    }

    #[test]
    fn hull_unit_square() {
        let pts = [pt(0., 0.), pt(1., 0.), pt(1., 1.), pt(0., 1.)];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices().len(), 4);
        assert_relative_eq!(hull.area(), 1.0);
    }

    #[test]
    fn hull_triangle_area() {
        let pts = [pt(0., 0.), pt(2., 0.), pt(0., 2.)];
        let hull = convex_hull(&pts).unwrap();
        assert_relative_eq!(hull.area(), 2.0);
    }

    #[test]
    fn hull_empty_input_errors() {
        assert!(matches!(convex_hull(&[]), Err(Error::EmptySample)));
    }

    #[test]
    fn hull_degenerate_inputs_have_zero_area() {
        let single = convex_hull(&[pt(3., 4.)]).unwrap();
        assert_eq!(single.area(), 0.0);
        let collinear = convex_hull(&[pt(0., 0.), pt(1., 1.), pt(2., 2.), pt(0.5, 0.5)]).unwrap();
        assert_eq!(collinear.area(), 0.0);
        assert_eq!(collinear.vertices().len(), 2);
        assert!(collinear.contains(pt(0.25, 0.25)));
        assert!(!collinear.contains(pt(0.25, 0.26)));
    }

    #[test]
    fn hull_of_disk_sample_stays_below_disk_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut prev = 0.0;
        for &n in &[50usize, 1000] {
            let pts: Vec<Point> = (0..n)
                .map(|_| loop {
                    let x: f64 = rng.random_range(-1.0..1.0);
                    let y: f64 = rng.random_range(-1.0..1.0);
                    if x * x + y * y <= 1.0 {
                        break pt(x, y);
                    }
                })
                .collect();
            let area = convex_hull(&pts).unwrap().area();
            assert!(area < PI);
            assert!(area > prev, "hull area should grow with n on average");
            prev = area;
        }
    }

    #[test]
    fn hull_area_is_order_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(3..40);
            let mut pts: Vec<Point> = (0..n)
                .map(|_| pt(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let a0 = convex_hull(&pts).unwrap().area();
            pts.shuffle(&mut rng);
            let a1 = convex_hull(&pts).unwrap().area();
            assert_eq!(a0.to_bits(), a1.to_bits());
        }
    }

    #[test]
    fn regular_ngon_area_matches_closed_form() {
        for &n in &[3usize, 7, 100, 360] {
            let pts: Vec<Point> = (0..n)
                .map(|i| {
                    let a = TAU * i as f64 / n as f64;
                    pt(a.cos(), a.sin())
                })
                .collect();
            let area = convex_hull(&pts).unwrap().area();
            let expected = n as f64 / 2.0 * (TAU / n as f64).sin();
            assert_relative_eq!(area, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn covered_interval_tangent_is_empty() {
        let iv = circle_circle_covered_interval(pt(0., 0.), pt(2., 0.), 1.0).unwrap();
        assert!(iv.is_none());
    }

    #[test]
    fn covered_interval_half_angle_at_unit_distance() {
        let iv = circle_circle_covered_interval(pt(0., 0.), pt(1., 0.), 1.0)
            .unwrap()
            .unwrap();
        assert_relative_eq!(iv.extent(), 2.0 * PI / 3.0, epsilon = 1e-12);
        // Centered on the direction from c1 to c2 (angle 0).
        assert_relative_eq!(iv.start(), TAU - PI / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn covered_interval_near_coincident_limit() {
        let iv = circle_circle_covered_interval(pt(0., 0.), pt(1e-6, 0.), 1.0)
            .unwrap()
            .unwrap();
        assert_relative_eq!(iv.extent(), PI, epsilon = 1e-5);
        assert!(matches!(
            circle_circle_covered_interval(pt(0., 0.), pt(1e-13, 0.), 1.0),
            Err(Error::DuplicateCenter { .. })
        ));
    }

    #[test]
    fn covered_interval_agrees_with_direct_distance_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let c1 = pt(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let c2 = pt(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let r = rng.random_range(0.2..1.5);
            if c1.dist(c2) < 1e-6 {
                continue;
            }
            let iv = circle_circle_covered_interval(c1, c2, r).unwrap();
            let mut mismatches = 0;
            for k in 0..360 {
                let ang = TAU * k as f64 / 360.0;
                let p = pt(c1.x + r * ang.cos(), c1.y + r * ang.sin());
                let inside = p.dist(c2) < r;
                let claimed = iv.map_or(false, |iv| iv.contains(ang));
                if inside != claimed {
                    // Tolerate only angles within 1e-9 of the interval edges.
                    let edge_dist = iv.map_or(f64::INFINITY, |iv| {
                        let rel = normalize_angle(ang - iv.start());
                        (rel.min((rel - iv.extent()).abs()))
                            .min(normalize_angle(iv.start() - ang))
                    });
                    if edge_dist > 1e-9 {
                        mismatches += 1;
                    }
                }
            }
            assert_eq!(mismatches, 0);
        }
    }

    #[test]
    fn merge_overlapping_intervals() {
        let merged = merge_intervals(&[
            AngularInterval::new(0.0, PI / 2.0),
            AngularInterval::new(PI / 4.0, 3.0 * PI / 4.0),
        ]);
        assert_eq!(merged.len(), 1);
        assert_relative_eq!(merged[0].start(), 0.0);
        assert_relative_eq!(merged[0].extent(), PI, epsilon = 1e-12);
    }

    #[test]
    fn merge_empty_is_empty() {
        assert!(merge_intervals(&[]).is_empty());
        let comp = complement_intervals(&[]);
        assert_eq!(comp.len(), 1);
        assert!(comp[0].is_full());
    }

    #[test]
    fn merge_wraparound_pair() {
        let merged = merge_intervals(&[
            AngularInterval::new(3.0 * PI / 2.0, PI / 2.0),
            AngularInterval::new(0.0, PI / 4.0),
        ]);
        assert_eq!(merged.len(), 1);
        assert_relative_eq!(merged[0].start(), 3.0 * PI / 2.0);
        assert_relative_eq!(merged[0].extent(), 3.0 * PI / 4.0, epsilon = 1e-12);
        // Brute check against dense angle sampling.
        let inputs = [
            AngularInterval::new(3.0 * PI / 2.0, PI / 2.0),
            AngularInterval::new(0.0, PI / 4.0),
        ];
        for k in 0..10_000 {
            let ang = TAU * k as f64 / 10_000.0 + 1e-7;
            let in_any = inputs.iter().any(|iv| iv.contains(ang));
            let in_merged = merged.iter().any(|iv| iv.contains(ang));
            assert_eq!(in_any, in_merged, "angle {ang}");
        }
    }

    #[test]
    fn complement_partitions_circle() {
        let ivs = [
            AngularInterval::new(0.1, 1.0),
            AngularInterval::new(2.0, 0.5),
            AngularInterval::new(6.0, 1.5),
        ];
        let merged = merge_intervals(&ivs);
        let comp = complement_intervals(&ivs);
        let total: f64 = merged.iter().map(|iv| iv.extent()).sum::<f64>()
            + comp.iter().map(|iv| iv.extent()).sum::<f64>();
        assert_relative_eq!(total, TAU, epsilon = 1e-9);
    }

    #[test]
    fn segment_area_known_values() {
        assert_relative_eq!(
            circular_segment_area(1.0, 2.0).unwrap(),
            PI / 2.0,
            epsilon = 1e-12
        );
        assert_eq!(circular_segment_area(1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            circular_segment_area(1.0, 1.0).unwrap(),
            (PI / 3.0 - 3f64.sqrt() / 2.0) / 2.0,
            epsilon = 1e-12
        );
        assert!(circular_segment_area(1.0, 2.1).is_err());
    }

    #[test]
    fn arc_distance_cases() {
        let arc = Arc::new(pt(0., 0.), 1.0, AngularInterval::new(0.0, PI)).unwrap();
        // Radial case: angle inside interval.
        assert_relative_eq!(arc.distance_to(pt(0., 2.)), 1.0);
        assert_relative_eq!(arc.distance_to(pt(0., 0.5)), 0.5);
        // Endpoint case: angle outside interval.
        assert_relative_eq!(arc.distance_to(pt(0., -1.)), 2.0_f64.sqrt());
        // Query at the center.
        assert_relative_eq!(arc.distance_to(pt(0., 0.)), 1.0);
    }

    #[test]
    fn grid_query_returns_superset() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Point> = (0..500)
            .map(|_| pt(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
            .collect();
        let grid = GridIndex::build(&pts, 0.5).unwrap();
        for _ in 0..100 {
            let c = pt(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            let r = rng.random_range(0.0..2.0);
            let got = grid.query(c, r);
            for (i, p) in pts.iter().enumerate() {
                if p.dist(c) <= r {
                    assert!(got.contains(&(i as u32)), "missing point {i}");
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn merge_idempotent_and_commutative(
            raw in proptest::collection::vec((0.0..TAU, 0.0..TAU), 0..12),
            seed in 0u64..1000,
        ) {
            let ivs: Vec<AngularInterval> =
                raw.iter().map(|&(s, e)| AngularInterval::new(s, e)).collect();
            let merged = merge_intervals(&ivs);
            let twice = merge_intervals(&merged);
            proptest::prop_assert_eq!(&merged, &twice);

            let mut shuffled = ivs.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let merged_shuffled = merge_intervals(&shuffled);
            proptest::prop_assert_eq!(merged.len(), merged_shuffled.len());
            for (a, b) in merged.iter().zip(merged_shuffled.iter()) {
                proptest::prop_assert!((a.start() - b.start()).abs() < 1e-12);
                proptest::prop_assert!((a.extent() - b.extent()).abs() < 1e-12);
            }
        }
    }
}
