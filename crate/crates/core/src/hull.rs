//! The alpha-convex hull of a finite planar sample as an immutable query
//! structure.
//!
//! Construction follows the morphological closing of the sample by a disk of
//! radius alpha. Write `F = {y : dist(y, sample) >= alpha}` for the set of
//! legal empty-ball centers. A query point `x` belongs to the hull iff no
//! open alpha-ball centered in `F` covers it, i.e. iff
//! `clearance(x) = dist(x, F) >= alpha`. The boundary of `F` is a union of
//! circular arcs: for each sample point, the parts of its alpha-circle not
//! strictly covered by any neighbor's open alpha-disk. Those arcs are what
//! [`AlphaHull`] stores, so `clearance` reduces to a nearest-arc query and
//! membership and area queries are exact up to floating-point rounding.
//!
//! `clearance` is 1-Lipschitz, which is what certifies the area bounds: a
//! cell with center `c` and half-diagonal `rho` is entirely inside the hull
//! when `clearance(c) >= alpha + rho` and entirely outside when
//! `clearance(c) + rho < alpha`.

use std::f64::consts::PI;

use crate::geom::{
    complement_intervals, convex_hull, merge_intervals, Arc, ConvexPolygon, GridIndex,
    NeumaierSum, Point,
};
use crate::{Error, Result};

/// Slack applied to the membership threshold so sample points, whose
/// boundary arcs sit at distance exactly alpha, never fall out of their own
/// hull through rounding. Conservative toward containment by a null set.
const BOUNDARY_EPS: f64 = 1e-9;

/// Certified Lebesgue-measure bounds: the true area lies in `[lower, upper]`,
/// `value` is the midpoint, and `upper - lower` never exceeds twice the
/// tolerance the bounds were requested at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub tolerance_used: f64,
    pub cells_processed: u64,
}

/// Precomputed arc geometry for distance queries without `atan2`: the angle
/// membership test reduces to two cross-product signs against the unit
/// vectors at the arc ends.
#[derive(Debug, Clone, Copy)]
struct ArcGeo {
    cx: f64,
    cy: f64,
    radius: f64,
    // Endpoints.
    p0x: f64,
    p0y: f64,
    p1x: f64,
    p1y: f64,
    // Unit vectors at the start and end angles.
    e0x: f64,
    e0y: f64,
    e1x: f64,
    e1y: f64,
    /// Extent strictly greater than pi.
    big: bool,
    /// Full circle.
    full: bool,
}

impl ArcGeo {
    fn new(arc: &Arc) -> Self {
        let a0 = arc.interval.start();
        let a1 = a0 + arc.interval.extent();
        let (e0x, e0y) = (a0.cos(), a0.sin());
        let (e1x, e1y) = (a1.cos(), a1.sin());
        ArcGeo {
            cx: arc.center.x,
            cy: arc.center.y,
            radius: arc.radius,
            p0x: arc.center.x + arc.radius * e0x,
            p0y: arc.center.y + arc.radius * e0y,
            p1x: arc.center.x + arc.radius * e1x,
            p1y: arc.center.y + arc.radius * e1y,
            e0x,
            e0y,
            e1x,
            e1y,
            big: arc.interval.extent() > PI,
            full: arc.interval.is_full(),
        }
    }

    #[inline]
    fn distance_to(&self, qx: f64, qy: f64) -> f64 {
        let vx = qx - self.cx;
        let vy = qy - self.cy;
        let in_sweep = if self.full {
            true
        } else if self.big {
            // Not inside the complementary (short) sweep from end to start.
            !((self.e1x * vy - self.e1y * vx) > 0.0 && (vx * self.e0y - vy * self.e0x) > 0.0)
        } else {
            (self.e0x * vy - self.e0y * vx) >= 0.0 && (vx * self.e1y - vy * self.e1x) >= 0.0
        };
        if in_sweep {
            ((vx * vx + vy * vy).sqrt() - self.radius).abs()
        } else {
            let d0x = qx - self.p0x;
            let d0y = qy - self.p0y;
            let d1x = qx - self.p1x;
            let d1y = qy - self.p1y;
            (d0x * d0x + d0y * d0y).min(d1x * d1x + d1y * d1y).sqrt()
        }
    }
}

/// The alpha-convex hull of a sample, with exact membership queries and
/// certified area bounds. Immutable after construction; all queries are pure
/// and safe to run concurrently.
#[derive(Debug, Clone)]
pub struct AlphaHull {
    alpha: f64,
    points: Vec<Point>,
    grid: GridIndex,
    free_boundary: Vec<Arc>,
    arc_geo: Vec<ArcGeo>,
    arc_grid: Option<GridIndex>,
    outer_hull: ConvexPolygon,
}

impl AlphaHull {
    /// Builds the hull of `points` at radius `alpha`.
    ///
    /// Duplicate points (within distance 1e-12) are dropped at ingestion.
    /// For every retained point the covered angular intervals of its
    /// alpha-circle are accumulated from all neighbors within `2*alpha`,
    /// merged, and complemented; the uncovered arcs across all points form
    /// the free boundary.
    pub fn build(points: &[Point], alpha: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        for p in points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::NonFiniteCoordinate { x: p.x, y: p.y });
            }
        }
        let points = dedupe(points);
        let grid = GridIndex::build(&points, alpha)?;

        let mut free_boundary: Vec<Arc> = Vec::new();
        let mut neighbors: Vec<(f64, u32)> = Vec::new();
        let mut covered = Vec::new();
        let reach = 2.0 * alpha;
        for (i, &p) in points.iter().enumerate() {
            neighbors.clear();
            grid.for_each_in(p, reach, |j| {
                if j as usize != i {
                    let d2 = p.dist_sq(points[j as usize]);
                    if d2 < reach * reach {
                        neighbors.push((d2, j));
                    }
                }
            });
            neighbors.sort_by(|a, b| a.partial_cmp(b).unwrap());

            covered.clear();
            let mut fully_covered = false;
            for (k, &(_, j)) in neighbors.iter().enumerate() {
                if let Some(iv) =
                    crate::geom::circle_circle_covered_interval(p, points[j as usize], alpha)?
                {
                    covered.push(iv);
                }
                // Nearest neighbors cover the most, so fully covered circles
                // can stop early; periodic merging keeps the list short.
                if covered.len() >= 24 && (k + 1) % 24 == 0 {
                    covered = merge_intervals(&covered);
                    if covered.len() == 1 && covered[0].is_full() {
                        fully_covered = true;
                        break;
                    }
                }
            }
            if fully_covered {
                continue;
            }
            for iv in complement_intervals(&covered) {
                free_boundary.push(Arc::new(p, alpha, iv)?);
            }
        }
        free_boundary.sort_by(|a, b| {
            (a.center.x, a.center.y, a.interval.start())
                .partial_cmp(&(b.center.x, b.center.y, b.interval.start()))
                .unwrap()
        });

        let arc_geo: Vec<ArcGeo> = free_boundary.iter().map(ArcGeo::new).collect();
        let arc_centers: Vec<Point> = free_boundary.iter().map(|a| a.center).collect();
        let arc_grid = if arc_centers.is_empty() {
            None
        } else {
            Some(GridIndex::build(&arc_centers, alpha)?)
        };
        let outer_hull = convex_hull(&points)?;

        Ok(AlphaHull {
            alpha,
            points,
            grid,
            free_boundary,
            arc_geo,
            arc_grid,
            outer_hull,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The deduplicated sample the hull was built from.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The uncovered arcs forming the boundary of the free space, ordered by
    /// (owning point, start angle).
    pub fn boundary_arcs(&self) -> &[Arc] {
        &self.free_boundary
    }

    /// Convex hull of the sample; the alpha-hull is always contained in it.
    pub fn outer_hull(&self) -> &ConvexPolygon {
        &self.outer_hull
    }

    /// Whether some sample point lies strictly within alpha of `q`, i.e.
    /// whether `q` is covered by the dilated sample (equivalently, `q` is
    /// not itself a legal empty-ball center).
    #[inline]
    fn covered(&self, q: Point) -> bool {
        let a2 = self.alpha * self.alpha;
        let g = &self.grid;
        let (nx, ny) = g.dims();
        let cell = g.cell_size();
        let org = g.origin();
        let ix0 = (((q.x - self.alpha - org.x) / cell).floor() as isize).clamp(0, nx as isize - 1);
        let ix1 = (((q.x + self.alpha - org.x) / cell).floor() as isize).clamp(0, nx as isize - 1);
        let iy0 = (((q.y - self.alpha - org.y) / cell).floor() as isize).clamp(0, ny as isize - 1);
        let iy1 = (((q.y + self.alpha - org.y) / cell).floor() as isize).clamp(0, ny as isize - 1);
        for iy in iy0..=iy1 {
            for ix in ix0..=ix1 {
                for &i in g.bucket(ix as usize, iy as usize) {
                    if q.dist_sq(self.points[i as usize]) < a2 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Minimum distance from `q` to any free-boundary arc, by expanding ring
    /// search over the arc grid. Values above `cap` are reported as infinity.
    fn min_arc_distance(&self, q: Point, cap: f64) -> f64 {
        let g = match &self.arc_grid {
            Some(g) => g,
            None => return f64::INFINITY,
        };
        let (nx, ny) = g.dims();
        let cell = g.cell_size();
        let (qx, qy) = g.clamped_cell(q);
        // Distance from q to the grid's bounding box, for queries outside it.
        let d_bbox = g.bucket_distance(q, qx, qy);
        let k_max = qx.max(nx - 1 - qx).max(qy.max(ny - 1 - qy));
        let mut best = f64::INFINITY;
        for k in 0..=k_max {
            let lb = d_bbox.max((k as f64 - 1.0).max(0.0) * cell) - self.alpha;
            if lb > best.min(cap) {
                break;
            }
            self.for_each_ring_bucket(g, qx, qy, k, |ix, iy| {
                if g.bucket_distance(q, ix, iy) - self.alpha > best.min(cap) {
                    return;
                }
                for &ai in g.bucket(ix, iy) {
                    let d = self.arc_geo[ai as usize].distance_to(q.x, q.y);
                    if d < best {
                        best = d;
                    }
                }
            });
        }
        if best > cap {
            f64::INFINITY
        } else {
            best
        }
    }

    #[inline]
    fn for_each_ring_bucket<F: FnMut(usize, usize)>(
        &self,
        g: &GridIndex,
        qx: usize,
        qy: usize,
        k: usize,
        mut f: F,
    ) {
        let (nx, ny) = g.dims();
        if k == 0 {
            f(qx, qy);
            return;
        }
        let k = k as isize;
        let (qx, qy) = (qx as isize, qy as isize);
        let (nx, ny) = (nx as isize, ny as isize);
        for ix in (qx - k).max(0)..=(qx + k).min(nx - 1) {
            if qy - k >= 0 {
                f(ix as usize, (qy - k) as usize);
            }
            if qy + k < ny {
                f(ix as usize, (qy + k) as usize);
            }
        }
        for iy in (qy - k + 1).max(0)..(qy + k).min(ny) {
            if qx - k >= 0 {
                f((qx - k) as usize, iy as usize);
            }
            if qx + k < nx {
                f((qx + k) as usize, iy as usize);
            }
        }
    }

    /// Distance from `q` to the free space `F`: zero when `q` is itself a
    /// legal empty-ball center, otherwise the distance to the nearest
    /// free-boundary arc. 1-Lipschitz in `q`.
    pub fn clearance(&self, q: Point) -> f64 {
        if !self.covered(q) {
            return 0.0;
        }
        self.min_arc_distance(q, f64::INFINITY)
    }

    /// Exact membership: `q` is in the hull iff no open alpha-ball with a
    /// free center covers it, i.e. iff `clearance(q) >= alpha` (closed-hull
    /// convention, with a 1e-9 slack toward containment).
    pub fn contains(&self, q: Point) -> bool {
        if !self.covered(q) {
            return false;
        }
        // Only arcs owned by points within 2*alpha of q can come closer than
        // alpha, so the capped search stays local.
        self.min_arc_distance(q, self.alpha) >= self.alpha - BOUNDARY_EPS
    }

    /// Default absolute area tolerance: 1e-4 of the bounding-box area.
    pub fn default_area_tolerance(&self) -> f64 {
        let (lo, hi) = self.outer_hull.bounding_box();
        (1e-4 * (hi.x - lo.x) * (hi.y - lo.y)).max(1e-12)
    }

    /// Certified area bounds by adaptive quadtree subdivision of the
    /// bounding box of the outer hull.
    ///
    /// Cells are classified with the Lipschitz clearance field (fully inside
    /// when `clearance(center) >= alpha + rho`, fully outside when
    /// `clearance(center) + rho < alpha` or the cell misses the outer hull)
    /// and split otherwise. Subdivision stops once the total undecided area
    /// is at most `2 * tolerance`; undecided area counts toward the upper
    /// bound only. Fails past depth 40 if the tolerance is unreachable.
    pub fn area(&self, tolerance: f64) -> Result<AreaEstimate> {
        if !(tolerance > 0.0) || !tolerance.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "area tolerance must be positive, got {tolerance}"
            )));
        }
        let (lo, hi) = self.outer_hull.bounding_box();
        let (w0, h0) = (hi.x - lo.x, hi.y - lo.y);
        let mut cells_processed = 0u64;
        if w0 <= 0.0 || h0 <= 0.0 {
            // Degenerate hull: a point or a segment has measure zero.
            return Ok(AreaEstimate {
                lower: 0.0,
                upper: 0.0,
                value: 0.0,
                tolerance_used: tolerance,
                cells_processed,
            });
        }

        let alpha = self.alpha;
        let a2 = alpha * alpha;

        // One record per live cell: center plus slices into the shared
        // candidate arenas (points and arcs possibly relevant to the cell).
        struct Cell {
            cx: f64,
            cy: f64,
            pts: (u32, u32),
            arcs: (u32, u32),
        }
        let mut pts_arena: Vec<u32> = (0..self.points.len() as u32).collect();
        let mut arcs_arena: Vec<u32> = (0..self.arc_geo.len() as u32).collect();
        let mut cells = vec![Cell {
            cx: lo.x + 0.5 * w0,
            cy: lo.y + 0.5 * h0,
            pts: (0, pts_arena.len() as u32),
            arcs: (0, arcs_arena.len() as u32),
        }];

        let mut lower = NeumaierSum::new();
        for depth in 0u32..=40 {
            let w = w0 / (1u64 << depth) as f64;
            let h = h0 / (1u64 << depth) as f64;
            let rho = 0.5 * (w * w + h * h).sqrt();
            let cell_area = w * h;
            let cap = alpha + rho;

            let mut undecided: Vec<u32> = Vec::new();
            for (ci, cell) in cells.iter().enumerate() {
                cells_processed += 1;
                let (qx, qy) = (cell.cx, cell.cy);
                let pts = &pts_arena[cell.pts.0 as usize..cell.pts.1 as usize];
                let arcs = &arcs_arena[cell.arcs.0 as usize..cell.arcs.1 as usize];

                let covered = pts.iter().any(|&i| {
                    let p = self.points[i as usize];
                    let dx = p.x - qx;
                    let dy = p.y - qy;
                    dx * dx + dy * dy < a2
                });
                if covered {
                    let mut min_arc = f64::INFINITY;
                    for &ai in arcs {
                        let d = self.arc_geo[ai as usize].distance_to(qx, qy);
                        if d < min_arc {
                            min_arc = d;
                        }
                    }
                    if min_arc >= cap {
                        lower.add(cell_area);
                        continue;
                    }
                    if min_arc + rho < alpha {
                        continue;
                    }
                } else if rho < alpha {
                    // Free center: clearance is zero, the cell cannot reach
                    // the hull.
                    continue;
                }
                // Cells that miss the convex hull of the sample cannot meet
                // the alpha-hull; checked at coarse levels only.
                if rho >= 0.5 * alpha
                    && self.outer_hull.separated_from_rect(
                        qx - 0.5 * w,
                        qy - 0.5 * h,
                        qx + 0.5 * w,
                        qy + 0.5 * h,
                    )
                {
                    continue;
                }
                undecided.push(ci as u32);
            }

            let undecided_area = undecided.len() as f64 * cell_area;
            if undecided_area <= 2.0 * tolerance || undecided.is_empty() {
                let lo_sum = lower.total();
                let up_sum = lo_sum + undecided_area;
                return Ok(AreaEstimate {
                    lower: lo_sum,
                    upper: up_sum,
                    value: 0.5 * (lo_sum + up_sum),
                    tolerance_used: tolerance,
                    cells_processed,
                });
            }
            if depth == 40 {
                return Err(Error::ToleranceUnreachable {
                    tolerance,
                    undecided: undecided_area,
                    depth,
                });
            }

            // Subdivide, filtering each child's candidate lists from its
            // parent's. A child with half-diagonal rho' keeps everything
            // within alpha + 2*rho' of its center, which by induction covers
            // what its own tests and its descendants need.
            let keep = alpha + rho + 1e-9;
            let keep_sq = keep * keep;
            let mut next_cells: Vec<Cell> = Vec::with_capacity(undecided.len() * 4);
            let mut next_pts: Vec<u32> = Vec::new();
            let mut next_arcs: Vec<u32> = Vec::new();
            for &ci in &undecided {
                let cell = &cells[ci as usize];
                let pts = &pts_arena[cell.pts.0 as usize..cell.pts.1 as usize];
                let arcs = &arcs_arena[cell.arcs.0 as usize..cell.arcs.1 as usize];
                for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                    let ccx = cell.cx + sx * 0.25 * w;
                    let ccy = cell.cy + sy * 0.25 * h;
                    let p0 = next_pts.len() as u32;
                    for &i in pts {
                        let p = self.points[i as usize];
                        let dx = p.x - ccx;
                        let dy = p.y - ccy;
                        if dx * dx + dy * dy <= keep_sq {
                            next_pts.push(i);
                        }
                    }
                    let a0 = next_arcs.len() as u32;
                    for &ai in arcs {
                        if self.arc_geo[ai as usize].distance_to(ccx, ccy) <= keep {
                            next_arcs.push(ai);
                        }
                    }
                    next_cells.push(Cell {
                        cx: ccx,
                        cy: ccy,
                        pts: (p0, next_pts.len() as u32),
                        arcs: (a0, next_arcs.len() as u32),
                    });
                }
            }
            cells = next_cells;
            pts_arena = next_pts;
            arcs_arena = next_arcs;
        }
        unreachable!("depth loop returns or errors at depth 40");
    }

    /// Diagnostic SVG rendering of the free-boundary arcs, one path per arc.
    pub fn boundary_svg(&self) -> String {
        let (lo, hi) = self.outer_hull.bounding_box();
        let pad = self.alpha * 1.5;
        let (x0, y0) = (lo.x - pad, -(hi.y + pad));
        let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
        let stroke = w.max(h) * 1.5e-3;
        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} {y0} {w} {h}\">\n"
        ));
        for p in &self.points {
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>\n",
                p.x,
                -p.y,
                stroke * 1.5
            ));
        }
        for arc in &self.free_boundary {
            let r = arc.radius;
            if arc.interval.is_full() {
                // A full circle as two half arcs.
                let a = arc.point_at(0.0);
                let b = arc.point_at(PI);
                svg.push_str(&format!(
                    "  <path d=\"M {} {} A {r} {r} 0 0 0 {} {} A {r} {r} 0 0 0 {} {}\" \
                     fill=\"none\" stroke=\"crimson\" stroke-width=\"{stroke}\"/>\n",
                    a.x, -a.y, b.x, -b.y, a.x, -a.y
                ));
            } else {
                let a = arc.start_point();
                let b = arc.end_point();
                let large = if arc.interval.extent() > PI { 1 } else { 0 };
                svg.push_str(&format!(
                    "  <path d=\"M {} {} A {r} {r} 0 {large} 0 {} {}\" \
                     fill=\"none\" stroke=\"crimson\" stroke-width=\"{stroke}\"/>\n",
                    a.x, -a.y, b.x, -b.y
                ));
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Drops points within 1e-12 of an earlier point (ties in a continuous
/// sample occur with probability zero; exact duplicates would otherwise
/// trip the duplicate-center guard in the covering computation).
fn dedupe(points: &[Point]) -> Vec<Point> {
    let mut sorted: Vec<Point> = points.to_vec();
    sorted.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    let mut kept: Vec<Point> = Vec::with_capacity(sorted.len());
    let tol = 1e-12;
    let tol2 = tol * tol;
    for p in sorted {
        let dup = kept
            .iter()
            .rev()
            .take_while(|k| p.x - k.x <= tol)
            .any(|k| p.dist_sq(*k) <= tol2);
        if !dup {
            kept.push(p);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn pt(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    fn circle_sample(n: usize, radius: f64) -> Vec<Point> {
        (0..n)
            .map(|i| {
                let a = TAU * i as f64 / n as f64;
                pt(radius * a.cos(), radius * a.sin())
            })
            .collect()
    }

    #[test]
    fn single_point_hull() {
        let hull = AlphaHull::build(&[pt(1.0, 2.0)], 1.0).unwrap();
        let arcs = hull.boundary_arcs();
        assert_eq!(arcs.len(), 1);
        assert!(arcs[0].interval.is_full());
        assert_relative_eq!(hull.clearance(pt(1.0, 2.0)), 1.0);
        assert!(hull.contains(pt(1.0, 2.0)));
        assert!(!hull.contains(pt(1.5, 2.0)));
        let est = hull.area(1e-6).unwrap();
        assert_eq!(est.lower, 0.0);
        assert_eq!(est.upper, 0.0);
    }

    #[test]
    fn two_distant_points_keep_full_circles() {
        let hull = AlphaHull::build(&[pt(0.0, 0.0), pt(5.0, 0.0)], 1.0).unwrap();
        let arcs = hull.boundary_arcs();
        assert_eq!(arcs.len(), 2);
        assert!(arcs.iter().all(|a| a.interval.is_full()));
    }

    #[test]
    fn two_unit_points_arc_extents() {
        let hull = AlphaHull::build(&[pt(0.0, 0.0), pt(1.0, 0.0)], 1.0).unwrap();
        let arcs = hull.boundary_arcs();
        assert_eq!(arcs.len(), 2);
        for arc in arcs {
            assert_relative_eq!(arc.interval.extent(), 4.0 * PI / 3.0, epsilon = 1e-9);
        }
        let total: f64 = arcs.iter().map(|a| a.interval.extent()).sum();
        assert_relative_eq!(total, 8.0 * PI / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn free_boundary_points_sit_at_alpha_from_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts: Vec<Point> = (0..50)
            .map(|_| pt(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let alpha = 0.35;
        let hull = AlphaHull::build(&pts, alpha).unwrap();
        assert!(!hull.boundary_arcs().is_empty());
        for arc in hull.boundary_arcs() {
            for k in 0..16 {
                let ang = arc.interval.start() + arc.interval.extent() * k as f64 / 16.0;
                let q = arc.point_at(ang);
                let min_d = pts.iter().map(|p| p.dist(q)).fold(f64::INFINITY, f64::min);
                assert!(
                    (min_d - alpha).abs() <= 1e-9,
                    "free boundary point at distance {min_d} from sample"
                );
            }
        }
    }

    #[test]
    fn sample_points_are_contained() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..30 {
            let n = rng.random_range(1..30);
            let pts: Vec<Point> = (0..n)
                .map(|_| pt(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let alpha = rng.random_range(0.05..1.5);
            let hull = AlphaHull::build(&pts, alpha).unwrap();
            for p in hull.points() {
                assert!(hull.contains(*p), "trial {trial}: sample point fell out");
            }
        }
    }

    #[test]
    fn midpoint_of_two_points_is_outside() {
        // An empty unit disk centered at (0.5, sqrt(3)/2) covers (0.5, 0).
        let hull = AlphaHull::build(&[pt(0.0, 0.0), pt(1.0, 0.0)], 1.0).unwrap();
        assert!(!hull.contains(pt(0.5, 0.0)));
        let witness = pt(0.5, 3f64.sqrt() / 2.0);
        assert!(witness.dist(pt(0.0, 0.0)) >= 1.0 - 1e-12);
        assert!(hull.clearance(pt(0.5, 0.0)) < 1.0);
    }

    #[test]
    fn dense_circle_sample_is_a_thin_band_not_a_disk() {
        // Points on the unit circle with alpha = 0.5: the origin is itself a
        // legal empty-ball center (its distance to the sample is 1), so the
        // open ball around it witnesses that the origin is not in the hull.
        let hull = AlphaHull::build(&circle_sample(200, 1.0), 0.5).unwrap();
        assert_eq!(hull.clearance(pt(0.0, 0.0)), 0.0);
        assert!(!hull.contains(pt(0.0, 0.0)));
        // The circle points themselves are contained.
        assert!(hull.contains(pt(1.0, 0.0)));
    }

    #[test]
    fn duplicate_points_are_deduped() {
        let hull = AlphaHull::build(&[pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0)], 1.0).unwrap();
        assert_eq!(hull.points().len(), 2);
    }

    #[test]
    fn clearance_is_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<Point> = (0..40)
            .map(|_| pt(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let hull = AlphaHull::build(&pts, 0.4).unwrap();
        for _ in 0..500 {
            let a = pt(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let b = pt(
                a.x + rng.random_range(-0.5..0.5),
                a.y + rng.random_range(-0.5..0.5),
            );
            let diff = (hull.clearance(a) - hull.clearance(b)).abs();
            assert!(diff <= a.dist(b) + 1e-9);
        }
    }

    #[test]
    fn monotone_in_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let pts: Vec<Point> = (0..25)
            .map(|_| pt(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let h1 = AlphaHull::build(&pts, 0.3).unwrap();
        let h2 = AlphaHull::build(&pts, 0.6).unwrap();
        for _ in 0..500 {
            let q = pt(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            if h1.contains(q) {
                assert!(h2.contains(q), "containment must be monotone in alpha");
            }
        }
    }

    #[test]
    fn outside_convex_hull_is_outside() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point> = (0..30)
            .map(|_| pt(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let hull = AlphaHull::build(&pts, 0.7).unwrap();
        let mut tested = 0;
        for _ in 0..2000 {
            let q = pt(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            if !hull.outer_hull().contains(q) {
                tested += 1;
                assert!(!hull.contains(q));
            }
        }
        assert!(tested > 100);
    }

    #[test]
    fn four_corners_large_alpha_area_matches_closed_form() {
        let corners = [pt(0., 0.), pt(1., 0.), pt(1., 1.), pt(0., 1.)];
        let hull = AlphaHull::build(&corners, 1000.0).unwrap();
        let est = hull.area(1e-6).unwrap();
        let expected = 1.0 - 4.0 * crate::geom::circular_segment_area(1000.0, 1.0).unwrap();
        assert!(
            est.lower <= expected && expected <= est.upper,
            "expected {expected} in [{}, {}]",
            est.lower,
            est.upper
        );
        assert!(est.upper - est.lower <= 2e-6);
        assert_relative_eq!(est.value, expected, epsilon = 2e-6);
    }

    #[test]
    fn area_bounds_shrink_with_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pts: Vec<Point> = (0..200)
            .map(|_| loop {
                let x: f64 = rng.random_range(-1.0..1.0);
                let y: f64 = rng.random_range(-1.0..1.0);
                if x * x + y * y <= 1.0 {
                    break pt(x, y);
                }
            })
            .collect();
        let hull = AlphaHull::build(&pts, 0.3).unwrap();
        let mut bounds = Vec::new();
        for &tol in &[1e-1, 1e-2, 1e-3, 1e-4] {
            let est = hull.area(tol).unwrap();
            assert!(est.upper - est.lower <= 2.0 * tol, "tol {tol}");
            assert!(est.lower <= est.value && est.value <= est.upper);
            bounds.push(est);
        }
        // Tighter tolerances nest within looser certified bounds.
        for w in bounds.windows(2) {
            assert!(w[1].lower >= w[0].lower - 1e-12);
            assert!(w[1].upper <= w[0].upper + 1e-12);
        }
    }

    #[test]
    fn certified_bounds_agree_with_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts: Vec<Point> = (0..400)
            .map(|_| loop {
                let x: f64 = rng.random_range(-1.0..1.0);
                let y: f64 = rng.random_range(-1.0..1.0);
                let r2 = x * x + y * y;
                if (0.0625..=1.0).contains(&r2) {
                    break pt(x, y);
                }
            })
            .collect();
        let hull = AlphaHull::build(&pts, 0.25).unwrap();
        let est = hull.area(1e-3).unwrap();
        let (lo, hi) = hull.outer_hull().bounding_box();
        let bbox_area = (hi.x - lo.x) * (hi.y - lo.y);
        let n = 200_000;
        let mut inside = 0u64;
        for _ in 0..n {
            let q = pt(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
            if hull.contains(q) {
                inside += 1;
            }
        }
        let p = inside as f64 / n as f64;
        let mc = bbox_area * p;
        let sigma = bbox_area * (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            mc >= est.lower - 3.0 * sigma && mc <= est.upper + 3.0 * sigma,
            "mc {mc} outside [{} - 3s, {} + 3s], s = {sigma}",
            est.lower,
            est.upper
        );
    }

    #[test]
    fn area_rejects_bad_tolerance() {
        let hull = AlphaHull::build(&[pt(0., 0.), pt(1., 0.)], 1.0).unwrap();
        assert!(hull.area(0.0).is_err());
        assert!(hull.area(-1.0).is_err());
    }

    #[test]
    fn build_rejects_bad_inputs() {
        assert!(matches!(AlphaHull::build(&[], 1.0), Err(Error::EmptySample)));
        assert!(AlphaHull::build(&[pt(0., 0.)], 0.0).is_err());
        assert!(AlphaHull::build(&[pt(f64::NAN, 0.)], 1.0).is_err());
    }

    #[test]
    fn contains_agrees_with_empty_ball_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut checked = 0;
        for _ in 0..40 {
            let n = rng.random_range(1..=12);
            let pts: Vec<Point> = (0..n)
                .map(|_| pt(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
                .collect();
            let alpha = rng.random_range(0.08..0.8);
            let hull = AlphaHull::build(&pts, alpha).unwrap();
            let step = alpha / 200.0;
            for _ in 0..30 {
                let q = pt(
                    rng.random_range(-alpha..1.0 + alpha),
                    rng.random_range(-alpha..1.0 + alpha),
                );
                // Skip queries too close to the decision boundary for the
                // oracle's grid resolution.
                if (hull.clearance(q) - alpha).abs() <= 2.0 * step {
                    continue;
                }
                let got = hull.contains(q);
                let want = crate::reference::contains_oracle(&pts, alpha, q, step);
                assert_eq!(got, want, "disagreement at {q:?}, alpha {alpha}");
                checked += 1;
            }
        }
        assert!(checked > 800, "only {checked} queries checked");
    }

    #[test]
    fn boundary_svg_roundtrip() {
        let hull = AlphaHull::build(&[pt(0.0, 0.0), pt(1.0, 0.0)], 1.0).unwrap();
        let svg = hull.boundary_svg();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("A 1 1 0 1 0"), "expects large-arc flags: {svg}");
    }
}
