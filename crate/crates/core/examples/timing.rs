use std::time::Instant;
use alphavol::geom::Point;
use std::f64::consts::TAU;
fn main() {
    // Coverage preview: n=500, m=250, alpha=0.25, B=120.
    let domain = alphavol::domains::annulus(0.25, 1.0).unwrap();
    let mu = domain.area();
    let t0 = Instant::now();
    let splits = alphavol::harness::coverage_replicates(&domain, 0.25, 500, 3e-3, 42, 0..120).unwrap();
    let mut hit = 0; let mut len_sum = 0.0;
    for s in &splits {
        let ci = alphavol::estimators::volume_ci(s, 0.95).unwrap();
        if ci.contains(mu) { hit += 1; }
        len_sum += ci.length();
    }
    println!("coverage@0.95 = {:.3}, mean length = {:.4}, took {:?}",
        hit as f64 / 120.0, len_sum / 120.0, t0.elapsed());

    // Criterion-2 style garland: 360 points on the unit circle, alpha 0.25, tol 1e-5.
    let pts: Vec<Point> = (0..360).map(|i| {
        let a = TAU * i as f64 / 360.0;
        Point { x: a.cos(), y: a.sin() }
    }).collect();
    let hull = alphavol::hull::AlphaHull::build(&pts, 0.25).unwrap();
    let t1 = Instant::now();
    let est = hull.area(1e-5).unwrap();
    println!("garland area in [{:.8e}, {:.8e}], width {:.2e}, cells {}, took {:?}",
        est.lower, est.upper, est.upper - est.lower, est.cells_processed, t1.elapsed());
    let ngon = 180.0 * (std::f64::consts::PI / 180.0).sin();
    let seg = alphavol::geom::circular_segment_area(0.25, 2.0 * (std::f64::consts::PI / 360.0).sin()).unwrap();
    println!("spec formula value (polygon minus 360 segments) = {:.8}", ngon - 360.0 * seg);
}
