//! Alpha-convex hulls in the plane with an exact membership oracle, certified
//! Lebesgue-area bounds, and volume estimators built on top of them.
//!
//! The crate is organized in layers:
//!
//! * [`geom`] — planar primitives: points, angular intervals, circle arcs,
//!   convex hulls, and a uniform grid index.
//! * [`hull`] — the alpha-convex hull of a finite sample as an immutable
//!   query structure ([`hull::AlphaHull`]), built through the morphological
//!   closing characterization (dilate the sample by alpha, erode by alpha).
//! * [`domains`] — sampling regions with exact areas and membership:
//!   annuli, ellipses, balls, non-uniform disks, and smoothly dented balls.
//! * [`estimators`] — the plug-in and sample-splitting volume estimators,
//!   bagging, Wilson score intervals, and volume confidence intervals.
//! * [`harness`] — reproducible Monte Carlo experiments (error curves,
//!   coverage tables, convex-case comparisons) with CSV and SVG output.
//! * [`reference`] — deliberately slow brute-force reference implementations
//!   used by the test suites as independent oracles.

pub mod domains;
pub mod estimators;
pub mod geom;
pub mod harness;
pub mod hull;
pub mod reference;

mod error;

pub use error::{Error, Result};
