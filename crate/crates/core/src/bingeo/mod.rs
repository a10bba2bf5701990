//! Binary-image geometry: morphological closing, connected components,
//! boundary tracing, convex hull and convexity defects.
//!
//! Integer pixel coordinates are used throughout so that orientation tests
//! and distance comparisons are exact.

mod components;
mod contour;
mod hull;
mod morphology;

use thiserror::Error;

pub use components::{connected_components, BoundingBox, Component};
pub use contour::{trace_contour, Contour};
pub use hull::{convex_hull, convexity_defects, ConvexityDefect};
pub use morphology::{close, StructuringElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("kernel size must be odd and positive, got {0}")]
    InvalidKernelSize(i64),
}

pub fn make_ellipse_kernel(m: i64) -> Result<StructuringElement, GeometryError> {
    StructuringElement::ellipse(m)
}

/// `(b - a) x (c - a)` with `x` the `(row, col)` cross product; positive when
/// `a -> b -> c` turns counter-clockwise on screen.
#[inline]
pub(crate) fn orient(a: crate::raster::Pixel, b: crate::raster::Pixel, c: crate::raster::Pixel) -> i64 {
    let (ar, ac) = (a.row as i64, a.col as i64);
    let (br, bc) = (b.row as i64 - ar, b.col as i64 - ac);
    let (cr, cc) = (c.row as i64 - ar, c.col as i64 - ac);
    br * cc - bc * cr
}
