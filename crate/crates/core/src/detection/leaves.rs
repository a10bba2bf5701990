use crate::raster::{Pixel, Point};

use super::PlantObject;

/// Infinite line through `through` along `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub through: Point,
    pub direction: Point,
}

/// Contour span between two neighboring cut-off points.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub cutoff_a: Pixel,
    pub cutoff_b: Pixel,
    /// Contour indices `(a, b)`: the leaf owns the cyclic range `a..b` and its
    /// outline runs from `a` through `b` inclusive.
    pub span: (usize, usize),
    origin: Point,
    center_local: Point,
    root_local: Point,
}

impl Leaf {
    /// Area centroid of the leaf outline closed by the cut-off segment.
    pub fn center(&self) -> Point {
        self.origin + self.center_local
    }

    /// Midpoint of the cut-off points.
    pub fn root(&self) -> Point {
        self.origin + self.root_local
    }

    /// Leaf direction in image coordinates.
    pub fn direction(&self) -> Line {
        Line {
            through: self.root(),
            direction: self.center_local - self.root_local,
        }
    }

    /// Leaf direction in the owning object's local frame.
    pub(crate) fn local_direction(&self) -> Line {
        Line {
            through: self.root_local,
            direction: self.center_local - self.root_local,
        }
    }
}

/// Minimum center-to-root distance, pixels, for a leaf to have a direction.
const MIN_LEAF_EXTENT: f64 = 0.5;

/// Splits the contour at every accepted defect; leaf `i` runs from defect `i`
/// to defect `i + 1` (cyclically). Fewer than two defects give no leaves.
/// Leaves with zero area, a center closer than half a pixel to the root, or a
/// center outside the object's bounding box are dropped.
pub fn extract_leaves(object: &PlantObject) -> Vec<Leaf> {
    let k = object.defects.len();
    if k < 2 {
        return Vec::new();
    }
    let pts = object.contour.points();
    let n = pts.len();
    let bbox = object.component.bbox;
    let (max_r, max_c) = ((bbox.max_row - bbox.min_row) as f64, (bbox.max_col - bbox.min_col) as f64);

    let mut leaves = Vec::with_capacity(k);
    for i in 0..k {
        let a = object.defects[i].farthest;
        let b = object.defects[(i + 1) % k].farthest;
        let outline = cyclic_range(a, b, n).map(|j| local_int(object, pts[j]));
        let Some(center_local) = polygon_centroid(outline) else {
            continue;
        };
        let root_local = object.to_local(pts[a]).midpoint(object.to_local(pts[b]));
        if center_local.distance(root_local) < MIN_LEAF_EXTENT {
            continue;
        }
        if !(0.0..=max_r).contains(&center_local.row) || !(0.0..=max_c).contains(&center_local.col) {
            continue;
        }
        leaves.push(Leaf {
            cutoff_a: pts[a],
            cutoff_b: pts[b],
            span: (a, b),
            origin: object.origin(),
            center_local,
            root_local,
        });
    }
    leaves
}

/// Indices from `a` to `b` inclusive, walking forward modulo `n`.
fn cyclic_range(a: usize, b: usize, n: usize) -> impl Iterator<Item = usize> {
    let len = (b + n - a) % n + 1;
    (0..len).map(move |k| (a + k) % n)
}

fn local_int(object: &PlantObject, p: Pixel) -> (i64, i64) {
    let b = object.component.bbox;
    ((p.row - b.min_row) as i64, (p.col - b.min_col) as i64)
}

/// Area centroid of a closed polygon; `None` for zero area. All sums are
/// exact integers, so the result does not depend on the starting vertex.
fn polygon_centroid(vertices: impl Iterator<Item = (i64, i64)>) -> Option<Point> {
    let vertices: Vec<(i64, i64)> = vertices.collect();
    let n = vertices.len();
    let (mut area2, mut sr, mut sc) = (0i128, 0i128, 0i128);
    for i in 0..n {
        let (r0, c0) = vertices[i];
        let (r1, c1) = vertices[(i + 1) % n];
        let cross = i128::from(r0 * c1 - r1 * c0);
        area2 += cross;
        sr += i128::from(r0 + r1) * cross;
        sc += i128::from(c0 + c1) * cross;
    }
    if area2 == 0 {
        return None;
    }
    let denom = 3.0 * area2 as f64;
    Some(Point::new(sr as f64 / denom, sc as f64 / denom))
}

#[cfg(test)]
pub(crate) mod tests_support {
    use crate::raster::BinaryMask;

    /// Plus sign: 4x4 center square at rows/cols 13..=16 with arms of
    /// length 10.
    pub(crate) fn cross_mask() -> BinaryMask {
        BinaryMask::from_fn(30, 30, |r, c| {
            let bar = |x: usize| (13..=16).contains(&x);
            (bar(c) && (3..=26).contains(&r)) || (bar(r) && (3..=26).contains(&c))
        })
    }
}
