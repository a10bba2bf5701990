use serde::{Deserialize, Serialize};

use super::{orient, Contour};

/// Deepest contour point between two consecutive hull vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityDefect {
    pub hull_start: usize,
    pub hull_end: usize,
    pub farthest: usize,
    /// Perpendicular distance of `farthest` to the hull edge, in pixels.
    pub depth: f64,
}

/// Hull vertices as contour indices, counter-clockwise, starting at the
/// smallest index. Monotone chain over the distinct contour points with strict
/// turns only, so points on hull edges are not vertices. A pixel that occurs
/// several times in the walk is represented by its first occurrence.
pub fn convex_hull(contour: &Contour) -> Vec<usize> {
    let pts = contour.points();
    assert!(!pts.is_empty(), "hull of an empty contour");

    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by_key(|&i| (pts[i], i));
    order.dedup_by_key(|i| pts[*i]);
    if order.len() <= 2 {
        order.sort_unstable();
        return order;
    }

    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in [&order[..], &order.iter().rev().copied().collect::<Vec<_>>()[..]] {
        let base = hull.len();
        for &i in pass {
            while hull.len() >= base + 2
                && orient(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= 0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }

    let lowest = hull.iter().enumerate().min_by_key(|(_, &i)| i).map(|(k, _)| k).unwrap_or(0);
    hull.rotate_left(lowest);
    hull
}

/// One defect per hull edge that has contour points strictly between its
/// endpoints (walking the contour forward from the edge start). The farthest
/// point is the first one reached among those at maximal distance.
pub fn convexity_defects(contour: &Contour, hull: &[usize]) -> Vec<ConvexityDefect> {
    let pts = contour.points();
    let n = pts.len();
    if hull.len() < 2 {
        return Vec::new();
    }
    let mut defects = Vec::new();
    for (k, &start) in hull.iter().enumerate() {
        let end = hull[(k + 1) % hull.len()];
        let (a, b) = (pts[start], pts[end]);
        let mut best: Option<(usize, i64)> = None;
        let mut j = (start + 1) % n;
        while j != end {
            let twice_area = orient(a, b, pts[j]);
            if best.map_or(true, |(_, d)| twice_area > d) {
                best = Some((j, twice_area));
            }
            j = (j + 1) % n;
        }
        if let Some((farthest, twice_area)) = best {
            let edge = ((b.row as f64 - a.row as f64).powi(2) + (b.col as f64 - a.col as f64).powi(2)).sqrt();
            defects.push(ConvexityDefect {
                hull_start: start,
                hull_end: end,
                farthest,
                depth: twice_area.max(0) as f64 / edge,
            });
        }
    }
    defects
}
