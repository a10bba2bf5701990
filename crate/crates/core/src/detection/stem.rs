use std::fmt;

use crate::bingeo::Component;
use crate::raster::Point;

use super::{DetectorConfig, Leaf, Line, PlantObject, StemDetection, StemMethod};

/// Turns one analyzed object and its leaves into a stem position.
pub trait StemEstimator: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;
    fn estimate(&self, object: &PlantObject, leaves: &[Leaf], config: &DetectorConfig) -> StemDetection;
}

/// Mean of the pairwise leaf-direction intersections, falling back to the
/// center of mass.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeafIntersection;

/// Center of mass of every object, regardless of its leaves.
#[derive(Debug, Clone, Copy, Default)]
pub struct CentroidOnly;

impl StemEstimator for LeafIntersection {
    fn name(&self) -> &'static str {
        "leaves"
    }

    fn estimate(&self, object: &PlantObject, leaves: &[Leaf], config: &DetectorConfig) -> StemDetection {
        estimate_stem(object, leaves, config)
    }
}

impl StemEstimator for CentroidOnly {
    fn name(&self) -> &'static str {
        "centroid"
    }

    fn estimate(&self, object: &PlantObject, leaves: &[Leaf], _config: &DetectorConfig) -> StemDetection {
        StemDetection {
            position: centroid(&object.component),
            method: StemMethod::CentroidFallback,
            num_leaves: leaves.len(),
            object_ref: object.component.label,
        }
    }
}

/// Arithmetic mean of the component's pixel coordinates.
pub fn centroid(component: &Component) -> Point {
    let origin = Point::new(component.bbox.min_row as f64, component.bbox.min_col as f64);
    origin + local_centroid(component)
}

fn local_centroid(component: &Component) -> Point {
    assert!(!component.pixels.is_empty(), "centroid of an empty component");
    let b = component.bbox;
    let (sr, sc) = component.pixels.iter().fold((0u64, 0u64), |(sr, sc), p| {
        (sr + (p.row - b.min_row) as u64, sc + (p.col - b.min_col) as u64)
    });
    let n = component.pixels.len() as f64;
    Point::new(sr as f64 / n, sc as f64 / n)
}

/// Intersection of two infinite lines, or `None` when they are closer to
/// parallel than `min_angle_deg`.
pub fn intersect_directions(l1: &Line, l2: &Line, min_angle_deg: f64) -> Option<Point> {
    let (d1, d2) = (l1.direction, l2.direction);
    let cross = d1.cross(d2);
    let angle = cross.abs().atan2(d1.dot(d2).abs()).to_degrees();
    if !(angle >= min_angle_deg) || cross == 0.0 {
        return None;
    }
    let t = (l2.through - l1.through).cross(d2) / cross;
    let p = l1.through + d1 * t;
    p.is_finite().then_some(p)
}

/// Mean leaf-direction intersection when there are at least `min_leaves`
/// leaves, some pair intersects and the mean lies inside the inflated
/// bounding box; the component centroid otherwise.
pub fn estimate_stem(object: &PlantObject, leaves: &[Leaf], config: &DetectorConfig) -> StemDetection {
    let fallback = || StemDetection {
        position: centroid(&object.component),
        method: StemMethod::CentroidFallback,
        num_leaves: leaves.len(),
        object_ref: object.component.label,
    };
    if leaves.len() < config.min_leaves {
        return fallback();
    }

    let lines: Vec<Line> = leaves.iter().map(Leaf::local_direction).collect();
    let mut sum = Point::default();
    let mut count = 0usize;
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if let Some(p) = intersect_directions(a, b, config.min_angle_deg) {
                sum = sum + p;
                count += 1;
            }
        }
    }
    if count == 0 {
        return fallback();
    }
    let mean = sum / count as f64;
    if !feasible(&object.component, mean, config.feasibility_inflation) {
        return fallback();
    }
    StemDetection {
        position: object.origin() + mean,
        method: StemMethod::LeafIntersection,
        num_leaves: leaves.len(),
        object_ref: object.component.label,
    }
}

/// Whether a local-frame point lies in the pixel-extent box of the component
/// scaled by `inflation` about its center.
fn feasible(component: &Component, local: Point, inflation: f64) -> bool {
    let b = component.bbox;
    let (h, w) = ((b.max_row - b.min_row) as f64, (b.max_col - b.min_col) as f64);
    let center = Point::new(h / 2.0, w / 2.0);
    let half = Point::new((h / 2.0 + 0.5) * inflation, (w / 2.0 + 0.5) * inflation);
    (local.row - center.row).abs() <= half.row && (local.col - center.col).abs() <= half.col
}
