//! Leaf extraction from convexity defects and stem regression from leaf
//! directions.
//!
//! Per-object geometry is computed in a frame anchored at the top-left corner
//! of the object's bounding box and only shifted to image coordinates at the
//! end, so every decision (leaf acceptance, angle guard, feasibility check) is
//! independent of where the object sits in the image.

mod leaves;
mod stem;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bingeo::{
    self, close, connected_components, convex_hull, convexity_defects, trace_contour, Component, Contour,
    ConvexityDefect, GeometryError, StructuringElement,
};
use crate::raster::{BinaryMask, Point};

pub use leaves::{extract_leaves, Leaf, Line};
pub use stem::{centroid, estimate_stem, intersect_directions, CentroidOnly, LeafIntersection, StemEstimator};

#[derive(Debug, Error, PartialEq)]
pub enum DetectionError {
    #[error("invalid detector configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Kernel(#[from] GeometryError),
}

/// Hyper-parameters of leaf and stem detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Minimum convexity-defect depth, in pixels, for a cut-off point.
    pub min_defect_depth: f64,
    /// Fewer leaves than this fall back to the center of mass.
    pub min_leaves: usize,
    /// The mean intersection must lie in the object's bounding box scaled by
    /// this factor about its center.
    pub feasibility_inflation: f64,
    /// Leaf-direction pairs closer to parallel than this (degrees) are not
    /// intersected.
    pub min_angle_deg: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            min_defect_depth: 5.0,
            min_leaves: 2,
            feasibility_inflation: 1.2,
            min_angle_deg: 5.0,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), DetectionError> {
        let fail = |msg: String| Err(DetectionError::InvalidConfig(msg));
        if !(self.min_defect_depth > 0.0) {
            return fail(format!("minimum defect depth must be positive, got {}", self.min_defect_depth));
        }
        if self.min_leaves < 2 {
            return fail(format!("minimum leaf count must be at least 2, got {}", self.min_leaves));
        }
        if !(self.feasibility_inflation >= 1.0) {
            return fail(format!("feasibility inflation must be >= 1, got {}", self.feasibility_inflation));
        }
        if !(self.min_angle_deg > 0.0 && self.min_angle_deg < 90.0) {
            return fail(format!("minimum angle must lie in (0, 90), got {}", self.min_angle_deg));
        }
        Ok(())
    }
}

/// One connected vegetation object with its outline analysis.
#[derive(Debug, Clone)]
pub struct PlantObject {
    pub component: Component,
    pub contour: Contour,
    pub hull: Vec<usize>,
    /// Defects at least `min_defect_depth` deep, in contour order.
    pub defects: Vec<ConvexityDefect>,
}

impl PlantObject {
    pub fn build(component: Component, config: &DetectorConfig) -> Self {
        let dims = (component.bbox.max_row + 1, component.bbox.max_col + 1);
        let contour = trace_contour(&component, dims);
        let hull = convex_hull(&contour);
        let mut defects: Vec<ConvexityDefect> = convexity_defects(&contour, &hull)
            .into_iter()
            .filter(|d| d.depth >= config.min_defect_depth)
            .collect();
        defects.sort_by_key(|d| d.farthest);
        Self {
            component,
            contour,
            hull,
            defects,
        }
    }

    /// Image position of the local frame's origin.
    pub fn origin(&self) -> Point {
        Point::new(self.component.bbox.min_row as f64, self.component.bbox.min_col as f64)
    }

    pub(crate) fn to_local(&self, p: crate::raster::Pixel) -> Point {
        Point::new(
            (p.row - self.component.bbox.min_row) as f64,
            (p.col - self.component.bbox.min_col) as f64,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StemMethod {
    LeafIntersection,
    CentroidFallback,
}

impl StemMethod {
    /// Literal used in detection files.
    pub fn as_str(self) -> &'static str {
        match self {
            StemMethod::LeafIntersection => "leaves",
            StemMethod::CentroidFallback => "centroid",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "leaves" => Some(StemMethod::LeafIntersection),
            "centroid" => Some(StemMethod::CentroidFallback),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StemDetection {
    pub position: Point,
    pub method: StemMethod,
    pub num_leaves: usize,
    /// Label of the component the stem belongs to.
    pub object_ref: usize,
}

/// The full mask-to-stems pipeline with a pluggable stem estimator.
#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    kernel: StructuringElement,
    min_area: usize,
    estimator: Arc<dyn StemEstimator>,
}

impl Detector {
    pub fn new(config: DetectorConfig, kernel_size: i64, min_area: usize) -> Result<Self, DetectionError> {
        config.validate()?;
        Ok(Self {
            config,
            kernel: bingeo::make_ellipse_kernel(kernel_size)?,
            min_area,
            estimator: Arc::new(LeafIntersection),
        })
    }

    pub fn with_estimator(mut self, estimator: Arc<dyn StemEstimator>) -> Self {
        self.estimator = estimator;
        self
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn estimator(&self) -> &dyn StemEstimator {
        self.estimator.as_ref()
    }

    /// Closed mask, then one analyzed object and stem per component.
    pub fn detect_objects(&self, mask: &BinaryMask) -> Vec<(PlantObject, StemDetection)> {
        let closed = close(mask, &self.kernel);
        connected_components(&closed, self.min_area)
            .into_iter()
            .map(|component| {
                let object = PlantObject::build(component, &self.config);
                let leaves = extract_leaves(&object);
                let stem = self.estimator.estimate(&object, &leaves, &self.config);
                (object, stem)
            })
            .collect()
    }

    pub fn detect(&self, mask: &BinaryMask) -> Vec<StemDetection> {
        self.detect_objects(mask).into_iter().map(|(_, s)| s).collect()
    }
}

/// Closing with an elliptic kernel of size `kernel_size`, component
/// extraction (dropping those under `min_area` pixels), leaf extraction and
/// leaf-intersection stem estimation, one detection per component.
pub fn detect_all(
    mask: &BinaryMask,
    config: &DetectorConfig,
    kernel_size: i64,
    min_area: usize,
) -> Result<Vec<StemDetection>, DetectionError> {
    Ok(Detector::new(*config, kernel_size, min_area)?.detect(mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert_eq!(DetectorConfig::default().validate(), Ok(()));
    }

    #[test]
    fn config_bounds_are_enforced() {
        let base = DetectorConfig::default();
        for bad in [
            DetectorConfig { min_defect_depth: 0.0, ..base },
            DetectorConfig { min_leaves: 1, ..base },
            DetectorConfig { feasibility_inflation: 0.9, ..base },
            DetectorConfig { min_angle_deg: 0.0, ..base },
            DetectorConfig { min_angle_deg: 90.0, ..base },
            DetectorConfig { min_defect_depth: f64::NAN, ..base },
        ] {
            assert!(matches!(bad.validate(), Err(DetectionError::InvalidConfig(_))), "{bad:?}");
        }
    }

    #[test]
    fn even_kernel_is_rejected() {
        let err = Detector::new(DetectorConfig::default(), 10, 32).unwrap_err();
        assert_eq!(err, DetectionError::Kernel(GeometryError::InvalidKernelSize(10)));
    }

    #[test]
    fn empty_mask_yields_nothing() {
        let mask = BinaryMask::new(40, 30);
        assert!(detect_all(&mask, &DetectorConfig::default(), 11, 32).unwrap().is_empty());
    }

    #[test]
    fn method_literals_round_trip() {
        for m in [StemMethod::LeafIntersection, StemMethod::CentroidFallback] {
            assert_eq!(StemMethod::parse(m.as_str()), Some(m));
        }
        assert_eq!(StemMethod::CentroidFallback.as_str(), "centroid");
    }
}
