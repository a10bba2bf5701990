//! Geometric stem detection for top-down field imagery.
//!
//! The pipeline runs in two halves:
//!
//! 1. **Segmentation** ([`segmentation`]): a vegetation index (ExG or NDVI) is
//!    computed per pixel, quantized to a 256-bin histogram and binarized with an
//!    automatic threshold (Otsu or Triangle) into a [`BinaryMask`].
//! 2. **Detection** ([`bingeo`], [`detection`]): the mask is closed with an
//!    elliptic kernel and split into 8-connected components. For each component
//!    the outer contour, its convex hull and the convexity defects are computed;
//!    neighboring deep defects cut the contour into leaves, and the stem is the
//!    mean of the pairwise intersections of the leaf directions. Objects with too
//!    few leaves fall back to the center of mass.
//!
//! [`evaluation`] holds the precision/recall protocol and a synthetic rosette
//! generator used as ground truth. [`registry`] exposes the interchangeable
//! strategies (indices, thresholders, stem estimators) by name.
//!
//! Coordinates are `(row, col)` with the origin at the top-left pixel.

pub mod bingeo;
pub mod detection;
pub mod evaluation;
pub mod raster;
pub mod registry;
pub mod segmentation;

pub use bingeo::{Component, Contour, ConvexityDefect, StructuringElement};
pub use detection::{
    detect_all, CentroidOnly, Detector, DetectorConfig, Leaf, LeafIntersection, PlantObject,
    StemDetection, StemEstimator, StemMethod,
};
pub use evaluation::{GroundTruthStem, MatchReport, SynthPlantSpec};
pub use raster::{BinaryMask, Channels, GrayMap, Image, Pixel, Point};
pub use segmentation::{Histogram, SegmentationConfig, Thresholder, VegetationIndex};
