//! Precision/recall against annotated stems, and a synthetic rosette
//! generator that stands in for annotated field data.

mod synth;

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detection::StemDetection;
use crate::raster::Point;

pub use synth::{generate_field, generate_plant, FieldSpec, SynthField, SynthPlantSpec};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("cannot aggregate reports with different radii ({0} px vs {1} px)")]
    MixedRadii(f64, f64),
    #[error("invalid plant spec: {0}")]
    InvalidSpec(String),
    #[error("leaves {0} and {1} overlap: angular gap {2:.1} deg is below {3:.1} deg")]
    OverlappingLeaves(usize, usize, f64, f64),
    #[error("placed {placed} of {requested} plants before running out of attempts")]
    PlacementFailed { placed: usize, requested: usize },
    #[error("ground truth: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// An annotated stem position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthStem {
    pub image_id: String,
    pub position: Point,
}

/// Outcome of matching detections to ground truth within a radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub radius_px: f64,
}

impl MatchReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, radius_px: f64) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        Self {
            tp,
            fp,
            fn_,
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
            radius_px,
        }
    }
}

/// Greedy globally-nearest one-to-one matching: repeatedly pairs the closest
/// unmatched (detection, truth) couple within `radius_px`. Returns
/// `(detection index, truth index)` pairs in matching order.
pub fn match_pairs(detections: &[Point], truth: &[Point], radius_px: f64) -> Vec<(usize, usize)> {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, d) in detections.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            let dist = d.distance(*t);
            if dist <= radius_px {
                candidates.push((dist, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut det_used = vec![false; detections.len()];
    let mut truth_used = vec![false; truth.len()];
    let mut pairs = Vec::new();
    for (_, i, j) in candidates {
        if !det_used[i] && !truth_used[j] {
            det_used[i] = true;
            truth_used[j] = true;
            pairs.push((i, j));
        }
    }
    pairs
}

/// Matched pairs are true positives, unmatched detections false positives and
/// unmatched truths false negatives.
pub fn match_stems(detections: &[StemDetection], truth: &[GroundTruthStem], radius_px: f64) -> MatchReport {
    let dets: Vec<Point> = detections.iter().map(|d| d.position).collect();
    let gts: Vec<Point> = truth.iter().map(|t| t.position).collect();
    let tp = match_pairs(&dets, &gts, radius_px).len();
    MatchReport::from_counts(tp, dets.len() - tp, gts.len() - tp, radius_px)
}

pub fn cm_to_px(radius_cm: f64, px_per_cm: f64) -> Result<f64, EvalError> {
    if !(radius_cm > 0.0) {
        return Err(EvalError::NonPositive { name: "radius", value: radius_cm });
    }
    if !(px_per_cm > 0.0) {
        return Err(EvalError::NonPositive { name: "pixels per centimeter", value: px_per_cm });
    }
    Ok(radius_cm * px_per_cm)
}

/// Micro-average: sums the counts, then recomputes the ratios.
pub fn aggregate(reports: &[MatchReport]) -> Result<MatchReport, EvalError> {
    let Some(first) = reports.first() else {
        return Ok(MatchReport::from_counts(0, 0, 0, 0.0));
    };
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for r in reports {
        if r.radius_px != first.radius_px {
            return Err(EvalError::MixedRadii(first.radius_px, r.radius_px));
        }
        tp += r.tp;
        fp += r.fp;
        fn_ += r.fn_;
    }
    Ok(MatchReport::from_counts(tp, fp, fn_, first.radius_px))
}

#[derive(Debug, Serialize, Deserialize)]
struct TruthRecord {
    image_id: String,
    stem_row: f64,
    stem_col: f64,
}

/// Reads `image_id,stem_row,stem_col` rows (with header).
pub fn read_ground_truth(path: impl AsRef<Path>) -> Result<Vec<GroundTruthStem>, EvalError> {
    let mut reader = csv::Reader::from_path(path)?;
    reader
        .deserialize::<TruthRecord>()
        .map(|rec| {
            let rec = rec?;
            Ok(GroundTruthStem {
                image_id: rec.image_id,
                position: Point::new(rec.stem_row, rec.stem_col),
            })
        })
        .collect()
}

pub fn write_ground_truth(path: impl AsRef<Path>, truth: &[GroundTruthStem]) -> Result<(), EvalError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    writer.write_record(["image_id", "stem_row", "stem_col"])?;
    for t in truth {
        writer.write_record([
            t.image_id.clone(),
            format!("{:.2}", t.position.row),
            format!("{:.2}", t.position.col),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
