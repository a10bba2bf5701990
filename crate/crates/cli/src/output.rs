use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use stemgeo::evaluation::MatchReport;
use stemgeo::{Point, StemDetection, StemMethod};

/// Detections of one image, in component order.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageDetections {
    pub image_id: String,
    pub stems: Vec<StemDetection>,
}

/// One row of a detections file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub image_id: String,
    pub object_id: usize,
    pub stem_row: f64,
    pub stem_col: f64,
    pub method: String,
    pub num_leaves: usize,
}

impl DetectionRecord {
    pub fn position(&self) -> Point {
        Point::new(self.stem_row, self.stem_col)
    }

    pub fn to_detection(&self) -> Result<StemDetection> {
        let method = StemMethod::parse(&self.method).with_context(|| format!("unknown method '{}'", self.method))?;
        Ok(StemDetection {
            position: self.position(),
            method,
            num_leaves: self.num_leaves,
            object_ref: self.object_id,
        })
    }
}

const HEADER: [&str; 6] = ["image_id", "object_id", "stem_row", "stem_col", "method", "num_leaves"];

/// Writes `image_id,object_id,stem_row,stem_col,method,num_leaves` with a
/// header and LF line endings; coordinates carry two decimals.
pub fn write_detections(detections: &[ImageDetections], path: &Path) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    writer.write_record(HEADER)?;
    for image in detections {
        for stem in &image.stems {
            writer.write_record([
                image.image_id.clone(),
                stem.object_ref.to_string(),
                format!("{:.2}", stem.position.row),
                format!("{:.2}", stem.position.col),
                stem.method.as_str().to_string(),
                stem.num_leaves.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn read_detections(path: &Path) -> Result<Vec<DetectionRecord>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    for (line, record) in reader.deserialize().enumerate() {
        let record: DetectionRecord = record.with_context(|| format!("{}: bad row {}", path.display(), line + 2))?;
        rows.push(record);
    }
    Ok(rows)
}

/// Regroups rows by image, keeping first-appearance order.
pub fn group_records(records: &[DetectionRecord]) -> Result<Vec<ImageDetections>> {
    let mut out: Vec<ImageDetections> = Vec::new();
    for r in records {
        let stem = r.to_detection()?;
        match out.last_mut() {
            Some(last) if last.image_id == r.image_id => last.stems.push(stem),
            _ => out.push(ImageDetections {
                image_id: r.image_id.clone(),
                stems: vec![stem],
            }),
        }
    }
    Ok(out)
}

pub fn format_report(report: &MatchReport) -> String {
    format!(
        "radius     {:.2} px\ntp         {}\nfp         {}\nfn         {}\nprecision  {:.4}\nrecall     {:.4}\n",
        report.radius_px, report.tp, report.fp, report.fn_, report.precision, report.recall
    )
}

/// `report.txt` and `report.json` in `dir`.
pub fn write_report(report: &MatchReport, dir: &Path) -> Result<()> {
    fs::write(dir.join("report.txt"), format_report(report))?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;
    Ok(())
}
