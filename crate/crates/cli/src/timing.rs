use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::Result;
use serde::{Deserialize, Serialize};

/// Mean and sample standard deviation of one stage, milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub mean_ms: f64,
    pub std_ms: f64,
}

impl StageStats {
    pub fn from_samples(samples: &[Duration]) -> Self {
        let ms: Vec<f64> = samples.iter().map(|d| d.as_secs_f64() * 1e3).collect();
        let n = ms.len() as f64;
        if ms.is_empty() {
            return Self { mean_ms: 0.0, std_ms: 0.0 };
        }
        let mean = ms.iter().sum::<f64>() / n;
        let var = if ms.len() > 1 {
            ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean_ms: mean,
            std_ms: var.sqrt(),
        }
    }
}

/// Per-image stage timings. `mask` covers index, threshold and binarization;
/// `stem` covers closing through stem estimation; file reading and writing
/// is reported separately as `io`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub images: usize,
    pub threads: usize,
    pub mask: StageStats,
    pub stem: StageStats,
    pub io: StageStats,
    /// Wall-clock time of the whole batch, milliseconds.
    pub batch_total_ms: f64,
}

impl TimingReport {
    pub fn new(mask: &[Duration], stem: &[Duration], io: &[Duration], batch: Duration, threads: usize) -> Self {
        Self {
            images: stem.len(),
            threads,
            mask: StageStats::from_samples(mask),
            stem: StageStats::from_samples(stem),
            io: StageStats::from_samples(io),
            batch_total_ms: batch.as_secs_f64() * 1e3,
        }
    }

    /// Frames per second implied by the mean mask plus stem time.
    pub fn pipeline_hz(&self) -> f64 {
        let per_frame = self.mask.mean_ms + self.stem.mean_ms;
        if per_frame > 0.0 {
            1e3 / per_frame
        } else {
            f64::INFINITY
        }
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<8} {:>10} {:>10}", "stage", "mean [ms]", "std [ms]");
        for (name, st) in [("mask", self.mask), ("stem", self.stem), ("io", self.io)] {
            let _ = writeln!(s, "{:<8} {:>10.2} {:>10.2}", name, st.mean_ms, st.std_ms);
        }
        let _ = writeln!(
            s,
            "batch total {:.1} ms for {} images on {} threads ({:.1} Hz per frame)",
            self.batch_total_ms,
            self.images,
            self.threads,
            self.pipeline_hz()
        );
        s
    }

    /// `timing.txt` and `timing.json` in `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join("timing.txt"), self.to_table())?;
        fs::write(dir.join("timing.json"), serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_of_known_samples() {
        let s = StageStats::from_samples(&[2, 4, 4, 4, 5, 5, 7, 9].map(Duration::from_millis));
        assert!((s.mean_ms - 5.0).abs() < 1e-9);
        assert!((s.std_ms - (32.0f64 / 7.0).sqrt()).abs() < 1e-9);
        assert_eq!(StageStats::from_samples(&[]).mean_ms, 0.0);
        assert_eq!(StageStats::from_samples(&[Duration::from_millis(3)]).std_ms, 0.0);
    }

    #[test]
    fn table_has_stage_rows_and_total() {
        let d = [Duration::from_millis(10); 3];
        let t = TimingReport::new(&d, &d, &d, Duration::from_millis(45), 2);
        let table = t.to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("mask"));
        assert!(lines[2].starts_with("stem"));
        assert!(lines[4].starts_with("batch total 45.0 ms for 3 images"));
        assert!((t.pipeline_hz() - 50.0).abs() < 1e-9);
    }
}
