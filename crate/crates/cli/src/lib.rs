//! Batch driver for the stem detector: discovers images or masks in a
//! directory, runs the pipeline on a worker pool and writes detections,
//! overlays, evaluation and timing reports.

pub mod output;
pub mod timing;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use log::{info, warn};
use rayon::prelude::*;
use stemgeo::evaluation::{aggregate, cm_to_px, match_stems, read_ground_truth, GroundTruthStem, MatchReport};
use stemgeo::raster::{load_image, save_annotated, LoadOptions};
use stemgeo::segmentation::{segment, IndexChoice, SegmentationConfig};
use stemgeo::{BinaryMask, Detector, DetectorConfig, Image, LeafIntersection, StemDetection, StemEstimator};

pub use output::{read_detections, write_detections, DetectionRecord, ImageDetections};
pub use timing::{StageStats, TimingReport};

/// Extensions picked up from the input directory.
pub const INPUT_EXTENSIONS: &[&str] = &["png", "pgm", "ppm", "pnm"];

#[derive(Debug, Clone)]
pub enum Mode {
    /// Color or NIR images, segmented with the given index and thresholder.
    FromImages(SegmentationConfig),
    /// Ready-made vegetation masks (set where the sample is >= 128).
    FromMasks,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub mode: Mode,
    /// Directory of per-image masks for [`IndexChoice::External`], matched
    /// by file stem.
    pub mask_dir: Option<PathBuf>,
    pub load: LoadOptions,
    pub detector: DetectorConfig,
    pub kernel_size: i64,
    pub min_area: usize,
    pub estimator: Arc<dyn StemEstimator>,
    pub gt_path: Option<PathBuf>,
    pub px_per_cm: Option<f64>,
    pub radius_cm: f64,
    pub annotate: bool,
    pub benchmark: bool,
    pub threads: usize,
}

impl RunConfig {
    pub fn new(input_dir: impl Into<PathBuf>, output_dir: impl Into<PathBuf>, mode: Mode) -> Self {
        Self {
            input_dir: input_dir.into(),
            output_dir: output_dir.into(),
            mode,
            mask_dir: None,
            load: LoadOptions::default(),
            detector: DetectorConfig::default(),
            kernel_size: 11,
            min_area: 32,
            estimator: Arc::new(LeafIntersection),
            gt_path: None,
            px_per_cm: None,
            radius_cm: 0.5,
            annotate: false,
            benchmark: false,
            threads: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.detector.validate()?;
        stemgeo::bingeo::make_ellipse_kernel(self.kernel_size)?;
        ensure!(self.threads >= 1, "thread count must be at least 1");
        if let Mode::FromImages(SegmentationConfig { index: IndexChoice::External, .. }) = self.mode {
            ensure!(self.mask_dir.is_some(), "the external index needs a mask directory");
        }
        if self.gt_path.is_some() {
            let px = self.px_per_cm.context("evaluation needs a pixel scale (pixels per centimeter)")?;
            cm_to_px(self.radius_cm, px)?;
        }
        Ok(())
    }

    pub fn detector(&self) -> Result<Detector> {
        Ok(Detector::new(self.detector, self.kernel_size, self.min_area)?.with_estimator(self.estimator.clone()))
    }
}

/// Outcome of one batch.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub detections: Vec<ImageDetections>,
    /// `(image id, error message)` for every image that was skipped.
    pub failures: Vec<(String, String)>,
    pub report: Option<MatchReport>,
    pub timing: Option<TimingReport>,
    pub detections_path: PathBuf,
}

impl RunSummary {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sorted input files of a directory.
pub fn discover_inputs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot read input directory {}", dir.display()))? {
        let path = entry?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && ext.is_some_and(|e| INPUT_EXTENSIONS.contains(&e.as_str())) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn image_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

struct ImageOutcome {
    stems: Vec<StemDetection>,
    mask: Duration,
    stem: Duration,
    io: Duration,
}

fn external_mask_path(mask_dir: &Path, id: &str) -> Result<PathBuf> {
    INPUT_EXTENSIONS
        .iter()
        .map(|ext| mask_dir.join(format!("{id}.{ext}")))
        .find(|p| p.is_file())
        .with_context(|| format!("no mask named {id}.* in {}", mask_dir.display()))
}

fn process_image(config: &RunConfig, detector: &Detector, path: &Path) -> Result<ImageOutcome> {
    let id = image_id(path);
    let mut io = Duration::ZERO;

    let started = Instant::now();
    let image = load_image(path, &config.load)?;
    let external = match (&config.mode, &config.mask_dir) {
        (Mode::FromImages(SegmentationConfig { index: IndexChoice::External, .. }), Some(dir)) => {
            let mask_path = external_mask_path(dir, &id)?;
            Some(load_image(&mask_path, &LoadOptions::default())?)
        }
        _ => None,
    };
    io += started.elapsed();

    let started = Instant::now();
    let mask = build_mask(&config.mode, &image, external.as_ref())?;
    let mask_time = started.elapsed();
    ensure!(
        mask.dims() == (image.height(), image.width()),
        "mask is {}x{} but the image is {}x{}",
        mask.height(),
        mask.width(),
        image.height(),
        image.width()
    );

    let started = Instant::now();
    let objects = detector.detect_objects(&mask);
    let stem_time = started.elapsed();
    let stems: Vec<StemDetection> = objects.iter().map(|(_, s)| *s).collect();

    if config.annotate {
        let started = Instant::now();
        let plants: Vec<_> = objects.into_iter().map(|(o, _)| o).collect();
        let out = config.output_dir.join("annotated").join(format!("{id}.png"));
        save_annotated(&image, &plants, &stems, &out)?;
        io += started.elapsed();
    }

    Ok(ImageOutcome {
        stems,
        mask: mask_time,
        stem: stem_time,
        io,
    })
}

fn build_mask(mode: &Mode, image: &Image, external: Option<&Image>) -> Result<BinaryMask> {
    Ok(match mode {
        Mode::FromMasks => BinaryMask::from_gray_image(image, 128),
        Mode::FromImages(seg) => match &seg.index {
            IndexChoice::External => BinaryMask::from_gray_image(external.context("external mask missing")?, 128),
            IndexChoice::Computed(index) => segment(image, index.as_ref(), seg.thresholder.as_ref())?,
        },
    })
}

/// Runs the batch and writes `detections.csv` (plus overlays and reports, as
/// configured) to the output directory. Images that fail are logged, listed
/// in the summary and left out of the CSV. Output order follows the sorted
/// file names whatever the thread count.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let inputs = discover_inputs(&config.input_dir)?;
    if inputs.is_empty() {
        bail!("no input images in {}", config.input_dir.display());
    }
    let truth = match &config.gt_path {
        Some(path) => Some(
            read_ground_truth(path).with_context(|| format!("cannot read ground truth {}", path.display()))?,
        ),
        None => None,
    };
    fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("cannot create output directory {}", config.output_dir.display()))?;
    if config.annotate {
        fs::create_dir_all(config.output_dir.join("annotated"))?;
    }

    let detector = config.detector()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.threads).build()?;
    info!("processing {} images on {} threads", inputs.len(), config.threads);
    let batch_started = Instant::now();
    let outcomes: Vec<Result<ImageOutcome>> =
        pool.install(|| inputs.par_iter().map(|p| process_image(config, &detector, p)).collect());
    let batch_time = batch_started.elapsed();

    let mut detections = Vec::new();
    let mut failures = Vec::new();
    let mut stage_samples = (Vec::new(), Vec::new(), Vec::new());
    for (path, outcome) in inputs.iter().zip(outcomes) {
        let id = image_id(path);
        match outcome {
            Ok(o) => {
                stage_samples.0.push(o.mask);
                stage_samples.1.push(o.stem);
                stage_samples.2.push(o.io);
                detections.push(ImageDetections { image_id: id, stems: o.stems });
            }
            Err(e) => {
                warn!("skipping {}: {e:#}", path.display());
                failures.push((id, format!("{e:#}")));
            }
        }
    }

    let detections_path = config.output_dir.join("detections.csv");
    write_detections(&detections, &detections_path)?;

    let report = match truth {
        Some(truth) => {
            let radius = cm_to_px(config.radius_cm, config.px_per_cm.expect("validated"))?;
            let report = evaluate(&detections, &truth, radius)?;
            output::write_report(&report, &config.output_dir)?;
            Some(report)
        }
        None => None,
    };

    let timing = if config.benchmark {
        let t = TimingReport::new(&stage_samples.0, &stage_samples.1, &stage_samples.2, batch_time, config.threads);
        t.write(&config.output_dir)?;
        Some(t)
    } else {
        None
    };

    Ok(RunSummary {
        detections,
        failures,
        report,
        timing,
        detections_path,
    })
}

/// Runs the batch with timing enabled and returns the timing report.
pub fn bench(config: &RunConfig) -> Result<TimingReport> {
    let config = RunConfig {
        benchmark: true,
        ..config.clone()
    };
    Ok(run(&config)?.timing.expect("benchmark flag set"))
}

/// Matches per image and micro-averages. Images present on one side only
/// contribute their detections as false positives or their stems as misses.
pub fn evaluate(detections: &[ImageDetections], truth: &[GroundTruthStem], radius_px: f64) -> Result<MatchReport> {
    let mut by_image: BTreeMap<&str, (Vec<StemDetection>, Vec<GroundTruthStem>)> = BTreeMap::new();
    for d in detections {
        by_image.entry(&d.image_id).or_default().0.extend(d.stems.iter().copied());
    }
    for t in truth {
        by_image.entry(&t.image_id).or_default().1.push(t.clone());
    }
    let reports: Vec<MatchReport> = by_image
        .values()
        .map(|(dets, gts)| match_stems(dets, gts, radius_px))
        .collect();
    if reports.is_empty() {
        return Ok(MatchReport::from_counts(0, 0, 0, radius_px));
    }
    Ok(aggregate(&reports)?)
}
