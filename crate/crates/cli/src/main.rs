use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use stemgeo::evaluation::{cm_to_px, generate_field, read_ground_truth, write_ground_truth, FieldSpec};
use stemgeo::raster::{save_mask, LoadOptions};
use stemgeo::registry;
use stemgeo::segmentation::{IndexChoice, SegmentationConfig};
use stemgeo::DetectorConfig;
use stemgeo_cli::output::{format_report, group_records, write_report};
use stemgeo_cli::{read_detections, run, Mode, RunConfig};

#[derive(Parser)]
#[command(name = "stemgeo", version, about = "Geometric plant stem detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect stems in every image (or mask) of a directory.
    Detect(PipelineArgs),
    /// Like `detect`, and print per-stage timings.
    Bench(PipelineArgs),
    /// Score an existing detections file against ground truth.
    Eval(EvalArgs),
    /// Write a synthetic corpus of plant masks with ground truth.
    Synth(SynthArgs),
}

#[derive(Args, Clone)]
struct PipelineArgs {
    /// Directory with the input images or masks.
    input: PathBuf,
    /// Output directory.
    #[arg(short, long, default_value = "out")]
    output: PathBuf,
    /// Inputs are binary masks rather than camera images.
    #[arg(long)]
    from_masks: bool,
    /// Vegetation index: exg, ndvi or external.
    #[arg(long, default_value = "exg")]
    index: String,
    /// Masks for `--index external`, named like the images.
    #[arg(long)]
    mask_dir: Option<PathBuf>,
    /// Thresholder: otsu, triangle or fixed:<bin>.
    #[arg(long, default_value = "otsu")]
    thresh: String,
    /// Closing kernel size (odd).
    #[arg(long, default_value_t = 11)]
    kernel: i64,
    /// Minimum convexity-defect depth, pixels.
    #[arg(long, default_value_t = 5.0)]
    min_defect: f64,
    /// Minimum number of leaves for the leaf-intersection estimate.
    #[arg(long, default_value_t = 2)]
    min_leaves: usize,
    /// Components smaller than this many pixels are ignored.
    #[arg(long, default_value_t = 32)]
    min_area: usize,
    /// Stem estimator: leaves or centroid.
    #[arg(long, default_value = "leaves")]
    estimator: String,
    /// Ground-truth CSV to evaluate against.
    #[arg(long)]
    gt: Option<PathBuf>,
    #[arg(long, default_value_t = 20.0)]
    px_per_cm: f64,
    /// Match radius, centimeters.
    #[arg(long, default_value_t = 0.5)]
    radius_cm: f64,
    /// Write overlays to <output>/annotated.
    #[arg(long)]
    annotate: bool,
    /// Record per-stage timings.
    #[arg(long)]
    bench: bool,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    threads: Option<usize>,
    /// Read the alpha channel of RGBA PNGs as near-infrared.
    #[arg(long)]
    nir_in_alpha: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Detections CSV written by `detect`.
    #[arg(long)]
    detections: PathBuf,
    #[arg(long)]
    gt: PathBuf,
    #[arg(long, default_value_t = 20.0)]
    px_per_cm: f64,
    #[arg(long, default_value_t = 0.5)]
    radius_cm: f64,
    /// Also write report.txt and report.json here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(short, long)]
    output: PathBuf,
    /// Number of masks.
    #[arg(long, default_value_t = 50)]
    images: usize,
    /// Plants per mask.
    #[arg(long, default_value_t = 20)]
    plants: usize,
    #[arg(long, default_value_t = 1280)]
    width: usize,
    #[arg(long, default_value_t = 960)]
    height: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn pipeline_config(args: &PipelineArgs, benchmark: bool) -> Result<RunConfig> {
    // names are checked even when masks make them irrelevant
    let thresholder = registry::thresholders().create(&args.thresh)?;
    let index = match args.index.as_str() {
        "external" => IndexChoice::External,
        name => IndexChoice::Computed(registry::indices().create(name)?),
    };
    let mode = if args.from_masks {
        Mode::FromMasks
    } else {
        Mode::FromImages(SegmentationConfig { index, thresholder })
    };
    let threads = match args.threads {
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    Ok(RunConfig {
        mask_dir: args.mask_dir.clone(),
        load: LoadOptions {
            nir_in_alpha: args.nir_in_alpha,
        },
        detector: DetectorConfig {
            min_defect_depth: args.min_defect,
            min_leaves: args.min_leaves,
            ..DetectorConfig::default()
        },
        kernel_size: args.kernel,
        min_area: args.min_area,
        estimator: registry::stem_estimators().create(&args.estimator)?,
        gt_path: args.gt.clone(),
        px_per_cm: Some(args.px_per_cm),
        radius_cm: args.radius_cm,
        annotate: args.annotate,
        benchmark: benchmark || args.bench,
        threads,
        ..RunConfig::new(&args.input, &args.output, mode)
    })
}

fn detect(args: &PipelineArgs, benchmark: bool) -> Result<bool> {
    let config = pipeline_config(args, benchmark)?;
    let summary = run(&config)?;
    let count: usize = summary.detections.iter().map(|d| d.stems.len()).sum();
    println!(
        "{} stems in {} images -> {}",
        count,
        summary.detections.len(),
        summary.detections_path.display()
    );
    if let Some(report) = &summary.report {
        print!("{}", format_report(report));
    }
    if let Some(timing) = &summary.timing {
        print!("{}", timing.to_table());
    }
    for (id, err) in &summary.failures {
        eprintln!("failed: {id}: {err}");
    }
    Ok(summary.is_clean())
}

fn eval(args: &EvalArgs) -> Result<bool> {
    let records = read_detections(&args.detections)?;
    let detections = group_records(&records)?;
    let truth = read_ground_truth(&args.gt).with_context(|| format!("cannot read ground truth {}", args.gt.display()))?;
    let radius = cm_to_px(args.radius_cm, args.px_per_cm)?;
    let report = stemgeo_cli::evaluate(&detections, &truth, radius)?;
    print!("{}", format_report(&report));
    if let Some(dir) = &args.output {
        std::fs::create_dir_all(dir)?;
        write_report(&report, dir)?;
    }
    Ok(true)
}

fn synth(args: &SynthArgs) -> Result<bool> {
    std::fs::create_dir_all(&args.output)?;
    let mut truth = Vec::new();
    for i in 0..args.images {
        let id = format!("field_{i:03}");
        let seed = args.seed.wrapping_add(i as u64);
        let field = generate_field(args.plants, (args.height, args.width), &FieldSpec::default(), seed)?;
        save_mask(&field.mask, args.output.join(format!("{id}.png")))?;
        truth.extend(field.ground_truth(&id));
    }
    write_ground_truth(args.output.join("ground_truth.csv"), &truth)?;
    println!("{} masks, {} plants -> {}", args.images, truth.len(), args.output.display());
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Detect(args) => detect(args, false),
        Command::Bench(args) => detect(args, true),
        Command::Eval(args) => eval(args),
        Command::Synth(args) => synth(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
