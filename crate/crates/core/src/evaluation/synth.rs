use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EvalError, GroundTruthStem};
use crate::raster::{BinaryMask, Point};

/// A rosette: `leaf_count` teardrop leaves radiating from `stem`.
///
/// Each leaf is a wedge widening linearly to `leaf_width` at half its length,
/// closed by an elliptic cap, so seen from the stem it spans
/// `atan(leaf_width / length)` on each side of its axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthPlantSpec {
    pub stem: Point,
    pub leaf_count: usize,
    pub leaf_length: f64,
    pub leaf_width: f64,
    /// Per-leaf angular perturbation, uniform in `±angle_jitter_deg`.
    pub angle_jitter_deg: f64,
    /// Per-leaf relative length perturbation, uniform in `±length_jitter`.
    pub length_jitter: f64,
    /// Per-leaf length multipliers; empty means all ones.
    pub asymmetry: Vec<f64>,
    /// Angle of the first leaf; drawn from the seed when `None`.
    pub orientation_deg: Option<f64>,
}

impl SynthPlantSpec {
    pub fn symmetric(stem: Point, leaf_count: usize, leaf_length: f64, leaf_width: f64) -> Self {
        Self {
            stem,
            leaf_count,
            leaf_length,
            leaf_width,
            angle_jitter_deg: 0.0,
            length_jitter: 0.0,
            asymmetry: Vec::new(),
            orientation_deg: None,
        }
    }

    pub fn is_asymmetric(&self) -> bool {
        self.asymmetry.iter().any(|&a| a != 1.0)
    }

    fn multiplier(&self, leaf: usize) -> f64 {
        self.asymmetry.get(leaf).copied().unwrap_or(1.0)
    }

    /// Largest distance from the stem covered by any leaf.
    pub fn reach(&self) -> f64 {
        let longest = (0..self.leaf_count).map(|i| self.multiplier(i)).fold(0.0, f64::max);
        (self.leaf_length * longest * (1.0 + self.length_jitter)).max(STEM_DISC_RADIUS)
    }

    fn validate(&self) -> Result<(), EvalError> {
        let fail = |msg: String| Err(EvalError::InvalidSpec(msg));
        if self.leaf_count < 2 {
            return fail(format!("need at least 2 leaves, got {}", self.leaf_count));
        }
        if !(self.leaf_length > 0.0 && self.leaf_width > 0.0) || !self.leaf_length.is_finite() || !self.leaf_width.is_finite() {
            return fail(format!("leaf size must be positive, got {}x{}", self.leaf_length, self.leaf_width));
        }
        if !(self.angle_jitter_deg >= 0.0 && self.angle_jitter_deg < 180.0) {
            return fail(format!("angle jitter must lie in [0, 180), got {}", self.angle_jitter_deg));
        }
        if !(self.length_jitter >= 0.0 && self.length_jitter < 1.0) {
            return fail(format!("length jitter must lie in [0, 1), got {}", self.length_jitter));
        }
        if !self.asymmetry.is_empty() && self.asymmetry.len() != self.leaf_count {
            return fail(format!("{} asymmetry multipliers for {} leaves", self.asymmetry.len(), self.leaf_count));
        }
        if self.asymmetry.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return fail("asymmetry multipliers must be positive".into());
        }
        if !self.stem.is_finite() {
            return fail("stem position must be finite".into());
        }
        Ok(())
    }
}

/// Keeps the leaf bases connected where their wedges narrow to a point.
const STEM_DISC_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy)]
struct LeafGeom {
    /// Unit axis, (row, col).
    axis: Point,
    length: f64,
    half_width: f64,
}

impl LeafGeom {
    fn contains(&self, d: Point) -> bool {
        let s = d.dot(self.axis) / self.length;
        if !(0.0..=1.0).contains(&s) {
            return false;
        }
        let profile = if s <= 0.5 { 2.0 * s } else { (1.0 - (2.0 * s - 1.0).powi(2)).sqrt() };
        d.cross(self.axis).abs() <= self.half_width * profile
    }
}

fn sample_leaves(spec: &SynthPlantSpec, rng: &mut ChaCha8Rng) -> Result<Vec<LeafGeom>, EvalError> {
    let k = spec.leaf_count;
    let phase = match spec.orientation_deg {
        Some(deg) => deg.to_radians(),
        None => rng.gen_range(0.0..TAU),
    };
    let mut angles = Vec::with_capacity(k);
    let mut leaves = Vec::with_capacity(k);
    for i in 0..k {
        let jitter = if spec.angle_jitter_deg > 0.0 {
            rng.gen_range(-spec.angle_jitter_deg..=spec.angle_jitter_deg).to_radians()
        } else {
            0.0
        };
        let stretch = if spec.length_jitter > 0.0 {
            1.0 + rng.gen_range(-spec.length_jitter..=spec.length_jitter)
        } else {
            1.0
        };
        let theta = phase + TAU * i as f64 / k as f64 + jitter;
        angles.push(theta.rem_euclid(TAU));
        leaves.push(LeafGeom {
            axis: Point::new(-theta.sin(), theta.cos()),
            length: spec.leaf_length * stretch * spec.multiplier(i),
            half_width: spec.leaf_width / 2.0,
        });
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
    for w in 0..k {
        let (i, j) = (order[w], order[(w + 1) % k]);
        let gap = (angles[j] - angles[i]).rem_euclid(TAU);
        let needed = (spec.leaf_width / leaves[i].length).atan() + (spec.leaf_width / leaves[j].length).atan();
        if gap < needed {
            return Err(EvalError::OverlappingLeaves(i, j, gap.to_degrees(), needed.to_degrees()));
        }
    }
    Ok(leaves)
}

fn paint(mask: &mut BinaryMask, stem: Point, leaves: &[LeafGeom], disc_radius: f64) {
    let reach = leaves.iter().map(|l| l.length).fold(disc_radius, f64::max);
    let (h, w) = mask.dims();
    let r0 = (stem.row - reach).floor().max(0.0) as usize;
    let c0 = (stem.col - reach).floor().max(0.0) as usize;
    let r1 = ((stem.row + reach).ceil() as usize).min(h.saturating_sub(1));
    let c1 = ((stem.col + reach).ceil() as usize).min(w.saturating_sub(1));
    for r in r0..=r1 {
        for c in c0..=c1 {
            let d = Point::new(r as f64, c as f64) - stem;
            if d.norm() <= disc_radius || leaves.iter().any(|l| l.contains(d)) {
                mask.set(r, c, true);
            }
        }
    }
}

fn fits(stem: Point, reach: f64, (h, w): (usize, usize)) -> bool {
    stem.row - reach >= 0.0 && stem.col - reach >= 0.0 && stem.row + reach <= (h as f64 - 1.0) && stem.col + reach <= (w as f64 - 1.0)
}

fn draw_plant(mask: &mut BinaryMask, spec: &SynthPlantSpec, rng: &mut ChaCha8Rng) -> Result<(), EvalError> {
    spec.validate()?;
    if !fits(spec.stem, spec.reach(), mask.dims()) {
        return Err(EvalError::InvalidSpec(format!(
            "plant at ({:.1}, {:.1}) with reach {:.1} does not fit a {}x{} canvas",
            spec.stem.row,
            spec.stem.col,
            spec.reach(),
            mask.height(),
            mask.width()
        )));
    }
    let leaves = sample_leaves(spec, rng)?;
    paint(mask, spec.stem, &leaves, STEM_DISC_RADIUS);
    Ok(())
}

/// Rasterizes one plant, plus a small disc at the stem, on a blank
/// `(height, width)` canvas. Pixel `(r, c)` is set when its center is covered.
/// The returned ground truth is `spec.stem`, with an empty image id.
pub fn generate_plant(
    spec: &SynthPlantSpec,
    dims: (usize, usize),
    seed: u64,
) -> Result<(BinaryMask, GroundTruthStem), EvalError> {
    let mut mask = BinaryMask::new(dims.1, dims.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_plant(&mut mask, spec, &mut rng)?;
    Ok((
        mask,
        GroundTruthStem {
            image_id: String::new(),
            position: spec.stem,
        },
    ))
}

/// Distribution of plants in a generated field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub min_leaves: usize,
    pub max_leaves: usize,
    /// Uniform range of the base leaf length, pixels.
    pub leaf_length: (f64, f64),
    /// Leaf width as a fraction of the base leaf length.
    pub width_ratio: f64,
    pub angle_jitter_deg: f64,
    pub length_jitter: f64,
    /// Probability that one leaf of a plant is stretched by `asymmetry_factor`.
    pub asymmetric_fraction: f64,
    pub asymmetry_factor: f64,
    /// Minimum distance between the bounding discs of two plants, pixels.
    pub min_gap: f64,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self {
            min_leaves: 3,
            max_leaves: 6,
            leaf_length: (35.0, 50.0),
            width_ratio: 0.35,
            angle_jitter_deg: 4.0,
            length_jitter: 0.1,
            asymmetric_fraction: 0.3,
            asymmetry_factor: 2.0,
            min_gap: 14.0,
        }
    }
}

impl FieldSpec {
    fn sample(&self, rng: &mut ChaCha8Rng) -> SynthPlantSpec {
        let k = rng.gen_range(self.min_leaves..=self.max_leaves);
        let (lo, hi) = self.leaf_length;
        let length = if hi > lo { rng.gen_range(lo..hi) } else { lo };
        let asymmetry = if rng.gen_bool(self.asymmetric_fraction.clamp(0.0, 1.0)) {
            let long = rng.gen_range(0..k);
            (0..k).map(|i| if i == long { self.asymmetry_factor } else { 1.0 }).collect()
        } else {
            Vec::new()
        };
        SynthPlantSpec {
            stem: Point::default(),
            leaf_count: k,
            leaf_length: length,
            leaf_width: length * self.width_ratio,
            angle_jitter_deg: self.angle_jitter_deg,
            length_jitter: self.length_jitter,
            asymmetry,
            orientation_deg: None,
        }
    }
}

/// A generated multi-plant mask with its ground truth in placement order.
#[derive(Debug, Clone)]
pub struct SynthField {
    pub mask: BinaryMask,
    pub plants: Vec<SynthPlantSpec>,
}

impl SynthField {
    pub fn stems(&self) -> Vec<Point> {
        self.plants.iter().map(|p| p.stem).collect()
    }

    pub fn ground_truth(&self, image_id: &str) -> Vec<GroundTruthStem> {
        self.plants
            .iter()
            .map(|p| GroundTruthStem {
                image_id: image_id.to_string(),
                position: p.stem,
            })
            .collect()
    }
}

/// Attempts per plant before giving up.
const MAX_ATTEMPTS: usize = 1000;

/// Places `n_plants` plants drawn from `spec` on a `(height, width)` canvas so
/// that their bounding discs stay at least `spec.min_gap` apart.
pub fn generate_field(n_plants: usize, dims: (usize, usize), spec: &FieldSpec, seed: u64) -> Result<SynthField, EvalError> {
    if spec.min_leaves < 2 || spec.max_leaves < spec.min_leaves {
        return Err(EvalError::InvalidSpec(format!(
            "leaf count range {}..={} is empty or below 2",
            spec.min_leaves, spec.max_leaves
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = BinaryMask::new(dims.1, dims.0);
    let mut plants: Vec<SynthPlantSpec> = Vec::with_capacity(n_plants);
    let mut discs: Vec<(Point, f64)> = Vec::with_capacity(n_plants);

    for placed in 0..n_plants {
        let mut done = false;
        for _ in 0..MAX_ATTEMPTS {
            let mut plant = spec.sample(&mut rng);
            let reach = plant.reach() + 1.0;
            let (h, w) = (dims.0 as f64 - 1.0, dims.1 as f64 - 1.0);
            if 2.0 * reach > h || 2.0 * reach > w {
                continue;
            }
            plant.stem = Point::new(rng.gen_range(reach..=h - reach), rng.gen_range(reach..=w - reach));
            if discs.iter().any(|&(c, r)| c.distance(plant.stem) < r + reach + spec.min_gap) {
                continue;
            }
            match draw_plant(&mut mask, &plant, &mut rng) {
                Ok(()) => {
                    discs.push((plant.stem, reach));
                    plants.push(plant);
                    done = true;
                    break;
                }
                Err(EvalError::OverlappingLeaves(..)) => continue,
                Err(e) => return Err(e),
            }
        }
        if !done {
            return Err(EvalError::PlacementFailed {
                placed,
                requested: n_plants,
            });
        }
    }
    Ok(SynthField { mask, plants })
}
