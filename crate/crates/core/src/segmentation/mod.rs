//! Vegetation segmentation: index maps, histogram quantization and automatic
//! thresholding into a [`BinaryMask`].

mod index;
mod threshold;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::raster::{BinaryMask, GrayMap, Image};

pub use index::{exg, ndvi, ExcessGreen, Ndvi, EXG_DOMAIN, NDVI_DOMAIN};
pub use threshold::{otsu_threshold, triangle_threshold, Fixed, Otsu, Triangle};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentationError {
    #[error("{index} needs {needed} channels but the image is {actual:?}")]
    MissingChannels {
        index: &'static str,
        needed: &'static str,
        actual: crate::raster::Channels,
    },
    #[error("no threshold exists: histogram has {nonzero} occupied bin(s)")]
    DegenerateHistogram { nonzero: usize },
}

/// A per-pixel vegetation index where vegetation scores high.
pub trait VegetationIndex: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, image: &Image) -> Result<GrayMap, SegmentationError>;
}

/// Picks a bin index separating background (`<= t`) from vegetation (`> t`).
pub trait Thresholder: fmt::Debug + Send + Sync {
    fn name(&self) -> String;
    fn threshold(&self, hist: &Histogram) -> Result<u8, SegmentationError>;
}

/// Pixel counts per quantized index value.
#[derive(Clone, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; 256],
}

impl fmt::Debug for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let occupied: Vec<(usize, u64)> = self
            .bins
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i, c))
            .collect();
        f.debug_struct("Histogram").field("occupied", &occupied).finish()
    }
}

impl Histogram {
    pub fn from_counts(bins: [u64; 256]) -> Self {
        Self { bins }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    pub fn nonzero_bins(&self) -> usize {
        self.bins.iter().filter(|&&c| c > 0).count()
    }
}

/// Histogram of the map's values after affine quantization of its domain onto
/// 256 bins.
pub fn quantize(map: &GrayMap) -> Histogram {
    let mut bins = [0u64; 256];
    for b in map.bins() {
        bins[b as usize] += 1;
    }
    Histogram { bins }
}

/// Vegetation iff the pixel's quantized bin is strictly above `threshold`.
pub fn binarize(map: &GrayMap, threshold: u8) -> BinaryMask {
    let bits = map.bins().map(|b| b > threshold).collect();
    BinaryMask::from_bits(map.width(), map.height(), bits).expect("map dimensions are consistent")
}

/// Where the vegetation mask of an image comes from.
#[derive(Debug, Clone)]
pub enum IndexChoice {
    Computed(Arc<dyn VegetationIndex>),
    /// A precomputed mask supplied next to the image, binarized at 128.
    External,
}

#[derive(Debug, Clone)]
pub struct SegmentationConfig {
    pub index: IndexChoice,
    pub thresholder: Arc<dyn Thresholder>,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self {
            index: IndexChoice::Computed(Arc::new(ExcessGreen)),
            thresholder: Arc::new(Otsu),
        }
    }
}

/// Index map, automatic threshold and binarization in one call. Only valid
/// for [`IndexChoice::Computed`]; external masks are loaded by the caller.
pub fn segment(
    image: &Image,
    index: &dyn VegetationIndex,
    thresholder: &dyn Thresholder,
) -> Result<BinaryMask, SegmentationError> {
    let map = index.compute(image)?;
    let t = thresholder.threshold(&quantize(&map))?;
    Ok(binarize(&map, t))
}
