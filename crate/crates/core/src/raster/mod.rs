//! Raster containers shared by every stage: multi-channel images, signed index
//! maps and binary masks, plus file I/O.

mod io;
mod overlay;

use std::ops::{Add, Div, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{load_image, load_mask, save_mask, LoadOptions};
pub use overlay::save_annotated;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot decode image: {0}")]
    Decode(String),
    #[error("cannot encode image: {0}")]
    Encode(String),
    #[error("unsupported bit depth: {0}")]
    UnsupportedBitDepth(String),
    #[error("unsupported file format: {0}")]
    UnsupportedFormat(String),
    #[error("image has a zero dimension ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("sample buffer has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
}

/// Integer pixel address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pixel {
    pub row: usize,
    pub col: usize,
}

impl Pixel {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn to_point(self) -> Point {
        Point::new(self.row as f64, self.col as f64)
    }
}

/// Sub-pixel position in image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub row: f64,
    pub col: f64,
}

impl Point {
    pub const fn new(row: f64, col: f64) -> Self {
        Self { row, col }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.row - other.row).hypot(self.col - other.col)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.row + other.row), 0.5 * (self.col + other.col))
    }

    pub fn dot(self, other: Point) -> f64 {
        self.row * other.row + self.col * other.col
    }

    /// `self.row * other.col - self.col * other.row`; positive for a
    /// counter-clockwise turn as seen on screen.
    pub fn cross(self, other: Point) -> f64 {
        self.row * other.col - self.col * other.row
    }

    pub fn norm(self) -> f64 {
        self.row.hypot(self.col)
    }

    pub fn is_finite(self) -> bool {
        self.row.is_finite() && self.col.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.row + rhs.row, self.col + rhs.col)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.row - rhs.row, self.col - rhs.col)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.row * rhs, self.col * rhs)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, rhs: f64) -> Point {
        Point::new(self.row / rhs, self.col / rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channels {
    Gray,
    Rgb,
    /// Red, green, blue and near-infrared.
    Rgbn,
}

impl Channels {
    pub const fn count(self) -> usize {
        match self {
            Channels::Gray => 1,
            Channels::Rgb => 3,
            Channels::Rgbn => 4,
        }
    }

    pub const fn has_color(self) -> bool {
        !matches!(self, Channels::Gray)
    }
}

/// Row-major interleaved 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: Channels,
    data: Vec<u8>,
}

impl Image {
    pub fn new(
        width: usize,
        height: usize,
        channels: Channels,
        data: Vec<u8>,
    ) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroDimension { width, height });
        }
        let expected = width * height * channels.count();
        if data.len() != expected {
            return Err(RasterError::LengthMismatch {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Builds an image by evaluating `f(row, col)`, which must return exactly
    /// `channels.count()` samples.
    pub fn from_fn<F>(
        width: usize,
        height: usize,
        channels: Channels,
        mut f: F,
    ) -> Result<Self, RasterError>
    where
        F: FnMut(usize, usize) -> Vec<u8>,
    {
        let mut data = Vec::with_capacity(width * height * channels.count());
        for row in 0..height {
            for col in 0..width {
                data.extend(f(row, col));
            }
        }
        Self::new(width, height, channels, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> Channels {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// Samples of the pixel at `(row, col)`. Panics when out of bounds.
    pub fn pixel(&self, row: usize, col: usize) -> &[u8] {
        assert!(row < self.height && col < self.width, "pixel out of bounds");
        let n = self.channels.count();
        let start = (row * self.width + col) * n;
        &self.data[start..start + n]
    }

    pub fn pixels(&self) -> std::slice::ChunksExact<'_, u8> {
        self.data.chunks_exact(self.channels.count())
    }
}

/// Signed per-pixel index values together with the theoretical value domain
/// of the index that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayMap {
    width: usize,
    height: usize,
    values: Vec<f32>,
    domain: (f32, f32),
}

impl GrayMap {
    pub fn new(
        width: usize,
        height: usize,
        values: Vec<f32>,
        domain: (f32, f32),
    ) -> Result<Self, RasterError> {
        if values.len() != width * height {
            return Err(RasterError::LengthMismatch {
                expected: width * height,
                actual: values.len(),
            });
        }
        assert!(domain.0 < domain.1, "empty value domain");
        Ok(Self {
            width,
            height,
            values,
            domain,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn domain(&self) -> (f32, f32) {
        self.domain
    }

    pub fn get(&self, row: usize, col: usize) -> f32 {
        self.values[row * self.width + col]
    }

    /// Affine map of the domain onto bins `0..=255`, rounding to nearest.
    pub fn bin_of(&self, value: f32) -> u8 {
        let (lo, hi) = self.domain;
        let t = (f64::from(value) - f64::from(lo)) * 255.0 / (f64::from(hi) - f64::from(lo));
        t.round().clamp(0.0, 255.0) as u8
    }

    pub fn bins(&self) -> impl Iterator<Item = u8> + '_ {
        self.values.iter().map(|&v| self.bin_of(v))
    }
}

/// Per-pixel vegetation flag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, RasterError> {
        if bits.len() != width * height {
            return Err(RasterError::LengthMismatch {
                expected: width * height,
                actual: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> bool>(width: usize, height: usize, mut f: F) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                bits.push(f(row, col));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    /// Like [`get`](Self::get) but anything outside the raster is background.
    pub fn get_signed(&self, row: isize, col: isize) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.bits[row as usize * self.width + col as usize]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// True iff every set pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn ones(&self) -> impl Iterator<Item = Pixel> + '_ {
        let width = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| Pixel::new(i / width, i % width))
    }

    /// Binarizes a single-channel image: a pixel is set iff its sample is at
    /// least `threshold`. Color images are reduced to their first channel.
    pub fn from_gray_image(image: &Image, threshold: u8) -> Self {
        let bits = image.pixels().map(|p| p[0] >= threshold).collect();
        Self {
            width: image.width(),
            height: image.height(),
            bits,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_rejects_wrong_length() {
        let err = Image::new(2, 2, Channels::Rgb, vec![0; 11]).unwrap_err();
        assert!(matches!(
            err,
            RasterError::LengthMismatch {
                expected: 12,
                actual: 11
            }
        ));
    }

    #[test]
    fn image_rejects_zero_dimension() {
        assert!(matches!(
            Image::new(0, 3, Channels::Gray, vec![]),
            Err(RasterError::ZeroDimension { .. })
        ));
    }

    #[test]
    fn pixel_addressing_is_row_major() {
        let img = Image::from_fn(3, 2, Channels::Rgb, |r, c| vec![r as u8, c as u8, 9]).unwrap();
        assert_eq!(img.pixel(1, 2), &[1, 2, 9]);
        assert_eq!(img.pixel(0, 1), &[0, 1, 9]);
    }

    #[test]
    fn exg_domain_endpoints_quantize_to_extreme_bins() {
        let map = GrayMap::new(2, 1, vec![-510.0, 510.0], (-510.0, 510.0)).unwrap();
        assert_eq!(map.bins().collect::<Vec<_>>(), vec![0, 255]);
    }

    #[test]
    fn mask_signed_access_treats_outside_as_background() {
        let mask = BinaryMask::from_fn(2, 2, |_, _| true);
        assert!(mask.get_signed(1, 1));
        assert!(!mask.get_signed(-1, 0));
        assert!(!mask.get_signed(0, 2));
    }
}
