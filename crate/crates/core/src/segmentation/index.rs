use super::{SegmentationError, VegetationIndex};
use crate::raster::{Channels, GrayMap, Image};

/// Value range of excess green on 8-bit samples.
pub const EXG_DOMAIN: (f32, f32) = (-510.0, 510.0);
pub const NDVI_DOMAIN: (f32, f32) = (-1.0, 1.0);

/// Excess green, `2G - R - B`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExcessGreen;

/// Normalized difference vegetation index, `(NIR - R) / (NIR + R)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ndvi;

impl VegetationIndex for ExcessGreen {
    fn name(&self) -> &'static str {
        "exg"
    }

    fn compute(&self, image: &Image) -> Result<GrayMap, SegmentationError> {
        exg(image)
    }
}

impl VegetationIndex for Ndvi {
    fn name(&self) -> &'static str {
        "ndvi"
    }

    fn compute(&self, image: &Image) -> Result<GrayMap, SegmentationError> {
        ndvi(image)
    }
}

pub fn exg(image: &Image) -> Result<GrayMap, SegmentationError> {
    if !image.channels().has_color() {
        return Err(SegmentationError::MissingChannels {
            index: "exg",
            needed: "R, G, B",
            actual: image.channels(),
        });
    }
    let values = image
        .pixels()
        .map(|p| (2 * i32::from(p[1]) - i32::from(p[0]) - i32::from(p[2])) as f32)
        .collect();
    Ok(GrayMap::new(image.width(), image.height(), values, EXG_DOMAIN).expect("sizes match"))
}

/// A pixel with `NIR + R = 0` carries no signal and maps to 0.
pub fn ndvi(image: &Image) -> Result<GrayMap, SegmentationError> {
    if image.channels() != Channels::Rgbn {
        return Err(SegmentationError::MissingChannels {
            index: "ndvi",
            needed: "R, NIR",
            actual: image.channels(),
        });
    }
    let values = image
        .pixels()
        .map(|p| {
            let (red, nir) = (f32::from(p[0]), f32::from(p[3]));
            let sum = nir + red;
            if sum == 0.0 {
                0.0
            } else {
                (nir - red) / sum
            }
        })
        .collect();
    Ok(GrayMap::new(image.width(), image.height(), values, NDVI_DOMAIN).expect("sizes match"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rgb(r: u8, g: u8, b: u8) -> Image {
        Image::new(1, 1, Channels::Rgb, vec![r, g, b]).unwrap()
    }

    fn rgbn(r: u8, nir: u8) -> Image {
        Image::new(1, 1, Channels::Rgbn, vec![r, 0, 0, nir]).unwrap()
    }

    #[test]
    fn exg_substitution() {
        assert_eq!(exg(&rgb(50, 100, 30)).unwrap().get(0, 0), 120.0);
        assert_eq!(exg(&rgb(255, 0, 255)).unwrap().get(0, 0), -510.0);
        assert_eq!(exg(&rgb(0, 255, 0)).unwrap().get(0, 0), 510.0);
    }

    #[test]
    fn exg_rejects_gray() {
        let img = Image::new(1, 1, Channels::Gray, vec![9]).unwrap();
        assert!(matches!(exg(&img), Err(SegmentationError::MissingChannels { .. })));
    }

    #[test]
    fn ndvi_cases() {
        assert_eq!(ndvi(&rgbn(200, 200)).unwrap().get(0, 0), 0.0);
        assert_eq!(ndvi(&rgbn(0, 200)).unwrap().get(0, 0), 1.0);
        assert_eq!(ndvi(&rgbn(0, 0)).unwrap().get(0, 0), 0.0);
        assert_eq!(ndvi(&rgbn(200, 0)).unwrap().get(0, 0), -1.0);
    }

    #[test]
    fn ndvi_requires_nir() {
        assert!(ndvi(&rgb(1, 2, 3)).is_err());
    }

    proptest! {
        #[test]
        fn gray_pixels_cancel(v in any::<u8>()) {
            prop_assert_eq!(exg(&rgb(v, v, v)).unwrap().get(0, 0), 0.0);
        }

        #[test]
        fn ndvi_stays_in_range(r in any::<u8>(), n in any::<u8>()) {
            let v = ndvi(&rgbn(r, n)).unwrap().get(0, 0);
            prop_assert!((-1.0..=1.0).contains(&v));
        }

        #[test]
        fn indices_are_pointwise(samples in prop::collection::vec(any::<[u8; 4]>(), 2..40), rot in 0usize..40) {
            let n = samples.len();
            let rot = rot % n;
            let img = Image::new(n, 1, Channels::Rgbn, samples.iter().flatten().copied().collect()).unwrap();
            let mut shifted = samples.clone();
            shifted.rotate_left(rot);
            let img2 = Image::new(n, 1, Channels::Rgbn, shifted.iter().flatten().copied().collect()).unwrap();
            for index in [&ExcessGreen as &dyn VegetationIndex, &Ndvi] {
                let mut a = index.compute(&img).unwrap().values().to_vec();
                a.rotate_left(rot);
                prop_assert_eq!(a, index.compute(&img2).unwrap().values().to_vec());
            }
        }
    }
}
