use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat, ImageReader};

use super::{BinaryMask, Channels, Image, RasterError};

/// Decoder switches that cannot be inferred from the file itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Interpret the alpha channel of a 4-channel PNG as near-infrared.
    pub nir_in_alpha: bool,
}

/// Reads an 8-bit PNG or binary PPM/PGM.
///
/// Gray (with or without alpha) loads as [`Channels::Gray`]. RGBA loads as
/// [`Channels::Rgbn`] when `nir_in_alpha` is set, otherwise the alpha channel
/// is dropped.
pub fn load_image(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Image, RasterError> {
    let reader = ImageReader::open(path.as_ref())?
        .with_guessed_format()
        .map_err(RasterError::Io)?;
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::IoError(io) => RasterError::Io(io),
        other => RasterError::Decode(other.to_string()),
    })?;
    from_dynamic(decoded, options)
}

fn from_dynamic(decoded: DynamicImage, options: &LoadOptions) -> Result<Image, RasterError> {
    let (width, height) = (decoded.width() as usize, decoded.height() as usize);
    if width == 0 || height == 0 {
        return Err(RasterError::ZeroDimension { width, height });
    }
    match decoded {
        DynamicImage::ImageLuma8(buf) => Image::new(width, height, Channels::Gray, buf.into_raw()),
        DynamicImage::ImageLumaA8(buf) => {
            let data = buf.into_raw().chunks_exact(2).map(|p| p[0]).collect();
            Image::new(width, height, Channels::Gray, data)
        }
        DynamicImage::ImageRgb8(buf) => Image::new(width, height, Channels::Rgb, buf.into_raw()),
        DynamicImage::ImageRgba8(buf) if options.nir_in_alpha => {
            Image::new(width, height, Channels::Rgbn, buf.into_raw())
        }
        DynamicImage::ImageRgba8(buf) => {
            let data = buf
                .into_raw()
                .chunks_exact(4)
                .flat_map(|p| [p[0], p[1], p[2]])
                .collect();
            Image::new(width, height, Channels::Rgb, data)
        }
        other => Err(RasterError::UnsupportedBitDepth(format!(
            "{:?}; only 8-bit samples are accepted",
            other.color()
        ))),
    }
}

/// Loads a grayscale mask image and binarizes it at 128.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask, RasterError> {
    let image = load_image(path, &LoadOptions::default())?;
    Ok(BinaryMask::from_gray_image(&image, 128))
}

/// Encodes an 8-bit buffer as PNG, or as binary PGM/PPM for the netpbm
/// extensions (`.pgm`, `.ppm`, `.pnm`).
pub(crate) fn write_buffer(
    path: &Path,
    data: &[u8],
    width: usize,
    height: usize,
    color: ExtendedColorType,
) -> Result<(), RasterError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    let result = match ext.as_str() {
        "png" => image::save_buffer_with_format(path, data, width as u32, height as u32, color, ImageFormat::Png),
        "pgm" | "ppm" | "pnm" => {
            let subtype = match color {
                ExtendedColorType::L8 => PnmSubtype::Graymap(SampleEncoding::Binary),
                _ => PnmSubtype::Pixmap(SampleEncoding::Binary),
            };
            let file = BufWriter::new(File::create(path)?);
            PnmEncoder::new(file)
                .with_subtype(subtype)
                .write_image(data, width as u32, height as u32, color)
        }
        _ => return Err(RasterError::UnsupportedFormat(path.display().to_string())),
    };
    result.map_err(|e| match e {
        image::ImageError::IoError(io) => RasterError::Io(io),
        other => RasterError::Encode(other.to_string()),
    })
}

/// Writes the mask as an 8-bit grayscale PNG or binary PGM (by extension),
/// set pixels as 255 and clear pixels as 0.
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let data: Vec<u8> = mask.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
    write_buffer(path.as_ref(), &data, mask.width(), mask.height(), ExtendedColorType::L8)
}
