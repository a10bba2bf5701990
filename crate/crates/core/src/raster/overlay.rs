use std::path::Path;

use image::{Rgb, RgbImage};

use super::{io::write_buffer, Image, RasterError};
use crate::detection::{PlantObject, StemDetection};

const CONTOUR: Rgb<u8> = Rgb([0, 255, 0]);
const HULL: Rgb<u8> = Rgb([255, 0, 0]);
const CUTOFF: Rgb<u8> = Rgb([0, 128, 255]);
const STEM: Rgb<u8> = Rgb([255, 0, 255]);

/// Renders contours, hulls, accepted defects and stem markers over `image`
/// and writes an RGB PNG (or PPM, by extension).
pub fn save_annotated(
    image: &Image,
    objects: &[PlantObject],
    stems: &[StemDetection],
    path: impl AsRef<Path>,
) -> Result<(), RasterError> {
    let canvas = annotate(image, objects, stems);
    write_buffer(
        path.as_ref(),
        canvas.as_raw(),
        image.width(),
        image.height(),
        image::ExtendedColorType::Rgb8,
    )
}

pub(crate) fn annotate(image: &Image, objects: &[PlantObject], stems: &[StemDetection]) -> RgbImage {
    let mut canvas = RgbImage::from_fn(image.width() as u32, image.height() as u32, |x, y| {
        let p = image.pixel(y as usize, x as usize);
        if image.channels().has_color() {
            Rgb([p[0], p[1], p[2]])
        } else {
            Rgb([p[0]; 3])
        }
    });

    for object in objects {
        let points = object.contour.points();
        for p in points {
            put(&mut canvas, p.row as i64, p.col as i64, CONTOUR);
        }
        let hull = &object.hull;
        for (i, &a) in hull.iter().enumerate() {
            let b = hull[(i + 1) % hull.len()];
            draw_line(&mut canvas, points[a].row as i64, points[a].col as i64, points[b].row as i64, points[b].col as i64, HULL);
        }
        for defect in &object.defects {
            let p = points[defect.farthest];
            for dr in -1..=1 {
                for dc in -1..=1 {
                    put(&mut canvas, p.row as i64 + dr, p.col as i64 + dc, CUTOFF);
                }
            }
        }
    }

    let (h, w) = (image.height() as i64, image.width() as i64);
    for stem in stems {
        let r = (stem.position.row.round() as i64).clamp(0, h - 1);
        let c = (stem.position.col.round() as i64).clamp(0, w - 1);
        for d in -4..=4 {
            put(&mut canvas, r + d, c, STEM);
            put(&mut canvas, r, c + d, STEM);
        }
    }
    canvas
}

fn put(canvas: &mut RgbImage, row: i64, col: i64, color: Rgb<u8>) {
    if row >= 0 && col >= 0 && (row as u32) < canvas.height() && (col as u32) < canvas.width() {
        canvas.put_pixel(col as u32, row as u32, color);
    }
}

// Bresenham
fn draw_line(canvas: &mut RgbImage, r0: i64, c0: i64, r1: i64, c1: i64, color: Rgb<u8>) {
    let (dr, dc) = ((r1 - r0).abs(), -(c1 - c0).abs());
    let (sr, sc) = (if r0 < r1 { 1 } else { -1 }, if c0 < c1 { 1 } else { -1 });
    let (mut r, mut c, mut err) = (r0, c0, dr + dc);
    loop {
        put(canvas, r, c, color);
        if r == r1 && c == c1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dc {
            err += dc;
            r += sr;
        }
        if e2 <= dr {
            err += dr;
            c += sc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bingeo::{self, Component};
    use crate::detection::{DetectorConfig, PlantObject, StemDetection, StemMethod};
    use crate::raster::{BinaryMask, Channels, Point};

    fn gray_image() -> Image {
        Image::from_fn(20, 20, Channels::Rgb, |r, c| vec![r as u8 * 3, c as u8 * 5, 40]).unwrap()
    }

    fn square_object() -> PlantObject {
        let mask = BinaryMask::from_fn(20, 20, |r, c| (5..10).contains(&r) && (5..10).contains(&c));
        let comps: Vec<Component> = bingeo::connected_components(&mask, 1);
        PlantObject::build(comps[0].clone(), &DetectorConfig::default())
    }

    #[test]
    fn no_objects_leaves_pixels_untouched() {
        let image = gray_image();
        let canvas = annotate(&image, &[], &[]);
        for (p, q) in canvas.pixels().zip(image.pixels()) {
            assert_eq!(&p.0[..], q);
        }
    }

    #[test]
    fn contour_and_stem_are_drawn() {
        let image = gray_image();
        let object = square_object();
        let stem = StemDetection {
            position: Point::new(7.0, 7.0),
            method: StemMethod::CentroidFallback,
            num_leaves: 0,
            object_ref: 0,
        };
        let canvas = annotate(&image, std::slice::from_ref(&object), &[stem]);
        // corner pixel: contour first, hull line drawn over it
        assert_eq!(*canvas.get_pixel(5, 9), HULL);
        assert_eq!(*canvas.get_pixel(7, 7), STEM);
    }

    #[test]
    fn stem_outside_bounds_is_clamped_to_border() {
        let image = gray_image();
        let stem = StemDetection {
            position: Point::new(-30.0, 55.0),
            method: StemMethod::CentroidFallback,
            num_leaves: 0,
            object_ref: 0,
        };
        let canvas = annotate(&image, &[], &[stem]);
        assert_eq!(*canvas.get_pixel(19, 0), STEM);
    }

    #[test]
    fn writes_png() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.png");
        save_annotated(&gray_image(), &[square_object()], &[], &path).unwrap();
        let back = crate::raster::load_image(&path, &Default::default()).unwrap();
        assert_eq!(back.channels(), Channels::Rgb);
    }
}
