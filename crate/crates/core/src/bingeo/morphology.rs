use super::GeometryError;
use crate::raster::BinaryMask;

/// Elliptic (for square kernels: circular) boolean stencil of odd size `m`.
///
/// Cell `(r, c)` is set iff `((r-h)/h)^2 + ((c-h)/h)^2 <= 1` with
/// `h = (m-1)/2`; for `m = 1` only the center is set. Every row of the stencil
/// is a centered run, stored as its half-width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    size: usize,
    half_widths: Vec<usize>,
}

impl StructuringElement {
    pub fn ellipse(m: i64) -> Result<Self, GeometryError> {
        if m < 1 || m % 2 == 0 {
            return Err(GeometryError::InvalidKernelSize(m));
        }
        let size = m as usize;
        let h = (size - 1) / 2;
        let half_widths = (0..size)
            .map(|r| {
                let dy = r.abs_diff(h);
                // largest dx with dx^2 + dy^2 <= h^2
                (0..=h).rev().find(|dx| dx * dx + dy * dy <= h * h).unwrap_or(0)
            })
            .collect();
        Ok(Self { size, half_widths })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        (self.size - 1) / 2
    }

    /// Whether stencil cell `(row, col)` (both in `0..size`) is set.
    pub fn contains(&self, row: usize, col: usize) -> bool {
        let h = self.radius();
        row < self.size && col < self.size && col.abs_diff(h) <= self.half_widths[row]
    }

    /// Half-width of the run at vertical offset `dy` from the center.
    fn half_width(&self, dy: isize) -> usize {
        self.half_widths[(dy + self.radius() as isize) as usize]
    }
}

/// Morphological closing (dilation, then erosion with the same kernel).
///
/// Pixels outside the image are background. The closing is evaluated on the
/// unbounded plane and then cropped, so the dilation may spill past the border
/// before the erosion pulls it back; the result is extensive, increasing and
/// idempotent.
pub fn close(mask: &BinaryMask, kernel: &StructuringElement) -> BinaryMask {
    let (height, width) = mask.dims();
    if height == 0 || width == 0 {
        return mask.clone();
    }
    let h = kernel.radius();
    let (ph, pw) = (height + 2 * h, width + 2 * h);

    let mut padded = vec![false; ph * pw];
    for row in 0..height {
        let src = &mask.bits()[row * width..(row + 1) * width];
        padded[(row + h) * pw + h..(row + h) * pw + h + width].copy_from_slice(src);
    }

    // dilation over the whole padded frame: nothing beyond it can be reached
    let near_set = row_distances(&padded, pw, true);
    let mut dilated = vec![false; ph * pw];
    for row in 0..ph {
        for dy in -(h as isize)..=h as isize {
            let src = row as isize + dy;
            if src < 0 || src >= ph as isize {
                continue;
            }
            let w = kernel.half_width(dy) as u32;
            let dist = &near_set[src as usize * pw..(src as usize + 1) * pw];
            for (out, &d) in dilated[row * pw..(row + 1) * pw].iter_mut().zip(dist) {
                *out |= d <= w;
            }
        }
    }

    // erosion, evaluated only inside the image window
    let near_unset = row_distances(&dilated, pw, false);
    let mut bits = vec![true; height * width];
    for row in 0..height {
        let out = &mut bits[row * width..(row + 1) * width];
        for dy in -(h as isize)..=h as isize {
            let src = (row + h) as isize + dy;
            let w = kernel.half_width(dy) as u32;
            let dist = &near_unset[src as usize * pw + h..src as usize * pw + h + width];
            for (o, &d) in out.iter_mut().zip(dist) {
                *o &= d > w;
            }
        }
    }
    BinaryMask::from_bits(width, height, bits).expect("dimensions preserved")
}

/// For every cell, the horizontal distance to the nearest cell equal to
/// `target` in the same row (`u32::MAX` if none).
fn row_distances(cells: &[bool], width: usize, target: bool) -> Vec<u32> {
    let mut out = vec![u32::MAX; cells.len()];
    for (row, dist) in cells.chunks_exact(width).zip(out.chunks_exact_mut(width)) {
        let mut last: Option<usize> = None;
        for (c, &v) in row.iter().enumerate() {
            if v == target {
                last = Some(c);
            }
            if let Some(l) = last {
                dist[c] = (c - l) as u32;
            }
        }
        last = None;
        for c in (0..width).rev() {
            if row[c] == target {
                last = Some(c);
            }
            if let Some(l) = last {
                dist[c] = dist[c].min((l - c) as u32);
            }
        }
    }
    out
}
