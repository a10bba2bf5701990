use serde::{Deserialize, Serialize};

use crate::raster::{BinaryMask, Pixel};

/// Inclusive pixel extents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_row: usize,
    pub min_col: usize,
    pub max_row: usize,
    pub max_col: usize,
}

impl BoundingBox {
    pub fn height(&self) -> usize {
        self.max_row - self.min_row + 1
    }

    pub fn width(&self) -> usize {
        self.max_col - self.min_col + 1
    }
}

/// One 8-connected set of foreground pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub label: usize,
    /// Raster order; the first pixel is the top-left-most one.
    pub pixels: Vec<Pixel>,
    pub bbox: BoundingBox,
}

impl Component {
    pub fn area(&self) -> usize {
        self.pixels.len()
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) -> u32 {
    let (ra, rb) = (find(parent, a), find(parent, b));
    let (lo, hi) = (ra.min(rb), ra.max(rb));
    parent[hi as usize] = lo;
    lo
}

/// Two-pass 8-connected labeling with union-find.
///
/// Components smaller than `min_area` are dropped. The rest are ordered by
/// the top-left corner of their bounding box (then by first pixel) and
/// labeled `0..n` in that order.
pub fn connected_components(mask: &BinaryMask, min_area: usize) -> Vec<Component> {
    let (height, width) = mask.dims();
    let mut labels = vec![u32::MAX; height * width];
    let mut parent: Vec<u32> = Vec::new();

    for row in 0..height {
        for col in 0..width {
            if !mask.get(row, col) {
                continue;
            }
            let mut current = u32::MAX;
            // previously visited neighbors: W, NW, N, NE
            let neighbors = [
                (col > 0).then(|| (row, col - 1)),
                (row > 0 && col > 0).then(|| (row - 1, col - 1)),
                (row > 0).then(|| (row - 1, col)),
                (row > 0 && col + 1 < width).then(|| (row - 1, col + 1)),
            ];
            for (r, c) in neighbors.into_iter().flatten() {
                let l = labels[r * width + c];
                if l == u32::MAX {
                    continue;
                }
                current = if current == u32::MAX { find(&mut parent, l) } else { union(&mut parent, current, l) };
            }
            if current == u32::MAX {
                current = parent.len() as u32;
                parent.push(current);
            }
            labels[row * width + col] = current;
        }
    }

    let mut slot_of_root = vec![usize::MAX; parent.len()];
    let mut groups: Vec<Vec<Pixel>> = Vec::new();
    for row in 0..height {
        for col in 0..width {
            let l = labels[row * width + col];
            if l == u32::MAX {
                continue;
            }
            let root = find(&mut parent, l) as usize;
            if slot_of_root[root] == usize::MAX {
                slot_of_root[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot_of_root[root]].push(Pixel::new(row, col));
        }
    }

    let mut components: Vec<Component> = groups
        .into_iter()
        .filter(|g| g.len() >= min_area.max(1))
        .map(|pixels| {
            let mut bbox = BoundingBox {
                min_row: pixels[0].row,
                min_col: usize::MAX,
                max_row: 0,
                max_col: 0,
            };
            for p in &pixels {
                bbox.min_col = bbox.min_col.min(p.col);
                bbox.max_col = bbox.max_col.max(p.col);
                bbox.max_row = bbox.max_row.max(p.row);
            }
            Component { label: 0, pixels, bbox }
        })
        .collect();
    components.sort_by_key(|c| (c.bbox.min_row, c.bbox.min_col, c.pixels[0]));
    for (i, c) in components.iter_mut().enumerate() {
        c.label = i;
    }
    components
}
