use crate::raster::Pixel;

use super::Component;

/// Closed outer boundary walk, counter-clockwise on screen.
///
/// Consecutive points (and the last/first pair) are 8-adjacent. Where the
/// boundary passes through a one-pixel-thin part it is walked out and back, so
/// such pixels appear once per passage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    points: Vec<Pixel>,
}

impl Contour {
    pub fn new(points: Vec<Pixel>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[Pixel] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Twice the signed shoelace area; positive for counter-clockwise walks.
    pub fn doubled_signed_area(&self) -> i64 {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.points[i], self.points[(i + 1) % n]);
                a.row as i64 * b.col as i64 - a.col as i64 * b.row as i64
            })
            .sum()
    }
}

/// Moore neighborhood in counter-clockwise (on screen) order, starting west.
const DIRS: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

fn dir_index(dr: isize, dc: isize) -> usize {
    DIRS.iter().position(|&d| d == (dr, dc)).expect("unit offset")
}

/// Component pixels rasterized into their bounding box with a one-pixel
/// background frame.
struct LocalGrid {
    origin: (usize, usize),
    width: usize,
    cells: Vec<bool>,
}

impl LocalGrid {
    fn new(component: &Component) -> Self {
        let b = component.bbox;
        let (height, width) = (b.height() + 2, b.width() + 2);
        let mut cells = vec![false; height * width];
        for p in &component.pixels {
            cells[(p.row - b.min_row + 1) * width + (p.col - b.min_col + 1)] = true;
        }
        Self {
            origin: (b.min_row, b.min_col),
            width,
            cells,
        }
    }

    fn get(&self, r: isize, c: isize) -> bool {
        self.cells[r as usize * self.width + c as usize]
    }

    fn to_pixel(&self, (r, c): (isize, isize)) -> Pixel {
        Pixel::new(self.origin.0 + r as usize - 1, self.origin.1 + c as usize - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct State {
    at: (isize, isize),
    /// Direction (from `at`) of the background cell we arrived next to.
    backtrack: usize,
}

fn step(grid: &LocalGrid, s: State) -> Option<State> {
    for k in 1..=8 {
        let d = (s.backtrack + k) % 8;
        let next = (s.at.0 + DIRS[d].0, s.at.1 + DIRS[d].1);
        if grid.get(next.0, next.1) {
            let prev_dir = DIRS[(s.backtrack + k - 1) % 8];
            let prev = (s.at.0 + prev_dir.0, s.at.1 + prev_dir.1);
            return Some(State {
                at: next,
                backtrack: dir_index(prev.0 - next.0, prev.1 - next.1),
            });
        }
    }
    None
}

/// Moore-neighbor boundary following from the top-left-most pixel.
///
/// The walk stops when it is about to repeat its first move. Holes are
/// never entered. `mask_dims` is `(height, width)` of the source raster and
/// only used for a bounds sanity check.
pub fn trace_contour(component: &Component, mask_dims: (usize, usize)) -> Contour {
    assert!(!component.pixels.is_empty(), "cannot trace an empty component");
    debug_assert!(component.bbox.max_row < mask_dims.0 && component.bbox.max_col < mask_dims.1);

    let grid = LocalGrid::new(component);
    let start = component.pixels[0];
    let start_local = (
        (start.row - component.bbox.min_row + 1) as isize,
        (start.col - component.bbox.min_col + 1) as isize,
    );
    // the top-left-most pixel always has background to its west
    let initial = State {
        at: start_local,
        backtrack: 0,
    };
    let Some(first) = step(&grid, initial) else {
        return Contour::new(vec![start]);
    };

    let mut points = vec![start];
    let mut state = first;
    let limit = 8 * component.pixels.len() + 8;
    loop {
        points.push(grid.to_pixel(state.at));
        state = step(&grid, state).expect("connected pixel has a neighbor");
        if state == first || points.len() > limit {
            break;
        }
    }
    if points.len() > 1 && points.last() == Some(&start) {
        points.pop();
    }
    Contour::new(points)
}
