//! Brute-force reference implementations and random input generators shared
//! by the integration tests.
#![allow(dead_code)]

use num::{BigInt, BigRational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stemgeo::bingeo::{connected_components, Contour};
use stemgeo::{BinaryMask, Histogram, Pixel};

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Maximizes `w0 * w1 * (mu0 - mu1)^2` over every split `t` (class 0 is
/// `<= t`) with both classes non-empty; first maximum wins.
pub fn otsu_oracle(hist: &Histogram) -> Option<u8> {
    let c = hist.counts();
    let total: u128 = c.iter().map(|&x| x as u128).sum();
    let mut best: Option<(u8, BigRational)> = None;
    for t in 0..=255usize {
        let n0: u128 = c[..=t].iter().map(|&x| x as u128).sum();
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let s0: u128 = (0..=t).map(|i| i as u128 * c[i] as u128).sum();
        let s1: u128 = (t + 1..256).map(|i| i as u128 * c[i] as u128).sum();
        let gap = ratio(s0, n0) - ratio(s1, n1);
        let score = ratio(n0, total) * ratio(n1, total) * &gap * &gap;
        if best.as_ref().map_or(true, |(_, b)| score > *b) {
            best = Some((t as u8, score));
        }
    }
    best.map(|(t, _)| t)
}

/// Peak = first maximum, tail = farther occupied end (upper on a tie); the
/// threshold is the first bin between them with the largest vertical gap
/// below the peak-tail line.
pub fn triangle_oracle(hist: &Histogram) -> Option<u8> {
    let c = hist.counts();
    if c.iter().filter(|&&x| x > 0).count() < 2 {
        return None;
    }
    let max = *c.iter().max().unwrap();
    let peak = (0..256).find(|&i| c[i] == max).unwrap();
    let first = (0..256).find(|&i| c[i] > 0).unwrap();
    let last = (0..256).rev().find(|&i| c[i] > 0).unwrap();
    let tail = if last - peak >= peak - first { last } else { first };

    let (x0, y0) = (BigInt::from(peak), BigInt::from(c[peak]));
    let (x1, y1) = (BigInt::from(tail), BigInt::from(c[tail]));
    let line_at = |i: usize| -> BigRational {
        if x1 == x0 {
            return BigRational::from(y0.clone());
        }
        BigRational::from(y0.clone()) + BigRational::new((&y1 - &y0) * (BigInt::from(i) - &x0), &x1 - &x0)
    };
    let (lo, hi) = (peak.min(tail), peak.max(tail));
    let mut best: Option<(usize, BigRational)> = None;
    for i in lo..=hi {
        let gap = line_at(i) - BigRational::from(BigInt::from(c[i]));
        if best.as_ref().map_or(true, |(_, b)| gap > *b) {
            best = Some((i, gap));
        }
    }
    best.map(|(i, _)| i as u8)
}

/// Random histograms of varied shape: sparse spikes, dense noise, bimodal
/// bumps and mirrored (tie-prone) layouts.
pub fn random_histogram(rng: &mut ChaCha8Rng) -> Histogram {
    let mut bins = [0u64; 256];
    match rng.gen_range(0..4) {
        0 => {
            for _ in 0..rng.gen_range(2..8) {
                bins[rng.gen_range(0..256)] += rng.gen_range(1..1000);
            }
        }
        1 => {
            for b in bins.iter_mut() {
                if rng.gen_bool(0.6) {
                    *b = rng.gen_range(0..5000);
                }
            }
        }
        2 => {
            for _ in 0..2 {
                let (mu, sigma, mass) = (rng.gen_range(0.0..256.0), rng.gen_range(2.0..30.0), rng.gen_range(100.0..1e6));
                for (i, b) in bins.iter_mut().enumerate() {
                    let z = (i as f64 - mu) / sigma;
                    *b += (mass * (-0.5 * z * z).exp()).round() as u64;
                }
            }
        }
        _ => {
            let lo = rng.gen_range(0..128);
            let hi = 255 - rng.gen_range(0..128);
            for _ in 0..rng.gen_range(1..5) {
                let (i, v) = (rng.gen_range(lo..=hi), rng.gen_range(1..50));
                bins[i] += v;
                bins[lo + hi - i] += v;
            }
        }
    }
    if bins.iter().filter(|&&b| b > 0).count() < 2 {
        bins[0] += 1;
        bins[255] += 1;
    }
    Histogram::from_counts(bins)
}

fn orient(a: Pixel, b: Pixel, c: Pixel) -> i64 {
    let (ar, ac) = (a.row as i64, a.col as i64);
    (b.row as i64 - ar) * (c.col as i64 - ac) - (b.col as i64 - ac) * (c.row as i64 - ar)
}

/// Hull by half-planes: `p -> q` is a hull edge when no point lies to its
/// right and every collinear point lies on the segment. Vertices are reported
/// by the first contour index of their pixel, counter-clockwise from the
/// smallest index.
pub fn hull_oracle(contour: &Contour) -> Vec<usize> {
    let pts = contour.points();
    let mut first: Vec<(Pixel, usize)> = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        if !first.iter().any(|&(q, _)| q == p) {
            first.push((p, i));
        }
    }
    if first.len() <= 2 {
        let mut idx: Vec<usize> = first.iter().map(|&(_, i)| i).collect();
        idx.sort_unstable();
        return idx;
    }
    let on_segment = |p: Pixel, q: Pixel, r: Pixel| {
        let d = |a: usize, b: usize| a as i64 - b as i64;
        let t = d(r.row, p.row) * d(q.row, p.row) + d(r.col, p.col) * d(q.col, p.col);
        let len = d(q.row, p.row).pow(2) + d(q.col, p.col).pow(2);
        (0..=len).contains(&t)
    };
    let mut next: Vec<Option<usize>> = vec![None; first.len()];
    for (a, &(p, _)) in first.iter().enumerate() {
        for (b, &(q, _)) in first.iter().enumerate() {
            if a == b {
                continue;
            }
            let is_edge = first.iter().all(|&(r, _)| {
                let o = orient(p, q, r);
                o > 0 || (o == 0 && on_segment(p, q, r))
            });
            if is_edge {
                next[a] = Some(b);
            }
        }
    }
    let start = (0..first.len()).filter(|&a| next[a].is_some()).min_by_key(|&a| first[a].1).unwrap();
    let mut hull = vec![first[start].1];
    let mut cur = next[start].unwrap();
    while cur != start {
        hull.push(first[cur].1);
        cur = next[cur].unwrap();
    }
    hull
}

/// Per hull edge, the first contour point (walking forward from the edge
/// start) at maximal perpendicular distance, with that distance.
pub fn defects_oracle(contour: &Contour, hull: &[usize]) -> Vec<(usize, usize, usize, f64)> {
    let pts = contour.points();
    let n = pts.len();
    let mut out = Vec::new();
    if hull.len() < 2 {
        return out;
    }
    for k in 0..hull.len() {
        let (s, e) = (hull[k], hull[(k + 1) % hull.len()]);
        let (a, b) = (pts[s], pts[e]);
        let len = ((b.row as f64 - a.row as f64).powi(2) + (b.col as f64 - a.col as f64).powi(2)).sqrt();
        let mut best: Option<(usize, i64)> = None;
        let mut j = (s + 1) % n;
        while j != e {
            let area = orient(a, b, pts[j]);
            match best {
                Some((_, d)) if d >= area => {}
                _ => best = Some((j, area)),
            }
            j = (j + 1) % n;
        }
        if let Some((j, area)) = best {
            out.push((s, e, j, area.max(0) as f64 / len));
        }
    }
    out
}

/// Uniform noise mask.
pub fn random_mask(rng: &mut ChaCha8Rng, height: usize, width: usize, density: f64) -> BinaryMask {
    BinaryMask::from_fn(width, height, |_, _| rng.gen_bool(density))
}

/// Union of a few random discs, ellipses and bars, reduced to its largest
/// 8-connected component.
pub fn random_blob(rng: &mut ChaCha8Rng, height: usize, width: usize) -> BinaryMask {
    let (h, w) = (height as f64, width as f64);
    let shapes: Vec<(f64, f64, f64, f64, f64)> = (0..rng.gen_range(1..7))
        .map(|_| {
            (
                rng.gen_range(0.2 * h..0.8 * h),
                rng.gen_range(0.2 * w..0.8 * w),
                rng.gen_range(2.0..0.3 * h),
                rng.gen_range(1.0..0.15 * w),
                rng.gen_range(0.0..std::f64::consts::PI),
            )
        })
        .collect();
    let full = BinaryMask::from_fn(width, height, |r, c| {
        shapes.iter().any(|&(cr, cc, a, b, th)| {
            let (dr, dc) = (r as f64 - cr, c as f64 - cc);
            let u = dr * th.cos() + dc * th.sin();
            let v = -dr * th.sin() + dc * th.cos();
            (u / a).powi(2) + (v / b).powi(2) <= 1.0
        })
    });
    let largest = connected_components(&full, 1).into_iter().max_by_key(|c| c.area());
    let mut out = BinaryMask::new(width, height);
    if let Some(comp) = largest {
        for p in comp.pixels {
            out.set(p.row, p.col, true);
        }
    }
    out
}

/// Masks with several separate blobs, for the full detector.
pub fn random_scene(rng: &mut ChaCha8Rng, height: usize, width: usize) -> BinaryMask {
    let mut mask = BinaryMask::new(width, height);
    for _ in 0..rng.gen_range(1..4) {
        let blob = random_blob(rng, height, width);
        for p in blob.ones() {
            mask.set(p.row, p.col, true);
        }
    }
    mask
}
