use num_bigint::BigUint;

use super::{Histogram, SegmentationError, Thresholder};

/// Between-class variance maximization.
#[derive(Debug, Clone, Copy, Default)]
pub struct Otsu;

/// Zack's triangle method.
#[derive(Debug, Clone, Copy, Default)]
pub struct Triangle;

/// A constant bin index, independent of the histogram.
#[derive(Debug, Clone, Copy)]
pub struct Fixed(pub u8);

impl Thresholder for Otsu {
    fn name(&self) -> String {
        "otsu".into()
    }

    fn threshold(&self, hist: &Histogram) -> Result<u8, SegmentationError> {
        otsu_threshold(hist)
    }
}

impl Thresholder for Triangle {
    fn name(&self) -> String {
        "triangle".into()
    }

    fn threshold(&self, hist: &Histogram) -> Result<u8, SegmentationError> {
        triangle_threshold(hist)
    }
}

impl Thresholder for Fixed {
    fn name(&self) -> String {
        format!("fixed:{}", self.0)
    }

    fn threshold(&self, _hist: &Histogram) -> Result<u8, SegmentationError> {
        Ok(self.0)
    }
}

fn require_two_bins(hist: &Histogram) -> Result<(), SegmentationError> {
    match hist.nonzero_bins() {
        n if n < 2 => Err(SegmentationError::DegenerateHistogram { nonzero: n }),
        _ => Ok(()),
    }
}

/// Returns the `t` maximizing `w0 * w1 * (mu0 - mu1)^2` where class 0 is bins
/// `<= t`. Ties resolve to the smallest `t`.
///
/// With class counts `n0, n1`, first moments `s0`, total count `n` and total
/// moment `s`, the variance is proportional to `(n*s0 - n0*s)^2 / (n0*n1)`.
/// Candidates are compared by cross-multiplication in exact integers.
pub fn otsu_threshold(hist: &Histogram) -> Result<u8, SegmentationError> {
    require_two_bins(hist)?;
    let counts = hist.counts();
    let total: u128 = counts.iter().map(|&c| u128::from(c)).sum();
    let moment: u128 = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| i as u128 * u128::from(c))
        .sum();

    // (numerator, denominator) of the best score so far
    let mut best: Option<(u8, BigUint, BigUint)> = None;
    let (mut n0, mut s0) = (0u128, 0u128);
    for t in 0..255usize {
        n0 += u128::from(counts[t]);
        s0 += t as u128 * u128::from(counts[t]);
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let (a, b) = (total * s0, n0 * moment);
        let diff = BigUint::from(a.abs_diff(b));
        let num = &diff * &diff;
        let den = BigUint::from(n0) * BigUint::from(n1);
        let better = match &best {
            None => true,
            Some((_, bn, bd)) => &num * bd > bn * &den,
        };
        if better {
            best = Some((t as u8, num, den));
        }
    }
    Ok(best.map(|(t, _, _)| t).expect("two occupied bins give a split"))
}

/// Draws a line from the histogram peak to the farther occupied tail and
/// returns the bin lying farthest below it. Peak ties go to the smaller bin,
/// equally distant tails to the upper one, distance ties to the smaller bin.
pub fn triangle_threshold(hist: &Histogram) -> Result<u8, SegmentationError> {
    require_two_bins(hist)?;
    let counts = hist.counts();
    let peak = counts
        .iter()
        .enumerate()
        .fold(0usize, |best, (i, &c)| if c > counts[best] { i } else { best });
    let first = counts.iter().position(|&c| c > 0).expect("non-empty");
    let last = counts.iter().rposition(|&c| c > 0).expect("non-empty");
    let tail = if last - peak >= peak - first { last } else { first };

    let (x0, y0) = (peak as i128, i128::from(counts[peak]));
    let (x1, y1) = (tail as i128, i128::from(counts[tail]));
    let dx = x1 - x0;
    let (lo, hi) = (peak.min(tail), peak.max(tail));

    // (line height - h_i) * |dx|, proportional to the perpendicular distance
    let below = |i: usize| -> i128 {
        let h = i128::from(counts[i]);
        ((y1 - y0) * (i as i128 - x0) + (y0 - h) * dx) * dx.signum()
    };
    let mut best = lo;
    let mut best_key = below(lo);
    for i in lo + 1..=hi {
        let key = below(i);
        if key > best_key {
            best = i;
            best_key = key;
        }
    }
    Ok(best as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(pairs: &[(usize, u64)]) -> Histogram {
        let mut bins = [0u64; 256];
        for &(i, c) in pairs {
            bins[i] += c;
        }
        Histogram::from_counts(bins)
    }

    #[test]
    fn otsu_two_spikes_splits_at_lower_spike() {
        let t = otsu_threshold(&hist(&[(10, 500), (200, 500)])).unwrap();
        assert!((10..200).contains(&(t as usize)));
        assert_eq!(t, 10);
    }

    #[test]
    fn otsu_degenerate_is_error() {
        let err = otsu_threshold(&hist(&[(7, 100)])).unwrap_err();
        assert_eq!(err, SegmentationError::DegenerateHistogram { nonzero: 1 });
        assert!(err.to_string().contains("no threshold exists"));
        assert!(otsu_threshold(&hist(&[])).is_err());
    }

    #[test]
    fn otsu_exact_tie_prefers_smaller_threshold() {
        // t=10 and t=20 both score (n1*s0 - n0*s1)^2/(n0*n1) = 450
        assert_eq!(otsu_threshold(&hist(&[(10, 1), (20, 1), (30, 1)])).unwrap(), 10);
    }

    #[test]
    fn triangle_degenerate_is_error() {
        assert!(triangle_threshold(&hist(&[(3, 9)])).is_err());
    }

    #[test]
    fn triangle_two_bins_picks_bin_next_to_peak() {
        assert_eq!(triangle_threshold(&hist(&[(40, 100), (180, 10)])).unwrap(), 41);
        // equal heights: the peak is the lower bin and every gap bin ties
        assert_eq!(triangle_threshold(&hist(&[(40, 10), (180, 10)])).unwrap(), 41);
        // adjacent bins: both candidates lie on the line
        assert_eq!(triangle_threshold(&hist(&[(40, 10), (41, 3)])).unwrap(), 40);
    }

    #[test]
    fn triangle_left_tail() {
        // peak at the top, tail toward zero: the knee sits next to the peak
        let t = triangle_threshold(&hist(&[(5, 1), (200, 1000), (201, 10)])).unwrap();
        assert_eq!(t, 199);
    }

    #[test]
    fn fixed_ignores_histogram() {
        assert_eq!(Fixed(77).threshold(&hist(&[])).unwrap(), 77);
        assert_eq!(Fixed(77).name(), "fixed:77");
    }
}
