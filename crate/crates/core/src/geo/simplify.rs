//! Polyline simplification: an optional radial-distance pre-pass followed
//! by Douglas-Peucker, both comparing squared distances against the
//! squared tolerance. Results are reported as indices into the input so
//! callers can carry timestamps and values along.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

fn sq_dist(a: Point, b: Point) -> f64 {
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    dx * dx + dy * dy
}

/// Squared distance from `p` to the segment `a`-`b` (not the infinite line).
pub fn sq_segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let (mut x, mut y) = (a.x, a.y);
    let (dx, dy) = (b.x - x, b.y - y);
    if dx != 0.0 || dy != 0.0 {
        let t = ((p.x - x) * dx + (p.y - y) * dy) / (dx * dx + dy * dy);
        if t > 1.0 {
            x = b.x;
            y = b.y;
        } else if t > 0.0 {
            x += dx * t;
            y += dy * t;
        }
    }
    sq_dist(p, Point::new(x, y))
}

/// Keeps a point only when it is farther than the tolerance from the
/// previously kept one. The last point is always kept.
fn radial(points: &[Point], idx: &[usize], sq_tol: f64) -> Vec<usize> {
    let mut out = vec![idx[0]];
    let mut prev = points[idx[0]];
    for &i in &idx[1..] {
        if sq_dist(points[i], prev) > sq_tol {
            out.push(i);
            prev = points[i];
        }
    }
    let last = *idx.last().unwrap_or(&0);
    if *out.last().unwrap_or(&0) != last {
        out.push(last);
    }
    out
}

fn douglas_peucker(points: &[Point], idx: &[usize], sq_tol: f64) -> Vec<usize> {
    let n = idx.len();
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0usize, n - 1)];
    while let Some((first, last)) = stack.pop() {
        let mut max = sq_tol;
        let mut index = None;
        for i in first + 1..last {
            let d = sq_segment_dist(points[idx[i]], points[idx[first]], points[idx[last]]);
            if d > max {
                index = Some(i);
                max = d;
            }
        }
        if let Some(i) = index {
            keep[i] = true;
            if i - first > 1 {
                stack.push((first, i));
            }
            if last - i > 1 {
                stack.push((i, last));
            }
        }
    }
    idx.iter().zip(keep).filter(|(_, k)| *k).map(|(&i, _)| i).collect()
}

/// Indices of the points kept. A tolerance of zero keeps every point.
/// With `high_quality` the radial pre-pass is skipped.
pub fn simplify_indices(points: &[Point], tolerance: f64, high_quality: bool) -> Vec<usize> {
    let all: Vec<usize> = (0..points.len()).collect();
    if points.len() <= 2 || !(tolerance > 0.0) {
        return all;
    }
    let sq_tol = tolerance * tolerance;
    let idx = if high_quality { all } else { radial(points, &all, sq_tol) };
    douglas_peucker(points, &idx, sq_tol)
}

pub fn simplify(points: &[Point], tolerance: f64, high_quality: bool) -> Vec<Point> {
    simplify_indices(points, tolerance, high_quality)
        .into_iter()
        .map(|i| points[i])
        .collect()
}

/// Chart plotting area and simplification settings, in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartBudget {
    pub width_px: f64,
    pub height_px: f64,
    pub tolerance_px: f64,
    pub high_quality: bool,
    /// If the first pass keeps more points, the tolerance is doubled
    /// until it does not.
    pub max_points: Option<usize>,
}

impl ChartBudget {
    /// 0.25 px tolerance, 2000-point cap, 150 px tall. The radial pre-pass
    /// is off: with it, a larger tolerance can keep more points.
    pub fn new(width_px: f64) -> Self {
        Self {
            width_px,
            height_px: 150.0,
            tolerance_px: 0.25,
            high_quality: true,
            max_points: Some(2000),
        }
    }
}

/// Indices of a time series to draw at the given chart size.
///
/// Time maps to x over the series' span and value to y over its finite
/// range. Runs of non-finite values are kept as gaps (their first and
/// last points); each finite run is simplified on its own.
pub fn simplify_chart(timestamps: &[u64], values: &[f64], budget: &ChartBudget) -> Vec<usize> {
    let n = timestamps.len().min(values.len());
    if n <= 2 || !(budget.tolerance_px > 0.0) {
        return (0..n).collect();
    }
    let (t0, t1) = (timestamps[0], timestamps[n - 1]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values[..n].iter().filter(|v| v.is_finite()) {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    let sx = if t1 > t0 { budget.width_px / (t1 - t0) as f64 } else { 0.0 };
    let sy = if hi > lo { budget.height_px / (hi - lo) } else { 0.0 };
    let points: Vec<Point> = (0..n)
        .map(|i| Point::new((timestamps[i] - t0) as f64 * sx, (values[i] - lo) * sy))
        .collect();

    let mut runs: Vec<(usize, usize, bool)> = Vec::new();
    for i in 0..n {
        let finite = values[i].is_finite();
        match runs.last_mut() {
            Some((_, end, f)) if *f == finite => *end = i,
            _ => runs.push((i, i, finite)),
        }
    }

    let mut tolerance = budget.tolerance_px;
    loop {
        let mut kept = Vec::new();
        for &(start, end, finite) in &runs {
            if !finite {
                kept.push(start);
                if end > start {
                    kept.push(end);
                }
                continue;
            }
            let local = simplify_indices(&points[start..=end], tolerance, budget.high_quality);
            kept.extend(local.into_iter().map(|i| i + start));
        }
        let over = budget.max_points.is_some_and(|m| kept.len() > m);
        if !over || tolerance > 1e12 {
            return kept;
        }
        tolerance *= 2.0;
    }
}
